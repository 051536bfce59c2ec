//! The compactified time–radius domain: boundary-defining functions
//! (bdfs) for each face, regime classification, smooth cutoffs, and the
//! three-piece energy partition of unity.
//!
//! Coordinates: ρ = 1/r with r ≥ 1 (so ρ ≤ 1), and t ≥ 0.  The faces are
//!
//! * `kf`   — the long-time face, ϱ = 1/(1 + tρ²),
//! * `parF` — the parabolic face, ϱ = ρ + 1/(tρ)  (t > 0),
//! * `dilF` — the dilation face, ϱ = tρ²/(1 + tρ²),
//! * `nf`   — the null/spatial face, chart-local ϱ = 1/(1+t), meaningful
//!   only where r/t is large,
//! * `Sigma` — the initial surface, ϱ = t/(1+t).
//!
//! These satisfy `t = ϱ_dilF⁻¹ · ϱ_parF⁻² · ϱ_kf⁻¹` identically.
//!
//! All smooth transitions are built from the C^∞ bump
//! `b(x) = exp(1 − 1/(1−x²))`: [`smooth_step`] is the normalized integral
//! of b, and [`plateau_step`] is the mollified ramp (b-smoothed trapezoid
//! profile) whose third derivative stays below ~65 on the unit interval —
//! small enough that even the narrowest partition transition keeps its
//! third difference quotients under 10³.

use crate::{Complex64, OscError};
use std::sync::OnceLock;

/// Default partition thresholds: the low piece lives in σ ≤ SIGMA0 (and
/// σr ≤ LAMBDA0), the high piece in σ ≥ SIGMA1.
pub const SIGMA0: f64 = 0.5;
pub const SIGMA1: f64 = 1.0;
pub const LAMBDA0: f64 = 4.0;

/// The C^∞ bump `exp(1 − 1/(1−x²))` on (−1,1), zero outside; b(0) = 1.
pub fn bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    }
}

fn gl96() -> &'static Vec<(f64, f64)> {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| crate::oscquad::gauss_legendre(96))
}

/// (∫_{−1}^w b(u) du, ∫_{−1}^w u·b(u) du) by Gauss–Legendre.
fn bump_moments(w: f64) -> (f64, f64) {
    if w <= -1.0 {
        return (0.0, 0.0);
    }
    let w = w.min(1.0);
    let half = 0.5 * (w + 1.0);
    let mid = 0.5 * (w - 1.0);
    let mut m0 = 0.0;
    let mut m1 = 0.0;
    for &(x, wt) in gl96().iter() {
        let u = mid + half * x;
        let bv = bump(u);
        m0 += wt * bv;
        m1 += wt * u * bv;
    }
    (half * m0, half * m1)
}

fn bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| bump_moments(1.0).0)
}

/// The normalized bump-integral step: 0 for y ≤ 0, 1 for y ≥ 1, strictly
/// increasing between, C^∞.  `smooth_step(y) = ∫_{−1}^{2y−1} b / ∫_{−1}^{1} b`.
pub fn smooth_step(y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else if y >= 1.0 {
        1.0
    } else {
        bump_moments(2.0 * y - 1.0).0 / bump_mass()
    }
}

/// Shoulder width of the plateau step (fraction of the unit interval
/// spent in each rounded corner).
const PLATEAU_DELTA: f64 = 0.45;

/// `T(y) = ∫₀^y smooth_step`, by parts:
/// `T(y) = y·S(y) − (J₁(2y−1) + J₀(2y−1)) / (2∫b)`.
fn step_antiderivative(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    if y >= 1.0 {
        // T(1) = 1/2 exactly (S is symmetric about y = 1/2).
        return 0.5 + (y - 1.0);
    }
    let (j0, j1) = bump_moments(2.0 * y - 1.0);
    y * smooth_step(y) - (j1 + j0) / (2.0 * bump_mass())
}

/// The mollified-ramp step: 0 at 0, 1 at 1, C^∞, monotone, with
/// derivative equal to the constant 1/(1−δ) on the middle plateau
/// [δ, 1−δ] and rising/falling through scaled copies of [`smooth_step`]
/// on the shoulders.  Its third derivative stays below ~65, an order of
/// magnitude flatter than the plain bump-integral step allows after the
/// narrow-band rescalings used by the partition.
pub fn plateau_step(x: f64) -> f64 {
    let d = PLATEAU_DELTA;
    let h = 1.0 / (1.0 - d);
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else if x <= d {
        h * d * step_antiderivative(x / d)
    } else if x < 1.0 - d {
        h * (0.5 * d + x - d)
    } else {
        1.0 - h * d * step_antiderivative((1.0 - x) / d)
    }
}

/// Smooth time cutoff χ: ≡ 1 for t ≤ 1, ≡ 0 for t ≥ 2.
pub fn chi_time_cutoff(t: f64) -> f64 {
    1.0 - smooth_step(t - 1.0)
}

/// Smooth even window ψ: ≡ 1 for |x| ≤ 1/4, supported in (−1/2, 1/2).
pub fn psi_window(x: f64) -> f64 {
    1.0 - smooth_step((x.abs() - 0.25) / 0.25)
}

/// A chart point with all boundary-defining functions evaluated.
#[derive(Debug, Clone, Copy)]
pub struct ChartPoint {
    pub t: f64,
    pub r: f64,
    pub bdf_kf: f64,
    pub bdf_parf: f64,
    pub bdf_dilf: f64,
    pub bdf_nf: f64,
    pub bdf_sigma: f64,
}

/// Evaluates the boundary-defining functions at (t, r).
///
/// At t = 0 the limits are taken: ϱ_kf = 1, ϱ_dilF = 0, ϱ_parF = ∞.
pub fn chart(t: f64, r: f64) -> Result<ChartPoint, OscError> {
    if !(r >= 1.0) {
        return Err(OscError::Domain(format!("need r >= 1 (got {r})")));
    }
    if !(t >= 0.0) {
        return Err(OscError::Domain(format!("need t >= 0 (got {t})")));
    }
    let rho = 1.0 / r;
    let trho2 = t * rho * rho;
    let bdf_kf = 1.0 / (1.0 + trho2);
    let bdf_parf = if t > 0.0 {
        rho + 1.0 / (t * rho)
    } else {
        f64::INFINITY
    };
    let bdf_dilf = trho2 / (1.0 + trho2);
    let bdf_nf = 1.0 / (1.0 + t);
    let bdf_sigma = t / (1.0 + t);
    Ok(ChartPoint {
        t,
        r,
        bdf_kf,
        bdf_parf,
        bdf_dilf,
        bdf_nf,
        bdf_sigma,
    })
}

/// Face labels of the compactified domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Face {
    Kf,
    ParF,
    DilF,
    Nf,
    Sigma,
    Interior,
}

impl std::fmt::Display for Face {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Face::Kf => "kf",
            Face::ParF => "parF",
            Face::DilF => "dilF",
            Face::Nf => "nf",
            Face::Sigma => "Sigma",
            Face::Interior => "interior",
        };
        write!(f, "{s}")
    }
}

impl Face {
    pub fn parse(s: &str) -> Result<Face, OscError> {
        match s {
            "kf" => Ok(Face::Kf),
            "parF" | "parf" => Ok(Face::ParF),
            "dilF" | "dilf" => Ok(Face::DilF),
            "nf" => Ok(Face::Nf),
            "Sigma" | "sigma" => Ok(Face::Sigma),
            "interior" => Ok(Face::Interior),
            other => Err(OscError::Domain(format!("unknown face '{other}'"))),
        }
    }
}

/// Picks the face whose bdf is smallest among those whose chart is valid
/// at this point, if that bdf is below the threshold; otherwise
/// `Interior`.  Ties break in the fixed order kf, parF, dilF, nf, Sigma.
///
/// Chart validity: the dilF chart needs t/r bounded below (we require
/// t/r ≥ 0.01), and the nf chart is local to large r/t (we require
/// r/t ≥ 10); nothing else is gated.
pub fn classify(p: &ChartPoint, threshold: f64) -> Result<Face, OscError> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(OscError::Domain(format!(
            "threshold must lie in (0,1), got {threshold}"
        )));
    }
    let dilf_valid = p.t / p.r >= 0.01;
    let nf_valid = p.t == 0.0 || p.r / p.t >= 10.0;
    let candidates = [
        (Face::Kf, p.bdf_kf, true),
        (Face::ParF, p.bdf_parf, true),
        (Face::DilF, p.bdf_dilf, dilf_valid),
        (Face::Nf, p.bdf_nf, nf_valid),
        (Face::Sigma, p.bdf_sigma, true),
    ];
    let mut best: Option<(Face, f64)> = None;
    for (face, value, valid) in candidates {
        if !valid {
            continue;
        }
        match best {
            // Strict inequality keeps the earlier face on ties.
            Some((_, b)) if value < b => best = Some((face, value)),
            None => best = Some((face, value)),
            _ => {}
        }
    }
    Ok(match best {
        Some((face, value)) if value < threshold => face,
        _ => Face::Interior,
    })
}

/// Three-piece partition of unity in energy: returns
/// `(w_low, w_mid, w_high)` with the sum identically 1
/// (`w_mid := 1 − w_low − w_high`).
///
/// * `w_low  = A(σ)·B(σr)` with `A = 1 − plateau_step(σ/Σ₀)` and
///   `B = 1 − plateau_step((σr − Λ₀/2)/(Λ₀/2))`: supported in
///   {σ ≤ Σ₀} ∩ {σr ≤ Λ₀}.
/// * `w_high = plateau_step((σ − Σ₁)/Σ₁)`: supported in {σ ≥ Σ₁}.
/// * `w_mid` fills the complement; it vanishes where w_low = 1 (σ → 0
///   with σr small) and where w_high = 1 (σ ≥ 2Σ₁).
pub fn partition_weights(sigma: f64, r: f64) -> (f64, f64, f64) {
    let a = 1.0 - plateau_step(sigma / SIGMA0);
    let b = 1.0 - plateau_step((sigma * r - 0.5 * LAMBDA0) / (0.5 * LAMBDA0));
    let w_low = a * b;
    let w_high = plateau_step((sigma - SIGMA1) / SIGMA1);
    let w_mid = 1.0 - w_low - w_high;
    (w_low, w_mid, w_high)
}

/// Complex-valued helper: 1 as a complex number, for cutoff algebra.
pub fn as_complex(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
