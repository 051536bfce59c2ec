//! Polyhomogeneous series values: terms, truncation, evaluation, and
//! amplitude profiles with their boundary expansions.
//!
//! A series represents Σ v_{j,k} x^j log^k x in one boundary variable
//! `x → 0⁺`, with coefficients that are either constants or numeric
//! closures over a remaining parameter (e.g. the other coordinate of an
//! amplitude, with an opaque angular index along for the ride).  The
//! natural logarithm is used throughout.
//!
//! [`PhgProfile`] packages an amplitude φ(σ, r) together with its two
//! boundary expansions (σ → 0 at fixed r, and 1/r → 0 at fixed λ = σr),
//! optional analytic continuation data in σ, and optional closed-form
//! σ-derivatives — everything the per-regime expansion evaluators and the
//! quadrature oracles consume.

use crate::special::branch;
use crate::{Complex64, OscError};
use std::sync::Arc;

/// Parameter point a coefficient function is evaluated at: the remaining
/// variable of the amplitude plus an opaque angular index (default single
/// point).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamPoint {
    pub value: f64,
    pub theta: usize,
}

impl ParamPoint {
    pub fn at(value: f64) -> Self {
        ParamPoint { value, theta: 0 }
    }
}

/// A series coefficient: a constant or a numeric closure over the
/// parameter point.  Closures must be safe for concurrent invocation.
#[derive(Clone)]
pub enum Coeff {
    Const(Complex64),
    Fn(Arc<dyn Fn(ParamPoint) -> Complex64 + Send + Sync>),
}

impl Coeff {
    pub fn real(x: f64) -> Self {
        Coeff::Const(Complex64::new(x, 0.0))
    }

    pub fn eval(&self, p: ParamPoint) -> Complex64 {
        match self {
            Coeff::Const(c) => *c,
            Coeff::Fn(f) => f(p),
        }
    }
}

impl std::fmt::Debug for Coeff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coeff::Const(c) => write!(f, "Const({c})"),
            Coeff::Fn(_) => write!(f, "Fn(..)"),
        }
    }
}

/// One expansion term `coeff · x^j log^k x`.
#[derive(Debug, Clone)]
pub struct PhgTerm {
    pub j: Complex64,
    pub k: u32,
    pub coeff: Coeff,
}

impl PhgTerm {
    pub fn new(j: Complex64, k: u32, coeff: Coeff) -> Self {
        PhgTerm { j, k, coeff }
    }

    pub fn constant(j: f64, k: u32, value: Complex64) -> Self {
        PhgTerm {
            j: Complex64::new(j, 0.0),
            k,
            coeff: Coeff::Const(value),
        }
    }
}

/// A truncated polyhomogeneous expansion with a conormal remainder order.
///
/// `remainder_order = ∞` means the listed terms are followed by faster
/// decay than any power (Schwartz-type remainder).
#[derive(Debug, Clone)]
pub struct PhgSeries {
    terms: Vec<PhgTerm>,
    pub remainder_order: f64,
    pub variable: String,
}

impl PhgSeries {
    /// Builds a series, sorting terms by (Re j, Im j, k) and validating
    /// that term keys are distinct and below the remainder order.
    pub fn new(
        variable: impl Into<String>,
        terms: Vec<PhgTerm>,
        remainder_order: f64,
    ) -> Result<Self, OscError> {
        let mut terms = terms;
        terms.sort_by(|a, b| {
            a.j.re
                .partial_cmp(&b.j.re)
                .unwrap()
                .then(a.j.im.partial_cmp(&b.j.im).unwrap())
                .then(a.k.cmp(&b.k))
        });
        for w in terms.windows(2) {
            if (w[0].j - w[1].j).norm() <= 1e-12 && w[0].k == w[1].k {
                return Err(OscError::Domain(format!(
                    "duplicate series term key (j={}, k={})",
                    w[0].j, w[0].k
                )));
            }
        }
        if remainder_order.is_finite() {
            for t in &terms {
                if t.j.re > remainder_order + 1e-12 {
                    return Err(OscError::Domain(format!(
                        "term exponent {} exceeds remainder order {remainder_order}",
                        t.j
                    )));
                }
            }
        }
        Ok(PhgSeries {
            terms,
            remainder_order,
            variable: variable.into(),
        })
    }

    /// An empty series with infinite remainder order (Schwartz behavior).
    pub fn schwartz(variable: impl Into<String>) -> Self {
        PhgSeries {
            terms: vec![],
            remainder_order: f64::INFINITY,
            variable: variable.into(),
        }
    }

    pub fn terms(&self) -> &[PhgTerm] {
        &self.terms
    }

    /// Keeps terms with Re j ≤ gamma; the remainder order becomes gamma.
    pub fn truncate(&self, gamma: f64) -> Result<PhgSeries, OscError> {
        if gamma > self.remainder_order {
            return Err(OscError::Domain(format!(
                "truncation order {gamma} exceeds the series remainder order {}",
                self.remainder_order
            )));
        }
        Ok(PhgSeries {
            terms: self
                .terms
                .iter()
                .filter(|t| t.j.re <= gamma + 1e-12)
                .cloned()
                .collect(),
            remainder_order: gamma,
            variable: self.variable.clone(),
        })
    }

    /// Σ coeff(params) · x^j · (ln x)^k over the terms, for x > 0.
    pub fn eval(&self, x: f64, params: ParamPoint) -> Result<Complex64, OscError> {
        if x <= 0.0 {
            return Err(OscError::Domain(format!(
                "series evaluation requires x > 0, got {x}"
            )));
        }
        let lx = x.ln();
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            acc += t.coeff.eval(params) * branch::real_pow(x, t.j) * lx.powi(t.k as i32);
        }
        Ok(acc)
    }

    /// Multiplies the series by `x^{j0} log^{k0} x`.  Only k0 = 0 is
    /// supported (log-power multiplication would require re-expansion the
    /// pipeline never needs).
    pub fn monomial_multiply(&self, j0: Complex64, k0: u32) -> Result<PhgSeries, OscError> {
        if k0 > 0 {
            return Err(OscError::Unsupported(
                "monomial_multiply with a log factor (k0 > 0) is not supported".into(),
            ));
        }
        Ok(PhgSeries {
            terms: self
                .terms
                .iter()
                .map(|t| PhgTerm::new(t.j + j0, t.k, t.coeff.clone()))
                .collect(),
            remainder_order: self.remainder_order + j0.re,
            variable: self.variable.clone(),
        })
    }

    /// CSV dump at a fixed parameter point: header plus one row
    /// `re_j,im_j,k,re_coeff,im_coeff` per term, in series order.
    pub fn to_csv(&self, p: ParamPoint) -> String {
        let mut out = String::from("re_j,im_j,k,re_coeff,im_coeff\n");
        for t in &self.terms {
            let c = t.coeff.eval(p);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                crate::fmt_g15(t.j.re),
                crate::fmt_g15(t.j.im),
                t.k,
                crate::fmt_g15(c.re),
                crate::fmt_g15(c.im)
            ));
        }
        out
    }
}

/// How an amplitude decays as σ → ∞ — drives quadrature tail handling.
#[derive(Debug, Clone, Copy)]
pub enum DecayClass {
    /// |φ(σ,r)| ≤ scale · e^{−rate·σ²} for σ ≥ 1.
    Gaussian { rate: f64, scale: f64 },
    /// φ vanishes identically for σ above the support bound.
    Compact { upper: f64 },
}

/// A simple pole of φ in the complex σ-plane at fixed r.
#[derive(Clone)]
pub struct PoleSpec {
    /// Pole location σ₀(r).
    pub location: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    /// Residue of φ(·, r) at σ₀(r).
    pub residue: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
}

impl std::fmt::Debug for PoleSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PoleSpec(..)")
    }
}

/// An amplitude φ(σ, r) with its boundary expansions and the analytic
/// data the quadrature engines can exploit.
#[derive(Clone)]
pub struct PhgProfile {
    /// Name used by the CLI and in reports.
    pub name: String,
    /// Pointwise evaluation φ(σ, r), σ ≥ 0, r ≥ 1.
    pub evaluate: Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>,
    /// Analytic continuation in σ at fixed r, when φ extends.
    pub evaluate_complex: Option<Arc<dyn Fn(Complex64, f64) -> Complex64 + Send + Sync>>,
    /// Expansion as σ → 0 at fixed r; coefficients are functions of r.
    pub sigma_expansion: PhgSeries,
    /// Expansion as ρ = 1/r → 0 at fixed λ = σr; coefficients are
    /// functions of λ.
    pub r_expansion: PhgSeries,
    /// σ-interval outside which φ vanishes, if compactly supported.
    pub support_hint: Option<(f64, f64)>,
    /// Large-σ decay class.
    pub decay: DecayClass,
    /// Optional exact n-th σ-derivative ∂σⁿ φ(σ, r).
    pub sigma_derivative: Option<Arc<dyn Fn(u32, f64, f64) -> Complex64 + Send + Sync>>,
    /// Simple poles of φ(·, r) in the complex σ-plane.
    pub poles: Vec<PoleSpec>,
}

impl std::fmt::Debug for PhgProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PhgProfile({})", self.name)
    }
}

impl PhgProfile {
    /// The Gaussian amplitude φ(σ, r) = e^{−σ²}, independent of r.
    ///
    /// σ-expansion: Σ (−1)ⁿ σ^{2n}/n!.  At fixed λ = σr the amplitude is
    /// e^{−λ²ρ²} with ρ-expansion Σ (−1)ⁿ λ^{2n} ρ^{2n}/n!.
    pub fn gaussian() -> PhgProfile {
        let order = 5usize;
        let sigma_terms: Vec<PhgTerm> = (0..order)
            .map(|n| {
                let fact: f64 = (1..=n as u32).map(|m| m as f64).product::<f64>().max(1.0);
                let c = if n % 2 == 0 { 1.0 } else { -1.0 } / fact;
                PhgTerm::constant(2.0 * n as f64, 0, Complex64::new(c, 0.0))
            })
            .collect();
        let r_terms: Vec<PhgTerm> = (0..order)
            .map(|n| {
                let fact: f64 = (1..=n as u32).map(|m| m as f64).product::<f64>().max(1.0);
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let n_c = n as i32;
                PhgTerm::new(
                    Complex64::new(2.0 * n as f64, 0.0),
                    0,
                    Coeff::Fn(Arc::new(move |p: ParamPoint| {
                        Complex64::new(sign * p.value.powi(2 * n_c) / fact, 0.0)
                    })),
                )
            })
            .collect();
        PhgProfile {
            name: "gaussian".into(),
            evaluate: Arc::new(|sigma, _r| Complex64::new((-sigma * sigma).exp(), 0.0)),
            evaluate_complex: Some(Arc::new(|sigma: Complex64, _r| (-sigma * sigma).exp())),
            sigma_expansion: PhgSeries::new("sigma", sigma_terms, 2.0 * order as f64).unwrap(),
            r_expansion: PhgSeries::new("rho", r_terms, 2.0 * order as f64).unwrap(),
            support_hint: None,
            decay: DecayClass::Gaussian {
                rate: 1.0,
                scale: 1.0,
            },
            sigma_derivative: Some(Arc::new(|n, sigma, _r| {
                Complex64::new(gaussian_derivative(n, sigma), 0.0)
            })),
            poles: vec![],
        }
    }

    /// The showcase amplitude φ(σ, r) = e^{−σ²} / (2(1 + σ²r²)).
    ///
    /// σ-expansion at fixed r: coefficients
    /// `φ_{2n}(r) = (−1)ⁿ/2 · Σ_{b=0}^{n} r^{2b}/(n−b)!`.
    /// ρ-expansion at fixed λ = σr: `φ_{2n} = (−1)ⁿ λ^{2n} / (2 n! (1+λ²))`.
    /// Simple poles at σ = ±i/r.
    pub fn example() -> PhgProfile {
        let order = 5usize;
        let sigma_terms: Vec<PhgTerm> = (0..order)
            .map(|n| {
                let n_c = n as u32;
                PhgTerm::new(
                    Complex64::new(2.0 * n as f64, 0.0),
                    0,
                    Coeff::Fn(Arc::new(move |p: ParamPoint| {
                        let r = p.value;
                        let sign = if n_c % 2 == 0 { 1.0 } else { -1.0 };
                        let mut sum = 0.0f64;
                        for b in 0..=n_c {
                            let fact: f64 =
                                (1..=(n_c - b)).map(|m| m as f64).product::<f64>().max(1.0);
                            sum += r.powi(2 * b as i32) / fact;
                        }
                        Complex64::new(sign * 0.5 * sum, 0.0)
                    })),
                )
            })
            .collect();
        let r_terms: Vec<PhgTerm> = (0..order)
            .map(|n| {
                let fact: f64 = (1..=n as u32).map(|m| m as f64).product::<f64>().max(1.0);
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let n_c = n as i32;
                PhgTerm::new(
                    Complex64::new(2.0 * n as f64, 0.0),
                    0,
                    Coeff::Fn(Arc::new(move |p: ParamPoint| {
                        let lam = p.value;
                        Complex64::new(
                            sign * lam.powi(2 * n_c) / (fact * 2.0 * (1.0 + lam * lam)),
                            0.0,
                        )
                    })),
                )
            })
            .collect();
        PhgProfile {
            name: "example".into(),
            evaluate: Arc::new(|sigma, r| {
                Complex64::new(
                    (-sigma * sigma).exp() / (2.0 * (1.0 + sigma * sigma * r * r)),
                    0.0,
                )
            }),
            evaluate_complex: Some(Arc::new(|sigma: Complex64, r| {
                (-sigma * sigma).exp()
                    / (2.0 * (Complex64::new(1.0, 0.0) + sigma * sigma * r * r))
            })),
            sigma_expansion: PhgSeries::new("sigma", sigma_terms, 2.0 * order as f64).unwrap(),
            r_expansion: PhgSeries::new("rho", r_terms, 2.0 * order as f64).unwrap(),
            support_hint: None,
            decay: DecayClass::Gaussian {
                rate: 1.0,
                scale: 0.5,
            },
            sigma_derivative: None,
            poles: vec![
                PoleSpec {
                    location: Arc::new(|r| Complex64::new(0.0, 1.0 / r)),
                    residue: Arc::new(|r| {
                        // Res_{σ=i/r} e^{−σ²}/(2r²(σ−i/r)(σ+i/r)) = −i e^{1/r²}/(4r)
                        Complex64::new(0.0, -(1.0 / (r * r)).exp() / (4.0 * r))
                    }),
                },
                PoleSpec {
                    location: Arc::new(|r| Complex64::new(0.0, -1.0 / r)),
                    residue: Arc::new(|r| {
                        Complex64::new(0.0, (1.0 / (r * r)).exp() / (4.0 * r))
                    }),
                },
            ],
        }
    }

    /// Looks a fixture profile up by its CLI name.
    pub fn by_name(name: &str) -> Result<PhgProfile, OscError> {
        match name {
            "gaussian" => Ok(PhgProfile::gaussian()),
            "example" => Ok(PhgProfile::example()),
            _ => Err(OscError::Domain(format!(
                "unknown profile '{name}' (available: gaussian, example)"
            ))),
        }
    }
}

/// dⁿ/dσⁿ e^{−σ²} = (−1)ⁿ Hₙ(σ) e^{−σ²} with Hₙ the physicists' Hermite
/// polynomials (H₀=1, H₁=2σ, H_{n+1} = 2σHₙ − 2nH_{n−1}).
pub fn gaussian_derivative(n: u32, sigma: f64) -> f64 {
    let mut h_prev = 1.0f64;
    let mut h = 2.0 * sigma;
    let hn = match n {
        0 => 1.0,
        1 => h,
        _ => {
            for m in 1..n {
                let next = 2.0 * sigma * h - 2.0 * m as f64 * h_prev;
                h_prev = h;
                h = next;
            }
            h
        }
    };
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * hn * (-sigma * sigma).exp()
}
