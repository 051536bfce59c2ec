//! Algebra of index sets ⊂ ℂ×ℕ.
//!
//! An index set prescribes which terms `x^j log^k x` may appear in a
//! polyhomogeneous expansion.  A set is stored by a finite list of
//! generators and denotes the closure
//!
//! ```text
//!     {(j + n, κ) : (j, k) generator, n ∈ ℕ, κ ≤ k},
//! ```
//!
//! i.e. each generator licenses all integer-shifted exponents with all
//! smaller log powers.  The empty set plays the role of "no expansion
//! terms at all" (Schwartz-class decay) and is preserved by every
//! operation.
//!
//! All exponent comparisons use the tolerance [`EXPONENT_TOL`]; the
//! exponents arising in practice are half-integers, far more separated
//! than the tolerance, so distinct exponents are never conflated.

use crate::{Complex64, OscError};

/// Equality tolerance for complex exponents.  All exponents used by the
/// expansion machinery are half-integers, so 1e-12 never conflates two
/// distinct ones.
pub const EXPONENT_TOL: f64 = 1e-12;

/// One admissible (power, max log power) pair.
#[derive(Debug, Clone, Copy)]
pub struct IndexTerm {
    /// Power exponent j of x^j.
    pub j: Complex64,
    /// Maximal log power k of log^k x.
    pub k: u32,
}

impl IndexTerm {
    pub fn new(j: Complex64, k: u32) -> Self {
        IndexTerm { j, k }
    }

    pub fn real(j: f64, k: u32) -> Self {
        IndexTerm {
            j: Complex64::new(j, 0.0),
            k,
        }
    }
}

fn same_exponent(a: Complex64, b: Complex64) -> bool {
    (a.re - b.re).abs() <= EXPONENT_TOL && (a.im - b.im).abs() <= EXPONENT_TOL
}

/// True iff `b − a` is a nonnegative integer (within tolerance).
fn natural_step(a: Complex64, b: Complex64) -> bool {
    let d = b - a;
    if d.im.abs() > EXPONENT_TOL {
        return false;
    }
    if d.re < -EXPONENT_TOL {
        return false;
    }
    (d.re - d.re.round()).abs() <= EXPONENT_TOL && d.re.round() >= -0.5
}

/// A generator-closed subset of ℂ×ℕ.  The empty generator list denotes
/// the empty index set (Schwartz behavior).
#[derive(Debug, Clone, Default)]
pub struct IndexSet {
    generators: Vec<IndexTerm>,
}

impl IndexSet {
    /// The empty index set.
    pub fn empty() -> Self {
        IndexSet { generators: vec![] }
    }

    /// Builds a set from generators, pruning dominated ones.
    pub fn from_generators(gens: impl IntoIterator<Item = IndexTerm>) -> Self {
        let mut s = IndexSet {
            generators: gens.into_iter().collect(),
        };
        s.canonicalize();
        s
    }

    /// Convenience constructor for a single real generator.
    pub fn single(j: f64, k: u32) -> Self {
        IndexSet::from_generators([IndexTerm::real(j, k)])
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The canonical (pruned, sorted) generator list.
    pub fn generators(&self) -> &[IndexTerm] {
        &self.generators
    }

    /// Sorts generators and drops any generator dominated by another:
    /// (j,k) is dominated by (j',k') when j − j' ∈ ℕ and k ≤ k'.
    fn canonicalize(&mut self) {
        self.generators.sort_by(|a, b| {
            a.j.re
                .partial_cmp(&b.j.re)
                .unwrap()
                .then(a.j.im.partial_cmp(&b.j.im).unwrap())
                .then(a.k.cmp(&b.k))
        });
        let gens = std::mem::take(&mut self.generators);
        let mut kept: Vec<IndexTerm> = Vec::with_capacity(gens.len());
        for g in gens {
            if kept
                .iter()
                .any(|h| natural_step(h.j, g.j) && g.k <= h.k)
            {
                continue;
            }
            // A later generator can also dominate an earlier one when they
            // share an exponent ladder but the earlier had smaller k; the
            // sort puts larger k later for equal j, so sweep both ways.
            kept.retain(|h| !(natural_step(g.j, h.j) && h.k <= g.k));
            kept.push(g);
        }
        kept.sort_by(|a, b| {
            a.j.re
                .partial_cmp(&b.j.re)
                .unwrap()
                .then(a.j.im.partial_cmp(&b.j.im).unwrap())
                .then(a.k.cmp(&b.k))
        });
        self.generators = kept;
    }

    /// Membership in the closure.
    pub fn contains(&self, t: IndexTerm) -> bool {
        self.generators
            .iter()
            .any(|g| natural_step(g.j, t.j) && t.k <= g.k)
    }

    /// Shifts every generator's exponent by c.
    pub fn shift(&self, c: Complex64) -> IndexSet {
        IndexSet::from_generators(self.generators.iter().map(|g| IndexTerm::new(g.j + c, g.k)))
    }

    /// Scales every exponent of the *closure* by c > 0 and re-closes.
    ///
    /// Scaling does not commute with the integer-step closure, so the
    /// result is defined as the closure of the scaled closure elements,
    /// re-minimalized.  When c = p/q in lowest terms with q ≤ 24 the
    /// scaled steps c·n, n ≤ q, generate everything (c·q is the first
    /// integer step) and the result is exact — in particular for the
    /// halving and doubling the expansion theory performs.  For other
    /// factors the generator ladder is truncated after ⌈1/c⌉ + 24 steps
    /// (best effort; the closure is then a superset of the first steps).
    pub fn scale(&self, c: f64) -> Result<IndexSet, OscError> {
        if c <= 0.0 {
            return Err(OscError::Domain(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        let rational_period = (1..=24u32).find(|&q| {
            let cq = c * q as f64;
            (cq - cq.round()).abs() <= EXPONENT_TOL
        });
        let max_step = match rational_period {
            Some(q) => q,
            None => (1.0 / c).ceil() as u32 + 24,
        };
        let mut cands = Vec::new();
        for g in &self.generators {
            for n in 0..=max_step {
                cands.push(IndexTerm::new(
                    Complex64::new(c * (g.j.re + n as f64), c * g.j.im),
                    g.k,
                ));
            }
        }
        Ok(IndexSet::from_generators(cands))
    }

    /// Closure of the union of the two generator lists.
    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet::from_generators(
            self.generators
                .iter()
                .chain(other.generators.iter())
                .copied(),
        )
    }

    /// All closure elements with Re j ≤ re_max, each exponent listed with
    /// its maximal log power and all smaller ones, sorted by
    /// (Re j, Im j, k).
    pub fn enumerate(&self, re_max: f64) -> Vec<IndexTerm> {
        // Collect distinct exponents with their maximal k.
        let mut found: Vec<(Complex64, u32)> = Vec::new();
        for g in &self.generators {
            let mut n = 0u64;
            loop {
                let j = g.j + Complex64::new(n as f64, 0.0);
                if j.re > re_max + EXPONENT_TOL {
                    break;
                }
                match found.iter_mut().find(|(e, _)| same_exponent(*e, j)) {
                    Some((_, kmax)) => *kmax = (*kmax).max(g.k),
                    None => found.push((j, g.k)),
                }
                n += 1;
            }
        }
        let mut out = Vec::new();
        for (j, kmax) in found {
            for k in 0..=kmax {
                out.push(IndexTerm::new(j, k));
            }
        }
        out.sort_by(|a, b| {
            a.j.re
                .partial_cmp(&b.j.re)
                .unwrap()
                .then(a.j.im.partial_cmp(&b.j.im).unwrap())
                .then(a.k.cmp(&b.k))
        });
        out
    }

    /// Smallest real part among closure exponents (`None` for the empty set).
    pub fn min_re(&self) -> Option<f64> {
        self.generators
            .iter()
            .map(|g| g.j.re)
            .min_by(|a, b| a.partial_cmp(b).unwrap())
    }

    /// Textual form "j:k[,j:k...]", or "EMPTY".  Exponents are printed as
    /// plain decimals; only real exponents are supported textually (the
    /// expансion machinery never needs complex ones in files or flags).
    pub fn to_text(&self) -> String {
        if self.is_empty() {
            return "EMPTY".to_string();
        }
        self.generators
            .iter()
            .map(|g| {
                debug_assert!(g.j.im.abs() <= EXPONENT_TOL);
                let j = g.j.re;
                if (j - j.round()).abs() <= EXPONENT_TOL {
                    format!("{}:{}", j.round() as i64, g.k)
                } else {
                    format!("{}:{}", j, g.k)
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the textual form produced by [`IndexSet::to_text`].
    pub fn parse(text: &str) -> Result<IndexSet, OscError> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("EMPTY") {
            return Ok(IndexSet::empty());
        }
        let mut gens = Vec::new();
        for part in text.split(',') {
            let (j_str, k_str) = part.split_once(':').ok_or_else(|| {
                OscError::Domain(format!("index term '{part}' is not of the form j:k"))
            })?;
            let j: f64 = j_str.trim().parse().map_err(|_| {
                OscError::Domain(format!("cannot parse exponent '{j_str}' as a number"))
            })?;
            let k: u32 = k_str.trim().parse().map_err(|_| {
                OscError::Domain(format!("cannot parse log power '{k_str}' as an integer"))
            })?;
            gens.push(IndexTerm::real(j, k));
        }
        Ok(IndexSet::from_generators(gens))
    }
}

impl std::fmt::Display for IndexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_text())
    }
}
