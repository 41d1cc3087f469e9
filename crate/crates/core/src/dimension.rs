//! Secant dimensions by stacked tangent spaces and generic ranks.
//!
//! The affine dimension of the `r`-th secant variety equals the rank of the
//! differential of the secant map at a general point, i.e. the rank of `r`
//! Jacobian blocks of the cone parameterization evaluated at independent
//! random parameters and placed side by side. The generic rank is the least
//! `r` for which that rank reaches the ambient dimension.

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binom;
use crate::error::{Error, Result};
use crate::linalg::{bareiss_rank, svd_rank};
use crate::rng::{substream, Domain};
use crate::scalar::ArithmeticMode;
use crate::variety::{ConeMap, VarietySpec};

/// Integer parameters are drawn uniformly from `[-PARAM_BOX, PARAM_BOX]`.
pub const PARAM_BOX: i64 = 10;
/// Singular values below `SVD_REL_TOL * sigma_max` count as zero.
pub const SVD_REL_TOL: f64 = 1e-8;
pub const DEFAULT_TRIALS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerraciniEstimate {
    pub spec: VarietySpec,
    pub r: usize,
    /// Maximum over trials of the stacked-Jacobian rank.
    pub observed_rank: usize,
    pub trials: usize,
    pub mode: ArithmeticMode,
    /// Affine dimension of the cone at a general point (single-block rank).
    pub tangent_dim: usize,
    pub fills_ambient: bool,
}

impl TerraciniEstimate {
    /// `min(r * tangent_dim, ambient)`, the value a non-defective secant attains.
    pub fn expected_rank(&self) -> usize {
        (self.r * self.tangent_dim).min(self.spec.ambient_affine_dim())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankMethod {
    Terracini,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericRankResult {
    pub spec: VarietySpec,
    pub r_gen: usize,
    pub method: RankMethod,
    /// Closed form: the Alexander–Hirschowitz exceptional list. Terracini:
    /// the secant variety of order `r_gen - 1` was observed to be defective.
    pub exceptional: bool,
    /// Whether the secant variety of order `r_gen - 1` is a hypersurface;
    /// `None` when the method used cannot tell.
    pub hypersurface_below: Option<bool>,
    /// `(r, observed_rank)` pairs computed along the way (Terracini only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub observed: Vec<(usize, usize)>,
}

/// Stacked-Jacobian rank computations for one variety and seed.
pub struct Terracini {
    spec: VarietySpec,
    map: ConeMap,
    mode: ArithmeticMode,
    seed: u64,
    tangent_dim: usize,
}

impl Terracini {
    pub fn new(spec: &VarietySpec, mode: ArithmeticMode, seed: u64) -> Result<Self> {
        spec.validate()?;
        let map = spec.cone_map();
        let mut t = Self { spec: spec.clone(), map, mode, seed, tangent_dim: 0 };
        t.tangent_dim = t.stacked_rank(1, Domain::TangentDim, 0);
        Ok(t)
    }

    pub fn tangent_dim(&self) -> usize {
        self.tangent_dim
    }

    fn stacked_rank(&self, r: usize, domain: Domain, trial: u64) -> usize {
        let mut rng = substream(self.seed, domain, ((r as u64) << 24) | trial);
        let pd = self.map.param_dim();
        let amb = self.map.ambient_dim();
        match self.mode {
            ArithmeticMode::ExactRational => {
                let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(r * pd);
                for _ in 0..r {
                    let params = loop {
                        let p: Vec<i64> = (0..pd).map(|_| rng.random_range(-PARAM_BOX..=PARAM_BOX)).collect();
                        if p.iter().any(|&x| x != 0) {
                            break p;
                        }
                    };
                    let params: Vec<BigInt> = params.into_iter().map(BigInt::from).collect();
                    rows.extend(self.map.jacobian_columns(&params));
                }
                // rank is transpose-invariant; eliminate along the shorter side
                if rows.len() > amb {
                    rows = transpose(rows, amb);
                }
                bareiss_rank(rows)
            }
            ArithmeticMode::FloatSvd => {
                let mut cols: Vec<Vec<f64>> = Vec::with_capacity(r * pd);
                for _ in 0..r {
                    let params: Vec<f64> = (0..pd).map(|_| rng.sample(StandardNormal)).collect();
                    cols.extend(self.map.jacobian_columns(&params));
                }
                let m = DMatrix::from_fn(amb, cols.len(), |i, j| cols[j][i]);
                svd_rank(m, SVD_REL_TOL)
            }
        }
    }

    /// Observed secant dimension of order `r`, maximised over `trials` draws.
    /// Stops early once a trial attains `min(r * tangent_dim, ambient)`, which
    /// no trial can exceed.
    pub fn estimate(&self, r: usize, trials: usize) -> Result<TerraciniEstimate> {
        if r == 0 || trials == 0 {
            return Err(Error::input("r and trials must be positive"));
        }
        let amb = self.spec.ambient_affine_dim();
        let cap = (r * self.tangent_dim).min(amb);
        let mut best = 0;
        for t in 0..trials {
            best = best.max(self.stacked_rank(r, Domain::Terracini, t as u64));
            if best >= cap {
                break;
            }
        }
        Ok(TerraciniEstimate {
            spec: self.spec.clone(),
            r,
            observed_rank: best,
            trials,
            mode: self.mode,
            tangent_dim: self.tangent_dim,
            fills_ambient: best == amb,
        })
    }

    /// Least `r` whose secant fills the ambient space.
    pub fn generic_rank(&self, trials: usize) -> Result<GenericRankResult> {
        let amb = self.spec.ambient_affine_dim();
        if self.tangent_dim == 0 {
            return Err(Error::Degenerate(format!("{} has a zero tangent space", self.spec)));
        }
        // r * tangent_dim >= ambient is necessary, so no smaller r can fill.
        let start = amb.div_ceil(self.tangent_dim);
        let mut observed = Vec::new();
        let mut r_gen = None;
        for r in start..=amb {
            let est = self.estimate(r, trials)?;
            observed.push((r, est.observed_rank));
            if est.fills_ambient {
                r_gen = Some(r);
                break;
            }
        }
        // Filling at some r <= ambient is equivalent to nondegeneracy.
        let r_gen = r_gen.ok_or_else(|| Error::Degenerate(self.spec.to_string()))?;
        let (exceptional, hypersurface_below) = if r_gen > 1 {
            let below = match observed.iter().find(|(r, _)| *r == r_gen - 1) {
                Some(&(_, rank)) => rank,
                None => {
                    let rank = self.estimate(r_gen - 1, trials)?.observed_rank;
                    observed.insert(0, (r_gen - 1, rank));
                    rank
                }
            };
            let expected = ((r_gen - 1) * self.tangent_dim).min(amb);
            (below < expected, Some(below + 1 == amb))
        } else {
            (false, Some(false))
        };
        Ok(GenericRankResult {
            spec: self.spec.clone(),
            r_gen,
            method: RankMethod::Terracini,
            exceptional,
            hypersurface_below,
            observed,
        })
    }
}

fn transpose(rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = (0..ncols).map(|_| Vec::with_capacity(rows.len())).collect();
    for row in rows {
        for (j, x) in row.into_iter().enumerate() {
            out[j].push(x);
        }
    }
    out
}

/// Observed affine dimension of the `r`-th secant variety.
pub fn terracini_dimension(
    spec: &VarietySpec,
    r: usize,
    trials: usize,
    mode: ArithmeticMode,
    seed: u64,
) -> Result<TerraciniEstimate> {
    Terracini::new(spec, mode, seed)?.estimate(r, trials)
}

/// Generic rank by scanning `r` upward from `ceil(ambient / tangent_dim)`.
pub fn generic_rank_terracini(
    spec: &VarietySpec,
    trials: usize,
    mode: ArithmeticMode,
    seed: u64,
) -> Result<GenericRankResult> {
    Terracini::new(spec, mode, seed)?.generic_rank(trials)
}

/// The Alexander–Hirschowitz exceptional pairs other than quadrics, in the
/// convention `n` = number of variables.
pub const AH_EXCEPTIONS: [(usize, usize); 4] = [(3, 4), (4, 4), (5, 4), (5, 3)];

fn big_binom(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc = acc * BigUint::from(a - i) / BigUint::from(i + 1);
    }
    acc
}

/// Whether `binom(n+d-1, n-1) = 1 (mod n)`: outside the exceptional cases,
/// exactly when the secant variety just below the generic rank of degree-`d`
/// forms in `n` variables is a hypersurface.
pub fn hypersurface_condition(n: usize, d: usize) -> Result<bool> {
    if n < 2 || d < 1 {
        return Err(Error::input(format!("need n >= 2, d >= 1 (got n={n}, d={d})")));
    }
    let b = big_binom((n + d - 1) as u64, (n - 1) as u64);
    Ok(b % BigUint::from(n as u64) == BigUint::one())
}

/// Generic Waring rank of degree-`d` forms in `n` variables
/// (Alexander–Hirschowitz).
pub fn waring_generic_rank(n: usize, d: usize) -> Result<GenericRankResult> {
    if n < 2 || d < 1 {
        return Err(Error::input(format!("need n >= 2, d >= 1 (got n={n}, d={d})")));
    }
    let dim = binom((n + d - 1) as i64, (n - 1) as i64)?;
    let base = usize::try_from(dim.div_ceil(n as u64)).map_err(|_| Error::Overflow("generic rank"))?;
    let (r_gen, exceptional, hyper) = if d == 2 {
        // Quadrics: rank = matrix rank; the singular ones form the
        // determinant hypersurface.
        (n, true, true)
    } else if AH_EXCEPTIONS.contains(&(n, d)) {
        (base + 1, true, true)
    } else {
        (base, false, hypersurface_condition(n, d)?)
    };
    Ok(GenericRankResult {
        spec: VarietySpec::Veronese { n, d },
        r_gen,
        method: RankMethod::ClosedForm,
        exceptional,
        hypersurface_below: Some(hyper),
        observed: Vec::new(),
    })
}

/// Closed form for `2 x ... x 2` and `n x n x n`; Terracini otherwise.
pub fn segre_generic_rank(
    formats: &[usize],
    trials: usize,
    mode: ArithmeticMode,
    seed: u64,
) -> Result<GenericRankResult> {
    let spec = VarietySpec::segre(formats)?;
    let closed = if formats.iter().all(|&f| f == 2) {
        let n = formats.len() as u32;
        Some(((1u64 << n).div_ceil(n as u64 + 1)) as usize)
    } else if formats.len() == 3 && formats.iter().all(|&f| f == formats[0]) {
        let n = formats[0] as u64;
        Some(if n == 3 { 5 } else { (n * n * n).div_ceil(3 * n - 2) as usize })
    } else {
        None
    };
    match closed {
        Some(r_gen) => Ok(GenericRankResult {
            spec,
            r_gen,
            method: RankMethod::ClosedForm,
            exceptional: false,
            hypersurface_below: None,
            observed: Vec::new(),
        }),
        None => generic_rank_terracini(&spec, trials, mode, seed),
    }
}

/// Upper bound `k^(n_vars - 1)` on the number of `k`-th powers of `d`-forms
/// needed for a general form of degree `kd` in `n_vars` variables.
pub fn power_forms_generic_count(n_vars: usize, d: usize, k: usize) -> Result<u64> {
    if n_vars == 0 || d == 0 || k == 0 {
        return Err(Error::input("inputs must be positive"));
    }
    (k as u64).checked_pow((n_vars - 1) as u32).ok_or(Error::Overflow("power count"))
}

/// Generic rank with the best available method for the family.
pub fn generic_rank(spec: &VarietySpec, trials: usize, mode: ArithmeticMode, seed: u64) -> Result<GenericRankResult> {
    match spec {
        VarietySpec::Veronese { n, d } => waring_generic_rank(*n, *d),
        VarietySpec::Segre { formats } => segre_generic_rank(formats, trials, mode, seed),
        _ => generic_rank_terracini(spec, trials, mode, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(waring_generic_rank(3, 5).unwrap().r_gen, 7);
        let r = waring_generic_rank(4, 4).unwrap();
        assert_eq!((r.r_gen, r.exceptional), (10, true));
        assert_eq!(waring_generic_rank(2, 7).unwrap().r_gen, 4);
        assert_eq!(waring_generic_rank(5, 2).unwrap().r_gen, 5);
        let c = waring_generic_rank(4, 3).unwrap();
        assert_eq!((c.r_gen, c.exceptional), (5, false));
        assert!(waring_generic_rank(1, 3).is_err());
    }

    #[test]
    fn segre_closed_forms() {
        let f = |v: &[usize]| segre_generic_rank(v, 1, ArithmeticMode::ExactRational, 0).unwrap().r_gen;
        assert_eq!(f(&[2, 2, 2, 2]), 4);
        assert_eq!(f(&[3, 3, 3]), 5);
        assert_eq!(f(&[4, 4, 4]), 7);
        assert_eq!(f(&[2, 2, 2]), 2);
    }

    #[test]
    fn congruence() {
        assert!(hypersurface_condition(3, 6).unwrap());
        assert!(hypersurface_condition(4, 8).unwrap());
        assert!(!hypersurface_condition(3, 5).unwrap());
        assert!(hypersurface_condition(5, 10).unwrap());
        assert!(hypersurface_condition(2, 4).unwrap());
        assert!(!hypersurface_condition(2, 5).unwrap());
    }

    #[test]
    fn power_counts() {
        assert_eq!(power_forms_generic_count(2, 5, 3).unwrap(), 3);
        assert_eq!(power_forms_generic_count(7, 2, 1).unwrap(), 1);
        assert_eq!(power_forms_generic_count(3, 2, 2).unwrap(), 4);
    }

    #[test]
    fn small_terracini() {
        let spec = VarietySpec::veronese(2, 3).unwrap();
        let e = terracini_dimension(&spec, 2, 5, ArithmeticMode::ExactRational, 0).unwrap();
        assert_eq!(e.observed_rank, 4);
        assert!(e.fills_ambient);
        let e = terracini_dimension(&spec, 1, 5, ArithmeticMode::ExactRational, 0).unwrap();
        assert_eq!(e.observed_rank, 2);
    }

    #[test]
    fn rejects_zero_r() {
        let spec = VarietySpec::veronese(2, 3).unwrap();
        assert!(terracini_dimension(&spec, 0, 5, ArithmeticMode::ExactRational, 0).is_err());
    }
}
