//! Real typical ranks by seeded sampling with exact rank oracles.
//!
//! Only families with an exact real-rank classifier feed the histograms:
//! binary forms (apolarity with Sturm sequences) and `2x2x2` tensors (sign
//! of the hyperdeterminant). Other families are covered by
//! [`verify_r0_bound`], which reports certified upper bounds only.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, RngCore};
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::binary::{real_rank, BinaryForm, Minimality};
use crate::decompose::{two_point_split_real, FitOptions};
use crate::error::{Error, Result};
use crate::rng::{substream, Domain};
use crate::variety::{AmbientPoint, VarietySpec};

/// Default frequency above which a rank counts as typical.
pub const DEFAULT_THRESHOLD: f64 = 0.01;
/// Binary samples have integer coefficients `round(N(0,1) * 2^16)`.
const BINARY_SCALE: f64 = 65536.0;
/// Tensors with `|Δ| < BOUNDARY_TOL * |T|^4` are rejected as boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypicalRankReport {
    pub spec: VarietySpec,
    pub samples: usize,
    pub seed: u64,
    /// Real rank -> number of samples.
    pub histogram: BTreeMap<usize, usize>,
    /// Samples discarded as lying on the boundary between rank regions.
    pub rejected: usize,
    pub threshold: f64,
    /// Ranks whose frequency among accepted samples exceeds `threshold`.
    pub observed_typical: Vec<usize>,
    pub min_typical: Option<usize>,
    pub r_gen_complex: usize,
    /// Samples whose real rank came out below the complex generic rank.
    pub below_generic: usize,
    /// Samples whose rank minimality rests on a bounded randomized search.
    pub search_bounded: usize,
}

impl TypicalRankReport {
    fn build(
        spec: VarietySpec,
        samples: usize,
        seed: u64,
        histogram: BTreeMap<usize, usize>,
        rejected: usize,
        r_gen_complex: usize,
        search_bounded: usize,
    ) -> Self {
        let accepted: usize = histogram.values().sum();
        let observed_typical: Vec<usize> = histogram
            .iter()
            .filter(|(_, &c)| accepted > 0 && c as f64 / accepted as f64 > DEFAULT_THRESHOLD)
            .map(|(&r, _)| r)
            .collect();
        let below_generic = histogram.range(..r_gen_complex).map(|(_, c)| c).sum();
        TypicalRankReport {
            spec,
            samples,
            seed,
            min_typical: observed_typical.first().copied(),
            observed_typical,
            histogram,
            rejected,
            threshold: DEFAULT_THRESHOLD,
            r_gen_complex,
            below_generic,
            search_bounded,
        }
    }

    /// Re-derives `observed_typical` and `min_typical` for another threshold.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        let accepted: usize = self.histogram.values().sum();
        self.threshold = threshold;
        self.observed_typical = self
            .histogram
            .iter()
            .filter(|(_, &c)| accepted > 0 && c as f64 / accepted as f64 > threshold)
            .map(|(&r, _)| r)
            .collect();
        self.min_typical = self.observed_typical.first().copied();
        self
    }
}

/// The `i`-th random binary form of degree `d` under `seed`.
pub fn sample_binary_form(d: usize, seed: u64, i: u64) -> Result<BinaryForm> {
    let mut rng = substream(seed, Domain::BinarySample, i);
    loop {
        let coeffs: Vec<BigRational> = (0..=d)
            .map(|_| {
                let x: f64 = rng.sample(StandardNormal);
                BigRational::from_integer(BigInt::from((x * BINARY_SCALE).round() as i64))
            })
            .collect();
        let f = BinaryForm::new(coeffs)?;
        if !f.is_zero() {
            return Ok(f);
        }
    }
}

/// Histogram of exact real ranks of random real binary forms of degree `d`.
pub fn sample_binary_typical(d: usize, samples: usize, seed: u64) -> Result<TypicalRankReport> {
    if d < 2 {
        return Err(Error::input("binary typical ranks need d >= 2"));
    }
    let mut histogram = BTreeMap::new();
    let mut search_bounded = 0;
    for i in 0..samples {
        let f = sample_binary_form(d, seed, i as u64)?;
        let cert = real_rank(&f)?;
        *histogram.entry(cert.rank).or_insert(0) += 1;
        if cert.minimality == Minimality::SearchBounded {
            search_bounded += 1;
        }
    }
    Ok(TypicalRankReport::build(VarietySpec::veronese(2, d)?, samples, seed, histogram, 0, d / 2 + 1, search_bounded))
}

/// Cayley's hyperdeterminant of a `2x2x2` tensor with `t[4i + 2j + k] = a_ijk`.
///
/// Positive means real rank 2, negative real rank 3; zero is the boundary.
pub fn hyperdeterminant_222(t: &[f64; 8]) -> f64 {
    let a = |i: usize, j: usize, k: usize| t[4 * i + 2 * j + k];
    let sq = |x: f64| x * x;
    sq(a(0, 0, 0) * a(1, 1, 1))
        + sq(a(0, 0, 1) * a(1, 1, 0))
        + sq(a(0, 1, 0) * a(1, 0, 1))
        + sq(a(1, 0, 0) * a(0, 1, 1))
        - 2.0
            * (a(0, 0, 0) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 1)
                + a(0, 0, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 1, 1)
                + a(0, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(1, 1, 1)
                + a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 1) * a(1, 1, 0)
                + a(0, 0, 1) * a(1, 0, 0) * a(0, 1, 1) * a(1, 1, 0)
                + a(0, 1, 0) * a(1, 0, 0) * a(0, 1, 1) * a(1, 0, 1))
        + 4.0 * (a(0, 0, 0) * a(0, 1, 1) * a(1, 0, 1) * a(1, 1, 0) + a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0) * a(1, 1, 1))
}

/// Real rank of a `2x2x2` tensor off the boundary, or `None` when
/// `|Δ| < BOUNDARY_TOL * |T|^4`.
pub fn real_rank_222(t: &[f64; 8]) -> Option<usize> {
    let n2: f64 = t.iter().map(|x| x * x).sum();
    let delta = hyperdeterminant_222(t);
    if delta.abs() < BOUNDARY_TOL * n2 * n2 {
        None
    } else if delta > 0.0 {
        Some(2)
    } else {
        Some(3)
    }
}

/// The `i`-th standard Gaussian `2x2x2` tensor under `seed`.
pub fn sample_tensor_222(seed: u64, i: u64) -> [f64; 8] {
    let mut rng = substream(seed, Domain::TensorSample, i);
    std::array::from_fn(|_| rng.sample(StandardNormal))
}

/// Histogram of real ranks of Gaussian `2x2x2` tensors.
pub fn sample_222_typical(samples: usize, seed: u64) -> Result<TypicalRankReport> {
    let mut histogram = BTreeMap::new();
    let mut rejected = 0;
    for i in 0..samples {
        match real_rank_222(&sample_tensor_222(seed, i as u64)) {
            Some(r) => *histogram.entry(r).or_insert(0) += 1,
            None => rejected += 1,
        }
    }
    Ok(TypicalRankReport::build(VarietySpec::segre(&[2, 2, 2])?, samples, seed, histogram, rejected, 2, 0))
}

/// The first `count` Gaussian `2x2x2` tensors with hyperdeterminant of the
/// requested sign (off the boundary).
pub fn sample_222_with_sign(negative: bool, count: usize, seed: u64) -> Result<Vec<AmbientPoint>> {
    let want = if negative { 3 } else { 2 };
    let spec = VarietySpec::segre(&[2, 2, 2])?;
    let mut out = Vec::with_capacity(count);
    let mut i = 0u64;
    while out.len() < count {
        let t = sample_tensor_222(seed, i);
        i += 1;
        if real_rank_222(&t) == Some(want) {
            out.push(AmbientPoint::real(spec.clone(), &t)?);
        }
    }
    Ok(out)
}

/// Outcome of one real split in a bound check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitOutcome {
    pub label: String,
    pub fit_seed: u64,
    pub length: Option<usize>,
    pub relative_residual: Option<f64>,
    /// Set when the optimizer failed; never a rank statement.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct R0BoundReport {
    pub spec: VarietySpec,
    pub r0: usize,
    pub seed: u64,
    pub attempted: usize,
    pub succeeded: usize,
    pub max_length: usize,
    pub within_bound: bool,
    pub outcomes: Vec<SplitOutcome>,
}

impl R0BoundReport {
    pub fn success_rate(&self) -> f64 {
        if self.attempted == 0 {
            return 1.0;
        }
        self.succeeded as f64 / self.attempted as f64
    }
}

/// Points that are far from generic: `x^{d-1} y` for binary forms and the
/// `W` tensor for `2x2x2`.
pub fn adversarial_witnesses(spec: &VarietySpec) -> Result<Vec<(String, AmbientPoint)>> {
    Ok(match spec {
        VarietySpec::Veronese { n: 2, d } if *d >= 2 => {
            let mut c = vec![0.0; d + 1];
            c[1] = 1.0;
            vec![(format!("x^{}*y", d - 1), AmbientPoint::real(spec.clone(), &c)?)]
        }
        VarietySpec::Segre { formats } if formats == &[2, 2, 2] => {
            let mut c = [0.0; 8];
            c[1] = 1.0;
            c[2] = 1.0;
            c[4] = 1.0;
            vec![("W".to_string(), AmbientPoint::real(spec.clone(), &c)?)]
        }
        _ => Vec::new(),
    })
}

/// Real-splits each labelled point into at most `2 * r0` terms.
pub fn verify_r0_bound_on(
    spec: &VarietySpec,
    points: &[(String, AmbientPoint)],
    r0: usize,
    seed: u64,
    opts: &FitOptions,
) -> Result<R0BoundReport> {
    let mut outcomes = Vec::new();
    let mut succeeded = 0;
    let mut max_length = 0;
    for (i, (label, p)) in points.iter().enumerate() {
        if p.spec() != spec {
            return Err(Error::input(format!("point {label} is not on {spec}")));
        }
        let fit_seed = substream(seed, Domain::Fit, i as u64).next_u64();
        let o = FitOptions { seed: fit_seed, ..opts.clone() };
        let outcome = match two_point_split_real(p, r0, &o) {
            Ok(rep) => {
                succeeded += 1;
                max_length = max_length.max(rep.length);
                SplitOutcome {
                    label: label.clone(),
                    fit_seed,
                    length: Some(rep.length),
                    relative_residual: Some(rep.relative_residual),
                    failure: None,
                }
            }
            Err(e) => SplitOutcome {
                label: label.clone(),
                fit_seed,
                length: None,
                relative_residual: None,
                failure: Some(format!("optimizer failure: {e}")),
            },
        };
        outcomes.push(outcome);
    }
    Ok(R0BoundReport {
        spec: spec.clone(),
        r0,
        seed,
        attempted: points.len(),
        succeeded,
        max_length,
        within_bound: max_length <= 2 * r0,
        outcomes,
    })
}

/// Gaussian real points plus the adversarial witnesses of the family.
pub fn verify_r0_bound(
    spec: &VarietySpec,
    r0: usize,
    samples: usize,
    seed: u64,
    opts: &FitOptions,
) -> Result<R0BoundReport> {
    spec.validate()?;
    let n = spec.ambient_affine_dim();
    let mut points = adversarial_witnesses(spec)?;
    for i in 0..samples {
        let mut rng = substream(seed, Domain::RealPoints, i as u64);
        let c: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        points.push((format!("sample {i}"), AmbientPoint::real(spec.clone(), &c)?));
    }
    verify_r0_bound_on(spec, &points, r0, seed, opts)
}
