//! Writing any point as a difference of two generic points.
//!
//! A random anchor `p` of rank `r` is normalized to the target's norm. The
//! nearby point `y = p + eps * q` is fitted at rank `r` starting from the
//! anchor's own parameters, and `q = (y - p) / eps`. When the fit fails
//! `eps` is halved. Over ℂ and ℝ alike `r` is the generic rank, so `p` and
//! `y` lie in the open set of points of rank `r`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{substream, Domain};
use crate::scalar::Field;
use crate::variety::{AmbientPoint, Decomposition};

use super::fit::{certify, levenberg_marquardt, FitOptions, FitScalar, Problem};

/// Anchors drawn before giving up.
pub const DEFAULT_ANCHORS: usize = 5;
const EPS_START: f64 = 0.1;
const EPS_MIN: f64 = 1e-8;

/// Everything needed to audit a split: `combined` evaluates to `input`
/// within `relative_residual`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub input: AmbientPoint,
    pub field: Field,
    /// Rank of each of the two generic points.
    pub rank: usize,
    /// The random point `p`, with its decomposition.
    pub anchor: Decomposition,
    /// Fit of `p + eps * input`.
    pub remainder: Decomposition,
    pub epsilon: f64,
    /// `remainder / eps - anchor / eps`.
    pub combined: Decomposition,
    pub length: usize,
    pub relative_residual: f64,
    /// Number of fits run, successful or not.
    pub attempts: usize,
}

fn split_generic<T: FitScalar>(
    target: &AmbientPoint,
    r: usize,
    anchors: usize,
    opts: &FitOptions,
) -> Result<SplitReport> {
    opts.validate()?;
    let prob = Problem::<T>::new(target, r)?;
    let qn = prob.target_norm();
    if qn == 0.0 {
        return Err(Error::input("cannot split the zero point"));
    }
    let w = target.spec().homogeneity_weight() as f64;
    let mut attempts = 0;
    let mut best = f64::INFINITY;
    for a in 0..anchors {
        let mut rng = substream(opts.seed, Domain::Anchor, a as u64);
        let mut anchor = prob.random_start(&mut rng);
        let anchor_dec = prob.to_decomposition(&anchor)?;
        let anchor_point = crate::variety::evaluate(&anchor_dec)?;
        let pn = anchor_point.norm();
        if anchor_dec.len() != r || pn == 0.0 {
            continue;
        }
        // Rescale the anchor to the target's norm.
        let s = (qn / pn).powf(1.0 / w);
        let np = anchor.len() - if T::FIELD == Field::Real && !target.spec().absorbs_real_sign() { r } else { 0 };
        for x in anchor[..np].iter_mut() {
            *x = x.scale(s);
        }
        let anchor_dec = prob.to_decomposition(&anchor)?;
        let p: Vec<T> = crate::variety::evaluate(&anchor_dec)?.coeffs().iter().map(|&z| T::from_c64(z)).collect();
        let mut eps = EPS_START;
        while eps >= EPS_MIN {
            attempts += 1;
            let y: Vec<Complex64> = p.iter().zip(target.coeffs()).map(|(pi, qi)| pi.to_c64() + qi * eps).collect();
            let y_point = AmbientPoint::new(target.spec().clone(), T::FIELD, y)?;
            let yprob = Problem::<T>::new(&y_point, r)?;
            // Residual of y maps to residual of q amplified by |y| / (eps |q|).
            let goal = 0.5 * opts.target_relative_residual * eps * qn / yprob.target_norm();
            let run = levenberg_marquardt(&yprob, anchor.clone(), goal, opts);
            if run.relative_residual <= goal {
                let remainder = yprob.to_decomposition(&run.vars)?;
                let combined = remainder
                    .scaled(Complex64::new(1.0 / eps, 0.0))?
                    .concat(anchor_dec.scaled(Complex64::new(-1.0 / eps, 0.0))?)?;
                let res = certify(&combined, target)?;
                if res <= opts.target_relative_residual {
                    let remainder_res = certify(&remainder, &y_point)?;
                    return Ok(SplitReport {
                        input: target.clone(),
                        field: T::FIELD,
                        rank: r,
                        anchor: anchor_dec,
                        remainder: remainder.with_residual(Some(remainder_res)),
                        epsilon: eps,
                        length: combined.len(),
                        combined: combined.with_residual(Some(res)),
                        relative_residual: res,
                        attempts,
                    });
                }
                best = best.min(res);
            } else {
                best = best.min(run.relative_residual * yprob.target_norm() / (eps * qn));
            }
            eps /= 2.0;
        }
    }
    Err(Error::SplitFailed { attempts, best_residual: best })
}

/// Splits `target` into at most `2 * r_gen` complex cone points.
pub fn two_point_split_complex(target: &AmbientPoint, r_gen: usize, opts: &FitOptions) -> Result<SplitReport> {
    let t = AmbientPoint::new(target.spec().clone(), Field::Complex, target.coeffs().to_vec())?;
    let mut report = split_generic::<Complex64>(&t, r_gen, DEFAULT_ANCHORS, opts)?;
    report.input = target.clone();
    Ok(report)
}

/// Splits a real `target` into at most `2 * r0` real cone points with real
/// (possibly negative) coefficients.
pub fn two_point_split_real(target: &AmbientPoint, r0: usize, opts: &FitOptions) -> Result<SplitReport> {
    if target.field() != Field::Real {
        return Err(Error::input("the real split needs a real target"));
    }
    split_generic::<f64>(target, r0, DEFAULT_ANCHORS, opts)
}
