//! Damped Gauss-Newton (Levenberg-Marquardt) fitting of rank-`r` sums.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{substream, Domain};
use crate::scalar::{Field, Scalar};
use crate::variety::{evaluate, AmbientPoint, ConeMap, ConeParam, Decomposition, Term, VarietySpec};

/// Optimizer settings. Serialized into run configurations, so every knob
/// that influences a result lives here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitOptions {
    pub max_iterations: usize,
    pub restarts: usize,
    pub target_relative_residual: f64,
    /// Initial damping, relative to the mean diagonal of `J^H J`.
    pub lambda_init: f64,
    /// Damping multiplier after a rejected step.
    pub lambda_up: f64,
    /// Damping divisor after an accepted step.
    pub lambda_down: f64,
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            max_iterations: 500,
            restarts: 10,
            target_relative_residual: 1e-8,
            lambda_init: 1e-3,
            lambda_up: 10.0,
            lambda_down: 10.0,
            seed: 0,
        }
    }
}

impl FitOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if self.max_iterations == 0 || self.restarts == 0 {
            return Err(Error::input("max_iterations and restarts must be positive"));
        }
        if !(positive(self.target_relative_residual) && self.target_relative_residual < 1.0) {
            return Err(Error::input("target_relative_residual must lie in (0, 1)"));
        }
        let above_one = |x: f64| x.is_finite() && x > 1.0;
        if !positive(self.lambda_init) || !above_one(self.lambda_up) || !above_one(self.lambda_down) {
            return Err(Error::input("damping parameters must be positive with multipliers above 1"));
        }
        Ok(())
    }
}

/// Scalars the optimizer runs over: `f64` for real fits, `Complex64` for
/// complex ones.
pub(crate) trait FitScalar: Scalar + ComplexField<RealField = f64> + Copy {
    const FIELD: Field;
    fn sample(rng: &mut impl Rng) -> Self;
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(self) -> Complex64;
}

impl FitScalar for f64 {
    const FIELD: Field = Field::Real;

    fn sample(rng: &mut impl Rng) -> Self {
        rng.sample(StandardNormal)
    }

    fn from_c64(z: Complex64) -> Self {
        z.re
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl FitScalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn sample(rng: &mut impl Rng) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    fn from_c64(z: Complex64) -> Self {
        z
    }

    fn to_c64(self) -> Complex64 {
        self
    }
}

/// Least-squares problem `min |target - sum_i c_i phi(theta_i)|^2`.
///
/// Variables are the `r` parameter blocks followed, when the cone does not
/// absorb the sign of a real coefficient, by `r` free coefficients.
pub(crate) struct Problem<T> {
    map: ConeMap,
    spec: VarietySpec,
    target: Vec<T>,
    r: usize,
    p: usize,
    coeff_slots: bool,
}

impl<T: FitScalar> Problem<T> {
    pub fn new(target: &AmbientPoint, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::input("rank must be at least 1"));
        }
        if T::FIELD == Field::Real && target.field() == Field::Complex {
            return Err(Error::input("a real fit needs a real target"));
        }
        let spec = target.spec().clone();
        let map = spec.cone_map();
        let coeff_slots = T::FIELD == Field::Real && !spec.absorbs_real_sign();
        Ok(Problem {
            p: map.param_dim(),
            map,
            target: target.coeffs().iter().map(|&z| T::from_c64(z)).collect(),
            spec,
            r,
            coeff_slots,
        })
    }

    pub fn nvars(&self) -> usize {
        self.r * self.p + if self.coeff_slots { self.r } else { 0 }
    }

    fn coeff(&self, v: &[T], i: usize) -> T {
        if self.coeff_slots {
            v[self.r * self.p + i]
        } else {
            T::one()
        }
    }

    fn block<'a>(&self, v: &'a [T], i: usize) -> &'a [T] {
        &v[i * self.p..(i + 1) * self.p]
    }

    pub fn residual(&self, v: &[T]) -> Vec<T> {
        let mut res = self.target.clone();
        for i in 0..self.r {
            let c = self.coeff(v, i);
            for (a, x) in res.iter_mut().zip(self.map.point(self.block(v, i))) {
                *a -= c * x;
            }
        }
        res
    }

    pub fn jacobian(&self, v: &[T]) -> DMatrix<T> {
        let n = self.target.len();
        let mut j = DMatrix::zeros(n, self.nvars());
        for i in 0..self.r {
            let c = self.coeff(v, i);
            let block = self.block(v, i);
            for (k, col) in self.map.jacobian_columns(block).into_iter().enumerate() {
                for (row, x) in col.into_iter().enumerate() {
                    j[(row, i * self.p + k)] = c * x;
                }
            }
            if self.coeff_slots {
                for (row, x) in self.map.point(block).into_iter().enumerate() {
                    j[(row, self.r * self.p + i)] = x;
                }
            }
        }
        j
    }

    pub fn target_norm(&self) -> f64 {
        norm(&self.target)
    }

    /// Random starting point scaled so the model has the target's norm.
    pub fn random_start(&self, rng: &mut impl Rng) -> Vec<T> {
        let mut v: Vec<T> = (0..self.r * self.p).map(|_| T::sample(rng)).collect();
        if self.coeff_slots {
            v.extend((0..self.r).map(|_| if rng.random::<bool>() { T::one() } else { -T::one() }));
        }
        let model = self.residual(&v).iter().zip(&self.target).map(|(a, t)| *t - *a).collect::<Vec<_>>();
        let (mn, tn) = (norm(&model), self.target_norm());
        if mn > 0.0 && tn > 0.0 {
            let s = (tn / mn).powf(1.0 / self.spec.homogeneity_weight() as f64);
            for x in v[..self.r * self.p].iter_mut() {
                *x = x.scale(s);
            }
        }
        v
    }

    /// Terms with coefficients folded into the parameters where possible:
    /// complex and sign-absorbing cones get coefficient 1, otherwise the
    /// coefficient is the sign of the fitted one.
    pub fn to_decomposition(&self, v: &[T]) -> Result<Decomposition> {
        let w = self.spec.homogeneity_weight() as f64;
        let mut terms = Vec::new();
        for i in 0..self.r {
            let c = self.coeff(v, i).to_c64().re;
            let (coeff, s) = if self.coeff_slots { (c.signum(), c.abs().powf(1.0 / w)) } else { (1.0, 1.0) };
            let values: Vec<Complex64> = self.block(v, i).iter().map(|x| x.to_c64() * s).collect();
            if c == 0.0 || values.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                continue;
            }
            terms.push(Term { coeff: Complex64::new(coeff, 0.0), param: ConeParam::new(T::FIELD, values)? });
        }
        Decomposition::new(self.spec.clone(), T::FIELD, terms, None)
    }
}

pub(crate) fn norm<T: FitScalar>(v: &[T]) -> f64 {
    v.iter().map(|x| x.modulus_squared()).sum::<f64>().sqrt()
}

/// Outcome of one optimizer run.
pub(crate) struct Run<T> {
    pub vars: Vec<T>,
    pub relative_residual: f64,
}

const MAX_LAMBDA: f64 = 1e20;
const MIN_LAMBDA: f64 = 1e-15;
const STALL_STEPS: usize = 25;

/// Levenberg-Marquardt from `start` until the relative residual drops below
/// `goal`, damping saturates, progress stalls or iterations run out.
pub(crate) fn levenberg_marquardt<T: FitScalar>(
    prob: &Problem<T>,
    start: Vec<T>,
    goal: f64,
    opts: &FitOptions,
) -> Run<T> {
    let tn = prob.target_norm().max(f64::MIN_POSITIVE);
    let nv = prob.nvars();
    let mut v = start;
    let mut res = prob.residual(&v);
    let mut f = norm(&res);
    let mut lambda = opts.lambda_init;
    let mut stall = 0;
    for _ in 0..opts.max_iterations {
        if f / tn <= goal || !f.is_finite() {
            break;
        }
        let j = prob.jacobian(&v);
        let jh = j.adjoint();
        let a = &jh * &j;
        let g = &jh * DVector::from_column_slice(&res);
        let scale = (0..nv).map(|k| a[(k, k)].real()).sum::<f64>() / nv as f64;
        let scale = if scale > 0.0 && scale.is_finite() { scale } else { 1.0 };
        let mut accepted = false;
        while lambda <= MAX_LAMBDA {
            let mut m = a.clone();
            for k in 0..nv {
                m[(k, k)] += T::from_real(lambda * scale);
            }
            let step = m.cholesky().map(|c| c.solve(&g));
            if let Some(step) = step {
                let trial: Vec<T> = v.iter().zip(step.iter()).map(|(x, d)| *x + *d).collect();
                let tres = prob.residual(&trial);
                let tf = norm(&tres);
                if tf < f {
                    stall = if (f - tf) <= 1e-6 * f { stall + 1 } else { 0 };
                    v = trial;
                    res = tres;
                    f = tf;
                    lambda = (lambda / opts.lambda_down).max(MIN_LAMBDA);
                    accepted = true;
                    break;
                }
            }
            lambda *= opts.lambda_up;
        }
        if !accepted || stall >= STALL_STEPS {
            break;
        }
    }
    Run { vars: v, relative_residual: f / tn }
}

/// Independent check: relative distance from `evaluate(dec)` to `target`.
pub fn certify(dec: &Decomposition, target: &AmbientPoint) -> Result<f64> {
    let value = evaluate(dec)?;
    let coerced = AmbientPoint::new(target.spec().clone(), dec.field(), target.coeffs().to_vec())?;
    Ok(value.relative_distance(&coerced))
}

fn fit_generic<T: FitScalar>(target: &AmbientPoint, r: usize, opts: &FitOptions) -> Result<Decomposition> {
    opts.validate()?;
    let prob = Problem::<T>::new(target, r)?;
    let mut best = f64::INFINITY;
    for attempt in 0..opts.restarts {
        let mut rng = substream(opts.seed, Domain::Fit, attempt as u64);
        let start = prob.random_start(&mut rng);
        let run = levenberg_marquardt(&prob, start, 0.1 * opts.target_relative_residual, opts);
        if run.relative_residual <= opts.target_relative_residual {
            let dec = prob.to_decomposition(&run.vars)?;
            let res = certify(&dec, target)?;
            if res <= opts.target_relative_residual {
                return Ok(dec.with_residual(Some(res)));
            }
            best = best.min(res);
        } else {
            best = best.min(run.relative_residual);
        }
    }
    Err(Error::FitFailed { best_residual: best })
}

/// Multi-start least-squares fit of `target` by `r` cone points over
/// `field`. On success the residual is re-certified with [`evaluate`].
///
/// Failure only means the optimizer did not get below the target; it is
/// never evidence that the rank exceeds `r`.
pub fn fit_rank(target: &AmbientPoint, r: usize, field: Field, opts: &FitOptions) -> Result<Decomposition> {
    match field {
        Field::Real => fit_generic::<f64>(target, r, opts),
        Field::Complex => {
            let t = AmbientPoint::new(target.spec().clone(), Field::Complex, target.coeffs().to_vec())?;
            fit_generic::<Complex64>(&t, r, opts)
        }
    }
}

/// The squared residual, its gradient and the Gauss-Newton direction in
/// real coordinates (real and imaginary parts interleaved for complex
/// variables). Exposed for derivative checks.
#[derive(Debug, Clone)]
pub struct LocalModel {
    pub objective: f64,
    pub gradient: Vec<f64>,
    pub gauss_newton: Vec<f64>,
}

fn flatten<T: FitScalar>(v: &[T]) -> Vec<f64> {
    match T::FIELD {
        Field::Real => v.iter().map(|x| x.to_c64().re).collect(),
        Field::Complex => v.iter().flat_map(|x| [x.to_c64().re, x.to_c64().im]).collect(),
    }
}

fn unflatten<T: FitScalar>(x: &[f64]) -> Vec<T> {
    match T::FIELD {
        Field::Real => x.iter().map(|&a| T::from_c64(Complex64::new(a, 0.0))).collect(),
        Field::Complex => x.chunks(2).map(|c| T::from_c64(Complex64::new(c[0], c[1]))).collect(),
    }
}

fn local_generic<T: FitScalar>(target: &AmbientPoint, r: usize, x: &[f64]) -> Result<LocalModel> {
    let prob = Problem::<T>::new(target, r)?;
    let width = if T::FIELD == Field::Complex { 2 } else { 1 };
    if x.len() != prob.nvars() * width {
        return Err(Error::DimensionMismatch { expected: prob.nvars() * width, got: x.len() });
    }
    let v = unflatten::<T>(x);
    let res = prob.residual(&v);
    let j = prob.jacobian(&v);
    let g = j.adjoint() * DVector::from_column_slice(&res);
    // d|r|^2 / d re(v_k) = -2 re(J^H r)_k, d/d im(v_k) = -2 im(J^H r)_k.
    let gradient = flatten(&g.iter().map(|z| z.scale(-2.0)).collect::<Vec<T>>());
    let a = j.adjoint() * &j;
    let step = a.pseudo_inverse(1e-12).map(|pinv| pinv * &g).map_err(|e| Error::Degenerate(e.to_string()))?;
    Ok(LocalModel {
        objective: norm(&res).powi(2),
        gradient,
        gauss_newton: flatten(&step.iter().copied().collect::<Vec<T>>()),
    })
}

/// Local model of the fit objective at the real-coordinate point `x`.
pub fn local_model(target: &AmbientPoint, r: usize, field: Field, x: &[f64]) -> Result<LocalModel> {
    match field {
        Field::Real => local_generic::<f64>(target, r, x),
        Field::Complex => {
            let t = AmbientPoint::new(target.spec().clone(), Field::Complex, target.coeffs().to_vec())?;
            local_generic::<Complex64>(&t, r, x)
        }
    }
}

/// Number of real coordinates `local_model` expects.
pub fn local_model_dim(spec: &VarietySpec, r: usize, field: Field) -> usize {
    let p = spec.param_dim() * r;
    match field {
        Field::Complex => 2 * p,
        Field::Real if spec.absorbs_real_sign() => p,
        Field::Real => p + r,
    }
}
