//! Turning an apolar witness into an explicit decomposition.
//!
//! Rational roots give an exact decomposition over ℚ. Otherwise the roots are
//! located in double precision, polished by simultaneous (Aberth) iteration
//! in 256-bit fixed point, and the coefficients are solved in the same
//! precision.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::binom;
use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::poly::rational_approx;
use crate::scalar::Field;
use crate::variety::{evaluate, ConeParam, Decomposition, Term, VarietySpec};

use super::{BinaryForm, RankCertificate};

/// One exact term `coeff * (alpha x + beta y)^d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactTerm {
    #[serde(with = "super::rational_str")]
    pub coeff: BigRational,
    #[serde(with = "super::rational_str")]
    pub alpha: BigRational,
    #[serde(with = "super::rational_str")]
    pub beta: BigRational,
}

/// Fractional bits of the fixed-point arithmetic.
const PREC: usize = 256;
/// Corrections below `2^-CONVERGED` count as converged.
const CONVERGED: usize = 224;
const MAX_HP_ITERS: usize = 400;
const MAX_F64_ITERS: usize = 500;

/// Complex fixed point: `(re + i im) / 2^PREC`.
#[derive(Debug, Clone, PartialEq)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

impl Fx {
    fn zero() -> Self {
        Fx { re: BigInt::zero(), im: BigInt::zero() }
    }

    fn one() -> Self {
        Fx { re: BigInt::one() << PREC, im: BigInt::zero() }
    }

    fn from_rational(q: &BigRational) -> Self {
        Fx { re: (q.numer() << PREC) / q.denom(), im: BigInt::zero() }
    }

    fn from_c64(z: Complex64) -> Self {
        let conv = |x: f64| {
            let q = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
            (q.numer() << PREC) / q.denom()
        };
        Fx { re: conv(z.re), im: conv(z.im) }
    }

    fn to_c64(&self) -> Complex64 {
        let den = BigInt::one() << PREC;
        let conv = |x: &BigInt| BigRational::new(x.clone(), den.clone()).to_f64().unwrap_or(f64::NAN);
        Complex64::new(conv(&self.re), conv(&self.im))
    }

    fn add(&self, o: &Fx) -> Fx {
        Fx { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &Fx) -> Fx {
        Fx { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Fx) -> Fx {
        Fx { re: (&self.re * &o.re - &self.im * &o.im) >> PREC, im: (&self.re * &o.im + &self.im * &o.re) >> PREC }
    }

    /// `|z|^2` scaled by `2^(2 PREC)`.
    fn norm_sqr_raw(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    fn div(&self, o: &Fx) -> Option<Fx> {
        let den = o.norm_sqr_raw();
        if den.is_zero() {
            return None;
        }
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        Some(Fx { re: (re << PREC) / &den, im: (im << PREC) / &den })
    }

    /// `log2 |z|`, roughly; very negative for zero.
    fn log2_abs(&self) -> i64 {
        let n = self.norm_sqr_raw();
        if n.is_zero() {
            return i64::MIN / 2;
        }
        (n.bits() as i64 - 2 * PREC as i64) / 2
    }
}

fn horner(coeffs: &[Fx], z: &Fx) -> (Fx, Fx) {
    let mut p = Fx::zero();
    let mut dp = Fx::zero();
    for c in coeffs.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(c);
    }
    (p, dp)
}

fn horner_f64(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Aberth iteration in double precision; coefficients ascending.
fn aberth_f64(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].norm();
    let radius = 1.0 + coeffs[..n].iter().map(|c| c.norm() / lead).fold(0.0, f64::max);
    let radius = if radius.is_finite() { radius.min(1e12) } else { 1.0 };
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64)).collect();
    for _ in 0..MAX_F64_ITERS {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner_f64(coeffs, z[i]);
            if p == Complex64::zero() {
                continue;
            }
            let w = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let delta = w / (Complex64::one() - w * s);
            if delta.is_finite() {
                z[i] -= delta;
                worst = worst.max(delta.norm() / (1.0 + z[i].norm()));
            }
        }
        if worst < 1e-14 {
            break;
        }
    }
    z.into_iter().map(|v| if v.is_finite() { v } else { Complex64::new(0.5, 0.5) }).collect()
}

/// Aberth iteration in fixed point from the given seeds.
fn aberth_hp(coeffs: &[Fx], seeds: &[Complex64]) -> Result<Vec<Fx>> {
    let n = seeds.len();
    let mut z: Vec<Fx> = seeds.iter().map(|&s| Fx::from_c64(s)).collect();
    for _ in 0..MAX_HP_ITERS {
        let mut worst = i64::MIN;
        for i in 0..n {
            let (p, dp) = horner(coeffs, &z[i]);
            if p.norm_sqr_raw().is_zero() {
                continue;
            }
            let Some(w) = p.div(&dp) else {
                z[i] = z[i].add(&Fx::from_c64(Complex64::new(1e-9, 1e-9)));
                worst = 0;
                continue;
            };
            let mut s = Fx::zero();
            for j in (0..n).filter(|&j| j != i) {
                if let Some(t) = Fx::one().div(&z[i].sub(&z[j])) {
                    s = s.add(&t);
                }
            }
            let den = Fx::one().sub(&w.mul(&s));
            let delta = w.div(&den).unwrap_or(w);
            z[i] = z[i].sub(&delta);
            let rel = delta.log2_abs() - z[i].log2_abs().max(0);
            worst = worst.max(rel);
        }
        if worst < -(CONVERGED as i64) {
            return Ok(z);
        }
    }
    Err(Error::RootFinding("fixed-point root polishing did not converge".into()))
}

/// Projective roots of `g` as normalized pairs `(alpha, beta)` with
/// `max(|alpha|, |beta|) = 1`.
fn roots_hp(g: &BinaryForm) -> Result<Vec<(Fx, Fx)>> {
    let poly = g.dehomogenize();
    let e = poly.degree().unwrap_or(0);
    let mut out = Vec::new();
    for _ in e..g.degree() {
        out.push((Fx::one(), Fx::zero()));
    }
    if e == 0 {
        return Ok(out);
    }
    let c64: Vec<Complex64> = poly.coeffs().iter().map(|c| Complex64::new(c.to_f64().unwrap_or(0.0), 0.0)).collect();
    let seeds = aberth_f64(&c64);
    let fx: Vec<Fx> = poly.coeffs().iter().map(Fx::from_rational).collect();
    for t in aberth_hp(&fx, &seeds)? {
        if t.log2_abs() <= 0 && t.norm_sqr_raw() <= Fx::one().norm_sqr_raw() {
            out.push((t, Fx::one()));
        } else {
            let inv = Fx::one().div(&t).expect("nonzero root");
            out.push((Fx::one(), inv));
        }
    }
    Ok(out)
}

fn check(cert: &RankCertificate, f: &BinaryForm) -> Result<()> {
    if !cert.verify(f) {
        return Err(Error::input("certificate does not witness the rank of this form"));
    }
    Ok(())
}

/// Exact decomposition when every root of the witness is rational.
pub fn exact_decomposition(cert: &RankCertificate, f: &BinaryForm) -> Result<Option<Vec<ExactTerm>>> {
    check(cert, f)?;
    let g = &cert.apolar_form;
    let poly = g.dehomogenize();
    let e = poly.degree().unwrap_or(0);
    let mut lines: Vec<(BigRational, BigRational)> = Vec::new();
    for _ in e..g.degree() {
        lines.push((BigRational::one(), BigRational::zero()));
    }
    if e > 0 {
        let c64: Vec<Complex64> =
            poly.coeffs().iter().map(|c| Complex64::new(c.to_f64().unwrap_or(0.0), 0.0)).collect();
        for z in aberth_f64(&c64) {
            if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
                return Ok(None);
            }
            let Some(t) = [1u64 << 10, 1 << 20, 1 << 30]
                .iter()
                .find_map(|&den| rational_approx(z.re, den).filter(|t| poly.eval(t).is_zero()))
            else {
                return Ok(None);
            };
            let line = if t.is_negative() { (-t, -BigRational::one()) } else { (t, BigRational::one()) };
            if lines.contains(&line) {
                return Ok(None);
            }
            lines.push(line);
        }
    }
    let d = f.degree();
    let powers: Vec<BinaryForm> =
        lines.iter().map(|(a, b)| BinaryForm::power_of_linear(a, b, d)).collect::<Result<_>>()?;
    let matrix: Vec<Vec<BigRational>> =
        (0..=d).map(|i| powers.iter().map(|p| p.coeffs()[i].clone()).collect()).collect();
    let Some(coeffs) = solve(&matrix, f.coeffs()) else {
        return Err(Error::Degenerate("roots of the apolar form do not span the form".into()));
    };
    Ok(Some(coeffs.into_iter().zip(lines).map(|(coeff, (alpha, beta))| ExactTerm { coeff, alpha, beta }).collect()))
}

/// Sum of the exact terms as a binary form of degree `d`.
pub fn expand_exact(terms: &[ExactTerm], d: usize) -> Result<BinaryForm> {
    let mut acc = BinaryForm::new(vec![BigRational::zero(); d + 1])?;
    for t in terms {
        acc = acc.add(&BinaryForm::power_of_linear(&t.alpha, &t.beta, d)?.scale(&t.coeff))?;
    }
    Ok(acc)
}

/// Solves `A c = b` for a consistent overdetermined system by elimination
/// with partial pivoting over rows.
fn solve_hp(mut a: Vec<Vec<Fx>>, mut b: Vec<Fx>) -> Result<Vec<Fx>> {
    let rows = a.len();
    let cols = a[0].len();
    for k in 0..cols {
        let p = (k..rows).max_by_key(|&i| a[i][k].norm_sqr_raw()).expect("rows >= cols");
        if a[p][k].norm_sqr_raw().is_zero() {
            return Err(Error::Degenerate("roots of the apolar form do not span the form".into()));
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..rows {
            let m = a[i][k].div(&a[k][k]).expect("nonzero pivot");
            let (top, bottom) = a.split_at_mut(i);
            for (x, pivot) in bottom[0][k..cols].iter_mut().zip(&top[k][k..cols]) {
                *x = x.sub(&m.mul(pivot));
            }
            let v = m.mul(&b[k]);
            b[i] = b[i].sub(&v);
        }
    }
    let mut x = vec![Fx::zero(); cols];
    for k in (0..cols).rev() {
        let mut s = b[k].clone();
        for j in k + 1..cols {
            s = s.sub(&a[k][j].mul(&x[j]));
        }
        x[k] = s.div(&a[k][k]).expect("nonzero pivot");
    }
    Ok(x)
}

/// A decomposition of `f` into `cert.rank` powers of linear forms, read off
/// the roots of the apolar witness. The residual is absent when the
/// decomposition is exact over ℚ (its terms are then exactly representable
/// only up to double rounding; see [`exact_decomposition`]).
pub fn sylvester_decompose(cert: &RankCertificate, f: &BinaryForm) -> Result<Decomposition> {
    check(cert, f)?;
    let d = f.degree();
    let spec = VarietySpec::Veronese { n: 2, d };
    if let Some(terms) = exact_decomposition(cert, f)? {
        let terms = terms
            .iter()
            .map(|t| {
                let v = |x: &BigRational| Complex64::new(x.to_f64().unwrap_or(f64::NAN), 0.0);
                let param = ConeParam::new(cert.field, vec![v(&t.alpha), v(&t.beta)])?;
                Ok(Term { coeff: v(&t.coeff), param })
            })
            .collect::<Result<_>>()?;
        return Decomposition::new(spec, cert.field, terms, None);
    }
    let lines = roots_hp(&cert.apolar_form)?;
    let binoms: Vec<Fx> = (0..=d)
        .map(|i| Fx::from_rational(&BigRational::from_integer(binom(d as i64, i as i64).expect("small").into())))
        .collect();
    let mut columns = Vec::new();
    for (alpha, beta) in &lines {
        let mut apow = vec![Fx::one()];
        let mut bpow = vec![Fx::one()];
        for k in 0..d {
            apow.push(apow[k].mul(alpha));
            bpow.push(bpow[k].mul(beta));
        }
        columns.push((0..=d).map(|i| binoms[i].mul(&apow[d - i]).mul(&bpow[i])).collect::<Vec<_>>());
    }
    let a: Vec<Vec<Fx>> = (0..=d).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    let b: Vec<Fx> = f.coeffs().iter().map(Fx::from_rational).collect();
    let coeffs = solve_hp(a, b)?;
    let real = cert.field == Field::Real;
    let cast = |z: &Fx| {
        let c = z.to_c64();
        if real {
            Complex64::new(c.re, 0.0)
        } else {
            c
        }
    };
    let terms = coeffs
        .iter()
        .zip(&lines)
        .map(|(c, (alpha, beta))| {
            let param = ConeParam::new(cert.field, vec![cast(alpha), cast(beta)])?;
            Ok(Term { coeff: cast(c), param })
        })
        .collect::<Result<Vec<_>>>()?;
    let dec = Decomposition::new(spec, cert.field, terms, None)?;
    let residual = evaluate(&dec)?.relative_distance(&f.to_point());
    Ok(dec.with_residual(Some(residual)))
}
