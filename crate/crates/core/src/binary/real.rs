//! Real Waring rank.
//!
//! The real rank is the least `r` admitting an apolar form of degree `r`
//! with `r` distinct real roots. Below `r2` every apolar form is a multiple
//! of `G1`, so the search starts at `r2` unless `G1` itself qualifies. At a
//! degree whose apolar space is a pencil the question is decided exactly:
//! the discriminant of the pencil cuts the parameter line into cells on
//! which the real root count is constant. Larger apolar spaces are searched
//! through random sub-pencils with prescribed real roots.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::Result;
use crate::linalg::{bareiss_det, clear_denominators, nullspace};
use crate::poly::{rational_approx, Poly};
use crate::rng::{substream, Domain};
use crate::scalar::Field;

use super::{apolar_kernel, apolar_structure, combine_rational, BinaryForm, Minimality, RankCertificate};

/// Random sub-pencils tried per degree when the apolar space has dimension
/// three or more.
pub const SLICES_PER_DEGREE: usize = 24;
const DEEP_SLICES: usize = 256;
const SLICE_SEED: u64 = 0x5EED_B1A5;

/// Real Waring rank with an all-real-rooted square-free apolar witness.
pub fn real_rank(f: &BinaryForm) -> Result<RankCertificate> {
    let s = apolar_structure(f)?;
    let d = f.degree();
    if s.low.len() == 1 && s.low[0].is_hyperbolic() {
        return Ok(cert(s.r1, s.low[0].clone(), Minimality::Proven));
    }
    // A square-free form with all roots real has real rank exactly its degree.
    if d >= 2 && f.is_hyperbolic() {
        return Ok(cert(d, top_degree_witness(f), Minimality::Proven));
    }
    let start = if s.low.len() == 1 { s.r2 } else { s.r1 };
    let mut minimality = Minimality::Proven;
    for r in start..=d {
        let basis = apolar_kernel(f, r)?;
        let found = match basis.len() {
            0 => None,
            1 => Some(basis[0].clone()).filter(BinaryForm::is_hyperbolic),
            2 => hyperbolic_in_pencil(&basis[0], &basis[1]),
            _ if r == d => Some(top_degree_witness(f)),
            _ => {
                // Below the top degree a square-free non-hyperbolic form always
                // has a witness, so the last level gets a deeper search.
                let slices = if r + 1 == d && f.is_squarefree() { DEEP_SLICES } else { SLICES_PER_DEGREE };
                let g = hyperbolic_by_slices(&basis, r as u64, slices);
                if g.is_none() {
                    minimality = Minimality::SearchBounded;
                }
                g
            }
        };
        if let Some(g) = found {
            return Ok(cert(r, g, minimality));
        }
    }
    unreachable!("degree d always carries an all-real-rooted apolar form")
}

fn cert(rank: usize, g: BinaryForm, minimality: Minimality) -> RankCertificate {
    RankCertificate { rank, apolar_form: g, field: Field::Real, minimality }
}

/// Coefficients of the partial derivatives of `G` (degree `r`).
fn partials(g: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let r = g.len() - 1;
    let gx = (0..r).map(|j| &g[j] * BigInt::from(r - j)).collect();
    let gy = (1..=r).map(|j| &g[j] * BigInt::from(j)).collect();
    (gx, gy)
}

/// Resultant of two binary forms of the same degree `e >= 1`.
fn resultant(p: &[BigInt], q: &[BigInt]) -> BigInt {
    let e = p.len() - 1;
    let n = 2 * e;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for i in 0..e {
        for (j, c) in p.iter().enumerate() {
            m[i][i + j] = c.clone();
        }
        for (j, c) in q.iter().enumerate() {
            m[e + i][i + j] = c.clone();
        }
    }
    bareiss_det(m)
}

/// A positive multiple of the polynomial through `(i, ys[i])`, `i = 0..n`.
///
/// Newton's forward form `sum_k D^k y_0 * C(t, k)`, scaled by `(n-1)!` so
/// that every step stays in `Z`.
fn interpolate(ys: &[BigInt]) -> Vec<BigInt> {
    let n = ys.len();
    let mut diffs = Vec::with_capacity(n);
    let mut row = ys.to_vec();
    while !row.is_empty() {
        diffs.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let mut out = vec![BigInt::zero(); n];
    // falling = t (t-1) ... (t-k+1), scale = (n-1)! / k!
    let mut falling = vec![BigInt::one()];
    let mut scale: BigInt = (1..n).map(BigInt::from).product();
    for (k, dk) in diffs.iter().enumerate() {
        let f = dk * &scale;
        for (c, v) in out.iter_mut().zip(&falling) {
            *c += &f * v;
        }
        let mut next = vec![BigInt::zero(); falling.len() + 1];
        for (j, v) in falling.iter().enumerate() {
            next[j + 1] += v;
            next[j] -= v * BigInt::from(k);
        }
        falling = next;
        if k + 1 < n {
            scale /= BigInt::from(k + 1);
        }
    }
    out
}

/// Decides exactly whether the pencil spanned by `a` and `b` contains an
/// all-real-rooted square-free form, returning one if so.
pub(crate) fn hyperbolic_in_pencil(a: &BinaryForm, b: &BinaryForm) -> Option<BinaryForm> {
    if b.is_hyperbolic() {
        return Some(b.clone());
    }
    if a.degree() == 1 {
        return Some(a.clone());
    }
    let ai = clear_denominators(a.coeffs());
    let bi = clear_denominators(b.coeffs());
    let member = |lam: &BigRational| {
        let coeffs = ai
            .iter()
            .zip(&bi)
            .map(|(x, y)| BigRational::from_integer(x.clone()) + lam * BigRational::from_integer(y.clone()))
            .collect();
        BinaryForm::new(coeffs).expect("same degree as the pencil")
    };
    let r = a.degree();
    let npts = 2 * r - 1;
    let ys: Vec<BigInt> = (0..npts as i64)
        .map(|i| {
            let g: Vec<BigInt> = ai.iter().zip(&bi).map(|(x, y)| x + y * BigInt::from(i)).collect();
            let (gx, gy) = partials(&g);
            resultant(&gx, &gy)
        })
        .collect();
    let disc = Poly::new(interpolate(&ys).into_iter().map(BigRational::from_integer).collect()).primitive();
    if disc.is_zero() {
        return None;
    }
    let roots = disc.isolate_real_roots();
    let samples: Vec<BigRational> = match roots.first() {
        None => vec![BigRational::zero()],
        Some((lo, _)) => std::iter::once(lo.clone()).chain(roots.iter().map(|(_, hi)| hi.clone())).collect(),
    };
    // Off the discriminant every member is square-free.
    samples.iter().map(member).find(|g| g.real_root_count() == r)
}

/// An apolar form of degree `d = deg f` with `d` distinct real roots.
///
/// Apolarity in degree `d` is one linear condition, so fixing `d - 1` real
/// roots leaves a unique last linear factor, which is real. The fixed roots
/// are shifted until that factor is new.
fn top_degree_witness(f: &BinaryForm) -> BinaryForm {
    let d = f.degree();
    let a = f.apolar_coords();
    let pair = |g: &[BigRational]| g.iter().zip(&a).map(|(x, y)| x * y).sum::<BigRational>();
    for shift in 0i64.. {
        // L = prod (x - t y) over d - 1 distinct integers t.
        let mut l = vec![BigRational::one()];
        for t in shift..shift + d as i64 - 1 {
            let mut next = vec![BigRational::zero(); l.len() + 1];
            for (k, c) in l.iter().enumerate() {
                next[k] += c;
                next[k + 1] -= c * BigRational::from_integer(t.into());
            }
            l = next;
        }
        let mut u = l.clone();
        u.push(BigRational::zero());
        let mut v = vec![BigRational::zero()];
        v.extend(l);
        let (pu, pv) = (pair(&u), pair(&v));
        let (alpha, beta) =
            if pu.is_zero() && pv.is_zero() { (BigRational::one(), BigRational::zero()) } else { (pv, -pu) };
        let g: Vec<BigRational> = u.iter().zip(&v).map(|(x, y)| &alpha * x + &beta * y).collect();
        let g = BinaryForm::new(g).expect("degree d >= 1");
        if g.is_hyperbolic() {
            return g;
        }
    }
    unreachable!("some shift avoids the finitely many bad root sets")
}

/// A rational point of the real line spread like `tan` of a uniform angle.
fn random_point(rng: &mut impl Rng) -> BigRational {
    let theta: f64 = rng.random_range(-1.5..1.5);
    rational_approx(theta.tan(), 8).expect("finite")
}

const SCREEN_ANGLES: usize = 128;

/// Sign changes of `g(cos phi, sin phi)` over a grid of `[0, pi)`, closing
/// the circle with the parity of the degree. A lower bound on the number
/// of real roots when the grid resolves them.
fn grid_sign_changes(g: &[f64], steps: usize) -> usize {
    let r = g.len() - 1;
    let eval = |phi: f64| {
        let (s, c) = phi.sin_cos();
        let mut spow = 1.0;
        g[1..].iter().fold(g[0], |acc, v| {
            spow *= s;
            acc * c + v * spow
        })
    };
    let first = eval(0.0);
    let mut prev = first;
    let mut changes = 0;
    for k in 1..steps {
        let v = eval(std::f64::consts::PI * k as f64 / steps as f64);
        if v != 0.0 {
            if prev * v < 0.0 {
                changes += 1;
            }
            prev = v;
        }
    }
    let closing = if r.is_multiple_of(2) { first } else { -first };
    if prev * closing < 0.0 {
        changes += 1;
    }
    changes
}

/// Floating-point scan of the pencil for a member whose sampled signs show
/// all real roots; any hit is confirmed exactly.
fn screen_pencil(a: &BinaryForm, b: &BinaryForm) -> Option<BinaryForm> {
    let r = a.degree();
    let to_f64 = |f: &BinaryForm| -> Vec<f64> {
        let v: Vec<f64> = f.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter().map(|x| x / n).collect()
    };
    let (af, bf) = (to_f64(a), to_f64(b));
    if af.iter().chain(&bf).any(|x| !x.is_finite()) {
        return None;
    }
    let steps = 48 * r;
    for k in 0..SCREEN_ANGLES {
        let theta = std::f64::consts::PI * (k as f64 + 0.5) / SCREEN_ANGLES as f64 - std::f64::consts::FRAC_PI_2;
        let (s, c) = theta.sin_cos();
        let g: Vec<f64> = af.iter().zip(&bf).map(|(x, y)| c * x + s * y).collect();
        if grid_sign_changes(&g, steps) < r {
            continue;
        }
        let lam = rational_approx(s / c, 1 << 20)?;
        let coeffs = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x + &lam * y).collect();
        let cand = BinaryForm::new(coeffs).ok()?;
        if cand.is_hyperbolic() {
            return Some(cand);
        }
    }
    None
}

/// Searches sub-pencils of forms vanishing at random real points.
fn hyperbolic_by_slices(basis: &[BinaryForm], r: u64, slices: usize) -> Option<BinaryForm> {
    let m = basis.len();
    let dehom: Vec<Poly> = basis.iter().map(BinaryForm::dehomogenize).collect();
    for slice in 0..slices as u64 {
        let mut rng = substream(SLICE_SEED, Domain::RootSlices, (r << 16) | slice);
        let mut points: Vec<BigRational> = Vec::new();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        let mut sub = basis.len();
        let mut guard = 0;
        while sub > 2 && guard < 8 * m {
            guard += 1;
            let t = random_point(&mut rng);
            if points.contains(&t) {
                continue;
            }
            rows.push(dehom.iter().map(|p| p.eval(&t)).collect());
            points.push(t);
            sub = m - crate::linalg::rational_rank(&rows);
        }
        let kernel = nullspace(&rows, m);
        if kernel.len() < 2 {
            continue;
        }
        let a = combine_rational(basis, &kernel[0]);
        let b = combine_rational(basis, &kernel[1]);
        if let Some(g) = screen_pencil(&a, &b).or_else(|| hyperbolic_in_pencil(&a, &b)) {
            return Some(g);
        }
    }
    None
}
