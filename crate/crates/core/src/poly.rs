//! Univariate polynomials over the rationals, with Sturm sequences and
//! real root isolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense polynomial, coefficients in ascending degree order, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * q(i as i64)).collect())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigRational::zero();
        Self::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.primitive();
        }
        a.monic()
    }

    /// Rescales by a positive rational to a primitive integer polynomial.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let ints = crate::linalg::clear_denominators(&self.coeffs);
        Self::new(ints.into_iter().map(BigRational::from_integer).collect())
    }

    /// No repeated complex roots. Constants count as square-free; zero does not.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            // The last member of the chain is gcd(p, p') up to a scalar.
            Some(_) => self.sturm_chain().ints.last().is_some_and(|g| g.len() == 1),
        }
    }

    pub fn sturm_chain(&self) -> SturmChain {
        SturmChain::new(self)
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        self.sturm_chain().count_all()
    }

    /// A strict bound on the absolute value of every root (Cauchy).
    pub fn root_bound(&self) -> BigRational {
        let lead = self.leading().expect("nonzero polynomial").abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        max + q(1)
    }

    /// Disjoint open intervals `(lo, hi)`, sorted, each containing exactly one
    /// distinct real root; endpoints are never roots.
    pub fn isolate_real_roots(&self) -> Vec<(BigRational, BigRational)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let chain = self.sturm_chain();
        // A power of two keeps every bisection point dyadic and short.
        let cauchy = self.root_bound().ceil().to_integer();
        let b = BigRational::from_integer(BigInt::one() << cauchy.bits());
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = chain.count_between(&lo, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push((lo, hi));
                continue;
            }
            let mid = chain.non_root_near(&((&lo + &hi) / q(2)), &(&hi - &lo));
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Shrinks an isolating interval until it is narrower than `width`.
    pub fn refine_root(
        &self,
        chain: &SturmChain,
        mut lo: BigRational,
        mut hi: BigRational,
        width: &BigRational,
    ) -> (BigRational, BigRational) {
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi) / q(2);
            if chain.sign_at(&mid) == 0 {
                return (mid.clone(), mid);
            }
            if chain.count_between(&lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }
}

/// Coefficients scaled by a positive rational to coprime integers; empty
/// for the zero polynomial.
fn to_primitive_ints(p: &Poly) -> Vec<BigInt> {
    if p.is_zero() {
        return Vec::new();
    }
    crate::linalg::clear_denominators(&p.coeffs)
}

/// Remainder of `a` modulo `b` scaled by `|lc(b)|^(deg a - deg b + 1)`;
/// empty when zero. Inputs are integer coefficient vectors without
/// trailing zeros.
fn positive_prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let m = b.len() - 1;
    let lead = &b[m];
    let lead_abs = lead.abs();
    let negative = lead.is_negative();
    let mut r = a.to_vec();
    let mut steps = (a.len() - 1 - m) + 1;
    while r.len() > m && !r.is_empty() {
        let top = r.len() - 1;
        let rl = r[top].clone();
        let shift = top - m;
        for c in r.iter_mut() {
            *c *= &lead_abs;
        }
        for (j, bc) in b.iter().enumerate() {
            let t = &rl * bc;
            if negative {
                r[shift + j] += t;
            } else {
                r[shift + j] -= t;
            }
        }
        steps -= 1;
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    if steps > 0 {
        let f = num_traits::pow(lead_abs, steps);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Sturm sequence of a polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    ints: Vec<Vec<BigInt>>,
}

impl SturmChain {
    fn new(p: &Poly) -> Self {
        // Subresultant recurrence on absolute values: every member is a
        // positive multiple of the classical Sturm remainder, and the
        // divisions are exact, so no content has to be removed.
        let mut polys = vec![to_primitive_ints(p), to_primitive_ints(&p.derivative())];
        if polys[1].is_empty() {
            polys.pop();
            return Self { ints: polys };
        }
        let (mut g, mut h) = (BigInt::one(), BigInt::one());
        loop {
            let n = polys.len();
            let (u, v) = (&polys[n - 2], &polys[n - 1]);
            let delta = (u.len() - v.len()) as u32;
            let r = positive_prem(u, v);
            if r.is_empty() {
                break;
            }
            let div = &g * num_traits::pow(h.clone(), delta as usize);
            let next: Vec<BigInt> = r.into_iter().map(|c| -(c / &div)).collect();
            g = v.last().expect("nonzero").abs();
            h = if delta == 0 {
                h
            } else {
                num_traits::pow(g.clone(), delta as usize) / num_traits::pow(h, delta as usize - 1)
            };
            polys.push(next);
        }
        Self { ints: polys }
    }

    fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Sign of an integer polynomial at `x`, by homogeneous Horner in `Z`.
    fn sign_at_ints(coeffs: &[BigInt], x: &BigRational) -> i8 {
        let (p, den) = (x.numer(), x.denom());
        let mut it = coeffs.iter().rev();
        let mut acc = it.next().cloned().unwrap_or_default();
        let mut qpow = BigInt::one();
        for c in it {
            qpow *= den;
            acc = acc * p + c * &qpow;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Sign of the chain's first polynomial (a positive multiple of the
    /// input) at `x`.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        Self::sign_at_ints(&self.ints[0], x)
    }

    /// A point close to `x` (within `width / 16`) that is not a root.
    fn non_root_near(&self, x: &BigRational, width: &BigRational) -> BigRational {
        if self.sign_at(x) != 0 {
            return x.clone();
        }
        let mut step = width / q(64);
        loop {
            let c = x + &step;
            if self.sign_at(&c) != 0 {
                return c;
            }
            step /= q(3);
        }
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.ints.iter().map(|p| Self::sign_at_ints(p, x)))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.ints.iter().map(|p| {
            let s = p.last().map_or(0, |c| c.signum().to_i8().unwrap_or(0));
            let odd = (p.len() - 1) % 2 == 1;
            if !positive && odd {
                -s
            } else {
                s
            }
        }))
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count_between(&self, lo: &BigRational, hi: &BigRational) -> usize {
        self.variations_at(lo).saturating_sub(self.variations_at(hi))
    }

    /// Distinct real roots on the whole line.
    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false).saturating_sub(self.variations_at_infinity(true))
    }
}

/// Rational approximation of `x` with denominator at most `max_den`
/// (continued fractions).
pub fn rational_approx(x: f64, max_den: u64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut v = x;
    let max_den = BigInt::from(max_den);
    for _ in 0..64 {
        let a = v.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
        if !v.is_finite() || v.abs() > 1e15 {
            break;
        }
    }
    if k1.is_zero() {
        None
    } else {
        Some(BigRational::new(h1, k1))
    }
}
