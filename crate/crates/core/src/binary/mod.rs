//! Waring rank of binary forms, exact over ℂ and ℝ.
//!
//! A form `F = Σ binom(d,i) a_i x^{d-i} y^i` is apolar to
//! `G = Σ g_j X^{r-j} Y^j` exactly when `Σ_j a_{i+j} g_j = 0` for every
//! `i`, i.e. when `g` lies in the kernel of the Hankel catalecticant. A root
//! `[α:β]` of `G` corresponds to the linear form `αx + βy`; `F` is a sum of
//! `r` `d`-th powers of linear forms iff some square-free `G` of degree `r`
//! is apolar to it.
//!
//! The apolar ideal of a binary form is a complete intersection generated in
//! degrees `r1 <= r2` with `r1 + r2 = d + 2`. Every apolar form of degree
//! below `r2` is a multiple of the generator `G1`, which pins the complex rank
//! to `r1` (when `G1` is square-free) or `r2`.

mod parse;
mod real;
mod roots;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::binom;
use crate::error::{Error, Result};
use crate::linalg::nullspace;
use crate::poly::Poly;
use crate::scalar::Field;
use crate::variety::{AmbientPoint, VarietySpec};

pub use parse::{parse_binary_form, MAX_DEGREE};
pub use real::real_rank;
pub use roots::{exact_decomposition, expand_exact, sylvester_decompose, ExactTerm};

/// A binary form with rational coefficients in the basis
/// `x^d, x^{d-1} y, ..., y^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FormJson", into = "FormJson")]
pub struct BinaryForm {
    coeffs: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    d: usize,
    coeffs: Vec<RationalJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RationalJson {
    Int(i64),
    Text(String),
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::input(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// `p/q` in lowest terms, or `p` for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod rational_str {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_rational(&text).map_err(D::Error::custom)
    }
}

impl TryFrom<FormJson> for BinaryForm {
    type Error = Error;

    fn try_from(j: FormJson) -> Result<Self> {
        if j.coeffs.len() != j.d + 1 {
            return Err(Error::DimensionMismatch { expected: j.d + 1, got: j.coeffs.len() });
        }
        let coeffs = j
            .coeffs
            .into_iter()
            .map(|c| match c {
                RationalJson::Int(v) => Ok(BigRational::from_integer(v.into())),
                RationalJson::Text(s) => parse_rational(&s),
            })
            .collect::<Result<_>>()?;
        BinaryForm::new(coeffs)
    }
}

impl From<BinaryForm> for FormJson {
    fn from(f: BinaryForm) -> Self {
        FormJson { d: f.degree(), coeffs: f.coeffs.iter().map(|c| RationalJson::Text(format_rational(c))).collect() }
    }
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Coefficients of a product of binary forms given as coefficient vectors.
fn convolve(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl BinaryForm {
    /// A form of degree `coeffs.len() - 1 >= 1`. The zero form is allowed
    /// here but rejected by rank queries.
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::input("a binary form needs degree >= 1"));
        }
        if coeffs.len() - 1 > MAX_DEGREE as usize {
            return Err(Error::Unsupported(format!("binary forms of degree above {MAX_DEGREE}")));
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    /// Exact rational image of a real point of `Veronese(2, d)`.
    pub fn from_point(p: &AmbientPoint) -> Result<Self> {
        if !matches!(p.spec(), VarietySpec::Veronese { n: 2, .. }) {
            return Err(Error::input(format!("expected a point of Veronese(n=2, d), got {}", p.spec())));
        }
        if p.coeffs().iter().any(|z| z.im != 0.0) {
            return Err(Error::input("binary form has non-real coefficients"));
        }
        let coeffs = p
            .coeffs()
            .iter()
            .map(|z| BigRational::from_float(z.re).ok_or_else(|| Error::input("non-finite coefficient")))
            .collect::<Result<_>>()?;
        Self::new(coeffs)
    }

    pub fn to_point(&self) -> AmbientPoint {
        let coeffs: Vec<f64> = self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        AmbientPoint::real(VarietySpec::Veronese { n: 2, d: self.degree() }, &coeffs)
            .expect("degree >= 1 and finite coefficients")
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The power `(αx + βy)^d`.
    pub fn power_of_linear(alpha: &BigRational, beta: &BigRational, d: usize) -> Result<Self> {
        let mut c = vec![BigRational::one()];
        for _ in 0..d {
            c = convolve(&c, &[alpha.clone(), beta.clone()]);
        }
        Self::new(c)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        BinaryForm { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DimensionMismatch { expected: self.coeffs.len(), got: other.coeffs.len() });
        }
        Ok(BinaryForm { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(convolve(&self.coeffs, &other.coeffs))
    }

    /// Change of variables `F(a x + b y, c x + d y)` for `m = [[a, b], [c, d]]`.
    pub fn compose(&self, m: &[[BigRational; 2]; 2]) -> Self {
        let d = self.degree();
        let lx = [m[0][0].clone(), m[0][1].clone()];
        let ly = [m[1][0].clone(), m[1][1].clone()];
        let powers = |l: &[BigRational; 2]| {
            let mut out = vec![vec![BigRational::one()]];
            for k in 0..d {
                let next = convolve(&out[k], l);
                out.push(next);
            }
            out
        };
        let (px, py) = (powers(&lx), powers(&ly));
        let mut out = vec![BigRational::zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, v) in convolve(&px[d - i], &py[i]).into_iter().enumerate() {
                out[k] += c * v;
            }
        }
        BinaryForm { coeffs: out }
    }

    /// The apolarity coordinates `a_i = coeff_i / binom(d, i)`.
    pub fn apolar_coords(&self) -> Vec<BigRational> {
        let d = self.degree() as i64;
        self.coeffs.iter().enumerate().map(|(i, c)| c / q(binom(d, i as i64).expect("degree <= 64") as i64)).collect()
    }

    /// `G(t, 1)` as a polynomial in `t`.
    pub fn dehomogenize(&self) -> Poly {
        Poly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// No repeated root on the projective line.
    pub fn is_squarefree(&self) -> bool {
        match self.coeffs.as_slice() {
            [a, b, ..] if a.is_zero() && b.is_zero() => self.degree() == 1 && !self.is_zero(),
            _ => self.dehomogenize().is_squarefree(),
        }
    }

    /// Number of distinct real roots on the projective line.
    pub fn real_root_count(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        let at_infinity = usize::from(self.coeffs[0].is_zero());
        self.dehomogenize().count_real_roots() + at_infinity
    }

    /// Square-free with all roots real.
    pub fn is_hyperbolic(&self) -> bool {
        self.is_squarefree() && self.real_root_count() == self.degree()
    }

    /// Does this form, read as a differential operator, annihilate `f`?
    pub fn is_apolar_to(&self, f: &BinaryForm) -> bool {
        let r = self.degree();
        match catalecticant(f, r) {
            Ok(cat) => {
                cat.iter().all(|row| row.iter().zip(&self.coeffs).map(|(a, g)| a * g).sum::<BigRational>().is_zero())
            }
            Err(_) => false,
        }
    }
}

impl fmt::Display for BinaryForm {
    /// Writes e.g. `x^3 - (3/2)*x*y^2`, which parses back unchanged.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut mono = Vec::new();
            match d - i {
                0 => {}
                1 => mono.push("x".to_string()),
                e => mono.push(format!("x^{e}")),
            }
            match i {
                0 => {}
                1 => mono.push("y".to_string()),
                e => mono.push(format!("y^{e}")),
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if !mag.is_one() {
                let s = format_rational(&mag);
                if mag.is_integer() {
                    mono.insert(0, s);
                } else {
                    mono.insert(0, format!("({s})"));
                }
            }
            write!(f, "{}", mono.join("*"))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The `(d-r+1) x (r+1)` Hankel matrix with entry `(i, j) = a_{i+j}`.
pub fn catalecticant(f: &BinaryForm, r: usize) -> Result<Vec<Vec<BigRational>>> {
    let d = f.degree();
    if r > d {
        return Err(Error::input(format!("catalecticant order {r} exceeds degree {d}")));
    }
    let a = f.apolar_coords();
    Ok((0..=d - r).map(|i| a[i..=i + r].to_vec()).collect())
}

/// Basis of the degree-`r` apolar forms of `f`.
pub fn apolar_kernel(f: &BinaryForm, r: usize) -> Result<Vec<BinaryForm>> {
    if r == 0 {
        return Ok(Vec::new());
    }
    let cat = catalecticant(f, r)?;
    nullspace(&cat, r + 1).into_iter().map(BinaryForm::new).collect()
}

/// The low-degree generator of the apolar ideal.
#[derive(Debug, Clone)]
pub(crate) struct ApolarStructure {
    pub r1: usize,
    pub r2: usize,
    pub low: Vec<BinaryForm>,
}

pub(crate) fn apolar_structure(f: &BinaryForm) -> Result<ApolarStructure> {
    if f.is_zero() {
        return Err(Error::Degenerate("the zero form has no rank".into()));
    }
    let d = f.degree();
    for r in 1..=d {
        let low = apolar_kernel(f, r)?;
        if !low.is_empty() {
            return Ok(ApolarStructure { r1: r, r2: d + 2 - r, low });
        }
    }
    unreachable!("the kernel is nontrivial once r > d/2")
}

/// How thoroughly smaller ranks were excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Minimality {
    /// Every smaller rank was ruled out exactly.
    Proven,
    /// Some smaller rank was ruled out only by a finite randomized search.
    SearchBounded,
}

/// A rank together with the apolar form witnessing it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub apolar_form: BinaryForm,
    pub field: Field,
    pub minimality: Minimality,
}

impl RankCertificate {
    /// Checks the witness: right degree, apolar to `f`, square-free, and
    /// all-real-rooted in the real case.
    pub fn verify(&self, f: &BinaryForm) -> bool {
        let g = &self.apolar_form;
        g.degree() == self.rank
            && g.is_apolar_to(f)
            && g.is_squarefree()
            && (self.field == Field::Complex || g.real_root_count() == self.rank)
    }
}

/// Small integer coefficient vectors: unit vectors, points on the moment
/// curve, then every vector of `[-B, B]^m` for `B = 1, 2, ...` up to sign.
struct SmallCombos {
    m: usize,
    head: std::vec::IntoIter<Vec<i64>>,
    bound: i64,
    odo: Option<Vec<i64>>,
}

impl SmallCombos {
    fn new(m: usize) -> Self {
        let mut head = Vec::new();
        for i in 0..m {
            let mut e = vec![0; m];
            e[i] = 1;
            head.push(e);
        }
        if m > 1 {
            for s in [1i64, -1, 2, -2, 3, -3] {
                head.push((0..m as u32).map(|k| s.pow(k)).collect());
            }
        }
        SmallCombos { m, head: head.into_iter(), bound: 0, odo: None }
    }

    fn step(&mut self) -> Vec<i64> {
        let b = self.bound;
        match &mut self.odo {
            None => {
                self.bound = 1;
                self.odo = Some(vec![-1; self.m]);
            }
            Some(v) => {
                let mut i = 0;
                loop {
                    if i == v.len() {
                        self.bound = b + 1;
                        *v = vec![-(b + 1); self.m];
                        break;
                    }
                    if v[i] < b {
                        v[i] += 1;
                        break;
                    }
                    v[i] = -b;
                    i += 1;
                }
            }
        }
        self.odo.clone().expect("initialized")
    }
}

impl Iterator for SmallCombos {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        if let Some(v) = self.head.next() {
            return Some(v);
        }
        loop {
            let v = self.step();
            let on_shell = v.iter().any(|c| c.abs() == self.bound);
            let leading_positive = v.iter().find(|c| **c != 0).is_some_and(|c| *c > 0);
            if on_shell && leading_positive {
                return Some(v);
            }
        }
    }
}

fn combine(basis: &[BinaryForm], c: &[i64]) -> BinaryForm {
    let c: Vec<BigRational> = c.iter().map(|&k| q(k)).collect();
    combine_rational(basis, &c)
}

pub(crate) fn combine_rational(basis: &[BinaryForm], c: &[BigRational]) -> BinaryForm {
    let mut coeffs = vec![BigRational::zero(); basis[0].coeffs.len()];
    for (b, k) in basis.iter().zip(c) {
        if k.is_zero() {
            continue;
        }
        for (o, v) in coeffs.iter_mut().zip(&b.coeffs) {
            *o += v * k;
        }
    }
    BinaryForm { coeffs }
}

/// Square-free candidates examined after the first one while looking for an
/// all-real-rooted witness.
const REAL_PREFERENCE_WINDOW: usize = 16;

/// First square-free element among small combinations of `basis`, preferring
/// an all-real-rooted one among the first few square-free hits.
fn squarefree_element(basis: &[BinaryForm], limit: Option<usize>) -> Option<BinaryForm> {
    let mut first = None;
    let mut hits = 0;
    for (tried, c) in SmallCombos::new(basis.len()).enumerate() {
        if limit.is_some_and(|l| tried >= l) {
            break;
        }
        let g = combine(basis, &c);
        if g.is_zero() || !g.is_squarefree() {
            continue;
        }
        if g.real_root_count() == g.degree() {
            return Some(g);
        }
        first.get_or_insert(g);
        hits += 1;
        if hits > REAL_PREFERENCE_WINDOW {
            break;
        }
    }
    first
}

/// Complex Waring rank with a square-free apolar witness.
pub fn complex_rank(f: &BinaryForm) -> Result<RankCertificate> {
    let s = apolar_structure(f)?;
    let (rank, basis) =
        if s.low.len() == 1 && !s.low[0].is_squarefree() { (s.r2, apolar_kernel(f, s.r2)?) } else { (s.r1, s.low) };
    let g = squarefree_element(&basis, None).expect("the search covers every small combination");
    Ok(RankCertificate { rank, apolar_form: g, field: Field::Complex, minimality: Minimality::Proven })
}

/// Rank over the given field.
pub fn rank(f: &BinaryForm, field: Field) -> Result<RankCertificate> {
    match field {
        Field::Complex => complex_rank(f),
        Field::Real => real_rank(f),
    }
}
