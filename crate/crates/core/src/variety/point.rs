use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Field;

use super::{check_len, VarietySpec};

fn check_field(field: Field, values: &[Complex64], what: &str) -> Result<()> {
    if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::input(format!("{what} has non-finite entries")));
    }
    if field == Field::Real && values.iter().any(|z| z.im != 0.0) {
        return Err(Error::input(format!("{what} is real but has nonzero imaginary parts")));
    }
    Ok(())
}

fn split(values: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    values.iter().map(|z| (z.re, z.im)).unzip()
}

fn join(field: Field, re: Vec<f64>, im: Option<Vec<f64>>, what: &str) -> Result<Vec<Complex64>> {
    let im = match im {
        Some(im) => {
            check_len(re.len(), im.len())?;
            im
        }
        None if field == Field::Complex => {
            return Err(Error::input(format!("complex {what} is missing its imaginary parts")));
        }
        None => vec![0.0; re.len()],
    };
    Ok(re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect())
}

/// A coefficient vector in the ambient space of a variety.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PointJson", into = "PointJson")]
pub struct AmbientPoint {
    spec: VarietySpec,
    field: Field,
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct PointJson {
    #[serde(flatten)]
    spec: VarietySpec,
    field: Field,
    coeffs_re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeffs_im: Option<Vec<f64>>,
}

impl TryFrom<PointJson> for AmbientPoint {
    type Error = Error;

    fn try_from(j: PointJson) -> Result<Self> {
        let coeffs = join(j.field, j.coeffs_re, j.coeffs_im, "point")?;
        AmbientPoint::new(j.spec, j.field, coeffs)
    }
}

impl From<AmbientPoint> for PointJson {
    fn from(p: AmbientPoint) -> Self {
        let (re, im) = split(&p.coeffs);
        PointJson { spec: p.spec, field: p.field, coeffs_re: re, coeffs_im: (p.field == Field::Complex).then_some(im) }
    }
}

impl AmbientPoint {
    pub fn new(spec: VarietySpec, field: Field, coeffs: Vec<Complex64>) -> Result<Self> {
        spec.validate()?;
        check_len(spec.ambient_affine_dim(), coeffs.len())?;
        check_field(field, &coeffs, "point")?;
        Ok(Self { spec, field, coeffs })
    }

    pub fn real(spec: VarietySpec, coeffs: &[f64]) -> Result<Self> {
        Self::new(spec, Field::Real, coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero(spec: VarietySpec, field: Field) -> Self {
        let n = spec.ambient_affine_dim();
        Self { spec, field, coeffs: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn spec(&self) -> &VarietySpec {
        &self.spec
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn real_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|z| z.re).collect()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||self - other|| / ||other||` (absolute distance if `other` is zero).
    pub fn relative_distance(&self, other: &AmbientPoint) -> f64 {
        let diff: f64 = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        let n = other.norm();
        if n == 0.0 {
            diff
        } else {
            diff / n
        }
    }
}

/// A point of the parameter space of the cone.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeParam {
    field: Field,
    values: Vec<Complex64>,
}

impl ConeParam {
    pub fn new(field: Field, values: Vec<Complex64>) -> Result<Self> {
        check_field(field, &values, "parameter")?;
        Ok(Self { field, values })
    }

    pub fn real(values: &[f64]) -> Self {
        Self { field: Field::Real, values: values.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn complex(values: Vec<Complex64>) -> Self {
        Self { field: Field::Complex, values }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

/// One summand `coeff * cone_point(param)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub param: ConeParam,
}

/// A decomposition `sum_i c_i * cone_point(param_i)`.
///
/// `residual` is the relative distance to the point it was built for;
/// `None` marks a decomposition that is exact by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DecompositionJson", into = "DecompositionJson")]
pub struct Decomposition {
    spec: VarietySpec,
    field: Field,
    terms: Vec<Term>,
    residual: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff_re: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeff_im: Option<f64>,
    param_re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param_im: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    #[serde(flatten)]
    spec: VarietySpec,
    field: Field,
    terms: Vec<TermJson>,
    residual: Option<f64>,
}

impl TryFrom<DecompositionJson> for Decomposition {
    type Error = Error;

    fn try_from(j: DecompositionJson) -> Result<Self> {
        let terms = j
            .terms
            .into_iter()
            .map(|t| {
                let coeff = join(j.field, vec![t.coeff_re], t.coeff_im.map(|x| vec![x]), "coefficient")?[0];
                let values = join(j.field, t.param_re, t.param_im, "parameter")?;
                Ok(Term { coeff, param: ConeParam::new(j.field, values)? })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(r) = j.residual {
            if !(r.is_finite() && r >= 0.0) {
                return Err(Error::input("residual must be a nonnegative finite number"));
            }
        }
        Decomposition::new(j.spec, j.field, terms, j.residual)
    }
}

impl From<Decomposition> for DecompositionJson {
    fn from(d: Decomposition) -> Self {
        let complex = d.field == Field::Complex;
        let terms = d
            .terms
            .iter()
            .map(|t| {
                let (re, im) = split(t.param.values());
                TermJson {
                    coeff_re: t.coeff.re,
                    coeff_im: complex.then_some(t.coeff.im),
                    param_re: re,
                    param_im: complex.then_some(im),
                }
            })
            .collect();
        DecompositionJson { spec: d.spec, field: d.field, terms, residual: d.residual }
    }
}

impl Decomposition {
    /// Validates every term: matching field and length, nonzero parameter.
    pub fn new(spec: VarietySpec, field: Field, terms: Vec<Term>, residual: Option<f64>) -> Result<Self> {
        spec.validate()?;
        let pd = spec.param_dim();
        for t in &terms {
            if t.param.field() != field {
                return Err(Error::input("decomposition mixes real and complex terms"));
            }
            check_len(pd, t.param.values().len())?;
            check_field(field, std::slice::from_ref(&t.coeff), "coefficient")?;
            if t.param.is_zero() {
                return Err(Error::input("decomposition term has a zero parameter"));
            }
        }
        Ok(Self { spec, field, terms, residual })
    }

    pub fn empty(spec: VarietySpec, field: Field) -> Self {
        Self { spec, field, terms: Vec::new(), residual: None }
    }

    pub fn spec(&self) -> &VarietySpec {
        &self.spec
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn residual(&self) -> Option<f64> {
        self.residual
    }

    pub fn with_residual(mut self, residual: Option<f64>) -> Self {
        self.residual = residual;
        self
    }

    /// Concatenates two decompositions of the same variety and field.
    pub fn concat(mut self, other: Decomposition) -> Result<Self> {
        if self.spec != other.spec || self.field != other.field {
            return Err(Error::input("cannot concatenate decompositions of different varieties or fields"));
        }
        self.terms.extend(other.terms);
        self.residual = None;
        Ok(self)
    }

    /// Multiplies every coefficient by `s` (must be real for real decompositions).
    pub fn scaled(&self, s: Complex64) -> Result<Self> {
        let terms = self.terms.iter().map(|t| Term { coeff: t.coeff * s, param: t.param.clone() }).collect();
        Decomposition::new(self.spec.clone(), self.field, terms, None)
    }
}

/// The secant map with explicit weights: `sum_i c_i * cone_point(param_i)`.
pub fn evaluate(dec: &Decomposition) -> Result<AmbientPoint> {
    let map = dec.spec.cone_map();
    let mut acc = vec![Complex64::new(0.0, 0.0); map.ambient_dim()];
    for t in &dec.terms {
        if t.param.field() != dec.field {
            return Err(Error::input("decomposition mixes real and complex terms"));
        }
        check_len(map.param_dim(), t.param.values().len())?;
        match dec.field {
            Field::Real => {
                let x = map.point(&t.param.real_values());
                for (a, v) in acc.iter_mut().zip(x) {
                    a.re += t.coeff.re * v;
                }
            }
            Field::Complex => {
                let x = map.point(t.param.values());
                for (a, v) in acc.iter_mut().zip(x) {
                    *a += t.coeff * v;
                }
            }
        }
    }
    AmbientPoint::new(dec.spec.clone(), dec.field, acc)
}
