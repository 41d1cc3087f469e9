//! The catalog of varieties, their affine-cone parameterizations and the
//! secant map.
//!
//! Coordinates are fixed once and for all:
//!
//! * Veronese / powers of forms: plain monomial coefficients (no multinomial
//!   weights), monomials ordered by exponent tuple, lexicographically
//!   decreasing.
//! * Segre: the outer product flattened row-major.
//! * Grassmannian: Plücker coordinates indexed by increasing `k`-subsets in
//!   lexicographic order. A parameter is the `k x m` matrix of spanning
//!   vectors, stored row by row.

mod cone;
mod point;

pub use cone::ConeMap;
pub use point::{evaluate, AmbientPoint, ConeParam, Decomposition, Term};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom, form_dim};
use crate::error::{Error, Result};

/// Hard cap on ambient and parameter dimensions accepted from callers.
pub const MAX_DIM: usize = 1 << 20;

/// Which variety `X` and its shape.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub enum VarietySpec {
    /// `d`-th powers of linear forms in `n` variables.
    Veronese { n: usize, d: usize },
    /// Rank-one tensors of the given format.
    Segre { formats: Vec<usize> },
    /// Decomposable `k`-vectors in `m` dimensions (Plücker embedding).
    Grassmannian { k: usize, m: usize },
    /// `k`-th powers of `d`-forms in `n` variables.
    PowerOfForms { n: usize, d: usize, k: usize },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
enum RawSpec {
    Veronese { n: usize, d: usize },
    Segre { formats: Vec<usize> },
    Grassmannian { k: usize, m: usize },
    PowerOfForms { n: usize, d: usize, k: usize },
}

impl TryFrom<RawSpec> for VarietySpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let spec = match raw {
            RawSpec::Veronese { n, d } => VarietySpec::Veronese { n, d },
            RawSpec::Segre { formats } => VarietySpec::Segre { formats },
            RawSpec::Grassmannian { k, m } => VarietySpec::Grassmannian { k, m },
            RawSpec::PowerOfForms { n, d, k } => VarietySpec::PowerOfForms { n, d, k },
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<VarietySpec> for RawSpec {
    fn from(spec: VarietySpec) -> Self {
        match spec {
            VarietySpec::Veronese { n, d } => RawSpec::Veronese { n, d },
            VarietySpec::Segre { formats } => RawSpec::Segre { formats },
            VarietySpec::Grassmannian { k, m } => RawSpec::Grassmannian { k, m },
            VarietySpec::PowerOfForms { n, d, k } => RawSpec::PowerOfForms { n, d, k },
        }
    }
}

impl std::fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VarietySpec::Veronese { n, d } => write!(f, "Veronese(n={n}, d={d})"),
            VarietySpec::Segre { formats } => {
                let s: Vec<String> = formats.iter().map(|x| x.to_string()).collect();
                write!(f, "Segre({})", s.join("x"))
            }
            VarietySpec::Grassmannian { k, m } => write!(f, "Grassmannian(k={k}, m={m})"),
            VarietySpec::PowerOfForms { n, d, k } => write!(f, "PowerOfForms(n={n}, d={d}, k={k})"),
        }
    }
}

impl VarietySpec {
    pub fn veronese(n: usize, d: usize) -> Result<Self> {
        let s = VarietySpec::Veronese { n, d };
        s.validate()?;
        Ok(s)
    }

    pub fn segre(formats: &[usize]) -> Result<Self> {
        let s = VarietySpec::Segre { formats: formats.to_vec() };
        s.validate()?;
        Ok(s)
    }

    pub fn grassmannian(k: usize, m: usize) -> Result<Self> {
        let s = VarietySpec::Grassmannian { k, m };
        s.validate()?;
        Ok(s)
    }

    pub fn power_of_forms(n: usize, d: usize, k: usize) -> Result<Self> {
        let s = VarietySpec::PowerOfForms { n, d, k };
        s.validate()?;
        Ok(s)
    }

    /// Checks the shape constraints and that both dimensions are representable.
    pub fn validate(&self) -> Result<()> {
        match self {
            VarietySpec::Veronese { n, d } => {
                if *n < 2 || *d < 1 {
                    return Err(Error::input(format!("Veronese needs n >= 2, d >= 1 (got n={n}, d={d})")));
                }
            }
            VarietySpec::Segre { formats } => {
                if formats.len() < 2 || formats.iter().any(|&f| f < 2) {
                    return Err(Error::input("Segre needs at least two factors, each of size >= 2"));
                }
            }
            VarietySpec::Grassmannian { k, m } => {
                if *k < 2 || *m <= *k {
                    return Err(Error::input(format!("Grassmannian needs k >= 2, m > k (got k={k}, m={m})")));
                }
                if *k > 8 {
                    return Err(Error::Unsupported(format!("Grassmannian with k={k} > 8")));
                }
            }
            VarietySpec::PowerOfForms { n, d, k } => {
                if *n < 2 || *d < 1 || *k < 2 {
                    return Err(Error::input(format!(
                        "PowerOfForms needs n >= 2, d >= 1, k >= 2 (got n={n}, d={d}, k={k})"
                    )));
                }
            }
        }
        let a = self.checked_ambient_dim()?;
        let p = self.checked_param_dim()?;
        if a > MAX_DIM || p > MAX_DIM {
            return Err(Error::Unsupported(format!("{self} is too large (ambient {a}, params {p})")));
        }
        Ok(())
    }

    fn checked_ambient_dim(&self) -> Result<usize> {
        match self {
            VarietySpec::Veronese { n, d } => form_dim(*n, *d),
            VarietySpec::Segre { formats } => formats
                .iter()
                .try_fold(1usize, |acc, &f| acc.checked_mul(f))
                .ok_or(Error::Overflow("Segre ambient dimension")),
            VarietySpec::Grassmannian { k, m } => {
                usize::try_from(binom(*m as i64, *k as i64)?).map_err(|_| Error::Overflow("Plücker dimension"))
            }
            VarietySpec::PowerOfForms { n, d, k } => {
                let kd = d.checked_mul(*k).ok_or(Error::Overflow("form degree"))?;
                form_dim(*n, kd)
            }
        }
    }

    fn checked_param_dim(&self) -> Result<usize> {
        match self {
            VarietySpec::Veronese { n, .. } => Ok(*n),
            VarietySpec::Segre { formats } => formats
                .iter()
                .try_fold(0usize, |acc, &f| acc.checked_add(f))
                .ok_or(Error::Overflow("Segre parameter dimension")),
            VarietySpec::Grassmannian { k, m } => k.checked_mul(*m).ok_or(Error::Overflow("Grassmannian parameters")),
            VarietySpec::PowerOfForms { n, d, .. } => form_dim(*n, *d),
        }
    }

    /// Dimension of the ambient affine space (`n + 1` for `X` in `P^n`).
    pub fn ambient_affine_dim(&self) -> usize {
        self.checked_ambient_dim().expect("validated spec")
    }

    /// Length of a cone parameter vector.
    pub fn param_dim(&self) -> usize {
        self.checked_param_dim().expect("validated spec")
    }

    /// `w` with `cone_point(t * param) = t^w * cone_point(param)`.
    pub fn homogeneity_weight(&self) -> u32 {
        match self {
            VarietySpec::Veronese { d, .. } => *d as u32,
            VarietySpec::Segre { formats } => formats.len() as u32,
            VarietySpec::Grassmannian { k, .. } => *k as u32,
            VarietySpec::PowerOfForms { k, .. } => *k as u32,
        }
    }

    /// Projective dimension of `X`.
    pub fn variety_dim(&self) -> usize {
        match self {
            VarietySpec::Veronese { n, .. } => n - 1,
            VarietySpec::Segre { formats } => formats.iter().map(|f| f - 1).sum(),
            VarietySpec::Grassmannian { k, m } => k * (m - k),
            VarietySpec::PowerOfForms { .. } => self.param_dim() - 1,
        }
    }

    /// Whether a real scalar can be pulled inside a single parameter block,
    /// i.e. whether `c * x` stays on the real cone for every real `c`.
    pub fn absorbs_real_sign(&self) -> bool {
        match self {
            VarietySpec::Segre { .. } | VarietySpec::Grassmannian { .. } => true,
            _ => self.homogeneity_weight() % 2 == 1,
        }
    }

    /// Precomputed parameterization.
    pub fn cone_map(&self) -> ConeMap {
        ConeMap::new(self)
    }
}

/// Evaluates the cone parameterization at `param`.
pub fn cone_point(spec: &VarietySpec, param: &ConeParam) -> Result<AmbientPoint> {
    let map = spec.cone_map();
    check_len(spec.param_dim(), param.values().len())?;
    let coeffs = match param.field() {
        crate::Field::Real => map.point(&param.real_values()).into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        crate::Field::Complex => map.point(param.values()),
    };
    AmbientPoint::new(spec.clone(), param.field(), coeffs)
}

/// Jacobian of the cone parameterization (`ambient_affine_dim x param_dim`).
pub fn cone_jacobian(spec: &VarietySpec, param: &ConeParam) -> Result<DMatrix<Complex64>> {
    check_len(spec.param_dim(), param.values().len())?;
    let cols = spec.cone_map().jacobian_columns(param.values());
    Ok(DMatrix::from_fn(spec.ambient_affine_dim(), cols.len(), |i, j| cols[j][i]))
}

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}
