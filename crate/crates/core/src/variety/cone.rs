use crate::combinatorics::{signed_permutations, subsets, MonomialBasis};
use crate::scalar::Scalar;

use super::VarietySpec;

/// A parameterization of the affine cone with all index tables precomputed.
///
/// Generic over the scalar type, so the same tables drive exact rational,
/// real and complex evaluation.
#[derive(Debug, Clone)]
pub struct ConeMap {
    ambient: usize,
    params: usize,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    /// `g -> g^k` for a `d`-form `g`; Veronese is the case `d = 1`.
    Forms {
        k: usize,
        /// Sizes of the bases of degree `d, 2d, ..., kd`.
        sizes: Vec<usize>,
        /// `tables[j]`: `basis((j+1)d) x basis(d) -> basis((j+2)d)`.
        tables: Vec<Vec<u32>>,
    },
    Segre {
        formats: Vec<usize>,
    },
    Grassmannian {
        k: usize,
        m: usize,
        subsets: Vec<Vec<usize>>,
        perms: Vec<(Vec<usize>, i64)>,
    },
}

impl ConeMap {
    pub fn new(spec: &VarietySpec) -> Self {
        let kind = match spec {
            VarietySpec::Veronese { n, d } => Self::forms(*n, 1, *d),
            VarietySpec::PowerOfForms { n, d, k } => Self::forms(*n, *d, *k),
            VarietySpec::Segre { formats } => Kind::Segre { formats: formats.clone() },
            VarietySpec::Grassmannian { k, m } => {
                Kind::Grassmannian { k: *k, m: *m, subsets: subsets(*m, *k), perms: signed_permutations(*k) }
            }
        };
        Self { ambient: spec.ambient_affine_dim(), params: spec.param_dim(), kind }
    }

    fn forms(n: usize, d: usize, k: usize) -> Kind {
        let bases: Vec<MonomialBasis> = (1..=k).map(|j| MonomialBasis::new(n, j * d)).collect();
        let tables = (0..k.saturating_sub(1)).map(|j| bases[j].product_table(&bases[0], &bases[j + 1])).collect();
        Kind::Forms { k, sizes: bases.iter().map(|b| b.len()).collect(), tables }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn param_dim(&self) -> usize {
        self.params
    }

    /// Cone point in the fixed basis. `params.len()` must equal `param_dim`.
    pub fn point<T: Scalar>(&self, params: &[T]) -> Vec<T> {
        debug_assert_eq!(params.len(), self.params);
        match &self.kind {
            Kind::Forms { k, sizes, tables } => Self::form_power(params, *k, sizes, tables),
            Kind::Segre { formats } => {
                let blocks = split_blocks(params, formats);
                outer(&blocks)
            }
            Kind::Grassmannian { k, m, subsets, perms } => subsets
                .iter()
                .map(|s| {
                    perms.iter().fold(T::zero(), |acc, (perm, sign)| {
                        let prod = (0..*k).fold(T::one(), |p, r| p * params[r * m + s[perm[r]]].clone());
                        if *sign > 0 {
                            acc + prod
                        } else {
                            acc - prod
                        }
                    })
                })
                .collect(),
        }
    }

    /// Columns of the Jacobian: column `j` is the derivative of the cone
    /// point with respect to parameter `j`.
    pub fn jacobian_columns<T: Scalar>(&self, params: &[T]) -> Vec<Vec<T>> {
        debug_assert_eq!(params.len(), self.params);
        match &self.kind {
            Kind::Forms { k, sizes, tables } => {
                let nb = sizes[0];
                if *k == 1 {
                    return (0..nb)
                        .map(|j| (0..nb).map(|i| if i == j { T::one() } else { T::zero() }).collect())
                        .collect();
                }
                // d/dg_c (g^k) = k * g^(k-1) * m_c
                let lower = Self::form_power(params, k - 1, sizes, tables);
                let table = &tables[k - 2];
                let kk = T::from_i64(*k as i64);
                (0..nb)
                    .map(|c| {
                        let mut col = vec![T::zero(); self.ambient];
                        for (a, v) in lower.iter().enumerate() {
                            if v.is_zero() {
                                continue;
                            }
                            col[table[a * nb + c] as usize] = kk.clone() * v.clone();
                        }
                        col
                    })
                    .collect()
            }
            Kind::Segre { formats } => {
                let blocks = split_blocks(params, formats);
                let mut cols = Vec::with_capacity(self.params);
                for (a, &f) in formats.iter().enumerate() {
                    for i in 0..f {
                        let unit: Vec<T> = (0..f).map(|t| if t == i { T::one() } else { T::zero() }).collect();
                        let mut b: Vec<&[T]> = blocks.clone();
                        b[a] = &unit;
                        cols.push(outer(&b));
                    }
                }
                cols
            }
            Kind::Grassmannian { k, m, subsets, perms } => {
                let mut cols = Vec::with_capacity(self.params);
                for i in 0..*k {
                    for j in 0..*m {
                        let col = subsets
                            .iter()
                            .map(|s| match s.iter().position(|&c| c == j) {
                                None => T::zero(),
                                Some(p) => perms.iter().filter(|(perm, _)| perm[i] == p).fold(
                                    T::zero(),
                                    |acc, (perm, sign)| {
                                        let prod = (0..*k)
                                            .filter(|&r| r != i)
                                            .fold(T::one(), |pr, r| pr * params[r * m + s[perm[r]]].clone());
                                        if *sign > 0 {
                                            acc + prod
                                        } else {
                                            acc - prod
                                        }
                                    },
                                ),
                            })
                            .collect();
                        cols.push(col);
                    }
                }
                cols
            }
        }
    }

    fn form_power<T: Scalar>(g: &[T], k: usize, sizes: &[usize], tables: &[Vec<u32>]) -> Vec<T> {
        let nb = sizes[0];
        let mut pow = g.to_vec();
        for j in 0..k - 1 {
            let mut next = vec![T::zero(); sizes[j + 1]];
            let table = &tables[j];
            for (a, pa) in pow.iter().enumerate() {
                if pa.is_zero() {
                    continue;
                }
                for (b, gb) in g.iter().enumerate() {
                    let idx = table[a * nb + b] as usize;
                    next[idx] = next[idx].clone() + pa.clone() * gb.clone();
                }
            }
            pow = next;
        }
        pow
    }
}

fn split_blocks<'a, T>(params: &'a [T], formats: &[usize]) -> Vec<&'a [T]> {
    let mut out = Vec::with_capacity(formats.len());
    let mut rest = params;
    for &f in formats {
        let (head, tail) = rest.split_at(f);
        out.push(head);
        rest = tail;
    }
    out
}

/// Row-major outer product of the blocks.
fn outer<T: Scalar>(blocks: &[&[T]]) -> Vec<T> {
    let mut acc = vec![T::one()];
    for b in blocks {
        let mut next = Vec::with_capacity(acc.len() * b.len());
        for x in &acc {
            for y in b.iter() {
                next.push(x.clone() * y.clone());
            }
        }
        acc = next;
    }
    acc
}
