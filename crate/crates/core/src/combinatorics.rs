//! Binomial coefficients and monomial bases.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// `binom(a, b)` with the convention that it vanishes when `a < b`, `a < 0`
/// or `b < 0`, and `binom(a, 0) = 1` for `a >= 0`.
pub fn binom(a: i64, b: i64) -> Result<u64> {
    if a < 0 || b < 0 || a < b {
        return Ok(0);
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc.checked_mul(a - i).ok_or(Error::Overflow("binomial coefficient"))? / (i + 1);
    }
    u64::try_from(acc).map_err(|_| Error::Overflow("binomial coefficient"))
}

/// Number of degree-`d` monomials in `n` variables.
pub fn form_dim(n: usize, d: usize) -> Result<usize> {
    let v = binom((n + d) as i64 - 1, n as i64 - 1)?;
    usize::try_from(v).map_err(|_| Error::Overflow("form dimension"))
}

/// Exponent vectors of degree `d` in `n` variables, lexicographically
/// decreasing: for `n = 2, d = 2` this is `x^2, xy, y^2`.
pub fn monomials(n: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(n, d as u32, &mut Vec::with_capacity(n), &mut out);
    out
}

/// A monomial basis with index lookup.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub n: usize,
    pub d: usize,
    pub exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Self {
        let exps = monomials(n, d);
        let index = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Self { n, d, exps, index }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn index_of(&self, exp: &[u32]) -> Option<usize> {
        self.index.get(exp).copied()
    }

    /// Table `t[i * rhs.len() + j]` = index in `out` of `self[i] * rhs[j]`.
    pub fn product_table(&self, rhs: &MonomialBasis, out: &MonomialBasis) -> Vec<u32> {
        let mut t = Vec::with_capacity(self.len() * rhs.len());
        let mut buf = vec![0u32; self.n];
        for a in &self.exps {
            for b in &rhs.exps {
                for k in 0..self.n {
                    buf[k] = a[k] + b[k];
                }
                t.push(out.index_of(&buf).expect("product degree matches") as u32);
            }
        }
        t
    }
}

/// All increasing `k`-subsets of `0..m` in lexicographic order.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Permutations of `0..k` with their signs.
pub fn signed_permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    fn heap(n: usize, perm: &mut Vec<usize>, sign: &mut i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if n <= 1 {
            out.push((perm.clone(), *sign));
            return;
        }
        for i in 0..n - 1 {
            heap(n - 1, perm, sign, out);
            if n.is_multiple_of(2) {
                perm.swap(i, n - 1);
            } else {
                perm.swap(0, n - 1);
            }
            *sign = -*sign;
        }
        heap(n - 1, perm, sign, out);
    }
    let mut sign = 1;
    heap(k, &mut perm, &mut sign, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_convention() {
        assert_eq!(binom(5, 2).unwrap(), 10);
        assert_eq!(binom(0, 0).unwrap(), 1);
        assert_eq!(binom(-1, 0).unwrap(), 0);
        assert_eq!(binom(1, 2).unwrap(), 0);
        assert_eq!(binom(3, -1).unwrap(), 0);
        assert_eq!(binom(14, 4).unwrap(), 1001);
        assert!(binom(200, 100).is_err());
    }

    #[test]
    fn monomials_lex_decreasing() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        let m = monomials(3, 2);
        assert_eq!(m.len(), 6);
        assert_eq!(m[0], vec![2, 0, 0]);
        assert_eq!(m[1], vec![1, 1, 0]);
        assert_eq!(m[2], vec![1, 0, 1]);
        assert_eq!(m[3], vec![0, 2, 0]);
        assert_eq!(m[5], vec![0, 0, 2]);
        assert_eq!(monomials(4, 6).len(), form_dim(4, 6).unwrap());
    }

    #[test]
    fn subsets_and_permutations() {
        assert_eq!(subsets(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let p = signed_permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().map(|(_, s)| s).sum::<i64>(), 0);
        // sign agrees with inversion parity
        for (perm, s) in &p {
            let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
            assert_eq!(*s, if inv % 2 == 0 { 1 } else { -1 });
        }
    }
}
