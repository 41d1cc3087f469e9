//! Maximum-rank bounds and the Waring comparison table.

use serde::{Deserialize, Serialize};

use crate::combinatorics::binom;
use crate::dimension::{waring_generic_rank, GenericRankResult, AH_EXCEPTIONS};
use crate::error::{Error, Result};
use crate::variety::VarietySpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundLabel {
    TwiceGeneric,
    TwiceGenericMinusOne,
    AmbientMinusDim,
    Proposition,
    Jelisiejew,
    BallicoDeParis,
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundEntry {
    pub label: BoundLabel,
    pub value: u64,
    pub source: String,
}

/// Inputs of the secant-codimension bound `max(s, (c + 1) k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropositionInput {
    /// Order of the secant variety used.
    pub k: u64,
    /// Its codimension.
    pub c: u64,
    /// Maximum rank of points on it (supplied by the caller).
    pub s: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub spec: VarietySpec,
    pub r_gen: u64,
    pub entries: Vec<BoundEntry>,
    pub best: u64,
}

/// `r_max <= 2 r_gen`: every point is a combination of two general points.
pub fn bound_twice_generic(r_gen: u64) -> Result<u64> {
    if r_gen == 0 {
        return Err(Error::input("generic rank must be positive"));
    }
    r_gen.checked_mul(2).ok_or(Error::Overflow("2 * r_gen"))
}

/// `r_max <= 2 r_gen - 1`, valid when the secant variety of order
/// `r_gen - 1` is a hypersurface (characteristic zero).
pub fn bound_hypersurface_refinement(r_gen: u64) -> Result<u64> {
    Ok(bound_twice_generic(r_gen)? - 1)
}

/// `r_max <= n + 1 - dim X` for `X` in `P^n`.
pub fn bound_ambient_minus_dim(ambient_projective_dim: u64, variety_dim: u64) -> Result<u64> {
    if variety_dim > ambient_projective_dim {
        return Err(Error::input("variety dimension exceeds ambient dimension"));
    }
    Ok(ambient_projective_dim + 1 - variety_dim)
}

/// `r_max <= max(s, (c + 1) k)` where the `k`-th secant variety has
/// codimension `c` and its points have rank at most `s`.
pub fn bound_proposition(k: u64, c: u64, s: u64) -> Result<u64> {
    if k == 0 || s == 0 {
        return Err(Error::input("k and s must be positive"));
    }
    let ck = (c + 1).checked_mul(k).ok_or(Error::Overflow("(c + 1) k"))?;
    Ok(s.max(ck))
}

fn check_nd(n: usize, d: usize) -> Result<(i64, i64)> {
    if n < 2 || d < 1 {
        return Err(Error::input(format!("need n >= 2, d >= 1 (got n={n}, d={d})")));
    }
    Ok((n as i64, d as i64))
}

/// Jelisiejew: `binom(n+d-2, n-1) - binom(n+d-6, n-3)`.
pub fn bound_jelisiejew(n: usize, d: usize) -> Result<u64> {
    let (n, d) = check_nd(n, d)?;
    let a = binom(n + d - 2, n - 1)?;
    let b = binom(n + d - 6, n - 3)?;
    a.checked_sub(b).ok_or(Error::Overflow("Jelisiejew bound"))
}

/// Ballico–De Paris: `binom(n+d-2, n-1) - binom(n+d-6, n-3) - binom(n+d-7, n-3)`.
pub fn bound_ballico_deparis(n: usize, d: usize) -> Result<u64> {
    let (ni, di) = check_nd(n, d)?;
    let c = binom(ni + di - 7, ni - 3)?;
    bound_jelisiejew(n, d)?.checked_sub(c).ok_or(Error::Overflow("Ballico-De Paris bound"))
}

/// Twice the generic Waring rank, with the four non-quadric
/// Alexander–Hirschowitz exceptions lowered by one (hypersurface case).
pub fn waring_max_bound(n: usize, d: usize) -> Result<u64> {
    if d < 3 {
        return Err(Error::Unsupported(format!(
            "the Waring bound covers degree >= 3; quadrics have r_max({n}, 2) = {n}"
        )));
    }
    let g = waring_generic_rank(n, d)?.r_gen as u64;
    if AH_EXCEPTIONS.contains(&(n, d)) {
        bound_hypersurface_refinement(g)
    } else {
        bound_twice_generic(g)
    }
}

/// Literature values of the maximum Waring rank.
pub fn known_waring_max(n: usize, d: usize) -> Option<(u64, &'static str)> {
    match (n, d) {
        (3, 3) => Some((5, "plane cubics")),
        (3, 4) => Some((7, "plane quartics")),
        (4, 3) => Some((7, "cubic surfaces")),
        (n, 2) => Some((n as u64, "quadrics: matrix rank")),
        (2, d) => Some((d as u64, "binary forms")),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaringTableRow {
    pub n: usize,
    pub d: usize,
    pub r_gen: u64,
    #[serde(rename = "r_max_J")]
    pub r_max_j: u64,
    #[serde(rename = "r_max_BDP")]
    pub r_max_bdp: u64,
    pub r_max_star: u64,
    pub r_max_known: Option<u64>,
    /// `2 r_gen - 1` when the congruence criterion applies outside the
    /// exceptional list; reported next to, never folded into, `r_max_star`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_max_refined: Option<u64>,
}

pub fn waring_table_row(n: usize, d: usize) -> Result<WaringTableRow> {
    let g = waring_generic_rank(n, d)?;
    let r_gen = g.r_gen as u64;
    let star = if d >= 3 && AH_EXCEPTIONS.contains(&(n, d)) {
        bound_hypersurface_refinement(r_gen)?
    } else {
        bound_twice_generic(r_gen)?
    };
    let refined = (!g.exceptional && g.hypersurface_below == Some(true))
        .then(|| bound_hypersurface_refinement(r_gen))
        .transpose()?;
    Ok(WaringTableRow {
        n,
        d,
        r_gen,
        r_max_j: bound_jelisiejew(n, d)?,
        r_max_bdp: bound_ballico_deparis(n, d)?,
        r_max_star: star,
        r_max_known: known_waring_max(n, d).map(|(v, _)| v),
        r_max_refined: refined,
    })
}

/// Rows for every `(n, d)` in the product of the two ranges, `n` outermost.
pub fn emit_waring_table(ns: &[usize], ds: &[usize]) -> Result<Vec<WaringTableRow>> {
    ns.iter().flat_map(|&n| ds.iter().map(move |&d| waring_table_row(n, d))).collect()
}

/// Aligned text rendering; one block per `n`.
pub fn format_waring_table(rows: &[WaringTableRow]) -> String {
    let mut out = String::new();
    let mut last_n = None;
    for row in rows {
        if last_n != Some(row.n) {
            if last_n.is_some() {
                out.push('\n');
            }
            out.push_str(&format!(
                "{:>3} {:>3} {:>6} {:>8} {:>10} {:>8} {:>6}\n",
                "n", "d", "r_gen", "r_max^J", "r_max^BDP", "r_max^*", "r_max"
            ));
            last_n = Some(row.n);
        }
        let known = row.r_max_known.map_or(String::new(), |v| v.to_string());
        out.push_str(&format!(
            "{:>3} {:>3} {:>6} {:>8} {:>10} {:>8} {:>6}\n",
            row.n, row.d, row.r_gen, row.r_max_j, row.r_max_bdp, row.r_max_star, known
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryFormFacts {
    pub d: usize,
    pub r_max: u64,
    pub r_gen: u64,
    /// `2 r_gen - 2` for even `d`, `2 r_gen - 1` for odd `d`; equals `r_max`.
    pub sharp_bound: u64,
}

pub fn binary_form_facts(d: usize) -> Result<BinaryFormFacts> {
    if d == 0 {
        return Err(Error::input("degree must be positive"));
    }
    let r_gen = (d as u64 + 2) / 2;
    let sharp = if d.is_multiple_of(2) { 2 * r_gen - 2 } else { 2 * r_gen - 1 };
    Ok(BinaryFormFacts { d, r_max: d as u64, r_gen, sharp_bound: sharp })
}

impl BoundReport {
    /// Every bound that applies to `spec` given its generic rank.
    pub fn for_spec(
        spec: &VarietySpec,
        generic: &GenericRankResult,
        proposition: Option<PropositionInput>,
    ) -> Result<Self> {
        if &generic.spec != spec {
            return Err(Error::input("generic rank result is for a different variety"));
        }
        let r_gen = generic.r_gen as u64;
        let amb = spec.ambient_affine_dim() as u64;
        let dim_x = spec.variety_dim() as u64;
        let mut entries = vec![BoundEntry {
            label: BoundLabel::TwiceGeneric,
            value: bound_twice_generic(r_gen)?,
            source: "sum of two general points of generic rank".into(),
        }];
        // X itself must not be a hypersurface for the refinement.
        if generic.hypersurface_below == Some(true) && dim_x + 2 < amb {
            entries.push(BoundEntry {
                label: BoundLabel::TwiceGenericMinusOne,
                value: bound_hypersurface_refinement(r_gen)?,
                source: "secant variety of order r_gen - 1 is a hypersurface".into(),
            });
        }
        entries.push(BoundEntry {
            label: BoundLabel::AmbientMinusDim,
            value: bound_ambient_minus_dim(amb - 1, dim_x)?,
            source: "n + 1 - dim X (characteristic zero)".into(),
        });
        if let VarietySpec::Veronese { n, d } = spec {
            if *d >= 3 {
                entries.push(BoundEntry {
                    label: BoundLabel::Jelisiejew,
                    value: bound_jelisiejew(*n, *d)?,
                    source: "Jelisiejew".into(),
                });
                entries.push(BoundEntry {
                    label: BoundLabel::BallicoDeParis,
                    value: bound_ballico_deparis(*n, *d)?,
                    source: "Ballico-De Paris".into(),
                });
            }
        }
        if let Some(p) = proposition {
            entries.push(BoundEntry {
                label: BoundLabel::Proposition,
                value: bound_proposition(p.k, p.c, p.s)?,
                source: format!("max(s, (c + 1) k) with k={}, c={}, s={}", p.k, p.c, p.s),
            });
        }
        entries.push(BoundEntry { label: BoundLabel::Trivial, value: amb, source: "basis of points of X".into() });
        let best = entries.iter().map(|e| e.value).min().expect("at least one entry");
        Ok(Self { spec: spec.clone(), r_gen, entries, best })
    }

    pub fn for_waring(n: usize, d: usize, proposition: Option<PropositionInput>) -> Result<Self> {
        let g = waring_generic_rank(n, d)?;
        let spec = VarietySpec::veronese(n, d)?;
        Self::for_spec(&spec, &g, proposition)
    }

    pub fn get(&self, label: BoundLabel) -> Option<u64> {
        self.entries.iter().find(|e| e.label == label).map(|e| e.value)
    }
}
