//! The translation quiver `ZA_k` with its shift, finite orbit quivers
//! `ZA_k / (tau^-s o [r])`, and classification of power components against
//! them.
//!
//! `ZA_k` uses the linear orientation `1 -> 2 -> ... -> k`: vertices `(p, i)`
//! with `p` any integer and `1 <= i <= k`, arrows `(p,i) -> (p,i+1)` and
//! `(p,i+1) -> (p+1,i)`, translation `(p,i) -> (p-1,i)`. The shift is
//! `[1](p,i) = (p+i, k+1-i)`, which squares to `tau^-(k+1)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{QuiverError, Result};
use crate::iso::iso_translation_quivers_with;
use crate::polygon::{gamma, Diagonal, Polygon};
use crate::power::{decompose, power, Component};
use crate::quiver::{Quiver, TranslationQuiver, VertexId};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZAVertex {
    pub slice: i64,
    pub row: u32,
}

impl ZAVertex {
    pub fn new(slice: i64, row: u32) -> Self {
        ZAVertex { slice, row }
    }
}

impl fmt::Display for ZAVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.slice, self.row)
    }
}

/// Arrow and translation rule of `ZA_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZA {
    k: u32,
}

impl ZA {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(QuiverError::InvalidArgument("ZA_k needs k >= 1".into()));
        }
        Ok(ZA { k })
    }

    pub fn rank(&self) -> u32 {
        self.k
    }

    pub fn contains(&self, v: ZAVertex) -> bool {
        (1..=self.k).contains(&v.row)
    }

    pub fn arrows_from(&self, v: ZAVertex) -> Vec<ZAVertex> {
        let mut out = Vec::with_capacity(2);
        if v.row < self.k {
            out.push(ZAVertex::new(v.slice, v.row + 1));
        }
        if v.row > 1 {
            out.push(ZAVertex::new(v.slice + 1, v.row - 1));
        }
        out
    }

    pub fn arrows_into(&self, v: ZAVertex) -> Vec<ZAVertex> {
        let mut out = Vec::with_capacity(2);
        if v.row > 1 {
            out.push(ZAVertex::new(v.slice, v.row - 1));
        }
        if v.row < self.k {
            out.push(ZAVertex::new(v.slice - 1, v.row + 1));
        }
        out
    }

    pub fn has_arrow(&self, from: ZAVertex, to: ZAVertex) -> bool {
        self.contains(from) && self.arrows_from(from).contains(&to)
    }

    pub fn tau(&self, v: ZAVertex) -> ZAVertex {
        ZAVertex::new(v.slice - 1, v.row)
    }

    pub fn tau_inverse(&self, v: ZAVertex) -> ZAVertex {
        ZAVertex::new(v.slice + 1, v.row)
    }

    /// `tau^-times`; negative `times` applies tau.
    pub fn tau_inverse_power(&self, v: ZAVertex, times: i64) -> ZAVertex {
        ZAVertex::new(v.slice + times, v.row)
    }

    pub fn shift(&self, v: ZAVertex) -> ZAVertex {
        ZAVertex::new(v.slice + v.row as i64, self.k + 1 - v.row)
    }

    pub fn shift_inverse(&self, v: ZAVertex) -> ZAVertex {
        let row = self.k + 1 - v.row;
        ZAVertex::new(v.slice - row as i64, row)
    }

    /// Translation quiver on the slices `lo..=hi` (tau defined where the
    /// translate stays inside the window).
    pub fn window(&self, lo: i64, hi: i64) -> TranslationQuiver {
        let verts: Vec<ZAVertex> = (lo..=hi)
            .flat_map(|p| (1..=self.k).map(move |i| ZAVertex::new(p, i)))
            .collect();
        let index: BTreeMap<ZAVertex, usize> =
            verts.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut q = Quiver::new(verts.iter().map(ZAVertex::to_string)).expect("distinct");
        for (i, v) in verts.iter().enumerate() {
            for w in self.arrows_from(*v) {
                if let Some(&j) = index.get(&w) {
                    q.add_arrow(VertexId(i), VertexId(j)).expect("in range");
                }
            }
        }
        let tau = verts
            .iter()
            .map(|v| index.get(&self.tau(*v)).map(|&j| VertexId(j)))
            .collect();
        TranslationQuiver::new(q, tau).expect("sizes agree")
    }
}

/// The automorphism `tau^-s o [r]` of `ZA_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutoEq {
    pub s: u32,
    pub r: u32,
}

impl AutoEq {
    pub fn new(s: u32, r: u32) -> Result<Self> {
        if s == 0 && r == 0 {
            return Err(QuiverError::InvalidArgument(
                "the identity does not give a finite orbit quiver".into(),
            ));
        }
        Ok(AutoEq { s, r })
    }

    /// Shift `r` times, then `tau^-s`.
    pub fn apply(&self, za: &ZA, v: ZAVertex) -> ZAVertex {
        let mut w = v;
        for _ in 0..self.r {
            w = za.shift(w);
        }
        za.tau_inverse_power(w, self.s as i64)
    }

    pub fn apply_inverse(&self, za: &ZA, v: ZAVertex) -> ZAVertex {
        let mut w = za.tau_inverse_power(v, -(self.s as i64));
        for _ in 0..self.r {
            w = za.shift_inverse(w);
        }
        w
    }
}

/// The smallest power of `g` that acts as a pure translation, found by
/// composing `g` with itself and probing every row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Period {
    /// Number of factors of `g` in the pure translation (1 or 2).
    factors: u32,
    /// `g^factors = tau^-slices`.
    slices: i64,
}

fn period(za: &ZA, g: &AutoEq) -> Period {
    let pure = |factors: u32| -> Option<i64> {
        let mut offset = None;
        for row in 1..=za.rank() {
            let start = ZAVertex::new(0, row);
            let mut v = start;
            for _ in 0..factors {
                v = g.apply(za, v);
            }
            if v.row != row || offset.is_some_and(|o| o != v.slice) {
                return None;
            }
            offset = Some(v.slice);
        }
        offset
    };
    for factors in 1..=2 {
        if let Some(slices) = pure(factors) {
            return Period { factors, slices };
        }
    }
    unreachable!("the shift squares to a translation")
}

/// Number of `g`-orbits on `ZA_k`, without building the quotient.
pub fn orbit_count(k: u32, s: u32, r: u32) -> Result<usize> {
    let za = ZA::new(k)?;
    let g = AutoEq::new(s, r)?;
    let p = period(&za, &g);
    Ok(k as usize * p.slices.unsigned_abs() as usize / p.factors as usize)
}

#[derive(Debug, Clone)]
pub struct OrbitQuiver {
    pub k: u32,
    pub g: AutoEq,
    /// Vertices labelled by the orbit representative `[p,i]` with the
    /// smallest `(p, i)` among those with `0 <= p < period`.
    pub quotient: TranslationQuiver,
    representatives: Vec<ZAVertex>,
}

impl OrbitQuiver {
    pub fn representatives(&self) -> &[ZAVertex] {
        &self.representatives
    }
}

/// Finite stable translation quiver of `g`-orbits of `ZA_k` for
/// `g = tau^-s o [r]`, with arrows and translation induced from `ZA_k`.
pub fn orbit_quiver(k: u32, s: u32, r: u32) -> Result<OrbitQuiver> {
    let za = ZA::new(k)?;
    let g = AutoEq::new(s, r)?;
    let p = period(&za, &g);
    if p.slices == 0 {
        return Err(QuiverError::NonFreeAction { k, s, r });
    }
    let span = p.slices.abs();
    let reduce = |v: ZAVertex| ZAVertex::new(v.slice.rem_euclid(span), v.row);
    let same_h_orbit =
        |a: ZAVertex, b: ZAVertex| a.row == b.row && (a.slice - b.slice).rem_euclid(span) == 0;
    // With g^2 pure, g^t for odd t is g composed with a pure translation, so
    // freeness only needs checking for g itself.
    if p.factors == 2 {
        for slice in 0..span {
            for row in 1..=k {
                let v = ZAVertex::new(slice, row);
                if same_h_orbit(g.apply(&za, v), v) {
                    return Err(QuiverError::NonFreeAction { k, s, r });
                }
            }
        }
    }
    let canon = |v: ZAVertex| {
        let a = reduce(v);
        if p.factors == 2 {
            a.min(reduce(g.apply(&za, a)))
        } else {
            a
        }
    };
    let representatives: Vec<ZAVertex> = (0..span)
        .flat_map(|slice| (1..=k).map(move |row| ZAVertex::new(slice, row)))
        .map(canon)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<ZAVertex, usize> = representatives
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, i))
        .collect();
    let mut quiver = Quiver::new(representatives.iter().map(ZAVertex::to_string))?;
    for (i, v) in representatives.iter().enumerate() {
        for w in za.arrows_from(*v) {
            quiver.add_arrow(VertexId(i), VertexId(index[&canon(w)]))?;
        }
    }
    let tau = representatives
        .iter()
        .map(|v| Some(VertexId(index[&canon(za.tau(*v))])))
        .collect();
    Ok(OrbitQuiver {
        k,
        g,
        quotient: TranslationQuiver::new(quiver, tau)?,
        representatives,
    })
}

/// A candidate orbit quiver matched to a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrbitParams {
    pub k: u32,
    pub s: u32,
    pub r: u32,
}

#[derive(Debug, Clone)]
pub struct ComponentEntry {
    pub size: usize,
    /// Least vertex label of the component.
    pub anchor: String,
    /// Rows (minimal gap minus one) met by the component.
    pub rows: Vec<u32>,
    pub arrow_pieces: usize,
    pub max_multiplicity: u32,
    /// All `(k, s, r)` in the search range whose orbit quiver is isomorphic,
    /// in lexicographic order.
    pub matches: Vec<OrbitParams>,
}

impl ComponentEntry {
    pub fn first_match(&self) -> Option<OrbitParams> {
        self.matches.first().copied()
    }
}

/// Comparison of observed parameters with the formula for odd `m`:
/// `r = (m-1)/2`, `s = (m-1)(n-1)/2 + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Agreement {
    Agrees,
    Deviates,
    /// Even `m`, or no non-principal components.
    NotApplicable,
}

#[derive(Debug, Clone)]
pub struct ComponentReport {
    pub n: u32,
    pub m: u32,
    pub principal: ComponentEntry,
    pub principal_iso: bool,
    pub others: Vec<ComponentEntry>,
    pub predicted: Option<(u32, u32)>,
    pub agreement: Agreement,
    /// Whether every matched `s` satisfies `s < n`.
    pub s_below_n: bool,
    /// Even `m`: observed `r` values and whether all lie in `[m/2, m]`.
    pub even_r_values: Vec<u32>,
    pub even_bound_holds: Option<bool>,
    pub notes: Vec<String>,
}

impl ComponentReport {
    pub fn all_matched(&self) -> bool {
        self.others.iter().all(|c| !c.matches.is_empty())
    }

    pub fn to_json(&self) -> Value {
        let params = |p: &OrbitParams| json!({"k": p.k, "s": p.s, "r": p.r});
        let entry = |c: &ComponentEntry| {
            json!({
                "size": c.size,
                "anchor": c.anchor,
                "rows": c.rows,
                "arrow_pieces": c.arrow_pieces,
                "max_multiplicity": c.max_multiplicity,
                "match": c.first_match().as_ref().map(params),
                "all_matches": c.matches.iter().map(params).collect::<Vec<_>>(),
            })
        };
        let mut principal = entry(&self.principal);
        principal["iso_to_gamma"] = json!(self.principal_iso);
        let agrees = match self.agreement {
            Agreement::Agrees => json!(true),
            Agreement::Deviates => json!(false),
            Agreement::NotApplicable => json!("n/a"),
        };
        let observed: Vec<Value> = self
            .others
            .iter()
            .map(|c| match c.first_match() {
                Some(p) => params(&p),
                None => Value::Null,
            })
            .collect();
        json!({
            "schema": crate::SCHEMA,
            "n": self.n,
            "m": self.m,
            "principal": principal,
            "others": self.others.iter().map(entry).collect::<Vec<_>>(),
            "ducrest_odd_m": {
                "predicted": self.predicted.map(|(r, s)| json!({"r": r, "s": s})),
                "observed": observed,
                "agrees": agrees,
                "s_below_n": self.s_below_n,
            },
            "even_m": {
                "r_values": self.even_r_values,
                "bound_holds": self.even_bound_holds,
            },
            "notes": self.notes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "power {} of the diagonal quiver ({},1): {} component(s)\n",
            self.m,
            self.n * self.m,
            1 + self.others.len()
        );
        let fmt_entry = |c: &ComponentEntry| {
            let m = match c.first_match() {
                Some(p) => format!("k={} s={} r={}", p.k, p.s, p.r),
                None => "unmatched".to_string(),
            };
            format!(
                "size {:>3}  through {:<8} rows {:?}  {}",
                c.size, c.anchor, c.rows, m
            )
        };
        out.push_str(&format!(
            "principal  {}  iso to ({},{}): {}\n",
            fmt_entry(&self.principal),
            self.n,
            self.m,
            self.principal_iso
        ));
        for c in &self.others {
            out.push_str(&format!("other      {}\n", fmt_entry(c)));
        }
        for note in &self.notes {
            out.push_str(&format!("note: {note}\n"));
        }
        out
    }
}

fn rows_of(component: &Component, polygon: Polygon) -> Vec<u32> {
    component
        .quiver
        .quiver()
        .labels()
        .iter()
        .map(|l| parse_diagonal(l, polygon).row().0)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

pub(crate) fn parse_diagonal(label: &str, polygon: Polygon) -> Diagonal {
    let inner = label.trim_start_matches('(').trim_end_matches(')');
    let (i, j) = inner
        .split_once(',')
        .expect("diagonal labels look like (i,j)");
    Diagonal::new(
        polygon,
        i.parse().expect("numeric endpoint"),
        j.parse().expect("numeric endpoint"),
    )
    .expect("labels come from diagonals")
}

/// Every `(k, s, r)` with `1 <= k <= n*m - 1`, `1 <= r <= m` and orbit count
/// equal to `size`, in lexicographic order.
fn candidates(size: usize, max_k: u32, max_r: u32) -> Vec<OrbitParams> {
    let mut out = Vec::new();
    for k in 1..=max_k {
        for r in 1..=max_r {
            for s in 0.. {
                let count = orbit_count(k, s, r).expect("r >= 1");
                if count > size {
                    break;
                }
                if count == size {
                    out.push(OrbitParams { k, s, r });
                }
            }
        }
    }
    out
}

/// Decomposes `gamma(n*m, 1)^m`, checks the component through `(1, m+2)`
/// against `gamma(n, m)`, and matches every other component against orbit
/// quivers by exhaustive isomorphism search.
pub fn classify_components(n: u32, m: u32) -> Result<ComponentReport> {
    classify_components_with(n, m, &Limits::default())
}

pub fn classify_components_with(n: u32, m: u32, limits: &Limits) -> Result<ComponentReport> {
    let polygon = Polygon::for_m_diagonals(n, m)?;
    let base = gamma(n * m, 1)?;
    if base.len() > limits.vertex_cap {
        return Err(QuiverError::SizeLimit {
            what: format!("diagonal quiver ({},1)", n * m),
            size: base.len(),
            cap: limits.vertex_cap,
        });
    }
    let pq = power(&base, m)?;
    let components = decompose(&pq);
    let principal_label = format!("(1,{})", m + 2);
    let expected = gamma(n, m)?;
    let max_k = (n * m - 1).max(1);

    let entries: Vec<(bool, ComponentEntry)> = components
        .par_iter()
        .map(|c| -> Result<(bool, ComponentEntry)> {
            let is_principal = c.contains_label(&principal_label);
            let matches = if is_principal {
                Vec::new()
            } else {
                let mut found = Vec::new();
                for p in candidates(c.len(), max_k, m) {
                    let oq = orbit_quiver(p.k, p.s, p.r)?;
                    if iso_translation_quivers_with(&c.quiver, &oq.quotient, limits)?.is_some() {
                        found.push(p);
                    }
                }
                found
            };
            Ok((
                is_principal,
                ComponentEntry {
                    size: c.len(),
                    anchor: c.quiver.quiver().label(VertexId(0)).to_string(),
                    rows: rows_of(c, polygon),
                    arrow_pieces: c.arrow_pieces,
                    max_multiplicity: c.quiver.quiver().max_multiplicity(),
                    matches,
                },
            ))
        })
        .collect::<Result<_>>()?;

    let mut principal = None;
    let mut others = Vec::new();
    let mut principal_iso = false;
    for ((is_principal, entry), c) in entries.into_iter().zip(&components) {
        if is_principal {
            principal_iso = iso_translation_quivers_with(&c.quiver, &expected, limits)?.is_some();
            principal = Some(entry);
        } else {
            others.push(entry);
        }
    }
    let principal = principal.expect("(1, m+2) lies in some component");

    let mut notes = Vec::new();
    let predicted = (m % 2 == 1).then(|| ((m - 1) / 2, (m - 1) * (n - 1) / 2 + 1));
    let agreement = match predicted {
        Some(_) if others.is_empty() => Agreement::NotApplicable,
        None => Agreement::NotApplicable,
        Some((r, s)) => {
            if others
                .iter()
                .all(|c| c.matches.iter().any(|p| p.r == r && p.s == s))
            {
                Agreement::Agrees
            } else {
                notes.push(format!(
                    "odd m: no match with (r, s) = ({r}, {s}) for at least one component"
                ));
                Agreement::Deviates
            }
        }
    };
    let s_below_n = others.iter().flat_map(|c| c.first_match()).all(|p| p.s < n);
    let (even_r_values, even_bound_holds) = if m.is_multiple_of(2) && !others.is_empty() {
        let rs: Vec<u32> = others
            .iter()
            .flat_map(|c| c.matches.iter().map(|p| p.r))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let holds = others
            .iter()
            .all(|c| c.matches.iter().any(|p| 2 * p.r >= m && p.r <= m));
        if !rs.contains(&m) {
            notes.push(format!("even m: r = m = {m} not observed among matches"));
        }
        (rs, Some(holds))
    } else {
        (Vec::new(), None)
    };
    let unmatched = others.iter().filter(|c| c.matches.is_empty()).count();
    if unmatched > 0 {
        notes.push(format!(
            "{unmatched} component(s) matched no orbit quiver in range"
        ));
    }
    if !principal_iso {
        notes.push("principal component is not isomorphic to the m-diagonal quiver".into());
    }
    Ok(ComponentReport {
        n,
        m,
        principal,
        principal_iso,
        others,
        predicted,
        agreement,
        s_below_n,
        even_r_values,
        even_bound_holds,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a3_rule() {
        let za = ZA::new(3).unwrap();
        assert!(za.has_arrow(ZAVertex::new(0, 1), ZAVertex::new(0, 2)));
        assert!(za.has_arrow(ZAVertex::new(0, 2), ZAVertex::new(1, 1)));
        assert!(!za.has_arrow(ZAVertex::new(0, 2), ZAVertex::new(0, 1)));
        assert_eq!(za.tau(ZAVertex::new(5, 2)), ZAVertex::new(4, 2));
    }

    #[test]
    fn shift_examples() {
        let za = ZA::new(3).unwrap();
        let v = ZAVertex::new(0, 1);
        assert_eq!(za.shift(v), ZAVertex::new(1, 3));
        assert_eq!(za.shift(za.shift(v)), ZAVertex::new(4, 1));
        assert_eq!(za.tau_inverse_power(v, 4), ZAVertex::new(4, 1));
        let a1 = ZA::new(1).unwrap();
        assert_eq!(a1.shift(ZAVertex::new(7, 1)), ZAVertex::new(8, 1));
        assert_eq!(za.shift_inverse(za.shift(v)), v);
    }

    #[test]
    fn windows_satisfy_mesh_axiom() {
        for k in 1..=5 {
            let w = ZA::new(k).unwrap().window(-5, 5);
            assert!(w.validate().passed(), "k = {k}");
        }
    }

    #[test]
    fn identity_rejected() {
        assert!(matches!(
            orbit_quiver(3, 0, 0),
            Err(QuiverError::InvalidArgument(_))
        ));
        assert!(ZA::new(0).is_err());
    }

    #[test]
    fn small_orbit_quivers() {
        assert_eq!(orbit_quiver(3, 0, 1).unwrap().quotient.len(), 6);
        assert_eq!(orbit_quiver(1, 1, 1).unwrap().quotient.len(), 2);
        let a1 = orbit_quiver(1, 1, 0).unwrap();
        assert_eq!(a1.quotient.len(), 1);
        assert!(a1.quotient.validate().passed());
    }

    #[test]
    fn inverse_undoes_apply() {
        let za = ZA::new(4).unwrap();
        let g = AutoEq::new(2, 3).unwrap();
        for row in 1..=4 {
            let v = ZAVertex::new(-3, row);
            assert_eq!(g.apply_inverse(&za, g.apply(&za, v)), v);
        }
    }
}
