//! Isomorphism search for translation quivers.
//!
//! Plain backtracking. Vertices of the first quiver are visited in
//! breadth-first order over arrows and translation links, so after the
//! first vertex of each component almost every choice is forced by an
//! already-mapped neighbour. Candidates are pre-filtered by a local
//! signature (degrees, whether tau and its inverse are defined, length of
//! the tau-orbit).

use std::collections::VecDeque;

use crate::error::{QuiverError, Result};
use crate::quiver::{TranslationQuiver, VertexId};
use crate::Limits;

/// Vertex map from the first quiver to the second, by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexBijection {
    map: Vec<usize>,
}

impl VertexBijection {
    pub fn image(&self, v: VertexId) -> VertexId {
        VertexId(self.map[v.0])
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn inverse(&self) -> VertexBijection {
        let mut inv = vec![0; self.map.len()];
        for (a, &b) in self.map.iter().enumerate() {
            inv[b] = a;
        }
        VertexBijection { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(a, &b)| a == b)
    }

    /// Label pairs `(label in a, label in b)`, in vertex order of `a`.
    pub fn label_pairs(
        &self,
        a: &TranslationQuiver,
        b: &TranslationQuiver,
    ) -> Vec<(String, String)> {
        a.quiver()
            .vertices()
            .map(|v| {
                (
                    a.quiver().label(v).to_string(),
                    b.quiver().label(self.image(v)).to_string(),
                )
            })
            .collect()
    }

    /// Checks the defining conditions directly: bijective, arrow
    /// multiplicities preserved for every ordered pair, and
    /// `phi(tau_a(x)) = tau_b(phi(x))` with matching domains.
    pub fn verify(&self, a: &TranslationQuiver, b: &TranslationQuiver) -> bool {
        let n = a.len();
        if n != b.len() || self.map.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &t in &self.map {
            if t >= n || hit[t] {
                return false;
            }
            hit[t] = true;
        }
        let (qa, qb) = (a.quiver(), b.quiver());
        for x in qa.vertices() {
            for y in qa.vertices() {
                if qa.multiplicity(x, y) != qb.multiplicity(self.image(x), self.image(y)) {
                    return false;
                }
            }
            match (a.tau(x), b.tau(self.image(x))) {
                (Some(tx), Some(ty)) if self.image(tx) == ty => {}
                (None, None) => {}
                _ => return false,
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Signature {
    out_degree: u32,
    in_degree: u32,
    tau_defined: bool,
    tau_inverse_defined: bool,
    orbit: usize,
}

#[derive(Debug, Clone, Copy)]
enum Link {
    Root,
    Out(usize),
    In(usize),
    Tau(usize),
    TauInverse(usize),
}

struct Prepared<'a> {
    tq: &'a TranslationQuiver,
    tau: Vec<Option<usize>>,
    tau_inv: Vec<Option<usize>>,
    sig: Vec<Signature>,
}

impl<'a> Prepared<'a> {
    fn new(tq: &'a TranslationQuiver) -> Self {
        let tau = tq.tau_table().to_vec();
        let mut tau_inv = vec![None; tq.len()];
        for (v, t) in tau.iter().enumerate() {
            if let Some(t) = t {
                tau_inv[*t] = Some(v);
            }
        }
        let sig = (0..tq.len())
            .map(|v| {
                let id = VertexId(v);
                Signature {
                    out_degree: tq.quiver().out_degree(id),
                    in_degree: tq.quiver().in_degree(id),
                    tau_defined: tau[v].is_some(),
                    tau_inverse_defined: tau_inv[v].is_some(),
                    orbit: orbit_length(&tau, &tau_inv, v),
                }
            })
            .collect();
        Prepared {
            tq,
            tau,
            tau_inv,
            sig,
        }
    }

    fn mult(&self, s: usize, t: usize) -> u32 {
        self.tq.quiver().multiplicity(VertexId(s), VertexId(t))
    }

    fn neighbours(&self, v: usize) -> Vec<usize> {
        let q = self.tq.quiver();
        let mut n: Vec<usize> = q
            .successors(VertexId(v))
            .chain(q.predecessors(VertexId(v)))
            .map(|(w, _)| w.0)
            .chain(self.tau[v])
            .chain(self.tau_inv[v])
            .collect();
        n.sort_unstable();
        n.dedup();
        n
    }
}

/// Length of the tau-cycle through `v`, or for a non-periodic vertex the
/// number of vertices on its maximal tau-chain, offset so the two kinds never
/// collide.
fn orbit_length(tau: &[Option<usize>], tau_inv: &[Option<usize>], v: usize) -> usize {
    let mut len = 1;
    let mut cur = v;
    while let Some(t) = tau[cur] {
        if t == v {
            return len;
        }
        cur = t;
        len += 1;
    }
    cur = v;
    while let Some(t) = tau_inv[cur] {
        cur = t;
        len += 1;
    }
    tau.len() + len
}

/// Default-cap wrapper around [`iso_translation_quivers_with`].
pub fn iso_translation_quivers(
    a: &TranslationQuiver,
    b: &TranslationQuiver,
) -> Result<Option<VertexBijection>> {
    iso_translation_quivers_with(a, b, &Limits::default())
}

/// Searches for a bijection preserving arrow multiplicities in both
/// directions and commuting with the translations. Deterministic: the first
/// isomorphism in vertex-index order of both quivers is returned.
pub fn iso_translation_quivers_with(
    a: &TranslationQuiver,
    b: &TranslationQuiver,
    limits: &Limits,
) -> Result<Option<VertexBijection>> {
    for (what, tq) in [("first quiver", a), ("second quiver", b)] {
        if tq.len() > limits.vertex_cap {
            return Err(QuiverError::SizeLimit {
                what: what.to_string(),
                size: tq.len(),
                cap: limits.vertex_cap,
            });
        }
    }
    if a.len() != b.len() || a.quiver().arrow_count() != b.quiver().arrow_count() {
        return Ok(None);
    }
    let pa = Prepared::new(a);
    let pb = Prepared::new(b);
    let mut sa = pa.sig.clone();
    let mut sb = pb.sig.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(None);
    }
    Ok(Search::new(&pa, &pb)
        .run()
        .map(|map| VertexBijection { map }))
}

struct Search<'p, 'a> {
    a: &'p Prepared<'a>,
    b: &'p Prepared<'a>,
    order: Vec<(usize, Link)>,
    nbrs_a: Vec<Vec<usize>>,
    nbrs_b: Vec<Vec<usize>>,
    fwd: Vec<Option<usize>>,
    back: Vec<Option<usize>>,
}

impl<'p, 'a> Search<'p, 'a> {
    fn new(a: &'p Prepared<'a>, b: &'p Prepared<'a>) -> Self {
        let n = a.tq.len();
        let nbrs_a: Vec<Vec<usize>> = (0..n).map(|v| a.neighbours(v)).collect();
        let nbrs_b: Vec<Vec<usize>> = (0..n).map(|v| b.neighbours(v)).collect();
        let order = visit_order(a, &nbrs_a);
        Search {
            a,
            b,
            order,
            nbrs_a,
            nbrs_b,
            fwd: vec![None; n],
            back: vec![None; n],
        }
    }

    fn candidates(&self, link: Link) -> Vec<usize> {
        let q = self.b.tq.quiver();
        let mut c: Vec<usize> = match link {
            Link::Root => (0..self.b.tq.len()).collect(),
            Link::Out(p) => {
                let pb = self.fwd[p].expect("anchor mapped first");
                q.successors(VertexId(pb)).map(|(w, _)| w.0).collect()
            }
            Link::In(p) => {
                let pb = self.fwd[p].expect("anchor mapped first");
                q.predecessors(VertexId(pb)).map(|(w, _)| w.0).collect()
            }
            Link::Tau(p) => self.b.tau[self.fwd[p].expect("anchor mapped first")]
                .into_iter()
                .collect(),
            Link::TauInverse(p) => self.b.tau_inv[self.fwd[p].expect("anchor mapped first")]
                .into_iter()
                .collect(),
        };
        c.retain(|&w| self.back[w].is_none());
        c
    }

    fn consistent(&self, v: usize, w: usize) -> bool {
        if self.a.sig[v] != self.b.sig[w] {
            return false;
        }
        let (a, b) = (self.a, self.b);
        if a.mult(v, v) != b.mult(w, w) {
            return false;
        }
        for &x in &self.nbrs_a[v] {
            let Some(y) = self.fwd[x] else { continue };
            if a.mult(v, x) != b.mult(w, y) || a.mult(x, v) != b.mult(y, w) {
                return false;
            }
            if (a.tau[v] == Some(x)) != (b.tau[w] == Some(y))
                || (a.tau[x] == Some(v)) != (b.tau[y] == Some(w))
            {
                return false;
            }
        }
        // A mapped neighbour of w must come from a neighbour of v.
        for &y in &self.nbrs_b[w] {
            if let Some(x) = self.back[y] {
                if self.nbrs_a[v].binary_search(&x).is_err() {
                    return false;
                }
            }
        }
        true
    }

    fn run(mut self) -> Option<Vec<usize>> {
        let n = self.order.len();
        if n == 0 {
            return Some(Vec::new());
        }
        let mut stack: Vec<(Vec<usize>, usize)> = Vec::with_capacity(n);
        stack.push((self.candidates(self.order[0].1), 0));
        loop {
            let depth = stack.len() - 1;
            let v = self.order[depth].0;
            if let Some(prev) = self.fwd[v].take() {
                self.back[prev] = None;
            }
            let (cands, cursor) = stack.last_mut().unwrap();
            let mut chosen = None;
            while *cursor < cands.len() {
                let w = cands[*cursor];
                *cursor += 1;
                if self.back[w].is_none() && self.consistent(v, w) {
                    chosen = Some(w);
                    break;
                }
            }
            match chosen {
                Some(w) => {
                    self.fwd[v] = Some(w);
                    self.back[w] = Some(v);
                    if depth + 1 == n {
                        return Some(self.fwd.iter().map(|x| x.unwrap()).collect());
                    }
                    let next = self.candidates(self.order[depth + 1].1);
                    stack.push((next, 0));
                }
                None => {
                    stack.pop();
                    if stack.is_empty() {
                        return None;
                    }
                }
            }
        }
    }
}

fn visit_order(a: &Prepared<'_>, nbrs: &[Vec<usize>]) -> Vec<(usize, Link)> {
    let n = a.tq.len();
    let q = a.tq.quiver();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        order.push((root, Link::Root));
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &nbrs[v] {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                let link = if a.tau[v] == Some(w) {
                    Link::Tau(v)
                } else if a.tau_inv[v] == Some(w) {
                    Link::TauInverse(v)
                } else if q.multiplicity(VertexId(v), VertexId(w)) > 0 {
                    Link::Out(v)
                } else {
                    Link::In(v)
                };
                order.push((w, link));
                queue.push_back(w);
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn path_a3() -> TranslationQuiver {
        let mut q = Quiver::new(["1", "2", "3"]).unwrap();
        q.add_arrow(VertexId(0), VertexId(1)).unwrap();
        q.add_arrow(VertexId(1), VertexId(2)).unwrap();
        TranslationQuiver::new(q, vec![None, None, None]).unwrap()
    }

    #[test]
    fn reversed_labels_found() {
        let a = path_a3();
        let mut q = Quiver::new(["c", "b", "a"]).unwrap();
        q.add_arrow(VertexId(2), VertexId(1)).unwrap();
        q.add_arrow(VertexId(1), VertexId(0)).unwrap();
        let b = TranslationQuiver::new(q, vec![None, None, None]).unwrap();
        let phi = iso_translation_quivers(&a, &b).unwrap().unwrap();
        assert!(phi.verify(&a, &b));
        assert_eq!(
            phi.label_pairs(&a, &b),
            vec![
                ("1".to_string(), "a".to_string()),
                ("2".to_string(), "b".to_string()),
                ("3".to_string(), "c".to_string())
            ]
        );
    }

    #[test]
    fn orientation_matters() {
        let a = path_a3();
        let mut q = Quiver::new(["1", "2", "3"]).unwrap();
        q.add_arrow(VertexId(0), VertexId(1)).unwrap();
        q.add_arrow(VertexId(2), VertexId(1)).unwrap();
        let b = TranslationQuiver::new(q, vec![None, None, None]).unwrap();
        assert_eq!(iso_translation_quivers(&a, &b).unwrap(), None);
    }

    #[test]
    fn translation_must_commute() {
        // Same arrows, different translations.
        let mut q = Quiver::new(["x", "y"]).unwrap();
        q.add_arrow(VertexId(0), VertexId(1)).unwrap();
        let a = TranslationQuiver::new(q.clone(), vec![None, Some(VertexId(0))]).unwrap();
        let b = TranslationQuiver::new(q, vec![None, None]).unwrap();
        assert_eq!(iso_translation_quivers(&a, &b).unwrap(), None);
    }

    #[test]
    fn size_cap_enforced() {
        let a = path_a3();
        let limits = Limits {
            vertex_cap: 2,
            ..Limits::default()
        };
        assert!(matches!(
            iso_translation_quivers_with(&a, &a, &limits),
            Err(QuiverError::SizeLimit {
                size: 3,
                cap: 2,
                ..
            })
        ));
    }

    #[test]
    fn empty_quivers_are_isomorphic() {
        let e = TranslationQuiver::new(Quiver::default(), vec![]).unwrap();
        assert!(iso_translation_quivers(&e, &e).unwrap().unwrap().is_empty());
    }
}
