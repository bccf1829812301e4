//! Finite quivers and translation quivers.
//!
//! Vertices are indexed `0..len` in insertion order; every vertex also carries
//! a unique display label. Arrows form a multiset of ordered pairs, stored as
//! multiplicities. All orderings in this module (components, exports) follow
//! vertex index order, so output is reproducible byte for byte.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::error::{QuiverError, Result};

/// Index of a vertex inside one particular quiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Quiver {
    labels: Vec<String>,
    lookup: HashMap<String, usize>,
    out: Vec<BTreeMap<usize, u32>>,
    inc: Vec<BTreeMap<usize, u32>>,
}

impl Quiver {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut q = Quiver::default();
        for label in labels {
            q.add_vertex(label)?;
        }
        Ok(q)
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<VertexId> {
        let label = label.into();
        if self.lookup.contains_key(&label) {
            return Err(QuiverError::DuplicateLabel(label));
        }
        let id = self.labels.len();
        self.lookup.insert(label.clone(), id);
        self.labels.push(label);
        self.out.push(BTreeMap::new());
        self.inc.push(BTreeMap::new());
        Ok(VertexId(id))
    }

    /// Adds one more arrow `source -> target` (multiplicities accumulate).
    pub fn add_arrow(&mut self, source: VertexId, target: VertexId) -> Result<()> {
        self.add_arrows(source, target, 1)
    }

    pub fn add_arrows(&mut self, source: VertexId, target: VertexId, count: u32) -> Result<()> {
        self.check(source)?;
        self.check(target)?;
        if count == 0 {
            return Ok(());
        }
        *self.out[source.0].entry(target.0).or_insert(0) += count;
        *self.inc[target.0].entry(source.0).or_insert(0) += count;
        Ok(())
    }

    /// Removes one arrow `source -> target`; returns whether one was present.
    pub fn remove_arrow(&mut self, source: VertexId, target: VertexId) -> Result<bool> {
        self.check(source)?;
        self.check(target)?;
        let Some(count) = self.out[source.0].get_mut(&target.0) else {
            return Ok(false);
        };
        *count -= 1;
        if *count == 0 {
            self.out[source.0].remove(&target.0);
            self.inc[target.0].remove(&source.0);
        } else {
            *self.inc[target.0].get_mut(&source.0).unwrap() -= 1;
        }
        Ok(true)
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if v.0 < self.labels.len() {
            Ok(())
        } else {
            Err(QuiverError::VertexOutOfRange {
                index: v.0,
                len: self.labels.len(),
            })
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels.len()).map(VertexId)
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.lookup.get(label).copied().map(VertexId)
    }

    pub fn try_vertex(&self, label: &str) -> Result<VertexId> {
        self.vertex(label)
            .ok_or_else(|| QuiverError::UnknownVertex(label.to_string()))
    }

    /// Number of arrows `source -> target`.
    pub fn multiplicity(&self, source: VertexId, target: VertexId) -> u32 {
        self.out[source.0].get(&target.0).copied().unwrap_or(0)
    }

    /// Direct successors with multiplicities, in index order.
    pub fn successors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, u32)> + '_ {
        self.out[v.0].iter().map(|(&t, &c)| (VertexId(t), c))
    }

    pub fn predecessors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, u32)> + '_ {
        self.inc[v.0].iter().map(|(&s, &c)| (VertexId(s), c))
    }

    pub fn out_degree(&self, v: VertexId) -> u32 {
        self.out[v.0].values().sum()
    }

    pub fn in_degree(&self, v: VertexId) -> u32 {
        self.inc[v.0].values().sum()
    }

    /// All arrows as `(source, target, multiplicity)`, sorted by source then target.
    pub fn arrows(&self) -> impl Iterator<Item = (VertexId, VertexId, u32)> + '_ {
        self.out.iter().enumerate().flat_map(|(s, targets)| {
            targets
                .iter()
                .map(move |(&t, &c)| (VertexId(s), VertexId(t), c))
        })
    }

    pub fn arrow_count(&self) -> u32 {
        self.out.iter().flat_map(|t| t.values()).sum()
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.out
            .iter()
            .flat_map(|t| t.values().copied())
            .max()
            .unwrap_or(0)
    }

    /// Weakly connected components using arrows only, ordered by size
    /// (largest first) and then by least vertex index.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        components_by(self.len(), |v, push| {
            for &t in self.out[v].keys() {
                push(t);
            }
            for &s in self.inc[v].keys() {
                push(s);
            }
        })
    }

    /// Full subquiver on `keep`, in the given order.
    pub fn induced(&self, keep: &[VertexId]) -> Quiver {
        let mut position = HashMap::with_capacity(keep.len());
        let mut sub = Quiver::default();
        for (i, &v) in keep.iter().enumerate() {
            position.insert(v.0, i);
            sub.add_vertex(self.labels[v.0].clone())
                .expect("labels of a quiver are unique");
        }
        for &v in keep {
            for (&t, &c) in &self.out[v.0] {
                if let Some(&j) = position.get(&t) {
                    sub.add_arrows(VertexId(position[&v.0]), VertexId(j), c)
                        .expect("indices are in range");
                }
            }
        }
        sub
    }
}

/// Breadth-first partition of `0..len` under an undirected neighbour relation.
pub(crate) fn components_by<F>(len: usize, neighbours: F) -> Vec<Vec<VertexId>>
where
    F: Fn(usize, &mut dyn FnMut(usize)),
{
    let mut seen = vec![false; len];
    let mut parts = Vec::new();
    for root in 0..len {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut part = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            neighbours(v, &mut |w| {
                if !seen[w] {
                    seen[w] = true;
                    part.push(w);
                    queue.push_back(w);
                }
            });
        }
        part.sort_unstable();
        parts.push(part.into_iter().map(VertexId).collect::<Vec<_>>());
    }
    parts.sort_by(|a: &Vec<VertexId>, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    parts
}

/// A quiver with a partial injective translation `tau`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationQuiver {
    quiver: Quiver,
    tau: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Two vertices share the same image under tau.
    NonInjectiveTau {
        first: String,
        second: String,
        image: String,
    },
    /// `#(x -> y) != #(tau(y) -> x)`.
    Mesh {
        x: String,
        y: String,
        tau_y: String,
        forward: u32,
        backward: u32,
    },
    SelfLoop(String),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NonInjectiveTau {
                first,
                second,
                image,
            } => {
                write!(f, "tau({first}) = tau({second}) = {image}")
            }
            Violation::Mesh {
                x,
                y,
                tau_y,
                forward,
                backward,
            } => write!(
                f,
                "mesh at {y}: #({x} -> {y}) = {forward} but #({tau_y} -> {x}) = {backward}"
            ),
            Violation::SelfLoop(v) => write!(f, "self-loop at {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationResult {
    pub violations: Vec<Violation>,
    pub stable: bool,
}

impl ValidationResult {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl TranslationQuiver {
    /// Pairs a quiver with a translation given by vertex index. The axioms are
    /// not enforced here; call [`TranslationQuiver::validate`].
    pub fn new(quiver: Quiver, tau: Vec<Option<VertexId>>) -> Result<Self> {
        if tau.len() != quiver.len() {
            return Err(QuiverError::InvalidArgument(format!(
                "translation has {} entries for {} vertices",
                tau.len(),
                quiver.len()
            )));
        }
        let tau: Vec<Option<usize>> = tau.into_iter().map(|t| t.map(|v| v.0)).collect();
        for t in tau.iter().flatten() {
            if *t >= quiver.len() {
                return Err(QuiverError::VertexOutOfRange {
                    index: *t,
                    len: quiver.len(),
                });
            }
        }
        Ok(TranslationQuiver { quiver, tau })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn into_quiver(self) -> Quiver {
        self.quiver
    }

    pub fn len(&self) -> usize {
        self.quiver.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quiver.is_empty()
    }

    pub fn tau(&self, v: VertexId) -> Option<VertexId> {
        self.tau[v.0].map(VertexId)
    }

    pub fn tau_inverse(&self, v: VertexId) -> Option<VertexId> {
        self.tau.iter().position(|&t| t == Some(v.0)).map(VertexId)
    }

    pub(crate) fn tau_table(&self) -> &[Option<usize>] {
        &self.tau
    }

    /// `tau` applied `times` times, if defined all the way.
    pub fn tau_power(&self, v: VertexId, times: u32) -> Option<VertexId> {
        let mut cur = v;
        for _ in 0..times {
            cur = self.tau(cur)?;
        }
        Some(cur)
    }

    /// Looks up a vertex by label and returns the label of its translate.
    pub fn tau_of(&self, label: &str) -> Option<&str> {
        let v = self.quiver.vertex(label)?;
        self.tau(v).map(|t| self.quiver.label(t))
    }

    pub fn has_arrow(&self, source: &str, target: &str) -> bool {
        match (self.quiver.vertex(source), self.quiver.vertex(target)) {
            (Some(s), Some(t)) => self.quiver.multiplicity(s, t) > 0,
            _ => false,
        }
    }

    /// Mutable access to the underlying arrows (used to build broken fixtures).
    pub fn quiver_mut(&mut self) -> &mut Quiver {
        &mut self.quiver
    }

    /// Stable means tau is defined everywhere; with injectivity on a finite
    /// set that makes it a bijection.
    pub fn is_stable(&self) -> bool {
        if self.tau.iter().any(Option::is_none) {
            return false;
        }
        let mut hit = vec![false; self.len()];
        for t in self.tau.iter().flatten() {
            hit[*t] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Checks injectivity of tau, the mesh arrow-count axiom and absence of
    /// self-loops. Violations are reported in vertex index order.
    pub fn validate(&self) -> ValidationResult {
        let q = &self.quiver;
        let mut violations = Vec::new();
        let mut preimage: Vec<Option<usize>> = vec![None; q.len()];
        for (v, t) in self.tau.iter().enumerate() {
            if let Some(t) = *t {
                match preimage[t] {
                    Some(first) => violations.push(Violation::NonInjectiveTau {
                        first: q.labels[first].clone(),
                        second: q.labels[v].clone(),
                        image: q.labels[t].clone(),
                    }),
                    None => preimage[t] = Some(v),
                }
            }
        }
        for v in q.vertices() {
            if q.multiplicity(v, v) > 0 {
                violations.push(Violation::SelfLoop(q.label(v).to_string()));
            }
        }
        // Only pairs where one side has an arrow can disagree.
        for y in q.vertices() {
            let Some(ty) = self.tau(y) else { continue };
            let mut xs: Vec<VertexId> = q
                .predecessors(y)
                .map(|(x, _)| x)
                .chain(q.successors(ty).map(|(x, _)| x))
                .collect();
            xs.sort_unstable();
            xs.dedup();
            for x in xs {
                let forward = q.multiplicity(x, y);
                let backward = q.multiplicity(ty, x);
                if forward != backward {
                    violations.push(Violation::Mesh {
                        x: q.label(x).to_string(),
                        y: q.label(y).to_string(),
                        tau_y: q.label(ty).to_string(),
                        forward,
                        backward,
                    });
                }
            }
        }
        ValidationResult {
            violations,
            stable: self.is_stable(),
        }
    }

    /// Components under arrows and translation links together, ordered like
    /// [`Quiver::connected_components`]. Every part is closed under tau.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let q = &self.quiver;
        let mut tau_inv: Vec<Vec<usize>> = vec![Vec::new(); q.len()];
        for (v, t) in self.tau.iter().enumerate() {
            if let Some(t) = t {
                tau_inv[*t].push(v);
            }
        }
        components_by(q.len(), |v, push| {
            for &t in q.out[v].keys() {
                push(t);
            }
            for &s in q.inc[v].keys() {
                push(s);
            }
            if let Some(t) = self.tau[v] {
                push(t);
            }
            for &s in &tau_inv[v] {
                push(s);
            }
        })
    }

    /// Restriction to `keep`: induced arrows, and tau wherever both the
    /// vertex and its translate are kept.
    pub fn restrict(&self, keep: &[VertexId]) -> TranslationQuiver {
        let quiver = self.quiver.induced(keep);
        let position: HashMap<usize, usize> =
            keep.iter().enumerate().map(|(i, v)| (v.0, i)).collect();
        let tau = keep
            .iter()
            .map(|v| self.tau[v.0].and_then(|t| position.get(&t).copied()))
            .collect();
        TranslationQuiver { quiver, tau }
    }

    pub fn to_json(&self) -> Value {
        let q = &self.quiver;
        let mut arrows = Vec::new();
        for (s, t, c) in q.arrows() {
            for _ in 0..c {
                arrows.push(json!([q.label(s), q.label(t)]));
            }
        }
        let mut tau = Map::new();
        for v in q.vertices() {
            if let Some(t) = self.tau(v) {
                tau.insert(
                    q.label(v).to_string(),
                    Value::String(q.label(t).to_string()),
                );
            }
        }
        json!({
            "vertices": q.labels(),
            "arrows": arrows,
            "tau": tau,
        })
    }

    /// Graphviz rendering: solid edges for arrows (one per unit of
    /// multiplicity), dashed edges labelled `tau` from `y` to `tau(y)`.
    pub fn to_dot(&self, name: &str) -> String {
        let q = &self.quiver;
        let mut out = String::new();
        let _ = writeln!(out, "digraph {} {{", dot_quote(name));
        for v in q.vertices() {
            let _ = writeln!(out, "  {};", dot_quote(q.label(v)));
        }
        for (s, t, c) in q.arrows() {
            for _ in 0..c {
                let _ = writeln!(
                    out,
                    "  {} -> {};",
                    dot_quote(q.label(s)),
                    dot_quote(q.label(t))
                );
            }
        }
        for v in q.vertices() {
            if let Some(t) = self.tau(v) {
                let _ = writeln!(
                    out,
                    "  {} -> {} [style=dashed, label=\"tau\"];",
                    dot_quote(q.label(v)),
                    dot_quote(q.label(t))
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
