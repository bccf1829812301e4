//! Sectional paths and powers of translation quivers.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{QuiverError, Result};
use crate::iso::iso_translation_quivers_with;
use crate::polygon::gamma;
use crate::quiver::{Quiver, TranslationQuiver, VertexId};
use crate::Limits;

/// A walk along arrows `x_0 -> x_1 -> ... -> x_L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<VertexId>,
}

impl Path {
    /// Checks that consecutive vertices are joined by an arrow of `tq`.
    pub fn new(tq: &TranslationQuiver, vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(QuiverError::InvalidArgument("empty path".into()));
        }
        let q = tq.quiver();
        for w in vertices.windows(2) {
            if w[0].0 >= q.len() || w[1].0 >= q.len() || q.multiplicity(w[0], w[1]) == 0 {
                let name = |v: VertexId| {
                    if v.0 < q.len() {
                        q.label(v).to_string()
                    } else {
                        format!("#{}", v.0)
                    }
                };
                return Err(QuiverError::NotAPath(name(w[0]), name(w[1])));
            }
        }
        Ok(Path { vertices })
    }

    pub fn from_labels(tq: &TranslationQuiver, labels: &[&str]) -> Result<Self> {
        let vertices = labels
            .iter()
            .map(|l| tq.quiver().try_vertex(l))
            .collect::<Result<Vec<_>>>()?;
        Path::new(tq, vertices)
    }

    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }
}

/// `tau(x_{i+1}) != x_{i-1}` at every interior index where the translate is
/// defined.
pub fn is_sectional(p: &Path, tq: &TranslationQuiver) -> bool {
    p.vertices.windows(3).all(|w| tq.tau(w[2]) != Some(w[0]))
}

/// Number of sectional paths of length `m` from `start` to each endpoint.
/// With multiple arrows, every choice of arrow counts as a separate path.
fn sectional_endpoints(tq: &TranslationQuiver, start: VertexId, m: u32) -> BTreeMap<VertexId, u32> {
    fn walk(
        tq: &TranslationQuiver,
        prev: Option<VertexId>,
        cur: VertexId,
        left: u32,
        weight: u32,
        out: &mut BTreeMap<VertexId, u32>,
    ) {
        if left == 0 {
            *out.entry(cur).or_insert(0) += weight;
            return;
        }
        for (next, mult) in tq.quiver().successors(cur) {
            if prev.is_some() && tq.tau(next) == prev {
                continue;
            }
            walk(tq, Some(cur), next, left - 1, weight * mult, out);
        }
    }
    let mut out = BTreeMap::new();
    walk(tq, None, start, m, 1, &mut out);
    out
}

/// The m-th power together with the quiver it was built from.
#[derive(Debug, Clone)]
pub struct PowerQuiver {
    pub base: TranslationQuiver,
    pub m: u32,
    pub result: TranslationQuiver,
}

/// Same vertices; one arrow per sectional path of length `m`; translation
/// `tau^m` (undefined where some step is).
pub fn power(tq: &TranslationQuiver, m: u32) -> Result<PowerQuiver> {
    if m < 1 {
        return Err(QuiverError::InvalidArgument("power needs m >= 1".into()));
    }
    let q = tq.quiver();
    let rows: Vec<BTreeMap<VertexId, u32>> = (0..q.len())
        .into_par_iter()
        .map(|v| sectional_endpoints(tq, VertexId(v), m))
        .collect();
    let mut quiver = Quiver::new(q.labels().iter().cloned())?;
    for (v, targets) in rows.into_iter().enumerate() {
        for (t, c) in targets {
            quiver.add_arrows(VertexId(v), t, c)?;
        }
    }
    let tau = q.vertices().map(|v| tq.tau_power(v, m)).collect();
    Ok(PowerQuiver {
        base: tq.clone(),
        m,
        result: TranslationQuiver::new(quiver, tau)?,
    })
}

/// One piece of a decomposed power.
#[derive(Debug, Clone)]
pub struct Component {
    /// Vertices of the power quiver in this piece, in index order.
    pub vertices: Vec<VertexId>,
    /// Restriction of the power (arrows and `tau^m`).
    pub quiver: TranslationQuiver,
    /// Number of pieces the vertex set falls into when translation links are
    /// ignored; 1 unless the piece is held together only through tau.
    pub arrow_pieces: usize,
}

impl Component {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.quiver.quiver().vertex(label).is_some()
    }
}

/// Components of the power under arrows and translation, largest first,
/// ties broken by least vertex.
pub fn decompose(pq: &PowerQuiver) -> Vec<Component> {
    pq.result
        .components()
        .into_iter()
        .map(|vertices| {
            let quiver = pq.result.restrict(&vertices);
            let arrow_pieces = quiver.quiver().connected_components().len();
            Component {
                vertices,
                quiver,
                arrow_pieces,
            }
        })
        .collect()
}

/// The component of `gamma(n*m, 1)^m` through `(1, m+2)`, checked to be
/// isomorphic to `gamma(n, m)`.
pub fn principal_component(n: u32, m: u32) -> Result<TranslationQuiver> {
    principal_component_with(n, m, &Limits::default())
}

pub fn principal_component_with(n: u32, m: u32, limits: &Limits) -> Result<TranslationQuiver> {
    let expected = gamma(n, m)?;
    let base = gamma(n * m, 1)?;
    if base.len() > limits.vertex_cap {
        return Err(QuiverError::SizeLimit {
            what: format!("diagonal quiver ({},1)", n * m),
            size: base.len(),
            cap: limits.vertex_cap,
        });
    }
    let pq = power(&base, m)?;
    let vertex = format!("(1,{})", m + 2);
    let component = decompose(&pq)
        .into_iter()
        .find(|c| c.contains_label(&vertex))
        .expect("(1, m+2) is a diagonal of the (nm+2)-gon");
    match iso_translation_quivers_with(&component.quiver, &expected, limits)? {
        Some(_) => Ok(component.quiver),
        None => Err(QuiverError::PrincipalMismatch { vertex, n, m }),
    }
}

/// JSON of a decomposed power: `{"m":…, "components":[{vertices, arrows, tau}, …]}`.
pub fn components_json(pq: &PowerQuiver, components: &[Component]) -> Value {
    json!({
        "m": pq.m,
        "components": components.iter().map(|c| c.quiver.to_json()).collect::<Vec<_>>(),
    })
}
