//! Diagonals of a labelled polygon and the translation quivers built on them.
//!
//! Polygon vertices are `1..=size`, clockwise. A diagonal is an unordered
//! pair stored as `(i, j)` with `i < j`; arithmetic on endpoints is modulo the
//! polygon size with representatives in `1..=size`.

use std::fmt;

use crate::error::{QuiverError, Result};
use crate::quiver::{Quiver, TranslationQuiver, VertexId};
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polygon {
    size: u32,
}

impl Polygon {
    pub fn new(size: u32) -> Result<Self> {
        if size < 3 {
            return Err(QuiverError::InvalidArgument(format!(
                "a polygon needs at least 3 vertices, got {size}"
            )));
        }
        Ok(Polygon { size })
    }

    /// The `(n*m + 2)`-gon carrying the m-diagonal quiver `(n, m)`.
    pub fn for_m_diagonals(n: u32, m: u32) -> Result<Self> {
        if n < 2 {
            return Err(QuiverError::InvalidArgument(format!(
                "n must be at least 2, got {n}"
            )));
        }
        if m < 1 {
            return Err(QuiverError::InvalidArgument(format!(
                "m must be at least 1, got {m}"
            )));
        }
        Polygon::new(n * m + 2)
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Reduces any integer to its representative in `1..=size`.
    pub fn wrap(&self, i: i64) -> u32 {
        let n = self.size as i64;
        ((i - 1).rem_euclid(n) + 1) as u32
    }

    pub fn diagonal(&self, i: i64, j: i64) -> Option<Diagonal> {
        Diagonal::new(*self, i, j).ok()
    }

    /// All diagonals, in lexicographic order of `(i, j)`.
    pub fn diagonals(&self) -> Vec<Diagonal> {
        let n = self.size as i64;
        let mut out = Vec::new();
        for i in 1..=n {
            for j in (i + 2)..=n {
                if let Some(d) = self.diagonal(i, j) {
                    out.push(d);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagonal {
    i: u32,
    j: u32,
    polygon: Polygon,
}

impl Diagonal {
    /// Builds the diagonal through `i` and `j` (taken modulo the polygon size).
    /// Fails if the endpoints coincide or are neighbours on the boundary.
    pub fn new(polygon: Polygon, i: i64, j: i64) -> Result<Self> {
        let (a, b) = (polygon.wrap(i), polygon.wrap(j));
        let (i, j) = (a.min(b), a.max(b));
        let d = Diagonal { i, j, polygon };
        if i == j || d.gap() < 2 {
            return Err(QuiverError::InvalidArgument(format!(
                "({a},{b}) is not a diagonal of the {}-gon",
                polygon.size
            )));
        }
        Ok(d)
    }

    pub fn endpoints(&self) -> (u32, u32) {
        (self.i, self.j)
    }

    pub fn polygon(&self) -> Polygon {
        self.polygon
    }

    /// The two cyclic distances between the endpoints, `j - i` first.
    pub fn gaps(&self) -> (u32, u32) {
        let g = self.j - self.i;
        (g, self.polygon.size - g)
    }

    /// Smaller cyclic distance between the endpoints.
    pub fn gap(&self) -> u32 {
        let (g, h) = self.gaps();
        g.min(h)
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    pub fn row(&self) -> Row {
        row_of(self)
    }
}

impl fmt::Display for Diagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Horizontal layer of the diagonal quiver: minimal gap minus one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Row(pub u32);

pub fn row_of(d: &Diagonal) -> Row {
    Row(d.gap() - 1)
}

/// Whether `d` cuts the `(n*m + 2)`-gon into an `(m*j + 2)`-gon and an
/// `(m*(n - j) + 2)`-gon, i.e. one of its gaps is `m*j + 1` with
/// `1 <= j <= n - 1`.
pub fn is_m_diagonal(d: &Diagonal, n: u32, m: u32) -> bool {
    debug_assert_eq!(
        d.polygon.size,
        n * m + 2,
        "diagonal from a different polygon"
    );
    let (g, h) = d.gaps();
    [g, h]
        .into_iter()
        .any(|g| g > 1 && (g - 1) % m == 0 && (1..n).contains(&((g - 1) / m)))
}

/// Strict interleaving of endpoints around the polygon; shared endpoints do
/// not cross.
pub fn crossing(d1: &Diagonal, d2: &Diagonal) -> bool {
    let (a, b) = d1.endpoints();
    let (c, d) = d2.endpoints();
    let inside = |x: u32| a < x && x < b;
    let shared = a == c || a == d || b == c || b == d;
    !shared && (inside(c) != inside(d))
}

/// The m-diagonals of the `(n*m + 2)`-gon in lexicographic order.
pub fn m_diagonals(n: u32, m: u32) -> Result<Vec<Diagonal>> {
    let polygon = Polygon::for_m_diagonals(n, m)?;
    Ok(polygon
        .diagonals()
        .into_iter()
        .filter(|d| is_m_diagonal(d, n, m))
        .collect())
}

/// The quiver of m-diagonals of the `(n*m + 2)`-gon: arrows
/// `(i,j) -> (i,j+m)` and `(i,j) -> (i+m,j)` whenever the target is again an
/// m-diagonal, with both orderings of every pair used as `(i,j)`, and
/// translation `(i,j) -> (i-m,j-m)`.
pub fn gamma(n: u32, m: u32) -> Result<TranslationQuiver> {
    let polygon = Polygon::for_m_diagonals(n, m)?;
    let diagonals = m_diagonals(n, m)?;
    let mut quiver = Quiver::new(diagonals.iter().map(Diagonal::label))?;
    let index = |d: &Diagonal| {
        VertexId(
            diagonals
                .binary_search(d)
                .expect("m-diagonals are closed under the translation"),
        )
    };
    let step = m as i64;
    for (v, d) in diagonals.iter().enumerate() {
        let (i, j) = (d.i as i64, d.j as i64);
        let mut targets: Vec<Diagonal> = [(i, j), (j, i)]
            .into_iter()
            .flat_map(|(a, b)| [(a, b + step), (a + step, b)])
            .filter_map(|(a, b)| polygon.diagonal(a, b))
            .filter(|t| is_m_diagonal(t, n, m))
            .collect();
        targets.sort_unstable();
        targets.dedup();
        for t in targets {
            quiver.add_arrow(VertexId(v), index(&t))?;
        }
    }
    let tau = diagonals
        .iter()
        .map(|d| {
            let t = polygon
                .diagonal(d.i as i64 - step, d.j as i64 - step)
                .expect("rotation maps diagonals to diagonals");
            Some(index(&t))
        })
        .collect();
    TranslationQuiver::new(quiver, tau)
}

/// All maximal collections of pairwise non-crossing m-diagonals of the
/// `(n*m + 2)`-gon. Each collection is sorted and the list is sorted
/// lexicographically.
pub fn enumerate_angulations(n: u32, m: u32) -> Result<Vec<Vec<Diagonal>>> {
    enumerate_angulations_with(n, m, &Limits::default())
}

pub fn enumerate_angulations_with(n: u32, m: u32, limits: &Limits) -> Result<Vec<Vec<Diagonal>>> {
    let polygon = Polygon::for_m_diagonals(n, m)?;
    if polygon.size() > limits.angulation_polygon_cap {
        return Err(QuiverError::SizeLimit {
            what: format!("{}-gon", polygon.size()),
            size: polygon.size() as usize,
            cap: limits.angulation_polygon_cap as usize,
        });
    }
    let diagonals = m_diagonals(n, m)?;
    let compatible = BitGraph::compatibility(&diagonals);
    let mut found = Vec::new();
    let all = BitSet::full(diagonals.len());
    maximal_cliques(
        &compatible,
        &mut Vec::new(),
        all,
        BitSet::empty(diagonals.len()),
        &mut found,
    );
    let mut out: Vec<Vec<Diagonal>> = found
        .into_iter()
        .map(|c| {
            let mut set: Vec<Diagonal> = c.into_iter().map(|i| diagonals[i]).collect();
            set.sort_unstable();
            set
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

#[derive(Clone, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn empty(len: usize) -> Self {
        BitSet(vec![0; len.div_ceil(64)])
    }

    fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & !b).collect())
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| k * 64 + b)
        })
    }
}

struct BitGraph {
    adj: Vec<BitSet>,
}

impl BitGraph {
    /// Two distinct diagonals are adjacent when they do not cross.
    fn compatibility(diagonals: &[Diagonal]) -> Self {
        let len = diagonals.len();
        let adj = (0..len)
            .map(|a| {
                let mut s = BitSet::empty(len);
                for b in 0..len {
                    if a != b && !crossing(&diagonals[a], &diagonals[b]) {
                        s.insert(b);
                    }
                }
                s
            })
            .collect();
        BitGraph { adj }
    }
}

// Bron-Kerbosch with pivoting: `candidates` can still extend `current`,
// `excluded` were already tried and are compatible with all of `current`,
// so `current` is maximal exactly when both are empty.
fn maximal_cliques(
    g: &BitGraph,
    current: &mut Vec<usize>,
    mut candidates: BitSet,
    mut excluded: BitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            out.push(current.clone());
        }
        return;
    }
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .max_by_key(|&u| (g.adj[u].and(&candidates).count(), std::cmp::Reverse(u)))
        .expect("candidates is non-empty");
    let branch: Vec<usize> = candidates.and_not(&g.adj[pivot]).iter().collect();
    for v in branch {
        current.push(v);
        maximal_cliques(
            g,
            current,
            candidates.and(&g.adj[v]),
            excluded.and(&g.adj[v]),
            out,
        );
        current.pop();
        candidates.remove(v);
        excluded.insert(v);
    }
}
