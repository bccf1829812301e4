//! Seeds, matrix and seed mutation, and cluster-variable enumeration.
//!
//! Indices are 0-based here; the command line takes 1-based directions.

mod fraction;
pub mod poly;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

pub use fraction::{is_laurent, LaurentFraction};

use crate::polygon::gamma;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("entries ({i},{j}) = {a} and ({j},{i}) = {b} violate sign-skew-symmetry")]
    NotSignSkewSymmetric { i: usize, j: usize, a: i64, b: i64 },
    #[error("direction {k} out of range for rank {n}")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("cluster has {cluster} variables but the matrix has rank {rank}")]
    RankMismatch { cluster: usize, rank: usize },
    #[error("cluster variable {0} is zero")]
    ZeroVariable(usize),
}

/// Square integer matrix with `sign(M_ij) = -sign(M_ji)` for all `i, j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExchangeMatrix {
    rows: Vec<Vec<i64>>,
}

fn signs_opposite(a: i64, b: i64) -> bool {
    a.signum() == -b.signum()
}

impl ExchangeMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self, MutationError> {
        let n = rows.len();
        if n == 0 {
            return Err(MutationError::Empty);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(MutationError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        let m = ExchangeMatrix { rows };
        if let Some((i, j)) = m.sign_skew_violation() {
            return Err(MutationError::NotSignSkewSymmetric {
                i,
                j,
                a: m.rows[i][j],
                b: m.rows[j][i],
            });
        }
        Ok(m)
    }

    /// Exchange matrix of the path `1 - 2 - ... - n` with `M_{i,i+1} = 1`.
    pub fn path_a(n: usize) -> Self {
        let mut rows = vec![vec![0; n]; n];
        for i in 0..n.saturating_sub(1) {
            rows[i][i + 1] = 1;
            rows[i + 1][i] = -1;
        }
        ExchangeMatrix { rows }
    }

    pub fn zero(n: usize) -> Self {
        ExchangeMatrix {
            rows: vec![vec![0; n]; n],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    fn sign_skew_violation(&self) -> Option<(usize, usize)> {
        let n = self.rank();
        (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .find(|&(i, j)| !signs_opposite(self.rows[i][j], self.rows[j][i]))
    }

    pub fn is_sign_skew_symmetric(&self) -> bool {
        self.sign_skew_violation().is_none()
    }

    /// Matrix mutation in direction `k`:
    /// `M'_ij = -M_ij` if `i = k` or `j = k`, otherwise
    /// `M_ij + (|M_ik| M_kj + M_ik |M_kj|) / 2`.
    ///
    /// Always an involution. The result is sign-skew-symmetric whenever the
    /// input is skew-symmetrizable; for an arbitrary sign-skew-symmetric
    /// input it need not be, so the result is not re-validated.
    pub fn mutate(&self, k: usize) -> Result<ExchangeMatrix, MutationError> {
        let n = self.rank();
        if k >= n {
            return Err(MutationError::IndexOutOfRange { k, n });
        }
        let m = &self.rows;
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == k || j == k {
                            -m[i][j]
                        } else {
                            let bracket = m[i][k].abs() * m[k][j] + m[i][k] * m[k][j].abs();
                            assert!(bracket % 2 == 0, "mutation bracket is always even");
                            m[i][j] + bracket / 2
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(ExchangeMatrix { rows })
    }

    /// Simultaneous row and column permutation: entry `(a, b)` of the result
    /// is entry `(perm[a], perm[b])` of `self`.
    fn permuted(&self, perm: &[usize]) -> ExchangeMatrix {
        ExchangeMatrix {
            rows: perm
                .iter()
                .map(|&i| perm.iter().map(|&j| self.rows[i][j]).collect())
                .collect(),
        }
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(i64::to_string).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

pub fn mutate_matrix(m: &ExchangeMatrix, k: usize) -> Result<ExchangeMatrix, MutationError> {
    m.mutate(k)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Seed {
    pub cluster: Vec<LaurentFraction>,
    pub matrix: ExchangeMatrix,
}

impl Seed {
    pub fn new(
        cluster: Vec<LaurentFraction>,
        matrix: ExchangeMatrix,
    ) -> Result<Self, MutationError> {
        if cluster.len() != matrix.rank() {
            return Err(MutationError::RankMismatch {
                cluster: cluster.len(),
                rank: matrix.rank(),
            });
        }
        Ok(Seed { cluster, matrix })
    }

    /// `((u_1, ..., u_n), matrix)`.
    pub fn initial(matrix: ExchangeMatrix) -> Self {
        let n = matrix.rank();
        Seed {
            cluster: (0..n).map(|i| LaurentFraction::var(n, i)).collect(),
            matrix,
        }
    }

    pub fn rank(&self) -> usize {
        self.cluster.len()
    }

    /// Replaces `x_k` by
    /// `(prod_{M_ik > 0} x_i^{M_ik} + prod_{M_ik < 0} x_i^{-M_ik}) / x_k`
    /// and mutates the matrix. Empty products are 1, so in rank one the new
    /// variable is `2 / x_1`.
    pub fn mutate(&self, k: usize) -> Result<Seed, MutationError> {
        let n = self.rank();
        if k >= n {
            return Err(MutationError::IndexOutOfRange { k, n });
        }
        let xk = &self.cluster[k];
        if xk.is_zero() {
            return Err(MutationError::ZeroVariable(k));
        }
        let nvars = xk.nvars();
        let mut positive = LaurentFraction::one(nvars);
        let mut negative = LaurentFraction::one(nvars);
        for (i, xi) in self.cluster.iter().enumerate() {
            let e = self.matrix.get(i, k);
            if e > 0 {
                positive = positive.mul(&xi.pow(e as u32));
            } else if e < 0 {
                negative = negative.mul(&xi.pow((-e) as u32));
            }
        }
        let mut cluster = self.cluster.clone();
        cluster[k] = positive.add(&negative).div(xk);
        Ok(Seed {
            cluster,
            matrix: self.matrix.mutate(k)?,
        })
    }

    /// Key identifying seeds up to relabelling: cluster sorted, matrix
    /// permuted the same way.
    pub fn canonical_key(&self) -> (Vec<LaurentFraction>, ExchangeMatrix) {
        let mut perm: Vec<usize> = (0..self.rank()).collect();
        perm.sort_by(|&a, &b| self.cluster[a].cmp(&self.cluster[b]));
        let cluster = perm.iter().map(|&i| self.cluster[i].clone()).collect();
        (cluster, self.matrix.permuted(&perm))
    }
}

pub fn mutate_seed(seed: &Seed, k: usize) -> Result<Seed, MutationError> {
    seed.mutate(k)
}

#[derive(Debug, Clone)]
pub struct ClusterVariables {
    pub variables: BTreeSet<LaurentFraction>,
    /// Distinct seeds (up to relabelling) visited.
    pub seeds: usize,
    pub cap_reached: bool,
}

/// Breadth-first closure from `((u_1..u_n), m0)` under all mutations,
/// stopping once more than `cap` distinct seeds would be visited.
pub fn enumerate_cluster_variables(m0: &ExchangeMatrix, cap: usize) -> ClusterVariables {
    let start = Seed::initial(m0.clone());
    let mut seen = HashSet::from([start.canonical_key()]);
    let mut variables: BTreeSet<LaurentFraction> = start.cluster.iter().cloned().collect();
    let mut queue = VecDeque::from([start]);
    let mut cap_reached = false;
    'bfs: while let Some(seed) = queue.pop_front() {
        for k in 0..seed.rank() {
            let next = seed
                .mutate(k)
                .expect("direction in range and variables nonzero");
            let key = next.canonical_key();
            if seen.contains(&key) {
                continue;
            }
            if seen.len() >= cap {
                cap_reached = true;
                break 'bfs;
            }
            seen.insert(key);
            variables.extend(next.cluster.iter().cloned());
            queue.push_back(next);
        }
    }
    ClusterVariables {
        variables,
        seeds: seen.len(),
        cap_reached,
    }
}

/// Number of type `A_n` cluster variables equals the number of diagonals of
/// the `(n+3)`-gon.
pub fn counting_check(n: usize) -> bool {
    let found = enumerate_cluster_variables(&ExchangeMatrix::path_a(n), 10_000);
    let diagonals = gamma(n as u32 + 1, 1).expect("n >= 1").len();
    !found.cap_reached && found.variables.len() == diagonals
}
