//! Equitable partitions, coarsest refinement, normalized partition matrices
//! and quotient graphs.
//!
//! Equitability is checked on weight sums: for every ordered cell pair
//! `(j, k)` the total weight from `x ∈ V_j` into `V_k` must not depend on
//! `x`. For 0/1 graphs this is the usual neighbor count.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{input, Error, Result};
use crate::graph::Graph;
use crate::linalg::Matrix;
use crate::scalar::Real;

/// Default tolerance for equitability checks.
pub const EQUITABLE_TOLERANCE: f64 = 1e-9;

/// Weight sums are rounded to this many decimals before grouping.
const SIGNATURE_DECIMALS: i32 = 12;

/// Assignment of vertices to cells `0..m`, cells numbered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    cell_of: Vec<usize>,
    m: usize,
}

impl Partition {
    /// Accepts any labelling whose labels form `0..m` with no gaps and
    /// renumbers the cells canonically.
    pub fn from_cell_of(cell_of: Vec<usize>) -> Result<Self> {
        if cell_of.is_empty() {
            return input("partition must cover at least one vertex");
        }
        let m = cell_of.iter().max().expect("nonempty") + 1;
        let mut seen = vec![false; m];
        for &c in &cell_of {
            seen[c] = true;
        }
        if seen.iter().any(|s| !s) {
            return input("partition has an empty cell");
        }
        Ok(Self::canonical_from_labels(&cell_of))
    }

    /// Cells given as vertex lists; they must cover `0..n` exactly once.
    pub fn from_cells(n: usize, cells: &[Vec<usize>]) -> Result<Self> {
        let mut cell_of = vec![usize::MAX; n];
        for (k, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return input("partition has an empty cell");
            }
            for &v in cell {
                if v >= n {
                    return input(format!("partition vertex {v} out of range for n = {n}"));
                }
                if cell_of[v] != usize::MAX {
                    return input(format!("vertex {v} appears in more than one cell"));
                }
                cell_of[v] = k;
            }
        }
        if let Some(v) = cell_of.iter().position(|&c| c == usize::MAX) {
            return input(format!("vertex {v} is not covered by the partition"));
        }
        Self::from_cell_of(cell_of)
    }

    /// Groups vertices by an arbitrary key, cells numbered by smallest vertex.
    pub fn from_keys<K: Ord>(keys: &[K]) -> Self {
        let mut ids: BTreeMap<&K, usize> = BTreeMap::new();
        let labels: Vec<usize> = keys
            .iter()
            .map(|k| {
                let next = ids.len();
                *ids.entry(k).or_insert(next)
            })
            .collect();
        Self::canonical_from_labels(&labels)
    }

    fn canonical_from_labels(labels: &[usize]) -> Self {
        let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
        let cell_of = labels
            .iter()
            .map(|&l| {
                let next = remap.len();
                *remap.entry(l).or_insert(next)
            })
            .collect();
        Self {
            cell_of,
            m: remap.len(),
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            cell_of: (0..n).collect(),
            m: n,
        }
    }

    pub fn single_cell(n: usize) -> Self {
        Self {
            cell_of: vec![0; n],
            m: usize::from(n > 0),
        }
    }

    pub fn n(&self) -> usize {
        self.cell_of.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.cell_of
    }

    /// Cells as ascending vertex lists, in cell order.
    pub fn cells(&self) -> Vec<Vec<usize>> {
        let mut cells = vec![Vec::new(); self.m];
        for (v, &c) in self.cell_of.iter().enumerate() {
            cells[c].push(v);
        }
        cells
    }

    pub fn cell_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.m];
        for &c in &self.cell_of {
            sizes[c] += 1;
        }
        sizes
    }

    pub fn is_singleton(&self, v: usize) -> bool {
        let c = self.cell_of[v];
        self.cell_of.iter().filter(|&&x| x == c).count() == 1
    }

    /// Every cell of `self` lies inside a cell of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.n() != coarser.n() {
            return false;
        }
        let mut image = vec![usize::MAX; self.m];
        for v in 0..self.n() {
            let c = self.cell_of[v];
            if image[c] == usize::MAX {
                image[c] = coarser.cell_of[v];
            } else if image[c] != coarser.cell_of[v] {
                return false;
            }
        }
        true
    }

    fn check_covers<T: Real>(&self, g: &Graph<T>) -> Result<()> {
        if self.n() != g.n() {
            return input(format!(
                "partition covers {} vertices but the graph has {}",
                self.n(),
                g.n()
            ));
        }
        Ok(())
    }
}

/// Total weight from each vertex into each cell, `|V| × m`.
fn cell_sums<T: Real>(g: &Graph<T>, pi: &Partition) -> Matrix<T> {
    let mut sums = Matrix::zeros(g.n(), pi.m());
    for x in 0..g.n() {
        for (y, &w) in g.adjacency().row(x).iter().enumerate() {
            if w != T::zero() {
                let k = pi.cell_of(y);
                sums[(x, k)] = sums[(x, k)] + w;
            }
        }
    }
    sums
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equitability {
    Equitable,
    /// `vertex` is the smallest member of a cell whose weight sums into
    /// `cell` differ between members.
    Violated { vertex: usize, cell: usize },
}

impl Equitability {
    pub fn holds(self) -> bool {
        self == Equitability::Equitable
    }
}

pub fn is_equitable<T: Real>(g: &Graph<T>, pi: &Partition, tol: T) -> Result<Equitability> {
    pi.check_covers(g)?;
    let sums = cell_sums(g, pi);
    for cell in pi.cells() {
        let rep = cell[0];
        for &x in &cell[1..] {
            for k in 0..pi.m() {
                if (sums[(x, k)] - sums[(rep, k)]).abs() > tol {
                    return Ok(Equitability::Violated { vertex: rep, cell: k });
                }
            }
        }
    }
    Ok(Equitability::Equitable)
}

fn require_equitable<T: Real>(g: &Graph<T>, pi: &Partition) -> Result<()> {
    match is_equitable(g, pi, T::lit(EQUITABLE_TOLERANCE))? {
        Equitability::Equitable => Ok(()),
        Equitability::Violated { vertex, cell } => Err(Error::NotEquitable { vertex, cell }),
    }
}

/// Coarsest equitable partition refining `initial`.
pub fn refine<T: Real>(g: &Graph<T>, initial: &Partition) -> Result<Partition> {
    initial.check_covers(g)?;
    let scale = 10f64.powi(SIGNATURE_DECIMALS);
    let mut current = Partition::from_cell_of(initial.labels().to_vec())?;
    loop {
        let sums = cell_sums(g, &current);
        let keys: Vec<(usize, Vec<(usize, i64)>)> = (0..g.n())
            .map(|x| {
                let profile = (0..current.m())
                    .filter_map(|k| {
                        let s = sums[(x, k)];
                        (s != T::zero()).then(|| (k, (s.as_f64() * scale).round() as i64))
                    })
                    .collect();
                (current.cell_of(x), profile)
            })
            .collect();
        let next = Partition::from_keys(&keys);
        if next.m() == current.m() {
            return Ok(next);
        }
        current = next;
    }
}

/// Refinement of `{{a}, {b}, V∖{a,b}}`.
pub fn seeded_partition<T: Real>(g: &Graph<T>, a: usize, b: usize) -> Result<Partition> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return input("seeded partition needs distinct endpoints");
    }
    let labels: Vec<usize> = (0..g.n())
        .map(|v| match v {
            v if v == a => 0,
            v if v == b => 1,
            _ => 2,
        })
        .collect();
    refine(g, &Partition::from_cell_of(labels)?)
}

/// `Q[x][k] = |V_k|^{-1/2}` when `x ∈ V_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedPartitionMatrix<T> {
    pub entries: Matrix<T>,
}

pub fn partition_matrix<T: Real>(pi: &Partition) -> NormalizedPartitionMatrix<T> {
    let sizes = pi.cell_sizes();
    let entries = Matrix::from_fn(pi.n(), pi.m(), |x, k| {
        if pi.cell_of(x) == k {
            T::one() / T::lit(sizes[k] as f64).sqrt()
        } else {
            T::zero()
        }
    });
    NormalizedPartitionMatrix { entries }
}

impl<T: Real> NormalizedPartitionMatrix<T> {
    /// `QQᵀ`
    pub fn projector(&self) -> Matrix<T> {
        self.entries.matmul(&self.entries.transpose())
    }

    /// Recovers the partition from column supports, checking that every row
    /// has exactly one nonzero and that each column is the normalized
    /// indicator of its support.
    pub fn to_partition(&self, tol: T) -> Result<(Partition, Vec<usize>)> {
        let q = &self.entries;
        let mut col_of_row = Vec::with_capacity(q.rows());
        for x in 0..q.rows() {
            let nz: Vec<usize> = (0..q.cols()).filter(|&k| q[(x, k)].abs() > tol).collect();
            if nz.len() != 1 {
                return Err(Error::Precondition(format!(
                    "row {x} of the partition matrix has {} nonzeros",
                    nz.len()
                )));
            }
            col_of_row.push(nz[0]);
        }
        let mut sizes = vec![0usize; q.cols()];
        for &k in &col_of_row {
            sizes[k] += 1;
        }
        if sizes.contains(&0) {
            return Err(Error::Precondition("partition matrix has an empty column".into()));
        }
        for (x, &k) in col_of_row.iter().enumerate() {
            let expected = T::one() / T::lit(sizes[k] as f64).sqrt();
            if (q[(x, k)] - expected).abs() > tol {
                return Err(Error::Precondition(format!(
                    "column {k} is not a normalized cell indicator (entry at row {x})"
                )));
            }
        }
        let pi = Partition::from_cell_of(col_of_row.clone())?;
        // column k of Q corresponds to cell col_to_cell[k] of the canonical partition
        let mut col_to_cell = vec![0; q.cols()];
        for (x, &k) in col_of_row.iter().enumerate() {
            col_to_cell[k] = pi.cell_of(x);
        }
        Ok((pi, col_to_cell))
    }
}

#[derive(Clone, Debug)]
pub struct QuotientResult<T> {
    pub quotient: Graph<T>,
    pub cell_map: Partition,
    /// `d[j][k]`: weight from any vertex of `V_j` into `V_k`.
    pub d: Matrix<T>,
}

/// Symmetric quotient: off-diagonal `sqrt(d_jk d_kj)`, loops `d_jj`.
pub fn quotient<T: Real>(g: &Graph<T>, pi: &Partition) -> Result<QuotientResult<T>> {
    pi.check_covers(g)?;
    require_equitable(g, pi)?;
    let sums = cell_sums(g, pi);
    let reps: Vec<usize> = pi.cells().iter().map(|c| c[0]).collect();
    let m = pi.m();
    let d = Matrix::from_fn(m, m, |j, k| sums[(reps[j], k)]);
    let adj = Matrix::from_fn(m, m, |j, k| {
        if j == k {
            d[(j, j)]
        } else {
            (d[(j, k)] * d[(k, j)]).sqrt()
        }
    });
    let mut quotient = Graph::from_adjacency(adj)?;
    if let Some(name) = &g.name {
        quotient.name = Some(format!("{name}/pi"));
    }
    Ok(QuotientResult {
        quotient,
        cell_map: pi.clone(),
        d,
    })
}

/// Max residuals of the four partition-matrix identities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma31Report<T> {
    /// `‖QᵀQ − I‖_max`
    pub orthonormal: T,
    /// `‖QQᵀ − blockdiag(J/|V_k|)‖_max`
    pub block_projector: T,
    /// `‖QQᵀA − AQQᵀ‖_max`
    pub commutator: T,
    /// `‖A(G/π) − QᵀAQ‖_max`
    pub quotient: T,
}

impl<T: Real> Lemma31Report<T> {
    pub fn max_residual(&self) -> T {
        self.orthonormal
            .max(self.block_projector)
            .max(self.commutator)
            .max(self.quotient)
    }

    pub fn passes(&self, tol: T) -> bool {
        self.max_residual() < tol
    }
}

pub fn verify_lemma31<T: Real>(g: &Graph<T>, pi: &Partition) -> Result<Lemma31Report<T>> {
    let qr = quotient(g, pi)?;
    let q = partition_matrix::<T>(pi).entries;
    let qt = q.transpose();
    let a = g.adjacency();
    let sizes = pi.cell_sizes();
    let proj = q.matmul(&qt);
    let blocks = Matrix::from_fn(g.n(), g.n(), |x, y| {
        if pi.cell_of(x) == pi.cell_of(y) {
            T::one() / T::lit(sizes[pi.cell_of(x)] as f64)
        } else {
            T::zero()
        }
    });
    Ok(Lemma31Report {
        orthonormal: qt.matmul(&q).max_abs_diff(&Matrix::identity(pi.m())),
        block_projector: proj.max_abs_diff(&blocks),
        commutator: proj.matmul(a).max_abs_diff(&a.matmul(&proj)),
        quotient: qr.quotient.adjacency().max_abs_diff(&qt.matmul(a).matmul(&q)),
    })
}

/// Hop distances from `src` on the support of nonzero off-diagonal weights.
pub fn hop_distances<T: Real>(g: &Graph<T>, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("visited");
        for v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// True iff `x ↦ (d(a, x), d(b, x))` is injective.
pub fn distance_minimal<T: Real>(g: &Graph<T>, a: usize, b: usize) -> Result<bool> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return input("distance_minimal needs distinct endpoints");
    }
    let da = hop_distances(g, a);
    let db = hop_distances(g, b);
    if da.iter().any(Option::is_none) {
        return input("graph is disconnected");
    }
    let mut pairs: Vec<(usize, usize)> = da
        .iter()
        .zip(&db)
        .map(|(x, y)| (x.expect("connected"), y.expect("connected")))
        .collect();
    pairs.sort_unstable();
    Ok(pairs.windows(2).all(|w| w[0] != w[1]))
}
