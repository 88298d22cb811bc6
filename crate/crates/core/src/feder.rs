//! k-boson secondary graphs, symmetric-group orbit partitions of Cartesian
//! powers, and the product/composition identities for quotients.

use std::collections::HashMap;

use crate::error::{input, Error, Result};
use crate::graph::{cartesian_power, cartesian_product, Graph};
use crate::linalg::Matrix;
use crate::partition::{partition_matrix, quotient, Partition};
use crate::scalar::Real;
use crate::walk::{is_periodic, verify_pst};

/// Largest product space (`|V|^k`) any operation here will materialize.
pub const PRODUCT_SPACE_LIMIT: usize = 4096;
/// Largest `k` for which `symmetrizer_check` enumerates all `k!` permutations.
pub const EXPLICIT_SYMMETRIZER_MAX_K: usize = 5;
pub const FEDER_ISO_TOLERANCE: f64 = 1e-12;
pub const COMPOSITION_TOLERANCE: f64 = 1e-10;

/// Number of bosons sitting on each vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccupationVector {
    counts: Vec<usize>,
}

impl OccupationVector {
    pub fn new(counts: Vec<usize>) -> Self {
        OccupationVector { counts }
    }

    /// Occupation numbers of the tuple `x` over `n` vertices.
    pub fn of_tuple(x: &[usize], n: usize) -> Result<Self> {
        let mut counts = vec![0; n];
        for &v in x {
            if v >= n {
                return input(format!("tuple entry {v} out of range for {n} vertices"));
            }
            counts[v] += 1;
        }
        Ok(OccupationVector { counts })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn k(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// All occupation vectors of `k` bosons on `n` sites, lexicographically ascending.
pub fn occupation_vectors(n: usize, k: usize) -> Vec<OccupationVector> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<OccupationVector>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(OccupationVector::new(cur.clone()));
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(n, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, k, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// `C(n + k - 1, k)`, or `None` on overflow.
pub fn multiset_count(n: usize, k: usize) -> Option<usize> {
    if n == 0 {
        return Some(usize::from(k == 0));
    }
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc * (n as u128 - 1 + i) / i;
        if acc > usize::MAX as u128 {
            return None;
        }
    }
    Some(acc as usize)
}

#[derive(Clone, Debug)]
pub struct FederGraph<T> {
    pub graph: Graph<T>,
    pub states: Vec<OccupationVector>,
    index: HashMap<OccupationVector, usize>,
}

impl<T> FederGraph<T> {
    pub fn index_of(&self, state: &OccupationVector) -> Option<usize> {
        self.index.get(state).copied()
    }
}

pub fn feder_graph<T: Real>(g: &Graph<T>, k: usize) -> Result<FederGraph<T>> {
    if k == 0 {
        return input("boson count must be at least 1");
    }
    if !g.is_simple_unweighted() {
        return input("the boson graph needs an unweighted, loop-free primary graph");
    }
    let n = g.n();
    let size = multiset_count(n, k).filter(|&s| s <= PRODUCT_SPACE_LIMIT).ok_or_else(|| {
        Error::Guard(format!(
            "{k} bosons on {n} sites exceed {PRODUCT_SPACE_LIMIT} states"
        ))
    })?;
    let states = occupation_vectors(n, k);
    debug_assert_eq!(states.len(), size);
    let index: HashMap<OccupationVector, usize> =
        states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();

    let mut adj = Matrix::<T>::zeros(size, size);
    let mut moved = vec![0usize; n];
    for (i, s) in states.iter().enumerate() {
        for u in 0..n {
            let nu = s.counts[u];
            if nu == 0 {
                continue;
            }
            for v in g.neighbors(u).filter(|&v| v != u) {
                moved.copy_from_slice(&s.counts);
                moved[u] -= 1;
                moved[v] += 1;
                let j = index[&OccupationVector::new(moved.clone())];
                let w = T::lit((nu * (s.counts[v] + 1)) as f64).sqrt();
                let back = adj[(j, i)];
                if back != T::zero() && back != w {
                    return Err(Error::Numeric(format!(
                        "boson hop weights disagree between states {i} and {j}"
                    )));
                }
                adj[(i, j)] = w;
            }
        }
    }
    let mut graph = Graph::from_adjacency(adj)?;
    if let Some(name) = &g.name {
        graph.name = Some(format!("F({name},{k})"));
    }
    Ok(FederGraph {
        graph,
        states,
        index,
    })
}

/// Partition of `V(G)^k` into orbits of coordinate permutations.
#[derive(Clone, Debug)]
pub struct OrbitPartition {
    pub partition: Partition,
    /// Sorted tuple shared by the members of each cell.
    pub keys: Vec<Vec<usize>>,
}

impl OrbitPartition {
    pub fn occupation(&self, cell: usize, n: usize) -> OccupationVector {
        OccupationVector::of_tuple(&self.keys[cell], n).expect("keys are in range")
    }
}

fn product_size(n: usize, k: usize) -> Result<usize> {
    u32::try_from(k)
        .ok()
        .and_then(|k| n.checked_pow(k))
        .filter(|&s| s <= PRODUCT_SPACE_LIMIT)
        .ok_or_else(|| Error::Guard(format!("{n}^{k} exceeds {PRODUCT_SPACE_LIMIT} vertices")))
}

/// Coordinates of vertex `x` of `G^k`, most significant first.
pub fn tuple_of(mut x: usize, n: usize, k: usize) -> Vec<usize> {
    let mut t = vec![0; k];
    for slot in t.iter_mut().rev() {
        *slot = x % n;
        x /= n;
    }
    t
}

pub fn index_of_tuple(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &c| acc * n + c)
}

pub fn orbit_partition<T: Real>(g: &Graph<T>, k: usize) -> Result<OrbitPartition> {
    if k == 0 {
        return input("orbit partition needs k >= 1");
    }
    let n = g.n();
    let size = product_size(n, k)?;
    let sorted: Vec<Vec<usize>> = (0..size)
        .map(|x| {
            let mut t = tuple_of(x, n, k);
            t.sort_unstable();
            t
        })
        .collect();
    let partition = Partition::from_keys(&sorted);
    let keys = partition.cells().iter().map(|c| sorted[c[0]].clone()).collect();
    Ok(OrbitPartition { partition, keys })
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

/// `(1/k!) Σ_σ P_σ` by enumerating every coordinate permutation.
pub fn symmetrizer_explicit<T: Real>(n: usize, k: usize) -> Result<Matrix<T>> {
    if k == 0 {
        return input("symmetrizer needs k >= 1");
    }
    if k > EXPLICIT_SYMMETRIZER_MAX_K {
        return Err(Error::Guard(format!(
            "explicit symmetrizer enumerates k! permutations; k = {k} is above {EXPLICIT_SYMMETRIZER_MAX_K}"
        )));
    }
    let size = product_size(n, k)?;
    let perms = permutations(k);
    let share = T::one() / T::lit(perms.len() as f64);
    let mut s = Matrix::zeros(size, size);
    let mut moved = vec![0; k];
    for x in 0..size {
        let t = tuple_of(x, n, k);
        for p in &perms {
            for (i, &pi) in p.iter().enumerate() {
                moved[i] = t[pi];
            }
            let y = index_of_tuple(&moved, n);
            s[(y, x)] = s[(y, x)] + share;
        }
    }
    Ok(s)
}

/// Same operator from orbit sizes: `1/|orbit|` between tuples of one orbit.
pub fn symmetrizer_by_orbits<T: Real>(n: usize, k: usize) -> Result<Matrix<T>> {
    if k == 0 {
        return input("symmetrizer needs k >= 1");
    }
    let size = product_size(n, k)?;
    let keys: Vec<Vec<usize>> = (0..size)
        .map(|x| {
            let mut t = tuple_of(x, n, k);
            t.sort_unstable();
            t
        })
        .collect();
    let pi = Partition::from_keys(&keys);
    let sizes = pi.cell_sizes();
    Ok(Matrix::from_fn(size, size, |x, y| {
        let c = pi.cell_of(x);
        if c == pi.cell_of(y) {
            T::one() / T::lit(sizes[c] as f64)
        } else {
            T::zero()
        }
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetrizerReport<T> {
    /// `‖S − QQᵀ‖_max`
    pub projector: T,
    /// `‖SA − AS‖_max`
    pub commutator: T,
}

impl<T: Real> SymmetrizerReport<T> {
    pub fn max_residual(&self) -> T {
        self.projector.max(self.commutator)
    }
}

pub fn symmetrizer_check<T: Real>(g: &Graph<T>, k: usize) -> Result<SymmetrizerReport<T>> {
    let n = g.n();
    product_size(n, k)?;
    let s = if k <= EXPLICIT_SYMMETRIZER_MAX_K {
        symmetrizer_explicit(n, k)?
    } else {
        symmetrizer_by_orbits(n, k)?
    };
    let orbits = orbit_partition(g, k)?;
    let q = partition_matrix::<T>(&orbits.partition);
    let a = cartesian_power(g, k)?;
    let a = a.adjacency();
    Ok(SymmetrizerReport {
        projector: s.max_abs_diff(&q.projector()),
        commutator: s.matmul(a).max_abs_diff(&a.matmul(&s)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchReport<T> {
    pub holds: bool,
    pub deviation: T,
}

fn match_report<T: Real>(deviation: T, tol: f64) -> MatchReport<T> {
    MatchReport {
        holds: deviation < T::lit(tol),
        deviation,
    }
}

/// Compares `G^k / orbits` with the boson graph under the map from an orbit
/// to the occupation numbers of its tuples.
pub fn verify_feder_iso<T: Real>(g: &Graph<T>, k: usize) -> Result<MatchReport<T>> {
    let fed = feder_graph(g, k)?;
    let orbits = orbit_partition(g, k)?;
    let q = quotient(&cartesian_power(g, k)?, &orbits.partition)?.quotient;
    let n = g.n();
    let phi: Vec<usize> = (0..orbits.keys.len())
        .map(|c| {
            fed.index_of(&orbits.occupation(c, n))
                .expect("every orbit has an occupation vector")
        })
        .collect();
    if q.n() != fed.graph.n() {
        return Err(Error::Numeric(format!(
            "{} orbits but {} occupation vectors",
            q.n(),
            fed.graph.n()
        )));
    }
    let mut dev = T::zero();
    for j in 0..q.n() {
        for l in 0..q.n() {
            dev = dev.max((q.weight(j, l) - fed.graph.weight(phi[j], phi[l])).abs());
        }
    }
    Ok(match_report(dev, FEDER_ISO_TOLERANCE))
}

#[derive(Clone, Debug)]
pub struct CompositionReport<T> {
    pub holds: bool,
    pub deviation: T,
    /// Partition of `G^(m1·m2)` read off the composite partition matrix.
    pub composite: Partition,
}

/// Quotient twice (`(G^m1/π1)^m2/π2`) versus once by the partition whose
/// normalized matrix is `Q1^{⊗m2} · Q2`.
pub fn compose_quotients<T: Real>(
    g: &Graph<T>,
    m1: usize,
    pi1: &Partition,
    m2: usize,
    pi2: &Partition,
) -> Result<CompositionReport<T>> {
    if m1 == 0 || m2 == 0 {
        return input("powers must be at least 1");
    }
    let total = m1
        .checked_mul(m2)
        .ok_or_else(|| Error::Guard("power overflow".into()))?;
    product_size(g.n(), total)?;

    let inner = quotient(&cartesian_power(g, m1)?, pi1)?.quotient;
    let left = quotient(&cartesian_power(&inner, m2)?, pi2)?.quotient;

    let q1 = partition_matrix::<T>(pi1).entries;
    let mut q1_power = q1.clone();
    for _ in 1..m2 {
        q1_power = q1_power.kron(&q1);
    }
    let q2 = partition_matrix::<T>(pi2).entries;
    if q1_power.cols() != q2.rows() {
        return input("second partition does not live on the power of the first quotient");
    }
    let composite = crate::partition::NormalizedPartitionMatrix {
        entries: q1_power.matmul(&q2),
    };
    let big = cartesian_power(g, total)?;
    let (pi3, col_to_cell) = composite.to_partition(T::lit(COMPOSITION_TOLERANCE))?;
    let by_partition = quotient(&big, &pi3)?.quotient;
    let q = &composite.entries;
    let direct = q.transpose().matmul(big.adjacency()).matmul(q);

    let mut dev = T::zero();
    for j in 0..left.n() {
        for l in 0..left.n() {
            let w = left.weight(j, l);
            dev = dev
                .max((w - direct[(j, l)]).abs())
                .max((w - by_partition.weight(col_to_cell[j], col_to_cell[l])).abs());
        }
    }
    let report = match_report(dev, COMPOSITION_TOLERANCE);
    Ok(CompositionReport {
        holds: report.holds,
        deviation: report.deviation,
        composite: pi3,
    })
}

/// Product of the per-factor partitions: cell of a tuple is the tuple of cells.
pub fn product_partition(parts: &[&Partition]) -> Partition {
    let dims: Vec<usize> = parts.iter().map(|p| p.n()).collect();
    let total: usize = dims.iter().product();
    let keys: Vec<Vec<usize>> = (0..total)
        .map(|mut x| {
            let mut key = vec![0; dims.len()];
            for i in (0..dims.len()).rev() {
                key[i] = parts[i].cell_of(x % dims[i]);
                x /= dims[i];
            }
            key
        })
        .collect();
    Partition::from_keys(&keys)
}

fn product_graph<T: Real>(graphs: &[&Graph<T>]) -> Result<Graph<T>> {
    let total = graphs
        .iter()
        .try_fold(1usize, |acc, g| acc.checked_mul(g.n()))
        .filter(|&s| s <= PRODUCT_SPACE_LIMIT)
        .ok_or_else(|| Error::Guard(format!("product exceeds {PRODUCT_SPACE_LIMIT} vertices")))?;
    let mut out = graphs
        .first()
        .map(|g| (*g).clone())
        .ok_or_else(|| Error::Input("need at least one factor".into()))?;
    for g in &graphs[1..] {
        out = cartesian_product(&out, g);
    }
    debug_assert_eq!(out.n(), total);
    Ok(out)
}

/// `□_k (G_k/π_k)` versus `(□_k G_k)/π` with `π` the product partition,
/// whose normalized matrix is `⊗_k Q_k`.
pub fn product_of_quotients<T: Real>(pairs: &[(Graph<T>, Partition)]) -> Result<MatchReport<T>> {
    if pairs.is_empty() {
        return input("need at least one factor");
    }
    let quotients = pairs
        .iter()
        .map(|(g, p)| quotient(g, p).map(|r| r.quotient))
        .collect::<Result<Vec<_>>>()?;
    let whole = product_graph(&pairs.iter().map(|(g, _)| g).collect::<Vec<_>>())?;
    let left = product_graph(&quotients.iter().collect::<Vec<_>>())?;

    let mut q = partition_matrix::<T>(&pairs[0].1).entries;
    for (_, p) in &pairs[1..] {
        q = q.kron(&partition_matrix::<T>(p).entries);
    }
    let direct = q.transpose().matmul(whole.adjacency()).matmul(&q);
    let pi = product_partition(&pairs.iter().map(|(_, p)| p).collect::<Vec<_>>());
    let by_partition = quotient(&whole, &pi)?.quotient;

    let mut dev = T::zero();
    for j in 0..left.n() {
        for l in 0..left.n() {
            let w = left.weight(j, l);
            dev = dev
                .max((w - direct[(j, l)]).abs())
                .max((w - by_partition.weight(j, l)).abs());
        }
    }
    Ok(match_report(dev, COMPOSITION_TOLERANCE))
}

/// PST on the product between the tuples `(a_1..)` and `(b_1..)` at `t`,
/// after every factor passes its own transfer or periodicity check.
pub fn product_pst<T: Real>(factors: &[(Graph<T>, usize, usize)], t: T, tol: T) -> Result<bool> {
    if factors.is_empty() {
        return input("need at least one factor");
    }
    if factors.iter().all(|(_, a, b)| a == b) {
        return Err(Error::Precondition(
            "at least one factor must transfer between distinct vertices".into(),
        ));
    }
    for (i, (g, a, b)) in factors.iter().enumerate() {
        let ok = if a == b {
            is_periodic(g, *a, t, tol)?
        } else {
            verify_pst(g, *a, *b, t, tol)?
        };
        if !ok {
            let what = if a == b { "periodic at" } else { "PST between its endpoints at" };
            return Err(Error::Precondition(format!(
                "factor {i} is not {what} t = {t}"
            )));
        }
    }
    let whole = product_graph(&factors.iter().map(|(g, _, _)| g).collect::<Vec<_>>())?;
    let (mut a, mut b) = (0, 0);
    for (g, fa, fb) in factors {
        a = a * g.n() + fa;
        b = b * g.n() + fb;
    }
    verify_pst(&whole, a, b, t, tol)
}
