//! Weighted undirected graphs stored as dense symmetric adjacency matrices.
//!
//! Loops are stored once on the diagonal with their weight, so a quotient
//! cell that sends weight `d` back into itself shows up as `A[j][j] = d`.
//! Products use row-major vertex indexing: vertex `(g, h)` of `G □ H` is
//! `g * |V(H)| + h`.

use std::collections::BTreeSet;

use crate::error::{input, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct Graph<T> {
    adjacency: Matrix<T>,
    pub name: Option<String>,
    pub vertex_labels: Option<Vec<String>>,
}

impl<T: Real> Graph<T> {
    /// Wraps an adjacency matrix after checking the graph invariants: square,
    /// non-empty, exactly symmetric, finite and nonnegative.
    pub fn from_adjacency(adjacency: Matrix<T>) -> Result<Self> {
        if !adjacency.is_square() {
            return input("adjacency matrix must be square");
        }
        let n = adjacency.rows();
        if n == 0 {
            return input("graph must have at least one vertex");
        }
        for u in 0..n {
            for v in u..n {
                let w = adjacency[(u, v)];
                if !w.is_finite() || w < T::zero() {
                    return input(format!("weight at ({u}, {v}) must be finite and nonnegative"));
                }
                if adjacency[(v, u)] != w {
                    return input(format!("adjacency not symmetric at ({u}, {v})"));
                }
            }
        }
        Ok(Self {
            adjacency,
            name: None,
            vertex_labels: None,
        })
    }

    /// Builds a graph from `(u, v, w)` triples; `u == v` sets a loop weight.
    /// Repeated pairs are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, T)]) -> Result<Self> {
        if n == 0 {
            return input("graph must have at least one vertex");
        }
        let mut adj = Matrix::zeros(n, n);
        let mut seen = BTreeSet::new();
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return input(format!("edge ({u}, {v}) out of range for n = {n}"));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return input(format!("duplicate edge ({}, {})", key.0, key.1));
            }
            if !w.is_finite() || w < T::zero() {
                return input(format!("edge ({u}, {v}) has invalid weight {w}"));
            }
            adj[(u, v)] = w;
            adj[(v, u)] = w;
        }
        Self::from_adjacency(adj)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn n(&self) -> usize {
        self.adjacency.rows()
    }

    pub fn adjacency(&self) -> &Matrix<T> {
        &self.adjacency
    }

    pub fn weight(&self, u: usize, v: usize) -> T {
        self.adjacency[(u, v)]
    }

    /// Edges with `u <= v` and nonzero weight, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, T)> {
        let n = self.n();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u..n {
                let w = self.adjacency[(u, v)];
                if w != T::zero() {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    /// Number of nonzero off-diagonal pairs.
    pub fn edge_count(&self) -> usize {
        self.edges().iter().filter(|(u, v, _)| u != v).count()
    }

    /// Row sums (loops counted once).
    pub fn degrees(&self) -> Vec<T> {
        (0..self.n())
            .map(|u| self.adjacency.row(u).iter().fold(T::zero(), |s, &w| s + w))
            .collect()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency
            .row(u)
            .iter()
            .enumerate()
            .filter(move |&(v, &w)| v != u && w != T::zero())
            .map(|(v, _)| v)
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n()).any(|u| self.adjacency[(u, u)] != T::zero())
    }

    /// True when every off-diagonal weight is 0 or 1 and there are no loops.
    pub fn is_simple_unweighted(&self) -> bool {
        !self.has_loops()
            && self
                .adjacency
                .as_slice()
                .iter()
                .all(|&w| w == T::zero() || w == T::one())
    }

    /// Graph on the vertices `keep`, in the given order.
    pub fn induced(&self, keep: &[usize]) -> Result<Self> {
        if keep.iter().any(|&v| v >= self.n()) {
            return input("induced subgraph vertex out of range");
        }
        Self::from_adjacency(Matrix::from_fn(keep.len(), keep.len(), |r, c| {
            self.adjacency[(keep[r], keep[c])]
        }))
    }

    /// Removes one vertex.
    pub fn delete_vertex(&self, v: usize) -> Result<Self> {
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            return input(format!("vertex {v} out of range for n = {}", self.n()));
        }
        Ok(())
    }
}

/// Named graph families.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphFamilySpec<T> {
    Complete(usize),
    Path(usize),
    Cycle(usize),
    Hypercube(u32),
    /// Circulant on `Z_n` with connection set given as residues in `1..n`.
    Circulant { n: usize, connection: Vec<usize> },
    /// Cayley graph of `Z_2^d` with the given generators.
    Cubelike { d: u32, generators: Vec<u32> },
    /// 4-vertex path: outer edges 1, middle edge `b`, loops `a` on the inner vertices.
    WeightedP4 { a: T, b: T },
    /// 5-vertex path with edge weights `a, b, b, a`.
    WeightedP5 { a: T, b: T },
    /// `(n+1)`-vertex path with edge `(j, j+1)` weighted `sqrt((j+1)(n-j))`.
    ChristandlPath(usize),
    GodsilFamily { m: u32, connection: Option<Vec<usize>> },
}

pub fn build<T: Real>(spec: &GraphFamilySpec<T>) -> Result<Graph<T>> {
    use GraphFamilySpec::*;
    let one = T::one();
    let g = match spec {
        Complete(n) => {
            require_positive(*n, "complete graph")?;
            Graph::from_adjacency(Matrix::from_fn(*n, *n, |r, c| if r == c { T::zero() } else { one }))?
                .with_name(format!("complete({n})"))
        }
        Path(n) => {
            require_positive(*n, "path")?;
            let edges: Vec<_> = (1..*n).map(|j| (j - 1, j, one)).collect();
            Graph::from_edges(*n, &edges)?.with_name(format!("path({n})"))
        }
        Cycle(n) => {
            if *n < 3 {
                return input("cycle needs at least 3 vertices");
            }
            let edges: Vec<_> = (0..*n).map(|j| (j, (j + 1) % n, one)).collect();
            Graph::from_edges(*n, &edges)?.with_name(format!("cycle({n})"))
        }
        Hypercube(d) => {
            if *d == 0 || *d > 20 {
                return input("hypercube dimension must be in 1..=20");
            }
            let gens: Vec<u32> = (0..*d).map(|i| 1u32 << i).collect();
            cubelike(*d, &gens)?.with_name(format!("hypercube({d})"))
        }
        Circulant { n, connection } => circulant(*n, connection)?,
        Cubelike { d, generators } => cubelike(*d, generators)?,
        WeightedP4 { a, b } => {
            require_weight(*a, "a")?;
            require_weight(*b, "b")?;
            Graph::from_edges(4, &[(0, 1, one), (1, 1, *a), (1, 2, *b), (2, 2, *a), (2, 3, one)])?
                .with_name(format!("p4({a},{b})"))
        }
        WeightedP5 { a, b } => {
            require_weight(*a, "a")?;
            require_weight(*b, "b")?;
            Graph::from_edges(5, &[(0, 1, *a), (1, 2, *b), (2, 3, *b), (3, 4, *a)])?
                .with_name(format!("p5({a},{b})"))
        }
        ChristandlPath(n) => {
            require_positive(*n, "christandl path")?;
            let edges: Vec<_> = (0..*n)
                .map(|j| (j, j + 1, T::lit(((j + 1) * (n - j)) as f64).sqrt()))
                .collect();
            Graph::from_edges(n + 1, &edges)?.with_name(format!("christandl({n})"))
        }
        GodsilFamily { m, connection } => godsil_family(*m, connection.as_deref())?.graph,
    };
    Ok(g)
}

fn require_positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        return input(format!("{what} needs a positive size"));
    }
    Ok(())
}

fn require_weight<T: Real>(w: T, what: &str) -> Result<()> {
    if !(w.is_finite() && w > T::zero()) {
        return input(format!("weight {what} must be finite and strictly positive"));
    }
    Ok(())
}

/// Connection set must lie in `1..n` and be closed under negation mod `n`.
pub fn check_circulant_set(n: usize, connection: &[usize]) -> Result<BTreeSet<usize>> {
    if n == 0 {
        return input("circulant needs n >= 1");
    }
    if connection.is_empty() {
        return input("circulant connection set is empty");
    }
    let set: BTreeSet<usize> = connection.iter().copied().collect();
    for &s in &set {
        if s == 0 || s >= n {
            return input(format!("circulant element {s} must lie in 1..{n}"));
        }
        if !set.contains(&(n - s)) {
            return input(format!("circulant set not closed under negation: {s} present, {} missing", n - s));
        }
    }
    Ok(set)
}

/// Expands `{1, 2}` into `{±1, ±2}` as residues mod `n`.
pub fn symmetric_residues(n: usize, steps: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut set = BTreeSet::new();
    for s in steps {
        let r = s % n;
        if r != 0 {
            set.insert(r);
            set.insert(n - r);
        }
    }
    set.into_iter().collect()
}

pub fn circulant<T: Real>(n: usize, connection: &[usize]) -> Result<Graph<T>> {
    let set = check_circulant_set(n, connection)?;
    let adj = Matrix::from_fn(n, n, |r, c| {
        if set.contains(&((c + n - r) % n)) {
            T::one()
        } else {
            T::zero()
        }
    });
    let label: Vec<String> = set.iter().map(|s| s.to_string()).collect();
    Ok(Graph::from_adjacency(adj)?.with_name(format!("circulant({n};{})", label.join(","))))
}

/// Distinct nonzero `d`-bit generators, `1 <= d <= 20`.
pub fn check_cubelike(d: u32, generators: &[u32]) -> Result<BTreeSet<u32>> {
    if d == 0 || d > 20 {
        return input("cube-like dimension must be in 1..=20");
    }
    let set: BTreeSet<u32> = generators.iter().copied().collect();
    if set.len() != generators.len() {
        return input("cube-like generators must be distinct");
    }
    if set.is_empty() {
        return input("cube-like generator set is empty");
    }
    for &g in &set {
        if g == 0 || g >> d != 0 {
            return input(format!("generator {g:#b} must be a nonzero {d}-bit vector"));
        }
    }
    Ok(set)
}

pub fn cubelike<T: Real>(d: u32, generators: &[u32]) -> Result<Graph<T>> {
    let set = check_cubelike(d, generators)?;
    let n = 1usize << d;
    let adj = Matrix::from_fn(n, n, |r, c| {
        if set.contains(&((r ^ c) as u32)) {
            T::one()
        } else {
            T::zero()
        }
    });
    Ok(Graph::from_adjacency(adj)?.with_name(format!("cubelike({d};{})", set.len())))
}

/// `A(G) ⊗ I + I ⊗ A(H)`.
pub fn cartesian_product<T: Real>(g: &Graph<T>, h: &Graph<T>) -> Graph<T> {
    let (ng, nh) = (g.n(), h.n());
    let adj = Matrix::from_fn(ng * nh, ng * nh, |r, c| {
        let (g1, h1) = (r / nh, r % nh);
        let (g2, h2) = (c / nh, c % nh);
        let mut w = T::zero();
        if h1 == h2 {
            w = w + g.weight(g1, g2);
        }
        if g1 == g2 {
            w = w + h.weight(h1, h2);
        }
        w
    });
    let mut out = Graph::from_adjacency(adj).expect("product of valid graphs is valid");
    if let (Some(a), Some(b)) = (&g.name, &h.name) {
        out.name = Some(format!("{a} x {b}"));
    }
    out
}

/// `G □ G □ ... □ G` (`k` factors, `k >= 1`).
pub fn cartesian_power<T: Real>(g: &Graph<T>, k: usize) -> Result<Graph<T>> {
    if k == 0 {
        return input("cartesian power needs k >= 1");
    }
    let mut out = g.clone();
    for _ in 1..k {
        out = cartesian_product(&out, g);
    }
    if let Some(name) = &g.name {
        out.name = Some(format!("{name}^{k}"));
    }
    Ok(out)
}

/// Disjoint union plus every unit-weight edge between the two sides.
pub fn join<T: Real>(g: &Graph<T>, h: &Graph<T>) -> Graph<T> {
    let (ng, nh) = (g.n(), h.n());
    let adj = Matrix::from_fn(ng + nh, ng + nh, |r, c| match (r < ng, c < ng) {
        (true, true) => g.weight(r, c),
        (false, false) => h.weight(r - ng, c - ng),
        _ => T::one(),
    });
    Graph::from_adjacency(adj).expect("join of valid graphs is valid")
}

pub fn complement<T: Real>(g: &Graph<T>) -> Graph<T> {
    let n = g.n();
    let adj = Matrix::from_fn(n, n, |r, c| {
        if r != c && g.weight(r, c) == T::zero() {
            T::one()
        } else {
            T::zero()
        }
    });
    Graph::from_adjacency(adj).expect("complement is valid")
}

/// Multiplies every weight by `c > 0`.
pub fn scale<T: Real>(g: &Graph<T>, c: T) -> Result<Graph<T>> {
    if !(c.is_finite() && c > T::zero()) {
        return input("scale factor must be finite and positive");
    }
    let mut out = Graph::from_adjacency(g.adjacency.scale(c))?;
    out.name = g.name.clone();
    Ok(out)
}

/// The two-apex construction `K1 + A_n ∘ B_n + K1` together with its apexes.
#[derive(Clone, Debug)]
pub struct GodsilGraph<T> {
    pub graph: Graph<T>,
    pub apex_a: usize,
    pub apex_b: usize,
    /// Vertices of the `A_n` layer (neighbors of `apex_a`).
    pub layer_a: Vec<usize>,
    /// Vertices of the `B_n` layer (neighbors of `apex_b`).
    pub layer_b: Vec<usize>,
    pub params: GodsilParams,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GodsilParams {
    /// Layer size `15 * 4^(m-2)`.
    pub n: usize,
    /// Degree of each layer circulant, `6 * 2^(m-2)`.
    pub a: usize,
    /// Degree of the cross connection, `8 * 2^(m-2)`.
    pub b: usize,
}

impl GodsilParams {
    pub fn for_m(m: u32) -> Result<Self> {
        if !(2..=6).contains(&m) {
            return input("godsil family parameter m must be in 2..=6");
        }
        let s = 1usize << (m - 2);
        Ok(Self {
            n: 15 * s * s,
            a: 6 * s,
            b: 8 * s,
        })
    }

    /// Connection set of `A_n`: `±(floor(n/2)+1), ..., ±(floor(n/2)+a/2)`.
    pub fn layer_a_set(&self) -> Vec<usize> {
        symmetric_residues(self.n, (1..=self.a / 2).map(|j| self.n / 2 + j))
    }

    /// Connection set of `B_n`: `±1, ..., ±a/2`.
    pub fn layer_b_set(&self) -> Vec<usize> {
        symmetric_residues(self.n, 1..=self.a / 2)
    }

    /// Default cross connection `±1, ..., ±b/2`.
    pub fn default_connection(&self) -> Vec<usize> {
        symmetric_residues(self.n, 1..=self.b / 2)
    }
}

/// Vertex order: apex `a` = 0, layer `A_n` = `1..=n`, layer `B_n` = `n+1..=2n`,
/// apex `b` = `2n+1`. The cross connection joins `A`-vertex `i` to `B`-vertex
/// `j` when `(j - i) mod n` lies in the connection set.
pub fn godsil_family<T: Real>(m: u32, connection: Option<&[usize]>) -> Result<GodsilGraph<T>> {
    let params = GodsilParams::for_m(m)?;
    let n = params.n;
    let conn = match connection {
        Some(c) => c.to_vec(),
        None => params.default_connection(),
    };
    let conn_set = check_circulant_set(n, &conn)?;
    if conn_set.len() != params.b {
        return Err(Error::Input(format!(
            "cross connection must be {}-regular, got degree {}",
            params.b,
            conn_set.len()
        )));
    }
    let a_set: BTreeSet<usize> = params.layer_a_set().into_iter().collect();
    let b_set: BTreeSet<usize> = params.layer_b_set().into_iter().collect();
    let total = 2 * n + 2;
    let apex_b = total - 1;
    let layer = |v: usize| -> Option<(u8, usize)> {
        match v {
            0 => None,
            v if v <= n => Some((0, v - 1)),
            v if v <= 2 * n => Some((1, v - n - 1)),
            _ => None,
        }
    };
    let adj = Matrix::from_fn(total, total, |r, c| {
        let hit = match (r, c) {
            (0, c) => layer(c).is_some_and(|(l, _)| l == 0),
            (r, 0) => layer(r).is_some_and(|(l, _)| l == 0),
            (r, c) if r == apex_b => layer(c).is_some_and(|(l, _)| l == 1),
            (r, c) if c == apex_b => layer(r).is_some_and(|(l, _)| l == 1),
            (r, c) => {
                let (lr, ir) = layer(r).expect("layer vertex");
                let (lc, ic) = layer(c).expect("layer vertex");
                let diff = (ic + n - ir) % n;
                match (lr, lc) {
                    (0, 0) => a_set.contains(&diff),
                    (1, 1) => b_set.contains(&diff),
                    (0, 1) => conn_set.contains(&diff),
                    (1, 0) => conn_set.contains(&((ir + n - ic) % n)),
                    _ => unreachable!(),
                }
            }
        };
        if hit {
            T::one()
        } else {
            T::zero()
        }
    });
    let graph = Graph::from_adjacency(adj)?.with_name(format!("godsil(m={m})"));
    Ok(GodsilGraph {
        graph,
        apex_a: 0,
        apex_b,
        layer_a: (1..=n).collect(),
        layer_b: (n + 1..=2 * n).collect(),
        params,
    })
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn small_graph() -> impl Strategy<Value = Graph<f64>> {
        (1usize..5).prop_flat_map(|n| {
            proptest::collection::vec(prop_oneof![Just(0.0), Just(1.0), 0.1f64..3.0], n * n).prop_map(
                move |w| {
                    let m = Matrix::from_fn(n, n, |r, c| w[r.min(c) * n + r.max(c)]);
                    Graph::from_adjacency(m).unwrap()
                },
            )
        })
    }

    fn simple_graph() -> impl Strategy<Value = Graph<f64>> {
        (1usize..7).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
                let m = Matrix::from_fn(n, n, |r, c| {
                    if r != c && bits[r.min(c) * n + r.max(c)] {
                        1.0
                    } else {
                        0.0
                    }
                });
                Graph::from_adjacency(m).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn product_is_associative(a in small_graph(), b in small_graph(), c in small_graph()) {
            let left = cartesian_product(&cartesian_product(&a, &b), &c);
            let right = cartesian_product(&a, &cartesian_product(&b, &c));
            prop_assert!(left.adjacency().max_abs_diff(right.adjacency()) < 1e-12);
        }

        #[test]
        fn complement_is_involution(g in simple_graph()) {
            let back = complement(&complement(&g));
            prop_assert_eq!(back.adjacency(), g.adjacency());
        }

        #[test]
        fn scale_roundtrip(g in small_graph()) {
            let back = scale(&scale(&g, 2.0).unwrap(), 0.5).unwrap();
            prop_assert_eq!(back.adjacency(), g.adjacency());
        }

        #[test]
        fn cubelike_is_regular(gens in proptest::collection::btree_set(1u32..16, 1..8)) {
            let gens: Vec<u32> = gens.into_iter().collect();
            let g: Graph<f64> = cubelike(4, &gens).unwrap();
            let k = gens.len() as f64;
            prop_assert!(g.degrees().iter().all(|&d| d == k));
        }
    }
}
