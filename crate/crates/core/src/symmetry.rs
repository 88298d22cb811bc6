//! Automorphisms, swap automorphisms and isomorphism of small weighted graphs
//! by individualization and refinement, plus the triangle census.
//!
//! Every search runs on the disjoint union of two graphs (a graph and a copy
//! of itself for automorphisms) and looks for a weight-preserving bijection
//! from the left half onto the right half.

use std::collections::BTreeMap;

use crate::error::{input, Error, Result};
use crate::graph::Graph;
use crate::scalar::Real;

/// Largest vertex count accepted by any search.
pub const SEARCH_LIMIT: usize = 64;
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexPermutation {
    image: Vec<usize>,
}

impl VertexPermutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &v in &image {
            if v >= image.len() || std::mem::replace(&mut seen[v], true) {
                return input("image is not a permutation");
            }
        }
        Ok(VertexPermutation { image })
    }

    pub fn identity(n: usize) -> Self {
        VertexPermutation {
            image: (0..n).collect(),
        }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// `A[τ(u)][τ(v)] == A[u][v]` within `tol` for all `u, v`.
    pub fn is_automorphism<T: Real>(&self, g: &Graph<T>, tol: T) -> bool {
        let n = g.n();
        self.len() == n
            && (0..n).all(|u| {
                (0..n).all(|v| (g.weight(self.image[u], self.image[v]) - g.weight(u, v)).abs() <= tol)
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum WeightKey {
    Zero,
    /// Weight is the square root of this integer.
    Radicand(u64),
    Quantized(i64),
}

fn weight_key(w: f64) -> WeightKey {
    if w == 0.0 {
        return WeightKey::Zero;
    }
    let sq = w * w;
    let r = sq.round();
    if r >= 1.0 && (sq - r).abs() <= WEIGHT_TOLERANCE && r < u64::MAX as f64 {
        WeightKey::Radicand(r as u64)
    } else {
        WeightKey::Quantized((w / WEIGHT_TOLERANCE).round() as i64)
    }
}

/// Color, loop class and sorted (edge class, neighbor color) pairs.
type Signature = (usize, u32, Vec<(u32, usize)>);

/// Class ids for the entries of the disjoint union `G ⊕ H`; `0` means no edge.
struct Union {
    n_left: usize,
    classes: Vec<Vec<u32>>,
}

impl Union {
    fn new<T: Real>(g: &Graph<T>, h: &Graph<T>) -> Self {
        let mut keys = BTreeMap::new();
        keys.insert(WeightKey::Zero, 0u32);
        for graph in [g, h] {
            for &w in graph.adjacency().as_slice() {
                let next = keys.len() as u32;
                keys.entry(weight_key(w.as_f64())).or_insert(next);
            }
        }
        // renumber in key order so ids do not depend on scan order
        let ids: BTreeMap<WeightKey, u32> =
            keys.keys().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        let (ng, nh) = (g.n(), h.n());
        let total = ng + nh;
        let mut classes = vec![vec![0u32; total]; total];
        for u in 0..ng {
            for v in 0..ng {
                classes[u][v] = ids[&weight_key(g.weight(u, v).as_f64())];
            }
        }
        for u in 0..nh {
            for v in 0..nh {
                classes[ng + u][ng + v] = ids[&weight_key(h.weight(u, v).as_f64())];
            }
        }
        Union {
            n_left: ng,
            classes,
        }
    }

    fn total(&self) -> usize {
        self.classes.len()
    }

    fn is_left(&self, v: usize) -> bool {
        v < self.n_left
    }

    /// Refines until the number of colors stops growing; ids are the ranks of
    /// the sorted signatures, so both halves are colored consistently.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let n = self.total();
        let mut count = distinct(&colors);
        loop {
            let sigs: Vec<Signature> = (0..n)
                .map(|u| {
                    let mut nb: Vec<(u32, usize)> = (0..n)
                        .filter(|&v| v != u && self.classes[u][v] != 0)
                        .map(|v| (self.classes[u][v], colors[v]))
                        .collect();
                    nb.sort_unstable();
                    (colors[u], self.classes[u][u], nb)
                })
                .collect();
            let mut sorted: Vec<&Signature> = sigs.iter().collect();
            sorted.sort();
            sorted.dedup();
            colors = sigs
                .iter()
                .map(|s| sorted.binary_search(&s).expect("signature present"))
                .collect();
            let next = sorted.len();
            if next == count {
                return colors;
            }
            count = next;
        }
    }

    fn individualize(&self, colors: &[usize], pairs: &[(usize, usize)]) -> Vec<usize> {
        let mut c = colors.to_vec();
        let first = c.iter().max().map_or(0, |m| m + 1);
        for (fresh, &(x, y)) in (first..).zip(pairs) {
            c[x] = fresh;
            c[y] = fresh;
        }
        self.refine(c)
    }

    /// Per color: left members and right members.
    fn cells(&self, colors: &[usize]) -> BTreeMap<usize, (Vec<usize>, Vec<usize>)> {
        let mut cells: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            let e = cells.entry(c).or_default();
            if self.is_left(v) {
                e.0.push(v);
            } else {
                e.1.push(v);
            }
        }
        cells
    }

    /// Depth-first search below `colors`; `found` returns `true` to stop.
    fn search(&self, colors: Vec<usize>, found: &mut dyn FnMut(Vec<usize>) -> bool) -> bool {
        let cells = self.cells(&colors);
        if cells.values().any(|(l, r)| l.len() != r.len()) {
            return false;
        }
        let target = cells
            .iter()
            .filter(|(_, (l, _))| l.len() > 1)
            .min_by_key(|(&c, (l, _))| (l.len(), c));
        match target {
            None => {
                let mut map = vec![0; self.n_left];
                for (l, r) in cells.values() {
                    map[l[0]] = r[0] - self.n_left;
                }
                if self.preserves(&map) {
                    found(map)
                } else {
                    false
                }
            }
            Some((_, (left, right))) => {
                let x = left[0];
                for &y in right {
                    if self.search(self.individualize(&colors, &[(x, y)]), found) {
                        return true;
                    }
                }
                false
            }
        }
    }

    fn preserves(&self, map: &[usize]) -> bool {
        let off = self.n_left;
        (0..off).all(|u| (0..off).all(|v| self.classes[u][v] == self.classes[map[u] + off][map[v] + off]))
    }

    fn first(&self, forced: &[(usize, usize)]) -> Option<Vec<usize>> {
        let start = self.individualize(&vec![0; self.total()], forced);
        let mut hit = None;
        self.search(start, &mut |m| {
            hit = Some(m);
            true
        });
        hit
    }
}

fn distinct(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn guard(n: usize) -> Result<()> {
    if n > SEARCH_LIMIT {
        return Err(Error::Guard(format!(
            "search is limited to {SEARCH_LIMIT} vertices, got {n}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct AutomorphismReport {
    /// At most `limit` automorphisms in search order.
    pub permutations: Vec<VertexPermutation>,
    /// Exact group order from the stabilizer chain.
    pub order: u128,
}

impl AutomorphismReport {
    pub fn complete(&self) -> bool {
        self.permutations.len() as u128 == self.order
    }
}

pub fn automorphisms<T: Real>(g: &Graph<T>, limit: usize) -> Result<AutomorphismReport> {
    let n = g.n();
    guard(n)?;
    let u = Union::new(g, g);

    let mut permutations = Vec::new();
    if limit > 0 {
        u.search(u.refine(vec![0; 2 * n]), &mut |m| {
            permutations.push(VertexPermutation { image: m });
            permutations.len() >= limit
        });
    }

    let mut order: u128 = 1;
    let mut fixed: Vec<(usize, usize)> = Vec::new();
    loop {
        let colors = u.individualize(&vec![0; 2 * n], &fixed);
        let cells = u.cells(&colors);
        let Some((_, (left, right))) = cells
            .iter()
            .filter(|(_, (l, _))| l.len() > 1)
            .min_by_key(|(&c, (l, _))| (l.len(), c))
        else {
            break;
        };
        let v = left[0];
        // orbit of v under the pointwise stabilizer of the fixed points,
        // closed under every witness found so far
        let mut orbit = vec![v];
        let mut witnesses: Vec<Vec<usize>> = Vec::new();
        for &w in right {
            let w = w - n;
            if orbit.contains(&w) {
                continue;
            }
            let mut pairs = fixed.clone();
            pairs.push((v, w + n));
            if let Some(m) = u.first(&pairs) {
                witnesses.push(m);
                close_orbit(&mut orbit, &witnesses);
            }
        }
        order = order
            .checked_mul(orbit.len() as u128)
            .ok_or_else(|| Error::Guard("automorphism group order exceeds u128".into()))?;
        fixed.push((v, v + n));
    }
    Ok(AutomorphismReport {
        permutations,
        order,
    })
}

fn close_orbit(orbit: &mut Vec<usize>, gens: &[Vec<usize>]) {
    let mut i = 0;
    while i < orbit.len() {
        for g in gens {
            let w = g[orbit[i]];
            if !orbit.contains(&w) {
                orbit.push(w);
            }
        }
        i += 1;
    }
}

/// An automorphism sending `a` to `b`, if one exists.
pub fn find_swap<T: Real>(g: &Graph<T>, a: usize, b: usize) -> Result<Option<VertexPermutation>> {
    let n = g.n();
    guard(n)?;
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return input("swap endpoints must differ");
    }
    let u = Union::new(g, g);
    Ok(u.first(&[(a, b + n)]).map(|image| VertexPermutation { image }))
}

pub fn exists_swap<T: Real>(g: &Graph<T>, a: usize, b: usize) -> Result<bool> {
    Ok(find_swap(g, a, b)?.is_some())
}

/// Triangles through each vertex of the unweighted off-diagonal support.
pub fn triangle_census<T: Real>(g: &Graph<T>) -> Vec<usize> {
    let n = g.n();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| u != v && g.weight(u, v) != T::zero()).collect())
        .collect();
    let mut count = vec![0; n];
    for u in 0..n {
        for v in u + 1..n {
            if !adj[u][v] {
                continue;
            }
            for w in v + 1..n {
                if adj[u][w] && adj[v][w] {
                    count[u] += 1;
                    count[v] += 1;
                    count[w] += 1;
                }
            }
        }
    }
    count
}

/// A weight-preserving bijection `V(G) → V(H)`, if one exists.
pub fn find_isomorphism<T: Real>(g: &Graph<T>, h: &Graph<T>) -> Result<Option<VertexPermutation>> {
    guard(g.n())?;
    guard(h.n())?;
    if g.n() != h.n() {
        return Ok(None);
    }
    let mut cg = triangle_census(g);
    let mut ch = triangle_census(h);
    cg.sort_unstable();
    ch.sort_unstable();
    if cg != ch {
        return Ok(None);
    }
    let u = Union::new(g, h);
    Ok(u.first(&[]).map(|image| VertexPermutation { image }))
}

pub fn is_isomorphic<T: Real>(g: &Graph<T>, h: &Graph<T>) -> Result<bool> {
    Ok(find_isomorphism(g, h)?.is_some())
}
