//! GF(2) tools for cube-like Cayley graphs `X(Z_2^d, S)`: the generator sum,
//! the binary code spanned by the generators, and a PST prediction that is
//! cross-checked against the walk itself.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use num_integer::Integer;

use crate::error::{input, Error, Result};
use crate::graph::{self, Graph};

/// Largest dimension accepted for the vertex set.
pub const MAX_DIMENSION: u32 = 20;
/// Largest dimension for which the walk is evaluated during certification.
pub const MAX_CERTIFY_DIMENSION: u32 = 12;
pub const CERTIFY_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubelikeSpec {
    d: u32,
    generators: Vec<u32>,
}

impl CubelikeSpec {
    pub fn new(d: u32, generators: Vec<u32>) -> Result<Self> {
        graph::check_cubelike(d, &generators)?;
        Ok(CubelikeSpec { d, generators })
    }

    /// Comma-separated bit strings of one common length, most significant bit first.
    pub fn parse(text: &str) -> Result<Self> {
        let mut d = None;
        let mut gens = Vec::new();
        for part in text.split(',').map(str::trim) {
            let (len, v) = parse_bits(part)?;
            match d {
                None => d = Some(len),
                Some(prev) if prev != len => {
                    return input(format!("bit string {part:?} has length {len}, expected {prev}"))
                }
                _ => {}
            }
            gens.push(v);
        }
        Self::new(d.unwrap_or(0), gens)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn graph(&self) -> Result<Graph<f64>> {
        graph::cubelike(self.d, &self.generators)
    }
}

impl fmt::Display for CubelikeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.generators.iter().map(|&g| format_bits(g, self.d)).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn parse_bits(s: &str) -> Result<(u32, u32)> {
    if s.is_empty() || s.len() > MAX_DIMENSION as usize {
        return input(format!("bit string {s:?} must have 1..={MAX_DIMENSION} digits"));
    }
    let mut v = 0u32;
    for c in s.chars() {
        v = (v << 1)
            | match c {
                '0' => 0,
                '1' => 1,
                _ => return input(format!("bit string {s:?} has a non-binary digit")),
            };
    }
    Ok((s.len() as u32, v))
}

pub fn format_bits(v: u32, d: u32) -> String {
    (0..d).rev().map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// XOR of every generator.
pub fn omega(spec: &CubelikeSpec) -> u32 {
    spec.generators.iter().fold(0, |acc, &g| acc ^ g)
}

/// Fixed-length bit set over the generator positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u64>);

impl Word {
    pub fn zeros(len: usize) -> Self {
        Word(vec![0; len.div_ceil(64)])
    }

    /// Position `j` of the word is character `j` of `bits`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let mut w = Word::zeros(bits.len());
        for (j, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.set(j),
                _ => return input(format!("bit string {bits:?} has a non-binary digit")),
            }
        }
        Ok(w)
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &Word) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    /// Parity of the inner product.
    pub fn dot(&self, other: &Word) -> bool {
        self.0.iter().zip(&other.0).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    fn leading(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }
}

/// Row space of the `d × |S|` matrix whose columns are the generators.
#[derive(Clone, Debug)]
pub struct BinaryCode {
    /// Row `i` holds bit `i` of every generator.
    pub rows: Vec<Word>,
    pub length: usize,
    basis: Vec<Word>,
}

pub fn code_of(spec: &CubelikeSpec) -> BinaryCode {
    let length = spec.generators.len();
    let rows: Vec<Word> = (0..spec.d)
        .map(|i| {
            let mut w = Word::zeros(length);
            for (j, &g) in spec.generators.iter().enumerate() {
                if g >> i & 1 == 1 {
                    w.set(j);
                }
            }
            w
        })
        .collect();
    let basis = row_basis(&rows);
    BinaryCode {
        rows,
        length,
        basis,
    }
}

fn row_basis(rows: &[Word]) -> Vec<Word> {
    let mut basis: Vec<Word> = Vec::new();
    for r in rows {
        let mut w = r.clone();
        for b in &basis {
            if let Some(p) = b.leading() {
                if w.get(p) {
                    w.xor_assign(b);
                }
            }
        }
        if let Some(p) = w.leading() {
            for b in basis.iter_mut() {
                if b.get(p) {
                    b.xor_assign(&w);
                }
            }
            basis.push(w);
        }
    }
    basis
}

impl BinaryCode {
    /// Code spanned by explicit generator rows of a common length.
    pub fn from_rows(length: usize, rows: Vec<Word>) -> Result<Self> {
        if rows.iter().any(|r| r.0.len() != length.div_ceil(64)) {
            return input("code rows must share the word length");
        }
        let basis = row_basis(&rows);
        Ok(BinaryCode {
            rows,
            length,
            basis,
        })
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Visits every codeword exactly once (zero included) in Gray-code order.
    pub fn for_each_codeword(&self, mut f: impl FnMut(&Word)) {
        let mut cur = Word::zeros(self.length);
        f(&cur);
        let total: u64 = 1 << self.basis.len();
        for i in 1..total {
            cur.xor_assign(&self.basis[i.trailing_zeros() as usize]);
            f(&cur);
        }
    }

    pub fn codewords(&self) -> Vec<Word> {
        let mut out = Vec::with_capacity(1 << self.basis.len());
        self.for_each_codeword(|w| out.push(w.clone()));
        out
    }
}

/// GCD of the nonzero codeword weights, `0` for the zero code.
pub fn weight_gcd(code: &BinaryCode) -> u32 {
    let mut acc = 0u32;
    code.for_each_codeword(|w| acc = acc.gcd(&w.weight()));
    acc
}

/// Every pair of codewords has even inner product. Checked on the generator
/// rows: the Gram matrix of a spanning set vanishes mod 2 iff the code does.
pub fn is_self_orthogonal(code: &BinaryCode) -> bool {
    code.rows
        .iter()
        .enumerate()
        .all(|(i, r)| code.rows[i..].iter().all(|s| !r.dot(s)))
}

/// GF(2) rank of the generators as `d`-bit vectors.
pub fn rank(spec: &CubelikeSpec) -> usize {
    let mut pivots = [0u32; 32];
    let mut r = 0;
    for &g in &spec.generators {
        let mut v = g;
        while v != 0 {
            let top = 31 - v.leading_zeros() as usize;
            if pivots[top] == 0 {
                pivots[top] = v;
                r += 1;
                break;
            }
            v ^= pivots[top];
        }
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PstCase {
    /// The generator sum is nonzero; transfer to it at `π/2`.
    NonzeroSum,
    /// Zero sum, gcd 2, self-orthogonal code; transfer at `π/4`.
    EvenSelfOrthogonal,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub source: u32,
    /// Known in the nonzero-sum case; otherwise found during certification.
    pub target: Option<u32>,
    pub time: f64,
    pub case: PstCase,
}

pub fn predict_pst(spec: &CubelikeSpec) -> Result<Option<Prediction>> {
    if rank(spec) != spec.d as usize {
        return input(format!(
            "generators span a subspace of rank {} < {}; the graph is disconnected",
            rank(spec),
            spec.d
        ));
    }
    let w = omega(spec);
    if w != 0 {
        return Ok(Some(Prediction {
            source: 0,
            target: Some(w),
            time: FRAC_PI_2,
            case: PstCase::NonzeroSum,
        }));
    }
    let code = code_of(spec);
    if weight_gcd(&code) == 2 && is_self_orthogonal(&code) {
        return Ok(Some(Prediction {
            source: 0,
            target: None,
            time: FRAC_PI_4,
            case: PstCase::EvenSelfOrthogonal,
        }));
    }
    Ok(None)
}

/// `⟨b|e^{-itA}|0⟩` for every `b`, through the character table of `Z_2^d`:
/// eigenvalue of character `x` is `Σ_s (-1)^{x·s}`.
pub fn amplitudes_from_origin(spec: &CubelikeSpec, t: f64) -> Vec<(f64, f64)> {
    let n = 1usize << spec.d;
    let eig: Vec<f64> = (0..n as u32)
        .map(|x| {
            spec.generators
                .iter()
                .map(|&s| if (x & s).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
                .sum()
        })
        .collect();
    let mut re: Vec<f64> = eig.iter().map(|l| (l * t).cos()).collect();
    let mut im: Vec<f64> = eig.iter().map(|l| -(l * t).sin()).collect();
    walsh_hadamard(&mut re);
    walsh_hadamard(&mut im);
    let scale = 1.0 / n as f64;
    re.iter().zip(&im).map(|(r, i)| (r * scale, i * scale)).collect()
}

fn walsh_hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for chunk in v.chunks_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certification {
    pub omega: u32,
    pub prediction: Option<Prediction>,
    /// Vertex other than the origin reaching fidelity `1 - tol` at the
    /// predicted time (or at `π/4` when nothing is predicted).
    pub observed_target: Option<u32>,
    pub fidelity: f64,
    /// Prediction and walk agree.
    pub certified: bool,
}

pub fn certify(spec: &CubelikeSpec) -> Result<Certification> {
    if spec.d > MAX_CERTIFY_DIMENSION {
        return Err(Error::Guard(format!(
            "certification evaluates the walk on 2^{} vertices; limit is 2^{MAX_CERTIFY_DIMENSION}",
            spec.d
        )));
    }
    let prediction = predict_pst(spec)?;
    let time = prediction.map_or(FRAC_PI_4, |p| p.time);
    let fid: Vec<f64> = amplitudes_from_origin(spec, time)
        .into_iter()
        .map(|(r, i)| r.hypot(i))
        .collect();
    let best = (1..fid.len()).max_by(|&x, &y| fid[x].total_cmp(&fid[y]));
    let observed = best.filter(|&b| fid[b] >= 1.0 - CERTIFY_TOLERANCE);
    let certified = match prediction {
        Some(Prediction {
            target: Some(t), ..
        }) => observed == Some(t as usize),
        Some(_) => observed.is_some(),
        None => observed.is_none(),
    };
    let fidelity = match prediction.and_then(|p| p.target) {
        Some(t) => fid[t as usize],
        None => best.map_or(0.0, |b| fid[b]),
    };
    Ok(Certification {
        omega: omega(spec),
        prediction: prediction.map(|p| Prediction {
            target: p.target.or(observed.map(|b| b as u32)),
            ..p
        }),
        observed_target: observed.map(|b| b as u32),
        fidelity,
        certified,
    })
}
