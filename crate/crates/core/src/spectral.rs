//! Symmetric eigendecomposition, walk propagators and fidelities, plus the
//! closed-form spectra of the weighted 4- and 5-vertex paths.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{input, Error, Result};
use crate::graph::Graph;
use crate::linalg::{Complex, Matrix};
use crate::scalar::Real;

/// Sweep budget for the cyclic Jacobi solver.
pub const MAX_SWEEPS: usize = 100;

/// Tolerance on fidelity and on each trigonometric identity when a PST
/// condition is checked.
pub const PST_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Spectrum<T> {
    /// Ascending.
    pub eigenvalues: Vec<T>,
    /// Column `j` is the unit eigenvector for `eigenvalues[j]`.
    pub eigenvectors: Matrix<T>,
}

/// Cyclic Jacobi rotations on a copy of `a`. Sweeps stop once the
/// off-diagonal Frobenius mass drops below `tol * ‖A‖_F`.
pub fn symmetric_eigen<T: Real>(a: &Matrix<T>) -> Result<Spectrum<T>> {
    if !a.is_square() {
        return input("eigendecomposition needs a square matrix");
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Matrix::<T>::identity(n);
    let two = T::lit(2.0);
    let limit = T::jacobi_tolerance() * a.frobenius();
    // per-entry skip threshold; keeps the total off-diagonal mass under `limit`
    let skip = limit / T::lit(n.max(1) as f64);

    let off_mass = |m: &Matrix<T>| {
        let mut s = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                s = s + two * m[(p, q)] * m[(p, q)];
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_mass(&m) <= limit {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= skip {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (two * apq);
                let t = if theta.abs() > T::lit(1e150) {
                    T::one() / (two * theta)
                } else {
                    let sgn = if theta >= T::zero() { T::one() } else { -T::one() };
                    sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    let np = c * akp - s * akq;
                    let nq = s * akp + c * akq;
                    m[(k, p)] = np;
                    m[(p, k)] = np;
                    m[(k, q)] = nq;
                    m[(q, k)] = nq;
                }
                m[(p, p)] = m[(p, p)] - t * apq;
                m[(q, q)] = m[(q, q)] + t * apq;
                m[(p, q)] = T::zero();
                m[(q, p)] = T::zero();
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off_mass(&m) > limit {
        return Err(Error::Numeric(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (n = {n})"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[(i, i)]
            .partial_cmp(&m[(j, j)])
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });
    let eigenvalues = order.iter().map(|&i| m[(i, i)]).collect();
    let eigenvectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

pub fn eigendecompose<T: Real>(g: &Graph<T>) -> Result<Spectrum<T>> {
    symmetric_eigen(g.adjacency())
}

impl<T: Real> Spectrum<T> {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `‖VᵀV − I‖_max`
    pub fn orthogonality_residual(&self) -> T {
        let v = &self.eigenvectors;
        v.transpose().matmul(v).max_abs_diff(&Matrix::identity(self.n()))
    }

    /// `‖A − V diag(λ) Vᵀ‖_max`
    pub fn reconstruction_residual(&self, a: &Matrix<T>) -> T {
        let v = &self.eigenvectors;
        let n = self.n();
        let scaled = Matrix::from_fn(n, n, |r, c| v[(r, c)] * self.eigenvalues[c]);
        a.max_abs_diff(&scaled.matmul(&v.transpose()))
    }

    /// `⟨b| e^{-itA} |a⟩`
    pub fn amplitude(&self, a: usize, b: usize, t: T) -> Complex<T> {
        let v = &self.eigenvectors;
        self.eigenvalues
            .iter()
            .enumerate()
            .fold(Complex::zero(), |acc, (j, &lam)| {
                acc + Complex::expi_neg(lam * t).scale(v[(b, j)] * v[(a, j)])
            })
    }

    /// `d/dt |⟨b| e^{-itA} |a⟩|²`
    pub fn fidelity_sq_derivative(&self, a: usize, b: usize, t: T) -> T {
        let v = &self.eigenvectors;
        let mut amp = Complex::zero();
        let mut damp = Complex::zero();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let term = Complex::expi_neg(lam * t).scale(v[(b, j)] * v[(a, j)]);
            amp = amp + term;
            // d/dt e^{-iλt} = -iλ e^{-iλt}
            damp = damp + Complex::new(term.im * lam, -term.re * lam);
        }
        T::lit(2.0) * (amp.conj() * damp).re
    }

    pub fn fidelity(&self, a: usize, b: usize, t: T) -> T {
        self.amplitude(a, b, t).abs()
    }

    pub fn propagator(&self, t: T) -> Result<Propagator<T>> {
        propagator(self, t)
    }
}

/// `U(t) = exp(-i t A)` as a dense complex matrix.
#[derive(Clone, Debug)]
pub struct Propagator<T> {
    pub matrix: Matrix<Complex<T>>,
    pub time: T,
}

impl<T: Real> Propagator<T> {
    /// `‖U†U − I‖_max`
    pub fn unitarity_residual(&self) -> T {
        self.matrix.adjoint().cmatmul(&self.matrix).identity_residual()
    }
}

pub fn propagator<T: Real>(spec: &Spectrum<T>, t: T) -> Result<Propagator<T>> {
    if !t.is_finite() {
        return input("time must be finite");
    }
    let n = spec.n();
    let v = &spec.eigenvectors;
    let phases: Vec<Complex<T>> = spec
        .eigenvalues
        .iter()
        .map(|&lam| Complex::expi_neg(lam * t))
        .collect();
    let matrix = Matrix::from_fn(n, n, |r, c| {
        phases
            .iter()
            .enumerate()
            .fold(Complex::zero(), |acc, (j, &ph)| acc + ph.scale(v[(r, j)] * v[(c, j)]))
    });
    Ok(Propagator { matrix, time: t })
}

/// `|⟨b| e^{-itA(G)} |a⟩|`
pub fn fidelity<T: Real>(g: &Graph<T>, a: usize, b: usize, t: T) -> Result<T> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if !t.is_finite() {
        return input("time must be finite");
    }
    Ok(eigendecompose(g)?.fidelity(a, b, t))
}

/// Read-shared memo of decompositions keyed by the exact adjacency bits.
pub struct SpectrumCache<T> {
    enabled: bool,
    map: RwLock<HashMap<Vec<u64>, Arc<Spectrum<T>>>>,
}

impl<T: Real> Default for SpectrumCache<T> {
    fn default() -> Self {
        Self::new(true)
    }
}

impl<T: Real> SpectrumCache<T> {
    pub fn new(enabled: bool) -> Self {
        Self {
            enabled,
            map: RwLock::new(HashMap::new()),
        }
    }

    pub fn get(&self, g: &Graph<T>) -> Result<Arc<Spectrum<T>>> {
        if !self.enabled {
            return Ok(Arc::new(eigendecompose(g)?));
        }
        let mut key: Vec<u64> = vec![g.n() as u64];
        key.extend(g.adjacency().as_slice().iter().map(|w| w.as_f64().to_bits()));
        if let Some(hit) = self.map.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let spec = Arc::new(eigendecompose(g)?);
        self.map
            .write()
            .expect("cache lock")
            .entry(key)
            .or_insert_with(|| spec.clone());
        Ok(spec)
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Closed-form eigensystem of the weighted 4-path with loops `a` and
/// middle edge `b`.
#[derive(Clone, Copy, Debug)]
pub struct P4Spectrum<T> {
    pub k_plus: T,
    pub k_minus: T,
    pub delta_plus: T,
    pub delta_minus: T,
    /// `k₊ ± Δ₊`, symmetric eigenvectors `(1, α, α, 1)/M`.
    pub alpha: [T; 2],
    /// `k₋ ± Δ₋`, antisymmetric eigenvectors `(1, β, −β, −1)/N`.
    pub beta: [T; 2],
    /// `M±² = 2(1 + α±²)`
    pub m_sq: [T; 2],
    /// `N±² = 2(1 + β±²)`
    pub n_sq: [T; 2],
}

pub fn p4_spectrum<T: Real>(a: T, b: T) -> P4Spectrum<T> {
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let k_plus = half * (a + b);
    let k_minus = half * (a - b);
    let delta_plus = (k_plus * k_plus + T::one()).sqrt();
    let delta_minus = (k_minus * k_minus + T::one()).sqrt();
    let alpha = [k_plus + delta_plus, k_plus - delta_plus];
    let beta = [k_minus + delta_minus, k_minus - delta_minus];
    P4Spectrum {
        k_plus,
        k_minus,
        delta_plus,
        delta_minus,
        alpha,
        beta,
        m_sq: alpha.map(|x| two * (T::one() + x * x)),
        n_sq: beta.map(|x| two * (T::one() + x * x)),
    }
}

impl<T: Real> P4Spectrum<T> {
    /// Eigenpairs sorted by eigenvalue.
    pub fn eigenpairs(&self) -> Vec<(T, Vec<T>)> {
        let mut out = Vec::with_capacity(4);
        for i in 0..2 {
            let (al, m) = (self.alpha[i], self.m_sq[i].sqrt());
            out.push((al, vec![T::one() / m, al / m, al / m, T::one() / m]));
            let (be, nn) = (self.beta[i], self.n_sq[i].sqrt());
            out.push((be, vec![T::one() / nn, be / nn, -be / nn, -T::one() / nn]));
        }
        out.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite"));
        out
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        self.eigenpairs().into_iter().map(|p| p.0).collect()
    }
}

/// Closed-form eigensystem of the weighted 5-path `(a, b, b, a)`.
///
/// The symmetric nonzero pair is `±Δ` with `Δ = sqrt(a² + 2b²)`; at
/// `a = √2` this is `a·sqrt(1 + b²)`.
#[derive(Clone, Copy, Debug)]
pub struct P5Spectrum<T> {
    pub a: T,
    pub b: T,
    pub delta: T,
}

pub fn p5_spectrum<T: Real>(a: T, b: T) -> P5Spectrum<T> {
    P5Spectrum {
        a,
        b,
        delta: (a * a + T::lit(2.0) * b * b).sqrt(),
    }
}

impl<T: Real> P5Spectrum<T> {
    pub fn eigenpairs(&self) -> Vec<(T, Vec<T>)> {
        let (a, b, d) = (self.a, self.b, self.delta);
        let normalize = |v: Vec<T>| {
            let n = v.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
            v.into_iter().map(|x| x / n).collect::<Vec<T>>()
        };
        let z = T::zero();
        let one = T::one();
        let half = T::lit(0.5);
        let mut out = vec![
            (z, normalize(vec![one, z, -a / b, z, one])),
            (a, vec![-half, -half, z, half, half]),
            (-a, vec![half, -half, z, half, -half]),
        ];
        for lam in [d, -d] {
            let two_b_over_a = T::lit(2.0) * b / a;
            out.push((lam, normalize(vec![one, lam / a, two_b_over_a, lam / a, one])));
        }
        out.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite"));
        out
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        self.eigenpairs().into_iter().map(|p| p.0).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum P4Condition {
    /// `cos(tΔ₊)cos(tΔ₋) = +1` and `sin(tb/2) = ±1`
    ConditionA,
    /// `cos(tΔ₊)cos(tΔ₋) = −1` and `cos(tb/2) = ±1`
    ConditionB,
    Neither,
}

/// Which sufficient antipodal-transfer condition of the weighted 4-path holds
/// at `t`, each identity checked to [`PST_TOLERANCE`]. `Neither` does not
/// rule out transfer by itself.
pub fn pst_condition_p4<T: Real>(a: T, b: T, t: T) -> P4Condition {
    let s = p4_spectrum(a, b);
    let tol = T::lit(PST_TOLERANCE);
    let prod = (t * s.delta_plus).cos() * (t * s.delta_minus).cos();
    let half_bt = t * b * T::lit(0.5);
    let unit = |x: T| (x.abs() - T::one()).abs() <= tol;
    if (prod - T::one()).abs() <= tol && unit(half_bt.sin()) {
        P4Condition::ConditionA
    } else if (prod + T::one()).abs() <= tol && unit(half_bt.cos()) {
        P4Condition::ConditionB
    } else {
        P4Condition::Neither
    }
}

/// True iff `G∖a` and `G∖b` have the same sorted spectrum within 1e-8.
pub fn deleted_cospectral<T: Real>(g: &Graph<T>, a: usize, b: usize) -> Result<bool> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return input("deleted_cospectral needs distinct vertices");
    }
    if g.n() == 1 {
        return Ok(true);
    }
    let ea = eigendecompose(&g.delete_vertex(a)?)?.eigenvalues;
    let eb = eigendecompose(&g.delete_vertex(b)?)?.eigenvalues;
    let tol = T::lit(1e-8);
    Ok(ea.iter().zip(&eb).all(|(x, y)| (*x - *y).abs() <= tol))
}
