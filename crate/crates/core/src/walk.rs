//! Fidelity scans with peak refinement, PST and periodicity checks, and the
//! amplitude-level comparison between a graph and its quotient.

use rayon::prelude::*;

use crate::error::{input, Error, Result};
use crate::graph::Graph;
use crate::partition::{quotient, Partition};
use crate::scalar::Real;
use crate::spectral::{eigendecompose, Spectrum, PST_TOLERANCE};

/// Default number of grid points for a scan.
pub const DEFAULT_STEPS: usize = 10_000;
/// Golden-section iteration budget per peak.
pub const REFINE_BUDGET: usize = 200;
/// Bracket width at which peak refinement stops.
pub const REFINE_TIME_TOLERANCE: f64 = 1e-12;
/// A refined time within this distance of a named constant is reported by name.
pub const SYMBOLIC_MATCH_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak<T> {
    pub t: T,
    pub fidelity: T,
}

#[derive(Clone, Debug)]
pub struct FidelitySeries<T> {
    pub source: usize,
    pub target: usize,
    /// `(t, fidelity)` on a uniform grid starting at 0.
    pub grid: Vec<(T, T)>,
    /// Refined local maxima, best first.
    pub refined_peaks: Vec<Peak<T>>,
}

impl<T: Real> FidelitySeries<T> {
    pub fn best(&self) -> Option<Peak<T>> {
        self.refined_peaks.first().copied()
    }

    /// Earliest refined peak reaching `1 - tol`.
    pub fn first_transfer(&self, tol: T) -> Option<Peak<T>> {
        self.refined_peaks
            .iter()
            .filter(|p| p.fidelity >= T::one() - tol)
            .min_by(|x, y| x.t.partial_cmp(&y.t).expect("finite"))
            .copied()
    }
}

pub fn fidelity_scan<T: Real>(
    g: &Graph<T>,
    a: usize,
    b: usize,
    t_max: T,
    steps: usize,
) -> Result<FidelitySeries<T>> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    let spec = eigendecompose(g)?;
    scan_spectrum(&spec, a, b, t_max, steps)
}

/// Same as [`fidelity_scan`] on a precomputed decomposition.
pub fn scan_spectrum<T: Real>(
    spec: &Spectrum<T>,
    a: usize,
    b: usize,
    t_max: T,
    steps: usize,
) -> Result<FidelitySeries<T>> {
    if a >= spec.n() || b >= spec.n() {
        return input("scan endpoint out of range");
    }
    if !(t_max.is_finite() && t_max > T::zero()) {
        return input("t_max must be finite and positive");
    }
    if steps < 2 {
        return input("a scan needs at least 2 grid points");
    }
    let dt = t_max / T::lit((steps - 1) as f64);
    let grid: Vec<(T, T)> = (0..steps)
        .into_par_iter()
        .map(|i| {
            let t = dt * T::lit(i as f64);
            (t, spec.fidelity(a, b, t))
        })
        .collect();

    let mut peaks: Vec<Peak<T>> = (1..steps - 1)
        .into_par_iter()
        .filter(|&i| grid[i].1 > grid[i - 1].1 && grid[i].1 >= grid[i + 1].1)
        .map(|i| {
            let refined = refine_peak(spec, a, b, grid[i - 1].0, grid[i + 1].0);
            if refined.fidelity >= grid[i].1 {
                refined
            } else {
                Peak {
                    t: grid[i].0,
                    fidelity: grid[i].1,
                }
            }
        })
        .collect();
    peaks.sort_by(|x, y| {
        y.fidelity
            .partial_cmp(&x.fidelity)
            .expect("finite")
            .then(x.t.partial_cmp(&y.t).expect("finite"))
    });
    Ok(FidelitySeries {
        source: a,
        target: b,
        grid,
        refined_peaks: peaks,
    })
}

/// Golden-section maximization of the fidelity on `[lo, hi]`. When the two
/// probes agree to rounding, the sign of the analytic derivative at their
/// midpoint picks the side to keep.
pub fn refine_peak<T: Real>(spec: &Spectrum<T>, a: usize, b: usize, lo: T, hi: T) -> Peak<T> {
    let f = |t: T| spec.fidelity(a, b, t);
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let tol = T::lit(REFINE_TIME_TOLERANCE);
    let (mut lo, mut hi) = (lo, hi);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..REFINE_BUDGET {
        if hi - lo <= tol {
            break;
        }
        let noise = T::lit(8.0) * T::epsilon() * fc.abs().max(T::one());
        let keep_left = if (fc - fd).abs() <= noise {
            spec.fidelity_sq_derivative(a, b, (c + d) * T::lit(0.5)) < T::zero()
        } else {
            fc > fd
        };
        if keep_left {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let t = (lo + hi) * T::lit(0.5);
    Peak { t, fidelity: f(t) }
}

/// `fidelity(G, a, b, t) >= 1 - tol`
pub fn verify_pst<T: Real>(g: &Graph<T>, a: usize, b: usize, t: T, tol: T) -> Result<bool> {
    Ok(crate::spectral::fidelity(g, a, b, t)? >= T::one() - tol)
}

/// `fidelity(G, a, a, t) >= 1 - tol`
pub fn is_periodic<T: Real>(g: &Graph<T>, a: usize, t: T, tol: T) -> Result<bool> {
    verify_pst(g, a, a, t, tol)
}

/// Default PST tolerance as a scalar.
pub fn pst_tolerance<T: Real>() -> T {
    T::lit(PST_TOLERANCE)
}

/// Largest `|⟨b|e^{-itA(G)}|a⟩ − ⟨π(b)|e^{-itA(G/π)}|π(a)⟩|` over `times`.
/// Both endpoints must sit in singleton cells of an equitable `pi`.
pub fn verify_equivalence<T: Real>(
    g: &Graph<T>,
    pi: &Partition,
    a: usize,
    b: usize,
    times: &[T],
) -> Result<T> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    let qr = quotient(g, pi)?;
    for v in [a, b] {
        if !pi.is_singleton(v) {
            return Err(Error::Precondition(format!(
                "vertex {v} is not in a singleton cell"
            )));
        }
    }
    let full = eigendecompose(g)?;
    let reduced = eigendecompose(&qr.quotient)?;
    let (qa, qb) = (pi.cell_of(a), pi.cell_of(b));
    Ok(times
        .par_iter()
        .map(|&t| (full.amplitude(a, b, t) - reduced.amplitude(qa, qb, t)).abs())
        .reduce(T::zero, |x, y| x.max(y)))
}

/// Named times a refined peak is compared against.
pub fn symbolic_times() -> Vec<(&'static str, f64)> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};
    let r15 = 15f64.sqrt();
    vec![
        ("pi/4", FRAC_PI_4),
        ("pi/2", FRAC_PI_2),
        ("3pi/4", 3.0 * FRAC_PI_4),
        ("pi", PI),
        ("pi/sqrt2", PI / SQRT_2),
        ("sqrt15*pi/4", r15 * FRAC_PI_4),
        ("sqrt15*pi/2", r15 * FRAC_PI_2),
    ]
}

pub fn symbolic_match(t: f64) -> Option<&'static str> {
    symbolic_times()
        .into_iter()
        .find(|(_, v)| (t - v).abs() <= SYMBOLIC_MATCH_TOLERANCE)
        .map(|(name, _)| name)
}
