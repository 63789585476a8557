//! Harmonic-oscillator coherent states, Husimi functions on truncated Fock
//! space and the large-spin phase-space limit.
//!
//! Complex coordinates: `z = (q + ip)/sqrt(2)`, so the classical measure is
//! `dp dq / (2 pi) = d^2z / pi`. All phase-space integrals below carry the
//! `1/pi` normalization in their grid weights.

use crate::entropy::{LimitCurve, LimitRow};
use crate::error::{Error, Result};
use crate::linalg::{hermiticity_residual, hermitize, CMat, CVec, C64};
use crate::numeric::{gauss_legendre, linear_fit, pairwise_sum};
use crate::spin::{StateVec, TwiceSpin};
use crate::tol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

/// A density matrix on the truncated Fock space `span{|0>, ..., |N>}`.
///
/// The truncation is structural: matrix elements beyond `N` do not exist,
/// so the band condition holds by construction.
#[derive(Clone, Debug)]
pub struct FockDensity {
    n_max: u32,
    mat: CMat,
}

impl FockDensity {
    pub fn new(n_max: u32, mat: CMat) -> Result<Self> {
        let d = n_max as usize + 1;
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimensionMismatch(mat.nrows(), d));
        }
        let herm = hermiticity_residual(&mat);
        if herm > tol::HERMITICITY {
            return Err(Error::NotHermitian(herm));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol::UNIT_TRACE || tr.im.abs() > tol::UNIT_TRACE {
            return Err(Error::NotUnitTrace(tr.re));
        }
        let mat = hermitize(&mat);
        let min_eig = crate::linalg::eigvalsh(&mat).last().copied().unwrap_or(0.0);
        if min_eig < tol::EIGENVALUE_FLOOR {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(FockDensity { n_max, mat })
    }

    /// `|0><0|` on the truncated space.
    pub fn vacuum(n_max: u32) -> Self {
        let d = n_max as usize + 1;
        let mut mat = CMat::zeros(d, d);
        mat[(0, 0)] = C64::new(1.0, 0.0);
        FockDensity { n_max, mat }
    }

    /// Truncated and renormalized projector onto the coherent state at
    /// `z0`; accurate when the dropped tail `sum_{n>N} |<n|z0>|^2` is
    /// negligible.
    pub fn truncated_coherent(n_max: u32, z0: C64) -> Self {
        let c = overlap_vector(n_max, z0);
        let norm_sq = c.norm_squared();
        let d = n_max as usize + 1;
        let mat = CMat::from_fn(d, d, |i, l| c[i] * c[l].conj() / norm_sq);
        FockDensity { n_max, mat }
    }

    /// Rank-constrained Hilbert-Schmidt-style sample on the truncated space.
    pub fn sample(n_max: u32, rank: usize, seed: u64) -> Result<Self> {
        let d = n_max as usize + 1;
        if rank == 0 || rank > d {
            return Err(Error::InvalidParameter(format!(
                "rank must lie in 1..={d}, got {rank}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = CMat::from_fn(d, rank, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let mut m = &g * g.adjoint();
        let tr = m.trace().re;
        m /= C64::new(tr, 0.0);
        Ok(FockDensity {
            n_max,
            mat: hermitize(&m),
        })
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.n_max as usize + 1
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }
}

/// `<n|z> = e^(-|z|^2/2) z^n / sqrt(n!)`, evaluated in log space so large
/// `n` and large `|z|` cannot overflow.
pub fn glauber_overlap(n: u32, z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        return if n == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        };
    }
    let ln_mag = -0.5 * r * r + n as f64 * r.ln() - 0.5 * crate::numeric::ln_factorial(n);
    C64::from_polar(ln_mag.exp(), n as f64 * z.arg())
}

fn overlap_vector(n_max: u32, z: C64) -> CVec {
    CVec::from_fn(n_max as usize + 1, |n, _| glauber_overlap(n as u32, z))
}

/// The Husimi function `<z| rho |z>`, clamped to `[0, 1]`.
pub fn husimi(rho: &FockDensity, z: C64) -> f64 {
    let c = overlap_vector(rho.n_max, z);
    let v = c.dotc(&(&rho.mat * &c));
    v.re.clamp(0.0, 1.0)
}

/// Quadrature for `pi^(-1) integral ... d^2 z` over the disk `|z| <= R`:
/// Gauss-Legendre in the squared radius crossed with a uniform angle grid.
#[derive(Clone, Debug)]
pub struct PhaseGrid {
    nodes: Vec<C64>,
    weights: Vec<f64>,
    radius: f64,
}

impl PhaseGrid {
    pub fn new(radius: f64, n_radial: usize, n_angular: usize) -> Self {
        let (us, vs) = gauss_legendre(n_radial);
        let u_max = radius * radius;
        let mut nodes = Vec::with_capacity(n_radial * n_angular);
        let mut weights = Vec::with_capacity(n_radial * n_angular);
        for (x, v) in us.iter().zip(&vs) {
            let u = 0.5 * u_max * (x + 1.0);
            let r = u.sqrt();
            let w_radial = 0.5 * u_max * v; // du weight
            for a in 0..n_angular {
                let phi = 2.0 * PI * a as f64 / n_angular as f64;
                nodes.push(C64::from_polar(r, phi));
                // d^2z/pi = du dphi / (2 pi): the angle average carries 1/n.
                weights.push(w_radial / n_angular as f64);
            }
        }
        PhaseGrid {
            nodes,
            weights,
            radius,
        }
    }

    /// Grid sized for band limit `N`: the radius is grown until the Husimi
    /// tail bound `(N+1) e^(-R^2) sum_{i<=N} R^(2i)/i!` drops below
    /// `target_tail`.
    pub fn for_truncation(n_max: u32, target_tail: f64) -> Self {
        let mut r_sq = 2.0 * (1.0 / target_tail).ln();
        while husimi_tail_bound(n_max, r_sq) > target_tail {
            r_sq += 1.0;
        }
        r_sq += 2.0; // margin
        PhaseGrid::new(r_sq.sqrt(), 96, 128)
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `pi^(-1) integral f d^2 z` over the disk.
    pub fn integrate<F: Fn(C64) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| w * f(*z))
            .collect();
        pairwise_sum(&terms)
    }
}

/// Upper bound on `pi^(-1) integral_{|z| > R} <z|rho|z> d^2z` for any
/// band-limited state: `(N+1) e^(-R^2) sum_{i<=N} R^(2i)/i!`.
pub fn husimi_tail_bound(n_max: u32, r_sq: f64) -> f64 {
    let mut partial = 0.0;
    let mut term = 1.0;
    for i in 0..=n_max {
        if i > 0 {
            term *= r_sq / i as f64;
        }
        partial += term;
    }
    (n_max as f64 + 1.0) * (-r_sq).exp() * partial
}

/// `pi^(-1) integral f(<z|rho|z>) d^2 z` on the grid.
///
/// Requires `f(0) = 0`: with `f(0) != 0` the full-plane integral diverges,
/// so a truncated value would be meaningless.
pub fn glauber_concave_integral(
    rho: &FockDensity,
    f: &crate::majorization::ConcaveSpec,
    grid: &PhaseGrid,
) -> Result<f64> {
    let at_zero = f.eval(0.0);
    if at_zero != 0.0 {
        return Err(Error::NonzeroAtOrigin(at_zero));
    }
    Ok(grid.integrate(|z| f.eval(husimi(rho, z))))
}

/// Bloch coherent state in stereographic coordinates: amplitudes
/// `binom(2J, n)^(1/2) (1 + |z|^2/4)^(-J) (conj(z)/2)^n` on the number
/// basis `n = 0..2J` (so `|M> = |n = M + J>`).
pub fn bloch_stereo_ket(j: TwiceSpin, z: C64) -> StateVec {
    let d = j.dim();
    let mut amps = CVec::zeros(d);
    let r = z.norm();
    if r == 0.0 {
        amps[0] = C64::new(1.0, 0.0);
        return StateVec::new(j, amps).unwrap();
    }
    let root_binom = crate::numeric::binomial_row_sqrt(j.two_j());
    let envelope = (1.0 + 0.25 * r * r).powf(-j.j());
    let half_r = 0.5 * r;
    let angle = -z.arg();
    let mut mag = envelope;
    for n in 0..d {
        amps[n] = C64::from_polar(root_binom[n] * mag, n as f64 * angle);
        mag *= half_r;
    }
    StateVec::new(j, amps).unwrap()
}

/// The spin-`J` stereographic symbol of a band-limited state at the
/// rescaled point `w = sqrt(2/J) conj(z)`; only the first `N+1` amplitudes
/// of the spin state contribute.
pub fn scaled_stereo_symbol(rho: &FockDensity, j: TwiceSpin, z: C64) -> f64 {
    let w = z.conj() * C64::new((2.0 / j.j()).sqrt(), 0.0);
    let ket = bloch_stereo_ket(j, w);
    let d = rho.dim();
    let mut acc = C64::new(0.0, 0.0);
    for row in 0..d {
        for col in 0..d {
            acc += ket.amplitudes()[row].conj() * rho.mat[(row, col)] * ket.amplitudes()[col];
        }
    }
    acc.re.clamp(0.0, 1.0)
}

/// Tabulate the spin-`J` phase-space averages of a band-limited state
/// against the planar target `glauber_concave_integral(rho, f, grid)`.
///
/// Row values are the exactly normalized spin averages
/// `(2J+1)/(4 pi) integral f(symbol) d omega` written in the rescaled
/// plane, i.e. `(2J+1)/(2J) * pi^(-1) integral f(scaled symbol)
/// (1 + |z|^2/(2J))^(-2) d^2 z`; with `f(t) = t` a row is exactly 1 at
/// every `J`. Requires `2J >= 2(N + 2)` for every requested spin.
pub fn bloch_limit_curve(
    rho: &FockDensity,
    f: &crate::majorization::ConcaveSpec,
    js: &[TwiceSpin],
    grid: &PhaseGrid,
) -> Result<LimitCurve> {
    let min_two_j = 2 * (rho.n_max + 2);
    for j in js {
        if j.two_j() < min_two_j {
            return Err(Error::TruncationTooLarge {
                two_j: j.two_j(),
                min_two_j,
            });
        }
    }
    let target = glauber_concave_integral(rho, f, grid)?;
    let rows: Vec<LimitRow> = js
        .iter()
        .map(|&j| {
            let two_j = j.two_j() as f64;
            let value = grid.integrate(|z| {
                let damp = 1.0 + z.norm_sqr() / two_j;
                f.eval(scaled_stereo_symbol(rho, j, z)) / (damp * damp)
            }) * (two_j + 1.0)
                / two_j;
            LimitRow {
                two_spin: j.two_j(),
                scaled_value: value,
                abs_error: (value - target).abs(),
            }
        })
        .collect();
    let usable: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.abs_error > 0.0)
        .map(|r| ((r.two_spin as f64).ln(), r.abs_error.ln()))
        .collect();
    let fitted_error_exponent = if usable.len() >= 2 {
        let xs: Vec<f64> = usable.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = usable.iter().map(|p| p.1).collect();
        Some(-linear_fit(&xs, &ys).0)
    } else {
        None
    };
    Ok(LimitCurve {
        rows,
        target,
        fitted_error_exponent,
    })
}
