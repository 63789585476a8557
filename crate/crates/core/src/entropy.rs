//! Entropies, classical concave averages and the large-output-spin limit.
//!
//! All entropies use the natural logarithm. Classical averages are taken
//! against the normalized coherent-state measure `(2J+1) d omega / (4 pi)`,
//! so the lower symbol acts as a probability density.

use crate::channel::{apply_channel, kraus_set};
use crate::error::Result;
use crate::linalg::eigvalsh;
use crate::majorization::{trace_concave, ConcaveSpec};
use crate::numeric::{integrate_adaptive, linear_fit, pairwise_sum};
use crate::spin::{
    antiunitary_conjugate, coherent_ket, DensityMatrix, SphereQuadrature, TwiceSpin,
};
use crate::tol;
use serde::Serialize;
use std::f64::consts::PI;

/// `S(rho) = -sum lambda ln lambda` over the clamped spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.clamped_spectrum()
        .iter()
        .map(|&v| if v > 0.0 { -v * v.ln() } else { 0.0 })
        .sum()
}

/// Coherent-state amplitudes evaluated at every node of a sphere
/// quadrature, stored flat (node-major), so many density matrices can be
/// averaged against the same rule cheaply.
pub struct CoherentSymbolTable {
    spin: TwiceSpin,
    amps: Vec<crate::linalg::C64>,
    weights: Vec<f64>,
}

impl CoherentSymbolTable {
    pub fn new(spin: TwiceSpin, quad: &SphereQuadrature) -> Self {
        let dim = spin.dim();
        let mut amps = Vec::with_capacity(dim * quad.len());
        for p in quad.nodes() {
            let ket = coherent_ket(spin, p);
            amps.extend(ket.amplitudes().iter().copied());
        }
        CoherentSymbolTable {
            spin,
            amps,
            weights: quad.weights().to_vec(),
        }
    }

    pub fn spin(&self) -> TwiceSpin {
        self.spin
    }

    /// Lower symbols of `rho` at every node, clamped to `[0, 1]`.
    pub fn symbols(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        let dim = self.spin.dim();
        if rho.dim() != dim {
            return Err(crate::error::Error::DimensionMismatch(rho.dim(), dim));
        }
        let m = rho.matrix();
        Ok(self
            .amps
            .chunks_exact(dim)
            .map(|ket| {
                let mut acc = 0.0;
                for row in 0..dim {
                    // Diagonal plus twice the real part of the upper triangle.
                    acc += m[(row, row)].re * ket[row].norm_sqr();
                    for col in row + 1..dim {
                        acc += 2.0 * (ket[row].conj() * m[(row, col)] * ket[col]).re;
                    }
                }
                acc.clamp(0.0, 1.0)
            })
            .collect())
    }

    /// `(2J+1)/(4 pi) * integral f(<omega|rho|omega>) d omega` on this rule.
    pub fn average(&self, rho: &DensityMatrix, f: &ConcaveSpec) -> Result<f64> {
        Ok(self.averages_from_symbols(&self.symbols(rho)?, std::slice::from_ref(f))[0])
    }

    /// Averages of several functions against one symbol evaluation.
    pub fn averages(&self, rho: &DensityMatrix, fs: &[ConcaveSpec]) -> Result<Vec<f64>> {
        Ok(self.averages_from_symbols(&self.symbols(rho)?, fs))
    }

    fn averages_from_symbols(&self, symbols: &[f64], fs: &[ConcaveSpec]) -> Vec<f64> {
        let norm = self.spin.dim() as f64 / (4.0 * PI);
        fs.iter()
            .map(|f| {
                let terms: Vec<f64> = symbols
                    .iter()
                    .zip(&self.weights)
                    .map(|(s, w)| w * f.eval(*s))
                    .collect();
                pairwise_sum(&terms) * norm
            })
            .collect()
    }
}

/// Classical concave average of the lower symbol of `rho` under `quad`.
pub fn classical_concave_average(
    rho: &DensityMatrix,
    f: &ConcaveSpec,
    quad: &SphereQuadrature,
) -> Result<f64> {
    CoherentSymbolTable::new(rho.spin(), quad).average(rho, f)
}

/// Classical average with automatic refinement: the quadrature degree starts
/// at `4 * 2J` and doubles until two successive values differ by less than
/// the convergence tolerance. Returns the value and the final degree.
pub fn converged_classical_average(rho: &DensityMatrix, f: &ConcaveSpec) -> Result<(f64, usize)> {
    let mut degree = (4 * rho.spin().two_j() as usize).max(8);
    let mut prev = classical_concave_average(rho, f, &SphereQuadrature::with_degree(degree))?;
    for _ in 0..8 {
        degree *= 2;
        let next = classical_concave_average(rho, f, &SphereQuadrature::with_degree(degree))?;
        if (next - prev).abs() < tol::QUADRATURE_CONVERGENCE {
            return Ok((next, degree));
        }
        prev = next;
    }
    Ok((prev, degree))
}

/// Wehrl (classical) entropy: the concave average with `f(t) = -t ln t`.
pub fn wehrl_entropy(rho: &DensityMatrix, quad: &SphereQuadrature) -> Result<f64> {
    classical_concave_average(rho, &ConcaveSpec::XLogX, quad)
}

/// `classical average - trace functional`; non-negative for concave `f` up
/// to quadrature noise.
pub fn berezin_lieb_gap(
    rho: &DensityMatrix,
    f: &ConcaveSpec,
    quad: &SphereQuadrature,
) -> Result<f64> {
    Ok(classical_concave_average(rho, f, quad)? - trace_concave(rho, f))
}

/// Classical concave average on the spin-1/2 space by exact zonal
/// reduction.
///
/// For `2J = 1` the lower symbol is affine in the Bloch vector,
/// `<omega|rho|omega> = (1 + b . omega)/2`, so the sphere average collapses
/// to `integral_{-1}^{1} f((1 + |b| t)/2) dt`. The adaptive integrator
/// resolves kinked `f` here far beyond what a fixed product rule can reach.
pub fn half_spin_classical_average(rho: &DensityMatrix, f: &ConcaveSpec) -> Result<f64> {
    if rho.spin().two_j() != 1 {
        return Err(crate::error::Error::DimensionMismatch(rho.dim(), 2));
    }
    let purity: f64 = rho.matrix().iter().map(|c| c.norm_sqr()).sum();
    let bloch_len = (2.0 * purity - 1.0).clamp(0.0, 1.0).sqrt();
    Ok(integrate_adaptive(
        &|t: f64| f.eval(0.5 * (1.0 + bloch_len * t)),
        -1.0,
        1.0,
        tol::ADAPTIVE_1D_REL,
    ))
}

/// The classical concave average of a coherent state in closed 1-D form:
/// `(2J+1) * integral_0^1 f(t^(2J)) dt`, adaptive to relative accuracy
/// `tol::ADAPTIVE_1D_REL`.
pub fn coherent_classical_average(j: TwiceSpin, f: &ConcaveSpec) -> f64 {
    let power = j.two_j() as i32;
    let integral = integrate_adaptive(
        &|t: f64| f.eval(t.powi(power)),
        0.0,
        1.0,
        tol::ADAPTIVE_1D_REL,
    );
    j.dim() as f64 * integral
}

/// The rescaled output trace functional
/// `(2J+1)/(2K+1) * Tr f( (2K+1)/(2J+1) * Phi(rho) )` with `K = J + k/2`,
/// computed through the Kraus form (matrix path).
pub fn scaled_channel_average(
    j: TwiceSpin,
    k: u32,
    rho: &DensityMatrix,
    f: &ConcaveSpec,
) -> Result<f64> {
    let ks = kraus_set(j, k as i32)?;
    // Phi(rho) = Phi~(U^{-1} rho U); conjugate the input so the matrix path
    // reproduces the partial-trace channel exactly.
    let conj = antiunitary_conjugate(j, rho.matrix());
    let out = apply_channel(&ks, &DensityMatrix::new_unchecked(j, conj))?;
    let d_out = out.dim() as f64;
    let scale = d_out / j.dim() as f64;
    let total: f64 = eigvalsh(out.matrix())
        .iter()
        .map(|&lam| f.eval((scale * lam).clamp(0.0, 1.0)))
        .sum();
    Ok(total / scale)
}

/// Closed form of [`scaled_channel_average`] on a coherent input: the `k+1`
/// nonzero rescaled eigenvalues `prod_{i<r} (k-i)/(2K-i)` plus the `f(0)`
/// bulk of the `2K - k` vanishing ones.
pub fn scaled_coherent_channel_average(j: TwiceSpin, k: u32, f: &ConcaveSpec) -> f64 {
    let two_k = j.two_j() + k;
    let mut head = 0.0;
    let mut mu = 1.0f64;
    for r in 0..=k {
        head += f.eval(mu.min(1.0));
        mu *= (k - r) as f64 / (two_k - r) as f64;
    }
    let dim_ratio = j.dim() as f64 / (two_k + 1) as f64;
    let bulk = (two_k - k) as f64 * f.eval(0.0);
    dim_ratio * (head + bulk)
}

/// One row of a limit table: the doubled spin of the approximating space,
/// the scaled value there, and its distance to the limiting target.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LimitRow {
    pub two_spin: u32,
    pub scaled_value: f64,
    pub abs_error: f64,
}

/// Scaled coherent channel averages against the classical target, with an
/// empirical error-decay exponent fitted on a log-log scale.
#[derive(Clone, Debug, Serialize)]
pub struct LimitCurve {
    pub rows: Vec<LimitRow>,
    pub target: f64,
    /// Slope of `-ln |error|` against `ln (2K+1)`; `None` when fewer than
    /// two rows carry a usable (nonzero) error.
    pub fitted_error_exponent: Option<f64>,
}

/// Tabulate the scaled coherent output averages for increasing `k` and fit
/// the decay of the distance to the classical value.
pub fn classical_limit_curve(j: TwiceSpin, f: &ConcaveSpec, ks: &[u32]) -> LimitCurve {
    let target = coherent_classical_average(j, f);
    let rows: Vec<LimitRow> = ks
        .iter()
        .map(|&k| {
            let value = scaled_coherent_channel_average(j, k, f);
            LimitRow {
                two_spin: j.two_j() + k,
                scaled_value: value,
                abs_error: (value - target).abs(),
            }
        })
        .collect();
    let usable: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.abs_error > 0.0)
        .map(|r| ((r.two_spin as f64 + 1.0).ln(), r.abs_error.ln()))
        .collect();
    let fitted_error_exponent = if usable.len() >= 2 {
        let xs: Vec<f64> = usable.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = usable.iter().map(|p| p.1).collect();
        Some(-linear_fit(&xs, &ys).0)
    } else {
        None
    };
    LimitCurve {
        rows,
        target,
        fitted_error_exponent,
    }
}
