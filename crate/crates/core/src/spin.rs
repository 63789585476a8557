//! Spin representation spaces and Bloch coherent states.
//!
//! Spins are stored as the integer `2J`, so half-integer bookkeeping is
//! exact. The preferred basis of a spin-`J` space is the `S_z` eigenbasis
//! `|M>`, `M = -J..J`, stored at index `M + J`; `S_x` is real in this basis.

use crate::error::{Error, Result};
use crate::linalg::{hermiticity_residual, hermitize, CMat, CVec, C64};
use crate::numeric::{binomial_row_sqrt, gauss_legendre};
use crate::tol;
use std::f64::consts::PI;

/// A spin stored as the non-negative integer `2J`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwiceSpin(pub u32);

impl TwiceSpin {
    pub fn new(two_j: u32) -> Self {
        TwiceSpin(two_j)
    }

    pub fn two_j(self) -> u32 {
        self.0
    }

    /// Dimension of the representation space, `2J + 1`.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// The spin as a float, `J = two_j / 2`.
    pub fn j(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl std::fmt::Display for TwiceSpin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "J={}", self.0 / 2)
        } else {
            write!(f, "J={}/2", self.0)
        }
    }
}

/// A point on the unit sphere; `theta = 0` is the north pole.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SphPoint {
    theta: f64,
    phi: f64,
}

impl SphPoint {
    /// `theta` must lie in `[0, pi]`; `phi` is wrapped into `[0, 2*pi)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::ThetaOutOfRange(theta));
        }
        let mut phi = phi.rem_euclid(2.0 * PI);
        if phi >= 2.0 * PI {
            phi = 0.0;
        }
        Ok(SphPoint { theta, phi })
    }

    pub fn north() -> Self {
        SphPoint {
            theta: 0.0,
            phi: 0.0,
        }
    }

    pub fn south() -> Self {
        SphPoint {
            theta: PI,
            phi: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Cartesian unit vector `(x, y, z)`.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        let (sp, cp) = (self.phi.sin(), self.phi.cos());
        [st * cp, st * sp, ct]
    }

    /// Angle between two directions.
    pub fn angle_to(&self, other: &SphPoint) -> f64 {
        let a = self.unit_vector();
        let b = other.unit_vector();
        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        dot.clamp(-1.0, 1.0).acos()
    }
}

/// A vector in a spin-`J` space, amplitudes indexed by `M + J`.
#[derive(Clone, Debug)]
pub struct StateVec {
    spin: TwiceSpin,
    amps: CVec,
}

impl StateVec {
    pub fn new(spin: TwiceSpin, amps: CVec) -> Result<Self> {
        if amps.len() != spin.dim() {
            return Err(Error::DimensionMismatch(amps.len(), spin.dim()));
        }
        Ok(StateVec { spin, amps })
    }

    /// The basis vector `|M>` with `M + J = m_idx`.
    pub fn basis(spin: TwiceSpin, m_idx: usize) -> Result<Self> {
        if m_idx >= spin.dim() {
            return Err(Error::IndexOutOfRange(m_idx, spin.dim() - 1));
        }
        let mut amps = CVec::zeros(spin.dim());
        amps[m_idx] = C64::new(1.0, 0.0);
        Ok(StateVec { spin, amps })
    }

    pub fn spin(&self) -> TwiceSpin {
        self.spin
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= tol::STATE_NORM
    }

    /// Rescale to unit norm.
    pub fn normalized(&self) -> StateVec {
        let n = self.norm();
        StateVec {
            spin: self.spin,
            amps: self.amps.clone() / C64::new(n, 0.0),
        }
    }

    /// Inner product `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVec) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Rank-one projector `|self><self|`.
    pub fn projector(&self) -> CMat {
        let n = self.dim();
        CMat::from_fn(n, n, |i, j| self.amps[i] * self.amps[j].conj())
    }
}

/// Phase-insensitive distance between two unit vectors: the largest entry of
/// `|a><a| - |b><b|`.
pub fn projector_distance(a: &StateVec, b: &StateVec) -> f64 {
    crate::linalg::max_abs(&(a.projector() - b.projector()))
}

/// A density matrix on a spin-`J` space.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    spin: TwiceSpin,
    mat: CMat,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positive semi-definiteness.
    pub fn new(spin: TwiceSpin, mat: CMat) -> Result<Self> {
        if mat.nrows() != spin.dim() || mat.ncols() != spin.dim() {
            return Err(Error::DimensionMismatch(mat.nrows(), spin.dim()));
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
        Ok(DensityMatrix { spin, mat })
    }

    /// For outputs that are PSD/unit-trace by construction (channel outputs,
    /// Ginibre samples); skips the eigenvalue check.
    pub(crate) fn new_unchecked(spin: TwiceSpin, mat: CMat) -> Self {
        debug_assert_eq!(mat.nrows(), spin.dim());
        DensityMatrix {
            spin,
            mat: hermitize(&mat),
        }
    }

    pub fn from_pure(psi: &StateVec) -> Self {
        let psi = psi.normalized();
        DensityMatrix {
            spin: psi.spin,
            mat: psi.projector(),
        }
    }

    pub fn maximally_mixed(spin: TwiceSpin) -> Self {
        let d = spin.dim();
        let mat = CMat::identity(d, d).scale(1.0 / d as f64);
        DensityMatrix { spin, mat }
    }

    pub fn spin(&self) -> TwiceSpin {
        self.spin
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Raw eigenvalues, descending.
    pub fn spectrum(&self) -> Vec<f64> {
        crate::linalg::eigvalsh(&self.mat)
    }

    /// Eigenvalues clamped to `[0, 1]` (descending). Anything below 1e-14
    /// is solver dirt on a true zero and is zeroed outright, so functions
    /// with infinite slope at 0 (square roots, logarithms) never amplify
    /// it; nothing is renormalized here.
    pub fn clamped_spectrum(&self) -> Vec<f64> {
        self.spectrum()
            .iter()
            .map(|&v| if v < 1e-14 { 0.0 } else { v.min(1.0) })
            .collect()
    }

    /// `<psi| rho |psi>` for a unit vector, clamped to `[0, 1]`.
    pub fn expectation(&self, psi: &StateVec) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch(psi.dim(), self.dim()));
        }
        let v = psi.amplitudes().dotc(&(&self.mat * psi.amplitudes()));
        Ok(v.re.clamp(0.0, 1.0))
    }
}

/// The spin operators `(S_x, S_y, S_z)` on a spin-`J` space.
#[derive(Clone, Debug)]
pub struct SpinOps {
    pub sx: CMat,
    pub sy: CMat,
    pub sz: CMat,
}

impl SpinOps {
    /// `omega . S`.
    pub fn along(&self, omega: &SphPoint) -> CMat {
        let [x, y, z] = omega.unit_vector();
        self.sx.clone().scale(x) + self.sy.clone().scale(y) + self.sz.clone().scale(z)
    }
}

/// Standard spin matrices in the `S_z` eigenbasis with `S_x` real.
pub fn spin_operators(j: TwiceSpin) -> SpinOps {
    let d = j.dim();
    let jj = j.j();
    let mut sp = CMat::zeros(d, d); // raising operator
    for m_idx in 0..d - 1 {
        let m = m_idx as f64 - jj;
        sp[(m_idx + 1, m_idx)] = C64::new((jj * (jj + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let sm = sp.adjoint();
    let sx = (&sp + &sm).scale(0.5);
    let sy = (&sp - &sm) * C64::new(0.0, -0.5);
    let sz = CMat::from_fn(d, d, |i, k| {
        if i == k {
            C64::new(i as f64 - jj, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    SpinOps { sx, sy, sz }
}

/// The Bloch coherent state `|omega>`: the unit eigenvector of `omega . S`
/// with eigenvalue `J`.
///
/// Phase convention: amplitude at `M` is
/// `binom(2J, J+M)^(1/2) cos^(J+M)(theta/2) sin^(J-M)(theta/2) e^(-i M phi)`,
/// the result of rotating `|M=J>` by `e^(-i phi S_z) e^(-i theta S_y)`.
pub fn coherent_ket(j: TwiceSpin, omega: &SphPoint) -> StateVec {
    let two_j = j.two_j();
    let d = j.dim();
    let jj = j.j();
    let half = 0.5 * omega.theta();
    let (s, c) = (half.sin(), half.cos());

    // Poles: a single basis amplitude survives; return it in closed form so
    // no 0^0 is ever evaluated.
    if s == 0.0 {
        let mut amps = CVec::zeros(d);
        amps[d - 1] = C64::from_polar(1.0, -jj * omega.phi());
        return StateVec { spin: j, amps };
    }
    if c == 0.0 {
        let mut amps = CVec::zeros(d);
        amps[0] = C64::from_polar(1.0, jj * omega.phi());
        return StateVec { spin: j, amps };
    }

    let root_binom = binomial_row_sqrt(two_j);
    let mut amps = CVec::zeros(d);
    for m_idx in 0..d {
        let m = m_idx as f64 - jj;
        let mag =
            root_binom[m_idx] * c.powi(m_idx as i32) * s.powi((two_j as usize - m_idx) as i32);
        amps[m_idx] = C64::from_polar(mag, -m * omega.phi());
    }
    StateVec { spin: j, amps }
}

/// The anti-unitary time-reversal-like map: sends `sum a_M |M>` to
/// `sum (-1)^(L-M) conj(a_M) |-M>`. Conjugating any spin component by it
/// flips the sign of the component.
pub fn antiunitary_u(j: TwiceSpin, psi: &StateVec) -> StateVec {
    let d = j.dim();
    assert_eq!(psi.dim(), d, "state lives on a different spin space");
    let two_j = j.two_j() as usize;
    let mut amps = CVec::zeros(d);
    for m_idx in 0..d {
        // L - M = two_j - m_idx, always an integer.
        let sign = if (two_j - m_idx).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        amps[two_j - m_idx] = psi.amplitudes()[m_idx].conj() * C64::new(sign, 0.0);
    }
    StateVec { spin: j, amps }
}

/// The real unitary matrix `V` such that the anti-unitary above acts as
/// `psi -> V conj(psi)`. Satisfies `V^2 = (-1)^(2J) I`.
pub fn antiunitary_matrix(j: TwiceSpin) -> CMat {
    let d = j.dim();
    let two_j = j.two_j() as usize;
    let mut v = CMat::zeros(d, d);
    for m_idx in 0..d {
        let sign = if (two_j - m_idx).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        v[(two_j - m_idx, m_idx)] = C64::new(sign, 0.0);
    }
    v
}

/// Conjugation `A -> U A U^(-1)` by the anti-unitary map.
///
/// With `U = V conj(.)` and `V` real, this is `V conj(A) V^(-1)`, and
/// `V^(-1) = (-1)^(2J) V`.
pub fn antiunitary_conjugate(j: TwiceSpin, a: &CMat) -> CMat {
    let v = antiunitary_matrix(j);
    let sign = if j.two_j().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    let conj_a = a.map(|c| c.conj());
    (&v * conj_a * &v).scale(sign)
}

/// The lower symbol `<omega| rho |omega>`, clamped to `[0, 1]`.
pub fn lower_symbol(rho: &DensityMatrix, omega: &SphPoint) -> Result<f64> {
    let ket = coherent_ket(rho.spin(), omega);
    rho.expectation(&ket)
}

/// Quadrature nodes and weights on the 2-sphere.
///
/// Product rule: Gauss-Legendre in `cos(theta)` times a uniform grid in
/// `phi`. Weights sum to `4*pi`; `degree` is the largest spherical-harmonic
/// degree integrated exactly.
#[derive(Clone, Debug)]
pub struct SphereQuadrature {
    nodes: Vec<SphPoint>,
    weights: Vec<f64>,
    degree: usize,
}

impl SphereQuadrature {
    /// Smallest product rule exact through spherical-harmonic degree `d`.
    pub fn with_degree(d: usize) -> Self {
        let n_polar = (d + 2) / 2;
        let n_phi = d + 1;
        Self::product_rule(n_polar.max(1), n_phi.max(1))
    }

    fn product_rule(n_polar: usize, n_phi: usize) -> Self {
        let (xs, ws) = gauss_legendre(n_polar);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_polar * n_phi);
        let mut weights = Vec::with_capacity(n_polar * n_phi);
        for (x, w) in xs.iter().zip(&ws) {
            let theta = x.clamp(-1.0, 1.0).acos();
            for ip in 0..n_phi {
                let phi = ip as f64 * dphi;
                nodes.push(SphPoint { theta, phi });
                weights.push(w * dphi);
            }
        }
        let degree = (2 * n_polar - 1).min(n_phi - 1);
        SphereQuadrature {
            nodes,
            weights,
            degree,
        }
    }

    pub fn nodes(&self) -> &[SphPoint] {
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

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Integral of `f` over the sphere (measure `d omega`, total `4*pi`).
    pub fn integrate<F: Fn(&SphPoint) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p))
            .collect();
        crate::numeric::pairwise_sum(&terms)
    }
}

/// Product quadrature sized by a level: `8 * level` polar nodes and
/// `16 * level` azimuthal nodes, exact through degree `16 * level - 1`.
pub fn sphere_quadrature(level: u32) -> SphereQuadrature {
    assert!(level >= 1, "quadrature level must be at least 1");
    SphereQuadrature::product_rule(8 * level as usize, 16 * level as usize)
}

/// Residual of the resolution of identity
/// `(2J+1)/(4*pi) * integral |omega><omega| d omega = I` under `quad`.
pub fn identity_resolution_residual(j: TwiceSpin, quad: &SphereQuadrature) -> f64 {
    let d = j.dim();
    let mut acc = CMat::zeros(d, d);
    for (p, w) in quad.nodes().iter().zip(quad.weights()) {
        let ket = coherent_ket(j, p);
        acc += ket.projector().scale(*w);
    }
    acc *= C64::new(d as f64 / (4.0 * PI), 0.0);
    crate::linalg::max_abs(&(acc - CMat::identity(d, d)))
}
