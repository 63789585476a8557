//! The coherent-operator channel in its bosonic (two-mode) realization.
//!
//! A spin-`J` space is the `2J`-boson sector of two bosonic modes ("up" and
//! "down"), with `|M>` identified with the number state
//! `|n_up = J+M, n_dn = J-M>`; the sector index is `n_up`. Creation chains
//! raise the sector, annihilation chains lower it, and the channel is a sum
//! of such chains with binomial multiplicities.

use crate::error::{Error, Result};
use crate::linalg::{CMat, C64};
use crate::numeric::binomial;
use crate::spin::{DensityMatrix, StateVec, TwiceSpin};

/// `a_up^*` restricted to the `n`-boson sector: maps dimension `n+1` to
/// `n+2`, entry `sqrt(n_up + 1)` at `(n_up + 1, n_up)`.
pub fn create_up(n: u32) -> CMat {
    let d = n as usize + 1;
    let mut m = CMat::zeros(d + 1, d);
    for i in 0..d {
        m[(i + 1, i)] = C64::new(((i + 1) as f64).sqrt(), 0.0);
    }
    m
}

/// `a_dn^*` restricted to the `n`-boson sector: entry `sqrt(n_dn + 1)` at
/// `(n_up, n_up)` (the down count is `n - n_up`).
pub fn create_dn(n: u32) -> CMat {
    let d = n as usize + 1;
    let mut m = CMat::zeros(d + 1, d);
    for i in 0..d {
        m[(i, i)] = C64::new(((n as usize - i + 1) as f64).sqrt(), 0.0);
    }
    m
}

/// `a_up` restricted to the `n`-boson sector (requires `n >= 1`).
pub fn annihilate_up(n: u32) -> CMat {
    create_up(n - 1).transpose()
}

/// `a_dn` restricted to the `n`-boson sector (requires `n >= 1`).
pub fn annihilate_dn(n: u32) -> CMat {
    create_dn(n - 1).transpose()
}

/// The four ladder maps touching the `2J`-boson sector.
#[derive(Clone, Debug)]
pub struct LadderOps {
    /// `a_up`: `2J` sector -> `2J - 1` sector.
    pub a_up: CMat,
    /// `a_dn`: `2J` sector -> `2J - 1` sector.
    pub a_dn: CMat,
    /// `a_up^*`: `2J - 1` sector -> `2J` sector.
    pub a_up_dag: CMat,
    /// `a_dn^*`: `2J - 1` sector -> `2J` sector.
    pub a_dn_dag: CMat,
}

/// Ladder maps for the spin-`J` (i.e. `2J`-boson) sector; needs `2J >= 1`.
pub fn ladder_ops(j: TwiceSpin) -> LadderOps {
    let n = j.two_j();
    assert!(n >= 1, "the 0-boson sector has no lower neighbour");
    LadderOps {
        a_up: annihilate_up(n),
        a_dn: annihilate_dn(n),
        a_up_dag: create_up(n - 1),
        a_dn_dag: create_dn(n - 1),
    }
}

/// The collapsed Kraus operators of the channel from spin `J` to spin
/// `K = J + k/2`.
///
/// For `k >= 0` the `2^k` creation strings regroup (creation operators
/// commute) into `k + 1` operators
/// `B_r = sqrt(prefactor * binom(k, r)) (a_dn^*)^r (a_up^*)^(k-r)` with
/// `prefactor = (2J+1)!/(2K+1)!`; for `k < 0` the mirrored annihilation
/// form with prefactor `(2K)!/(2J)!`.
#[derive(Clone, Debug)]
pub struct KrausSet {
    j_in: TwiceSpin,
    j_out: TwiceSpin,
    k: i32,
    ops: Vec<CMat>,
}

impl KrausSet {
    pub fn j_in(&self) -> TwiceSpin {
        self.j_in
    }

    pub fn j_out(&self) -> TwiceSpin {
        self.j_out
    }

    /// Dimension difference `k = 2(K - J)`.
    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn ops(&self) -> &[CMat] {
        &self.ops
    }

    /// Residual of the completeness relation `sum B^dagger B = I`.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.j_in.dim();
        let mut acc = CMat::zeros(d, d);
        for b in &self.ops {
            acc += b.adjoint() * b;
        }
        crate::linalg::max_abs(&(acc - CMat::identity(d, d)))
    }
}

/// Build the collapsed Kraus set for spin `J` and sector shift `k`.
pub fn kraus_set(j: TwiceSpin, k: i32) -> Result<KrausSet> {
    let two_j = j.two_j();
    let two_k = two_j as i64 + k as i64;
    if two_k < 0 {
        return Err(Error::EmptyTarget { two_j, k });
    }
    let j_out = TwiceSpin(two_k as u32);

    let ops = if k >= 0 {
        let ku = k as u32;
        // prefactor (2J+1)!/(2K+1)! = 1 / prod_{i=2J+2}^{2K+1} i
        let denom = crate::numeric::int_product(two_j as u64 + 2, two_k as u64 + 1);
        (0..=ku)
            .map(|r| {
                let weight = (binomial(ku, r) / denom).sqrt();
                let mut m = CMat::identity(j.dim(), j.dim());
                let mut sector = two_j;
                for _ in 0..ku - r {
                    m = create_up(sector) * m;
                    sector += 1;
                }
                for _ in 0..r {
                    m = create_dn(sector) * m;
                    sector += 1;
                }
                m.scale(weight)
            })
            .collect()
    } else {
        let ku = (-k) as u32;
        // prefactor (2K)!/(2J)! = 1 / prod_{i=2K+1}^{2J} i
        let denom = crate::numeric::int_product(two_k as u64 + 1, two_j as u64);
        (0..=ku)
            .map(|r| {
                let weight = (binomial(ku, r) / denom).sqrt();
                let mut m = CMat::identity(j.dim(), j.dim());
                let mut sector = two_j;
                for _ in 0..ku - r {
                    m = annihilate_up(sector) * m;
                    sector -= 1;
                }
                for _ in 0..r {
                    m = annihilate_dn(sector) * m;
                    sector -= 1;
                }
                m.scale(weight)
            })
            .collect()
    };
    Ok(KrausSet {
        j_in: j,
        j_out,
        k,
        ops,
    })
}

/// Apply the channel: `rho -> sum_r B_r rho B_r^dagger`.
pub fn apply_channel(ks: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ks.j_in.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), ks.j_in.dim()));
    }
    let d_out = ks.j_out.dim();
    let mut acc = CMat::zeros(d_out, d_out);
    for b in &ks.ops {
        acc += b * rho.matrix() * b.adjoint();
    }
    Ok(DensityMatrix::new_unchecked(ks.j_out, acc))
}

/// Closed-form output of the channel on the top coherent state.
///
/// Eigenvalues (descending; zero beyond index `k`):
/// `lambda_r = (2J+1)/(2K+1) * prod_{i<r} (k - i)/(2K - i)`;
/// the matching eigenvectors are the number states
/// `|n_up = 2K - r, n_dn = r>`, i.e. basis vectors of the spin-`K` space.
#[derive(Clone, Debug)]
pub struct CoherentSpectrum {
    j_in: TwiceSpin,
    j_out: TwiceSpin,
    k: u32,
    eigenvalues: Vec<f64>,
}

impl CoherentSpectrum {
    pub fn j_in(&self) -> TwiceSpin {
        self.j_in
    }

    pub fn j_out(&self) -> TwiceSpin {
        self.j_out
    }

    /// All `2K + 1` eigenvalues, descending (zeros beyond index `k`).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// The nonzero head of the spectrum, `k + 1` entries.
    pub fn head(&self) -> &[f64] {
        &self.eigenvalues[..=self.k as usize]
    }

    /// Eigenvector for eigenvalue index `r`: the basis vector at
    /// `m_idx = 2K - r`.
    pub fn eigenvector(&self, r: usize) -> Result<StateVec> {
        if r >= self.j_out.dim() {
            return Err(Error::IndexOutOfRange(r, self.j_out.dim() - 1));
        }
        StateVec::basis(self.j_out, self.j_out.two_j() as usize - r)
    }
}

/// Coherent output spectrum for spin `J` and `k >= 0`.
pub fn coherent_output_spectrum(j: TwiceSpin, k: u32) -> CoherentSpectrum {
    let two_k = j.two_j() + k;
    let j_out = TwiceSpin(two_k);
    let mut eigenvalues = Vec::with_capacity(j_out.dim());
    let mut lam = j.dim() as f64 / j_out.dim() as f64;
    for r in 0..=k {
        eigenvalues.push(lam);
        lam *= (k - r) as f64 / (two_k - r) as f64;
    }
    eigenvalues.resize(j_out.dim(), 0.0);
    CoherentSpectrum {
        j_in: j,
        j_out,
        k,
        eigenvalues,
    }
}

/// The ladder-compressed operator used in the majorization induction:
/// for an orthonormal family `basis` in the `(2J+k+1)`-boson sector,
/// `Gamma_m = sum_{r<=m} a_up |b_r><b_r| a_up^* + a_dn |b_r><b_r| a_dn^*`,
/// an operator on the `(2J+k)`-boson sector.
pub fn gamma_operator(j: TwiceSpin, k: u32, m: u32, basis: &[StateVec]) -> Result<CMat> {
    if m > k {
        return Err(Error::IndexOutOfRange(m as usize, k as usize));
    }
    let upper = j.two_j() + k + 1;
    let lower_dim = upper as usize; // dimension of the (2J+k)-sector
    if basis.len() < m as usize + 1 {
        return Err(Error::IndexOutOfRange(m as usize, basis.len()));
    }
    let a_up = annihilate_up(upper);
    let a_dn = annihilate_dn(upper);
    let mut gamma = CMat::zeros(lower_dim, lower_dim);
    for b in &basis[..=m as usize] {
        if b.dim() != upper as usize + 1 {
            return Err(Error::DimensionMismatch(b.dim(), upper as usize + 1));
        }
        let up = &a_up * b.amplitudes();
        let dn = &a_dn * b.amplitudes();
        for row in 0..lower_dim {
            for col in 0..lower_dim {
                gamma[(row, col)] += up[row] * up[col].conj() + dn[row] * dn[col].conj();
            }
        }
    }
    Ok(gamma)
}

/// Closed form of [`gamma_operator`] when the basis is the coherent output
/// eigenbasis one sector up:
/// `sum_{r<m} (2J+k+2) |phi_r><phi_r| + (2J+k+1-m) |phi_m><phi_m|`
/// over the `(2J+k)`-sector coherent eigenvectors.
pub fn gamma_coherent_closed_form(j: TwiceSpin, k: u32, m: u32) -> Result<CMat> {
    if m > k {
        return Err(Error::IndexOutOfRange(m as usize, k as usize));
    }
    let spec = coherent_output_spectrum(j, k);
    let d = spec.j_out().dim();
    let mut gamma = CMat::zeros(d, d);
    let full = (j.two_j() + k + 2) as f64;
    for r in 0..=m {
        let weight = if r < m {
            full
        } else {
            (j.two_j() + k + 1 - m) as f64
        };
        let phi = spec.eigenvector(r as usize)?;
        gamma += phi.projector().scale(weight);
    }
    Ok(gamma)
}
