//! Exact angular-momentum coupling.
//!
//! Clebsch-Gordan coefficients are computed in exact big-integer rational
//! arithmetic (Racah's closed form) and exported to `f64` at the very end:
//! the factorials involved overflow doubles and cancel catastrophically long
//! before the coefficients themselves leave `[-1, 1]`. On top of the
//! coefficients sit the minimal-total-spin isometry, the partial inner
//! product and the partial-trace definition of the coherent-operator channel,
//! which serves as the reference ("oracle") construction for the Kraus form.

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64};
use crate::spin::{antiunitary_u, DensityMatrix, StateVec, TwiceSpin};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

/// A signed square root of an exact non-negative rational:
/// `value = sign * sqrt(radicand)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCoeff {
    sign: i8,
    radicand: BigRational,
}

impl ExactCoeff {
    pub fn zero() -> Self {
        ExactCoeff {
            sign: 0,
            radicand: BigRational::zero(),
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Export to `f64`, accurate to 1 ulp.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        self.sign as f64 * big_ratio_to_f64(&self.radicand).sqrt()
    }
}

/// Correctly scaled conversion of a non-negative big rational to `f64`.
///
/// `Ratio::to_f64` divides two independently converted big integers, which
/// overflows to `inf/inf = NaN` for the factorial-sized operands here. This
/// routine shifts the quotient into the 54-bit range first, so the result is
/// within 1 ulp.
fn big_ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    debug_assert!(!r.is_negative());
    let n = r.numer();
    let d = r.denom();
    let shift = 55i64 - (n.bits() as i64 - d.bits() as i64);
    let scaled: BigInt = if shift >= 0 {
        n << shift as u64
    } else {
        n >> (-shift) as u64
    };
    let q = scaled / d;
    let qf = q.to_f64().expect("quotient fits in f64 after scaling");
    qf * (2.0f64).powi(-shift as i32)
}

fn big_factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n as u64 {
        acc *= i;
    }
    acc
}

/// `<j1 m1; j2 m2 | j3 m3>` in the Condon-Shortley convention, exact.
///
/// All spins and projections are doubled integers. Parity or range
/// violations on any `(j, m)` pair are errors; a violated triangle rule or
/// projection mismatch gives an exact zero.
pub fn clebsch_gordan(
    j1: TwiceSpin,
    j2: TwiceSpin,
    j3: TwiceSpin,
    tm1: i32,
    tm2: i32,
    tm3: i32,
) -> Result<ExactCoeff> {
    for (tj, tm) in [(j1.two_j(), tm1), (j2.two_j(), tm2), (j3.two_j(), tm3)] {
        if tm.unsigned_abs() > tj || (tj as i32 + tm) % 2 != 0 {
            return Err(Error::InvalidProjection { tj, tm });
        }
    }
    if tm1 + tm2 != tm3 {
        return Ok(ExactCoeff::zero());
    }
    let (tj1, tj2, tj3) = (j1.two_j() as i64, j2.two_j() as i64, j3.two_j() as i64);
    if tj3 < (tj1 - tj2).abs() || tj3 > tj1 + tj2 || (tj1 + tj2 + tj3) % 2 != 0 {
        return Ok(ExactCoeff::zero());
    }
    let (tm1, tm2, tm3) = (tm1 as i64, tm2 as i64, tm3 as i64);

    // Integer combinations entering Racah's single-sum form. Parity and the
    // triangle rule make all of them non-negative.
    let a = ((tj1 + tj2 - tj3) / 2) as u32; // j1 + j2 - j3
    let b = ((tj1 - tj2 + tj3) / 2) as u32;
    let c = ((-tj1 + tj2 + tj3) / 2) as u32;
    let total_plus_one = ((tj1 + tj2 + tj3) / 2 + 1) as u32;

    let j1_plus_m1 = ((tj1 + tm1) / 2) as u32;
    let j1_minus_m1 = ((tj1 - tm1) / 2) as u32;
    let j2_plus_m2 = ((tj2 + tm2) / 2) as u32;
    let j2_minus_m2 = ((tj2 - tm2) / 2) as u32;
    let j3_plus_m3 = ((tj3 + tm3) / 2) as u32;
    let j3_minus_m3 = ((tj3 - tm3) / 2) as u32;

    let k_min = 0i64.max((tj2 - tj3 - tm1) / 2).max((tj1 - tj3 + tm2) / 2);
    let k_max = (a as i64).min(j1_minus_m1 as i64).min(j2_plus_m2 as i64);

    let mut series = BigRational::zero();
    let mut k = k_min;
    while k <= k_max {
        let ku = k as u32;
        let denom = big_factorial(ku)
            * big_factorial(a - ku)
            * big_factorial(j1_minus_m1 - ku)
            * big_factorial(j2_plus_m2 - ku)
            * big_factorial(((tj3 - tj2 + tm1) / 2 + k) as u32)
            * big_factorial(((tj3 - tj1 - tm2) / 2 + k) as u32);
        let term = BigRational::new(BigInt::one(), denom);
        if k % 2 == 0 {
            series += term;
        } else {
            series -= term;
        }
        k += 1;
    }
    if series.is_zero() {
        return Ok(ExactCoeff::zero());
    }

    let triangle = BigRational::new(
        big_factorial(a) * big_factorial(b) * big_factorial(c),
        big_factorial(total_plus_one),
    );
    let projections: BigInt = big_factorial(j1_plus_m1)
        * big_factorial(j1_minus_m1)
        * big_factorial(j2_plus_m2)
        * big_factorial(j2_minus_m2)
        * big_factorial(j3_plus_m3)
        * big_factorial(j3_minus_m3);

    let radicand = BigRational::from_integer(BigInt::from(tj3 + 1))
        * triangle
        * BigRational::from_integer(projections)
        * (&series * &series);
    let sign = if series.is_negative() { -1 } else { 1 };
    Ok(ExactCoeff { sign, radicand })
}

type CgKey = (u32, u32, u32, i32, i32);

/// `f64` export of [`clebsch_gordan`], memoized process-wide.
///
/// Entries are write-once (the value is deterministic), so concurrent
/// readers are safe.
pub fn clebsch_gordan_f64(
    j1: TwiceSpin,
    j2: TwiceSpin,
    j3: TwiceSpin,
    tm1: i32,
    tm2: i32,
) -> Result<f64> {
    static CACHE: OnceLock<RwLock<HashMap<CgKey, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    let key = (j1.two_j(), j2.two_j(), j3.two_j(), tm1, tm2);
    if let Some(&v) = cache.read().unwrap().get(&key) {
        return Ok(v);
    }
    let v = clebsch_gordan(j1, j2, j3, tm1, tm2, tm1 + tm2)?.to_f64();
    cache.write().unwrap().insert(key, v);
    Ok(v)
}

/// The isometry embedding the minimal-total-spin multiplet `H_(|K-J|)` into
/// `H_J (x) H_K` (Kronecker ordering: `J` index slow, `K` index fast).
#[derive(Clone, Debug)]
pub struct CouplingIsometry {
    j_left: TwiceSpin,
    j_right: TwiceSpin,
    min_spin: TwiceSpin,
    matrix: CMat,
}

impl CouplingIsometry {
    pub fn j_left(&self) -> TwiceSpin {
        self.j_left
    }

    pub fn j_right(&self) -> TwiceSpin {
        self.j_right
    }

    pub fn min_spin(&self) -> TwiceSpin {
        self.min_spin
    }

    /// Columns are the `2|K-J|+1` multiplet states, orthonormal.
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// The projector onto the minimal-total-spin subspace, `V V^dagger`.
    pub fn projector(&self) -> CMat {
        &self.matrix * self.matrix.adjoint()
    }

    /// Coordinates of a product-space vector in the multiplet basis,
    /// `V^dagger x`.
    pub fn coordinates(&self, x: &CVec) -> CVec {
        self.matrix.adjoint() * x
    }
}

/// Build the minimal-spin isometry for `H_J (x) H_K` from exact coupling
/// coefficients.
pub fn min_spin_isometry(j: TwiceSpin, k: TwiceSpin) -> CouplingIsometry {
    let t_min = j.two_j().abs_diff(k.two_j());
    let min_spin = TwiceSpin(t_min);
    let (dj, dk, dmin) = (j.dim(), k.dim(), min_spin.dim());
    let mut v = CMat::zeros(dj * dk, dmin);
    for col in 0..dmin {
        let tm3 = 2 * col as i32 - t_min as i32;
        for m1_idx in 0..dj {
            let tm1 = 2 * m1_idx as i32 - j.two_j() as i32;
            let tm2 = tm3 - tm1;
            if tm2.unsigned_abs() > k.two_j() {
                continue;
            }
            let m2_idx = ((tm2 + k.two_j() as i32) / 2) as usize;
            let cg = clebsch_gordan_f64(j, k, min_spin, tm1, tm2)
                .expect("projections validated by construction");
            v[(m1_idx * dk + m2_idx, col)] = C64::new(cg, 0.0);
        }
    }
    CouplingIsometry {
        j_left: j,
        j_right: k,
        min_spin,
        matrix: v,
    }
}

/// The partial inner product `<psi || phi>`: pairs `psi` in `H_J` against
/// `phi` in `H_K` (with `K >= J`) through the embedding of `H_K` into
/// `H_(K-J) (x) H_J`, leaving a vector in `H_(K-J)`.
///
/// Conjugate-linear in `psi`, linear in `phi`.
pub fn partial_inner(
    j: TwiceSpin,
    k: TwiceSpin,
    psi: &StateVec,
    phi: &StateVec,
) -> Result<StateVec> {
    if k.two_j() < j.two_j() {
        return Err(Error::SpinOrder(j.two_j(), k.two_j()));
    }
    if psi.dim() != j.dim() {
        return Err(Error::DimensionMismatch(psi.dim(), j.dim()));
    }
    if phi.dim() != k.dim() {
        return Err(Error::DimensionMismatch(phi.dim(), k.dim()));
    }
    let rest = TwiceSpin(k.two_j() - j.two_j());
    let mut amps = CVec::zeros(rest.dim());
    for a_idx in 0..rest.dim() {
        let tma = 2 * a_idx as i32 - rest.two_j() as i32;
        let mut acc = C64::new(0.0, 0.0);
        for b_idx in 0..j.dim() {
            let tmb = 2 * b_idx as i32 - j.two_j() as i32;
            let tm = tma + tmb;
            if tm.unsigned_abs() > k.two_j() {
                continue;
            }
            let m_idx = ((tm + k.two_j() as i32) / 2) as usize;
            let cg = clebsch_gordan_f64(rest, j, k, tma, tmb)?;
            acc += psi.amplitudes()[b_idx].conj() * phi.amplitudes()[m_idx] * C64::new(cg, 0.0);
        }
        amps[a_idx] = acc;
    }
    StateVec::new(rest, amps)
}

/// Residuals of the minimal-spin projector formula on one `(psi, phi)` pair.
#[derive(Clone, Copy, Debug)]
pub struct PminusReport {
    /// `|| V^dagger (psi (x) phi) - mu_hat * <U psi || phi> ||` with the
    /// best-fitting scalar `mu_hat` (one global phase absorbed).
    pub vector_residual: f64,
    /// `|mu_hat|^2`.
    pub mu_modulus_sq: f64,
    /// The predicted modulus `(2|K-J|+1)/(2 max(J,K) + 1)`.
    pub mu_modulus_sq_expected: f64,
    /// Norm of the projected vector, for context.
    pub projected_norm: f64,
}

impl PminusReport {
    pub fn mu_modulus_error(&self) -> f64 {
        (self.mu_modulus_sq - self.mu_modulus_sq_expected).abs()
    }
}

/// Precomputed checker for the closed form of the minimal-spin projection of
/// product vectors.
pub struct PminusChecker {
    j: TwiceSpin,
    k: TwiceSpin,
    iso: CouplingIsometry,
}

impl PminusChecker {
    pub fn new(j: TwiceSpin, k: TwiceSpin) -> Self {
        PminusChecker {
            j,
            k,
            iso: min_spin_isometry(j, k),
        }
    }

    /// Verify `P_-(psi (x) phi) = mu <U psi || phi>` (or its mirror when
    /// `K <= J`) on one pair, comparing up to one global scalar.
    pub fn check(&self, psi: &StateVec, phi: &StateVec) -> Result<PminusReport> {
        let (j, k) = (self.j, self.k);
        let product = kron_vec(psi.amplitudes(), phi.amplitudes());
        let projected = self.iso.coordinates(&product);

        let reference = if k.two_j() >= j.two_j() {
            partial_inner(j, k, &antiunitary_u(j, psi), phi)?
        } else {
            partial_inner(k, j, &antiunitary_u(k, phi), psi)?
        };
        let big = j.two_j().max(k.two_j());
        let expected = (j.two_j().abs_diff(k.two_j()) as f64 + 1.0) / (big as f64 + 1.0);

        let ref_norm_sq = reference.amplitudes().norm_squared();
        let (mu_sq, residual) = if ref_norm_sq > 1e-18 {
            let mu = reference.amplitudes().dotc(&projected) / C64::new(ref_norm_sq, 0.0);
            let resid = (&projected - reference.amplitudes().clone() * mu).norm();
            (mu.norm_sqr(), resid)
        } else {
            // Reference vanished; the projection must vanish too.
            (expected, projected.norm())
        };
        Ok(PminusReport {
            vector_residual: residual,
            mu_modulus_sq: mu_sq,
            mu_modulus_sq_expected: expected,
            projected_norm: projected.norm(),
        })
    }
}

fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for l in 0..b.len() {
            out[i * b.len() + l] = a[i] * b[l];
        }
    }
    out
}

/// The coherent-operator channel by its defining partial trace:
/// `Phi(rho) = (2J+1)/(2|K-J|+1) Tr_J [ P_- (rho (x) I_K) ]`.
///
/// This is the reference construction; the Kraus form in [`crate::channel`]
/// must match it after conjugating the input by the anti-unitary map.
pub fn channel_via_partial_trace(
    j: TwiceSpin,
    k: TwiceSpin,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    if rho.dim() != j.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), j.dim()));
    }
    let iso = min_spin_isometry(j, k);
    let p_minus = iso.projector();
    let (dj, dk) = (j.dim(), k.dim());
    let rho_ext = rho.matrix().kronecker(&CMat::identity(dk, dk));
    let m = p_minus * rho_ext;
    let mut out = CMat::zeros(dk, dk);
    for row in 0..dk {
        for col in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..dj {
                acc += m[(a * dk + row, a * dk + col)];
            }
            out[(row, col)] = acc;
        }
    }
    let prefactor = dj as f64 / (j.two_j().abs_diff(k.two_j()) as f64 + 1.0);
    Ok(DensityMatrix::new_unchecked(k, out.scale(prefactor)))
}
