//! Cross-module invariants and property-based checks.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wehrl_core::channel::{apply_channel, kraus_set};
use wehrl_core::coupling::clebsch_gordan;
use wehrl_core::linalg::{max_abs, CVec, C64};
use wehrl_core::majorization::{karamata_equivalent, majorizes, ConcaveSpec, SpectrumSeq};
use wehrl_core::optimizer::sample_density;
use wehrl_core::spin::{
    antiunitary_u, coherent_ket, lower_symbol, DensityMatrix, SphPoint, StateVec, TwiceSpin,
};

fn random_state(j: TwiceSpin, rng: &mut ChaCha8Rng) -> StateVec {
    let amps = CVec::from_fn(j.dim(), |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    StateVec::new(j, amps).unwrap().normalized()
}

#[test]
fn lower_symbol_intertwines_with_the_channel() {
    // <omega| Phi~(rho) |omega>_K = (2J+1)/(2K+1) <omega| rho |omega>_J.
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (two_j, k) in [(1u32, 1u32), (2, 3), (4, 2), (6, 4)] {
        let j = TwiceSpin(two_j);
        let ks = kraus_set(j, k as i32).unwrap();
        let rho = sample_density(j, j.dim(), 31 + two_j as u64).unwrap();
        let out = apply_channel(&ks, &rho).unwrap();
        let ratio = j.dim() as f64 / ks.j_out().dim() as f64;
        for _ in 0..10 {
            let z: f64 = rng.random_range(-1.0..1.0);
            let omega = SphPoint::new(z.acos(), rng.random_range(0.0..6.2)).unwrap();
            let lhs = lower_symbol(&out, &omega).unwrap();
            let rhs = ratio * lower_symbol(&rho, &omega).unwrap();
            assert!((lhs - rhs).abs() < 1e-12, "2J={two_j} k={k}");
        }
    }
}

#[test]
fn output_spectrum_is_direction_independent() {
    // The channel output of a coherent state has the same spectrum for
    // every input direction.
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (two_j, k) in [(1u32, 2u32), (3, 1), (5, 4)] {
        let j = TwiceSpin(two_j);
        let ks = kraus_set(j, k as i32).unwrap();
        let mut reference: Option<Vec<f64>> = None;
        for _ in 0..20 {
            let z: f64 = rng.random_range(-1.0..1.0);
            let omega = SphPoint::new(z.acos(), rng.random_range(0.0..6.2)).unwrap();
            let rho = DensityMatrix::from_pure(&coherent_ket(j, &omega));
            let spectrum = apply_channel(&ks, &rho).unwrap().spectrum();
            match &reference {
                None => reference = Some(spectrum),
                Some(base) => {
                    let spread = base
                        .iter()
                        .zip(&spectrum)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    assert!(spread < 1e-12, "2J={two_j} k={k}: spread {spread:e}");
                }
            }
        }
    }
}

#[test]
fn coherent_outputs_minimize_trace_functionals() {
    // Direct corollary scan: for every concave f in the standard family the
    // coherent output minimizes the trace functional among channel outputs.
    let fs = ConcaveSpec::standard_family();
    for (two_j, k) in [(2u32, 2u32), (4, 3)] {
        let j = TwiceSpin(two_j);
        let ks = kraus_set(j, k as i32).unwrap();
        let coherent_out = {
            let up = StateVec::basis(j, two_j as usize).unwrap();
            apply_channel(&ks, &DensityMatrix::from_pure(&up)).unwrap()
        };
        for seed in 0..200u64 {
            let rank = if seed % 2 == 0 { j.dim() } else { 1 };
            let rho = sample_density(j, rank, seed).unwrap();
            let out = apply_channel(&ks, &rho).unwrap();
            for f in &fs {
                let slack = wehrl_core::majorization::trace_concave(&out, f)
                    - wehrl_core::majorization::trace_concave(&coherent_out, f);
                assert!(
                    slack >= -1e-9,
                    "2J={two_j} k={k} f={} seed={seed}: {slack:e}",
                    f.tag()
                );
            }
        }
    }
}

#[test]
fn upward_channels_compose_exactly() {
    // Two raising steps collapse into one: the index strings concatenate
    // and the prefactors multiply. (An algebraic identity for k1, k2 >= 0.)
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for (two_j, k1, k2) in [(1u32, 1i32, 2i32), (2, 2, 2), (3, 1, 3)] {
        let j = TwiceSpin(two_j);
        let rho = DensityMatrix::from_pure(&random_state(j, &mut rng));
        let first = kraus_set(j, k2).unwrap();
        let second = kraus_set(first.j_out(), k1).unwrap();
        let fused = kraus_set(j, k1 + k2).unwrap();
        let two_step = apply_channel(&second, &apply_channel(&first, &rho).unwrap()).unwrap();
        let one_step = apply_channel(&fused, &rho).unwrap();
        let dev = max_abs(&(two_step.matrix() - one_step.matrix()));
        assert!(dev < 1e-10, "2J={two_j} {k1}+{k2}: {dev:e}");
    }
}

#[test]
fn mixed_sign_composition_is_not_a_semigroup() {
    // Exploratory: raising then lowering does not reduce to a single step.
    // No assertion either way; the deviation is reported for the record.
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    let j = TwiceSpin(2);
    let rho = DensityMatrix::from_pure(&random_state(j, &mut rng));
    let up = kraus_set(j, 2).unwrap();
    let down = kraus_set(up.j_out(), -2).unwrap();
    let round_trip = apply_channel(&down, &apply_channel(&up, &rho).unwrap()).unwrap();
    let identity_dev = max_abs(&(round_trip.matrix() - rho.matrix()));
    println!(
        "exploratory: raise-then-lower round trip deviates from the identity by {identity_dev:.3e}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coherent_overlap_law(
        two_j in 1u32..20,
        za in -1.0f64..1.0,
        pa in 0.0f64..6.2,
        zb in -1.0f64..1.0,
        pb in 0.0f64..6.2,
    ) {
        let j = TwiceSpin(two_j);
        let a = SphPoint::new(za.acos(), pa).unwrap();
        let b = SphPoint::new(zb.acos(), pb).unwrap();
        let overlap = coherent_ket(j, &a).inner(&coherent_ket(j, &b)).unwrap().norm_sqr();
        let law = ((1.0 + a.angle_to(&b).cos()) / 2.0).powi(two_j as i32);
        prop_assert!((overlap - law).abs() < 1e-12);
    }

    #[test]
    fn antiunitarity_holds(two_j in 1u32..10, seed in 0u64..1000) {
        let j = TwiceSpin(two_j);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_state(j, &mut rng);
        let b = random_state(j, &mut rng);
        let lhs = antiunitary_u(j, &a).inner(&antiunitary_u(j, &b)).unwrap();
        let rhs = a.inner(&b).unwrap().conj();
        prop_assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn coupling_columns_stay_normalized(
        t1 in 1u32..6,
        t2 in 1u32..6,
        pick in 0u32..100,
    ) {
        // Random admissible (j3, m3) for the chosen pair.
        let lo = t1.abs_diff(t2);
        let hi = t1 + t2;
        let t3 = lo + 2 * (pick % ((hi - lo) / 2 + 1));
        let m_count = t3 + 1;
        let tm3 = 2 * ((pick / 7) % m_count) as i32 - t3 as i32;
        let mut total = 0.0;
        for a in 0..=t1 {
            let tm1 = 2 * a as i32 - t1 as i32;
            let tm2 = tm3 - tm1;
            if tm2.unsigned_abs() > t2 { continue; }
            let c = clebsch_gordan(
                TwiceSpin(t1), TwiceSpin(t2), TwiceSpin(t3), tm1, tm2, tm3,
            ).unwrap();
            total += c.to_f64().powi(2);
        }
        prop_assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn majorization_implies_concave_sums(seed in 0u64..2000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..7);
        let draw = |rng: &mut ChaCha8Rng| {
            let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0f64)).collect();
            let total: f64 = v.iter().sum();
            v.iter_mut().for_each(|x| *x /= total);
            SpectrumSeq::new(v).unwrap()
        };
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        if majorizes(&a, &b).unwrap() {
            prop_assert!(karamata_equivalent(&a, &b, &ConcaveSpec::standard_family()).unwrap());
        }
    }

    #[test]
    fn channel_outputs_are_majorized_by_the_coherent_spectrum(
        two_j in 1u32..6,
        k in 1u32..5,
        seed in 0u64..500,
    ) {
        let j = TwiceSpin(two_j);
        let ks = kraus_set(j, k as i32).unwrap();
        let rho = sample_density(j, j.dim(), seed).unwrap();
        let out = apply_channel(&ks, &rho).unwrap();
        let coherent = SpectrumSeq::new(
            wehrl_core::channel::coherent_output_spectrum(j, k).eigenvalues().to_vec(),
        ).unwrap();
        prop_assert!(majorizes(&coherent, &SpectrumSeq::from_density(&out)).unwrap());
    }
}
