//! Random-state sampling, minimal-output-entropy search and randomized
//! verification scans.
//!
//! Every randomized routine takes a master seed and derives one stream per
//! trial (or per restart) through a fixed splitting function, so results are
//! bit-identical across thread counts and schedules.

use crate::channel::{apply_channel, coherent_output_spectrum, kraus_set, KrausSet};
use crate::entropy::{coherent_classical_average, CoherentSymbolTable};
use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64};
use crate::majorization::{majorization_slack, ConcaveSpec, SpectrumSeq};
use crate::numeric::{derive_seed, golden_max};
use crate::spin::{coherent_ket, DensityMatrix, SphPoint, SphereQuadrature, StateVec, TwiceSpin};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Settings for the multistart output-functional minimizer.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub step_init: f64,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 8,
            max_iters: 400,
            step_init: 0.1,
            tol: 1e-10,
            seed: 0,
        }
    }
}

/// Outcome of a minimization run.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best_state: StateVec,
    pub best_value: f64,
    pub coherent_fidelity: f64,
    pub iterations_used: usize,
    pub converged: bool,
}

/// Complex Gaussian matrix sampled entrywise from the given stream.
fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Sample a density matrix from the rank-constrained Hilbert-Schmidt-induced
/// ensemble: `G G^dagger / Tr(G G^dagger)` with `G` a `(2J+1) x rank`
/// complex Gaussian matrix. `rank = 1` gives Haar-random pure states.
pub fn sample_density(j: TwiceSpin, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_density_with(j, rank, &mut rng)
}

/// Same ensemble, drawing from a caller-owned stream.
pub fn sample_density_with(
    j: TwiceSpin,
    rank: usize,
    rng: &mut ChaCha8Rng,
) -> Result<DensityMatrix> {
    let d = j.dim();
    if rank == 0 || rank > d {
        return Err(Error::InvalidParameter(format!(
            "rank must lie in 1..={d}, got {rank}"
        )));
    }
    let g = ginibre(d, rank, rng);
    let mut m = &g * g.adjoint();
    let tr = m.trace().re;
    m /= C64::new(tr, 0.0);
    Ok(DensityMatrix::new_unchecked(j, m))
}

/// Haar-random unit vector.
pub fn sample_pure(j: TwiceSpin, rng: &mut ChaCha8Rng) -> StateVec {
    let v = CVec::from_fn(j.dim(), |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    StateVec::new(j, v).unwrap().normalized()
}

/// Largest coherent-state overlap `max_omega |<omega|psi>|^2`.
///
/// Coarse grid scan followed by alternating golden-section refinement in the
/// polar and azimuthal angles; the value is resolved to about `1e-10`.
pub fn coherent_fidelity(psi: &StateVec) -> f64 {
    coherent_fidelity_argmax(psi).1
}

/// Fidelity together with the maximizing direction.
pub fn coherent_fidelity_argmax(psi: &StateVec) -> (SphPoint, f64) {
    let j = psi.spin();
    let overlap = |theta: f64, phi: f64| -> f64 {
        let omega = SphPoint::new(theta.clamp(0.0, PI), phi).unwrap();
        coherent_ket(j, &omega).inner(psi).unwrap().norm_sqr()
    };

    // Coarse scan, poles included.
    let (n_theta, n_phi) = (48usize, 96usize);
    let mut best = (0.0f64, 0.0f64, overlap(0.0, 0.0));
    let south = overlap(PI, 0.0);
    if south > best.2 {
        best = (PI, 0.0, south);
    }
    for it in 0..n_theta {
        let theta = PI * (it as f64 + 0.5) / n_theta as f64;
        for ip in 0..n_phi {
            let phi = 2.0 * PI * ip as f64 / n_phi as f64;
            let v = overlap(theta, phi);
            if v > best.2 {
                best = (theta, phi, v);
            }
        }
    }

    // Alternating 1-D refinements; brackets shrink round over round.
    let (mut theta, mut phi, mut value) = best;
    let mut d_theta = PI / n_theta as f64;
    let mut d_phi = 2.0 * PI / n_phi as f64;
    for _ in 0..6 {
        let (t, _) = golden_max(
            &|x: f64| overlap(x.clamp(0.0, PI), phi),
            (theta - d_theta).max(0.0),
            (theta + d_theta).min(PI),
            1e-9,
        );
        theta = t;
        let (p, v) = golden_max(&|x: f64| overlap(theta, x), phi - d_phi, phi + d_phi, 1e-9);
        phi = p;
        value = v;
        d_theta *= 0.35;
        d_phi *= 0.35;
    }
    (SphPoint::new(theta, phi).unwrap(), value.clamp(0.0, 1.0))
}

/// Minimize `Tr f(channel(|psi><psi|))` over unit vectors in the spin-`J`
/// space: multistart projected descent with a centrally differenced
/// gradient. For concave `f` the minimum over all density matrices is
/// attained at a pure state, so this searches the full input set.
pub fn minimize_output_concave(
    j: TwiceSpin,
    k: u32,
    f: &ConcaveSpec,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    let ks = kraus_set(j, k as i32)?;
    let d = j.dim();
    let objective = |x: &[f64]| -> f64 {
        let mut amps = CVec::zeros(d);
        for i in 0..d {
            amps[i] = C64::new(x[i], x[d + i]);
        }
        let n = amps.norm();
        amps /= C64::new(n, 0.0);
        let rho =
            DensityMatrix::new_unchecked(j, CMat::from_fn(d, d, |r, c| amps[r] * amps[c].conj()));
        let out = apply_channel(&ks, &rho).unwrap();
        out.clamped_spectrum().iter().map(|&v| f.eval(v)).sum()
    };

    let runs: Vec<(usize, f64, Vec<f64>, usize, bool)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, r as u64));
            let mut x: Vec<f64> = (0..2 * d)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            normalize(&mut x);
            let (value, iters, converged) = descend(&objective, &mut x, cfg);
            (r, value, x, iters, converged)
        })
        .collect();

    // Deterministic winner: smallest value, ties broken by restart index.
    let (_, best_value, best_x, iterations_used, converged) = runs
        .into_iter()
        .min_by(|a, b| (a.1, a.0).partial_cmp(&(b.1, b.0)).unwrap())
        .expect("at least one restart");

    let mut amps = CVec::zeros(d);
    for i in 0..d {
        amps[i] = C64::new(best_x[i], best_x[d + i]);
    }
    let best_state = StateVec::new(j, amps)?.normalized();
    let fidelity = coherent_fidelity(&best_state);
    Ok(SearchResult {
        best_state,
        best_value,
        coherent_fidelity: fidelity,
        iterations_used,
        converged,
    })
}

fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in x.iter_mut() {
        *v /= n;
    }
}

/// Adaptive-step descent on the unit sphere. Gradient by central
/// differences (step 1e-5) projected onto the tangent space.
fn descend<F: Fn(&[f64]) -> f64>(
    objective: &F,
    x: &mut Vec<f64>,
    cfg: &SearchConfig,
) -> (f64, usize, bool) {
    const FD_STEP: f64 = 1e-5;
    let n = x.len();
    let mut value = objective(x);
    let mut step = cfg.step_init;
    let mut iters = 0;
    for _ in 0..cfg.max_iters {
        iters += 1;
        // Central differences.
        let mut grad = vec![0.0; n];
        for i in 0..n {
            let orig = x[i];
            x[i] = orig + FD_STEP;
            let up = objective(x);
            x[i] = orig - FD_STEP;
            let dn = objective(x);
            x[i] = orig;
            grad[i] = (up - dn) / (2.0 * FD_STEP);
        }
        // Project out the radial component.
        let radial: f64 = grad.iter().zip(x.iter()).map(|(g, v)| g * v).sum();
        for (g, v) in grad.iter_mut().zip(x.iter()) {
            *g -= radial * v;
        }
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < cfg.tol {
            return (value, iters, true);
        }
        // Backtracking with growth on success.
        let mut moved = false;
        while step > 1e-9 {
            let mut trial: Vec<f64> = x
                .iter()
                .zip(&grad)
                .map(|(v, g)| v - step * g / gnorm)
                .collect();
            normalize(&mut trial);
            let trial_value = objective(&trial);
            if trial_value < value - 1e-15 {
                *x = trial;
                value = trial_value;
                step = (step * 1.4).min(1.0);
                moved = true;
                break;
            }
            step *= 0.4;
        }
        if !moved {
            return (value, iters, true);
        }
    }
    (value, iters, false)
}

/// Serialized witness of a failed majorization comparison.
#[derive(Clone, Debug, Serialize)]
pub struct ViolationRecord {
    pub trial: usize,
    pub ensemble: String,
    pub slack: f64,
    pub prefix: usize,
    pub output_spectrum: Vec<f64>,
    pub coherent_spectrum: Vec<f64>,
    /// Input density matrix, row-major `(re, im)` pairs.
    pub rho: Vec<(f64, f64)>,
}

/// Summary of a majorization scan over random inputs.
#[derive(Clone, Debug, Serialize)]
pub struct MajorizationScan {
    pub two_j: u32,
    pub k: u32,
    pub trials_per_ensemble: usize,
    pub seed: u64,
    /// Smallest partial-sum surplus of the coherent spectrum over any
    /// sampled output spectrum (negative = violation).
    pub min_slack: f64,
    pub min_slack_prefix: usize,
    pub violations: usize,
    /// Largest excess of the output operator norm over `(2J+1)/(2K+1)`.
    pub max_norm_excess: f64,
    /// Coherent fidelity of the pure input attaining the minimal slack
    /// (absent when a mixed input attains it).
    pub argmin_input_coherent_fidelity: Option<f64>,
    pub worst_violation: Option<ViolationRecord>,
}

struct TrialOutcome {
    trial: usize,
    pure: bool,
    slack: f64,
    prefix: usize,
    norm_excess: f64,
    spectrum: Vec<f64>,
    rho: DensityMatrix,
    input_state: Option<StateVec>,
}

fn run_trials(
    j: TwiceSpin,
    ks: &KrausSet,
    coherent: &SpectrumSeq,
    norm_bound: f64,
    trials: usize,
    seed: u64,
) -> Vec<TrialOutcome> {
    (0..2 * trials)
        .into_par_iter()
        .map(|t| {
            let pure = t >= trials;
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t as u64));
            let (rho, input_state) = if pure {
                let psi = sample_pure(j, &mut rng);
                (DensityMatrix::from_pure(&psi), Some(psi))
            } else {
                (sample_density_with(j, j.dim(), &mut rng).unwrap(), None)
            };
            let out = apply_channel(ks, &rho).unwrap();
            let spectrum = SpectrumSeq::from_density(&out);
            let (slack, prefix) =
                majorization_slack(coherent, &spectrum).expect("totals are both 1");
            let norm_excess = out.spectrum()[0] - norm_bound;
            TrialOutcome {
                trial: t,
                pure,
                slack,
                prefix,
                norm_excess,
                spectrum: spectrum.values().to_vec(),
                rho,
                input_state,
            }
        })
        .collect()
}

/// Scan the majorization statement and the operator-norm bound over
/// `trials` Hilbert-Schmidt-random and `trials` Haar-pure inputs.
pub fn majorization_scan(
    j: TwiceSpin,
    k: u32,
    trials: usize,
    seed: u64,
) -> Result<MajorizationScan> {
    let ks = kraus_set(j, k as i32)?;
    let closed = coherent_output_spectrum(j, k);
    let coherent = SpectrumSeq::new(closed.eigenvalues().to_vec())?;
    let norm_bound = j.dim() as f64 / closed.j_out().dim() as f64;
    let outcomes = run_trials(j, &ks, &coherent, norm_bound, trials, seed);

    let mut min_slack = f64::INFINITY;
    let mut min_prefix = 0;
    let mut argmin: Option<&TrialOutcome> = None;
    let mut violations = 0;
    let mut max_norm_excess = f64::NEG_INFINITY;
    for o in &outcomes {
        if o.slack < min_slack || (o.slack == min_slack && argmin.is_none_or(|a| o.trial < a.trial))
        {
            min_slack = o.slack;
            min_prefix = o.prefix;
            argmin = Some(o);
        }
        if o.slack < -crate::tol::PARTIAL_SUM_SLACK {
            violations += 1;
        }
        max_norm_excess = max_norm_excess.max(o.norm_excess);
    }
    let argmin = argmin.expect("at least one trial");
    let worst_violation = (violations > 0).then(|| ViolationRecord {
        trial: argmin.trial,
        ensemble: if argmin.pure {
            "haar-pure"
        } else {
            "hilbert-schmidt"
        }
        .into(),
        slack: argmin.slack,
        prefix: argmin.prefix,
        output_spectrum: argmin.spectrum.clone(),
        coherent_spectrum: coherent.values().to_vec(),
        rho: argmin.rho.matrix().iter().map(|c| (c.re, c.im)).collect(),
    });
    let argmin_input_coherent_fidelity = argmin.input_state.as_ref().map(coherent_fidelity);
    Ok(MajorizationScan {
        two_j: j.two_j(),
        k,
        trials_per_ensemble: trials,
        seed,
        min_slack,
        min_slack_prefix: min_prefix,
        violations,
        max_norm_excess,
        argmin_input_coherent_fidelity,
        worst_violation,
    })
}

/// Per-function slack summary inside a [`ScanReport`].
#[derive(Clone, Debug, Serialize)]
pub struct FunctionSlacks {
    pub function: String,
    /// `min over trials of [sum f(output) - sum f(coherent output)]`.
    pub min_karamata_slack: f64,
    /// `min over trials of [classical average - trace functional]`.
    pub min_berezin_lieb_gap: f64,
    /// `min over trials of [classical average - coherent classical value]`.
    pub min_classical_average_slack: f64,
}

/// Full randomized verification report: majorization, concave-sum direction,
/// integral inequality and classical-average minimality, per function.
#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub majorization: MajorizationScan,
    pub quadrature_degree: usize,
    pub per_function: Vec<FunctionSlacks>,
}

impl ScanReport {
    pub fn min_karamata_slack(&self) -> f64 {
        self.per_function
            .iter()
            .map(|f| f.min_karamata_slack)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_berezin_lieb_gap(&self) -> f64 {
        self.per_function
            .iter()
            .map(|f| f.min_berezin_lieb_gap)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_classical_average_slack(&self) -> f64 {
        self.per_function
            .iter()
            .map(|f| f.min_classical_average_slack)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Run every check cluster on a fresh sample: majorization and norm bound,
/// the concave-sum direction of Karamata, the integral inequality of the
/// symbol calculus and the classical-average minimality of coherent states.
pub fn conjecture_scan(
    j: TwiceSpin,
    k: u32,
    fs: &[ConcaveSpec],
    trials: usize,
    seed: u64,
) -> Result<ScanReport> {
    let ks = kraus_set(j, k as i32)?;
    let closed = coherent_output_spectrum(j, k);
    let coherent = SpectrumSeq::new(closed.eigenvalues().to_vec())?;
    let norm_bound = j.dim() as f64 / closed.j_out().dim() as f64;
    let outcomes = run_trials(j, &ks, &coherent, norm_bound, trials, seed);

    // Shared symbol table for the integral checks.
    let degree = (4 * j.two_j() as usize).max(96);
    let quad = SphereQuadrature::with_degree(degree);
    let table = CoherentSymbolTable::new(j, &quad);
    let coherent_classical: Vec<f64> = fs
        .iter()
        .map(|f| coherent_classical_average(j, f))
        .collect();

    let per_trial: Vec<Vec<(f64, f64, f64)>> = outcomes
        .par_iter()
        .map(|o| {
            fs.iter()
                .zip(&coherent_classical)
                .map(|(f, &coh_cl)| {
                    let karamata = f.sum_over(&o.spectrum) - f.sum_over(coherent.values());
                    let classical = table.average(&o.rho, f).unwrap();
                    let trace = f.sum_over(&o.rho.clamped_spectrum());
                    (karamata, classical - trace, classical - coh_cl)
                })
                .collect()
        })
        .collect();

    let per_function = fs
        .iter()
        .enumerate()
        .map(|(fi, f)| {
            let mut karamata = f64::INFINITY;
            let mut bl = f64::INFINITY;
            let mut classical = f64::INFINITY;
            for row in &per_trial {
                karamata = karamata.min(row[fi].0);
                bl = bl.min(row[fi].1);
                classical = classical.min(row[fi].2);
            }
            FunctionSlacks {
                function: f.tag(),
                min_karamata_slack: karamata,
                min_berezin_lieb_gap: bl,
                min_classical_average_slack: classical,
            }
        })
        .collect();

    // Reuse the majorization reduction.
    let mut min_slack = f64::INFINITY;
    let mut min_prefix = 0;
    let mut argmin_idx = 0;
    let mut violations = 0;
    let mut max_norm_excess = f64::NEG_INFINITY;
    for (i, o) in outcomes.iter().enumerate() {
        if o.slack < min_slack {
            min_slack = o.slack;
            min_prefix = o.prefix;
            argmin_idx = i;
        }
        if o.slack < -crate::tol::PARTIAL_SUM_SLACK {
            violations += 1;
        }
        max_norm_excess = max_norm_excess.max(o.norm_excess);
    }
    let argmin = &outcomes[argmin_idx];
    let majorization = MajorizationScan {
        two_j: j.two_j(),
        k,
        trials_per_ensemble: trials,
        seed,
        min_slack,
        min_slack_prefix: min_prefix,
        violations,
        max_norm_excess,
        argmin_input_coherent_fidelity: argmin.input_state.as_ref().map(coherent_fidelity),
        worst_violation: (violations > 0).then(|| ViolationRecord {
            trial: argmin.trial,
            ensemble: if argmin.pure {
                "haar-pure"
            } else {
                "hilbert-schmidt"
            }
            .into(),
            slack: argmin.slack,
            prefix: argmin.prefix,
            output_spectrum: argmin.spectrum.clone(),
            coherent_spectrum: coherent.values().to_vec(),
            rho: argmin.rho.matrix().iter().map(|c| (c.re, c.im)).collect(),
        }),
    };
    Ok(ScanReport {
        majorization,
        quadrature_degree: degree,
        per_function,
    })
}
