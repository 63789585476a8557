//! Scalar numerics shared across modules: stable binomials and factorial
//! ratios, Gauss-Legendre rules, an adaptive 1-D integrator, golden-section
//! search, pairwise summation and deterministic seed derivation.

/// Binomial coefficient as `f64`, multiplicative form.
///
/// Never forms raw factorials, so it stays accurate (relative error about
/// `k * eps`) far beyond the range where `n!` overflows.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 1..=k {
        acc *= (n - k + i) as f64 / i as f64;
    }
    acc
}

/// Square roots of the full binomial row `binom(n, 0..=n)`.
///
/// Filled by the ratio recurrence so each entry costs O(1).
pub fn binomial_row_sqrt(n: u32) -> Vec<f64> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut b = 1.0f64;
    row.push(1.0);
    for m in 0..n {
        b *= (n - m) as f64 / (m + 1) as f64;
        row.push(b.sqrt());
    }
    row
}

/// ln(n!) by direct summation.
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n as u64).map(|i| (i as f64).ln()).sum()
}

/// Product of the integers `lo..=hi` as `f64` (1 for an empty range).
///
/// This is the building block for factorial ratios `hi!/(lo-1)!` without
/// forming either factorial.
pub fn int_product(lo: u64, hi: u64) -> f64 {
    let mut acc = 1.0f64;
    let mut i = lo;
    while i <= hi {
        acc *= i as f64;
        i += 1;
    }
    acc
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on the three-term recurrence; exact for polynomials of
/// degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, d2) = legendre_and_derivative(n, x);
                dp = d2;
                x -= p2 / d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_and_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed 15-point Gauss-Legendre estimate on [a, b].
fn gl15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    use std::sync::OnceLock;
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (xs, ws) = RULE.get_or_init(|| gauss_legendre(15));
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in xs.iter().zip(ws) {
        acc += w * f(c + h * x);
    }
    acc * h
}

/// Adaptive quadrature of `f` on [a, b] to relative accuracy `rel_tol`.
///
/// Recursive interval halving with a two-level Gauss-Legendre error
/// estimate; handles integrable endpoint singularities (e.g. `sqrt`,
/// `t ln t`) by grading the subdivision automatically.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let coarse = gl15(f, a, b);
    let scale = coarse.abs().max(1e-3 * (b - a).abs());
    adapt(f, a, b, coarse, rel_tol * scale, 0)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = gl15(f, a, m);
    let right = gl15(f, m, b);
    let refined = left + right;
    if (refined - whole).abs() <= eps || depth >= 48 {
        return refined;
    }
    adapt(f, a, m, left, 0.5 * eps, depth + 1) + adapt(f, m, b, right, 0.5 * eps, depth + 1)
}

/// Golden-section maximization of a unimodal function on [a, b].
///
/// Returns `(argmax, max)` once the bracket is shorter than `x_tol`.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Pairwise (cascade) summation: order-stable and low-noise.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Least-squares straight line through `(xs, ys)`; returns `(slope, intercept)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-trial seed from a master seed and a trial index.
///
/// Scan verdicts must not depend on thread count or iteration order, so each
/// trial derives its own stream seed through this fixed splitting function.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(1)))
}
