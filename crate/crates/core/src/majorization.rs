//! Majorization of spectra, concave test functions and trace functionals.

use crate::error::{Error, Result};
use crate::spin::DensityMatrix;
use crate::tol;
use serde::{Deserialize, Serialize};

/// A real spectrum stored descending.
#[derive(Clone, Debug)]
pub struct SpectrumSeq {
    values: Vec<f64>,
}

impl SpectrumSeq {
    /// Sorts descending. Entries below `-tol::PARTIAL_SUM_SLACK` are
    /// rejected as not being a spectrum-with-dirt.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values
            .iter()
            .find(|v| **v < -tol::PARTIAL_SUM_SLACK || !v.is_finite())
        {
            return Err(Error::InvalidParameter(format!(
                "spectrum entry {bad} is negative beyond tolerance or non-finite"
            )));
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(SpectrumSeq { values })
    }

    /// Eigenvalues of a density matrix, clamped to `[0, 1]` and renormalized
    /// to exact unit sum, so solver dirt cannot flip boolean verdicts.
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let mut values = rho.clamped_spectrum();
        let total: f64 = values.iter().sum();
        if total > 0.0 {
            for v in &mut values {
                *v /= total;
            }
        }
        SpectrumSeq { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Pad the shorter of two spectra with zeros.
fn padded<'a>(a: &'a SpectrumSeq, b: &'a SpectrumSeq) -> (Vec<f64>, Vec<f64>) {
    let n = a.len().max(b.len());
    let mut av = a.values.clone();
    let mut bv = b.values.clone();
    av.resize(n, 0.0);
    bv.resize(n, 0.0);
    (av, bv)
}

/// The smallest partial-sum surplus of `a` over `b` and the prefix length
/// attaining it (1-based). Negative slack beyond tolerance means `a` does
/// not majorize `b`.
pub fn majorization_slack(a: &SpectrumSeq, b: &SpectrumSeq) -> Result<(f64, usize)> {
    let (av, bv) = padded(a, b);
    let (ta, tb): (f64, f64) = (av.iter().sum(), bv.iter().sum());
    if (ta - tb).abs() > tol::TOTAL_SUM {
        return Err(Error::TotalMismatch(ta, tb));
    }
    let mut pa = 0.0;
    let mut pb = 0.0;
    let mut min_slack = f64::INFINITY;
    let mut argmin = 0;
    for (i, (x, y)) in av.iter().zip(&bv).enumerate() {
        pa += x;
        pb += y;
        let slack = pa - pb;
        if slack < min_slack {
            min_slack = slack;
            argmin = i + 1;
        }
    }
    Ok((min_slack, argmin))
}

/// `a` majorizes `b`: every descending partial sum of `a` dominates the
/// matching sum of `b` within tolerance, and the totals agree.
pub fn majorizes(a: &SpectrumSeq, b: &SpectrumSeq) -> Result<bool> {
    Ok(majorization_slack(a, b)?.0 >= -tol::PARTIAL_SUM_SLACK)
}

/// A concave test function on `[0, 1]`.
///
/// Concavity is re-verified on a 1000-point grid at construction, so a bad
/// parameter (or a non-concave piecewise-linear table) is caught eagerly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ConcaveSpec {
    /// `f(t) = -t ln t`, with `f(0) = 0`.
    XLogX,
    /// `f(t) = t^p`, `0 < p < 1`.
    Power(f64),
    /// `f(t) = -t^p`, `p >= 1`.
    NegPower(f64),
    /// Piecewise-linear interpolation of values at equally spaced knots on
    /// `[0, 1]` (at least two values; slopes must be non-increasing).
    PiecewiseLinear(Vec<f64>),
}

impl ConcaveSpec {
    pub fn x_log_x() -> Result<Self> {
        ConcaveSpec::XLogX.validated()
    }

    pub fn power(p: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p) || p == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "power exponent must be in (0, 1), got {p}"
            )));
        }
        ConcaveSpec::Power(p).validated()
    }

    pub fn neg_power(p: f64) -> Result<Self> {
        if p < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "negated power exponent must be >= 1, got {p}"
            )));
        }
        ConcaveSpec::NegPower(p).validated()
    }

    pub fn piecewise_linear(knot_values: Vec<f64>) -> Result<Self> {
        if knot_values.len() < 2 {
            return Err(Error::InvalidParameter(
                "piecewise-linear spec needs at least two knot values".into(),
            ));
        }
        ConcaveSpec::PiecewiseLinear(knot_values).validated()
    }

    fn validated(self) -> Result<Self> {
        // Midpoint concavity on a uniform grid.
        let n = 1000;
        for i in 0..n - 1 {
            let x = i as f64 / (n - 1) as f64;
            let y = (i + 2).min(n - 1) as f64 / (n - 1) as f64;
            let mid = 0.5 * (x + y);
            if self.eval(mid) < 0.5 * (self.eval(x) + self.eval(y)) - 1e-12 {
                return Err(Error::NotConcave(mid));
            }
        }
        Ok(self)
    }

    /// Evaluate on `[0, 1]`; `f(0)` is the limiting value.
    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(
            (-1e-9..=1.0 + 1e-9).contains(&t),
            "argument {t} outside [0,1]"
        );
        let t = t.clamp(0.0, 1.0);
        match self {
            ConcaveSpec::XLogX => {
                if t > 0.0 {
                    -t * t.ln()
                } else {
                    0.0
                }
            }
            ConcaveSpec::Power(p) => t.powf(*p),
            ConcaveSpec::NegPower(p) => -t.powf(*p),
            ConcaveSpec::PiecewiseLinear(vals) => {
                let segments = vals.len() - 1;
                let pos = t * segments as f64;
                let i = (pos.floor() as usize).min(segments - 1);
                let frac = pos - i as f64;
                vals[i] + frac * (vals[i + 1] - vals[i])
            }
        }
    }

    /// Sum `f` over a spectrum.
    pub fn sum_over(&self, values: &[f64]) -> f64 {
        values.iter().map(|&v| self.eval(v)).sum()
    }

    /// Parse a CLI tag: `xlogx`, `power:<p>`, `negpower:<p>`,
    /// `pl:<v1,v2,...>`.
    pub fn parse_tag(tag: &str) -> Result<Self> {
        if tag == "xlogx" {
            return ConcaveSpec::x_log_x();
        }
        if let Some(p) = tag.strip_prefix("power:") {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad exponent in {tag}")))?;
            return ConcaveSpec::power(p);
        }
        if let Some(p) = tag.strip_prefix("negpower:") {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad exponent in {tag}")))?;
            return ConcaveSpec::neg_power(p);
        }
        if let Some(list) = tag.strip_prefix("pl:") {
            let vals: std::result::Result<Vec<f64>, _> =
                list.split(',').map(str::parse::<f64>).collect();
            let vals =
                vals.map_err(|_| Error::InvalidParameter(format!("bad knot list in {tag}")))?;
            return ConcaveSpec::piecewise_linear(vals);
        }
        Err(Error::InvalidParameter(format!(
            "unknown function tag {tag} (expected xlogx | power:<p> | negpower:<p> | pl:<v1,v2,...>)"
        )))
    }

    pub fn tag(&self) -> String {
        match self {
            ConcaveSpec::XLogX => "xlogx".into(),
            ConcaveSpec::Power(p) => format!("power:{p}"),
            ConcaveSpec::NegPower(p) => format!("negpower:{p}"),
            ConcaveSpec::PiecewiseLinear(vals) => {
                let list: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
                format!("pl:{}", list.join(","))
            }
        }
    }

    /// The four-function family used across the verification campaigns.
    pub fn standard_family() -> Vec<ConcaveSpec> {
        vec![
            ConcaveSpec::x_log_x().unwrap(),
            ConcaveSpec::power(0.5).unwrap(),
            ConcaveSpec::neg_power(2.0).unwrap(),
            ConcaveSpec::piecewise_linear(vec![0.0, 0.55, 0.8, 0.93, 1.0]).unwrap(),
        ]
    }
}

/// One-sided Karamata check: if `a` majorizes `b` then
/// `sum f(a) <= sum f(b)` must hold for every concave `f` supplied.
///
/// A finite family cannot witness the converse direction, so this is only
/// meaningful for inputs where majorization has been established.
pub fn karamata_equivalent(a: &SpectrumSeq, b: &SpectrumSeq, fs: &[ConcaveSpec]) -> Result<bool> {
    let (ta, tb) = (a.total(), b.total());
    if (ta - tb).abs() > tol::TOTAL_SUM {
        return Err(Error::TotalMismatch(ta, tb));
    }
    let (av, bv) = padded(a, b);
    Ok(fs
        .iter()
        .all(|f| f.sum_over(&av) <= f.sum_over(&bv) + tol::KARAMATA_SLACK))
}

/// Outcome of the mixture property check `A > B, A > C  =>  A > tB+(1-t)C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MixtureOutcome {
    /// One of the hypotheses failed; nothing to assert.
    Skipped,
    /// Conclusion holds; carries the minimal partial-sum slack.
    Holds(f64),
    /// Hypotheses held but the conclusion failed.
    Violated(f64),
}

/// Check the mixture property on Hermitian matrices via their spectra.
pub fn mixture_check(
    a: &crate::linalg::CMat,
    b: &crate::linalg::CMat,
    c: &crate::linalg::CMat,
    lambda: f64,
) -> Result<MixtureOutcome> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "mixture weight must lie in [0, 1], got {lambda}"
        )));
    }
    // Hermitian spectra may be indefinite; build the sequences directly
    // instead of going through the non-negativity check.
    let raw = |m: &crate::linalg::CMat| {
        let mut v = crate::linalg::eigvalsh(m);
        v.sort_by(|x, y| y.partial_cmp(x).unwrap());
        SpectrumSeq { values: v }
    };
    let sa = raw(a);
    let sb = raw(b);
    let sc = raw(c);
    if !(majorizes(&sa, &sb)? && majorizes(&sa, &sc)?) {
        return Ok(MixtureOutcome::Skipped);
    }
    let mixed = b.scale(lambda) + c.scale(1.0 - lambda);
    let sm = raw(&mixed);
    let (slack, _) = majorization_slack(&sa, &sm)?;
    if slack >= -tol::PARTIAL_SUM_SLACK {
        Ok(MixtureOutcome::Holds(slack))
    } else {
        Ok(MixtureOutcome::Violated(slack))
    }
}

/// `sum f(lambda_i)` over the clamped spectrum of `rho`.
pub fn trace_concave(rho: &DensityMatrix, f: &ConcaveSpec) -> f64 {
    f.sum_over(&rho.clamped_spectrum())
}
