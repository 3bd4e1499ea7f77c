//! Empirical remainder envelope and Step-1 ratio constants.

use serde::{Deserialize, Serialize};

use super::sweep::SweepRow;
use crate::{Error, Result};

/// One bin `[lo, hi)` of `t = (R − r)/sys`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeBin {
    pub lo: f64,
    pub hi: f64,
    /// Samples with `t` in the bin.
    pub count: usize,
    /// Smallest deficit inside the bin (NaN when empty).
    pub bin_min: f64,
    /// `λ̂(lo) = min{deficit : t ≥ lo}`.
    pub lambda: f64,
}

/// Least-squares line `λ̂(t) ≈ slope·t + intercept` over `[t_lo, t_hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub points: usize,
    /// RMS residual divided by the mean fitted value.
    pub relative_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeEstimate {
    pub bins: Vec<EnvelopeBin>,
    pub fit: SlopeFit,
    pub samples: usize,
    /// Always `"upper_bound"`: a minimum over sampled bodies can only bound
    /// the true λ from above.
    pub bound: String,
}

/// `λ̂(t) = min{deficit : t′ ≥ t}` over measured rows.
pub fn lambda_at(rows: &[SweepRow], t: f64) -> f64 {
    cumulative_min(&measured(rows), t)
}

fn measured(rows: &[SweepRow]) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|r| r.is_measured() && r.t.is_finite() && r.deficit.is_finite())
        .map(|r| (r.t, r.deficit))
        .collect()
}

fn cumulative_min(pts: &[(f64, f64)], t: f64) -> f64 {
    pts.iter().filter(|p| p.0 >= t).map(|p| p.1).fold(f64::INFINITY, f64::min)
}

/// Bin edges: linear on `[0, min(1, t_max)]`, logarithmic on `[1, t_max]`.
fn edges(t_max: f64, bins: usize) -> Vec<f64> {
    if t_max <= 1.0 {
        return (0..=bins).map(|i| t_max * i as f64 / bins as f64).collect();
    }
    let lin = bins / 2;
    let log = bins - lin;
    let mut e: Vec<f64> = (0..lin).map(|i| i as f64 / lin as f64).collect();
    e.extend((0..=log).map(|i| t_max.powf(i as f64 / log as f64)));
    e
}

/// Lower envelope of deficit against `t` in the cumulative "`≥ t`" form,
/// with a line fitted over the top decade `[t_max/10, t_max]`.
pub fn envelope(rows: &[SweepRow], bins: usize) -> Result<EnvelopeEstimate> {
    if bins < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 bins, got {bins}")));
    }
    let pts = measured(rows);
    if pts.is_empty() {
        return Err(Error::Empty("no measured rows".into()));
    }
    let t_max = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    let e = edges(t_max, bins);
    let n = e.len() - 1;
    let bins: Vec<EnvelopeBin> = (0..n)
        .map(|i| {
            let (lo, hi) = (e[i], e[i + 1]);
            let inside: Vec<f64> =
                pts.iter().filter(|p| p.0 >= lo && (p.0 < hi || (i == n - 1 && p.0 <= hi))).map(|p| p.1).collect();
            EnvelopeBin {
                lo,
                hi,
                count: inside.len(),
                bin_min: inside.iter().copied().fold(f64::NAN, f64::min),
                lambda: cumulative_min(&pts, lo),
            }
        })
        .collect();

    let t_lo = t_max / 10.0;
    let mut ts: Vec<f64> = pts.iter().map(|p| p.0).filter(|&t| t >= t_lo).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let fit_pts: Vec<(f64, f64)> = ts.iter().map(|&t| (t, cumulative_min(&pts, t))).collect();
    Ok(EnvelopeEstimate { bins, fit: fit_line(&fit_pts, t_lo, t_max), samples: pts.len(), bound: "upper_bound".into() })
}

fn fit_line(pts: &[(f64, f64)], t_lo: f64, t_hi: f64) -> SlopeFit {
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { f64::NAN };
    let intercept = my - slope * mx;
    let rms = (pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum::<f64>() / n).sqrt();
    SlopeFit { slope, intercept, t_lo, t_hi, points: pts.len(), relative_residual: rms / my.abs() }
}

/// Observed range of one ratio over a family, and its correlation with the
/// eccentricity `ln(c/a)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRange {
    pub min: f64,
    pub max: f64,
    pub trend: f64,
}

impl RatioRange {
    fn of(values: &[(f64, f64)]) -> Self {
        let min = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
        let max = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
        RatioRange { min, max, trend: correlation(values) }
    }

    pub fn spread(&self) -> f64 {
        self.max / self.min
    }
}

fn correlation(v: &[(f64, f64)]) -> f64 {
    let n = v.len() as f64;
    let (mx, my) = (v.iter().map(|p| p.0).sum::<f64>() / n, v.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = v.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = v.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = v.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx > 0.0 && syy > 0.0 {
        sxy / (sxx * syy).sqrt()
    } else {
        0.0
    }
}

/// Empirical constants of `sys ∼ b`, `r ∼ a`, `R ∼ c`, `area ∼ bc`, with
/// `a ≤ b ≤ c` the semi-axes of the inner John ellipsoid. All four ratios
/// are scale-invariant, so normalizing to `b = 1` changes nothing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepOneFit {
    pub sys_b: RatioRange,
    pub r_a: RatioRange,
    #[serde(rename = "R_c")]
    pub big_r_c: RatioRange,
    pub area_bc: RatioRange,
    pub rows: usize,
    /// Ratios that vary strongly and systematically with eccentricity.
    pub drifting: Vec<String>,
}

/// A ratio drifts when it changes by more than this factor and correlates
/// with eccentricity beyond [`DRIFT_CORRELATION`].
pub const DRIFT_SPREAD: f64 = 1.5;
pub const DRIFT_CORRELATION: f64 = 0.9;

pub fn step_one_fit(rows: &[SweepRow]) -> Result<StepOneFit> {
    let ok: Vec<&SweepRow> = rows.iter().filter(|r| r.is_measured() && r.a > 0.0).collect();
    if ok.is_empty() {
        return Err(Error::Empty("no measured rows".into()));
    }
    let ratio = |f: &dyn Fn(&SweepRow) -> f64| -> RatioRange {
        RatioRange::of(&ok.iter().map(|r| ((r.c / r.a).ln(), f(r))).collect::<Vec<_>>())
    };
    let fit = StepOneFit {
        sys_b: ratio(&|r| r.sys / r.b),
        r_a: ratio(&|r| r.inradius / r.a),
        big_r_c: ratio(&|r| r.circumradius / r.c),
        area_bc: ratio(&|r| r.area / (r.b * r.c)),
        rows: ok.len(),
        drifting: Vec::new(),
    };
    let drifting = [("sys/b", &fit.sys_b), ("r/a", &fit.r_a), ("R/c", &fit.big_r_c), ("area/bc", &fit.area_bc)]
        .iter()
        .filter(|(_, r)| r.spread() > DRIFT_SPREAD && r.trend.abs() > DRIFT_CORRELATION)
        .map(|(n, _)| n.to_string())
        .collect();
    Ok(StepOneFit { drifting, ..fit })
}
