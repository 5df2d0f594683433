//! Fitting `P_L = c1 (c2 p)^((d+1)/2)` to simulated data and locating the
//! threshold crossing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface_code::ScalingParams;

/// Points with fewer observed failures than this are excluded from fits.
pub const MIN_FAILURES: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub p: f64,
    pub d: u32,
    pub p_l_hat: f64,
    pub std_err: f64,
    /// Observed failure count, when known. Synthetic points leave it empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failures: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub c1_hat: f64,
    pub c2_hat: f64,
    pub residual_r2: f64,
    pub points_used: Vec<FitPoint>,
    pub points_dropped: usize,
}

impl ScalingFit {
    pub fn params(&self) -> ScalingParams {
        ScalingParams {
            c1: self.c1_hat,
            c2: self.c2_hat,
        }
    }

    /// `ln(c2_hat p)`: change in `ln P_L` per unit of `(d+1)/2`.
    pub fn suppression_exponent(&self, p: f64) -> f64 {
        (self.c2_hat * p).ln()
    }
}

/// Weighted least squares on `ln P_L = ln c1 + ((d+1)/2) (ln c2 + ln p)`.
///
/// Weights are inverse variances of `ln p_l_hat`, i.e. `(p_l_hat/std_err)^2`;
/// when any point lacks an error bar all points are weighted equally.
pub fn fit_scaling(points: &[FitPoint]) -> Result<ScalingFit> {
    let usable: Vec<FitPoint> = points
        .iter()
        .copied()
        .filter(|pt| pt.failures.is_none_or(|f| f >= MIN_FAILURES))
        .filter(|pt| pt.p > 0.0 && pt.p_l_hat > 0.0 && pt.p_l_hat.is_finite())
        .collect();
    let dropped = points.len() - usable.len();
    if usable.len() < 4 {
        return Err(Error::InsufficientData {
            usable: usable.len(),
            required: 4,
            dropped,
        });
    }
    let distinct = |vals: Vec<f64>| {
        let mut v = vals;
        v.sort_by(f64::total_cmp);
        v.dedup();
        v.len()
    };
    if distinct(usable.iter().map(|p| f64::from(p.d)).collect()) < 2 {
        return Err(Error::DegenerateDesign("all points share one code distance".into()));
    }
    if distinct(usable.iter().map(|p| p.p).collect()) < 2 {
        return Err(Error::DegenerateDesign("all points share one physical error rate".into()));
    }

    let all_have_errors = usable.iter().all(|pt| pt.std_err > 0.0);
    let rows: Vec<(f64, f64, f64, f64)> = usable
        .iter()
        .map(|pt| {
            let x = (f64::from(pt.d) + 1.0) / 2.0;
            let y = pt.p_l_hat.ln();
            let w = if all_have_errors {
                (pt.p_l_hat / pt.std_err).powi(2)
            } else {
                1.0
            };
            (x, y, pt.p.ln(), w)
        })
        .collect();

    // z = y - x ln p = ln c1 + x ln c2
    let sw: f64 = rows.iter().map(|r| r.3).sum();
    let xm = rows.iter().map(|r| r.3 * r.0).sum::<f64>() / sw;
    let zm = rows.iter().map(|r| r.3 * (r.1 - r.0 * r.2)).sum::<f64>() / sw;
    let sxx: f64 = rows.iter().map(|r| r.3 * (r.0 - xm).powi(2)).sum();
    let sxz: f64 = rows
        .iter()
        .map(|r| r.3 * (r.0 - xm) * (r.1 - r.0 * r.2 - zm))
        .sum();
    let log_c2 = sxz / sxx;
    let log_c1 = zm - log_c2 * xm;

    let ym = rows.iter().map(|r| r.3 * r.1).sum::<f64>() / sw;
    let ss_tot: f64 = rows.iter().map(|r| r.3 * (r.1 - ym).powi(2)).sum();
    let ss_res: f64 = rows
        .iter()
        .map(|r| r.3 * (r.1 - (log_c1 + r.0 * (log_c2 + r.2))).powi(2))
        .sum();
    let r2 = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };

    Ok(ScalingFit {
        c1_hat: log_c1.exp(),
        c2_hat: log_c2.exp(),
        residual_r2: r2,
        points_used: usable,
        points_dropped: dropped,
    })
}

/// Sampled logical error rates of one code distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub d: u32,
    /// `(p, p_l_hat)` pairs.
    pub points: Vec<(f64, f64)>,
}

/// Physical error rate where the larger code stops outperforming the smaller
/// one. Differences of `ln p_l` are interpolated linearly in `ln p` between
/// the two grid points that bracket the first sign change.
pub fn pairwise_crossing(smaller: &Curve, larger: &Curve) -> Result<f64> {
    let mut grid: Vec<(f64, f64)> = Vec::new();
    for &(p, a) in &smaller.points {
        if let Some(&(_, b)) = larger
            .points
            .iter()
            .find(|&&(q, _)| (q - p).abs() <= 1e-12 * p.abs().max(1e-300))
        {
            if p > 0.0 && a > 0.0 && b > 0.0 {
                grid.push((p, b.ln() - a.ln()));
            }
        }
    }
    grid.sort_by(|x, y| x.0.total_cmp(&y.0));
    for (i, &(p, diff)) in grid.iter().enumerate() {
        if diff == 0.0 {
            let below = grid[..i].iter().any(|g| g.1 < 0.0);
            let above = grid[i + 1..].iter().any(|g| g.1 > 0.0);
            if below || above {
                return Ok(p);
            }
        }
        if let Some(&(q, next)) = grid.get(i + 1) {
            if diff < 0.0 && next > 0.0 {
                let t = diff / (diff - next);
                return Ok((p.ln() + t * (q.ln() - p.ln())).exp());
            }
        }
    }
    Err(Error::NoCrossing)
}

/// Crossing point of the two largest-distance curves.
pub fn estimate_threshold(curves: &[Curve]) -> Result<f64> {
    if curves.len() < 2 {
        return Err(Error::InvalidInput("threshold estimate needs at least two distances".into()));
    }
    let mut sorted: Vec<&Curve> = curves.iter().collect();
    sorted.sort_by_key(|c| c.d);
    let n = sorted.len();
    if sorted[n - 1].d == sorted[n - 2].d {
        return Err(Error::InvalidInput("duplicate code distance in curves".into()));
    }
    pairwise_crossing(sorted[n - 2], sorted[n - 1])
}
