//! Frame data from tabulated samples, interpolated piecewise-linearly in τ
//! and held constant outside the tabulated range.

use std::sync::Arc;

use curvtherm::{Error as CoreError, FrameData, FrameSample};

use crate::config::FrameRow;
use crate::error::ScenarioResult;

fn lerp(a: f64, b: f64, w: f64) -> f64 {
    a + (b - a) * w
}

fn blend(a: &FrameSample, b: &FrameSample, w: f64) -> FrameSample {
    let mut out = *a;
    for i in 0..3 {
        out.accel[i] = lerp(a.accel[i], b.accel[i], w);
        for j in 0..3 {
            out.riemann_titj[i][j] = lerp(a.riemann_titj[i][j], b.riemann_titj[i][j], w);
            for k in 0..3 {
                out.riemann_tjik[i][j][k] = lerp(a.riemann_tjik[i][j][k], b.riemann_tjik[i][j][k], w);
                for l in 0..3 {
                    out.riemann_ikjl[i][j][k][l] =
                        lerp(a.riemann_ikjl[i][j][k][l], b.riemann_ikjl[i][j][k][l], w);
                }
            }
        }
    }
    out
}

/// Build a frame from rows with strictly increasing `tau`.
pub fn tabulated_frame(rows: &[FrameRow]) -> ScenarioResult<FrameData> {
    if rows.is_empty() {
        return Err(CoreError::Input("frame tables are empty".into()).into());
    }
    if rows.windows(2).any(|w| !(w[1].tau > w[0].tau)) {
        return Err(CoreError::Input("frame table tau values must be strictly increasing".into()).into());
    }
    let taus: Arc<Vec<f64>> = Arc::new(rows.iter().map(|r| r.tau).collect());
    let samples: Arc<Vec<FrameSample>> = Arc::new(
        rows.iter()
            .map(|r| FrameSample {
                accel: r.accel,
                riemann_titj: r.riemann_titj,
                riemann_tjik: r.riemann_tjik,
                riemann_ikjl: r.riemann_ikjl,
            })
            .collect(),
    );
    Ok(FrameData::from_fn(move |tau| {
        let n = taus.len();
        // NaN propagates into the sample and is rejected downstream
        if tau.is_nan() {
            let mut s = samples[0];
            s.accel[0] = f64::NAN;
            return s;
        }
        let hi = taus.partition_point(|&t| t <= tau);
        if hi == 0 {
            return samples[0];
        }
        if hi == n {
            return samples[n - 1];
        }
        let lo = hi - 1;
        let w = (tau - taus[lo]) / (taus[hi] - taus[lo]);
        blend(&samples[lo], &samples[hi], w)
    }))
}
