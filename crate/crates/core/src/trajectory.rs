use crate::error::{Result, RiskError};
use crate::geom::{ConvexPolygon2D, ShapeSet, Vec2};

/// One time slice of a planned motion.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub body: ShapeSet,
    pub com_xy: Vec2,
    pub support: ConvexPolygon2D,
}

/// Timestamped samples with strictly increasing time, at least two of them.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedTrajectory {
    samples: Vec<TrajectorySample>,
}

impl TimedTrajectory {
    pub fn new(samples: Vec<TrajectorySample>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(RiskError::validation(
                "",
                format!("trajectory needs at least 2 samples, got {}", samples.len()),
            ));
        }
        for (i, s) in samples.iter().enumerate() {
            if !s.t.is_finite() {
                return Err(RiskError::validation(format!("[{i}].t"), "must be finite"));
            }
            if !s.com_xy.iter().all(|v| v.is_finite()) {
                return Err(RiskError::validation(
                    format!("[{i}].com_xy"),
                    "must be finite",
                ));
            }
            if i > 0 && s.t <= samples[i - 1].t {
                return Err(RiskError::validation(
                    format!("[{i}].t"),
                    format!(
                        "time must strictly increase ({} after {})",
                        s.t,
                        samples[i - 1].t
                    ),
                ));
            }
        }
        Ok(TimedTrajectory { samples })
    }

    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn start_time(&self) -> f64 {
        self.samples[0].t
    }

    pub fn end_time(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    pub fn duration(&self) -> f64 {
        self.end_time() - self.start_time()
    }

    pub fn first(&self) -> &TrajectorySample {
        &self.samples[0]
    }

    pub fn last(&self) -> &TrajectorySample {
        &self.samples[self.samples.len() - 1]
    }
}

/// Trapezoid integral of `(t, value)` pairs divided by the covered time span.
///
/// Times must be non-decreasing; zero-length intervals contribute nothing.
/// A zero total span yields the first value.
pub fn time_average(series: &[(f64, f64)]) -> f64 {
    match series {
        [] => 0.0,
        [(_, v)] => *v,
        _ => {
            let span = series[series.len() - 1].0 - series[0].0;
            if span <= 0.0 {
                return series[0].1;
            }
            let area: f64 = series
                .windows(2)
                .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
                .sum();
            area / span
        }
    }
}
