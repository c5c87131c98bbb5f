//! `start:stop:step` parameter ranges for the `table` command.

use std::str::FromStr;

/// A scalar or an inclusive range with a step.
///
/// `"0.3"` is the single point 0.3; `"0:0.5:0.1"` walks from 0 by 0.1 and
/// always includes the stop value, so a stop that is not a whole number of
/// steps away becomes the final point (within half-step tolerance the
/// regular lattice point stands in for it).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeSpec {
    start: f64,
    stop: f64,
    step: f64,
}

impl FromStr for RangeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let parse = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid number {p:?} in range {s:?}"))
                .and_then(|v| {
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(format!("non-finite value in range {s:?}"))
                    }
                })
        };
        match parts.as_slice() {
            [single] => {
                let v = parse(single)?;
                Ok(Self { start: v, stop: v, step: 0.0 })
            }
            [start, stop, step] => {
                let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
                if stop < start {
                    return Err(format!("range {s:?} has stop below start"));
                }
                if stop > start && step <= 0.0 {
                    return Err(format!("range {s:?} needs a positive step"));
                }
                Ok(Self { start, stop, step })
            }
            _ => Err(format!("expected VALUE or START:STOP:STEP, got {s:?}")),
        }
    }
}

impl RangeSpec {
    pub fn points(&self) -> Result<Vec<f64>, String> {
        if self.stop == self.start || self.step == 0.0 {
            return Ok(vec![self.start]);
        }
        let span = self.stop - self.start;
        let count = (span / self.step - 1e-9).ceil().max(0.0);
        if count > 1e6 {
            return Err(format!("range produces more than 1e6 points ({count})"));
        }
        let count = count as usize;
        let mut points: Vec<f64> =
            (0..count).map(|k| self.start + k as f64 * self.step).collect();
        points.push(self.stop);
        Ok(points)
    }
}
