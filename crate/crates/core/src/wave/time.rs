use crate::error::{Error, Result};

/// Uniform sampling `t_k = k·dt`, `k = 0..=steps`, with `steps·dt = T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_final: f64,
    dt: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t_final: f64, steps: usize) -> Result<Self> {
        if !(t_final > 0.0) || !t_final.is_finite() {
            return Err(Error::invalid(format!(
                "final time must be positive, got {t_final}"
            )));
        }
        if steps == 0 {
            return Err(Error::invalid("time grid needs at least one step"));
        }
        Ok(Self {
            t_final,
            dt: t_final / steps as f64,
            steps,
        })
    }

    /// Smallest number of uniform steps with `dt ≤ max_dt`.
    pub fn covering(t_final: f64, max_dt: f64) -> Result<Self> {
        if !(max_dt > 0.0) {
            return Err(Error::invalid(format!(
                "time step must be positive, got {max_dt}"
            )));
        }
        let steps = (t_final / max_dt - 1e-9).ceil().max(1.0) as usize;
        Self::new(t_final, steps)
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn samples(&self) -> usize {
        self.steps + 1
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            self.t_final
        } else {
            k as f64 * self.dt
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|k| self.time(k)).collect()
    }
}
