//! Boundary observation signals and their `L²(0, T)` norms.

use std::path::Path;

use super::newmark::Trajectory;
use crate::error::{check_len, Error, Result};
use crate::fem::OperatorSet;
use crate::output::{fmt_f64, write_csv};

/// Composite trapezoid weights for `samples` equispaced points.
pub fn trapezoid_weights(samples: usize, dt: f64) -> Vec<f64> {
    let mut w = vec![dt; samples];
    if let Some(first) = w.first_mut() {
        *first = 0.5 * dt;
    }
    if samples > 1 {
        w[samples - 1] = 0.5 * dt;
    }
    w
}

/// Two-component boundary series sampled every `dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSignal {
    dt: f64,
    y1: Vec<f64>,
    y2: Vec<f64>,
}

impl ObservationSignal {
    pub fn new(dt: f64, y1: Vec<f64>, y2: Vec<f64>) -> Result<Self> {
        check_len("second component", y2.len(), y1.len())?;
        if y1.is_empty() {
            return Err(Error::invalid("empty signal"));
        }
        Ok(Self { dt, y1, y2 })
    }

    pub fn zeros(dt: f64, samples: usize) -> Self {
        Self {
            dt,
            y1: vec![0.0; samples],
            y2: vec![0.0; samples],
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.y1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y1.is_empty()
    }

    pub fn y1(&self) -> &[f64] {
        &self.y1
    }

    pub fn y2(&self) -> &[f64] {
        &self.y2
    }

    pub fn y1_mut(&mut self) -> &mut [f64] {
        &mut self.y1
    }

    pub fn y2_mut(&mut self) -> &mut [f64] {
        &mut self.y2
    }

    pub fn weights(&self) -> Vec<f64> {
        trapezoid_weights(self.len(), self.dt)
    }

    /// `(∫ y1², ∫ y2²)` by the trapezoid rule.
    pub fn component_norms_sq(&self) -> (f64, f64) {
        self.weights()
            .iter()
            .zip(self.y1.iter().zip(&self.y2))
            .fold((0.0, 0.0), |(s1, s2), (w, (a, b))| {
                (s1 + w * a * a, s2 + w * b * b)
            })
    }

    /// `∫ (y1² + y2²)`.
    pub fn norm_sq(&self) -> f64 {
        let (a, b) = self.component_norms_sq();
        a + b
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(Self {
            dt: self.dt,
            y1: self.y1.iter().zip(&other.y1).map(|(a, b)| a - b).collect(),
            y2: self.y2.iter().zip(&other.y2).map(|(a, b)| a - b).collect(),
        })
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        check_len("signal", other.len(), self.len())?;
        if (self.dt - other.dt).abs() > 1e-12 * self.dt {
            return Err(Error::invalid(format!(
                "signals sampled at different steps ({} vs {})",
                self.dt, other.dt
            )));
        }
        Ok(())
    }

    /// Header `t,y1,y2`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let n = self.len();
        let t_final = self.dt * (n - 1) as f64;
        let rows = (0..n).map(|k| {
            let t = if k + 1 == n {
                t_final
            } else {
                k as f64 * self.dt
            };
            [fmt_f64(t), fmt_f64(self.y1[k]), fmt_f64(self.y2[k])]
        });
        write_csv(path, &["t", "y1", "y2"], rows)
    }
}

/// `(w₁/h, w₁'/2)` along a trajectory.
pub fn boundary_trace(ops: &OperatorSet, traj: &Trajectory) -> ObservationSignal {
    let h = ops.h();
    ObservationSignal {
        dt: traj.time_grid().dt(),
        y1: traj.states().iter().map(|s| s.w[0] / h).collect(),
        y2: traj.states().iter().map(|s| s.v[0] / 2.0).collect(),
    }
}

/// `((v₁' + u₁)/h, (v₁'' + u₁')/2)`, where `v` carries the source with zero
/// data and `u` the free evolution of the initial data.
pub fn observation_y(
    ops: &OperatorSet,
    v_traj: &Trajectory,
    u_traj: Option<&Trajectory>,
) -> Result<ObservationSignal> {
    let h = ops.h();
    let mut y1: Vec<f64> = v_traj.states().iter().map(|s| s.v[0]).collect();
    let mut y2: Vec<f64> = v_traj.states().iter().map(|s| s.a[0]).collect();
    if let Some(u) = u_traj {
        if u.time_grid() != v_traj.time_grid() {
            return Err(Error::invalid(
                "source and data trajectories use different time grids",
            ));
        }
        for (k, s) in u.states().iter().enumerate() {
            y1[k] += s.w[0];
            y2[k] += s.v[0];
        }
    }
    for x in &mut y1 {
        *x /= h;
    }
    for x in &mut y2 {
        *x /= 2.0;
    }
    Ok(ObservationSignal {
        dt: v_traj.time_grid().dt(),
        y1,
        y2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::profile::Constant;
    use crate::fem::{assemble, Grid};
    use crate::wave::{integrate, Forcing, TimeGrid};
    use std::sync::Arc;

    fn zero_ops(n: usize) -> OperatorSet {
        assemble(Grid::new(n).unwrap(), Arc::new(Constant::new(0.0))).unwrap()
    }

    #[test]
    fn weights_sum_to_length() {
        let w = trapezoid_weights(11, 0.1);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(trapezoid_weights(1, 0.1), vec![0.05]);
    }

    #[test]
    fn zero_data_gives_zero_signal() {
        let o = zero_ops(5);
        let tg = TimeGrid::new(1.0, 5).unwrap();
        let t = integrate(
            &o,
            &[0.0; 5],
            &[0.0; 5],
            Some(&Forcing::steady(vec![0.0; 5])),
            tg,
        )
        .unwrap();
        assert_eq!(boundary_trace(&o, &t), ObservationSignal::zeros(0.2, 6));
        assert_eq!(
            observation_y(&o, &t, None).unwrap(),
            ObservationSignal::zeros(0.2, 6)
        );
    }

    #[test]
    fn initial_acceleration_observed() {
        let o = zero_ops(3);
        let tg = TimeGrid::new(1.0, 4).unwrap();
        let t = integrate(
            &o,
            &[0.0; 3],
            &[0.0; 3],
            Some(&Forcing::steady(vec![1.0, 0.0, 0.0])),
            tg,
        )
        .unwrap();
        let y = observation_y(&o, &t, None).unwrap();
        assert_eq!(y.y2()[0], 0.5);
    }

    #[test]
    fn observation_matches_trace_of_velocity() {
        let o = zero_ops(9);
        let tg = TimeGrid::new(2.0, 40).unwrap();
        let f: Vec<f64> = (1..=9).map(|j| (j as f64).sin()).collect();
        let t = integrate(&o, &[0.0; 9], &[0.0; 9], Some(&Forcing::steady(f)), tg).unwrap();
        let y = observation_y(&o, &t, None).unwrap();
        for (k, s) in t.states().iter().enumerate() {
            assert!((y.y1()[k] - s.v[0] / o.h()).abs() <= 1e-10 * (1.0 + y.y1()[k].abs()));
            assert!((y.y2()[k] - s.a[0] / 2.0).abs() <= 1e-10 * (1.0 + y.y2()[k].abs()));
        }
    }

    #[test]
    fn mismatched_grids_rejected() {
        let o = zero_ops(3);
        let a = integrate(
            &o,
            &[0.0; 3],
            &[0.0; 3],
            None,
            TimeGrid::new(1.0, 4).unwrap(),
        )
        .unwrap();
        let b = integrate(
            &o,
            &[0.0; 3],
            &[0.0; 3],
            None,
            TimeGrid::new(1.0, 5).unwrap(),
        )
        .unwrap();
        assert!(observation_y(&o, &a, Some(&b)).is_err());
    }

    #[test]
    fn trapezoid_norm_of_cosine() {
        // ∫₀³ cos²(2t) dt = 3/2 + sin(12)/8.
        let n = 3000;
        let dt = 3.0 / n as f64;
        let y1: Vec<f64> = (0..=n).map(|k| (2.0 * k as f64 * dt).cos()).collect();
        let s = ObservationSignal::new(dt, y1, vec![0.0; n + 1]).unwrap();
        let exact = 1.5 + 12f64.sin() / 8.0;
        assert!((s.norm_sq() - exact).abs() < 1e-5);
    }
}
