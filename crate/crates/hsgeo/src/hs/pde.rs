//! Method-of-lines integrator for the velocity form of the geodesic flow,
//! used as an oracle independent of the straight-line construction.
//!
//! The evolution is `u_t = -u u_x + 1/2 * prefix integral of u_x^2`.
//! Spatial derivatives use the fourth-order centered stencil (one-sided
//! rows of the same order at the edges), the prefix integral uses
//! cumulative Simpson, and time stepping is classical fourth-order
//! Runge-Kutta capped at `dt <= 0.1 h / max|u|`. Alongside the velocity
//! the integrator transports the flow map through `phi_t = u(t, phi)`,
//! interpolating the velocity off-grid with the guarded cubic, so a run
//! yields both `u(t)` snapshots and the flow positions to compare with
//! the straight-line construction.
//!
//! Deliberately low-tech: every ingredient is a plain finite-difference
//! or quadrature rule, so its errors are independent of the quadrature
//! route the transform pair takes.

use crate::error::{Error, Result};
use crate::numerics::{centered_stencil, cumulative_simpson, fornberg_weights, simpson, HermiteGrid};
use crate::spaces::GridFunction;

use super::{geodesic_ivp, HsDiffeo};

/// Snapshots of one velocity-form run.
#[derive(Debug, Clone)]
pub struct PdeRun {
    pub times: Vec<f64>,
    /// Velocity samples per snapshot.
    pub velocity: Vec<Vec<f64>>,
    /// Flow positions `phi(t, x_i)` per snapshot (started at the identity).
    pub flow: Vec<Vec<f64>>,
    pub window: (f64, f64),
    pub step: f64,
    /// Time step actually used (the request, shrunk to divide `t_final`).
    pub dt: f64,
    /// Whether the slope grew past a thousand times its initial maximum,
    /// the near-blow-up warning: results past that point are
    /// untrustworthy.
    pub near_blowup: bool,
    pub initial_max_slope: f64,
    pub final_max_slope: f64,
}

/// Fourth-order first-derivative operator on a uniform grid: centered in
/// the interior, one-sided rows of the same order at the two nodes on
/// each edge.
struct D1 {
    interior: Vec<f64>,
    edge: Vec<Vec<f64>>,
}

impl D1 {
    fn new(h: f64) -> Self {
        let (_, interior) = centered_stencil(1, h);
        let xs: Vec<f64> = (0..5).map(|i| i as f64 * h).collect();
        let edge = (0..2)
            .map(|i| fornberg_weights(i as f64 * h, &xs, 1).swap_remove(1))
            .collect();
        D1 { interior, edge }
    }

    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let n = u.len();
        for i in 0..2 {
            let mut left = 0.0;
            let mut right = 0.0;
            for (j, &w) in self.edge[i].iter().enumerate() {
                left += w * u[j];
                right -= w * u[n - 1 - j];
            }
            out[i] = left;
            out[n - 1 - i] = right;
        }
        let w = &self.interior;
        for i in 2..n - 2 {
            out[i] = w[0] * u[i - 2] + w[1] * u[i - 1] + w[2] * u[i] + w[3] * u[i + 1]
                + w[4] * u[i + 2];
        }
    }
}

/// Right-hand side of the velocity equation; also leaves `u_x` in `ux`
/// for the flow interpolant.
fn rhs(d1: &D1, h: f64, u: &[f64], ux: &mut [f64], du: &mut [f64]) {
    d1.apply(u, ux);
    let sq: Vec<f64> = ux.iter().map(|&v| v * v).collect();
    let prefix = cumulative_simpson(&sq, h);
    for i in 0..u.len() {
        du[i] = -u[i] * ux[i] + 0.5 * prefix[i];
    }
}

/// Largest admissible step at the current velocity.
fn cfl_cap(h: f64, u: &[f64]) -> f64 {
    let m = u.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    if m == 0.0 {
        f64::INFINITY
    } else {
        0.1 * h / m
    }
}

/// The near-blow-up trigger: the slope maximum grew past a thousand times
/// its initial value (a zero initial slope never trips it).
fn slope_flag(initial: f64, current: f64) -> bool {
    initial > 0.0 && current > 1e3 * initial
}

/// Evaluates the velocity at off-grid flow positions, clamped to the
/// window (constant extension beyond the edges, where the velocity is
/// flat by the decay precondition).
fn transport(
    window: (f64, f64),
    h: f64,
    u: &[f64],
    ux: &[f64],
    positions: &[f64],
    out: &mut [f64],
) {
    let interp = HermiteGrid::new(window.0, h, u, ux);
    for (o, &p) in out.iter_mut().zip(positions) {
        *o = interp.eval(p.clamp(window.0, window.1));
    }
}

/// Integrates the velocity equation from `u0` to `t_final`, recording the
/// requested number of evenly spaced snapshots (always including the
/// initial and final states).
///
/// `u0` must decay at both window edges; `dt` must satisfy the step cap
/// at every step of the run, or the integration stops with an error.
pub fn pde_oracle(
    u0: &GridFunction,
    t_final: f64,
    dt: f64,
    snapshots: usize,
) -> Result<PdeRun> {
    if !(t_final > 0.0) || !(dt > 0.0) {
        return Err(Error::Domain(
            "t_final and dt must be positive".to_string(),
        ));
    }
    if snapshots < 2 {
        return Err(Error::Domain("need at least two snapshots".to_string()));
    }
    let window = u0.window();
    let h = u0.step();
    let n = u0.len();
    let start = u0.samples();
    let peak = u0.peak();
    if peak > 0.0 {
        let edge = start[0].abs().max(start[n - 1].abs());
        if edge > 1e-8 * peak {
            return Err(Error::Domain(format!(
                "initial velocity must decay in-window: edge value {edge:.3e} \
                 against peak {peak:.3e}"
            )));
        }
    }
    let cap = cfl_cap(h, start);
    if dt > cap {
        return Err(Error::Numerical(format!(
            "CFL violation at the start: dt = {dt:.3e} exceeds 0.1 h / max|u| = {cap:.3e}"
        )));
    }
    let steps = (t_final / dt).ceil().max(1.0) as usize;
    let dt = t_final / steps as f64;

    let d1 = D1::new(h);
    let mut u = start.to_vec();
    let mut pos: Vec<f64> = (0..n).map(|i| u0.x(i)).collect();

    let mut ux = vec![0.0; n];
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut l1 = vec![0.0; n];
    let mut l2 = vec![0.0; n];
    let mut l3 = vec![0.0; n];
    let mut l4 = vec![0.0; n];
    let mut u_stage = vec![0.0; n];
    let mut pos_stage = vec![0.0; n];

    d1.apply(&u, &mut ux);
    let initial_max_slope = ux.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let mut max_slope = initial_max_slope;
    let mut near_blowup = false;

    let snap_step: Vec<usize> = (0..snapshots)
        .map(|j| ((j * steps) as f64 / (snapshots - 1) as f64).round() as usize)
        .collect();
    let mut times = Vec::new();
    let mut velocity = Vec::new();
    let mut flow = Vec::new();
    let mut record = |step_idx: usize, u: &[f64], pos: &[f64]| {
        times.push(step_idx as f64 * dt);
        velocity.push(u.to_vec());
        flow.push(pos.to_vec());
    };
    if snap_step.contains(&0) {
        record(0, &u, &pos);
    }

    for step_idx in 1..=steps {
        let cap = cfl_cap(h, &u);
        if dt > cap {
            return Err(Error::Numerical(format!(
                "CFL violation at t = {:.6}: dt = {dt:.3e} exceeds 0.1 h / max|u| = {cap:.3e}",
                (step_idx - 1) as f64 * dt
            )));
        }

        rhs(&d1, h, &u, &mut ux, &mut k1);
        transport(window, h, &u, &ux, &pos, &mut l1);

        for i in 0..n {
            u_stage[i] = u[i] + 0.5 * dt * k1[i];
            pos_stage[i] = pos[i] + 0.5 * dt * l1[i];
        }
        rhs(&d1, h, &u_stage, &mut ux, &mut k2);
        transport(window, h, &u_stage, &ux, &pos_stage, &mut l2);

        for i in 0..n {
            u_stage[i] = u[i] + 0.5 * dt * k2[i];
            pos_stage[i] = pos[i] + 0.5 * dt * l2[i];
        }
        rhs(&d1, h, &u_stage, &mut ux, &mut k3);
        transport(window, h, &u_stage, &ux, &pos_stage, &mut l3);

        for i in 0..n {
            u_stage[i] = u[i] + dt * k3[i];
            pos_stage[i] = pos[i] + dt * l3[i];
        }
        rhs(&d1, h, &u_stage, &mut ux, &mut k4);
        transport(window, h, &u_stage, &ux, &pos_stage, &mut l4);

        let sixth = dt / 6.0;
        for i in 0..n {
            u[i] += sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            pos[i] += sixth * (l1[i] + 2.0 * l2[i] + 2.0 * l3[i] + l4[i]);
        }

        d1.apply(&u, &mut ux);
        max_slope = ux.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if slope_flag(initial_max_slope, max_slope) {
            near_blowup = true;
        }

        if snap_step.contains(&step_idx) {
            record(step_idx, &u, &pos);
        }
    }

    Ok(PdeRun {
        times,
        velocity,
        flow,
        window,
        step: h,
        dt,
        near_blowup,
        initial_max_slope,
        final_max_slope: max_slope,
    })
}

/// Sup and L2 gaps between the oracle's flow snapshots and the
/// straight-line construction shot from the identity with tangent `u0`:
/// one `(t, sup, l2)` row per snapshot.
pub fn compare_with_line(run: &PdeRun, u0: &GridFunction) -> Result<Vec<(f64, f64, f64)>> {
    let id = HsDiffeo::identity(run.window, run.step)?;
    let mut rows = Vec::with_capacity(run.times.len());
    for (k, &t) in run.times.iter().enumerate() {
        let line = if t == 0.0 {
            id.clone()
        } else {
            geodesic_ivp(&id, u0, t)?
        };
        let reference = line.perturbation().samples();
        let mut sup = 0.0f64;
        let mut gap_sq = Vec::with_capacity(reference.len());
        for i in 0..reference.len() {
            let x = run.window.0 + i as f64 * run.step;
            let gap = (run.flow[k][i] - x) - reference[i];
            sup = sup.max(gap.abs());
            gap_sq.push(gap * gap);
        }
        rows.push((t, sup, simpson(&gap_sq, run.step).sqrt()));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{DecayClaim, Descriptor};

    #[test]
    fn zero_velocity_stays_identically_zero() {
        let window: (f64, f64) = (-3.0, 3.0);
        let step: f64 = 0.01;
        let n = ((window.1 - window.0) / step).round() as usize + 1;
        let u0 =
            GridFunction::from_samples(window, step, vec![0.0; n], DecayClaim::D).unwrap();
        let run = pde_oracle(&u0, 0.5, 1e-3, 5).unwrap();
        assert_eq!(run.times.len(), 5);
        assert_eq!(run.times[0], 0.0);
        assert!((run.times.last().unwrap() - 0.5).abs() < 1e-12);
        for snapshot in &run.velocity {
            assert!(snapshot.iter().all(|&v| v == 0.0));
        }
        for (k, snapshot) in run.flow.iter().enumerate() {
            for (i, &p) in snapshot.iter().enumerate() {
                let x = window.0 + i as f64 * step;
                assert_eq!(p, x, "flow moved at snapshot {k}, node {i}");
            }
        }
        assert!(!run.near_blowup);
        assert_eq!(run.initial_max_slope, 0.0);
    }

    #[test]
    fn the_oracle_tracks_the_straight_line_flow() {
        let window = (-7.0, 9.0);
        let step = 5e-3;
        let u0 = GridFunction::from_descriptor(
            Descriptor::GaussianBump {
                amp: 0.4,
                center: 0.0,
                width: 1.0,
            },
            window,
            step,
            DecayClaim::S,
        )
        .unwrap();
        let run = pde_oracle(&u0, 1.0, 5e-4, 3).unwrap();
        assert!(!run.near_blowup);
        let rows = compare_with_line(&run, &u0).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].1 < 1e-14, "t = 0 gap {:.3e}", rows[0].1);
        for &(t, sup, l2) in &rows {
            assert!(sup < 1e-4, "sup gap {sup:.3e} at t = {t}");
            assert!(l2 <= sup * 5.0, "l2 {l2:.3e} vs sup {sup:.3e}");
        }
    }

    #[test]
    fn oversized_steps_are_rejected() {
        let window = (-7.0, 9.0);
        let step = 5e-3;
        let u0 = GridFunction::from_descriptor(
            Descriptor::GaussianBump {
                amp: 0.4,
                center: 0.0,
                width: 1.0,
            },
            window,
            step,
            DecayClaim::S,
        )
        .unwrap();
        let err = pde_oracle(&u0, 0.5, 0.01, 3).unwrap_err();
        match err {
            Error::Numerical(msg) => assert!(msg.contains("CFL"), "{msg}"),
            other => panic!("expected a step error, got {other:?}"),
        }
    }

    #[test]
    fn the_slope_flag_trips_past_the_threshold() {
        assert!(!slope_flag(0.0, 5.0e7));
        assert!(!slope_flag(1.0, 999.0));
        assert!(!slope_flag(1.0, 1000.0));
        assert!(slope_flag(1.0, 1000.1));
        assert!(slope_flag(0.5, 501.0));
    }
}
