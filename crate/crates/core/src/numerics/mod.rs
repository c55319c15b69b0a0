//! Orbit integration on the Poincaré disc, return maps, limit-cycle
//! detection and the parameter-grid scanner.
//!
//! Integration runs in the affine chart while `‖(x, y)‖ ≤ R` and moves to
//! chart U1 or U2 beyond that, so orbits can be followed to the circle at
//! infinity. In the charts the time variable is the rescaled time of the
//! compactified field, so `t` is only physical inside the affine chart.

mod cycle;
mod dopri;
mod scan;

pub use cycle::{
    cycle_loop, detect_limit_cycle, displacement_scan, hausdorff, outer_seed, return_map, CycleResult, SectionSeed,
    Verdict,
};
pub use scan::{conjecture_scan, scan_admissible, scan_cell, write_scan_csv, GridAxis, GridSpec, ScanEvidence};

use serde::{Deserialize, Serialize};

use crate::compactify::{chart_transition, compactify, family_system, Chart, PolySystem};
use crate::error::{Error, Result};
use crate::model::{finite_singular_points, Kind, Params, Point2};
use dopri::State;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    pub max_time: f64,
    pub chart_switch_radius: f64,
    pub event_tol: f64,
    /// Distance to a finite equilibrium counted as convergence.
    pub converge_radius: f64,
    /// Distance to O1 (origin of U1) counted as escape to infinity.
    pub escape_radius: f64,
    /// Radius around O2 (origin of U2) that is never entered.
    pub o2_radius: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_step: 0.1,
            max_time: 5000.0,
            chart_switch_radius: 10.0,
            event_tol: 1e-12,
            converge_radius: 1e-8,
            escape_radius: 1e-6,
            o2_radius: 0.05,
            max_steps: 2_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if !(pos(self.abs_tol) && pos(self.rel_tol) && pos(self.event_tol)) {
            return Err(Error::InvalidConfig("tolerances must be positive"));
        }
        if !(pos(self.max_step) && pos(self.max_time)) {
            return Err(Error::InvalidConfig("max_step and max_time must be positive"));
        }
        if !(self.chart_switch_radius > 1.0) {
            return Err(Error::InvalidConfig("chart_switch_radius must exceed 1"));
        }
        if !(pos(self.converge_radius) && pos(self.escape_radius) && pos(self.o2_radius)) {
            return Err(Error::InvalidConfig("stopping radii must be positive"));
        }
        Ok(())
    }

    /// Same configuration with both tolerances scaled by `f`.
    pub fn scaled_tolerances(&self, f: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * f,
            rel_tol: self.rel_tol * f,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Terminal {
    MaxTime,
    ConvergedToPoint,
    Escaped,
    HitSection,
    ChartBoundaryLoop,
}

/// Stopping rule in addition to the terminal conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stop {
    Never,
    /// Upward crossing of the line `y = y` at abscissa `> x_min` (affine
    /// chart only).
    Section {
        y: f64,
        x_min: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub chart: Chart,
    pub point: Point2,
}

impl Sample {
    /// The sample in affine coordinates, when it is not on the equator.
    pub fn affine(&self) -> Option<Point2> {
        chart_transition(self.chart, Chart::U3, self.point).ok()
    }

    pub fn disc(&self) -> Point2 {
        crate::compactify::to_disc(self.chart, self.point)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub direction: Direction,
    pub samples: Vec<Sample>,
    pub terminal: Terminal,
    /// The equilibrium reached when `terminal` is converged-to-point.
    pub limit_point: Option<Point2>,
}

impl Orbit {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("orbit has at least the start sample")
    }
}

/// The family field in the three charts, with the time direction folded in.
#[derive(Debug, Clone)]
pub(crate) struct Flow {
    affine: PolySystem<f64>,
    u1: PolySystem<f64>,
    u2: PolySystem<f64>,
    sign: f64,
    /// Finite equilibria, flagged when they are saddles.
    equilibria: Vec<(Point2, bool)>,
}

impl Flow {
    pub fn new(p: &Params, direction: Direction) -> Self {
        let affine = family_system(&p.b(), &p.c(), &p.delta());
        let u1 = compactify(&affine, Chart::U1).expect("cubic field").system;
        let u2 = compactify(&affine, Chart::U2).expect("cubic field").system;
        Self {
            affine,
            u1,
            u2,
            sign: match direction {
                Direction::Forward => 1.0,
                Direction::Backward => -1.0,
            },
            equilibria: finite_singular_points(p)
                .into_iter()
                .map(|s| (s.location, s.kind == Kind::Saddle))
                .collect(),
        }
    }

    fn system(&self, chart: Chart) -> &PolySystem<f64> {
        match chart {
            Chart::U1 => &self.u1,
            Chart::U2 => &self.u2,
            Chart::U3 => &self.affine,
        }
    }

    pub fn eval(&self, chart: Chart, s: &State) -> State {
        let (a, b) = self.system(chart).eval(&s[0], &s[1]);
        [self.sign * a, self.sign * b]
    }
}

/// Result of one accepted step.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Accepted {
    pub t0: f64,
    pub y0: State,
    pub k0: State,
    pub h: f64,
    pub chart: Chart,
}

/// Adaptive Dormand–Prince integrator over the charts.
pub(crate) struct Integrator<'a> {
    flow: &'a Flow,
    cfg: &'a IntegratorConfig,
    pub t: f64,
    pub chart: Chart,
    pub y: State,
    k: State,
    h: f64,
    steps: usize,
    switches: usize,
}

const MAX_CHART_SWITCHES: usize = 64;

impl<'a> Integrator<'a> {
    pub fn new(flow: &'a Flow, cfg: &'a IntegratorConfig, chart: Chart, start: Point2) -> Self {
        let y = [start.x, start.y];
        let k = flow.eval(chart, &y);
        let mut it = Self {
            flow,
            cfg,
            t: 0.0,
            chart,
            y,
            k,
            h: 0.0,
            steps: 0,
            switches: 0,
        };
        it.h = it.initial_step();
        it
    }

    fn initial_step(&self) -> f64 {
        let sc = |i: usize| self.cfg.abs_tol + self.cfg.rel_tol * self.y[i].abs();
        let d0 = ((self.y[0] / sc(0)).powi(2) + (self.y[1] / sc(1)).powi(2)).sqrt() / 2f64.sqrt();
        let d1 = ((self.k[0] / sc(0)).powi(2) + (self.k[1] / sc(1)).powi(2)).sqrt() / 2f64.sqrt();
        let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h.min(self.cfg.max_step)
    }

    pub fn point(&self) -> Point2 {
        Point2::new(self.y[0], self.y[1])
    }

    /// Takes one accepted step, returning the data needed to re-step inside
    /// it for event location.
    pub fn advance(&mut self) -> Result<Accepted> {
        let f = |s: &State| self.flow.eval(self.chart, s);
        loop {
            let h = self.h.min(self.cfg.max_step);
            if h < 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::StepUnderflow {
                    t: self.t,
                    chart: self.chart,
                    state: self.point(),
                });
            }
            let s = dopri::step(&f, &self.y, &self.k, h);
            let e = dopri::error_norm(&self.y, &s, self.cfg.abs_tol, self.cfg.rel_tol);
            let finite = s.y.iter().all(|v| v.is_finite()) && e.is_finite();
            if finite && e <= 1.0 {
                let acc = Accepted {
                    t0: self.t,
                    y0: self.y,
                    k0: self.k,
                    h,
                    chart: self.chart,
                };
                self.t += h;
                self.y = s.y;
                self.k = s.k7;
                let fac = if e == 0.0 {
                    5.0
                } else {
                    (0.9 * e.powf(-0.2)).clamp(0.2, 5.0)
                };
                self.h = h * fac;
                self.steps += 1;
                return Ok(acc);
            }
            let fac = if finite {
                (0.9 * e.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            self.h = h * fac;
        }
    }

    /// State at `t0 + θ` inside an accepted step, by re-stepping.
    pub fn restep(&self, acc: &Accepted, theta: f64) -> State {
        let f = |s: &State| self.flow.eval(acc.chart, s);
        dopri::step(&f, &acc.y0, &acc.k0, theta).y
    }

    /// Moves to another chart when the current one is badly scaled. Returns
    /// true when a switch happened.
    pub fn maybe_switch(&mut self) -> Result<bool> {
        let r = self.cfg.chart_switch_radius;
        let pt = self.point();
        let target = match self.chart {
            Chart::U3 if pt.norm() > r => Some(if pt.x.abs() >= pt.y.abs() { Chart::U1 } else { Chart::U2 }),
            Chart::U1 | Chart::U2 => {
                // back to affine once well inside, otherwise swap charts when
                // the ratio coordinate grows
                let aff = chart_transition(self.chart, Chart::U3, pt).ok();
                match aff {
                    Some(a) if a.norm() < 0.5 * r => Some(Chart::U3),
                    _ if pt.x.abs() > 2.0 => Some(if self.chart == Chart::U1 { Chart::U2 } else { Chart::U1 }),
                    _ => None,
                }
            }
            _ => None,
        };
        let Some(to) = target else { return Ok(false) };
        let q = chart_transition(self.chart, to, pt)?;
        self.chart = to;
        self.y = [q.x, q.y];
        self.k = self.flow.eval(to, &self.y);
        self.h = self.initial_step();
        self.switches += 1;
        Ok(true)
    }

    /// Terminal condition reached at the current state, if any.
    pub fn terminal(&self) -> Option<(Terminal, Option<Point2>)> {
        let pt = self.point();
        match self.chart {
            Chart::U3 => {
                // a saddle is only reached along an invariant axis; interior
                // orbits can pass arbitrarily close and still leave
                let on_axis = pt.x == 0.0 || pt.y == 0.0;
                for (e, saddle) in &self.flow.equilibria {
                    if (!saddle || on_axis) && pt.dist(e) < self.cfg.converge_radius {
                        return Some((Terminal::ConvergedToPoint, Some(*e)));
                    }
                }
            }
            Chart::U1 => {
                if pt.norm() < self.cfg.escape_radius {
                    return Some((Terminal::Escaped, None));
                }
            }
            Chart::U2 => {
                if pt.norm() < self.cfg.o2_radius {
                    return Some((Terminal::ChartBoundaryLoop, None));
                }
            }
        }
        if self.switches > MAX_CHART_SWITCHES {
            return Some((Terminal::ChartBoundaryLoop, None));
        }
        if self.t >= self.cfg.max_time || self.steps >= self.cfg.max_steps {
            return Some((Terminal::MaxTime, None));
        }
        None
    }
}

/// Locates an upward crossing of `y = level` inside an accepted step by
/// bisection on the sub-step length. Returns the sub-step and the state.
pub(crate) fn locate_crossing(it: &Integrator<'_>, acc: &Accepted, level: f64, tol: f64) -> (f64, State) {
    let (mut lo, mut hi) = (0.0, acc.h);
    let mut best = it.y;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let s = it.restep(acc, mid);
        if s[1] < level {
            lo = mid;
        } else {
            hi = mid;
            best = s;
        }
        if (best[1] - level).abs() <= tol || hi - lo <= 1e-15 * acc.t0.abs().max(1.0) {
            break;
        }
    }
    (hi, best)
}

fn initial_chart(start: Point2, r: f64) -> (Chart, Point2) {
    if start.norm() <= r {
        (Chart::U3, start)
    } else if start.x.abs() >= start.y.abs() {
        (Chart::U1, Point2::new(start.y / start.x, 1.0 / start.x))
    } else {
        (Chart::U2, Point2::new(start.x / start.y, 1.0 / start.y))
    }
}

/// Integrates the family from an affine starting point.
pub fn integrate(p: &Params, start: Point2, direction: Direction, cfg: &IntegratorConfig, stop: Stop) -> Result<Orbit> {
    cfg.validate()?;
    if !(start.x >= 0.0 && start.y >= 0.0) {
        return Err(Error::InvalidParams {
            name: "start",
            value: format!("({}, {})", start.x, start.y),
            reason: "must lie in the closed positive quadrant",
        });
    }
    let flow = Flow::new(p, direction);
    let (chart, local) = initial_chart(start, cfg.chart_switch_radius);
    integrate_flow(&flow, chart, local, direction, cfg, stop)
}

pub(crate) fn integrate_flow(
    flow: &Flow,
    chart: Chart,
    start: Point2,
    direction: Direction,
    cfg: &IntegratorConfig,
    stop: Stop,
) -> Result<Orbit> {
    let mut it = Integrator::new(flow, cfg, chart, start);
    let mut samples = vec![Sample {
        t: 0.0,
        chart,
        point: start,
    }];
    let finish = |samples: Vec<Sample>, terminal, limit_point| Orbit {
        direction,
        samples,
        terminal,
        limit_point,
    };
    if let Some((term, lp)) = it.terminal() {
        return Ok(finish(samples, term, lp));
    }
    loop {
        let acc = it.advance()?;
        if let (Stop::Section { y: level, x_min }, Chart::U3) = (stop, acc.chart) {
            if acc.y0[1] < level && it.y[1] >= level {
                let (dt, s) = locate_crossing(&it, &acc, level, cfg.event_tol);
                if s[0] > x_min {
                    samples.push(Sample {
                        t: acc.t0 + dt,
                        chart: Chart::U3,
                        point: Point2::new(s[0], s[1]),
                    });
                    return Ok(finish(samples, Terminal::HitSection, None));
                }
            }
        }
        samples.push(Sample {
            t: it.t,
            chart: it.chart,
            point: it.point(),
        });
        if let Some((term, lp)) = it.terminal() {
            return Ok(finish(samples, term, lp));
        }
        if it.maybe_switch()? {
            // same instant, so restate the last sample in the new chart
            *samples.last_mut().expect("orbit has at least the start sample") = Sample {
                t: it.t,
                chart: it.chart,
                point: it.point(),
            };
            if let Some((term, lp)) = it.terminal() {
                return Ok(finish(samples, term, lp));
            }
        }
    }
}
