//! Poincaré return map on the horizontal ray through P2 and limit-cycle
//! detection.

use serde::{Deserialize, Serialize};

use super::{integrate_flow, Direction, Flow, IntegratorConfig, Orbit, Stop, Terminal};
use crate::compactify::Chart;
use crate::error::{Error, NoReturnReason, Result};
use crate::model::{jacobian, p2_location, Params, Point2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CycleFound,
    ContractionToP2,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::CycleFound => "cycle-found",
            Verdict::ContractionToP2 => "contraction-to-P2",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// One seed on the section with its first return, when there is one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionSeed {
    pub x: f64,
    pub x_next: Option<f64>,
    /// True when the orbit reached P2 before returning.
    pub converged: bool,
}

impl SectionSeed {
    /// `x_next − x`, with an orbit absorbed by P2 counted as landing on it.
    pub fn displacement(&self, x2: f64) -> Option<f64> {
        match (self.x_next, self.converged) {
            (Some(n), _) => Some(n - self.x),
            (None, true) => Some(x2 - self.x),
            (None, false) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleResult {
    pub found: bool,
    pub verdict: Verdict,
    pub section_x: Option<f64>,
    pub period: Option<f64>,
    pub multiplier: Option<f64>,
    pub encloses_p2: bool,
    /// Outer bracketing seed (first crossing of P1's unstable separatrix,
    /// or a fallback).
    pub outer_seed: f64,
    pub seeds: Vec<SectionSeed>,
}

fn section_of(p: &Params) -> Result<Point2> {
    p2_location(p).ok_or(Error::NoInteriorEquilibrium)
}

fn no_return(t: Terminal) -> Error {
    Error::NoReturn(match t {
        Terminal::ConvergedToPoint => NoReturnReason::ConvergedToPoint,
        Terminal::Escaped => NoReturnReason::Escaped,
        Terminal::ChartBoundaryLoop => NoReturnReason::LeftAffineChart,
        Terminal::MaxTime | Terminal::HitSection => NoReturnReason::MaxTime,
    })
}

fn return_with(flow: &Flow, p2: Point2, x: f64, cfg: &IntegratorConfig) -> Result<(f64, f64)> {
    if !(x > p2.x) {
        return Err(Error::InvalidParams {
            name: "x",
            value: x.to_string(),
            reason: "section point must lie right of P2",
        });
    }
    let o = integrate_flow(
        flow,
        Chart::U3,
        Point2::new(x, p2.y),
        Direction::Forward,
        cfg,
        Stop::Section { y: p2.y, x_min: p2.x },
    )?;
    match o.terminal {
        Terminal::HitSection => {
            let s = o.last();
            Ok((s.point.x, s.t))
        }
        t => Err(no_return(t)),
    }
}

/// First return to the ray `{(s, y₂) : s > x₂}`: returns the abscissa of the
/// next upward crossing and the time of flight.
pub fn return_map(p: &Params, x: f64, cfg: &IntegratorConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    let p2 = section_of(p)?;
    let flow = Flow::new(p, Direction::Forward);
    return_with(&flow, p2, x, cfg)
}

/// Abscissa where P1's unstable separatrix first crosses the section.
pub fn outer_seed(p: &Params, cfg: &IntegratorConfig) -> Result<f64> {
    let p2 = section_of(p)?;
    let j = jacobian(p, Point2::new(1.0, 0.0));
    let lam = j[1][1];
    let (vx, vy) = (-1.0, 1.0 + p.b() + lam);
    let n = (vx * vx + vy * vy).sqrt();
    let start = Point2::new(1.0 + 1e-6 * vx / n, 1e-6 * vy / n);
    let flow = Flow::new(p, Direction::Forward);
    let o = integrate_flow(
        &flow,
        Chart::U3,
        start,
        Direction::Forward,
        cfg,
        Stop::Section { y: p2.y, x_min: p2.x },
    )?;
    match o.terminal {
        Terminal::HitSection => Ok(o.last().point.x),
        t => Err(no_return(t)),
    }
}

fn eval_seed(flow: &Flow, p2: Point2, x: f64, cfg: &IntegratorConfig) -> SectionSeed {
    match return_with(flow, p2, x, cfg) {
        Ok((n, _)) => SectionSeed {
            x,
            x_next: Some(n),
            converged: false,
        },
        Err(Error::NoReturn(NoReturnReason::ConvergedToPoint)) => SectionSeed {
            x,
            x_next: None,
            converged: true,
        },
        Err(_) => SectionSeed {
            x,
            x_next: None,
            converged: false,
        },
    }
}

const SEEDS: usize = 8;

/// Target for `|x_next − x|` at the refined fixed point.
const FIXED_TOL: f64 = 1e-9;

fn seed_ladder(x2: f64, outer: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let r = 1e-3f64.powf((n - 1 - k) as f64 / (n - 1) as f64);
            x2 + (outer - x2) * r
        })
        .collect()
}

/// Illinois regula falsi on `D(x) = P(x) − x`.
fn refine(
    flow: &Flow,
    p2: Point2,
    cfg: &IntegratorConfig,
    (mut a, mut fa): (f64, f64),
    (mut b, mut fb): (f64, f64),
) -> Result<(f64, f64)> {
    let mut side = 0i8;
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for _ in 0..100 {
        if best.1.abs() <= FIXED_TOL || (b - a).abs() <= 1e-13 {
            break;
        }
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !(x > a.min(b) && x < a.max(b)) {
            x = 0.5 * (a + b);
        }
        let (n, _) = return_with(flow, p2, x, cfg)?;
        let fx = n - x;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            break;
        }
        if (fx > 0.0) == (fb > 0.0) {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
    }
    Ok(best)
}

/// Total winding of a closed sample loop around `c`, in turns.
fn winding(points: &[Point2], c: Point2) -> f64 {
    let mut total = 0.0;
    for w in points.windows(2) {
        let a0 = (w[0].y - c.y).atan2(w[0].x - c.x);
        let a1 = (w[1].y - c.y).atan2(w[1].x - c.x);
        let mut d = a1 - a0;
        while d > std::f64::consts::PI {
            d -= 2.0 * std::f64::consts::PI;
        }
        while d < -std::f64::consts::PI {
            d += 2.0 * std::f64::consts::PI;
        }
        total += d;
    }
    total / (2.0 * std::f64::consts::PI)
}

/// Brackets a fixed point of the return map between seeds near P2 and the
/// outer seed, refines it, and measures its multiplier.
pub fn detect_limit_cycle(p: &Params, cfg: &IntegratorConfig) -> Result<CycleResult> {
    cfg.validate()?;
    let p2 = section_of(p)?;
    let flow = Flow::new(p, Direction::Forward);
    let outer = match outer_seed(p, cfg) {
        Ok(x) if x > p2.x => x,
        _ => 1f64.max(p2.x + 0.5),
    };
    let seeds: Vec<SectionSeed> = seed_ladder(p2.x, outer, SEEDS)
        .into_iter()
        .map(|x| eval_seed(&flow, p2, x, cfg))
        .collect();
    let disp: Vec<Option<f64>> = seeds.iter().map(|s| s.displacement(p2.x)).collect();

    let bracket = disp.windows(2).enumerate().find_map(|(k, w)| match (w[0], w[1]) {
        (Some(a), Some(b)) if (a > 0.0) != (b > 0.0) => Some(k),
        _ => None,
    });
    let mut res = CycleResult {
        found: false,
        verdict: Verdict::Inconclusive,
        section_x: None,
        period: None,
        multiplier: None,
        encloses_p2: false,
        outer_seed: outer,
        seeds: seeds.clone(),
    };
    // the cycle can sit so close to the separatrix loop that the outer seed
    // is already a fixed point to tolerance while everything inside expands
    let n = seeds.len();
    let outer_fixed = seeds[n - 1].x_next.is_some()
        && disp[n - 1].is_some_and(|d| d.abs() <= FIXED_TOL)
        && disp[n - 2].is_some_and(|d| d > 0.0);
    let x = if let Some(k) = bracket {
        // a converged inner seed never brackets a cycle: it only means P2 wins
        if seeds[k].x_next.is_none() || seeds[k + 1].x_next.is_none() {
            return Ok(res);
        }
        refine(
            &flow,
            p2,
            cfg,
            (seeds[k].x, disp[k].unwrap()),
            (seeds[k + 1].x, disp[k + 1].unwrap()),
        )?
        .0
    } else if outer_fixed {
        seeds[n - 1].x
    } else {
        if disp.iter().all(|d| matches!(d, Some(v) if *v < 0.0)) {
            res.verdict = Verdict::ContractionToP2;
        }
        return Ok(res);
    };
    let (_, period) = return_with(&flow, p2, x, cfg)?;
    let h = 1e-5 * (x - p2.x);
    let (xp, _) = return_with(&flow, p2, x + h, cfg)?;
    let (xm, _) = return_with(&flow, p2, x - h, cfg)?;
    let multiplier = ((xp - xm) / (2.0 * h)).abs();
    let lp = loop_samples(&flow, p2, x, cfg)?;
    let turns = winding(&lp, p2);
    res.found = true;
    res.verdict = Verdict::CycleFound;
    res.section_x = Some(x);
    res.period = Some(period);
    res.multiplier = Some(multiplier);
    res.encloses_p2 = (turns.abs() - 1.0).abs() < 0.1;
    Ok(res)
}

fn loop_samples(flow: &Flow, p2: Point2, x: f64, cfg: &IntegratorConfig) -> Result<Vec<Point2>> {
    let o: Orbit = integrate_flow(
        flow,
        Chart::U3,
        Point2::new(x, p2.y),
        Direction::Forward,
        cfg,
        Stop::Section { y: p2.y, x_min: p2.x },
    )?;
    if o.terminal != Terminal::HitSection {
        return Err(no_return(o.terminal));
    }
    Ok(o.samples.iter().map(|s| s.point).collect())
}

/// One revolution starting on the section at `x`, after `skip` returns.
/// Sampled with a step no larger than `cfg.max_step`.
pub fn cycle_loop(p: &Params, x: f64, skip: usize, cfg: &IntegratorConfig) -> Result<Vec<Point2>> {
    cfg.validate()?;
    let p2 = section_of(p)?;
    let flow = Flow::new(p, Direction::Forward);
    let mut x = x;
    for _ in 0..skip {
        x = return_with(&flow, p2, x, cfg)?.0;
    }
    loop_samples(&flow, p2, x, cfg)
}

/// Displacement `x_next − x` on `n` evenly spaced points of `(x₂, x_max]`.
pub fn displacement_scan(p: &Params, x_max: f64, n: usize, cfg: &IntegratorConfig) -> Result<Vec<SectionSeed>> {
    cfg.validate()?;
    let p2 = section_of(p)?;
    let flow = Flow::new(p, Direction::Forward);
    Ok((1..=n)
        .map(|k| {
            let x = p2.x + (x_max - p2.x) * k as f64 / n as f64;
            eval_seed(&flow, p2, x, cfg)
        })
        .collect())
}

fn seg_dist(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let l2 = dx * dx + dy * dy;
    let t = if l2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / l2).clamp(0.0, 1.0)
    };
    p.dist(&Point2::new(a.x + t * dx, a.y + t * dy))
}

fn directed(a: &[Point2], b: &[Point2]) -> f64 {
    a.iter()
        .map(|&p| {
            b.windows(2)
                .map(|w| seg_dist(p, w[0], w[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Hausdorff distance between two polylines (vertices against segments).
pub fn hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    directed(a, b).max(directed(b, a))
}
