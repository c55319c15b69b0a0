//! Global phase portraits on the positive quadrant of the Poincaré disc.
//!
//! The portrait letter always comes from the parameter classification. The
//! integrated separatrices and representative orbits are corroboration: any
//! disagreement is reported as a warning, never used to relabel.

pub mod cli;
mod report;
mod svg;

pub use report::{write_report, SCHEMA_VERSION};
pub use svg::{render_svg, SvgStyle};

use serde::{Deserialize, Serialize};

use crate::compactify::{family_infinite_points, to_disc, Chart, InfinitePoint};
use crate::local::{dulac_check, hopf_analysis, uniqueness_check, DulacReport, UniquenessReport};
use crate::model::{
    classify_case, discriminants, finite_singular_points, jacobian, p2_location, CaseLabel, Discriminants, Kind,
    Params, Point2, PointName, Portrait, SingularPoint, Status,
};
use crate::numerics::{
    cycle_loop, detect_limit_cycle, integrate, outer_seed, CycleResult, Direction, IntegratorConfig, Orbit, Stop,
    Terminal,
};

/// Projection of the closed quadrant onto the quarter disc
/// `(x, y) ↦ (x, y)/√(1 + x² + y²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DiscProjection;

impl DiscProjection {
    pub fn project(&self, p: Point2) -> Point2 {
        to_disc(Chart::U3, p)
    }

    /// Viewport in disc coordinates: `[0, 1] × [0, 1]`.
    pub fn viewport(&self) -> (Point2, Point2) {
        (Point2::new(0.0, 0.0), Point2::new(1.0, 1.0))
    }
}

/// α- or ω-limit set of an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Limit {
    P0,
    P1,
    P2,
    O1,
    O2,
    #[serde(rename = "cycle")]
    Cycle,
    #[serde(rename = "unknown")]
    Unknown,
}

impl std::fmt::Display for Limit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Limit::Cycle => f.write_str("cycle"),
            Limit::Unknown => f.write_str("unknown"),
            other => write!(f, "{other:?}"),
        }
    }
}

impl From<PointName> for Limit {
    fn from(n: PointName) -> Self {
        match n {
            PointName::P0 => Limit::P0,
            PointName::P1 => Limit::P1,
            PointName::P2 => Limit::P2,
            PointName::O1 => Limit::O1,
            PointName::O2 => Limit::O2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    Stable,
    Unstable,
}

/// An integrated orbit with its limit sets and a decimated polyline in disc
/// coordinates, ordered in forward time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaggedOrbit {
    /// Saddle the separatrix belongs to; `None` for representative orbits.
    pub origin: Option<PointName>,
    pub manifold: Option<Manifold>,
    pub seed: Point2,
    pub alpha: Limit,
    pub omega: Limit,
    pub forward_terminal: Option<Terminal>,
    pub backward_terminal: Option<Terminal>,
    pub disc_path: Vec<Point2>,
}

/// Hopf data of the interior equilibrium at the current `(c, δ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopfSummary {
    pub b0: f64,
    pub omega0: f64,
    pub dmu_db_at_b0: f64,
    pub ell1: f64,
    pub supercritical: bool,
    /// Real part of the eigenvalues of P2 at the current `b`.
    pub mu: f64,
    /// Imaginary part at the current `b`.
    pub omega: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactRecord {
    pub b: String,
    pub c: String,
    pub delta: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub b: f64,
    pub c: f64,
    pub delta: f64,
    pub exact: Option<ExactRecord>,
}

impl From<&Params> for ParamsRecord {
    fn from(p: &Params) -> Self {
        Self {
            b: p.b(),
            c: p.c(),
            delta: p.delta(),
            exact: p.exact().map(|e| ExactRecord {
                b: e.b.to_string(),
                c: e.c.to_string(),
                delta: e.delta.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitReport {
    pub schema_version: String,
    pub params: ParamsRecord,
    pub case_label: CaseLabel,
    pub discriminants: Discriminants,
    pub finite_points: Vec<SingularPoint>,
    pub infinite_points: Vec<InfinitePoint>,
    pub hopf: Option<HopfSummary>,
    pub cycle: Option<CycleResult>,
    /// One revolution of the cycle in disc coordinates.
    pub cycle_path: Option<Vec<Point2>>,
    pub dulac: DulacReport,
    pub uniqueness: Option<UniquenessReport>,
    pub separatrices: Vec<TaggedOrbit>,
    pub representative_orbits: Vec<TaggedOrbit>,
    pub portrait_letter: Portrait,
    pub status: Status,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortraitConfig {
    pub integrator: IntegratorConfig,
    /// Integration time for separatrices and representative orbits.
    pub orbit_time: f64,
    pub representative_seeds: usize,
    /// Distance to an attractor or to the cycle accepted as convergence when
    /// an orbit runs out of time.
    pub limit_tol: f64,
    /// Minimum spacing of stored path vertices in disc coordinates.
    pub path_spacing: f64,
    pub max_path_points: usize,
}

impl Default for PortraitConfig {
    fn default() -> Self {
        Self {
            integrator: IntegratorConfig::default(),
            orbit_time: 2000.0,
            representative_seeds: 8,
            limit_tol: 1e-3,
            path_spacing: 2e-3,
            max_path_points: 3000,
        }
    }
}

fn hopf_summary(p: &Params, d: &Discriminants, warnings: &mut Vec<String>) -> Option<HopfSummary> {
    if d.b >= 0.0 {
        return None;
    }
    match hopf_analysis(p.c(), p.delta()) {
        Ok(h) => Some(HopfSummary {
            b0: h.b0,
            omega0: h.omega0,
            dmu_db_at_b0: h.dmu_db_at_b0,
            ell1: h.ell1,
            supercritical: h.is_supercritical(),
            mu: h.mu_at(p.b()),
            omega: h.omega_at(p.b()),
        }),
        Err(e) => {
            warnings.push(format!("Hopf analysis skipped: {e}"));
            None
        }
    }
}

/// Report with classification, local analysis and analytic checks only.
/// Dynamics fields are null or empty.
pub fn classification_report(p: &Params) -> PortraitReport {
    let label = classify_case(p);
    let disc = discriminants(p);
    let mut warnings = Vec::new();
    if label.in_discrepancy_zone() {
        warnings.push(discrepancy_warning());
    }
    let infinite_points = match family_infinite_points(p) {
        Ok(v) => v,
        Err(e) => {
            warnings.push(format!("infinite points unavailable: {e}"));
            Vec::new()
        }
    };
    let hopf = hopf_summary(p, &disc, &mut warnings);
    PortraitReport {
        schema_version: SCHEMA_VERSION.to_string(),
        params: p.into(),
        case_label: label,
        discriminants: disc,
        finite_points: finite_singular_points(p),
        infinite_points,
        hopf,
        cycle: None,
        cycle_path: None,
        dulac: dulac_check(p),
        uniqueness: uniqueness_check(p).ok(),
        separatrices: Vec::new(),
        representative_orbits: Vec::new(),
        portrait_letter: label.portrait,
        status: label.status,
        warnings,
    }
}

fn discrepancy_warning() -> String {
    "P2 is a stable node (B >= 0, A < 0): the sign of B alone would suggest portrait B, \
     the case analysis gives portrait C; portrait C is used"
        .to_string()
}

fn decimate(points: impl IntoIterator<Item = Point2>, spacing: f64, cap: usize) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::new();
    let mut last_seen = None;
    for p in points {
        last_seen = Some(p);
        match out.last() {
            Some(q) if q.dist(&p) < spacing => {}
            _ => {
                if out.len() >= cap {
                    break;
                }
                out.push(p);
            }
        }
    }
    if let (Some(p), Some(q)) = (last_seen, out.last()) {
        if out.len() < cap && *q != p {
            out.push(p);
        }
    }
    out
}

fn polyline_dist(p: Point2, path: &[Point2]) -> f64 {
    path.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let l2 = dx * dx + dy * dy;
            let t = if l2 == 0.0 {
                0.0
            } else {
                (((p.x - a.x) * dx + (p.y - a.y) * dy) / l2).clamp(0.0, 1.0)
            };
            p.dist(&Point2::new(a.x + t * dx, a.y + t * dy))
        })
        .fold(f64::INFINITY, f64::min)
}

struct Ctx<'a> {
    p: &'a Params,
    cfg: IntegratorConfig,
    pcfg: &'a PortraitConfig,
    finite: Vec<SingularPoint>,
    cycle: Option<Vec<Point2>>,
}

impl Ctx<'_> {
    fn name_of(&self, q: Point2) -> Limit {
        self.finite
            .iter()
            .find(|s| s.location.dist(&q) < 1e-6)
            .map_or(Limit::Unknown, |s| s.name.into())
    }

    /// Limit set reached by a half orbit.
    fn limit_of(&self, o: &Orbit, seed: Point2) -> Limit {
        let last = o.last();
        match o.terminal {
            Terminal::ConvergedToPoint => o.limit_point.map_or(Limit::Unknown, |q| self.name_of(q)),
            Terminal::Escaped => Limit::O1,
            Terminal::ChartBoundaryLoop => {
                // only the y-axis itself ends at O2; interior orbits pass the
                // hyperbolic sector and continue along the arc
                if seed.x == 0.0 {
                    Limit::O2
                } else if o.direction == Direction::Backward {
                    Limit::O1
                } else {
                    Limit::Unknown
                }
            }
            Terminal::MaxTime | Terminal::HitSection => {
                let Some(a) = last.affine() else { return Limit::Unknown };
                let tol = self.pcfg.limit_tol;
                let attracting = |k: Kind| match o.direction {
                    Direction::Forward => matches!(
                        k,
                        Kind::StableNode | Kind::StableFocus | Kind::WeakStableFocus | Kind::SaddleNode
                    ),
                    Direction::Backward => matches!(k, Kind::UnstableNode | Kind::UnstableFocus),
                };
                if let Some(s) = self
                    .finite
                    .iter()
                    .find(|s| attracting(s.kind) && s.location.dist(&a) < tol)
                {
                    return s.name.into();
                }
                if let Some(c) = &self.cycle {
                    if polyline_dist(a, c) < tol {
                        return Limit::Cycle;
                    }
                }
                if last.chart == Chart::U2 && seed.x == 0.0 && o.direction == Direction::Backward {
                    return Limit::O2;
                }
                Limit::Unknown
            }
        }
    }

    fn half(&self, seed: Point2, dir: Direction) -> Option<Orbit> {
        integrate(self.p, seed, dir, &self.cfg, Stop::Never).ok()
    }

    fn path(&self, back: Option<&Orbit>, fwd: Option<&Orbit>) -> Vec<Point2> {
        let mut pts: Vec<Point2> = Vec::new();
        if let Some(b) = back {
            pts.extend(b.samples.iter().rev().map(|s| s.disc()));
        }
        if let Some(f) = fwd {
            let skip = usize::from(back.is_some());
            pts.extend(f.samples.iter().skip(skip).map(|s| s.disc()));
        }
        decimate(pts, self.pcfg.path_spacing, self.pcfg.max_path_points)
    }

    fn separatrix(
        &self,
        origin: PointName,
        manifold: Manifold,
        seed: Point2,
        warnings: &mut Vec<String>,
    ) -> TaggedOrbit {
        let dir = match manifold {
            Manifold::Unstable => Direction::Forward,
            Manifold::Stable => Direction::Backward,
        };
        let o = self.half(seed, dir);
        if o.is_none() {
            warnings.push(format!(
                "integration failed for the {manifold:?} separatrix of {origin}"
            ));
        }
        let lim = o.as_ref().map_or(Limit::Unknown, |o| self.limit_of(o, seed));
        let (alpha, omega, fwd, back) = match manifold {
            Manifold::Unstable => (origin.into(), lim, o.as_ref(), None),
            Manifold::Stable => (lim, origin.into(), None, o.as_ref()),
        };
        TaggedOrbit {
            origin: Some(origin),
            manifold: Some(manifold),
            seed,
            alpha,
            omega,
            forward_terminal: fwd.map(|o| o.terminal),
            backward_terminal: back.map(|o| o.terminal),
            disc_path: self.path(back, fwd),
        }
    }

    fn representative(&self, seed: Point2) -> TaggedOrbit {
        let f = self.half(seed, Direction::Forward);
        let b = self.half(seed, Direction::Backward);
        TaggedOrbit {
            origin: None,
            manifold: None,
            seed,
            alpha: b.as_ref().map_or(Limit::Unknown, |o| self.limit_of(o, seed)),
            omega: f.as_ref().map_or(Limit::Unknown, |o| self.limit_of(o, seed)),
            forward_terminal: f.as_ref().map(|o| o.terminal),
            backward_terminal: b.as_ref().map(|o| o.terminal),
            disc_path: self.path(b.as_ref(), f.as_ref()),
        }
    }
}

/// Limits every representative orbit should have in the given portrait.
fn expected_limits(letter: Portrait) -> (&'static [Limit], &'static [Limit]) {
    match letter {
        Portrait::A => (&[Limit::O1], &[Limit::P1]),
        Portrait::B => (&[Limit::O1, Limit::P2], &[Limit::Cycle]),
        Portrait::C => (&[Limit::O1], &[Limit::P2]),
    }
}

fn representative_seeds(p: &Params, outer: Option<f64>, n: usize) -> Vec<Point2> {
    let ladder = |lo: f64, hi: f64| -> Vec<f64> {
        (0..n)
            .map(|k| {
                let r = if n == 1 {
                    1.0
                } else {
                    1e-2f64.powf((n - 1 - k) as f64 / (n - 1) as f64)
                };
                lo + (hi - lo) * r
            })
            .collect()
    };
    match p2_location(p) {
        Some(p2) => {
            let reach = outer.map_or(1.5, |o| p2.x + 2.0 * (o - p2.x)).max(p2.x + 0.5);
            ladder(p2.x, reach).into_iter().map(|x| Point2::new(x, p2.y)).collect()
        }
        None => ladder(0.0, 3.0).into_iter().map(|s| Point2::new(s, s)).collect(),
    }
}

/// Classifies, integrates the separatrix skeleton and representative
/// orbits, and assembles the report.
pub fn build_portrait(p: &Params, pcfg: &PortraitConfig) -> PortraitReport {
    let mut report = classification_report(p);
    let mut warnings = std::mem::take(&mut report.warnings);
    let label = report.case_label;
    let mut cfg = pcfg.integrator.clone();
    cfg.max_time = pcfg.orbit_time;

    let mut outer = None;
    if matches!(label.case, 3 | 5) {
        match detect_limit_cycle(p, &pcfg.integrator) {
            Ok(r) => {
                if !r.found {
                    warnings.push(format!("no limit cycle detected (verdict {})", r.verdict));
                }
                outer = Some(r.outer_seed);
                if let Some(x) = r.section_x {
                    let mut lc = pcfg.integrator.clone();
                    lc.max_step = lc.max_step.min(0.01);
                    match cycle_loop(p, x, 0, &lc) {
                        Ok(pts) => report.cycle_path = Some(pts),
                        Err(e) => warnings.push(format!("cycle loop unavailable: {e}")),
                    }
                }
                report.cycle = Some(r);
            }
            Err(e) => warnings.push(format!("cycle detection failed: {e}")),
        }
    } else if label.case >= 4 {
        outer = outer_seed(p, &pcfg.integrator).ok();
    }
    if let Some(c) = &report.cycle {
        if c.found && label.portrait != Portrait::B {
            warnings.push(format!("cycle found but portrait {} assigned", label.portrait));
        }
    }

    if let Some(t) = report.cycle.as_ref().and_then(|c| c.period) {
        // give orbits several revolutions to settle on slow cycles
        cfg.max_time = cfg.max_time.max(5.0 * t);
    }
    let ctx = Ctx {
        p,
        cfg,
        pcfg,
        finite: report.finite_points.clone(),
        cycle: report.cycle_path.clone(),
    };

    let eps = 1e-6;
    let mut seps = vec![
        ctx.separatrix(PointName::P0, Manifold::Unstable, Point2::new(eps, 0.0), &mut warnings),
        ctx.separatrix(PointName::P0, Manifold::Stable, Point2::new(0.0, eps), &mut warnings),
    ];
    if label.case >= 2 {
        seps.push(ctx.separatrix(
            PointName::P1,
            Manifold::Stable,
            Point2::new(1.0 - eps, 0.0),
            &mut warnings,
        ));
        seps.push(ctx.separatrix(
            PointName::P1,
            Manifold::Stable,
            Point2::new(1.0 + eps, 0.0),
            &mut warnings,
        ));
    }
    if label.case >= 3 {
        let lam = jacobian(p, Point2::new(1.0, 0.0))[1][1];
        let (vx, vy) = (-1.0, 1.0 + p.b() + lam);
        let n = (vx * vx + vy * vy).sqrt();
        let seed = Point2::new(1.0 + eps * vx / n, eps * vy / n);
        seps.push(ctx.separatrix(PointName::P1, Manifold::Unstable, seed, &mut warnings));
    }

    let reps: Vec<TaggedOrbit> = representative_seeds(p, outer, pcfg.representative_seeds)
        .into_iter()
        .map(|s| ctx.representative(s))
        .collect();
    let (alphas, omegas) = expected_limits(label.portrait);
    for r in &reps {
        if !omegas.contains(&r.omega) {
            warnings.push(format!(
                "orbit through ({:.6}, {:.6}): omega-limit {} but portrait {} expects {}",
                r.seed.x, r.seed.y, r.omega, label.portrait, omegas[0]
            ));
        }
        if !alphas.contains(&r.alpha) {
            warnings.push(format!(
                "orbit through ({:.6}, {:.6}): alpha-limit {} but portrait {} expects {}",
                r.seed.x, r.seed.y, r.alpha, label.portrait, alphas[0]
            ));
        }
    }
    if label.is_conjectured_region() {
        warnings.push("no limit cycle is only conjectured for these parameters; portrait C is conjectured".to_string());
    }

    report.separatrices = seps;
    report.representative_orbits = reps;
    report.cycle_path = report.cycle_path.map(|c| {
        decimate(
            c.into_iter().map(|q| to_disc(Chart::U3, q)),
            pcfg.path_spacing / 2.0,
            usize::MAX,
        )
    });
    report.warnings = warnings;
    report
}
