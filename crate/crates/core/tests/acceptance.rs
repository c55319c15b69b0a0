//! Acceptance checks. Runs every criterion, prints one `PASS`/`FAIL` line
//! for each, and exits non-zero when any of them fails.

use std::time::Instant;

use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kportrait::compactify::{blowup_horizontal, compactify, family_system, Chart, Poly, PolySystem};
use kportrait::local::{hopf_analysis, lyapunov_procedural};
use kportrait::model::{
    classify_case_exact, classify_case_float, jacobian, p2_location, CaseLabel, ExactParams, Params, Point2, Portrait,
    Region,
};
use kportrait::numerics::{
    conjecture_scan, cycle_loop, detect_limit_cycle, displacement_scan, hausdorff, integrate, return_map,
    write_scan_csv, Direction, GridSpec, IntegratorConfig, Stop, Verdict,
};
use kportrait::portrait::{build_portrait, Limit, PortraitConfig};

fn report(n: u8, ok: bool, detail: &str) {
    println!("{} criterion {n}: {detail}", if ok { "PASS" } else { "FAIL" });
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational in (0, 5] with a small denominator, so boundaries are hit.
fn small_rational(r: &mut ChaCha8Rng) -> BigRational {
    let d: i64 = r.gen_range(1..=12);
    let n: i64 = r.gen_range(1..=5 * d);
    q(n, d)
}

fn same_label(a: &CaseLabel, b: &CaseLabel) -> bool {
    (a.case, a.boundary, a.region, a.portrait, a.status) == (b.case, b.boundary, b.region, b.portrait, b.status)
}

fn is_boundary_label(l: &CaseLabel) -> bool {
    l.boundary.is_some() || l.region == Region::S2
}

fn criterion_1_classification_float_matches_exact() -> bool {
    let mut r = rng(1);
    let mut disagreements = 0;
    let mut exact_boundaries = 0;
    let mut band_only = 0;
    for _ in 0..10_000 {
        let e = ExactParams::new(small_rational(&mut r), small_rational(&mut r), small_rational(&mut r)).unwrap();
        let exact = classify_case_exact(&e);
        let float = classify_case_float(&Params::from_exact(e).to_float());
        if is_boundary_label(&exact) {
            exact_boundaries += 1;
        }
        if same_label(&exact, &float) {
            continue;
        }
        // outside the band both modes must agree; inside it float mode may
        // only differ by reporting the neighbouring boundary
        if is_boundary_label(&float) && !is_boundary_label(&exact) {
            band_only += 1;
        } else {
            disagreements += 1;
        }
    }
    let ok = disagreements == 0;
    report(
        1,
        ok,
        &format!("10000 triples, {disagreements} disagreements, {exact_boundaries} exact boundary hits, {band_only} band-only boundary tags"),
    );
    ok
}

fn poly(cap: usize, terms: Vec<(usize, usize, BigRational)>) -> Poly<BigRational> {
    Poly::from_terms(cap, terms)
}

struct Goldens {
    u1: PolySystem<BigRational>,
    u2: PolySystem<BigRational>,
    raw: PolySystem<BigRational>,
    rescaled: PolySystem<BigRational>,
}

/// The charted and blown-up systems as given in the reference text. Monomials are `(i, j)` for
/// `uⁱvʲ` (or `w₁ⁱvʲ`).
fn reference_goldens(b: &BigRational, c: &BigRational, d: &BigRational) -> Goldens {
    let one = q(1, 1);
    let zero = q(0, 1);
    let u1 = PolySystem::new(
        poly(
            4,
            vec![
                (1, 2, one.clone()),
                (1, 2, zero.clone() - b * (d + &one)),
                (1, 1, b + c - d - &one),
                (1, 0, one.clone()),
            ],
        ),
        poly(
            4,
            vec![
                (1, 2, one.clone()),
                (0, 3, zero.clone() - b),
                (0, 2, b - &one),
                (0, 1, one.clone()),
            ],
        ),
    );
    let u2 = PolySystem::new(
        poly(
            4,
            vec![
                (3, 0, -one.clone()),
                (2, 1, d + &one - b - c),
                (1, 2, b * (d + &one)),
                (1, 1, -one.clone()),
            ],
        ),
        poly(4, vec![(1, 2, d - c), (0, 3, b * d)]),
    );
    let raw = PolySystem::new(
        poly(
            8,
            vec![
                (3, 2, one.clone()),
                (2, 2, &one - b),
                (1, 2, b.clone()),
                (1, 1, -one.clone()),
            ],
        ),
        poly(8, vec![(1, 3, d - c), (0, 3, b * d)]),
    );
    let rescaled = PolySystem::new(
        poly(
            8,
            vec![
                (3, 1, one.clone()),
                (2, 1, &one - b),
                (1, 1, b.clone()),
                (1, 0, -one.clone()),
            ],
        ),
        poly(8, vec![(1, 2, d - c), (0, 2, b * d)]),
    );
    Goldens { u1, u2, raw, rescaled }
}

/// Reference systems with two monomials corrected: `u²v` in the U1 equation for
/// `u̇`, and `−w₁³` in both blow-up systems.
fn corrected_goldens(b: &BigRational, c: &BigRational, d: &BigRational) -> Goldens {
    let mut g = reference_goldens(b, c, d);
    let one = q(1, 1);
    let two = q(2, 1);
    g.u1.p.add(1, 2, -one.clone());
    g.u1.p.add(2, 1, one.clone());
    g.raw.p.add(3, 2, -two.clone());
    g.rescaled.p.add(3, 1, -two);
    g
}

fn compare(g: &Goldens, b: &BigRational, c: &BigRational, d: &BigRational) -> [bool; 4] {
    let sys = family_system(b, c, d);
    let u1 = compactify(&sys, Chart::U1).unwrap().system;
    let u2c = compactify(&sys, Chart::U2).unwrap();
    let (raw, rescaled) = blowup_horizontal(&u2c).unwrap();
    [
        u1.same_as(&g.u1),
        u2c.system.same_as(&g.u2),
        raw.system.same_as(&g.raw),
        rescaled.system.same_as(&g.rescaled),
    ]
}

fn criterion_2_charted_systems_match_goldens() -> bool {
    let mut r = rng(2);
    let names = ["U1", "U2", "blow-up raw", "blow-up rescaled"];
    let mut literal = [0usize; 4];
    let mut corrected = [0usize; 4];
    for _ in 0..20 {
        let (b, c, d) = (small_rational(&mut r), small_rational(&mut r), small_rational(&mut r));
        for (k, ok) in compare(&reference_goldens(&b, &c, &d), &b, &c, &d)
            .into_iter()
            .enumerate()
        {
            literal[k] += ok as usize;
        }
        for (k, ok) in compare(&corrected_goldens(&b, &c, &d), &b, &c, &d)
            .into_iter()
            .enumerate()
        {
            corrected[k] += ok as usize;
        }
    }
    let summary = |counts: &[usize; 4]| {
        names
            .iter()
            .zip(counts)
            .map(|(n, k)| format!("{n} {k}/20"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let corrected_ok = corrected.iter().all(|&k| k == 20);
    let literal_ok = literal.iter().all(|&k| k == 20);
    report(
        2,
        corrected_ok && literal_ok,
        &format!(
            "reference text: {}; corrected monomials: {}",
            summary(&literal),
            summary(&corrected)
        ),
    );
    corrected_ok && literal_ok
}

fn p2_trace_half(c: f64, d: f64, b: f64) -> f64 {
    let p = Params::new(b, c, d).unwrap();
    let j = jacobian(&p, p2_location(&p).unwrap());
    0.5 * (j[0][0] + j[1][1])
}

fn criterion_3_hopf_pipeline() -> bool {
    let mut r = rng(3);
    let mut worst_mu = 0f64;
    let mut worst_slope = 0f64;
    let mut worst_fd = 0f64;
    let mut worst_ell = 0f64;
    let mut all_negative = true;
    for _ in 0..200 {
        let c: f64 = r.gen_range(0.2..5.0);
        let d: f64 = c * r.gen_range(0.05..0.95);
        let h = hopf_analysis(c, d).unwrap();
        worst_mu = worst_mu.max(h.mu_at(h.b0).abs()).max(p2_trace_half(c, d, h.b0).abs());
        let expected = -d / (2.0 * (c - d));
        worst_slope = worst_slope.max(((h.dmu_db_at_b0 - expected) / expected).abs());
        let eps = 1e-5 * h.b0;
        let fd = (p2_trace_half(c, d, h.b0 + eps) - p2_trace_half(c, d, h.b0 - eps)) / (2.0 * eps);
        worst_fd = worst_fd.max(((fd - expected) / expected).abs());
        let proc = lyapunov_procedural(c, d).unwrap();
        worst_ell = worst_ell.max(((h.ell1 - proc) / h.ell1).abs());
        all_negative &= h.ell1 < 0.0 && proc < 0.0;
    }
    let spot = hopf_analysis(1.0, 0.25).unwrap();
    let b0_ok = (spot.b0 - 0.6).abs() < 1e-12;
    let spot_ok = (spot.ell1 + 2.5864).abs() <= 1e-3;
    let sweep_ok = worst_mu <= 1e-12 && worst_slope <= 1e-6 && worst_fd <= 1e-6 && worst_ell <= 1e-8 && all_negative;
    report(
        3,
        sweep_ok && b0_ok && spot_ok,
        &format!(
            "200 pairs: max|mu(b0)| {worst_mu:.1e}, slope rel {worst_slope:.1e}, finite difference rel {worst_fd:.1e}, \
             l1 closed vs procedural rel {worst_ell:.1e}, all l1 < 0: {all_negative}; spot (1, 0.25): b0 = {}, l1 = {:.6} (target -2.5864)",
            spot.b0, spot.ell1
        ),
    );
    sweep_ok && b0_ok && spot_ok
}

fn criterion_4_unique_stable_cycle() -> bool {
    let t0 = Instant::now();
    let p = Params::new(0.5, 1.0, 0.25).unwrap();
    let cfg = IntegratorConfig::default();
    let res = detect_limit_cycle(&p, &cfg).unwrap();
    let mult = res.multiplier.unwrap_or(f64::NAN);
    let x2 = p2_location(&p).unwrap().x;

    let scan = displacement_scan(&p, res.outer_seed, 200, &cfg).unwrap();
    let signs: Vec<bool> = scan
        .iter()
        .filter_map(|s| s.displacement(x2))
        .map(|d| d > 0.0)
        .collect();
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();

    let fine = IntegratorConfig {
        max_step: 0.01,
        ..cfg.clone()
    };
    let x = res.section_x.unwrap_or(x2 + 0.1);
    let inside = cycle_loop(&p, x2 + 0.05 * (x - x2), 60, &fine).unwrap();
    let outside = cycle_loop(&p, x + 0.5 * (res.outer_seed - x), 60, &fine).unwrap();
    let dh = hausdorff(&inside, &outside);
    let secs = t0.elapsed().as_secs_f64();

    let ok = res.verdict == Verdict::CycleFound
        && mult > 0.0
        && mult < 1.0
        && changes == 1
        && signs.len() == 200
        && dh <= 1e-4
        && secs <= 30.0;
    report(
        4,
        ok,
        &format!(
            "(0.5, 1, 0.25): {} at x = {x:.6}, multiplier {mult:.4}, {changes} sign change(s) over {} section points, \
             inside/outside Hausdorff {dh:.1e}, {secs:.1} s",
            res.verdict,
            signs.len()
        ),
    );
    ok
}

/// Iterates the return map and checks the iterates fall monotonically
/// towards `x₂`. Stops when an orbit is absorbed by P2.
fn monotone_iterates(p: &Params, x0: f64, n: usize, cfg: &IntegratorConfig) -> bool {
    let x2 = p2_location(p).unwrap().x;
    let mut x = x0;
    for _ in 0..n {
        match return_map(p, x, cfg) {
            Ok((next, _)) => {
                if !(next < x && next > x2) {
                    return false;
                }
                x = next;
            }
            Err(_) => return true,
        }
    }
    true
}

fn criterion_5_no_cycles_in_dulac_zone() -> bool {
    let cfg = IntegratorConfig::default();
    let mut triples = vec![Params::new(2.0, 1.0, 0.2).unwrap()];
    let mut r = rng(5);
    while triples.len() < 51 {
        let p = Params::new(r.gen_range(0.01..5.0), r.gen_range(0.01..5.0), r.gen_range(0.01..5.0)).unwrap();
        if classify_case_float(&p).region == Region::IIa {
            triples.push(p);
        }
    }
    let mut contraction = 0;
    let mut found = 0;
    let mut monotone = 0;
    let mut bad = Vec::new();
    for p in &triples {
        let res = detect_limit_cycle(p, &cfg).unwrap();
        found += res.found as usize;
        contraction += (res.verdict == Verdict::ContractionToP2) as usize;
        let mono = monotone_iterates(p, res.outer_seed, 6, &cfg);
        monotone += mono as usize;
        if res.verdict != Verdict::ContractionToP2 || !mono {
            bad.push(format!("{p}: {}", res.verdict));
        }
    }
    let ok = found == 0 && contraction == triples.len() && monotone == triples.len();
    report(
        5,
        ok,
        &format!(
            "{} region II-a triples: {contraction} contraction, {found} cycle-found, {monotone} monotone iterate sequences{}",
            triples.len(),
            if bad.is_empty() { String::new() } else { format!("; failing: {}", bad.join(", ")) }
        ),
    );
    ok
}

fn amplitude(p: &Params, cfg: &IntegratorConfig) -> f64 {
    let res = detect_limit_cycle(p, cfg).unwrap();
    assert_eq!(res.verdict, Verdict::CycleFound, "no cycle at {p}");
    let p2 = p2_location(p).unwrap();
    let fine = IntegratorConfig {
        max_step: 0.01,
        ..cfg.clone()
    };
    cycle_loop(p, res.section_x.unwrap(), 0, &fine)
        .unwrap()
        .iter()
        .map(|q| q.dist(&p2))
        .fold(0.0, f64::max)
}

fn criterion_6_hopf_amplitude_square_root_law() -> bool {
    let cfg = IntegratorConfig::default();
    let b0 = hopf_analysis(1.0, 0.25).unwrap().b0;
    let far = amplitude(&Params::new(b0 - 0.01, 1.0, 0.25).unwrap(), &cfg);
    let near = amplitude(&Params::new(b0 - 0.0025, 1.0, 0.25).unwrap(), &cfg);
    let ratio = far / near;
    let ok = (ratio - 2.0).abs() <= 0.4;
    report(
        6,
        ok,
        &format!("amplitudes {far:.5} at b0 - 0.01 and {near:.5} at b0 - 0.0025, ratio {ratio:.3}"),
    );
    ok
}

fn criterion_7_conjecture_scan() -> bool {
    let grid: GridSpec = "0.65:1.35:6,0.8:1.6:6,0.15:0.35:6".parse().unwrap();
    let cfg = IntegratorConfig::default();
    let t0 = Instant::now();
    let one = conjecture_scan(&grid, &cfg, 1).unwrap();
    let eight = conjecture_scan(&grid, &cfg, 8).unwrap();
    let mut a = Vec::new();
    let mut b = Vec::new();
    write_scan_csv(&one, &mut a).unwrap();
    write_scan_csv(&eight, &mut b).unwrap();
    let found = one.iter().filter(|e| e.found_cycle()).count();
    let contraction = one.iter().filter(|e| e.verdict == Verdict::ContractionToP2).count();
    let ok = found == 0 && a == b && !one.is_empty();
    report(
        7,
        ok,
        &format!(
            "{} admissible cells of 216: {found} cycle-found, {contraction} contraction, CSV identical for 1 and 8 workers: {}, {:.1} s",
            one.len(),
            a == b,
            t0.elapsed().as_secs_f64()
        ),
    );
    ok
}

fn criterion_8_portrait_topology() -> bool {
    let cfg = PortraitConfig::default();
    let cases = [
        ((2.0, 1.0, 1.0), Region::I, Portrait::A),
        ((2.0, 1.0, 0.2), Region::IIa, Portrait::C),
        ((0.5, 1.0, 0.25), Region::III, Portrait::B),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for ((b, c, d), region, letter) in cases {
        let p = Params::new(b, c, d).unwrap();
        let rep = build_portrait(&p, &cfg);
        let orbits = &rep.representative_orbits;
        let limits_ok = !orbits.is_empty()
            && orbits.iter().all(|o| match letter {
                Portrait::A => o.alpha == Limit::O1 && o.omega == Limit::P1,
                Portrait::B => o.omega == Limit::Cycle,
                Portrait::C => o.omega == Limit::P2,
            });
        let this = rep.case_label.region == region && rep.portrait_letter == letter && limits_ok;
        ok &= this;
        lines.push(format!(
            "({b}, {c}, {d}) region {} portrait {} with {} orbits {}",
            rep.case_label.region,
            rep.portrait_letter,
            orbits.len(),
            if limits_ok { "as expected" } else { "MISMATCHED" }
        ));
    }
    report(8, ok, &lines.join("; "));
    ok
}

fn criterion_9_axes_are_invariant() -> bool {
    let mut r = rng(9);
    let cfg = IntegratorConfig {
        max_time: 50.0,
        ..IntegratorConfig::default()
    };
    let mut worst = 0f64;
    for k in 0..1000 {
        let p = Params::new(r.gen_range(0.05..5.0), r.gen_range(0.05..5.0), r.gen_range(0.05..5.0)).unwrap();
        let s: f64 = r.gen_range(0.0..8.0);
        let on_x = k % 2 == 0;
        let start = if on_x { Point2::new(s, 0.0) } else { Point2::new(0.0, s) };
        let dir = if r.gen_bool(0.5) {
            Direction::Forward
        } else {
            Direction::Backward
        };
        let orbit = integrate(&p, start, dir, &cfg, Stop::Never).unwrap();
        for smp in &orbit.samples {
            // distance from the axis in whichever chart holds the sample
            let off = match (smp.affine(), on_x) {
                (Some(a), true) => a.y.abs(),
                (Some(a), false) => a.x.abs(),
                (None, true) => {
                    assert_eq!(smp.chart, Chart::U1);
                    smp.point.x.abs()
                }
                (None, false) => {
                    assert_eq!(smp.chart, Chart::U2);
                    smp.point.x.abs()
                }
            };
            worst = worst.max(off);
        }
    }
    let ok = worst <= 1e-9;
    report(
        9,
        ok,
        &format!("1000 axis integrations, largest distance from the axis {worst:.1e}"),
    );
    ok
}

fn main() {
    let criteria: [(u8, fn() -> bool); 9] = [
        (1, criterion_1_classification_float_matches_exact),
        (2, criterion_2_charted_systems_match_goldens),
        (3, criterion_3_hopf_pipeline),
        (4, criterion_4_unique_stable_cycle),
        (5, criterion_5_no_cycles_in_dulac_zone),
        (6, criterion_6_hopf_amplitude_square_root_law),
        (7, criterion_7_conjecture_scan),
        (8, criterion_8_portrait_topology),
        (9, criterion_9_axes_are_invariant),
    ];
    let mut failed = Vec::new();
    for (n, check) in criteria {
        match std::panic::catch_unwind(check) {
            Ok(true) => {}
            Ok(false) => failed.push(n),
            Err(_) => {
                report(n, false, "panicked");
                failed.push(n);
            }
        }
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed.len());
    if !failed.is_empty() {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
