//! Grid scan for limit cycles where P2 is stable but the Dulac test does not
//! apply.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

use super::{detect_limit_cycle, IntegratorConfig, SectionSeed, Verdict};
use crate::error::{Error, Result};
use crate::model::{classify_case, dulac_quantity, Params};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl GridAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        (0..self.n)
            .map(|k| self.min + (self.max - self.min) * k as f64 / (self.n - 1) as f64)
            .collect()
    }
}

impl std::str::FromStr for GridAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGrid(format!("axis `{s}` is not min:max:n"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(bad());
        };
        let min: f64 = lo.trim().parse().map_err(|_| bad())?;
        let max: f64 = hi.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if n == 0 || !(min > 0.0) || !(max >= min) || !max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "axis `{s}` needs 0 < min <= max and n >= 1"
            )));
        }
        Ok(Self { min, max, n })
    }
}

/// Axes for `b`, `c` and `δ`, written `bmin:bmax:n,cmin:cmax:n,dmin:dmax:n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub b: GridAxis,
    pub c: GridAxis,
    pub delta: GridAxis,
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let axes: Vec<&str> = s.split(',').collect();
        let [b, c, d] = axes.as_slice() else {
            return Err(Error::InvalidGrid(format!("expected three axes, got `{s}`")));
        };
        Ok(Self {
            b: b.parse()?,
            c: c.parse()?,
            delta: d.parse()?,
        })
    }
}

impl GridSpec {
    /// All cells in `b`-major order.
    pub fn cells(&self) -> Vec<(f64, f64, f64)> {
        let (bs, cs, ds) = (self.b.values(), self.c.values(), self.delta.values());
        let mut out = Vec::with_capacity(bs.len() * cs.len() * ds.len());
        for &b in &bs {
            for &c in &cs {
                for &d in &ds {
                    out.push((b, c, d));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEvidence {
    pub b: f64,
    pub c: f64,
    pub delta: f64,
    pub case: u8,
    pub verdict: Verdict,
    pub section_x: Option<f64>,
    pub multiplier: Option<f64>,
    /// Seeds on the section with their first returns.
    pub witnesses: Vec<SectionSeed>,
    /// Set when the cell could not be analysed.
    pub error: Option<String>,
}

impl ScanEvidence {
    pub fn found_cycle(&self) -> bool {
        self.verdict == Verdict::CycleFound
    }
}

/// Cells covered by the conjecture: P2 stable or weakly stable (cases 4, 6,
/// 7) and `1 + c − δ − b − bδ > 0`.
pub fn scan_admissible(p: &Params) -> bool {
    let label = classify_case(p);
    matches!(label.case, 4 | 6 | 7) && dulac_quantity(&p.b(), &p.c(), &p.delta()) > 0.0
}

/// Runs the cycle detector on one admissible cell.
pub fn scan_cell(p: &Params, cfg: &IntegratorConfig) -> Result<ScanEvidence> {
    if !scan_admissible(p) {
        return Err(Error::InvalidGrid(format!("cell {p} is outside the conjecture region")));
    }
    let case = classify_case(p).case;
    let ev = match detect_limit_cycle(p, cfg) {
        Ok(r) => ScanEvidence {
            b: p.b(),
            c: p.c(),
            delta: p.delta(),
            case,
            verdict: r.verdict,
            section_x: r.section_x,
            multiplier: r.multiplier,
            witnesses: r.seeds,
            error: None,
        },
        Err(e) => ScanEvidence {
            b: p.b(),
            c: p.c(),
            delta: p.delta(),
            case,
            verdict: Verdict::Inconclusive,
            section_x: None,
            multiplier: None,
            witnesses: Vec::new(),
            error: Some(e.to_string()),
        },
    };
    Ok(ev)
}

/// Scans the admissible cells of `grid` on `jobs` worker threads. Output is
/// in grid order whatever the number of workers.
pub fn conjecture_scan(grid: &GridSpec, cfg: &IntegratorConfig, jobs: usize) -> Result<Vec<ScanEvidence>> {
    cfg.validate()?;
    let cells: Vec<Params> = grid
        .cells()
        .into_iter()
        .filter_map(|(b, c, d)| Params::new(b, c, d).ok())
        .filter(scan_admissible)
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidGrid(format!("cannot start worker pool: {e}")))?;
    pool.install(|| cells.par_iter().map(|p| scan_cell(p, cfg)).collect())
}

fn num(v: f64) -> String {
    format!("{v:e}")
}

/// Writes the evidence table as CSV.
pub fn write_scan_csv<W: Write>(rows: &[ScanEvidence], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["b", "c", "delta", "case", "verdict", "section_x", "multiplier", "seeds"])?;
    for r in rows {
        let seeds: Vec<String> = r
            .witnesses
            .iter()
            .map(|s| match s.x_next {
                Some(n) => format!("{}->{}", num(s.x), num(n)),
                None if s.converged => format!("{}->P2", num(s.x)),
                None => format!("{}->none", num(s.x)),
            })
            .collect();
        w.write_record([
            num(r.b),
            num(r.c),
            num(r.delta),
            r.case.to_string(),
            r.verdict.to_string(),
            r.section_x.map(num).unwrap_or_default(),
            r.multiplier.map(num).unwrap_or_default(),
            seeds.join(";"),
        ])?;
    }
    w.flush()?;
    Ok(())
}
