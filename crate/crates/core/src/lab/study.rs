//! ε-sweep studies behind `amink study`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::functionals::{coarea_sum, f_eps, f_eps_on, ScalarField};
use crate::grid::{
    brute_distance, chamfer_distance, dilate, rasterize, sm0_grid, symmetric_content_grid, GridDomain, GridSet,
};
use crate::polygon::{aniso_perimeter, sm0_exact_convex, steiner_decompose, symmetric_aniso_perimeter, SimplePolygon};
use crate::vec2::Vec2;

use super::fit::{fit_linear, ContentSeries, FitResult};
use super::report::{csv_text, svg_chart};
use super::shapes::{resolve_body, resolve_polygon};

/// Grid studies need the ε-strip resolved by at least this many cells.
pub const MIN_EPS_CELLS: f64 = 8.0;

/// Mask radius used for the chamfer side of `distbench`.
pub const CHAMFER_RADIUS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyKind {
    Steiner,
    Converge,
    Symmetric,
    Coarea,
    Affine,
    Distbench,
}

impl StudyKind {
    pub const ALL: [StudyKind; 6] = [
        StudyKind::Steiner,
        StudyKind::Converge,
        StudyKind::Symmetric,
        StudyKind::Coarea,
        StudyKind::Affine,
        StudyKind::Distbench,
    ];

    pub fn is_grid(self) -> bool {
        self != StudyKind::Steiner
    }

    pub fn name(self) -> &'static str {
        match self {
            StudyKind::Steiner => "steiner",
            StudyKind::Converge => "converge",
            StudyKind::Symmetric => "symmetric",
            StudyKind::Coarea => "coarea",
            StudyKind::Affine => "affine",
            StudyKind::Distbench => "distbench",
        }
    }
}

impl fmt::Display for StudyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StudyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StudyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::BadConfig(format!("unknown study kind `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub kind: StudyKind,
    /// Builtin name (optionally `name:scale`) or vertex-file path.
    pub e_shape: String,
    pub c_shape: String,
    pub h: f64,
    pub eps: Vec<f64>,
    pub out: PathBuf,
    pub svg: Option<PathBuf>,
    pub seed: u64,
    /// When false, `wall_ms` is written as 0 so that reruns are byte-identical.
    pub record_timing: bool,
}

impl StudyConfig {
    /// Geometric sweep `64h, 32h, 16h, 8h`.
    pub fn default_eps(h: f64) -> Vec<f64> {
        [64.0, 32.0, 16.0, 8.0].iter().map(|k| k * h).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::BadConfig(format!("grid spacing must be positive, got {}", self.h)));
        }
        if self.eps.is_empty() {
            return Err(Error::BadConfig("empty epsilon list".into()));
        }
        if self.eps.iter().any(|&e| !(e.is_finite() && e > 0.0)) {
            return Err(Error::BadConfig("epsilon values must be positive".into()));
        }
        if self.eps.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::BadConfig("epsilon values must be strictly decreasing".into()));
        }
        let eps_min = *self.eps.last().expect("nonempty");
        if self.kind.is_grid() && eps_min < MIN_EPS_CELLS * self.h * (1.0 - 1e-12) {
            return Err(Error::BadConfig(format!(
                "smallest epsilon {eps_min} is below {MIN_EPS_CELLS}h = {}",
                MIN_EPS_CELLS * self.h
            )));
        }
        Ok(())
    }

    fn eps_max(&self) -> f64 {
        self.eps[0]
    }
}

/// One ε-point of a study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudyRow {
    pub epsilon: f64,
    pub estimate: f64,
    pub reference: Option<f64>,
    pub wall_ms: f64,
}

impl StudyRow {
    pub fn abs_err(&self) -> Option<f64> {
        self.reference.map(|r| (self.estimate - r).abs())
    }

    /// `|estimate - reference| / |reference|`; equals `abs_err` when the reference is 0.
    pub fn rel_err(&self) -> Option<f64> {
        self.reference.map(|r| {
            let a = (self.estimate - r).abs();
            if r == 0.0 {
                a
            } else {
                a / r.abs()
            }
        })
    }
}

/// Everything a study produces before it is written out.
#[derive(Debug, Clone, Serialize)]
pub struct StudyReport {
    pub kind: StudyKind,
    pub e_shape: String,
    pub c_shape: String,
    pub h: f64,
    pub rows: Vec<StudyRow>,
    pub fit: FitResult,
    /// Exact ε → 0 limit, when one is known.
    pub limit_reference: Option<f64>,
    /// `|fit.limit_estimate - limit_reference| / limit_reference`.
    pub limit_rel_err: Option<f64>,
    /// Largest per-row `abs_err`.
    pub max_abs_err: Option<f64>,
    /// Whether the exact convex pipeline produced the estimates.
    pub used_exact_convex: bool,
    pub notes: Vec<String>,
}

/// Machine-readable summary printed by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct StudySummary {
    #[serde(flatten)]
    pub report: StudyReport,
    pub csv: PathBuf,
    pub svg: Option<PathBuf>,
}

fn timed<T>(record: bool, f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let t0 = Instant::now();
    let v = f()?;
    let ms = if record { t0.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    Ok((v, ms))
}

/// Domain covering `E` with room for the largest dilation, shifted off the
/// shape's symmetry lines by a fraction of a cell.
fn study_domain(e: &SimplePolygon, margin: f64, h: f64) -> Result<GridDomain> {
    let (lo, hi) = e.bbox();
    let jitter = Vec2::new(0.31 * h, 0.17 * h);
    GridDomain::covering(lo - jitter, hi - jitter, margin + 2.0 * h, h)
}

fn grid_rows(
    cfg: &StudyConfig,
    reference: Option<f64>,
    f: impl Fn(f64) -> Result<f64> + Sync,
) -> Result<Vec<StudyRow>> {
    cfg.eps
        .par_iter()
        .map(|&eps| {
            let (estimate, wall_ms) = timed(cfg.record_timing, || f(eps))?;
            Ok(StudyRow {
                epsilon: eps,
                estimate,
                reference,
                wall_ms,
            })
        })
        .collect()
}

/// Runs the computation of a study without touching the filesystem.
pub fn execute(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    let e = resolve_polygon(&cfg.e_shape, cfg.seed)?;
    let c = resolve_body(&cfg.c_shape)?;
    let mut notes = Vec::new();
    let mut used_exact_convex = false;
    let margin = cfg.eps_max() * c.outer_radius();

    let (rows, limit_reference) = match cfg.kind {
        StudyKind::Steiner => {
            if !e.is_convex() {
                return Err(Error::BadConfig("steiner study needs a convex E".into()));
            }
            let terms = steiner_decompose(&e, &c)?;
            used_exact_convex = true;
            let rows = cfg
                .eps
                .iter()
                .map(|&eps| {
                    let (estimate, wall_ms) = timed(cfg.record_timing, || sm0_exact_convex(&e, &c, eps))?;
                    Ok(StudyRow {
                        epsilon: eps,
                        estimate,
                        reference: Some(terms.perimeter + eps * terms.area),
                        wall_ms,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            (rows, Some(terms.perimeter))
        }
        StudyKind::Converge => {
            let domain = study_domain(&e, margin, cfg.h)?;
            let s = rasterize(&e, &domain)?;
            let p = aniso_perimeter(&e, &c);
            (grid_rows(cfg, Some(p), |eps| sm0_grid(&s, eps, &c))?, Some(p))
        }
        StudyKind::Symmetric => {
            let domain = study_domain(&e, margin, cfg.h)?;
            let s = rasterize(&e, &domain)?;
            let p = symmetric_aniso_perimeter(&e, &c);
            (grid_rows(cfg, Some(p), |eps| symmetric_content_grid(&s, eps, &c))?, Some(p))
        }
        StudyKind::Coarea => coarea_rows(cfg, &e, &c, margin, &mut notes)?,
        StudyKind::Affine => affine_rows(cfg, &e, &c, &mut notes)?,
        StudyKind::Distbench => distbench_rows(cfg, &e, &c, margin, &mut notes)?,
    };

    let series = ContentSeries::new(rows.iter().map(|r| (r.epsilon, r.estimate)).collect(), limit_reference)?;
    let fit = if rows.len() >= 2 {
        fit_linear(&series)?
    } else {
        notes.push("single epsilon: limit reported as the raw estimate".into());
        FitResult {
            limit_estimate: rows[0].estimate,
            slope: 0.0,
            max_residual: 0.0,
        }
    };
    let limit_rel_err = limit_reference.map(|r| (fit.limit_estimate - r).abs() / r.abs().max(f64::MIN_POSITIVE));
    let max_abs_err = rows
        .iter()
        .filter_map(StudyRow::abs_err)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    Ok(StudyReport {
        kind: cfg.kind,
        e_shape: cfg.e_shape.clone(),
        c_shape: cfg.c_shape.clone(),
        h: cfg.h,
        rows,
        fit,
        limit_reference,
        limit_rel_err,
        max_abs_err,
        used_exact_convex,
        notes,
    })
}

/// Field `Σ_k w_k χ_{s_k E}` with nested copies `s = 1, 1/2` and seeded
/// weights; rows compare `f_eps` (estimate) with the level-set sum (reference).
fn coarea_rows(
    cfg: &StudyConfig,
    e: &SimplePolygon,
    c: &ConvexBody,
    margin: f64,
    notes: &mut Vec<String>,
) -> Result<(Vec<StudyRow>, Option<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let copies: Vec<(f64, SimplePolygon)> = [1.0, 0.5]
        .iter()
        .map(|&t| Ok((rng.gen_range(0.5..1.5), e.scale(t)?)))
        .collect::<Result<_>>()?;
    let domain = study_domain(e, margin, cfg.h)?;
    let mut values = vec![0.0; domain.len()];
    for (w, poly) in &copies {
        let s = rasterize(poly, &domain)?;
        for (v, &b) in values.iter_mut().zip(s.mask()) {
            if b {
                *v += w;
            }
        }
    }
    let u = ScalarField::new(domain, values)?;
    let tv: f64 = copies.iter().map(|(w, p)| w * aniso_perimeter(p, c)).sum();
    notes.push(format!("limit reference is the level-set perimeter sum {tv}"));
    let rows = cfg
        .eps
        .par_iter()
        .map(|&eps| {
            let ((estimate, reference), wall_ms) = timed(cfg.record_timing, || {
                Ok((f_eps(&u, eps, c)?, coarea_sum(&u, eps, c)?))
            })?;
            Ok(StudyRow {
                epsilon: eps,
                estimate,
                reference: Some(reference),
                wall_ms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, Some(tv)))
}

/// `u(x) = g · x` on the bounding box of `E`, with `g` drawn from the seed.
/// Estimates are `f_eps / |Ω'|` on the window trimmed by `ε_max b + 2h`.
fn affine_rows(
    cfg: &StudyConfig,
    e: &SimplePolygon,
    c: &ConvexBody,
    notes: &mut Vec<String>,
) -> Result<(Vec<StudyRow>, Option<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let g = Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let domain = study_domain(e, 0.0, cfg.h)?;
    let trim = cfg.eps_max() * c.outer_radius() + 2.0 * cfg.h;
    let [ox, oy, _] = domain.origin();
    let [nx, ny, _] = domain.extents();
    let (w, hgt) = (nx as f64 * cfg.h, ny as f64 * cfg.h);
    let window = GridSet::from_fn(&domain, |p| {
        p[0] - ox > trim && ox + w - p[0] > trim && p[1] - oy > trim && oy + hgt - p[1] > trim
    });
    if window.is_empty() {
        return Err(Error::BadConfig("trimmed window is empty; shrink epsilon or h".into()));
    }
    let u = ScalarField::from_fn(&domain, |p| g.x * p[0] + g.y * p[1])?;
    let reference = c.support(-g);
    notes.push(format!("gradient g = ({}, {})", g.x, g.y));
    let area = window.measure();
    let rows = grid_rows(cfg, Some(reference), |eps| Ok(f_eps_on(&u, eps, c, &window)? / area))?;
    Ok((rows, Some(reference)))
}

/// Outer content from the chamfer field (estimate) against the brute-force
/// field (reference).
fn distbench_rows(
    cfg: &StudyConfig,
    e: &SimplePolygon,
    c: &ConvexBody,
    margin: f64,
    notes: &mut Vec<String>,
) -> Result<(Vec<StudyRow>, Option<f64>)> {
    let domain = study_domain(e, margin, cfg.h)?;
    let s = rasterize(e, &domain)?;
    let (brute, brute_ms) = timed(cfg.record_timing, || brute_distance(&s, c))?;
    let (chamfer, chamfer_ms) = timed(cfg.record_timing, || chamfer_distance(&s, c, CHAMFER_RADIUS))?;
    let max_rel = brute
        .values()
        .iter()
        .zip(chamfer.values())
        .filter(|(b, _)| **b > 0.0)
        .map(|(b, ch)| (ch - b) / b)
        .fold(0.0, f64::max);
    notes.push(format!("brute_ms={brute_ms:.3} chamfer_ms={chamfer_ms:.3} max_rel_err={max_rel:.6e}"));
    let base = s.measure();
    let rows = cfg
        .eps
        .iter()
        .map(|&eps| {
            let (pair, wall_ms) = timed(cfg.record_timing, || {
                let a = dilate(&s, eps, c, &chamfer)?.measure();
                let b = dilate(&s, eps, c, &brute)?.measure();
                Ok(((a - base) / eps, (b - base) / eps))
            })?;
            Ok(StudyRow {
                epsilon: eps,
                estimate: pair.0,
                reference: Some(pair.1),
                wall_ms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rows, Some(aniso_perimeter(e, c))))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Runs a study and writes its CSV (and SVG when requested).
pub fn run_study(cfg: &StudyConfig) -> Result<StudySummary> {
    let report = execute(cfg)?;
    write_file(&cfg.out, &csv_text(&report.rows))?;
    if let Some(svg) = &cfg.svg {
        let title = format!("{} study: E={} C={}", report.kind, report.e_shape, report.c_shape);
        write_file(svg, &svg_chart(&title, &report.rows, Some(&report.fit), report.limit_reference))?;
    }
    Ok(StudySummary {
        report,
        csv: cfg.out.clone(),
        svg: cfg.svg.clone(),
    })
}
