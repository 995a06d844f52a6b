//! The sup-filter `v(x) = max_{Ω ∩ (x - εC)} u` and the functional
//! `F_ε(u) = (1/ε) ∫ (v - u)`, with its level-set (coarea) decomposition.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use crate::body::{ConvexBody, StructuringBody};
use crate::error::{Error, Result};
use crate::grid::{sm0_grid, GridDomain, GridSet, Stencil};
use crate::polygon::{aniso_perimeter, SimplePolygon};
use crate::vec2::Vec2;

/// Cap on the number of distinct values accepted by [`LevelDecomposition`].
pub const MAX_LEVELS: usize = 4096;

/// Default number of levels used by [`ScalarField::quantize`] callers.
pub const DEFAULT_LEVELS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    domain: GridDomain,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(domain: GridDomain, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::InvalidDomain(format!(
                "field has {} values, domain has {} cells",
                values.len(),
                domain.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateInput("field values must be finite".into()));
        }
        Ok(Self { domain, values })
    }

    pub fn from_fn(domain: &GridDomain, mut f: impl FnMut(&[f64]) -> f64) -> Result<Self> {
        let d = domain.dim();
        let values = (0..domain.len()).map(|i| f(&domain.center(i)[..d])).collect();
        Self::new(domain.clone(), values)
    }

    pub fn constant(domain: &GridDomain, c: f64) -> Result<Self> {
        Self::new(domain.clone(), vec![c; domain.len()])
    }

    /// `c · χ_S`.
    pub fn indicator(s: &GridSet, c: f64) -> Self {
        Self {
            domain: s.domain().clone(),
            values: s.mask().iter().map(|&b| if b { c } else { 0.0 }).collect(),
        }
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.domain.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// Rounds onto `levels` equispaced values spanning `[min, max]`.
    pub fn quantize(&self, levels: usize) -> Result<Self> {
        if levels < 2 {
            return Err(Error::DegenerateInput("need at least two levels".into()));
        }
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi <= lo {
            return Ok(self.clone());
        }
        let step = (hi - lo) / (levels - 1) as f64;
        self.map(|v| lo + ((v - lo) / step).round() * step)
    }

    /// `{u > s}`.
    pub fn superlevel(&self, s: f64) -> GridSet {
        GridSet::new(self.domain.clone(), self.values.iter().map(|&v| v > s).collect())
            .expect("same domain")
    }

    /// Plain-text form: header `nx ny h`, then one row of values per `j`.
    pub fn to_text(&self) -> Result<String> {
        if self.domain.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: self.domain.dim(),
            });
        }
        let [nx, ny, _] = self.domain.extents();
        let mut out = String::new();
        let _ = writeln!(out, "{nx} {ny} {}", self.domain.spacing());
        for row in self.values.chunks(nx).take(ny) {
            let items: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&items.join(" "));
            out.push('\n');
        }
        Ok(out)
    }

    /// Parses [`to_text`](Self::to_text) output; the domain origin is `(0, 0)`.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || Error::Parse {
            line: hline + 1,
            msg: "header must be `nx ny h`".into(),
        };
        if parts.len() != 3 {
            return Err(bad_header());
        }
        let nx: usize = parts[0].parse().map_err(|_| bad_header())?;
        let ny: usize = parts[1].parse().map_err(|_| bad_header())?;
        let h: f64 = parts[2].parse().map_err(|_| bad_header())?;
        let domain = GridDomain::new_2d([0.0, 0.0], h, [nx, ny])?;
        let mut values = Vec::with_capacity(nx * ny);
        for (idx, line) in lines {
            for tok in line.split_whitespace() {
                let v: f64 = tok.parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("not a number: `{tok}`"),
                })?;
                values.push(v);
            }
        }
        if values.len() != nx * ny {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {} values, found {}", nx * ny, values.len()),
            });
        }
        Self::new(domain, values)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()?).map_err(|e| Error::io(path, e))
    }
}

/// Distinct values `s_1 < … < s_m` of a field with the superlevel sets `{u > s_k}`.
#[derive(Debug, Clone)]
pub struct LevelDecomposition {
    thresholds: Vec<f64>,
    superlevels: Vec<GridSet>,
}

impl LevelDecomposition {
    pub fn of(u: &ScalarField) -> Result<Self> {
        let mut thresholds = u.values().to_vec();
        thresholds.sort_by(f64::total_cmp);
        thresholds.dedup();
        if thresholds.len() > MAX_LEVELS {
            return Err(Error::TooManyLevels(thresholds.len()));
        }
        let superlevels = thresholds.iter().map(|&s| u.superlevel(s)).collect();
        Ok(Self {
            thresholds,
            superlevels,
        })
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn superlevels(&self) -> &[GridSet] {
        &self.superlevels
    }
}

/// `v(x) = max { u(y) : y ∈ Ω, h°_C(x - y) <= ε }`.
///
/// Each stencil row contributes a sliding-window maximum along its source
/// line (monotone deque), so the cost is `O(N · rows)`.
pub fn sup_filter(u: &ScalarField, eps: f64, body: &(impl StructuringBody + ?Sized)) -> Result<ScalarField> {
    let domain = u.domain();
    let stencil = Stencil::new(domain, body, eps)?;
    let nx = domain.extents()[0];
    let mut out = u.values().to_vec();
    let vals = u.values();
    let mut deque: VecDeque<usize> = VecDeque::with_capacity(nx);
    stencil.for_each_line_pair(domain, |o, s, row| {
        let src = &vals[s * nx..(s + 1) * nx];
        let dst = &mut out[o * nx..(o + 1) * nx];
        deque.clear();
        let mut next = 0usize;
        for (i, slot) in dst.iter_mut().enumerate() {
            // window of source indices [i - hi, i - lo]
            let right = i as i64 - row.lo;
            let left = i as i64 - row.hi;
            while (next as i64) <= right && next < nx {
                while deque.back().is_some_and(|&b| src[b] <= src[next]) {
                    deque.pop_back();
                }
                deque.push_back(next);
                next += 1;
            }
            while deque.front().is_some_and(|&f| (f as i64) < left) {
                deque.pop_front();
            }
            if let Some(&f) = deque.front() {
                if src[f] > *slot {
                    *slot = src[f];
                }
            }
        }
    });
    ScalarField::new(domain.clone(), out)
}

/// Fixed-order pairwise sum, reproducible regardless of how callers parallelise.
fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// `h^d Σ (v - u) / ε` over the whole domain.
pub fn f_eps(u: &ScalarField, eps: f64, body: &(impl StructuringBody + ?Sized)) -> Result<f64> {
    let v = sup_filter(u, eps, body)?;
    let gaps: Vec<f64> = v.values().iter().zip(u.values()).map(|(a, b)| a - b).collect();
    Ok(pairwise_sum(&gaps) * u.domain().cell_volume() / eps)
}

/// [`f_eps`] with the sum restricted to the cells of `window` (the filter
/// itself still sees all of Ω).
pub fn f_eps_on(
    u: &ScalarField,
    eps: f64,
    body: &(impl StructuringBody + ?Sized),
    window: &GridSet,
) -> Result<f64> {
    if window.domain() != u.domain() {
        return Err(Error::InvalidDomain("window lives on a different domain".into()));
    }
    let v = sup_filter(u, eps, body)?;
    let gaps: Vec<f64> = v
        .values()
        .iter()
        .zip(u.values())
        .zip(window.mask())
        .filter(|(_, &w)| w)
        .map(|((a, b), _)| a - b)
        .collect();
    Ok(pairwise_sum(&gaps) * u.domain().cell_volume() / eps)
}

/// `Σ_k (s_{k+1} - s_k) · SM_ε({u > s_k})` for a finitely-valued field.
pub fn coarea_sum(u: &ScalarField, eps: f64, body: &(impl StructuringBody + ?Sized)) -> Result<f64> {
    u.domain().check_body(body)?;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::NonPositiveScale(eps));
    }
    let levels = LevelDecomposition::of(u)?;
    let t = levels.thresholds();
    let mut terms = Vec::with_capacity(t.len());
    for k in 0..t.len().saturating_sub(1) {
        let jump = t[k + 1] - t[k];
        terms.push(jump * sm0_grid(&levels.superlevels()[k], eps, body)?);
    }
    Ok(pairwise_sum(&terms))
}

/// Limit of `f_eps` on the rasterised indicator of `E`: `P_{h_C}(E)`.
pub fn tv_indicator_reference(e: &SimplePolygon, c: &ConvexBody) -> f64 {
    aniso_perimeter(e, c)
}

/// `|Ω'| · h_C(-g)`, the limit for the affine field `u(x) = g · x`.
pub fn affine_reference(g: Vec2, c: &ConvexBody, window_measure: f64) -> Result<f64> {
    if window_measure.is_nan() || window_measure <= 0.0 {
        return Err(Error::DegenerateInput("window measure must be positive".into()));
    }
    Ok(window_measure * c.support(-g))
}
