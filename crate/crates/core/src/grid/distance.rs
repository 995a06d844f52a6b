//! Anisotropic distance `dist_C(x, S) = min_{y ∈ S} h°_C(x - y)` on the lattice.

use rayon::prelude::*;

use crate::body::StructuringBody;
use crate::error::{Error, Result};

use super::{GridDomain, GridSet};

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    domain: GridDomain,
    values: Vec<f64>,
}

impl DistanceField {
    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, idx: usize) -> f64 {
        self.values[idx]
    }
}

/// `dist_C(x, S) - dist_C(x, Ω \ S)`: negative inside, positive outside.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedField {
    domain: GridDomain,
    values: Vec<f64>,
}

impl SignedField {
    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Per-cell `|h_C(∇d) - 1|`; `+∞` where no central difference is available.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualField {
    domain: GridDomain,
    values: Vec<f64>,
}

impl ResidualField {
    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn sample(&self, field: &DistanceField, min_distance: f64) -> Vec<f64> {
        self.values
            .iter()
            .zip(field.values())
            .filter(|&(r, &d)| r.is_finite() && d > min_distance)
            .map(|(&r, _)| r)
            .collect()
    }

    /// Share of evaluated cells with `field > min_distance` whose residual is `<= tol`.
    /// `None` when no such cell exists.
    pub fn fraction_within(&self, field: &DistanceField, min_distance: f64, tol: f64) -> Option<f64> {
        let s = self.sample(field, min_distance);
        if s.is_empty() {
            return None;
        }
        Some(s.iter().filter(|&&r| r <= tol).count() as f64 / s.len() as f64)
    }

    /// Empirical `q`-quantile of the residual over cells with `field > min_distance`.
    pub fn quantile(&self, field: &DistanceField, min_distance: f64, q: f64) -> Option<f64> {
        let mut s = self.sample(field, min_distance);
        if s.is_empty() {
            return None;
        }
        s.sort_by(f64::total_cmp);
        let pos = ((s.len() - 1) as f64 * q.clamp(0.0, 1.0)).round() as usize;
        Some(s[pos])
    }

    pub fn evaluated_cells(&self) -> usize {
        self.values.iter().filter(|r| r.is_finite()).count()
    }
}

fn coords_i64(domain: &GridDomain, idx: usize) -> [i64; 3] {
    let c = domain.coords(idx);
    [c[0] as i64, c[1] as i64, c[2] as i64]
}

#[inline]
fn diff(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Exact `O(N·M)` distance: every cell against every occupied cell.
pub fn brute_distance(s: &GridSet, body: &(impl StructuringBody + ?Sized)) -> Result<DistanceField> {
    let domain = s.domain();
    domain.check_body(body)?;
    let sources: Vec<[i64; 3]> = (0..domain.len())
        .filter(|&i| s.get(i))
        .map(|i| coords_i64(domain, i))
        .collect();
    if sources.is_empty() {
        return Err(Error::EmptySource);
    }
    let dim = domain.dim();
    let values = (0..domain.len())
        .into_par_iter()
        .map(|idx| {
            if s.get(idx) {
                return 0.0;
            }
            let x = coords_i64(domain, idx);
            sources
                .iter()
                .map(|&y| body.gauge_at(&domain.offset_vector(diff(x, y))[..dim]))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    Ok(DistanceField {
        domain: domain.clone(),
        values,
    })
}

/// Two-pass chamfer transform over the `(2r+1)^dim` offset mask.
///
/// Each pass relaxes `d(x) <- d(y) + h°_C(x - y)` over the already-visited half
/// of the mask. The source cell behind every value is tracked and the final
/// value is never below `h°_C(x - source)`, which keeps the result at or
/// above [`brute_distance`] in floating point as well.
pub fn chamfer_distance(
    s: &GridSet,
    body: &(impl StructuringBody + ?Sized),
    mask_radius: usize,
) -> Result<DistanceField> {
    let domain = s.domain();
    domain.check_body(body)?;
    if mask_radius == 0 {
        return Err(Error::DegenerateInput("chamfer mask radius must be >= 1".into()));
    }
    if s.is_empty() {
        return Err(Error::EmptySource);
    }
    let dim = domain.dim();
    let r = mask_radius as i64;
    let rz = if dim == 3 { r } else { 0 };
    let [nx, ny, nz] = domain.extents();
    let ext = [nx as i64, ny as i64, nz as i64];

    // offsets to cells preceding the current one in raster order
    let mut before: Vec<([i64; 3], f64)> = Vec::new();
    for dz in -rz..=rz {
        for dy in -r..=r {
            for dx in -r..=r {
                let precedes = dz < 0 || (dz == 0 && (dy < 0 || (dy == 0 && dx < 0)));
                if precedes {
                    let cost = body.gauge_at(&domain.offset_vector([-dx, -dy, -dz])[..dim]);
                    before.push(([dx, dy, dz], cost));
                }
            }
        }
    }
    let after: Vec<([i64; 3], f64)> = before
        .iter()
        .map(|&([dx, dy, dz], _)| {
            let cost = body.gauge_at(&domain.offset_vector([dx, dy, dz])[..dim]);
            ([-dx, -dy, -dz], cost)
        })
        .collect();

    let n = domain.len();
    let mut values: Vec<f64> = (0..n).map(|i| if s.get(i) { 0.0 } else { f64::INFINITY }).collect();
    let mut src: Vec<usize> = (0..n).map(|i| if s.get(i) { i } else { usize::MAX }).collect();

    let relax = |idx: usize, offsets: &[([i64; 3], f64)], values: &mut [f64], src: &mut [usize]| {
        let c = coords_i64(domain, idx);
        for &(off, cost) in offsets {
            let q = [c[0] + off[0], c[1] + off[1], c[2] + off[2]];
            if (0..3).any(|a| q[a] < 0 || q[a] >= ext[a]) {
                continue;
            }
            let qi = domain.index([q[0] as usize, q[1] as usize, q[2] as usize]);
            let cand = values[qi] + cost;
            if cand < values[idx] {
                values[idx] = cand;
                src[idx] = src[qi];
            }
        }
    };
    for idx in 0..n {
        relax(idx, &before, &mut values, &mut src);
    }
    for idx in (0..n).rev() {
        relax(idx, &after, &mut values, &mut src);
    }
    for idx in 0..n {
        if src[idx] != usize::MAX && src[idx] != idx {
            let direct = body.gauge_at(
                &domain.offset_vector(diff(coords_i64(domain, idx), coords_i64(domain, src[idx])))[..dim],
            );
            values[idx] = values[idx].max(direct);
        }
    }
    Ok(DistanceField {
        domain: domain.clone(),
        values,
    })
}

/// Brute-force signed distance; needs both `S` and `Ω \ S` nonempty.
pub fn signed_distance(s: &GridSet, body: &(impl StructuringBody + ?Sized)) -> Result<SignedField> {
    let outside = s.complement();
    if s.is_empty() || outside.is_empty() {
        return Err(Error::DegenerateSplit);
    }
    let to_set = brute_distance(s, body)?;
    let to_rest = brute_distance(&outside, body)?;
    Ok(SignedField {
        domain: s.domain().clone(),
        values: to_set
            .values
            .iter()
            .zip(&to_rest.values)
            .map(|(a, b)| a - b)
            .collect(),
    })
}

/// `|h_C(∇d) - 1|` with central differences, on cells where `d > 0` and every
/// axis neighbour exists and is finite.
pub fn eikonal_residual(field: &DistanceField, body: &(impl StructuringBody + ?Sized)) -> Result<ResidualField> {
    let domain = field.domain();
    domain.check_body(body)?;
    let dim = domain.dim();
    let ext = domain.extents();
    let h = domain.spacing();
    let vals = field.values();
    let values = (0..domain.len())
        .into_par_iter()
        .map(|idx| {
            let d = vals[idx];
            if !(d > 0.0 && d.is_finite()) {
                return f64::INFINITY;
            }
            let c = domain.coords(idx);
            let mut grad = [0.0; 3];
            for (axis, g) in grad.iter_mut().enumerate().take(dim) {
                if c[axis] == 0 || c[axis] + 1 >= ext[axis] {
                    return f64::INFINITY;
                }
                let mut lo = c;
                let mut hi = c;
                lo[axis] -= 1;
                hi[axis] += 1;
                let (a, b) = (vals[domain.index(lo)], vals[domain.index(hi)]);
                if !a.is_finite() || !b.is_finite() {
                    return f64::INFINITY;
                }
                *g = (b - a) / (2.0 * h);
            }
            (body.support_at(&grad[..dim]) - 1.0).abs()
        })
        .collect();
    Ok(ResidualField {
        domain: domain.clone(),
        values,
    })
}
