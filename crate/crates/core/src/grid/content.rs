//! Dilations and Minkowski-type contents on the lattice.

use crate::body::{Ball, StructuringBody};
use crate::error::{Error, Result};

use super::distance::{signed_distance, DistanceField};
use super::stencil::{within_radius, Stencil};
use super::GridSet;

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveScale(eps))
    }
}

/// `{x : field(x) <= ε}` for a distance field computed from `s`.
pub fn dilate(s: &GridSet, eps: f64, body: &(impl StructuringBody + ?Sized), field: &DistanceField) -> Result<GridSet> {
    check_eps(eps)?;
    s.domain().check_body(body)?;
    if field.domain() != s.domain() {
        return Err(Error::MismatchedField);
    }
    if (0..s.domain().len()).any(|i| s.get(i) && field.get(i) != 0.0) {
        return Err(Error::MismatchedField);
    }
    let mask = field.values().iter().map(|&d| within_radius(d, eps)).collect();
    GridSet::new(s.domain().clone(), mask)
}

/// `Ω ∩ (S + εC)` without a distance field: for every stencil row the
/// window test runs on prefix counts of the source line. Agrees cell for
/// cell with [`dilate`] on [`brute_distance`](super::brute_distance).
pub fn dilate_direct(s: &GridSet, eps: f64, body: &(impl StructuringBody + ?Sized)) -> Result<GridSet> {
    let domain = s.domain();
    let stencil = Stencil::new(domain, body, eps)?;
    let nx = domain.extents()[0];
    let lines = domain.len() / nx;
    let mut prefix = vec![0u32; lines * (nx + 1)];
    for line in 0..lines {
        let p = &mut prefix[line * (nx + 1)..(line + 1) * (nx + 1)];
        for i in 0..nx {
            p[i + 1] = p[i] + s.get(line * nx + i) as u32;
        }
    }
    let mut mask = s.mask().to_vec();
    stencil.for_each_line_pair(domain, |out, src, row| {
        let p = &prefix[src * (nx + 1)..(src + 1) * (nx + 1)];
        if p[nx] == 0 {
            return;
        }
        let out_mask = &mut mask[out * nx..(out + 1) * nx];
        for (i, cell) in out_mask.iter_mut().enumerate() {
            if *cell {
                continue;
            }
            // sources y with i - y in [lo, hi]
            let a = (i as i64 - row.hi).max(0);
            let b = (i as i64 - row.lo).min(nx as i64 - 1);
            if a <= b && p[(b + 1) as usize] > p[a as usize] {
                *cell = true;
            }
        }
    });
    GridSet::new(domain.clone(), mask)
}

/// `(|Ω ∩ (S + εC)| - |S|) / ε`.
pub fn sm0_grid(s: &GridSet, eps: f64, body: &(impl StructuringBody + ?Sized)) -> Result<f64> {
    check_eps(eps)?;
    s.domain().check_body(body)?;
    if s.is_empty() {
        return Ok(0.0);
    }
    let grown = dilate_direct(s, eps, body)?;
    let added = grown.count() - s.count();
    Ok(added as f64 * s.domain().cell_volume() / eps)
}

/// Average of the outer contents of `S` and of `Ω \ S`.
pub fn symmetric_content_grid(s: &GridSet, eps: f64, body: &(impl StructuringBody + ?Sized)) -> Result<f64> {
    let inner = sm0_grid(s, eps, body)?;
    let outer = sm0_grid(&s.complement(), eps, body)?;
    Ok(0.5 * (inner + outer))
}

/// `|{x : |d_S(x)| <= ε}| / (2ε)` with the Euclidean signed distance.
pub fn boundary_content(s: &GridSet, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let ball = Ball::unit(s.domain().dim())?;
    let d = signed_distance(s, &ball)?;
    let strip = d.values().iter().filter(|v| within_radius(v.abs(), eps)).count();
    Ok(strip as f64 * s.domain().cell_volume() / (2.0 * eps))
}
