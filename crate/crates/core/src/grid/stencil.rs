use crate::body::StructuringBody;
use crate::error::{Error, Result};

use super::GridDomain;

/// Relative slack in the closed sublevel test `gauge <= ε`. Absorbs round-off
/// in the gauge so that pointwise gauge dominance carries over to the lattice.
pub const DILATION_RTOL: f64 = 1e-10;

#[inline]
pub fn within_radius(gauge: f64, eps: f64) -> bool {
    gauge <= eps * (1.0 + DILATION_RTOL)
}

/// Contiguous run `lo..=hi` of x-offsets at fixed `(dy, dz)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StencilRow {
    pub dy: i64,
    pub dz: i64,
    pub lo: i64,
    pub hi: i64,
}

/// Lattice offsets `k` with `gauge(C, k h) <= ε`, stored row by row.
///
/// A line meets a convex set in an interval, so each row is a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    rows: Vec<StencilRow>,
}

impl Stencil {
    pub fn new(domain: &GridDomain, body: &(impl StructuringBody + ?Sized), eps: f64) -> Result<Self> {
        domain.check_body(body)?;
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::NonPositiveScale(eps));
        }
        let h = domain.spacing();
        let reach = (body.outer_radius() * eps / h).ceil() as i64 + 1;
        let rz = if domain.dim() == 3 { reach } else { 0 };
        let dim = domain.dim();
        let mut rows = Vec::new();
        for dz in -rz..=rz {
            for dy in -reach..=reach {
                let mut lo = i64::MAX;
                let mut hi = i64::MIN;
                for dx in -reach..=reach {
                    let v = domain.offset_vector([dx, dy, dz]);
                    if within_radius(body.gauge_at(&v[..dim]), eps) {
                        lo = lo.min(dx);
                        hi = hi.max(dx);
                    }
                }
                if lo <= hi {
                    rows.push(StencilRow { dy, dz, lo, hi });
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[StencilRow] {
        &self.rows
    }

    /// Number of offsets.
    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| (r.hi - r.lo + 1) as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, d: [i64; 3]) -> bool {
        self.rows
            .iter()
            .any(|r| r.dy == d[1] && r.dz == d[2] && r.lo <= d[0] && d[0] <= r.hi)
    }

    /// Calls `f(out_line, src_line, row)` for every pair of grid lines (runs
    /// along x) coupled by a stencil row. Line ids are `j + ny * k`.
    pub(crate) fn for_each_line_pair(&self, domain: &GridDomain, mut f: impl FnMut(usize, usize, &StencilRow)) {
        let [_, ny, nz] = domain.extents();
        let (ny, nz) = (ny as i64, nz as i64);
        for k in 0..nz {
            for j in 0..ny {
                let out = (j + ny * k) as usize;
                for row in &self.rows {
                    let (sj, sk) = (j - row.dy, k - row.dz);
                    if sj < 0 || sj >= ny || sk < 0 || sk >= nz {
                        continue;
                    }
                    f(out, (sj + ny * sk) as usize, row);
                }
            }
        }
    }
}
