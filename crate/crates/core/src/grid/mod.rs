//! Cell-centred sampling lattices over a box-shaped domain, and the grid
//! estimators built on them.
//!
//! Cells are indexed `i + nx * (j + ny * k)`; the centre of cell `(i, j, k)` is
//! `origin + (i + ½, j + ½, k + ½) h`. Planar domains have `nz = 1`.

mod content;
mod distance;
mod stencil;

pub use content::{boundary_content, dilate, dilate_direct, sm0_grid, symmetric_content_grid};
pub use distance::{
    brute_distance, chamfer_distance, eikonal_residual, signed_distance, DistanceField, ResidualField,
    SignedField,
};
pub use stencil::{within_radius, Stencil, StencilRow, DILATION_RTOL};

use std::fmt::Write as _;

use crate::body::StructuringBody;
use crate::error::{Error, Result};
use crate::polygon::SimplePolygon;
use crate::vec2::Vec2;

#[derive(Debug, Clone, PartialEq)]
pub struct GridDomain {
    dim: usize,
    origin: [f64; 3],
    spacing: f64,
    extents: [usize; 3],
}

impl GridDomain {
    pub fn new_2d(origin: [f64; 2], spacing: f64, extents: [usize; 2]) -> Result<Self> {
        Self::build(2, [origin[0], origin[1], 0.0], spacing, [extents[0], extents[1], 1])
    }

    pub fn new_3d(origin: [f64; 3], spacing: f64, extents: [usize; 3]) -> Result<Self> {
        Self::build(3, origin, spacing, extents)
    }

    fn build(dim: usize, origin: [f64; 3], spacing: f64, extents: [usize; 3]) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidDomain(format!("spacing {spacing} must be positive")));
        }
        if extents.contains(&0) {
            return Err(Error::InvalidDomain(format!("extents {extents:?} must be >= 1")));
        }
        if origin.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDomain("non-finite origin".into()));
        }
        Ok(Self {
            dim,
            origin,
            spacing,
            extents,
        })
    }

    /// Smallest planar domain with spacing `h` covering `[lo - margin, hi + margin]`.
    pub fn covering(lo: Vec2, hi: Vec2, margin: f64, h: f64) -> Result<Self> {
        let nx = (((hi.x - lo.x) + 2.0 * margin) / h).ceil().max(1.0) as usize;
        let ny = (((hi.y - lo.y) + 2.0 * margin) / h).ceil().max(1.0) as usize;
        Self::new_2d([lo.x - margin, lo.y - margin], h, [nx, ny])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn extents(&self) -> [usize; 3] {
        self.extents
    }

    /// Number of cells.
    pub fn len(&self) -> usize {
        self.extents.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `h^dim`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    /// Total measure of the domain.
    pub fn measure(&self) -> f64 {
        self.len() as f64 * self.cell_volume()
    }

    #[inline]
    pub fn index(&self, c: [usize; 3]) -> usize {
        c[0] + self.extents[0] * (c[1] + self.extents[1] * c[2])
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let [nx, ny, _] = self.extents;
        [idx % nx, (idx / nx) % ny, idx / (nx * ny)]
    }

    /// Centre of a cell; only the first `dim` entries are meaningful.
    pub fn center(&self, idx: usize) -> [f64; 3] {
        let c = self.coords(idx);
        let h = self.spacing;
        [
            self.origin[0] + (c[0] as f64 + 0.5) * h,
            self.origin[1] + (c[1] as f64 + 0.5) * h,
            self.origin[2] + (c[2] as f64 + 0.5) * h,
        ]
    }

    /// Physical vector between cell centres separated by integer offset `d`.
    /// Every gauge evaluation on the lattice goes through here so that all
    /// estimators agree bit for bit.
    #[inline]
    pub fn offset_vector(&self, d: [i64; 3]) -> [f64; 3] {
        let h = self.spacing;
        [d[0] as f64 * h, d[1] as f64 * h, d[2] as f64 * h]
    }

    pub(crate) fn check_body(&self, body: &(impl StructuringBody + ?Sized)) -> Result<()> {
        if body.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: body.dim(),
            });
        }
        Ok(())
    }
}

/// Discretised indicator of a set, one flag per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSet {
    domain: GridDomain,
    mask: Vec<bool>,
}

impl GridSet {
    pub fn new(domain: GridDomain, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != domain.len() {
            return Err(Error::InvalidDomain(format!(
                "mask has {} cells, domain has {}",
                mask.len(),
                domain.len()
            )));
        }
        Ok(Self { domain, mask })
    }

    pub fn empty(domain: &GridDomain) -> Self {
        Self {
            mask: vec![false; domain.len()],
            domain: domain.clone(),
        }
    }

    pub fn full(domain: &GridDomain) -> Self {
        Self {
            mask: vec![true; domain.len()],
            domain: domain.clone(),
        }
    }

    /// Marks every cell whose centre satisfies `pred`.
    pub fn from_fn(domain: &GridDomain, mut pred: impl FnMut(&[f64]) -> bool) -> Self {
        let d = domain.dim();
        let mask = (0..domain.len()).map(|i| pred(&domain.center(i)[..d])).collect();
        Self {
            domain: domain.clone(),
            mask,
        }
    }

    pub fn domain(&self) -> &GridDomain {
        &self.domain
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn get(&self, idx: usize) -> bool {
        self.mask[idx]
    }

    pub fn set(&mut self, idx: usize, value: bool) {
        self.mask[idx] = value;
    }

    pub fn count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    /// Occupied cell count times `h^dim`.
    pub fn measure(&self) -> f64 {
        self.count() as f64 * self.domain.cell_volume()
    }

    /// `Ω \ S`.
    pub fn complement(&self) -> Self {
        Self {
            domain: self.domain.clone(),
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    fn zip_with(&self, other: &GridSet, f: impl Fn(bool, bool) -> bool) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::InvalidDomain("sets live on different domains".into()));
        }
        Ok(Self {
            domain: self.domain.clone(),
            mask: self.mask.iter().zip(&other.mask).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn union(&self, other: &GridSet) -> Result<Self> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &GridSet) -> Result<Self> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn is_subset(&self, other: &GridSet) -> bool {
        self.domain == other.domain && self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }

    /// Debug raster: header `P1-like: nx ny h`, then one row of `0`/`1` per `j`.
    pub fn to_pgm_text(&self) -> Result<String> {
        if self.domain.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: self.domain.dim(),
            });
        }
        let [nx, ny, _] = self.domain.extents();
        let mut out = String::with_capacity(nx * ny * 2 + 32);
        let _ = writeln!(out, "P1-like: {nx} {ny} {}", self.domain.spacing());
        for j in 0..ny {
            let row: Vec<&str> = (0..nx)
                .map(|i| if self.mask[i + nx * j] { "1" } else { "0" })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        Ok(out)
    }
}

/// Even-odd rasterisation at cell centres, one scanline per grid row.
pub fn rasterize(e: &SimplePolygon, domain: &GridDomain) -> Result<GridSet> {
    if domain.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: domain.dim(),
        });
    }
    let [nx, ny, _] = domain.extents();
    let h = domain.spacing();
    let [ox, oy, _] = domain.origin();
    let verts = e.vertices();
    let n = verts.len();
    let mut mask = vec![false; nx * ny];
    let mut crossings: Vec<f64> = Vec::new();
    for j in 0..ny {
        let y = oy + (j as f64 + 0.5) * h;
        crossings.clear();
        for k in 0..n {
            let a = verts[k];
            let b = verts[(k + 1) % n];
            if (a.y > y) != (b.y > y) {
                crossings.push(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        crossings.sort_by(f64::total_cmp);
        for pair in crossings.chunks_exact(2) {
            // cells with x_left <= centre < x_right, matching the even-odd point test
            let first = (((pair[0] - ox) / h) - 0.5).ceil().max(0.0);
            let last = (((pair[1] - ox) / h) - 0.5).ceil().min(nx as f64);
            if last <= first {
                continue;
            }
            let (first, last) = (first as usize, last as usize);
            for i in first..last {
                let x = ox + (i as f64 + 0.5) * h;
                if x >= pair[0] && x < pair[1] {
                    mask[i + nx * j] = true;
                }
            }
            // guard the rounding at both ends
            for i in [first.wrapping_sub(1), last] {
                if i < nx {
                    let x = ox + (i as f64 + 0.5) * h;
                    if x >= pair[0] && x < pair[1] {
                        mask[i + nx * j] = true;
                    }
                }
            }
        }
    }
    GridSet::new(domain.clone(), mask)
}

pub fn measure(s: &GridSet) -> f64 {
    s.measure()
}
