//! Convex structuring bodies.
//!
//! A [`ConvexBody`] is a convex polygon with the origin strictly inside. It
//! carries the facet data (unit outer normals and offsets) so that the support
//! function and the gauge are both cheap:
//!
//! - `support(ν) = max_i v_i · ν` over the vertices,
//! - `gauge(x)   = (n_f · x) / d_f` for the facet `f` whose angular sector holds `x`.
//!
//! Grid code works against the dimension-agnostic [`StructuringBody`] trait so
//! that the same dilation and distance routines run with polygons, Euclidean
//! balls and axis-aligned boxes (the latter two also in 3D).

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::vec2::{signed_area, Vec2};

/// Absolute tolerance for geometric predicates at unit scale.
pub const GEOM_TOL: f64 = 1e-12;

/// Vertex count used when a disk is approximated by an inscribed polygon.
pub const DEFAULT_DISK_VERTICES: usize = 64;

/// Anything usable as the structuring element of a grid dilation.
pub trait StructuringBody: Sync {
    fn dim(&self) -> usize;
    /// Minkowski functional `min{t >= 0 : x ∈ tC}`; `x.len() == dim()`.
    fn gauge_at(&self, x: &[f64]) -> f64;
    /// `sup_{c ∈ C} c · ν`.
    fn support_at(&self, nu: &[f64]) -> f64;
    /// Largest `a` with `B(0, a) ⊆ C`.
    fn inner_radius(&self) -> f64;
    /// Smallest `b` with `C ⊆ B(0, b)`.
    fn outer_radius(&self) -> f64;
}

/// Closed convex polygon with the origin strictly in its interior.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    vertices: Vec<Vec2>,
    /// Unit outer normal of edge `i` (from vertex `i` to `i + 1`).
    normals: Vec<Vec2>,
    /// Distance from the origin to the line of edge `i`.
    offsets: Vec<f64>,
    /// Vertex polar angles, rotated to be increasing from `sector_start`.
    sorted_angles: Vec<f64>,
    sector_start: usize,
    inner_radius: f64,
    outer_radius: f64,
}

impl ConvexBody {
    /// Builds the body as the convex hull of `points`.
    pub fn new(points: &[Vec2]) -> Result<Self> {
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::DegenerateInput("non-finite coordinate".into()));
        }
        let hull = convex_hull(points);
        if hull.len() < 3 {
            return Err(Error::DegenerateInput(format!(
                "convex hull has {} vertices",
                hull.len()
            )));
        }
        Self::from_ccw_hull(hull)
    }

    /// Regular `m`-gon inscribed in the circle of `radius`, with a vertex on the positive x-axis.
    pub fn regular(m: usize, radius: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::DegenerateInput(format!("regular polygon with {m} sides")));
        }
        if radius.is_nan() || radius <= 0.0 {
            return Err(Error::NonPositiveScale(radius));
        }
        let pts: Vec<Vec2> = (0..m)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / m as f64;
                Vec2::new(radius * t.cos(), radius * t.sin())
            })
            .collect();
        Self::new(&pts)
    }

    /// Unit disk approximated by the inscribed regular [`DEFAULT_DISK_VERTICES`]-gon.
    pub fn disk() -> Self {
        Self::regular(DEFAULT_DISK_VERTICES, 1.0).expect("valid regular polygon")
    }

    /// Reads a vertex file and builds the hull of its points.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::new(&read_vertex_file(path)?)
    }

    fn from_ccw_hull(vertices: Vec<Vec2>) -> Result<Self> {
        let vertices = canonical_start(vertices);
        let n = vertices.len();
        let mut normals = Vec::with_capacity(n);
        let mut offsets = Vec::with_capacity(n);
        for i in 0..n {
            let e = vertices[(i + 1) % n] - vertices[i];
            let len = e.norm();
            if len <= GEOM_TOL {
                return Err(Error::DegenerateInput("zero-length edge".into()));
            }
            let nrm = e.perp_cw() / len;
            let d = nrm.dot(vertices[i]);
            if d <= GEOM_TOL {
                return Err(Error::OriginNotInterior);
            }
            normals.push(nrm);
            offsets.push(d);
        }
        let angles: Vec<f64> = vertices.iter().map(|v| v.angle()).collect();
        let sector_start = (0..n)
            .min_by(|&i, &j| angles[i].total_cmp(&angles[j]))
            .unwrap_or(0);
        let sorted_angles = (0..n).map(|k| angles[(sector_start + k) % n]).collect();
        let inner_radius = offsets.iter().copied().fold(f64::INFINITY, f64::min);
        let outer_radius = vertices.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(Self {
            vertices,
            normals,
            offsets,
            sorted_angles,
            sector_start,
            inner_radius,
            outer_radius,
        })
    }

    /// Vertices in counterclockwise order, starting from the vertex with
    /// the smallest polar angle in `[0, 2π)`.
    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    /// `h_C(ν) = max_{x ∈ C} x · ν`, attained at a vertex.
    pub fn support(&self, nu: Vec2) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(nu))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Polar function `h°_C(x) = min{t >= 0 : x ∈ tC}`.
    pub fn gauge(&self, x: Vec2) -> f64 {
        if x == Vec2::ZERO {
            return 0.0;
        }
        let n = self.vertices.len();
        let phi = x.angle();
        let k = self.sorted_angles.partition_point(|&a| a <= phi);
        let facet = (self.sector_start + k + n - 1) % n;
        // Near a sector boundary the angle test can be off by one facet, so the
        // neighbours are evaluated too. The true value is the maximum.
        let eval = |f: usize| self.normals[f].dot(x) / self.offsets[f];
        eval(facet)
            .max(eval((facet + 1) % n))
            .max(eval((facet + n - 1) % n))
    }

    /// Vertices multiplied by `t`.
    pub fn scale(&self, t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::NonPositiveScale(t));
        }
        Self::from_ccw_hull(self.vertices.iter().map(|&v| v * t).collect())
    }

    /// The body `-C`.
    pub fn reflect(&self) -> Self {
        // Point reflection preserves orientation, so CCW order survives.
        Self::from_ccw_hull(self.vertices.iter().map(|&v| -v).collect())
            .expect("reflection of a valid body is valid")
    }

    pub fn minkowski_sum(&self, other: &ConvexBody) -> ConvexBody {
        Self::from_ccw_hull(minkowski_sum_convex(&self.vertices, &other.vertices))
            .expect("sum of bodies containing the origin contains the origin")
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// `x ∈ C` up to [`GEOM_TOL`].
    pub fn contains(&self, x: Vec2) -> bool {
        self.normals
            .iter()
            .zip(&self.offsets)
            .all(|(n, d)| n.dot(x) <= d + GEOM_TOL)
    }
}

impl StructuringBody for ConvexBody {
    fn dim(&self) -> usize {
        2
    }

    fn gauge_at(&self, x: &[f64]) -> f64 {
        self.gauge(Vec2::new(x[0], x[1]))
    }

    fn support_at(&self, nu: &[f64]) -> f64 {
        self.support(Vec2::new(nu[0], nu[1]))
    }

    fn inner_radius(&self) -> f64 {
        self.inner_radius
    }

    fn outer_radius(&self) -> f64 {
        self.outer_radius
    }
}

/// Exact Euclidean ball centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    dim: usize,
    radius: f64,
}

impl Ball {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::DimensionMismatch { expected: 2, got: dim });
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::NonPositiveScale(radius));
        }
        Ok(Self { dim, radius })
    }

    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(dim, 1.0)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

fn euclid(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl StructuringBody for Ball {
    fn dim(&self) -> usize {
        self.dim
    }

    fn gauge_at(&self, x: &[f64]) -> f64 {
        euclid(x) / self.radius
    }

    fn support_at(&self, nu: &[f64]) -> f64 {
        euclid(nu) * self.radius
    }

    fn inner_radius(&self) -> f64 {
        self.radius
    }

    fn outer_radius(&self) -> f64 {
        self.radius
    }
}

/// Axis-aligned box `Π [lo_i, hi_i]` with `lo_i < 0 < hi_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxBody {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxBody {
    pub fn new(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if !(2..=3).contains(&lo.len()) {
            return Err(Error::DimensionMismatch { expected: 2, got: lo.len() });
        }
        if lo.iter().zip(hi).any(|(&l, &h)| !(l < 0.0 && h > 0.0)) {
            return Err(Error::OriginNotInterior);
        }
        Ok(Self {
            lo: lo.to_vec(),
            hi: hi.to_vec(),
        })
    }

    /// `[-r, r]^dim`.
    pub fn cube(dim: usize, r: f64) -> Result<Self> {
        Self::new(&vec![-r; dim], &vec![r; dim])
    }

    /// Extent of the box along each axis.
    pub fn widths(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).collect()
    }
}

impl StructuringBody for BoxBody {
    fn dim(&self) -> usize {
        self.lo.len()
    }

    fn gauge_at(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&v, (&l, &h))| if v >= 0.0 { v / h } else { v / l })
            .fold(0.0, f64::max)
    }

    fn support_at(&self, nu: &[f64]) -> f64 {
        nu.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .map(|(&v, (&l, &h))| (v * l).max(v * h))
            .sum()
    }

    fn inner_radius(&self) -> f64 {
        self.lo
            .iter()
            .chain(&self.hi)
            .map(|v| v.abs())
            .fold(f64::INFINITY, f64::min)
    }

    fn outer_radius(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| l.abs().max(h.abs()).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Rotates a counterclockwise loop so that it starts at the vertex with the
/// smallest polar angle in `[0, 2π)`; negative zeros become positive.
fn canonical_start(mut vertices: Vec<Vec2>) -> Vec<Vec2> {
    for v in &mut vertices {
        v.x += 0.0;
        v.y += 0.0;
    }
    let key = |v: &Vec2| {
        let a = v.angle();
        if a < 0.0 {
            a + 2.0 * std::f64::consts::PI
        } else {
            a
        }
    };
    if let Some(start) = (0..vertices.len()).min_by(|&i, &j| key(&vertices[i]).total_cmp(&key(&vertices[j]))) {
        vertices.rotate_left(start);
    }
    vertices
}

/// Convex hull in CCW order (Andrew's monotone chain). Points closer than
/// [`GEOM_TOL`] are merged and collinear vertices dropped.
pub fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = Vec::with_capacity(points.len());
    for &p in points {
        if !pts.iter().any(|q| (p - *q).norm() <= GEOM_TOL) {
            pts.push(p);
        }
    }
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                if (b - a).cross(p - a) <= GEOM_TOL {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Drops vertices whose incident edges are collinear (or that repeat the previous vertex).
pub fn remove_collinear(pts: &[Vec2]) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = pts.to_vec();
    loop {
        let n = out.len();
        if n < 3 {
            return out;
        }
        let mut removed = false;
        let mut i = 0;
        while i < out.len() && out.len() >= 3 {
            let n = out.len();
            let prev = out[(i + n - 1) % n];
            let cur = out[i];
            let next = out[(i + 1) % n];
            let e1 = cur - prev;
            let e2 = next - cur;
            let scale = e1.norm().max(e2.norm()).max(1.0);
            if e1.norm() <= GEOM_TOL || (e1.cross(e2).abs() <= GEOM_TOL * scale && e1.dot(e2) > 0.0) {
                out.remove(i);
                removed = true;
            } else {
                i += 1;
            }
        }
        if !removed {
            return out;
        }
    }
}

fn bottom_index(pts: &[Vec2]) -> usize {
    (0..pts.len())
        .min_by(|&i, &j| {
            pts[i]
                .y
                .total_cmp(&pts[j].y)
                .then(pts[i].x.total_cmp(&pts[j].x))
        })
        .unwrap_or(0)
}

/// Minkowski sum of two convex CCW polygons by merging their edge sequences
/// in polar-angle order. `O(m + n)`.
pub fn minkowski_sum_convex(p: &[Vec2], q: &[Vec2]) -> Vec<Vec2> {
    let (m, n) = (p.len(), q.len());
    let (ip, iq) = (bottom_index(p), bottom_index(q));
    let pv = |k: usize| p[(ip + k) % m];
    let qv = |k: usize| q[(iq + k) % n];
    let mut out = Vec::with_capacity(m + n);
    let (mut i, mut j) = (0usize, 0usize);
    while i < m || j < n {
        out.push(pv(i) + qv(j));
        let ep = pv(i + 1) - pv(i);
        let eq = qv(j + 1) - qv(j);
        let c = ep.cross(eq);
        if j >= n || (i < m && c > 0.0) {
            i += 1;
        } else if i >= m || c < 0.0 {
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    remove_collinear(&out)
}

/// Parses the plain-text vertex format: one `x y` pair per line, `#` starts a
/// comment line, blank lines are skipped.
pub fn parse_vertices(text: &str) -> Result<Vec<Vec2>> {
    let mut pts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("expected two numbers, found {}", fields.len()),
            });
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    msg: format!("not a finite number: `{s}`"),
                })
        };
        pts.push(Vec2::new(num(fields[0])?, num(fields[1])?));
    }
    Ok(pts)
}

pub fn read_vertex_file(path: impl AsRef<Path>) -> Result<Vec<Vec2>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_vertices(&text)
}

pub fn format_vertices(pts: &[Vec2]) -> String {
    pts.iter().map(|p| format!("{} {}\n", p.x, p.y)).collect()
}
