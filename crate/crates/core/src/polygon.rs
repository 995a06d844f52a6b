//! Exact planar pipeline: simple polygons, their outer normals, anisotropic
//! perimeters and the outer Minkowski content of convex sets.
//!
//! For convex `E` and a convex polygon `C` the area of `E ⊕ εC` is a quadratic
//! in `ε` with linear coefficient `P_{h_C}(E)` and quadratic coefficient `|C|`,
//! so the outer content `(|E ⊕ εC| - |E|)/ε` is exactly affine in `ε`. Every
//! grid estimator in this crate is checked against these values.

use crate::body::{convex_hull, minkowski_sum_convex, remove_collinear, ConvexBody, GEOM_TOL};
use crate::error::{Error, Result};
use crate::vec2::{signed_area, Vec2};

/// Simple, positively oriented polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePolygon {
    vertices: Vec<Vec2>,
}

/// Boundary edge with its outer unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedEdge {
    pub start: Vec2,
    pub end: Vec2,
    pub outer_normal: Vec2,
    pub length: f64,
}

impl SimplePolygon {
    /// Validates a vertex loop. Clockwise input is reversed; collinear
    /// vertices are merged.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::DegenerateInput("non-finite coordinate".into()));
        }
        let mut vertices = remove_collinear(&vertices);
        if vertices.len() < 3 {
            return Err(Error::DegenerateInput(format!(
                "polygon has {} distinct non-collinear vertices",
                vertices.len()
            )));
        }
        if self_intersects(&vertices) {
            return Err(Error::SelfIntersecting);
        }
        let area = signed_area(&vertices);
        if area.abs() <= GEOM_TOL {
            return Err(Error::DegenerateInput("zero area".into()));
        }
        if area < 0.0 {
            vertices.reverse();
        }
        Ok(Self { vertices })
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Self::new(vec![
            Vec2::new(x0, y0),
            Vec2::new(x1, y0),
            Vec2::new(x1, y1),
            Vec2::new(x0, y1),
        ])
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn edges(&self) -> Vec<OrientedEdge> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let start = self.vertices[i];
                let end = self.vertices[(i + 1) % n];
                let d = end - start;
                let length = d.norm();
                OrientedEdge {
                    start,
                    end,
                    outer_normal: d.perp_cw() / length,
                    length,
                }
            })
            .collect()
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            (b - a).cross(c - b) >= -GEOM_TOL
        })
    }

    pub fn scale(&self, t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::NonPositiveScale(t));
        }
        Ok(Self {
            vertices: self.vertices.iter().map(|&v| v * t).collect(),
        })
    }

    pub fn translate(&self, by: Vec2) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&v| v + by).collect(),
        }
    }

    /// `(min, max)` corners of the bounding box.
    pub fn bbox(&self) -> (Vec2, Vec2) {
        let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = Vec2::new(lo.x.min(v.x), lo.y.min(v.y));
            hi = Vec2::new(hi.x.max(v.x), hi.y.max(v.y));
        }
        (lo, hi)
    }

    /// Even-odd point-in-polygon test.
    pub fn contains(&self, p: Vec2) -> bool {
        let n = self.vertices.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Reinterprets a convex polygon around the origin as a structuring body.
    pub fn to_body(&self) -> Result<ConvexBody> {
        if !self.is_convex() {
            return Err(Error::NonConvexSet);
        }
        ConvexBody::new(&self.vertices)
    }

    pub fn from_body(body: &ConvexBody) -> Self {
        Self {
            vertices: body.vertices().to_vec(),
        }
    }

    /// Convex hull of arbitrary points as a polygon.
    pub fn hull_of(points: &[Vec2]) -> Result<Self> {
        Self::new(convex_hull(points))
    }
}

fn segments_intersect(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = (p2 - p1).cross(q1 - p1);
    let d2 = (p2 - p1).cross(q2 - p1);
    let d3 = (q2 - q1).cross(p1 - q1);
    let d4 = (q2 - q1).cross(p2 - q1);
    if ((d1 > GEOM_TOL && d2 < -GEOM_TOL) || (d1 < -GEOM_TOL && d2 > GEOM_TOL))
        && ((d3 > GEOM_TOL && d4 < -GEOM_TOL) || (d3 < -GEOM_TOL && d4 > GEOM_TOL))
    {
        return true;
    }
    let on_seg = |a: Vec2, b: Vec2, p: Vec2, d: f64| {
        d.abs() <= GEOM_TOL
            && p.x >= a.x.min(b.x) - GEOM_TOL
            && p.x <= a.x.max(b.x) + GEOM_TOL
            && p.y >= a.y.min(b.y) - GEOM_TOL
            && p.y <= a.y.max(b.y) + GEOM_TOL
    };
    on_seg(p1, p2, q1, d1) || on_seg(p1, p2, q2, d2) || on_seg(q1, q2, p1, d3) || on_seg(q1, q2, p2, d4)
}

fn self_intersects(v: &[Vec2]) -> bool {
    let n = v.len();
    for i in 0..n {
        for j in (i + 1)..n {
            // adjacent edges share a vertex by construction
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]) {
                return true;
            }
        }
    }
    false
}

/// Lebesgue measure of the polygon.
pub fn polygon_area(e: &SimplePolygon) -> f64 {
    e.area()
}

/// `Σ_edges length · h_C(ν)`.
pub fn aniso_perimeter(e: &SimplePolygon, c: &ConvexBody) -> f64 {
    e.edges()
        .iter()
        .map(|ed| ed.length * c.support(ed.outer_normal))
        .sum()
}

/// `Σ_edges length · (h_C(ν) + h_C(-ν)) / 2`.
pub fn symmetric_aniso_perimeter(e: &SimplePolygon, c: &ConvexBody) -> f64 {
    e.edges()
        .iter()
        .map(|ed| ed.length * 0.5 * (c.support(ed.outer_normal) + c.support(-ed.outer_normal)))
        .sum()
}

/// Convex polygon `E ⊕ εC`.
pub fn dilate_convex(e: &SimplePolygon, c: &ConvexBody, eps: f64) -> Result<SimplePolygon> {
    if !e.is_convex() {
        return Err(Error::NonConvexSet);
    }
    let scaled = c.scale(eps)?;
    SimplePolygon::new(minkowski_sum_convex(e.vertices(), scaled.vertices()))
}

/// Outer content `(|E ⊕ εC| - |E|) / ε` over the whole plane, for convex `E`.
pub fn sm0_exact_convex(e: &SimplePolygon, c: &ConvexBody, eps: f64) -> Result<f64> {
    let grown = dilate_convex(e, c, eps)?;
    Ok((grown.area() - e.area()) / eps)
}

/// Coefficients of the planar Steiner polynomial
/// `|E ⊕ εC| = |E| + ε·perimeter + ε²·area`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinerTerms {
    pub perimeter: f64,
    pub area: f64,
}

pub fn steiner_decompose(e: &SimplePolygon, c: &ConvexBody) -> Result<SteinerTerms> {
    if !e.is_convex() {
        return Err(Error::NonConvexSet);
    }
    Ok(SteinerTerms {
        perimeter: aniso_perimeter(e, c),
        area: c.area(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2 {
        Vec2::new(x, y)
    }

    fn unit_square() -> SimplePolygon {
        SimplePolygon::rectangle(0.0, 0.0, 1.0, 1.0).unwrap()
    }

    fn diamond_poly() -> SimplePolygon {
        SimplePolygon::new(vec![v(1.0, 0.0), v(0.0, 1.0), v(-1.0, 0.0), v(0.0, -1.0)]).unwrap()
    }

    fn square_body() -> ConvexBody {
        ConvexBody::new(&[v(1.0, 1.0), v(-1.0, 1.0), v(-1.0, -1.0), v(1.0, -1.0)]).unwrap()
    }

    fn diamond_body() -> ConvexBody {
        diamond_poly().to_body().unwrap()
    }

    fn tri_body() -> ConvexBody {
        ConvexBody::new(&[v(2.0, 0.0), v(0.0, 1.0), v(-1.0, -1.0)]).unwrap()
    }

    #[test]
    fn areas() {
        assert_eq!(polygon_area(&unit_square()), 1.0);
        assert_eq!(polygon_area(&diamond_poly()), 2.0);
        let t = SimplePolygon::new(vec![v(0.0, 0.0), v(1.0, 0.0), v(0.0, 1.0)]).unwrap();
        assert_eq!(polygon_area(&t), 0.5);
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let cw = SimplePolygon::new(vec![v(0.0, 0.0), v(0.0, 1.0), v(1.0, 1.0), v(1.0, 0.0)]).unwrap();
        assert_eq!(cw.area(), 1.0);
        for e in cw.edges() {
            let mid = (e.start + e.end) * 0.5;
            assert!(!cw.contains(mid + e.outer_normal * 1e-3));
            assert!(cw.contains(mid - e.outer_normal * 1e-3));
            assert!((e.outer_normal.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_polygons() {
        let bowtie = SimplePolygon::new(vec![v(0.0, 0.0), v(1.0, 1.0), v(1.0, 0.0), v(0.0, 1.0)]);
        assert!(matches!(bowtie, Err(Error::SelfIntersecting)));
        let flat = SimplePolygon::new(vec![v(0.0, 0.0), v(1.0, 0.0), v(2.0, 0.0)]);
        assert!(matches!(flat, Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn collinear_vertices_merged() {
        let p = SimplePolygon::new(vec![v(0.0, 0.0), v(0.5, 0.0), v(1.0, 0.0), v(1.0, 1.0), v(0.0, 1.0)]).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.edges().len(), 4);
    }

    #[test]
    fn aniso_perimeter_examples() {
        assert_eq!(aniso_perimeter(&unit_square(), &square_body()), 4.0);
        assert!((aniso_perimeter(&diamond_poly(), &square_body()) - 8.0).abs() < 1e-12);
        let p = aniso_perimeter(&unit_square(), &ConvexBody::disk());
        let lo = 4.0 * (std::f64::consts::PI / 64.0).cos();
        assert!(p >= lo - 1e-12 && p <= 4.0 + 1e-12, "{p}");
    }

    #[test]
    fn symmetric_perimeter_examples() {
        let sq = square_body();
        for e in [unit_square(), diamond_poly()] {
            assert!((symmetric_aniso_perimeter(&e, &sq) - aniso_perimeter(&e, &sq)).abs() < 1e-12);
        }
        assert!((symmetric_aniso_perimeter(&unit_square(), &tri_body()) - 5.0).abs() < 1e-12);
        // diamond edges have normals (±1,±1)/√2 and length √2; vertex-max per normal
        let t = tri_body();
        let mut expected = 0.0;
        for (sx, sy) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
            let n = v(sx, sy) / 2f64.sqrt();
            let hp = t.vertices().iter().map(|p| p.dot(n)).fold(f64::MIN, f64::max);
            let hm = t.vertices().iter().map(|p| p.dot(-n)).fold(f64::MIN, f64::max);
            expected += 2f64.sqrt() * (hp + hm) / 2.0;
        }
        assert!((symmetric_aniso_perimeter(&diamond_poly(), &t) - expected).abs() < 1e-12);
    }

    #[test]
    fn sm0_examples() {
        let s = sm0_exact_convex(&unit_square(), &square_body(), 0.1).unwrap();
        assert!((s - 4.4).abs() < 1e-12);
        for eps in [0.5, 0.1, 0.01, 1e-4] {
            let s = sm0_exact_convex(&unit_square(), &square_body(), eps).unwrap();
            assert!((s - (4.0 + 4.0 * eps)).abs() < 1e-9, "{eps}: {s}");
        }
        let s = sm0_exact_convex(&diamond_poly(), &diamond_body(), 1.0).unwrap();
        assert!((s - 6.0).abs() < 1e-12);
    }

    #[test]
    fn sm0_rejects_nonconvex() {
        let l = SimplePolygon::new(vec![
            v(0.0, 0.0),
            v(2.0, 0.0),
            v(2.0, 1.0),
            v(1.0, 1.0),
            v(1.0, 2.0),
            v(0.0, 2.0),
        ])
        .unwrap();
        assert!(!l.is_convex());
        assert!(matches!(sm0_exact_convex(&l, &square_body(), 0.1), Err(Error::NonConvexSet)));
        assert!(matches!(steiner_decompose(&l, &square_body()), Err(Error::NonConvexSet)));
        assert!(aniso_perimeter(&l, &square_body()) > 0.0);
    }

    #[test]
    fn steiner_examples() {
        let t = steiner_decompose(&unit_square(), &square_body()).unwrap();
        assert_eq!(t, SteinerTerms { perimeter: 4.0, area: 4.0 });
        let t = steiner_decompose(&diamond_poly(), &square_body()).unwrap();
        assert!((t.perimeter - 8.0).abs() < 1e-12);
        assert_eq!(t.area, 4.0);
        let eps = 0.25;
        let t = steiner_decompose(&unit_square(), &diamond_body()).unwrap();
        let s = sm0_exact_convex(&unit_square(), &diamond_body(), eps).unwrap();
        assert!((s - t.perimeter - eps * t.area).abs() < 1e-9);
    }

    #[test]
    fn contains_even_odd() {
        let l = SimplePolygon::new(vec![
            v(0.0, 0.0),
            v(2.0, 0.0),
            v(2.0, 1.0),
            v(1.0, 1.0),
            v(1.0, 2.0),
            v(0.0, 2.0),
        ])
        .unwrap();
        assert!(l.contains(v(0.5, 1.5)));
        assert!(l.contains(v(1.5, 0.5)));
        assert!(!l.contains(v(1.5, 1.5)));
        assert!(!l.contains(v(-0.1, 0.5)));
    }
}
