//! Named test shapes and shape-spec resolution for the CLI.
//!
//! | name            | vertices                                        |
//! |-----------------|-------------------------------------------------|
//! | `square`        | `[-1, 1]²`                                      |
//! | `diamond`       | `(±1, 0), (0, ±1)`                              |
//! | `disk64`        | regular 64-gon inscribed in the unit circle     |
//! | `triangle-asym` | hull of `(2, 0), (0, 1), (-1, -1)`              |
//! | `lshape`        | `[-1, 1]²` minus the open quadrant `(0,1)²`     |
//! | `blob(seed)`    | seeded star-shaped 48-gon around the origin     |

use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body::{read_vertex_file, ConvexBody, DEFAULT_DISK_VERTICES};
use crate::error::{Error, Result};
use crate::polygon::SimplePolygon;
use crate::vec2::Vec2;

pub const BUILTIN_NAMES: [&str; 6] = ["square", "diamond", "disk64", "triangle-asym", "lshape", "blob(seed)"];

const BLOB_VERTICES: usize = 48;

fn v(x: f64, y: f64) -> Vec2 {
    Vec2::new(x, y)
}

/// Canonical polygon for a builtin name. `blob` without an explicit seed uses `default_seed`.
pub fn builtin_shape_seeded(name: &str, default_seed: u64) -> Result<SimplePolygon> {
    let unknown = || Error::UnknownShape(name.to_string());
    match name {
        "square" => SimplePolygon::rectangle(-1.0, -1.0, 1.0, 1.0),
        "diamond" => SimplePolygon::new(vec![v(1.0, 0.0), v(0.0, 1.0), v(-1.0, 0.0), v(0.0, -1.0)]),
        "disk64" => Ok(SimplePolygon::from_body(&ConvexBody::regular(DEFAULT_DISK_VERTICES, 1.0)?)),
        "triangle-asym" => SimplePolygon::new(vec![v(2.0, 0.0), v(0.0, 1.0), v(-1.0, -1.0)]),
        "lshape" => SimplePolygon::new(vec![
            v(-1.0, -1.0),
            v(1.0, -1.0),
            v(1.0, 0.0),
            v(0.0, 0.0),
            v(0.0, 1.0),
            v(-1.0, 1.0),
        ]),
        "blob" => Ok(blob(default_seed)),
        _ => {
            let seed = name
                .strip_prefix("blob(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(unknown)?;
            Ok(blob(seed.trim().parse().map_err(|_| unknown())?))
        }
    }
}

pub fn builtin_shape(name: &str) -> Result<SimplePolygon> {
    builtin_shape_seeded(name, 0)
}

/// Builtin shape as a structuring body; fails for non-convex shapes.
pub fn builtin_body(name: &str) -> Result<ConvexBody> {
    builtin_shape(name)?.to_body()
}

/// Star-shaped polygon with radius `1 + Σ_{k=2..5} a_k cos(kθ + φ_k)`, `|a_k| <= 0.12`.
pub fn blob(seed: u64) -> SimplePolygon {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let harmonics: Vec<(f64, f64)> = (2..=5)
        .map(|_| (rng.gen_range(-0.12..0.12), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    let pts = (0..BLOB_VERTICES)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / BLOB_VERTICES as f64;
            let r = 1.0
                + harmonics
                    .iter()
                    .enumerate()
                    .map(|(k, &(a, phase))| a * ((k + 2) as f64 * t + phase).cos())
                    .sum::<f64>();
            v(r * t.cos(), r * t.sin())
        })
        .collect();
    SimplePolygon::new(pts).expect("star-shaped with positive radius")
}

/// Splits `name:scale` into its parts; a bare name has scale 1.
fn split_scale(spec: &str) -> Result<(&str, f64)> {
    match spec.rsplit_once(':') {
        Some((name, s)) if !name.is_empty() => {
            let t: f64 = s
                .parse()
                .map_err(|_| Error::BadConfig(format!("bad scale in shape spec `{spec}`")))?;
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::NonPositiveScale(t));
            }
            Ok((name, t))
        }
        _ => Ok((spec, 1.0)),
    }
}

/// Resolves `name`, `name:scale` or a vertex-file path into a polygon. File
/// vertices are taken in file order (the set may be non-convex).
pub fn resolve_polygon(spec: &str, seed: u64) -> Result<SimplePolygon> {
    if Path::new(spec).is_file() {
        return SimplePolygon::new(read_vertex_file(spec)?);
    }
    let (name, t) = split_scale(spec)?;
    builtin_shape_seeded(name, seed)?.scale(t)
}

/// Resolves a body spec; vertex files are hulled.
pub fn resolve_body(spec: &str) -> Result<ConvexBody> {
    if Path::new(spec).is_file() {
        return ConvexBody::from_file(spec);
    }
    let (name, t) = split_scale(spec)?;
    builtin_body(name)?.scale(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_shapes() {
        let sq = builtin_shape("square").unwrap();
        assert_eq!(sq.area(), 4.0);
        let d = builtin_body("disk64").unwrap();
        assert_eq!(d.vertices().len(), 64);
        assert_eq!(d.vertices()[0], Vec2::new(1.0, 0.0));
        let t = builtin_body("triangle-asym").unwrap();
        assert!((t.area() - 2.5).abs() < 1e-15);
        assert!(!builtin_shape("lshape").unwrap().is_convex());
        assert_eq!(builtin_shape("lshape").unwrap().area(), 3.0);
        assert!(builtin_body("lshape").is_err());
        assert!(matches!(builtin_shape("hexagon"), Err(Error::UnknownShape(_))));
        assert!(matches!(builtin_shape("blob(x)"), Err(Error::UnknownShape(_))));
    }

    #[test]
    fn blobs_are_seeded() {
        assert_eq!(blob(3), blob(3));
        assert_ne!(blob(3), blob(4));
        assert_eq!(builtin_shape("blob(3)").unwrap(), blob(3));
        assert_eq!(builtin_shape_seeded("blob", 9).unwrap(), blob(9));
        assert!(blob(11).contains(Vec2::ZERO));
    }

    #[test]
    fn scaled_specs() {
        let p = resolve_polygon("square:0.5", 0).unwrap();
        assert_eq!(p.area(), 1.0);
        let c = resolve_body("diamond:2").unwrap();
        assert_eq!(c.area(), 8.0);
        assert!(resolve_body("diamond:-1").is_err());
        assert!(resolve_body("diamond:abc").is_err());
    }

    #[test]
    fn file_specs() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        std::fs::write(&path, "# body\n-1 -1\n2 0\n0 1\n").unwrap();
        let c = resolve_body(path.to_str().unwrap()).unwrap();
        assert_eq!(c, builtin_body("triangle-asym").unwrap());
        let e = resolve_polygon(path.to_str().unwrap(), 0).unwrap();
        assert!((e.area() - 2.5).abs() < 1e-15);
    }
}
