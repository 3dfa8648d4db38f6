//! Exact minimal enclosing sphere of a point set.
//!
//! Incremental move-to-front construction (Welzl's algorithm in its
//! loop form, which avoids deep recursion). Expected linear time after a
//! deterministic internal shuffle; all arithmetic in `f64`.

use super::{Vec3, Vec3d};
use crate::prng::Prng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sphere {
    pub center: Vec3d,
    pub radius: f64,
}

impl Sphere {
    fn contains(&self, p: Vec3d) -> bool {
        // small relative slack keeps boundary points from re-triggering
        let r = self.radius * (1.0 + 1e-10) + 1e-30;
        (p - self.center).norm_squared() <= r * r
    }
}

fn sphere1(a: Vec3d) -> Sphere {
    Sphere { center: a, radius: 0.0 }
}

fn sphere2(a: Vec3d, b: Vec3d) -> Sphere {
    let center = (a + b) * 0.5;
    Sphere {
        center,
        radius: (a - center).norm(),
    }
}

/// Smallest sphere with all three points on its boundary (circumcircle of
/// the triangle, taken as a great circle). Falls back to the widest
/// two-point sphere for collinear input.
fn sphere3(a: Vec3d, b: Vec3d, c: Vec3d) -> Sphere {
    let ab = b - a;
    let ac = c - a;
    let cross = ab.cross(&ac);
    let denom = 2.0 * cross.norm_squared();
    if denom < 1e-30 {
        let candidates = [sphere2(a, b), sphere2(a, c), sphere2(b, c)];
        return candidates
            .into_iter()
            .max_by(|x, y| x.radius.total_cmp(&y.radius))
            .unwrap();
    }
    let offset =
        (cross.cross(&ab) * ac.norm_squared() + ac.cross(&cross) * ab.norm_squared()) / denom;
    let center = a + offset;
    Sphere {
        center,
        radius: offset.norm(),
    }
}

/// Sphere through four points (solves the linear system for the centre).
/// Falls back to face circumspheres when the points are coplanar.
fn sphere4(a: Vec3d, b: Vec3d, c: Vec3d, d: Vec3d) -> Sphere {
    let r1 = b - a;
    let r2 = c - a;
    let r3 = d - a;
    let det = r1.dot(&r2.cross(&r3));
    if det.abs() < 1e-24 {
        let mut best: Option<Sphere> = None;
        for s in [
            sphere3(a, b, c),
            sphere3(a, b, d),
            sphere3(a, c, d),
            sphere3(b, c, d),
        ] {
            if [a, b, c, d].iter().all(|&p| s.contains(p)) {
                best = Some(match best {
                    Some(prev) if prev.radius <= s.radius => prev,
                    _ => s,
                });
            }
        }
        return best.unwrap_or_else(|| sphere3(a, b, c));
    }
    let sq1 = 0.5 * r1.norm_squared();
    let sq2 = 0.5 * r2.norm_squared();
    let sq3 = 0.5 * r3.norm_squared();
    // Cramer's rule on (r1 r2 r3)^T x = (sq1 sq2 sq3)
    let cx = Vec3d::new(sq1, sq2, sq3);
    let m = nalgebra::Matrix3::from_rows(&[
        nalgebra::RowVector3::new(r1.x, r1.y, r1.z),
        nalgebra::RowVector3::new(r2.x, r2.y, r2.z),
        nalgebra::RowVector3::new(r3.x, r3.y, r3.z),
    ]);
    let offset = m
        .lu()
        .solve(&cx)
        .unwrap_or_else(|| Vec3d::zeros());
    let center = a + offset;
    Sphere {
        center,
        radius: offset.norm(),
    }
}

/// Minimal sphere enclosing all `points`.
///
/// Returns a zero radius sphere for a single point or fully coincident
/// input; callers that need a usable scale must check for that.
pub fn minimal_enclosing_sphere(points: &[Vec3]) -> Sphere {
    assert!(!points.is_empty(), "enclosing sphere of empty point set");
    let mut pts: Vec<Vec3d> = points
        .iter()
        .map(|p| Vec3d::new(p.x as f64, p.y as f64, p.z as f64))
        .collect();
    // deterministic shuffle: the expected-linear bound needs random order,
    // the result does not depend on it
    Prng::new(0x5BEE_5EED).shuffle(&mut pts);

    let mut ball = sphere1(pts[0]);
    for i in 1..pts.len() {
        if ball.contains(pts[i]) {
            continue;
        }
        // pts[i] must lie on the boundary
        ball = sphere2(pts[0], pts[i]);
        for j in 1..i {
            if ball.contains(pts[j]) {
                continue;
            }
            ball = sphere2(pts[j], pts[i]);
            for k in 0..j {
                if ball.contains(pts[k]) {
                    continue;
                }
                ball = sphere3(pts[k], pts[j], pts[i]);
                for m in 0..k {
                    if !ball.contains(pts[m]) {
                        ball = sphere4(pts[m], pts[k], pts[j], pts[i]);
                    }
                }
            }
        }
    }
    ball
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(points: &[Vec3d]) -> Sphere {
        // smallest sphere over all 2/3/4-point candidates that contains
        // everything; only usable for tiny inputs
        let contains_all = |s: &Sphere| points.iter().all(|&p| s.contains(p));
        let mut best: Option<Sphere> = None;
        let mut consider = |s: Sphere| {
            if contains_all(&s) && best.map_or(true, |b| s.radius < b.radius) {
                best = Some(s);
            }
        };
        let n = points.len();
        for i in 0..n {
            for j in (i + 1)..n {
                consider(sphere2(points[i], points[j]));
                for k in (j + 1)..n {
                    consider(sphere3(points[i], points[j], points[k]));
                    for m in (k + 1)..n {
                        consider(sphere4(points[i], points[j], points[k], points[m]));
                    }
                }
            }
        }
        best.expect("at least one candidate sphere")
    }

    fn to_f64(points: &[Vec3]) -> Vec<Vec3d> {
        points
            .iter()
            .map(|p| Vec3d::new(p.x as f64, p.y as f64, p.z as f64))
            .collect()
    }

    #[test]
    fn symmetric_pair() {
        let pts = [Vec3::new(-2.0, 0.0, 0.0), Vec3::new(2.0, 0.0, 0.0)];
        let s = minimal_enclosing_sphere(&pts);
        assert!((s.radius - 2.0).abs() < 1e-12);
        assert!(s.center.norm() < 1e-12);
    }

    #[test]
    fn matches_exhaustive_oracle_on_small_clouds() {
        let mut rng = Prng::new(2024);
        for case in 0..50 {
            let n = 4 + (case % 8);
            let pts: Vec<Vec3> = (0..n)
                .map(|_| {
                    Vec3::new(
                        rng.uniform(-1.0, 1.0) as f32,
                        rng.uniform(-1.0, 1.0) as f32,
                        rng.uniform(-1.0, 1.0) as f32,
                    )
                })
                .collect();
            let got = minimal_enclosing_sphere(&pts);
            let want = brute_force(&to_f64(&pts));
            assert!(
                (got.radius - want.radius).abs() <= 1e-9 * want.radius.max(1e-9),
                "case {case}: got {} want {}",
                got.radius,
                want.radius
            );
            for p in to_f64(&pts) {
                assert!(got.contains(p));
            }
        }
    }

    #[test]
    fn contains_all_points_on_larger_clouds() {
        let mut rng = Prng::new(77);
        let pts: Vec<Vec3> = (0..5000)
            .map(|_| {
                Vec3::new(
                    rng.uniform(-3.0, 5.0) as f32,
                    rng.uniform(0.0, 2.0) as f32,
                    rng.uniform(-9.0, -1.0) as f32,
                )
            })
            .collect();
        let s = minimal_enclosing_sphere(&pts);
        let slack = s.radius * (1.0 + 1e-9);
        let mut touching = 0;
        for p in to_f64(&pts) {
            let d = (p - s.center).norm();
            assert!(d <= slack);
            if d >= s.radius * (1.0 - 1e-6) {
                touching += 1;
            }
        }
        // minimality: the boundary must be supported by at least two points
        assert!(touching >= 2, "only {touching} support points");
    }

    #[test]
    fn coplanar_and_collinear_inputs() {
        let square = [
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(-1.0, 1.0, 0.0),
            Vec3::new(1.0, -1.0, 0.0),
            Vec3::new(-1.0, -1.0, 0.0),
        ];
        let s = minimal_enclosing_sphere(&square);
        assert!((s.radius - 2f64.sqrt()).abs() < 1e-9);

        let line = [
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(3.0, 0.0, 0.0),
        ];
        let s = minimal_enclosing_sphere(&line);
        assert!((s.radius - 1.5).abs() < 1e-9);
    }

    #[test]
    fn coincident_points_give_zero_radius() {
        let pts = vec![Vec3::new(0.5, -0.5, 2.0); 10];
        let s = minimal_enclosing_sphere(&pts);
        assert_eq!(s.radius, 0.0);
    }
}
