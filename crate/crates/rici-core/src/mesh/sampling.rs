//! Deterministic surface sampling of triangle scenes.
//!
//! Every sample index derives its own generator from the stage seed, so a
//! parallel split over the index range reproduces the sequential output
//! exactly.

use super::{triangle_area, SampledPoint, SceneObject, Vec3, Vec3d};
use crate::parallel::map_indexed;
use crate::prng::{IndexStream, Prng};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// Samples land on triangles with probability proportional to area
    /// (inverse CDF over cumulative areas). This is the default; uniform
    /// surface density is what the Spin Image correlation model assumes.
    AreaWeighted,
    /// Exactly `ceil(total / triangle_count)` samples on every triangle
    /// regardless of its size.
    PerTriangle,
}

struct FlatTriangle {
    a: Vec3,
    b: Vec3,
    c: Vec3,
    normal: Vec3,
    object_id: u32,
}

fn flatten(scene: &[SceneObject]) -> (Vec<FlatTriangle>, Vec<f64>) {
    let mut tris = Vec::new();
    let mut cumulative = Vec::new();
    let mut total = 0.0f64;
    for obj in scene {
        for t in 0..obj.mesh.triangle_count() {
            let [a, b, c] = obj.mesh.triangle_vertices(t);
            let area = triangle_area(a, b, c);
            if area <= 0.0 {
                continue; // degenerate triangles never receive samples
            }
            let ab = Vec3d::new((b.x - a.x) as f64, (b.y - a.y) as f64, (b.z - a.z) as f64);
            let ac = Vec3d::new((c.x - a.x) as f64, (c.y - a.y) as f64, (c.z - a.z) as f64);
            let n = ab.cross(&ac).normalize();
            total += area;
            tris.push(FlatTriangle {
                a,
                b,
                c,
                normal: Vec3::new(n.x as f32, n.y as f32, n.z as f32),
                object_id: obj.object_id,
            });
            cumulative.push(total);
        }
    }
    (tris, cumulative)
}

/// Square-root barycentric formula: uniform over the triangle for uniform
/// `(u, v)` in the unit square.
#[inline]
fn point_in_triangle(tri: &FlatTriangle, u: f64, v: f64) -> Vec3 {
    let su = u.sqrt() as f32;
    let w0 = 1.0 - su;
    let w1 = su * (1.0 - v as f32);
    let w2 = su * v as f32;
    tri.a * w0 + tri.b * w1 + tri.c * w2
}

fn sample_one(tris: &[FlatTriangle], cumulative: &[f64], stream: &mut IndexStream) -> SampledPoint {
    let total = *cumulative.last().unwrap();
    let target = stream.next_f64() * total;
    let idx = cumulative.partition_point(|&c| c <= target).min(tris.len() - 1);
    let tri = &tris[idx];
    let position = point_in_triangle(tri, stream.next_f64(), stream.next_f64());
    SampledPoint {
        position,
        normal: tri.normal,
        source_object_id: tri.object_id,
    }
}

/// Draws `total_samples` surface samples from the scene.
///
/// In `PerTriangle` mode the output holds `ceil(total / T)` samples per
/// (non-degenerate) triangle, which may exceed the requested total.
pub fn sample_point_cloud(
    scene: &[SceneObject],
    total_samples: usize,
    rng: &Prng,
    mode: SamplingMode,
) -> Result<Vec<SampledPoint>> {
    if total_samples == 0 {
        return Err(Error::InvalidParameter("total_samples must be >= 1".into()));
    }
    let (tris, cumulative) = flatten(scene);
    if tris.is_empty() || *cumulative.last().unwrap_or(&0.0) <= 0.0 {
        return Err(Error::ZeroSurfaceArea);
    }
    match mode {
        SamplingMode::AreaWeighted => Ok(map_indexed(total_samples, |i| {
            let mut stream = rng.derive_index(i as u64);
            sample_one(&tris, &cumulative, &mut stream)
        })),
        SamplingMode::PerTriangle => {
            let per = total_samples.div_ceil(tris.len());
            Ok(map_indexed(tris.len() * per, |i| {
                let tri = &tris[i / per];
                let mut stream = rng.derive_index(i as u64);
                let position = point_in_triangle(tri, stream.next_f64(), stream.next_f64());
                SampledPoint {
                    position,
                    normal: tri.normal,
                    source_object_id: tri.object_id,
                }
            }))
        }
    }
}

/// Convenience wrapper for sampling a single mesh (object id 0).
pub fn sample_mesh(
    mesh: &super::TriangleMesh,
    total_samples: usize,
    rng: &Prng,
    mode: SamplingMode,
) -> Result<Vec<SampledPoint>> {
    let scene = [SceneObject {
        mesh: mesh.clone(),
        object_id: 0,
    }];
    sample_point_cloud(&scene, total_samples, rng, mode)
}
