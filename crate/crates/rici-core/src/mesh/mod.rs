//! Triangle meshes, oriented points, rigid transforms, and scene assembly.
//!
//! Positions and normals are stored in `f32`; that is the precision used by
//! all descriptor generation paths. Operations that need headroom
//! (enclosing spheres, rigid transforms, areas) compute in `f64` and cast
//! back.

mod obj;
mod ply;
mod sampling;
mod sphere;

pub use obj::write_obj;
pub use sampling::{sample_mesh, sample_point_cloud, SamplingMode};
pub use sphere::{minimal_enclosing_sphere, Sphere};

use std::path::Path;

use nalgebra::UnitQuaternion;

use crate::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f32>;
pub type Vec3d = nalgebra::Vector3<f64>;

/// Indexed triangle set with one unit normal per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<Vec3>,
    pub normals: Vec<Vec3>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriangleMesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_vertices(&self, t: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[t];
        [
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        ]
    }

    /// Total surface area in `f64`.
    pub fn surface_area(&self) -> f64 {
        (0..self.triangle_count())
            .map(|t| {
                let [a, b, c] = self.triangle_vertices(t);
                triangle_area(a, b, c)
            })
            .sum()
    }

    /// Checks the structural invariants: indices in bounds, one unit normal
    /// per vertex, and a non-empty triangle list.
    pub fn validate(&self) -> Result<()> {
        if self.triangles.is_empty() {
            return Err(Error::EmptyMesh);
        }
        if self.normals.len() != self.vertices.len() {
            return Err(Error::InvalidParameter(format!(
                "{} normals for {} vertices",
                self.normals.len(),
                self.vertices.len()
            )));
        }
        let n = self.vertices.len() as u32;
        for tri in &self.triangles {
            if tri.iter().any(|&i| i >= n) {
                return Err(Error::InvalidParameter(format!(
                    "triangle index out of bounds: {tri:?} with {n} vertices"
                )));
            }
        }
        for (i, nrm) in self.normals.iter().enumerate() {
            let len = nrm.norm();
            if (len - 1.0).abs() > 1e-5 {
                return Err(Error::InvalidParameter(format!(
                    "normal {i} has length {len}"
                )));
            }
        }
        Ok(())
    }
}

/// A descriptor anchor: spin vertex plus unit spin normal. Together they
/// define the central axis all cylindrical coordinates refer to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedPoint {
    pub position: Vec3,
    pub normal: Vec3,
}

impl OrientedPoint {
    /// Validating constructor; the normal must already be unit length.
    pub fn new(position: Vec3, normal: Vec3) -> Result<Self> {
        let len = normal.norm();
        if !((len - 1.0).abs() <= 1e-5) {
            return Err(Error::InvalidParameter(format!(
                "spin normal has length {len}, expected 1"
            )));
        }
        Ok(OrientedPoint { position, normal })
    }
}

/// Rotation followed by translation. Stored in `f64` so that
/// apply-then-invert round-trips well below the `f32` mesh resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    pub rotation: UnitQuaternion<f64>,
    pub translation: Vec3d,
}

impl RigidTransform {
    pub fn identity() -> Self {
        RigidTransform {
            rotation: UnitQuaternion::identity(),
            translation: Vec3d::zeros(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rotation == UnitQuaternion::identity() && self.translation == Vec3d::zeros()
    }

    pub fn inverse(&self) -> Self {
        let inv_rot = self.rotation.inverse();
        RigidTransform {
            rotation: inv_rot,
            translation: -(inv_rot * self.translation),
        }
    }

    #[inline]
    pub fn apply_point(&self, p: Vec3) -> Vec3 {
        let q = self.rotation * Vec3d::new(p.x as f64, p.y as f64, p.z as f64) + self.translation;
        Vec3::new(q.x as f32, q.y as f32, q.z as f32)
    }

    #[inline]
    pub fn apply_direction(&self, d: Vec3) -> Vec3 {
        let q = self.rotation * Vec3d::new(d.x as f64, d.y as f64, d.z as f64);
        Vec3::new(q.x as f32, q.y as f32, q.z as f32)
    }
}

/// A point drawn from a mesh surface; carries the face normal of the
/// triangle it was sampled from and the id of the object it belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampledPoint {
    pub position: Vec3,
    pub normal: Vec3,
    pub source_object_id: u32,
}

/// One placed object in a scene.
#[derive(Debug, Clone)]
pub struct SceneObject {
    pub mesh: TriangleMesh,
    pub object_id: u32,
}

/// `1/2 |(b-a) x (c-a)|`, computed in `f64`. Degenerate triangles yield 0.
pub fn triangle_area(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let ab = Vec3d::new(
        (b.x - a.x) as f64,
        (b.y - a.y) as f64,
        (b.z - a.z) as f64,
    );
    let ac = Vec3d::new(
        (c.x - a.x) as f64,
        (c.y - a.y) as f64,
        (c.z - a.z) as f64,
    );
    0.5 * ab.cross(&ac).norm()
}

/// Rotates positions and normals, then translates positions. Topology is
/// untouched.
pub fn apply_transform(mesh: &TriangleMesh, t: &RigidTransform) -> TriangleMesh {
    TriangleMesh {
        vertices: mesh.vertices.iter().map(|&v| t.apply_point(v)).collect(),
        normals: mesh.normals.iter().map(|&n| t.apply_direction(n)).collect(),
        triangles: mesh.triangles.clone(),
    }
}

/// Translates and scales the mesh so its minimal enclosing sphere becomes
/// the unit sphere at the origin. Returns the normalized mesh together with
/// the original sphere radius (`scale`) and centre.
pub fn normalize_to_unit_sphere(mesh: &TriangleMesh) -> Result<(TriangleMesh, f64, Vec3d)> {
    if mesh.vertices.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let sphere = minimal_enclosing_sphere(&mesh.vertices);
    if sphere.radius <= 0.0 {
        return Err(Error::ZeroRadiusSphere);
    }
    let inv = 1.0 / sphere.radius;
    let vertices = mesh
        .vertices
        .iter()
        .map(|v| {
            Vec3::new(
                ((v.x as f64 - sphere.center.x) * inv) as f32,
                ((v.y as f64 - sphere.center.y) * inv) as f32,
                ((v.z as f64 - sphere.center.z) * inv) as f32,
            )
        })
        .collect();
    Ok((
        TriangleMesh {
            vertices,
            normals: mesh.normals.clone(),
            triangles: mesh.triangles.clone(),
        },
        sphere.radius,
        sphere.center,
    ))
}

/// Concatenates meshes into one, rebasing triangle indices.
pub fn merge_meshes<'a>(meshes: impl IntoIterator<Item = &'a TriangleMesh>) -> TriangleMesh {
    let mut out = TriangleMesh {
        vertices: Vec::new(),
        normals: Vec::new(),
        triangles: Vec::new(),
    };
    for m in meshes {
        let base = out.vertices.len() as u32;
        out.vertices.extend_from_slice(&m.vertices);
        out.normals.extend_from_slice(&m.normals);
        out.triangles
            .extend(m.triangles.iter().map(|t| [t[0] + base, t[1] + base, t[2] + base]));
    }
    out
}

/// Per-position normals as the normalized sum of incident face normals
/// weighted by face area (the cross product already carries the area).
pub fn compute_vertex_normals(vertices: &[Vec3], triangles: &[[u32; 3]]) -> Vec<Vec3> {
    let mut acc = vec![Vec3d::zeros(); vertices.len()];
    for tri in triangles {
        let a = vertices[tri[0] as usize];
        let b = vertices[tri[1] as usize];
        let c = vertices[tri[2] as usize];
        let ab = Vec3d::new((b.x - a.x) as f64, (b.y - a.y) as f64, (b.z - a.z) as f64);
        let ac = Vec3d::new((c.x - a.x) as f64, (c.y - a.y) as f64, (c.z - a.z) as f64);
        let weighted = ab.cross(&ac); // length = 2 * area
        for &i in tri {
            acc[i as usize] += weighted;
        }
    }
    acc.iter()
        .map(|n| {
            let len = n.norm();
            if len > 1e-30 {
                Vec3::new((n.x / len) as f32, (n.y / len) as f32, (n.z / len) as f32)
            } else {
                // isolated or fully degenerate vertex; any unit vector works
                Vec3::new(0.0, 0.0, 1.0)
            }
        })
        .collect()
}

/// A loaded mesh plus loader diagnostics.
#[derive(Debug, Clone)]
pub struct MeshLoad {
    pub mesh: TriangleMesh,
    /// Zero-area faces dropped during loading.
    pub dropped_degenerate_faces: usize,
}

/// Loads an OBJ or PLY file, dispatching on the file extension.
/// Missing normals are reconstructed area-weighted from the faces.
pub fn load_mesh(path: &Path) -> Result<MeshLoad> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("obj") => obj::load_obj(path),
        Some("ply") => ply::load_ply(path),
        other => Err(Error::UnsupportedFormat(format!(
            "{:?} (expected .obj or .ply)",
            other.unwrap_or("<none>")
        ))),
    }
}

/// Shared post-processing for the loaders: drop degenerate faces, check
/// emptiness, reconstruct normals when the file had none.
fn finish_load(
    path: &Path,
    vertices: Vec<Vec3>,
    normals: Option<Vec<Vec3>>,
    triangles: Vec<[u32; 3]>,
) -> Result<MeshLoad> {
    let mut kept = Vec::with_capacity(triangles.len());
    let mut dropped = 0usize;
    for tri in triangles {
        let degenerate_topology =
            tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2];
        let area = triangle_area(
            vertices[tri[0] as usize],
            vertices[tri[1] as usize],
            vertices[tri[2] as usize],
        );
        if degenerate_topology || area <= 0.0 {
            dropped += 1;
        } else {
            kept.push(tri);
        }
    }
    if kept.is_empty() {
        let _ = path;
        return Err(Error::EmptyMesh);
    }
    let normals = match normals {
        Some(n) => n,
        None => compute_vertex_normals(&vertices, &kept),
    };
    let mesh = TriangleMesh {
        vertices,
        normals,
        triangles: kept,
    };
    mesh.validate()?;
    Ok(MeshLoad {
        mesh,
        dropped_degenerate_faces: dropped,
    })
}

#[cfg(test)]
mod tests;
