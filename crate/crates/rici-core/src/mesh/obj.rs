//! Wavefront OBJ reader and a debug writer.
//!
//! Supports `v`, `vn`, and `f` statements with all four face index forms
//! (`v`, `v/vt`, `v//vn`, `v/vt/vn`) and negative (relative) indices.
//! Polygonal faces are fan-triangulated. Texture coordinates, materials,
//! groups, and smoothing groups are ignored.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{finish_load, MeshLoad, TriangleMesh, Vec3};
use crate::{Error, Result};

struct Corner {
    position: usize,
    normal: Option<usize>,
}

pub(super) fn load_obj(path: &Path) -> Result<MeshLoad> {
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let reader = BufReader::new(file);

    let mut positions: Vec<Vec3> = Vec::new();
    let mut file_normals: Vec<Vec3> = Vec::new();
    let mut faces: Vec<Vec<Corner>> = Vec::new();

    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let v = parse_vec3(&mut tokens)
                    .ok_or_else(|| parse_err(line_no, "malformed vertex".into()))?;
                positions.push(v);
            }
            Some("vn") => {
                let v = parse_vec3(&mut tokens)
                    .ok_or_else(|| parse_err(line_no, "malformed normal".into()))?;
                file_normals.push(v);
            }
            Some("f") => {
                let mut corners = Vec::new();
                for tok in tokens {
                    corners.push(parse_corner(tok, positions.len(), file_normals.len()).ok_or_else(
                        || parse_err(line_no, format!("malformed face corner '{tok}'")),
                    )?);
                }
                if corners.len() < 3 {
                    return Err(parse_err(line_no, "face with fewer than 3 corners".into()));
                }
                faces.push(corners);
            }
            _ => {} // vt, g, o, s, usemtl, mtllib, ...
        }
    }

    // Normals are used only if every corner of every face references one;
    // otherwise they are recomputed from the geometry.
    let all_corners_have_normals = !faces.is_empty()
        && faces
            .iter()
            .all(|f| f.iter().all(|c| c.normal.is_some()));

    let mut vertices: Vec<Vec3> = Vec::new();
    let mut normals: Vec<Vec3> = Vec::new();
    let mut triangles: Vec<[u32; 3]> = Vec::new();

    if all_corners_have_normals {
        // weld by (position index, normal index)
        let mut welded: std::collections::HashMap<(usize, usize), u32> =
            std::collections::HashMap::new();
        let mut resolve = |c: &Corner| -> u32 {
            let key = (c.position, c.normal.unwrap());
            *welded.entry(key).or_insert_with(|| {
                vertices.push(positions[key.0]);
                let n = file_normals[key.1];
                let len = n.norm();
                normals.push(if len > 1e-12 { n / len } else { Vec3::z() });
                (vertices.len() - 1) as u32
            })
        };
        for face in &faces {
            let i0 = resolve(&face[0]);
            for w in 1..face.len() - 1 {
                let i1 = resolve(&face[w]);
                let i2 = resolve(&face[w + 1]);
                triangles.push([i0, i1, i2]);
            }
        }
        finish_load(path, vertices, Some(normals), triangles)
    } else {
        for face in &faces {
            let i0 = face[0].position as u32;
            for w in 1..face.len() - 1 {
                triangles.push([i0, face[w].position as u32, face[w + 1].position as u32]);
            }
        }
        finish_load(path, positions, None, triangles)
    }
}

fn parse_vec3<'a>(tokens: &mut impl Iterator<Item = &'a str>) -> Option<Vec3> {
    let x = tokens.next()?.parse::<f32>().ok()?;
    let y = tokens.next()?.parse::<f32>().ok()?;
    let z = tokens.next()?.parse::<f32>().ok()?;
    Some(Vec3::new(x, y, z))
}

/// OBJ indices are 1-based; negative values count back from the current end.
fn resolve_index(raw: i64, len: usize) -> Option<usize> {
    if raw > 0 {
        let i = (raw - 1) as usize;
        (i < len).then_some(i)
    } else if raw < 0 {
        let back = (-raw) as usize;
        (back <= len).then(|| len - back)
    } else {
        None
    }
}

fn parse_corner(token: &str, n_positions: usize, n_normals: usize) -> Option<Corner> {
    let mut parts = token.split('/');
    let position = resolve_index(parts.next()?.parse::<i64>().ok()?, n_positions)?;
    let _texture = parts.next(); // ignored
    let normal = match parts.next() {
        Some(s) if !s.is_empty() => Some(resolve_index(s.parse::<i64>().ok()?, n_normals)?),
        _ => None,
    };
    Some(Corner { position, normal })
}

/// Debug dump of a mesh (or assembled scene) as OBJ with normals.
pub fn write_obj(path: &Path, mesh: &TriangleMesh) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut w = BufWriter::new(file);
    let io_err = |e: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source: e,
    };
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", v.x, v.y, v.z).map_err(io_err)?;
    }
    for n in &mesh.normals {
        writeln!(w, "vn {} {} {}", n.x, n.y, n.z).map_err(io_err)?;
    }
    for t in &mesh.triangles {
        writeln!(
            w,
            "f {}//{} {}//{} {}//{}",
            t[0] + 1,
            t[0] + 1,
            t[1] + 1,
            t[1] + 1,
            t[2] + 1,
            t[2] + 1
        )
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}
