//! PLY reader for ASCII, binary little-endian, and binary big-endian files.
//!
//! Reads `x y z` (and `nx ny nz` when present) from the `vertex` element
//! and the index list from the `face` element. Unknown properties and
//! elements are skipped generically, which requires parsing them far enough
//! to know their size.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use super::{finish_load, MeshLoad, Vec3};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Scalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl Scalar {
    fn parse(name: &str) -> Option<Scalar> {
        Some(match name {
            "char" | "int8" => Scalar::I8,
            "uchar" | "uint8" => Scalar::U8,
            "short" | "int16" => Scalar::I16,
            "ushort" | "uint16" => Scalar::U16,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            Scalar::I8 | Scalar::U8 => 1,
            Scalar::I16 | Scalar::U16 => 2,
            Scalar::I32 | Scalar::U32 | Scalar::F32 => 4,
            Scalar::F64 => 8,
        }
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar { ty: Scalar, name: String },
    List { count_ty: Scalar, item_ty: Scalar, name: String },
}

#[derive(Debug, Clone)]
struct ElementSpec {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Format {
    Ascii,
    BinaryLe,
    BinaryBe,
}

pub(super) fn load_ply(path: &Path) -> Result<MeshLoad> {
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    let mut reader = BufReader::new(file);

    let mut line_no = 0usize;
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let io_err = |e: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source: e,
    };

    let mut read_line = |reader: &mut BufReader<File>| -> Result<String> {
        let mut s = String::new();
        let n = reader.read_line(&mut s).map_err(io_err)?;
        line_no += 1;
        if n == 0 {
            return Err(parse_err(line_no, "unexpected end of file".into()));
        }
        Ok(s.trim_end().to_owned())
    };

    if read_line(&mut reader)?.trim() != "ply" {
        return Err(parse_err(1, "missing 'ply' magic".into()));
    }

    let mut format: Option<Format> = None;
    let mut elements: Vec<ElementSpec> = Vec::new();
    loop {
        let line = read_line(&mut reader)?;
        let line = line.trim();
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("comment") | Some("obj_info") | None => {}
            Some("format") => {
                format = Some(match tokens.next() {
                    Some("ascii") => Format::Ascii,
                    Some("binary_little_endian") => Format::BinaryLe,
                    Some("binary_big_endian") => Format::BinaryBe,
                    other => {
                        return Err(parse_err(line_no, format!("unknown format {other:?}")))
                    }
                });
            }
            Some("element") => {
                let name = tokens
                    .next()
                    .ok_or_else(|| parse_err(line_no, "element without name".into()))?;
                let count = tokens
                    .next()
                    .and_then(|c| c.parse::<usize>().ok())
                    .ok_or_else(|| parse_err(line_no, "element without count".into()))?;
                elements.push(ElementSpec {
                    name: name.to_owned(),
                    count,
                    properties: Vec::new(),
                });
            }
            Some("property") => {
                let spec = elements
                    .last_mut()
                    .ok_or_else(|| parse_err(line_no, "property before element".into()))?;
                let first = tokens
                    .next()
                    .ok_or_else(|| parse_err(line_no, "empty property".into()))?;
                if first == "list" {
                    let count_ty = tokens
                        .next()
                        .and_then(Scalar::parse)
                        .ok_or_else(|| parse_err(line_no, "bad list count type".into()))?;
                    let item_ty = tokens
                        .next()
                        .and_then(Scalar::parse)
                        .ok_or_else(|| parse_err(line_no, "bad list item type".into()))?;
                    let name = tokens
                        .next()
                        .ok_or_else(|| parse_err(line_no, "list without name".into()))?;
                    spec.properties.push(Property::List {
                        count_ty,
                        item_ty,
                        name: name.to_owned(),
                    });
                } else {
                    let ty = Scalar::parse(first)
                        .ok_or_else(|| parse_err(line_no, format!("bad type '{first}'")))?;
                    let name = tokens
                        .next()
                        .ok_or_else(|| parse_err(line_no, "property without name".into()))?;
                    spec.properties.push(Property::Scalar {
                        ty,
                        name: name.to_owned(),
                    });
                }
            }
            Some("end_header") => break,
            Some(other) => {
                return Err(parse_err(line_no, format!("unknown header token '{other}'")))
            }
        }
    }
    let format =
        format.ok_or_else(|| parse_err(line_no, "header missing format statement".into()))?;

    let mut positions: Vec<Vec3> = Vec::new();
    let mut normals: Vec<Vec3> = Vec::new();
    let mut has_normals = false;
    let mut triangles: Vec<[u32; 3]> = Vec::new();

    for spec in &elements {
        let is_vertex = spec.name == "vertex";
        let is_face = spec.name == "face";
        if is_vertex {
            has_normals = ["nx", "ny", "nz"].iter().all(|want| {
                spec.properties
                    .iter()
                    .any(|p| matches!(p, Property::Scalar { name, .. } if name == want))
            });
        }
        for _row in 0..spec.count {
            let values = match format {
                Format::Ascii => read_row_ascii(&mut reader, spec, &mut read_line, &parse_err)?,
                Format::BinaryLe => read_row_binary(&mut reader, spec, false, &io_err)?,
                Format::BinaryBe => read_row_binary(&mut reader, spec, true, &io_err)?,
            };
            if is_vertex {
                let get = |want: &str| -> Option<f64> {
                    spec.properties.iter().zip(&values).find_map(|(p, v)| {
                        matches!(p, Property::Scalar { name, .. } if name == want)
                            .then(|| v.first().copied())
                            .flatten()
                    })
                };
                let x = get("x").unwrap_or(0.0) as f32;
                let y = get("y").unwrap_or(0.0) as f32;
                let z = get("z").unwrap_or(0.0) as f32;
                positions.push(Vec3::new(x, y, z));
                if has_normals {
                    let n = Vec3::new(
                        get("nx").unwrap_or(0.0) as f32,
                        get("ny").unwrap_or(0.0) as f32,
                        get("nz").unwrap_or(0.0) as f32,
                    );
                    let len = n.norm();
                    normals.push(if len > 1e-12 { n / len } else { Vec3::z() });
                }
            } else if is_face {
                let list = spec.properties.iter().zip(&values).find_map(|(p, v)| {
                    matches!(
                        p,
                        Property::List { name, .. }
                            if name == "vertex_indices" || name == "vertex_index"
                    )
                    .then_some(v)
                });
                if let Some(indices) = list {
                    if indices.len() >= 3 {
                        let i0 = indices[0] as u32;
                        for w in 1..indices.len() - 1 {
                            triangles.push([i0, indices[w] as u32, indices[w + 1] as u32]);
                        }
                    }
                }
            }
        }
    }

    finish_load(
        path,
        positions,
        has_normals.then_some(normals),
        triangles,
    )
}

fn read_row_ascii(
    reader: &mut BufReader<File>,
    spec: &ElementSpec,
    read_line: &mut impl FnMut(&mut BufReader<File>) -> Result<String>,
    parse_err: &impl Fn(usize, String) -> Error,
) -> Result<Vec<Vec<f64>>> {
    let line = read_line(reader)?;
    let mut tokens = line.split_whitespace();
    let mut next_f64 = |what: &str| -> Result<f64> {
        tokens
            .next()
            .and_then(|t| t.parse::<f64>().ok())
            .ok_or_else(|| parse_err(0, format!("missing or malformed {what}")))
    };
    let mut out = Vec::with_capacity(spec.properties.len());
    for p in &spec.properties {
        match p {
            Property::Scalar { name, .. } => out.push(vec![next_f64(name)?]),
            Property::List { name, .. } => {
                let count = next_f64(name)? as usize;
                let mut items = Vec::with_capacity(count);
                for _ in 0..count {
                    items.push(next_f64(name)?);
                }
                out.push(items);
            }
        }
    }
    Ok(out)
}

fn read_scalar(
    reader: &mut BufReader<File>,
    ty: Scalar,
    big_endian: bool,
    io_err: &impl Fn(std::io::Error) -> Error,
) -> Result<f64> {
    let mut buf = [0u8; 8];
    let slice = &mut buf[..ty.size()];
    reader.read_exact(slice).map_err(io_err)?;
    if big_endian {
        slice.reverse();
    }
    Ok(match ty {
        Scalar::I8 => i8::from_le_bytes([buf[0]]) as f64,
        Scalar::U8 => buf[0] as f64,
        Scalar::I16 => i16::from_le_bytes([buf[0], buf[1]]) as f64,
        Scalar::U16 => u16::from_le_bytes([buf[0], buf[1]]) as f64,
        Scalar::I32 => i32::from_le_bytes([buf[0], buf[1], buf[2], buf[3]]) as f64,
        Scalar::U32 => u32::from_le_bytes([buf[0], buf[1], buf[2], buf[3]]) as f64,
        Scalar::F32 => f32::from_le_bytes([buf[0], buf[1], buf[2], buf[3]]) as f64,
        Scalar::F64 => f64::from_le_bytes(buf),
    })
}

fn read_row_binary(
    reader: &mut BufReader<File>,
    spec: &ElementSpec,
    big_endian: bool,
    io_err: &impl Fn(std::io::Error) -> Error,
) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(spec.properties.len());
    for p in &spec.properties {
        match p {
            Property::Scalar { ty, .. } => {
                out.push(vec![read_scalar(reader, *ty, big_endian, io_err)?])
            }
            Property::List { count_ty, item_ty, .. } => {
                let count = read_scalar(reader, *count_ty, big_endian, io_err)? as usize;
                let mut items = Vec::with_capacity(count);
                for _ in 0..count {
                    items.push(read_scalar(reader, *item_ty, big_endian, io_err)?);
                }
                out.push(items);
            }
        }
    }
    Ok(out)
}
