//! Wavefront OBJ export/import for realized triangulated polyhedra.
//!
//! Minimal dialect: "v x y z" lines then "f i j k" lines, 1-indexed,
//! faces wound as stored in the complex (counterclockwise seen from
//! outside for the bipyramid orientation (i, i+1, T) / (i+1, i, B)).
//! No normals, materials, or object groups.

use std::collections::BTreeMap;

use crate::complexes::{ComplexError, Face, Realization, Vertex};
use crate::json::{rational_from_str, JsonError};
use crate::numeric::Scalar;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ObjError {
    #[error("face references vertex {0} absent from the realization")]
    MissingVertex(Vertex),
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error(transparent)]
    Number(#[from] JsonError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

pub const COORD_DIGITS: u32 = 17;

fn coord_string(s: &Scalar) -> String {
    match s.as_exact() {
        Some(r) => crate::numeric::rational_to_decimal(r, COORD_DIGITS),
        None => s.enclosure(96).midpoint_decimal(COORD_DIGITS),
    }
}

/// Render the realization as an OBJ string. Vertices appear in label
/// order; faces keep their stored winding.
pub fn obj_export(rho: &Realization, faces: &[Face]) -> Result<String, ObjError> {
    let mut index: BTreeMap<Vertex, usize> = BTreeMap::new();
    let mut out = String::new();
    for (i, (v, p)) in rho.iter().enumerate() {
        index.insert(*v, i + 1);
        out.push_str(&format!(
            "v {} {} {}\n",
            coord_string(&p[0]),
            coord_string(&p[1]),
            coord_string(&p[2])
        ));
    }
    for f in faces {
        let mut ids = [0usize; 3];
        for (k, v) in f.0.iter().enumerate() {
            ids[k] = *index.get(v).ok_or(ObjError::MissingVertex(*v))?;
        }
        out.push_str(&format!("f {} {} {}\n", ids[0], ids[1], ids[2]));
    }
    Ok(out)
}

/// Parsed OBJ mesh: positions (exact rationals) in file order plus
/// 0-indexed triangles.
pub struct ObjMesh {
    pub positions: Vec<[Scalar; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

pub fn obj_import(text: &str) -> Result<ObjMesh, ObjError> {
    let mut positions = Vec::new();
    let mut triangles = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let coords: Vec<&str> = it.collect();
                if coords.len() != 3 {
                    return Err(ObjError::Parse(ln + 1, "vertex needs 3 coordinates".into()));
                }
                let mut p = Vec::with_capacity(3);
                for c in coords {
                    p.push(Scalar::from(rational_from_str(c)?));
                }
                positions.push([p[0].clone(), p[1].clone(), p[2].clone()]);
            }
            Some("f") => {
                let ids: Vec<&str> = it.collect();
                if ids.len() != 3 {
                    return Err(ObjError::Parse(ln + 1, "only triangular faces supported".into()));
                }
                let mut tri = [0usize; 3];
                for (k, tok) in ids.iter().enumerate() {
                    // tolerate "i/…" texture/normal suffixes
                    let head = tok.split('/').next().unwrap_or(tok);
                    let idx: usize = head
                        .parse()
                        .map_err(|_| ObjError::Parse(ln + 1, format!("bad index {tok:?}")))?;
                    if idx == 0 || idx > positions.len() {
                        return Err(ObjError::Parse(ln + 1, format!("index {idx} out of range")));
                    }
                    tri[k] = idx - 1;
                }
                triangles.push(tri);
            }
            _ => {} // ignore other directives
        }
    }
    Ok(ObjMesh { positions, triangles })
}

/// Zero-padded file name of an animation frame: frame_000.obj, …
pub fn frame_name(index: usize) -> String {
    format!("frame_{index:03}.obj")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{build_bipyramid, edge_lengths_sq};
    use crate::constructions::type3_pose;

    #[test]
    fn flat_pose_exports_zero_heights() {
        let rho = type3_pose(&Scalar::zero(), false).unwrap();
        let b5 = build_bipyramid(5).unwrap();
        let text = obj_export(&rho, &b5.faces()).unwrap();
        let vlines: Vec<&str> = text.lines().filter(|l| l.starts_with("v ")).collect();
        assert_eq!(vlines.len(), 7);
        for l in &vlines {
            assert!(l.ends_with(" 0"), "flat pose should have z = 0: {l}");
        }
        assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 10);
    }

    #[test]
    fn round_trip_preserves_lengths_within_printed_precision() {
        let rho = type3_pose(&Scalar::from_frac(2, 3), false).unwrap();
        let b5 = build_bipyramid(5).unwrap();
        let text = obj_export(&rho, &b5.faces()).unwrap();
        let mesh = obj_import(&text).unwrap();
        assert_eq!(mesh.positions.len(), 7);
        assert_eq!(mesh.triangles.len(), 10);
        // rebuild a realization in label order and compare edge lengths
        let mut back = Realization::new();
        for ((v, _), p) in rho.iter().zip(mesh.positions.iter()) {
            back.insert(*v, p.clone());
        }
        let edges = b5.edges();
        let l1 = edge_lengths_sq(&rho, &edges).unwrap();
        let l2 = edge_lengths_sq(&back, &edges).unwrap();
        let tol = num_rational::BigRational::new(
            num_bigint::BigInt::from(1),
            num_bigint::BigInt::from(1) << 45,
        );
        for (k, v) in &l1.lambda_sq {
            let w = &l2.lambda_sq[k];
            let diff = v.sub(w).as_exact().unwrap().clone();
            assert!(num_traits::Signed::abs(&diff) < tol, "edge {k:?} drifted");
        }
    }

    #[test]
    fn import_rejects_garbage() {
        assert!(obj_import("v 1 2\n").is_err());
        assert!(obj_import("v 1 2 3\nf 1 2 4\n").is_err());
        assert!(frame_name(7) == "frame_007.obj");
    }
}
