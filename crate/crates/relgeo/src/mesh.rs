//! Mesh export: the base surface, its relative parallels, the two centre
//! surfaces, the relative-normal congruence, and the curvature-line
//! direction fields, as OBJ objects or CSV rows.

use std::io::Write;

use serde::Serialize;

use crate::frame::{build_frame, curvature_line_directions, LineDirections, SupportSpec};
use crate::grid::{map_points, ExecMode, GridSpec};
use crate::parallel::pair_from_base;
use crate::surface::{eval_surface, SurfaceSpec};
use crate::tensor::Vec3;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct MeshVertex {
    pub u1: f64,
    pub u2: f64,
    pub position: Vec3,
}

#[derive(Debug, Clone, Default)]
pub struct MeshObject {
    pub name: String,
    pub vertices: Vec<MeshVertex>,
    /// Quad faces, object-local zero-based indices.
    pub faces: Vec<[usize; 4]>,
    /// Two-vertex line elements, object-local zero-based indices.
    pub lines: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusEntry {
    pub object: String,
    pub u1: f64,
    pub u2: f64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct MeshBundle {
    pub objects: Vec<MeshObject>,
    pub census: Vec<CensusEntry>,
}

struct SheetData {
    name: String,
    /// One optional vertex per grid point (row-major); `Err` carries the
    /// census reason.
    points: Vec<std::result::Result<Vec3, String>>,
    faced: bool,
}

/// Build the bundle: base surface, one parallel per entry of `mus`, both
/// centre sheets, the relative-normal congruence, and curvature-line
/// direction whiskers. Needs at least a 2x2 grid to form faces.
pub fn build_mesh(
    spec: &SurfaceSpec,
    support: &SupportSpec,
    mus: &[f64],
    grid: GridSpec,
    order: usize,
    exec: ExecMode,
) -> Result<MeshBundle> {
    if grid.rows < 2 || grid.cols < 2 {
        return Err(Error::Precondition(
            "mesh grids must be at least 2x2 to form faces".into(),
        ));
    }
    let pts = grid.points(spec.domain);

    struct PointData {
        base: std::result::Result<Vec3, String>,
        normal_tip: Option<Vec3>,
        whiskers: Vec<(Vec3, Vec3)>,
        stars: Vec<std::result::Result<Vec3, String>>,
        centres: [std::result::Result<Vec3, String>; 2],
    }

    let cell = 0.2
        * ((spec.domain[0].1 - spec.domain[0].0) / grid.rows as f64)
            .min((spec.domain[1].1 - spec.domain[1].0) / grid.cols as f64);

    let per_point = |u: (f64, f64)| -> PointData {
        let reason = |e: &Error| e.kind_name().to_string();
        let sj = match eval_surface(spec, u, order + support.order_cost()) {
            Ok(sj) => sj,
            Err(e) => {
                let r = reason(&e);
                return PointData {
                    base: Err(r.clone()),
                    normal_tip: None,
                    whiskers: Vec::new(),
                    stars: vec![Err(r.clone()); mus.len()],
                    centres: [Err(r.clone()), Err(r)],
                };
            }
        };
        let x = sj.position.value();
        let frame = match build_frame(&sj, support, &spec.params) {
            Ok(f) => f,
            Err(e) => {
                let r = reason(&e);
                return PointData {
                    base: Ok(x),
                    normal_tip: None,
                    whiskers: Vec::new(),
                    stars: vec![Err(r.clone()); mus.len()],
                    centres: [Err(r.clone()), Err(r)],
                };
            }
        };
        let y = frame.rel_normal.value();
        // Ambient whiskers along the curvature-line directions; the
        // directions are unit length in the first fundamental form, so the
        // ambient push-forward has unit length as well.
        let mut whiskers = Vec::new();
        if let Ok(LineDirections::Pair(dirs)) = curvature_line_directions(&frame) {
            for d in dirs {
                let ambient =
                    sj.tangents[0].value().scale(d[0]) + sj.tangents[1].value().scale(d[1]);
                whiskers.push((x - ambient.scale(0.5 * cell), x + ambient.scale(0.5 * cell)));
            }
        }
        let centres = frame.radii.map(|r| match r {
            Some(r) => Ok(x + y.scale(r)),
            None => Err("ZeroCurvatureError".to_string()),
        });
        let stars = mus
            .iter()
            .map(|&mu| {
                pair_from_base(sj.clone(), frame.clone(), mu)
                    .map(|p| p.star_surface.position.value())
                    .map_err(|e| reason(&e))
            })
            .collect();
        PointData {
            base: Ok(x),
            normal_tip: Some(x + y),
            whiskers,
            stars,
            centres,
        }
    };

    let data = map_points(exec, &pts, per_point);

    let mut census = Vec::new();
    let mut sheets: Vec<SheetData> = Vec::new();
    sheets.push(SheetData {
        name: "phi".into(),
        points: data.iter().map(|d| d.base.clone()).collect(),
        faced: true,
    });
    for (k, mu) in mus.iter().enumerate() {
        sheets.push(SheetData {
            name: format!("phi_star_mu_{mu}"),
            points: data.iter().map(|d| d.stars[k].clone()).collect(),
            faced: true,
        });
    }
    for branch in 0..2 {
        sheets.push(SheetData {
            name: format!("centre_{}", branch + 1),
            points: data.iter().map(|d| d.centres[branch].clone()).collect(),
            faced: true,
        });
    }

    let mut objects = Vec::new();
    for sheet in sheets {
        let mut object = MeshObject {
            name: sheet.name.clone(),
            ..MeshObject::default()
        };
        let mut index = vec![None; pts.len()];
        for (i, (p, &u)) in sheet.points.iter().zip(&pts).enumerate() {
            match p {
                Ok(pos) => {
                    index[i] = Some(object.vertices.len());
                    object.vertices.push(MeshVertex {
                        u1: u.0,
                        u2: u.1,
                        position: *pos,
                    });
                }
                Err(reason) => census.push(CensusEntry {
                    object: sheet.name.clone(),
                    u1: u.0,
                    u2: u.1,
                    reason: reason.clone(),
                }),
            }
        }
        if sheet.faced {
            for i in 0..grid.rows - 1 {
                for j in 0..grid.cols - 1 {
                    let corners = [
                        i * grid.cols + j,
                        i * grid.cols + j + 1,
                        (i + 1) * grid.cols + j + 1,
                        (i + 1) * grid.cols + j,
                    ];
                    if let [Some(a), Some(b), Some(c), Some(d)] = corners.map(|k| index[k]) {
                        object.faces.push([a, b, c, d]);
                    }
                }
            }
        }
        objects.push(object);
    }

    // Relative-normal congruence: a segment from x to x + y per point.
    let mut normals = MeshObject {
        name: "normals".into(),
        ..MeshObject::default()
    };
    for (d, &u) in data.iter().zip(&pts) {
        if let (Ok(x), Some(tip)) = (&d.base, d.normal_tip) {
            let a = normals.vertices.len();
            normals.vertices.push(MeshVertex {
                u1: u.0,
                u2: u.1,
                position: *x,
            });
            normals.vertices.push(MeshVertex {
                u1: u.0,
                u2: u.1,
                position: tip,
            });
            normals.lines.push([a, a + 1]);
        }
    }
    objects.push(normals);

    let mut whiskers = MeshObject {
        name: "curvature_dirs".into(),
        ..MeshObject::default()
    };
    for (d, &u) in data.iter().zip(&pts) {
        for (from, to) in &d.whiskers {
            let a = whiskers.vertices.len();
            for p in [from, to] {
                whiskers.vertices.push(MeshVertex {
                    u1: u.0,
                    u2: u.1,
                    position: *p,
                });
            }
            whiskers.lines.push([a, a + 1]);
        }
    }
    objects.push(whiskers);

    Ok(MeshBundle { objects, census })
}

/// Wavefront OBJ with one `o` block per object; face and line indices are
/// global and 1-based per the format.
pub fn write_obj(bundle: &MeshBundle, w: &mut impl Write) -> std::io::Result<()> {
    let mut offset = 1usize;
    for object in &bundle.objects {
        writeln!(w, "o {}", object.name)?;
        for v in &object.vertices {
            let p = v.position.0;
            writeln!(w, "v {} {} {}", p[0], p[1], p[2])?;
        }
        for f in &object.faces {
            writeln!(
                w,
                "f {} {} {} {}",
                f[0] + offset,
                f[1] + offset,
                f[2] + offset,
                f[3] + offset
            )?;
        }
        for l in &object.lines {
            writeln!(w, "l {} {}", l[0] + offset, l[1] + offset)?;
        }
        offset += object.vertices.len();
    }
    Ok(())
}

/// CSV with one row per vertex: u1, u2, x, y, z, object.
pub fn write_csv(bundle: &MeshBundle, w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "u1,u2,x,y,z,object")?;
    for object in &bundle.objects {
        for v in &object.vertices {
            let p = v.position.0;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                v.u1, v.u2, p[0], p[1], p[2], object.name
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    #[test]
    fn sphere_bundle_counts() {
        let cat = Catalog::builtin();
        let sphere = cat.get("sphere").unwrap();
        let grid = GridSpec::new(6, 6);
        let bundle = build_mesh(
            sphere,
            &SupportSpec::Euclidean,
            &[1.0],
            grid,
            4,
            ExecMode::Sequential,
        )
        .unwrap();
        let names: Vec<_> = bundle.objects.iter().map(|o| o.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "phi",
                "phi_star_mu_1",
                "centre_1",
                "centre_2",
                "normals",
                "curvature_dirs"
            ]
        );
        let phi = &bundle.objects[0];
        assert_eq!(phi.vertices.len(), 36);
        assert_eq!(phi.faces.len(), 25);
        for f in &phi.faces {
            assert!(f.iter().all(|&i| i < phi.vertices.len()));
        }
        // The unit offset of the unit sphere has radius 2; the centres sit at
        // the origin.
        let star = &bundle.objects[1];
        for v in &star.vertices {
            assert!((v.position.norm() - 2.0).abs() < 1e-10);
        }
        for v in &bundle.objects[2].vertices {
            assert!(v.position.norm() < 1e-10);
        }
        assert!(bundle.census.is_empty());
        // The sphere is relatively umbilic everywhere: no whisker segments.
        assert!(bundle.objects[5].vertices.is_empty());
    }

    #[test]
    fn degenerate_offsets_land_in_the_census() {
        let cat = Catalog::builtin();
        let sphere = cat.get("sphere").unwrap();
        let grid = GridSpec::new(3, 3);
        // mu = -1 hits the centre of the unit sphere everywhere: the star
        // sheet is empty and fully censused.
        let bundle = build_mesh(
            sphere,
            &SupportSpec::Euclidean,
            &[-1.0],
            grid,
            4,
            ExecMode::Sequential,
        )
        .unwrap();
        let star = &bundle.objects[1];
        assert!(star.vertices.is_empty());
        assert_eq!(
            bundle
                .census
                .iter()
                .filter(|c| c.object == star.name)
                .count(),
            9
        );
    }

    #[test]
    fn tiny_grids_are_rejected() {
        let cat = Catalog::builtin();
        let sphere = cat.get("sphere").unwrap();
        let err = build_mesh(
            sphere,
            &SupportSpec::Euclidean,
            &[],
            GridSpec::new(1, 1),
            4,
            ExecMode::Sequential,
        );
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn obj_and_csv_render() {
        let cat = Catalog::builtin();
        let saddle = cat.get("saddle").unwrap();
        let bundle = build_mesh(
            saddle,
            &SupportSpec::Euclidean,
            &[0.5],
            GridSpec::new(3, 3),
            4,
            ExecMode::Sequential,
        )
        .unwrap();
        let mut obj = Vec::new();
        write_obj(&bundle, &mut obj).unwrap();
        let obj = String::from_utf8(obj).unwrap();
        assert!(obj.contains("o phi"));
        assert!(obj.contains("o phi_star_mu_0.5"));
        assert!(obj.contains("\nf "));
        assert!(obj.contains("\nl "));

        let mut csv = Vec::new();
        write_csv(&bundle, &mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert!(csv.starts_with("u1,u2,x,y,z,object"));
        assert!(csv.contains(",phi"));
    }
}
