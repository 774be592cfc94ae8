use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::Serialize;

use super::{fmt6, to_f64, DEFAULT_HALF_WIDTH};
use crate::analyzer3d::{classify_form, cone_form, ConeClassification};
use crate::direction::PrimitiveDirection;
use crate::form::TernaryForm;
use crate::linalg::{gram3, RatMatrix3};

/// One named object: vertices, polygonal faces and line segments
/// (indices local to the object, 0-based), plus a few polylines used for
/// the projected wireframe.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub name: String,
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
    pub segments: Vec<[usize; 2]>,
    pub curves: Vec<Vec<usize>>,
}

impl Mesh {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            vertices: Vec::new(),
            faces: Vec::new(),
            segments: Vec::new(),
            curves: Vec::new(),
        }
    }

    /// Every face edge is shared by exactly two faces.
    pub fn is_watertight(&self) -> bool {
        let mut count: HashMap<(usize, usize), u32> = HashMap::new();
        for f in &self.faces {
            for k in 0..f.len() {
                let (a, b) = (f[k], f[(k + 1) % f.len()]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        !count.is_empty() && count.values().all(|&c| c == 2)
    }
}

/// Sphere, ellipsoid and (optionally) cone for a 3×3 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene3D {
    pub matrix: RatMatrix3,
    pub include_cone: bool,
    pub lon: usize,
    pub lat: usize,
    pub half_width: f64,
}

/// OBJ text and its orthographic SVG projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene3Output {
    pub obj: String,
    pub svg: String,
}

fn gram_f64(a: &RatMatrix3) -> Matrix3<f64> {
    let b = gram3(a);
    Matrix3::from_fn(|i, j| to_f64(b.coeff(i, j)))
}

fn quad(b: &Matrix3<f64>, d: &[f64; 3]) -> f64 {
    let v = Vector3::from(*d);
    v.dot(&(b * v))
}

/// UV sphere with poles, every vertex pushed radially by `radius(d)`.
fn uv_mesh(name: &str, lon: usize, lat: usize, radius: impl Fn(&[f64; 3]) -> f64) -> Mesh {
    let mut m = Mesh::new(name);
    let mut push = |d: [f64; 3]| {
        let r = radius(&d);
        m.vertices.push([r * d[0], r * d[1], r * d[2]]);
    };
    push([0.0, 0.0, 1.0]);
    for i in 1..lat {
        let th = PI * i as f64 / lat as f64;
        for j in 0..lon {
            let ph = TAU * j as f64 / lon as f64;
            push([th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]);
        }
    }
    push([0.0, 0.0, -1.0]);
    let south = 1 + (lat - 1) * lon;
    let ring = |i: usize, j: usize| 1 + (i - 1) * lon + j % lon;
    for j in 0..lon {
        m.faces.push(vec![0, ring(1, j), ring(1, j + 1)]);
    }
    for i in 1..lat - 1 {
        for j in 0..lon {
            m.faces.push(vec![
                ring(i, j),
                ring(i + 1, j),
                ring(i + 1, j + 1),
                ring(i, j + 1),
            ]);
        }
    }
    for j in 0..lon {
        m.faces
            .push(vec![south, ring(lat - 1, j + 1), ring(lat - 1, j)]);
    }
    for j in (0..lon).step_by((lon / 8).max(1)) {
        let mut c = vec![0];
        c.extend((1..lat).map(|i| ring(i, j)));
        c.push(south);
        m.curves.push(c);
    }
    for i in (1..lat).filter(|i| i % (lat / 8).max(1) == 0) {
        let mut c: Vec<usize> = (0..lon).map(|j| ring(i, j)).collect();
        c.push(ring(i, 0));
        m.curves.push(c);
    }
    m
}

/// Ellipsoid vertices `d/√(d·Bd)` on the UV grid, skipping directions where
/// the surface runs off to infinity or beyond `clip`.
pub fn ellipsoid_samples(a: &RatMatrix3, lon: usize, lat: usize, clip: f64) -> Vec<[f64; 3]> {
    let b = gram_f64(a);
    let dirs = uv_mesh("dirs", lon, lat, |_| 1.0).vertices;
    dirs.iter()
        .filter_map(|d| {
            let q = quad(&b, d);
            let r = 1.0 / q.sqrt();
            (q > 0.0 && r <= clip).then(|| d.map(|x| r * x))
        })
        .collect()
}

fn scale_to_box(d: &[f64; 3], hw: f64) -> [f64; 3] {
    let m = d.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    d.map(|x| x * hw / m)
}

/// Surface of revolution-like fan: apex at the origin, `rings` rings along
/// the rays `dir(φ)` (already scaled to their outer end).
fn fan_mesh(name: &str, lon: usize, rings: usize, ends: &[[f64; 3]], two_sided: bool) -> Mesh {
    let mut m = Mesh::new(name);
    m.vertices.push([0.0, 0.0, 0.0]);
    let signs: &[f64] = if two_sided { &[1.0, -1.0] } else { &[1.0] };
    let mut starts = Vec::new();
    for &s in signs {
        starts.push(m.vertices.len());
        for k in 1..=rings {
            let t = s * k as f64 / rings as f64;
            for e in ends {
                m.vertices.push(e.map(|x| t * x));
            }
        }
    }
    for &base in &starts {
        let at = |k: usize, j: usize| base + (k - 1) * lon + j % lon;
        for j in 0..lon {
            m.faces.push(vec![0, at(1, j), at(1, j + 1)]);
        }
        for k in 1..rings {
            for j in 0..lon {
                m.faces
                    .push(vec![at(k, j), at(k + 1, j), at(k + 1, j + 1), at(k, j + 1)]);
            }
        }
        let mut rim: Vec<usize> = (0..lon).map(|j| at(rings, j)).collect();
        rim.push(at(rings, 0));
        m.curves.push(rim);
    }
    let step = (lon / 16).max(1);
    for j in (0..lon).step_by(step) {
        let mut c: Vec<usize> = Vec::new();
        if two_sided {
            c.extend((1..=rings).rev().map(|k| starts[1] + (k - 1) * lon + j));
        }
        c.push(0);
        c.extend((1..=rings).map(|k| starts[0] + (k - 1) * lon + j));
        m.curves.push(c);
    }
    m
}

fn sorted_eigen(s: &TernaryForm) -> Vec<(f64, Vector3<f64>)> {
    let m = Matrix3::from_fn(|i, j| to_f64(s.coeff(i, j)));
    let e = SymmetricEigen::new(m);
    let mut pairs: Vec<(f64, Vector3<f64>)> = (0..3)
        .map(|i| (e.eigenvalues[i], e.eigenvectors.column(i).into_owned()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

fn disk(name: &str, normal: Vector3<f64>, lon: usize, rings: usize, hw: f64) -> Mesh {
    let n = normal.normalize();
    let helper = if n.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let e1 = n.cross(&helper).normalize();
    let e2 = n.cross(&e1);
    let ends: Vec<[f64; 3]> = (0..lon)
        .map(|j| {
            let ph = TAU * j as f64 / lon as f64;
            let v = hw * (ph.cos() * e1 + ph.sin() * e2);
            [v.x, v.y, v.z]
        })
        .collect();
    fan_mesh(name, lon, rings, &ends, false)
}

fn direction_f64(d: &PrimitiveDirection) -> Vector3<f64> {
    Vector3::from_fn(|i, _| super::big_f64(&d.coords()[i]))
}

fn cone_meshes(
    s: &TernaryForm,
    class: &ConeClassification,
    lon: usize,
    lat: usize,
    hw: f64,
) -> Vec<Mesh> {
    let rings = (lat / 2).max(1);
    match class {
        ConeClassification::IrreducibleCone => {
            let eig = sorted_eigen(s);
            // The eigenvalue whose sign occurs once is the cone axis.
            let axis = if eig[1].0 > 0.0 { 0 } else { 2 };
            let [p, q] = match axis {
                0 => [1, 2],
                _ => [0, 1],
            };
            let ends: Vec<[f64; 3]> = (0..lon)
                .map(|j| {
                    let ph = TAU * j as f64 / lon as f64;
                    let v = ph.cos() / eig[p].0.abs().sqrt() * eig[p].1
                        + ph.sin() / eig[q].0.abs().sqrt() * eig[q].1
                        + 1.0 / eig[axis].0.abs().sqrt() * eig[axis].1;
                    let u = v.normalize();
                    scale_to_box(&[u.x, u.y, u.z], hw)
                })
                .collect();
            vec![fan_mesh("cone", lon, rings, &ends, true)]
        }
        ConeClassification::DoublePlane { normal } => {
            vec![disk("plane", direction_f64(normal), lon, rings, hw)]
        }
        ConeClassification::PlanePair { normals } => vec![
            disk("plane-1", direction_f64(&normals[0]), lon, rings, hw),
            disk("plane-2", direction_f64(&normals[1]), lon, rings, hw),
        ],
        ConeClassification::IrrationalPlanePair { .. } => {
            let eig = sorted_eigen(s);
            let (neg, pos) = (&eig[0], &eig[2]);
            let a = pos.0.sqrt() * pos.1;
            let b = neg.0.abs().sqrt() * neg.1;
            vec![
                disk("plane-1", a + b, lon, rings, hw),
                disk("plane-2", a - b, lon, rings, hw),
            ]
        }
        ConeClassification::SingleLine { direction } => {
            let d = direction_f64(direction);
            let e = scale_to_box(&[d.x, d.y, d.z], hw);
            let mut m = Mesh::new("line");
            m.vertices.push(e.map(|x| -x));
            m.vertices.push(e);
            m.segments.push([0, 1]);
            m.curves.push(vec![0, 1]);
            vec![m]
        }
        ConeClassification::Empty | ConeClassification::AllSpace => Vec::new(),
    }
}

#[derive(Serialize)]
struct Scene3Metadata {
    matrix: Vec<Vec<String>>,
    cone: String,
    include_cone: bool,
}

impl Scene3D {
    pub fn new(matrix: RatMatrix3, include_cone: bool) -> Self {
        Self {
            matrix,
            include_cone,
            lon: 64,
            lat: 32,
            half_width: DEFAULT_HALF_WIDTH,
        }
    }

    pub fn meshes(&self) -> (ConeClassification, Vec<Mesh>) {
        let b = gram_f64(&self.matrix);
        let clip = 2.0 * self.half_width;
        let sphere = uv_mesh("sphere", self.lon, self.lat, |_| 1.0);
        let ellipsoid = uv_mesh("ellipsoid", self.lon, self.lat, |d| {
            let q = quad(&b, d);
            if q > 0.0 {
                (1.0 / q.sqrt()).min(clip)
            } else {
                clip
            }
        });
        let s = cone_form(&self.matrix);
        let class = classify_form(&s);
        let mut out = vec![sphere, ellipsoid];
        if self.include_cone {
            out.extend(cone_meshes(&s, &class, self.lon, self.lat, self.half_width));
        }
        (class, out)
    }

    pub fn render(&self) -> Scene3Output {
        let (class, meshes) = self.meshes();
        let rows: Vec<Vec<String>> = self
            .matrix
            .rows
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        let meta = Scene3Metadata {
            matrix: rows,
            cone: class.name().to_string(),
            include_cone: self.include_cone,
        };
        let meta_json = serde_json::to_string(&serde_json::to_value(&meta).expect("plain data"))
            .expect("plain data");
        Scene3Output {
            obj: obj_text(&self.matrix, &class, self.include_cone, &meshes),
            svg: projection_svg(&meta_json, &meshes, self.half_width),
        }
    }
}

pub fn render_scene3(a: &RatMatrix3, include_cone: bool) -> Scene3Output {
    Scene3D::new(a.clone(), include_cone).render()
}

fn obj_text(
    a: &RatMatrix3,
    class: &ConeClassification,
    include_cone: bool,
    meshes: &[Mesh],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# normlines scene");
    let _ = writeln!(out, "# matrix {a}");
    let _ = writeln!(out, "# cone {class}");
    let _ = writeln!(out, "# include_cone {include_cone}");
    let mut offset = 1;
    for m in meshes {
        let _ = writeln!(out, "o {}", m.name);
        for v in &m.vertices {
            let _ = writeln!(out, "v {} {} {}", fmt6(v[0]), fmt6(v[1]), fmt6(v[2]));
        }
        for f in &m.faces {
            out.push('f');
            for i in f {
                let _ = write!(out, " {}", i + offset);
            }
            out.push('\n');
        }
        for [p, q] in &m.segments {
            let _ = writeln!(out, "l {} {}", p + offset, q + offset);
        }
        offset += m.vertices.len();
    }
    out
}

const AZIMUTH: f64 = 0.6;
const ELEVATION: f64 = 0.4;

fn project(p: &[f64; 3]) -> (f64, f64) {
    let (sa, ca) = AZIMUTH.sin_cos();
    let (se, ce) = ELEVATION.sin_cos();
    let x = -sa * p[0] + ca * p[1];
    let y = -se * ca * p[0] - se * sa * p[1] + ce * p[2];
    (x, y)
}

fn projection_svg(meta_json: &str, meshes: &[Mesh], hw: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="512" height="512" viewBox="{} {} {} {}">"#,
        fmt6(-hw),
        fmt6(-hw),
        fmt6(2.0 * hw),
        fmt6(2.0 * hw)
    );
    let _ = writeln!(out, "<metadata>{meta_json}</metadata>");
    let _ = writeln!(
        out,
        r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#,
        fmt6(-hw),
        fmt6(-hw),
        fmt6(2.0 * hw),
        fmt6(2.0 * hw)
    );
    let _ = writeln!(
        out,
        r#"<g transform="scale(1,-1)" fill="none" stroke-width="{}">"#,
        fmt6(hw / 300.0)
    );
    for m in meshes {
        let color = match m.name.as_str() {
            "sphere" => "black",
            "ellipsoid" => "blue",
            _ => "red",
        };
        let _ = writeln!(out, r#"<g id="{}" stroke="{color}">"#, m.name);
        for c in &m.curves {
            let mut d = String::new();
            for (k, &i) in c.iter().enumerate() {
                let (x, y) = project(&m.vertices[i]);
                if k > 0 {
                    d.push(' ');
                }
                let _ = write!(
                    d,
                    "{} {} {}",
                    if k == 0 { 'M' } else { 'L' },
                    fmt6(x),
                    fmt6(y)
                );
            }
            let _ = writeln!(out, r#"<path d="{d}"/>"#);
        }
        out.push_str("</g>\n");
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::{example1_matrix, example2_matrix};

    fn norm_a_sq(a: &RatMatrix3, p: &[f64; 3]) -> f64 {
        (0..3)
            .map(|i| {
                let s: f64 = (0..3).map(|j| to_f64(&a.rows[i][j]) * p[j]).sum();
                s * s
            })
            .sum()
    }

    #[test]
    fn uv_meshes_are_watertight() {
        let scene = Scene3D::new(example1_matrix(), false);
        let (_, meshes) = scene.meshes();
        assert_eq!(meshes.len(), 2);
        for m in &meshes {
            assert!(m.is_watertight(), "{}", m.name);
            assert_eq!(m.vertices.len(), 2 + 31 * 64);
        }
    }

    #[test]
    fn ellipsoid_points_satisfy_equation() {
        for a in [example1_matrix(), example2_matrix()] {
            let pts = ellipsoid_samples(&a, 64, 32, 4.0);
            assert_eq!(pts.len(), 2 + 31 * 64);
            for p in &pts {
                assert!((norm_a_sq(&a, p) - 1.0).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn cone_rulings_lie_on_cone() {
        let scene = Scene3D::new(example1_matrix(), true);
        let (class, meshes) = scene.meshes();
        assert_eq!(class, ConeClassification::IrreducibleCone);
        let cone = meshes.iter().find(|m| m.name == "cone").unwrap();
        for p in &cone.vertices {
            let n2 = p.iter().map(|x| x * x).sum::<f64>();
            assert!((norm_a_sq(&example1_matrix(), p) - n2).abs() <= 1e-9 * n2.max(1.0));
            assert!(p.iter().all(|x| x.abs() <= 2.0 + 1e-12));
        }
    }

    #[test]
    fn double_plane_renders_disk() {
        let out = render_scene3(&example2_matrix(), true);
        assert!(out.obj.contains("o plane\n"));
        assert!(out.obj.contains("# cone DoublePlane"));
        let scene = Scene3D::new(example2_matrix(), true);
        let (_, meshes) = scene.meshes();
        let plane = meshes.iter().find(|m| m.name == "plane").unwrap();
        for p in &plane.vertices {
            assert!((p[0] + p[1] + p[2]).abs() < 1e-12);
        }
    }

    #[test]
    fn single_line_uses_segments() {
        let a = RatMatrix3::from_ints([[1, 0, 0], [0, 2, 0], [0, 0, 3]]);
        let out = render_scene3(&a, true);
        assert!(out.obj.contains("l "));
    }

    #[test]
    fn obj_header_and_determinism() {
        let a = render_scene3(&example1_matrix(), true);
        let b = render_scene3(&example1_matrix(), true);
        assert_eq!(a, b);
        assert!(a
            .obj
            .starts_with("# normlines scene\n# matrix [[1/2, 1, 1], [1, 1/2, 1], [1, 1, 1/2]]\n"));
        assert!(!a.obj.contains("-0.000000"));
        assert!(a.svg.contains(r#""cone":"IrreducibleCone""#));
    }
}
