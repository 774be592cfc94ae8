//! SVG and OBJ output for the circle/ellipse and sphere/ellipsoid/cone
//! pictures.
//!
//! This is the only place exact values are turned into floats. Coordinates
//! are written with 6 decimals; output bytes depend only on the input.

mod mesh;
mod svg;

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::analyzer2d::{family_matrix, integer_lines2, FamilyVariant};
use crate::error::Result;
use crate::linalg::{int, rat, RatMatrix2, RatMatrix3, Rational};

pub use mesh::{ellipsoid_samples, render_scene3, Mesh, Scene3D, Scene3Output};
pub use svg::{ellipse_samples, parse_metadata, render_scene2, Scene2D, SceneMetadata};

pub const DEFAULT_HALF_WIDTH: f64 = 2.0;

/// Fixed 6-decimal rendering; never prints `-0.000000`.
pub fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn big_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `[[1/2, 1, 1], [1, 1/2, 1], [1, 1, 1/2]]`: an irreducible cone.
pub fn example1_matrix() -> RatMatrix3 {
    let (h, o) = (rat(1, 2), int(1));
    RatMatrix3::new([
        [h.clone(), o.clone(), o.clone()],
        [o.clone(), h.clone(), o.clone()],
        [o.clone(), o.clone(), h],
    ])
}

/// `[[1, 2, 2], [2, 1, 2], [2, 2, 1]]`: the cone is the double plane
/// `x + y + z = 0`.
pub fn example2_matrix() -> RatMatrix3 {
    RatMatrix3::from_ints([[1, 2, 2], [2, 1, 2], [2, 2, 1]])
}

/// The standard figure set as `(file name, contents)` pairs, in a fixed order.
pub fn figure_set() -> Vec<(String, String)> {
    let lopez = RatMatrix2::from_ints(4, 3, -2, -3);
    let fig2 = family_matrix(FamilyVariant::LOPEZ, &BigInt::from(2), &BigInt::from(-3));
    let fig2_lines = integer_lines2(&fig2);
    let mut out = vec![
        ("fig1.svg".to_string(), render_scene2(&lopez, &[])),
        ("fig2.svg".to_string(), render_scene2(&fig2, &fig2_lines)),
    ];
    let scenes = [
        ("fig3a", example1_matrix(), false),
        ("fig3b", example1_matrix(), true),
        ("fig4", example2_matrix(), true),
    ];
    for (name, a, cone) in scenes {
        let s = render_scene3(&a, cone);
        out.push((format!("{name}.obj"), s.obj));
        out.push((format!("{name}.svg"), s.svg));
    }
    out
}

/// Writes [`figure_set`] into `dir`, creating it if needed.
pub fn write_figures(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (name, body) in figure_set() {
        let p = dir.join(name);
        std::fs::write(&p, body)?;
        paths.push(p);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_decimals() {
        assert_eq!(fmt6(0.0), "0.000000");
        assert_eq!(fmt6(-0.0), "0.000000");
        assert_eq!(fmt6(-1e-9), "0.000000");
        assert_eq!(fmt6(1.5), "1.500000");
        assert_eq!(fmt6(-2.25), "-2.250000");
    }

    #[test]
    fn figures_are_deterministic() {
        let a = figure_set();
        let b = figure_set();
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
    }
}
