use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{big_f64, fmt6, to_f64, DEFAULT_HALF_WIDTH};
use crate::direction::PrimitiveDirection;
use crate::error::{Error, Result};
use crate::linalg::{gram2, parse_rational, RatMatrix2};

const ELLIPSE_SAMPLES: usize = 256;
const SIZE_PX: u32 = 512;

/// Unit circle, the ellipse `‖Av‖ = 1` and a set of lines through the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene2D {
    pub matrix: RatMatrix2,
    pub lines: Vec<PrimitiveDirection>,
    pub half_width: f64,
}

impl Scene2D {
    pub fn new(matrix: RatMatrix2, lines: Vec<PrimitiveDirection>) -> Self {
        Self {
            matrix,
            lines,
            half_width: DEFAULT_HALF_WIDTH,
        }
    }

    pub fn render(&self) -> String {
        let hw = self.half_width;
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE_PX}" height="{SIZE_PX}" viewBox="{} {} {} {}">"#,
            fmt6(-hw),
            fmt6(-hw),
            fmt6(2.0 * hw),
            fmt6(2.0 * hw)
        );
        let meta = SceneMetadata::new(&self.matrix, &self.lines);
        let _ = writeln!(out, "<metadata>{}</metadata>", meta.to_json());
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>"#,
            fmt6(-hw),
            fmt6(-hw),
            fmt6(2.0 * hw),
            fmt6(2.0 * hw)
        );
        let sw = fmt6(hw / 200.0);
        let _ = writeln!(
            out,
            r#"<g transform="scale(1,-1)" fill="none" stroke-width="{sw}">"#
        );
        let _ = writeln!(
            out,
            r#"<line id="x-axis" x1="{}" y1="0.000000" x2="{}" y2="0.000000" stroke="lightgray"/>"#,
            fmt6(-hw),
            fmt6(hw)
        );
        let _ = writeln!(
            out,
            r#"<line id="y-axis" x1="0.000000" y1="{}" x2="0.000000" y2="{}" stroke="lightgray"/>"#,
            fmt6(-hw),
            fmt6(hw)
        );
        let _ = writeln!(
            out,
            r#"<circle id="unit-circle" cx="0.000000" cy="0.000000" r="1.000000" stroke="black"/>"#
        );
        let _ = writeln!(
            out,
            r#"<path id="ellipse" d="{}" stroke="blue"/>"#,
            ellipse_path(&self.matrix, 2.0 * hw)
        );
        for (i, d) in self.lines.iter().enumerate() {
            let (x, y) = (big_f64(&d.coords()[0]), big_f64(&d.coords()[1]));
            let t = hw / x.abs().max(y.abs());
            let _ = writeln!(
                out,
                r#"<line id="line-{i}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="red"/>"#,
                fmt6(-t * x),
                fmt6(-t * y),
                fmt6(t * x),
                fmt6(t * y)
            );
        }
        out.push_str("</g>\n</svg>\n");
        out
    }
}

pub fn render_scene2(a: &RatMatrix2, lines: &[PrimitiveDirection]) -> String {
    Scene2D::new(a.clone(), lines.to_vec()).render()
}

/// Points of `‖Av‖ = 1` at `count` equally spaced polar angles, with
/// `None` where the curve leaves the disk of radius `clip`.
pub fn ellipse_samples(a: &RatMatrix2, count: usize, clip: f64) -> Vec<Option<[f64; 2]>> {
    let g = gram2(a);
    let (m, n, p) = (to_f64(&g.m), to_f64(&g.n), to_f64(&g.p));
    (0..count)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / count as f64;
            let (c, s) = (th.cos(), th.sin());
            let q = m * c * c + 2.0 * p * c * s + n * s * s;
            let rho = 1.0 / q.sqrt();
            (q > 0.0 && rho <= clip).then_some([rho * c, rho * s])
        })
        .collect()
}

fn ellipse_path(a: &RatMatrix2, clip: f64) -> String {
    let pts = ellipse_samples(a, ELLIPSE_SAMPLES, clip);
    let closed = pts.iter().all(Option::is_some);
    let mut d = String::new();
    let mut pen_down = false;
    for p in &pts {
        match p {
            Some([x, y]) => {
                let cmd = if pen_down { 'L' } else { 'M' };
                if !d.is_empty() {
                    d.push(' ');
                }
                let _ = write!(d, "{cmd} {} {}", fmt6(*x), fmt6(*y));
                pen_down = true;
            }
            None => pen_down = false,
        }
    }
    if closed {
        d.push_str(" Z");
    }
    d
}

/// Exact input carried inside the SVG `<metadata>` element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SceneMetadata {
    pub matrix: Vec<Vec<String>>,
    pub lines: Vec<Vec<String>>,
}

impl SceneMetadata {
    pub fn new(a: &RatMatrix2, lines: &[PrimitiveDirection]) -> Self {
        Self {
            matrix: a
                .rows()
                .iter()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
            lines: lines
                .iter()
                .map(|d| d.coords().iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("plain data");
        serde_json::to_string(&v).expect("plain data")
    }

    pub fn matrix2(&self) -> Result<RatMatrix2> {
        let entries = self
            .matrix
            .iter()
            .flatten()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        RatMatrix2::from_slice(&entries)
    }

    pub fn directions(&self) -> Result<Vec<PrimitiveDirection>> {
        self.lines
            .iter()
            .map(|l| {
                let v = l
                    .iter()
                    .map(|s| s.parse().map_err(|_| Error::Parse(s.clone())))
                    .collect::<Result<Vec<_>>>()?;
                PrimitiveDirection::from_bigints(&v)
            })
            .collect()
    }
}

/// Reads back the `<metadata>` block written by [`render_scene2`].
pub fn parse_metadata(svg: &str) -> Result<SceneMetadata> {
    let start = svg
        .find("<metadata>")
        .ok_or_else(|| Error::Parse("<metadata>".into()))?
        + "<metadata>".len();
    let end = svg[start..]
        .find("</metadata>")
        .ok_or_else(|| Error::Parse("</metadata>".into()))?;
    serde_json::from_str(&svg[start..start + end]).map_err(|e| Error::Parse(e.to_string()))
}
