//! Report model and command implementations behind the `normlines` binary.
//!
//! Exact values are serialized as strings (`"4"`, `"-3/5"`); JSON output is
//! canonical, with keys sorted and no floats.

use std::fmt::Write;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::analyzer2d::{
    existence_condition, family_k, family_matrix, family_solutions, solve_lines2, FamilyVariant,
    Line2, Line2Kind, LineSolution2,
};
use crate::analyzer3d::{
    classify_cone, cone_form, default_pivot, existence3, integer_line_search3, pivot_reduce,
    plane_integer_basis, Axis, ConeClassification, PivotReduction,
};
use crate::diophantine::{
    lift_to_lines, piezas_family, rational_sqrt, square_rep_bruteforce, two_adic_obstruction,
    IntBinaryForm, SquareRepInstance,
};
use crate::direction::PrimitiveDirection;
use crate::error::{Error, Result};
use crate::linalg::{
    gram2, parse_rational, verify_norm_preserving, LinearMap, RatMatrix2, RatMatrix3, Rational,
};
use crate::quadint::QuadIntElement;
use crate::render::{render_scene2, render_scene3, write_figures};
use crate::torus::{
    autom_family, bisector, eigen_power, matrix_power, solution_lines_for_autom, stable_iterate,
    unstable_iterate, IntMatrix2,
};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GramReport {
    pub m: String,
    pub n: String,
    pub p: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlopeReport {
    pub alpha: String,
    pub beta: String,
    pub s: String,
    pub sign: i8,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<String>>,
    pub rational: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irrational_slope: Option<SlopeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenline: Option<bool>,
    pub verified: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassificationReport {
    pub kind: String,
    pub definiteness: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub normals: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionReport {
    pub pivot: String,
    pub linear: Vec<String>,
    pub denominator: String,
    pub discriminant_form: Vec<String>,
    pub scale: String,
    pub formula: String,
    pub identity_verified: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyReport {
    pub variant: String,
    pub transpose: bool,
    pub a: String,
    pub c: String,
    pub k: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceReport {
    pub form: Vec<String>,
    pub d: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiezasValue {
    pub s: String,
    pub t: String,
    pub y: String,
    pub z: String,
    pub u: String,
    pub identity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<Vec<LineReport>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiezasReport {
    pub seed: Vec<String>,
    /// Rows `y`, `z`, `u`; columns the coefficients of `s²`, `st`, `t²`.
    pub coefficients: Vec<Vec<String>>,
    pub values: Vec<PiezasValue>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusReport {
    pub q: String,
    pub n: u64,
    pub power: Vec<Vec<String>>,
    pub det: String,
    pub lines: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_unstable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_stable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unstable_iterate: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_iterate: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_verified: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Output of one CLI invocation. Sections not relevant to the command are
/// omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub existence: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<GramReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane_basis: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReductionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction_error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lines: Option<Vec<LineReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub piezas: Option<PiezasReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub files: Option<Vec<String>>,
}

impl Report {
    fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            ..Self::default()
        }
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report is plain data");
        let mut s = serde_json::to_string_pretty(&v).expect("report is plain data");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Every reported line carries a true verification flag.
    pub fn all_verified(&self) -> bool {
        let ok = |ls: &Option<Vec<LineReport>>| ls.iter().flatten().all(|l| l.verified);
        ok(&self.lines)
            && self
                .piezas
                .iter()
                .flat_map(|p| &p.values)
                .all(|v| ok(&v.lines))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &str| {
            let _ = writeln!(out, "{k:<14}{v}");
        };
        if let Some(m) = &self.matrix {
            kv("matrix", &rows_text(m));
        }
        if let Some(e) = self.existence {
            kv("existence", &e.to_string());
        }
        if let Some(g) = &self.gram {
            kv("gram", &format!("m = {}, n = {}, p = {}", g.m, g.n, g.p));
        }
        if let Some(c) = &self.classification {
            let mut s = format!("{} ({})", c.kind, c.definiteness);
            for n in &c.normals {
                let _ = write!(s, " normal <{}>", n.join(", "));
            }
            if let Some(k) = &c.kernel {
                let _ = write!(s, " kernel <{}>", k.join(", "));
            }
            kv("cone", &s);
        }
        if let Some(b) = &self.plane_basis {
            let vs: Vec<String> = b.iter().map(|v| format!("<{}>", v.join(", "))).collect();
            kv("plane basis", &vs.join(", "));
        }
        if let Some(s) = &self.solution {
            kv("solution", s);
        }
        if let Some(d) = &self.discriminant {
            kv("discriminant", d);
        }
        if let Some(k) = &self.k {
            kv("k", k);
        }
        if let Some(f) = &self.family {
            let t = if f.transpose { " transposed" } else { "" };
            kv(
                "family",
                &format!("{}{t}, a = {}, c = {}", f.variant, f.a, f.c),
            );
            kv("k", &f.k);
        }
        if let Some(r) = &self.reduction {
            kv("reduction", &r.formula);
            kv("scale", &r.scale);
        }
        if let Some(e) = &self.reduction_error {
            kv("reduction", e);
        }
        if let Some(o) = self.obstruction {
            let s = if o {
                "certified (no nontrivial solutions)"
            } else {
                "inconclusive"
            };
            kv("mod 4", s);
        }
        if let Some(i) = &self.instance {
            kv(
                "equation",
                &format!(
                    "{} = {}",
                    poly_text(&i.form, &["y^2", "y*z", "z^2"]),
                    poly_text(std::slice::from_ref(&i.d), &["u^2"])
                ),
            );
        }
        if let Some(b) = self.bound {
            kv("bound", &b.to_string());
        }
        if let Some(sols) = &self.solutions {
            kv("solutions", &sols.len().to_string());
            for s in sols {
                let _ = writeln!(out, "  (y, z, u) = ({})", s.join(", "));
            }
        }
        if let Some(ls) = &self.lines {
            let _ = writeln!(out, "lines ({})", ls.len());
            for l in ls {
                let _ = writeln!(out, "  {}", line_text(l));
            }
        }
        if let Some(p) = &self.piezas {
            let _ = writeln!(out, "seed          ({})", p.seed.join(", "));
            for (name, row) in ["y", "z", "u"].iter().zip(&p.coefficients) {
                let _ = writeln!(out, "  {name} = {}", poly_text(row, &["s^2", "s*t", "t^2"]));
            }
            for v in &p.values {
                let _ = writeln!(
                    out,
                    "(s, t) = ({}, {}): (y, z, u) = ({}, {}, {}){}",
                    v.s,
                    v.t,
                    v.y,
                    v.z,
                    v.u,
                    if v.identity { "" } else { "  IDENTITY FAILS" }
                );
                for l in v.lines.iter().flatten() {
                    let _ = writeln!(out, "  {}", line_text(l));
                }
            }
        }
        if let Some(t) = &self.torus {
            let _ = writeln!(out, "q             {}", t.q);
            let _ = writeln!(out, "A^{:<12}{}", t.n, rows_text(&t.power));
            let _ = writeln!(out, "det           {}", t.det);
            let ls: Vec<String> = t
                .lines
                .iter()
                .map(|v| format!("<{}>", v.join(", ")))
                .collect();
            let _ = writeln!(out, "lines         {}", ls.join(", "));
            if let (Some(lu), Some(ls)) = (&t.lambda_unstable, &t.lambda_stable) {
                let _ = writeln!(out, "eigenvalues   {lu}, {ls}");
            }
            if let Some(u) = &t.unstable_iterate {
                let _ = writeln!(out, "A^n u         <{}>", u.join(", "));
            }
            if let Some(w) = &t.stable_iterate {
                let _ = writeln!(out, "A^n w         <{}>", w.join(", "));
            }
            if let Some(v) = t.eigen_verified {
                let _ = writeln!(out, "eigen check   {v}");
            }
            if let Some(n) = &t.note {
                let _ = writeln!(out, "note          {n}");
            }
        }
        if let Some(fs) = &self.files {
            for f in fs {
                let _ = writeln!(out, "wrote {f}");
            }
        }
        out
    }
}

fn rows_text(m: &[Vec<String>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

/// `c1*m1 + c2*m2 + ...` from exact coefficient strings, skipping zeros.
fn poly_text(coeffs: &[String], monos: &[&str]) -> String {
    let mut out = String::new();
    for (c, m) in coeffs.iter().zip(monos) {
        if c == "0" {
            continue;
        }
        let (neg, mag) = match c.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, c.as_str()),
        };
        let term = if mag == "1" {
            m.to_string()
        } else {
            format!("{mag}*{m}")
        };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn line_text(l: &LineReport) -> String {
    let body = match (&l.direction, &l.irrational_slope) {
        (Some(d), _) => format!("<{}>", d.join(", ")),
        (None, Some(s)) => {
            let op = if s.sign > 0 { '+' } else { '-' };
            format!("y/x = ({} {op} √{})/{}", s.alpha, s.s, s.beta)
        }
        (None, None) => "?".to_string(),
    };
    let mut tags = vec![if l.rational { "rational" } else { "irrational" }];
    match l.eigenline {
        Some(true) => tags.push("eigenline"),
        Some(false) => tags.push("non-invariant"),
        None => {}
    }
    tags.push(if l.verified {
        "verified"
    } else {
        "NOT VERIFIED"
    });
    format!("{body}  {}", tags.join(", "))
}

fn strs<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

fn dir_strs(d: &PrimitiveDirection) -> Vec<String> {
    strs(d.coords())
}

fn parse_all(tokens: &[String]) -> Result<Vec<Rational>> {
    tokens.iter().map(|t| parse_rational(t)).collect()
}

pub fn parse_integer(token: &str) -> Result<BigInt> {
    let r = parse_rational(token)?;
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(Error::NotInteger(token.to_string()))
    }
}

fn direction_line<M: LinearMap>(
    a: &M,
    d: &PrimitiveDirection,
    eigenline: Option<bool>,
) -> LineReport {
    LineReport {
        direction: Some(dir_strs(d)),
        rational: true,
        irrational_slope: None,
        eigenline,
        verified: verify_norm_preserving(a, d),
    }
}

fn line2_report(a: &RatMatrix2, l: &Line2) -> LineReport {
    match &l.kind {
        Line2Kind::Rational(d) => direction_line(a, d, Some(l.eigenline)),
        Line2Kind::Irrational(s) => LineReport {
            direction: None,
            rational: false,
            irrational_slope: Some(SlopeReport {
                alpha: s.alpha.to_string(),
                beta: s.beta.to_string(),
                s: s.s.to_string(),
                sign: s.sign,
            }),
            eigenline: Some(false),
            verified: l.verify(a),
        },
    }
}

fn matrix2_rows(a: &RatMatrix2) -> Vec<Vec<String>> {
    a.rows().iter().map(strs).collect()
}

fn matrix3_rows(a: &RatMatrix3) -> Vec<Vec<String>> {
    a.rows.iter().map(strs).collect()
}

/// The `analyze2` report for an already parsed matrix.
pub fn analyze2_report(a: &RatMatrix2) -> Report {
    let g = gram2(a);
    let disc = g.reduced_discriminant();
    let sol = solve_lines2(a);
    let mut r = Report::new("analyze2");
    r.matrix = Some(matrix2_rows(a));
    r.existence = Some(existence_condition(a));
    r.gram = Some(GramReport {
        m: g.m.to_string(),
        n: g.n.to_string(),
        p: g.p.to_string(),
    });
    r.discriminant = Some(disc.to_string());
    r.k = rational_sqrt(&disc).map(|k| k.to_string());
    let (name, lines) = match &sol {
        LineSolution2::NoRealLines => ("NoRealLines", Vec::new()),
        LineSolution2::AllLines => ("AllLines", Vec::new()),
        LineSolution2::Lines(ls) => ("Lines", ls.iter().map(|l| line2_report(a, l)).collect()),
    };
    r.solution = Some(name.to_string());
    r.lines = Some(lines);
    r
}

/// `analyze2 a b c d`
pub fn cmd_analyze2(entries: &[String]) -> Result<Report> {
    let a = RatMatrix2::from_slice(&parse_all(entries)?)?;
    Ok(analyze2_report(&a))
}

fn reduction_report(red: &PivotReduction, a: &RatMatrix3) -> ReductionReport {
    ReductionReport {
        pivot: red.pivot.to_string(),
        linear: strs(&red.linear),
        denominator: red.denominator.to_string(),
        discriminant_form: strs(red.discriminant_form.coefficients()),
        scale: red.scale.to_string(),
        formula: red.to_string(),
        identity_verified: red.verify_identity(&cone_form(a)),
    }
}

fn classification_report(c: &ConeClassification, a: &RatMatrix3) -> ClassificationReport {
    let (normals, kernel) = match c {
        ConeClassification::DoublePlane { normal } => (vec![dir_strs(normal)], None),
        ConeClassification::PlanePair { normals } => (normals.iter().map(dir_strs).collect(), None),
        ConeClassification::SingleLine { direction } => (Vec::new(), Some(dir_strs(direction))),
        ConeClassification::IrrationalPlanePair { kernel } => (Vec::new(), Some(dir_strs(kernel))),
        _ => (Vec::new(), None),
    };
    ClassificationReport {
        kind: c.name().to_string(),
        definiteness: cone_form(a).definiteness().name().to_string(),
        normals,
        kernel,
    }
}

fn choose_pivot(a: &RatMatrix3, pivot: Option<Axis>) -> Result<PivotReduction> {
    let axis = match pivot {
        Some(p) => p,
        None => default_pivot(a)?,
    };
    pivot_reduce(a, axis)
}

/// `analyze3 <9 entries> [--bound N] [--pivot x|y|z]`
pub fn cmd_analyze3(entries: &[String], bound: u32, pivot: Option<&str>) -> Result<Report> {
    let a = RatMatrix3::from_slice(&parse_all(entries)?)?;
    let pivot = pivot.map(Axis::parse).transpose()?;
    analyze3_report(&a, bound, pivot)
}

/// The `analyze3` report for an already parsed matrix.
pub fn analyze3_report(a: &RatMatrix3, bound: u32, pivot: Option<Axis>) -> Result<Report> {
    let a = a.clone();
    let mut r = Report::new("analyze3");
    r.matrix = Some(matrix3_rows(&a));
    r.existence = Some(existence3(&a));
    let class = classify_cone(&a);
    r.classification = Some(classification_report(&class, &a));
    if let Ok(basis) = plane_integer_basis(&class) {
        r.plane_basis = Some(basis.iter().map(dir_strs).collect());
    }
    match choose_pivot(&a, pivot) {
        Ok(red) => {
            r.obstruction = Some(two_adic_obstruction(&red.int_form()));
            r.reduction = Some(reduction_report(&red, &a));
        }
        Err(e @ Error::AllPivotsDegenerate) => r.reduction_error = Some(e.to_string()),
        Err(e) => return Err(e),
    }
    if class == ConeClassification::AllSpace {
        r.solution = Some("AllLines".to_string());
    } else if r.plane_basis.is_some() {
        // Every integer point of the plane(s) is a line; the basis says it all.
        r.solution = Some("RationalPlanes".to_string());
    } else {
        r.bound = Some(bound);
        r.lines = Some(
            integer_line_search3(&a, bound)
                .iter()
                .map(|d| direction_line(&a, d, None))
                .collect(),
        );
    }
    Ok(r)
}

/// `family <variant> a c [--transpose]`
pub fn cmd_family(variant: &str, a: &str, c: &str, transpose: bool) -> Result<Report> {
    let v = FamilyVariant::parse(variant, transpose)?;
    let (ai, ci) = (parse_integer(a)?, parse_integer(c)?);
    let m = family_matrix(v, &ai, &ci);
    let mut r = analyze2_report(&m);
    r.command = "family".to_string();
    let closed_form = (v == FamilyVariant::LOPEZ).then(|| {
        let s = family_solutions(&ai, &ci);
        vec![dir_strs(&s.v1), dir_strs(&s.v2)]
    });
    r.family = Some(FamilyReport {
        variant: v.name().to_string(),
        transpose,
        a: ai.to_string(),
        c: ci.to_string(),
        k: family_k(v, &ai, &ci).to_string(),
        closed_form,
    });
    Ok(r)
}

fn instance(form: &[String], d: &str) -> Result<SquareRepInstance> {
    let f: Vec<BigInt> = form
        .iter()
        .map(|t| parse_integer(t))
        .collect::<Result<_>>()?;
    let [a, b, c] = <[BigInt; 3]>::try_from(f).map_err(|f| Error::DimensionMismatch {
        expected: 3,
        found: f.len(),
    })?;
    SquareRepInstance::new(IntBinaryForm::new(a, b, c), parse_integer(d)?)
}

fn instance_report(inst: &SquareRepInstance) -> InstanceReport {
    InstanceReport {
        form: strs([&inst.form.a, &inst.form.b, &inst.form.c]),
        d: inst.d.to_string(),
    }
}

/// `dioph a b c [--d D] [--bound N]`: `a·y² + b·yz + c·z² = d·u²`.
pub fn cmd_dioph(form: &[String], d: &str, bound: u32) -> Result<Report> {
    let inst = instance(form, d)?;
    let mut r = Report::new("dioph");
    r.instance = Some(instance_report(&inst));
    r.obstruction = Some(inst.d.is_one() && two_adic_obstruction(&inst.form));
    r.bound = Some(bound);
    r.solutions = Some(
        square_rep_bruteforce(&inst, bound)
            .into_iter()
            .map(|(y, z, u)| strs([y, z, u]))
            .collect(),
    );
    Ok(r)
}

/// Arguments of `piezas`.
#[derive(Clone, Debug, Default)]
pub struct PiezasArgs {
    pub form: Vec<String>,
    pub d: String,
    pub seed: Vec<String>,
    pub st: Vec<(String, String)>,
    pub range: Option<u32>,
    pub matrix: Option<Vec<String>>,
    pub pivot: Option<String>,
}

pub fn cmd_piezas(args: &PiezasArgs) -> Result<Report> {
    let inst = instance(&args.form, &args.d)?;
    let seed: Vec<BigInt> = args
        .seed
        .iter()
        .map(|t| parse_integer(t))
        .collect::<Result<_>>()?;
    if seed.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: seed.len(),
        });
    }
    let fam = piezas_family(&inst, (seed[0].clone(), seed[1].clone(), seed[2].clone()))?;
    let lift = match &args.matrix {
        Some(m) => {
            let a = RatMatrix3::from_slice(&parse_all(m)?)?;
            let pivot = args.pivot.as_deref().map(Axis::parse).transpose()?;
            let red = choose_pivot(&a, pivot)?;
            Some((a, red))
        }
        None => None,
    };
    let mut params: Vec<(BigInt, BigInt)> = args
        .st
        .iter()
        .map(|(s, t)| Ok((parse_integer(s)?, parse_integer(t)?)))
        .collect::<Result<_>>()?;
    if let Some(n) = args.range {
        let n = i64::from(n);
        for s in -n..=n {
            for t in -n..=n {
                if (s, t) != (0, 0) {
                    params.push((s.into(), t.into()));
                }
            }
        }
    }
    if params.is_empty() {
        params.push((BigInt::one(), BigInt::one()));
    }
    let mut values = Vec::with_capacity(params.len());
    for (s, t) in &params {
        let (y, z, u) = fam.evaluate(s, t);
        let lines = match &lift {
            Some((a, red)) if !(y.is_zero() && z.is_zero()) => Some(
                lift_to_lines(a, red, (&y, &z, &u))?
                    .iter()
                    .map(|d| direction_line(a, d, None))
                    .collect(),
            ),
            _ => None,
        };
        values.push(PiezasValue {
            s: s.to_string(),
            t: t.to_string(),
            identity: inst.is_solution(&y, &z, &u),
            y: y.to_string(),
            z: z.to_string(),
            u: u.to_string(),
            lines,
        });
    }
    let mut r = Report::new("piezas");
    r.instance = Some(instance_report(&inst));
    if let Some((a, red)) = &lift {
        r.matrix = Some(matrix3_rows(a));
        r.reduction = Some(reduction_report(red, a));
    }
    r.piezas = Some(PiezasReport {
        seed: strs(&seed),
        coefficients: fam.coefficient_table().iter().map(strs).collect(),
        values,
    });
    Ok(r)
}

fn int_rows(m: &IntMatrix2) -> Vec<Vec<String>> {
    m.rows.iter().map(strs).collect()
}

fn quad_strs(v: &[QuadIntElement; 2]) -> Vec<String> {
    v.iter().map(QuadIntElement::to_over_root_string).collect()
}

/// `torus q n`
pub fn cmd_torus(q: &str, n: u64) -> Result<Report> {
    let qi = parse_integer(q)?;
    let a = autom_family(&qi);
    let an = matrix_power(a.matrix(), n);
    let (v1, v2) = solution_lines_for_autom(&qi)?;
    let mut t = TorusReport {
        q: qi.to_string(),
        n,
        power: int_rows(&an),
        det: an.det().to_string(),
        lines: vec![dir_strs(&v1), dir_strs(&v2)],
        ..TorusReport::default()
    };
    if qi.is_zero() {
        t.note = Some("q = 0 is a reflection: every line is norm-preserving".to_string());
    } else {
        let b = bisector(&qi)?;
        let u = unstable_iterate(&qi, n)?;
        let w = stable_iterate(&qi, n)?;
        t.eigen_verified = Some(
            u == eigen_power(&b.lambda_u, &b.unstable_vector(), n)
                && w == eigen_power(&b.lambda_s, &b.stable_vector(), n),
        );
        t.lambda_unstable = Some(b.lambda_u.to_string());
        t.lambda_stable = Some(b.lambda_s.to_string());
        t.unstable_iterate = Some(quad_strs(&u));
        t.stable_iterate = Some(quad_strs(&w));
    }
    let mut r = Report::new("torus");
    r.matrix = Some(int_rows(a.matrix()));
    r.torus = Some(t);
    Ok(r)
}

/// What `render` should produce.
#[derive(Clone, Debug)]
pub enum RenderTarget {
    /// The standard figure set, written into a directory.
    Figures { dir: PathBuf },
    /// Circle, ellipse and (unless `no_lines`) the rational lines.
    Scene2 {
        entries: Vec<String>,
        out: PathBuf,
        no_lines: bool,
    },
    /// `<prefix>.obj` and `<prefix>.svg`.
    Scene3 {
        entries: Vec<String>,
        prefix: PathBuf,
        cone: bool,
    },
}

pub fn cmd_render(target: &RenderTarget) -> Result<Report> {
    let mut r = Report::new("render");
    let files = match target {
        RenderTarget::Figures { dir } => write_figures(dir)?,
        RenderTarget::Scene2 {
            entries,
            out,
            no_lines,
        } => {
            let a = RatMatrix2::from_slice(&parse_all(entries)?)?;
            let lines = if *no_lines {
                Vec::new()
            } else {
                crate::analyzer2d::integer_lines2(&a)
            };
            std::fs::write(out, render_scene2(&a, &lines))?;
            r.matrix = Some(matrix2_rows(&a));
            vec![out.clone()]
        }
        RenderTarget::Scene3 {
            entries,
            prefix,
            cone,
        } => {
            let a = RatMatrix3::from_slice(&parse_all(entries)?)?;
            let s = render_scene3(&a, *cone);
            let obj = prefix.with_extension("obj");
            let svg = prefix.with_extension("svg");
            std::fs::write(&obj, s.obj)?;
            std::fs::write(&svg, s.svg)?;
            r.matrix = Some(matrix3_rows(&a));
            vec![obj, svg]
        }
    };
    r.files = Some(files.iter().map(|p| p.display().to_string()).collect());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn analyze2_lopez() {
        let r = cmd_analyze2(&toks("4 3 -2 -3")).unwrap();
        let dirs: Vec<_> = r
            .lines
            .iter()
            .flatten()
            .map(|l| l.direction.clone().unwrap())
            .collect();
        assert_eq!(dirs, vec![toks("1 -1"), toks("17 -19")]);
        assert!(r.all_verified());
        assert_eq!(r.k.as_deref(), Some("1"));
    }

    #[test]
    fn analyze2_orthogonal_and_dilation() {
        let r = cmd_analyze2(&toks("1 0 0 1")).unwrap();
        assert_eq!(r.solution.as_deref(), Some("AllLines"));
        let r = cmd_analyze2(&toks("2 0 0 2")).unwrap();
        assert_eq!(r.solution.as_deref(), Some("NoRealLines"));
        assert_eq!(r.existence, Some(false));
    }

    #[test]
    fn bad_token_is_named() {
        let e = cmd_analyze2(&toks("4 3 x -3")).unwrap_err();
        assert!(e.to_string().contains("`x`"));
        let e = cmd_analyze2(&toks("4 3 0.5 -3")).unwrap_err();
        assert!(e.to_string().contains("`0.5`"));
        assert!(cmd_analyze2(&toks("1 2 3")).is_err());
        let e = cmd_torus("1/2", 3).unwrap_err();
        assert_eq!(e, Error::NotInteger("1/2".into()));
    }

    #[test]
    fn json_round_trip_and_sorted_keys() {
        let r = cmd_analyze2(&toks("1 1 1 1")).unwrap();
        let j = r.to_json();
        assert_eq!(Report::from_json(&j).unwrap(), r);
        let keys: Vec<&str> = j
            .lines()
            .filter(|l| l.starts_with("  \""))
            .map(|l| l.trim().split('"').nth(1).unwrap())
            .collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn analyze3_examples() {
        let r = cmd_analyze3(&toks("1/2 1 1 1 1/2 1 1 1 1/2"), 20, Some("z")).unwrap();
        assert_eq!(r.classification.as_ref().unwrap().kind, "IrreducibleCone");
        assert_eq!(r.obstruction, Some(true));
        assert_eq!(
            r.reduction.as_ref().unwrap().discriminant_form,
            toks("39 48 39")
        );
        assert!(r.lines.as_ref().unwrap().is_empty());

        let r = cmd_analyze3(&toks("1 2 2 2 1 2 2 2 1"), 1, None).unwrap();
        assert_eq!(r.plane_basis, Some(vec![toks("1 0 -1"), toks("0 1 -1")]));

        let r = cmd_analyze3(&toks("1 0 0 0 1 0 0 0 1"), 5, None).unwrap();
        assert_eq!(r.solution.as_deref(), Some("AllLines"));
        assert!(r.reduction_error.is_some());
        assert!(cmd_analyze3(&toks("1 0 0 0 2 0 0 0 3"), 5, Some("x")).is_err());
    }

    #[test]
    fn family_lopez() {
        let r = cmd_family("lopez", "4", "-2", false).unwrap();
        assert_eq!(r.matrix, Some(vec![toks("4 3"), toks("-2 -3")]));
        assert_eq!(r.family.as_ref().unwrap().k, "1");
        assert!(r.all_verified());
    }

    #[test]
    fn piezas_with_lift() {
        let args = PiezasArgs {
            form: toks("36 52 39"),
            d: "1".into(),
            seed: toks("1 0 6"),
            st: vec![("1".into(), "1".into())],
            range: None,
            matrix: Some(toks("1 2 3 3 4 5 2 3 4")),
            pivot: None,
        };
        let r = cmd_piezas(&args).unwrap();
        let v = &r.piezas.as_ref().unwrap().values[0];
        assert_eq!(
            (v.y.as_str(), v.z.as_str(), v.u.as_str()),
            ("-3", "124", "762")
        );
        let dirs: Vec<_> = v
            .lines
            .iter()
            .flatten()
            .map(|l| l.direction.clone().unwrap())
            .collect();
        assert_eq!(dirs, vec![toks("2402 39 -1612"), toks("302 3 -124")]);
    }

    #[test]
    fn torus_q2() {
        let r = cmd_torus("2", 10).unwrap();
        let t = r.torus.unwrap();
        assert_eq!(t.power, vec![toks("1346269 832040"), toks("832040 514229")]);
        assert_eq!(
            t.unstable_iterate.unwrap(),
            vec![
                "514229 + 1149851/√5".to_string(),
                "317811 + 710647/√5".to_string()
            ]
        );
        assert_eq!(t.eigen_verified, Some(true));
        let r = cmd_torus("0", 3).unwrap();
        assert!(r.torus.unwrap().note.is_some());
    }
}
