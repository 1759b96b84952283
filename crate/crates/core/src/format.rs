//! The `.ellrc` generator-matrix file and its JSON metadata mirror.
//!
//! ```text
//! ELLRC 1
//! FIELD p a m0,m1,...,ma
//! CURVE a1 a2 a3 a4 a6
//! CODE n k mode fiberSize m
//! LOCALITY r            (or: LOCALITY r1 r2 d0)
//! POINTS
//! x;y | INF             (n lines)
//! MATRIX
//! row                   (k lines of n elements)
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::autgrp::{self, AutoMap};
use crate::curve::{Curve, Pt};
use crate::error::{Error, Result};
use crate::ffield::{Felt, FieldCtx};
use crate::lrc::{CodeInfo, LrcCode, Mode};

pub fn write_ellrc(code: &LrcCode) -> String {
    let f = code.field();
    let c = &code.curve;
    let mut out = String::new();
    out.push_str("ELLRC 1\n");
    out.push_str(&format!("FIELD {}\n", f.header()));
    out.push_str(&format!("CURVE {}\n", c.render()));
    out.push_str(&format!("CODE {} {} {} {} {}\n", code.n(), code.k(), code.mode.name(), code.fiber_size, code.m()));
    match code.mode {
        Mode::Single { r, .. } => out.push_str(&format!("LOCALITY {r}\n")),
        Mode::Two { r1, r2, d0, .. } => out.push_str(&format!("LOCALITY {r1} {r2} {d0}\n")),
    }
    out.push_str("POINTS\n");
    for p in &code.points {
        out.push_str(&c.render_point(p));
        out.push('\n');
    }
    out.push_str("MATRIX\n");
    for row in &code.matrix {
        let parts: Vec<String> = row.iter().map(|&x| f.render(x)).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

/// Contents of an `.ellrc` file.
#[derive(Clone, Debug)]
pub struct EllrcFile {
    pub curve: Curve,
    pub n: usize,
    pub k: usize,
    pub mode: String,
    pub fiber_size: usize,
    pub m: usize,
    pub locality: Vec<usize>,
    pub points: Vec<Pt>,
    pub matrix: Vec<Vec<Felt>>,
}

fn parse_err(what: &str) -> Error {
    Error::Parse(format!("ellrc: {what}"))
}

fn numbers(s: &str) -> Result<Vec<usize>> {
    s.split_whitespace().map(|t| t.parse().map_err(|_| parse_err(&format!("bad number {t:?}")))).collect()
}

pub fn parse_ellrc(text: &str) -> Result<EllrcFile> {
    let mut lines = text.lines();
    let mut next = |what: &str| lines.next().ok_or_else(|| parse_err(&format!("missing {what}")));
    if next("header")?.trim() != "ELLRC 1" {
        return Err(parse_err("expected `ELLRC 1`"));
    }
    let field = next("FIELD")?.strip_prefix("FIELD ").ok_or_else(|| parse_err("FIELD"))?;
    let f = FieldCtx::parse_header(field)?;
    let cl = next("CURVE")?.strip_prefix("CURVE ").ok_or_else(|| parse_err("CURVE"))?;
    let coeffs: Vec<Felt> = cl.split_whitespace().map(|s| f.parse(s)).collect::<Result<_>>()?;
    let coeffs: [Felt; 5] = coeffs.try_into().map_err(|_| parse_err("CURVE needs 5 coefficients"))?;
    let curve = Curve::new(&f, coeffs)?;
    let code = next("CODE")?.strip_prefix("CODE ").ok_or_else(|| parse_err("CODE"))?;
    let parts: Vec<&str> = code.split_whitespace().collect();
    if parts.len() != 5 {
        return Err(parse_err("CODE needs n k mode fiberSize m"));
    }
    let mode = parts[2].to_string();
    let [n, k, fiber_size, m] = [parts[0], parts[1], parts[3], parts[4]]
        .map(|s| s.parse::<usize>().map_err(|_| parse_err(&format!("bad number {s:?}"))));
    let (n, k, fiber_size, m) = (n?, k?, fiber_size?, m?);
    let locality = numbers(next("LOCALITY")?.strip_prefix("LOCALITY ").ok_or_else(|| parse_err("LOCALITY"))?)?;
    let want = if mode == "single" { 1 } else { 3 };
    if locality.len() != want || (mode != "single" && mode != "two") {
        return Err(parse_err("LOCALITY does not match mode"));
    }
    if next("POINTS")?.trim() != "POINTS" {
        return Err(parse_err("expected POINTS"));
    }
    let mut points = Vec::with_capacity(n);
    for _ in 0..n {
        points.push(curve.parse_point(next("point")?)?);
    }
    if next("MATRIX")?.trim() != "MATRIX" {
        return Err(parse_err("expected MATRIX"));
    }
    let mut matrix = Vec::with_capacity(k);
    for _ in 0..k {
        let row: Vec<Felt> = next("row")?.split_whitespace().map(|s| f.parse(s)).collect::<Result<_>>()?;
        if row.len() != n {
            return Err(parse_err("row length differs from n"));
        }
        matrix.push(row);
    }
    if n != fiber_size * m {
        return Err(parse_err("n differs from fiberSize * m"));
    }
    Ok(EllrcFile { curve, n, k, mode, fiber_size, m, locality, points, matrix })
}

/// JSON mirror: everything needed beyond the matrix to repair and audit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeJson {
    pub format: String,
    pub field: String,
    pub curve: String,
    pub mode: Mode,
    pub n: usize,
    pub k: usize,
    pub fiber_size: usize,
    pub m: usize,
    pub d_lower: usize,
    pub pole_bound: usize,
    pub witness_roots: usize,
    pub alphas: Vec<String>,
    pub recovering: Vec<Vec<Vec<usize>>>,
    pub repair_basis: Vec<Vec<String>>,
    pub info: CodeInfo,
}

pub fn to_json(code: &LrcCode) -> CodeJson {
    let f = code.field();
    CodeJson {
        format: "ellrc-json 1".into(),
        field: f.header(),
        curve: code.curve.render(),
        mode: code.mode,
        n: code.n(),
        k: code.k(),
        fiber_size: code.fiber_size,
        m: code.m(),
        d_lower: code.d_lower(),
        pole_bound: code.pole_bound,
        witness_roots: code.witness_roots,
        alphas: code.alphas.iter().map(|&a| f.render(a)).collect(),
        recovering: code.recovering.clone(),
        repair_basis: code.repair_basis.iter().map(|r| r.iter().map(|&x| f.render(x)).collect()).collect(),
        info: code.info.clone(),
    }
}

/// Rebuild a code from its matrix file and JSON mirror.
pub fn from_parts(file: EllrcFile, meta: &CodeJson) -> Result<LrcCode> {
    let f = file.curve.field().clone();
    if meta.field != f.header() || meta.curve != file.curve.render() {
        return Err(parse_err("metadata describes a different field or curve"));
    }
    if (meta.n, meta.k, meta.fiber_size, meta.m) != (file.n, file.k, file.fiber_size, file.m)
        || meta.mode.name() != file.mode
    {
        return Err(parse_err("metadata disagrees with CODE line"));
    }
    let loc = match meta.mode {
        Mode::Single { r, .. } => vec![r],
        Mode::Two { r1, r2, d0, .. } => vec![r1, r2, d0],
    };
    if loc != file.locality {
        return Err(parse_err("metadata disagrees with LOCALITY line"));
    }
    let parse_vec = |v: &[String]| v.iter().map(|s| f.parse(s)).collect::<Result<Vec<Felt>>>();
    let alphas = parse_vec(&meta.alphas)?;
    let repair_basis = meta.repair_basis.iter().map(|r| parse_vec(r)).collect::<Result<Vec<_>>>()?;
    if alphas.len() != file.m || repair_basis.len() != file.n || meta.recovering.len() != file.n {
        return Err(parse_err("metadata tables have the wrong length"));
    }
    if meta.recovering.iter().flatten().flatten().any(|&i| i >= file.n) {
        return Err(parse_err("recovering set index out of range"));
    }
    Ok(LrcCode {
        curve: file.curve,
        mode: meta.mode,
        fiber_size: file.fiber_size,
        alphas,
        points: file.points,
        matrix: file.matrix,
        pole_bound: meta.pole_bound,
        witness_roots: meta.witness_roots,
        recovering: meta.recovering.clone(),
        repair_basis,
        info: meta.info.clone(),
        groups: Vec::new(),
    })
}

/// The JSON mirror path for a matrix file: same stem, `.json` extension.
pub fn json_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

pub fn save(code: &LrcCode, path: &Path) -> Result<()> {
    let io = |e: std::io::Error| Error::Parse(format!("{}: {e}", path.display()));
    std::fs::write(path, write_ellrc(code)).map_err(io)?;
    let json = serde_json::to_string_pretty(&to_json(code)).map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(json_path(path), json).map_err(io)
}

/// Recompute the groups and fixed-field generators recorded in `info`,
/// checking that the generators agree with the recorded ones.
pub fn restore_groups(code: &mut LrcCode) -> Result<()> {
    let c = &code.curve;
    let f = c.field();
    let h = code.info.h.iter().map(|s| c.parse_point(s)).collect::<Result<Vec<_>>>()?;
    let sets = code
        .info
        .automorphisms
        .iter()
        .map(|g| g.iter().map(|s| AutoMap::parse(f, s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let specs = match (code.mode, sets.as_slice()) {
        (Mode::Single { .. }, [a]) => vec![autgrp::make_group(c, &h, a)?],
        (Mode::Two { .. }, [a1, a2]) => {
            let gens: Vec<AutoMap> = a1.iter().chain(a2).copied().collect();
            let a = autgrp::closure(c, &gens)?;
            vec![autgrp::make_group(c, &h, &a)?, autgrp::make_group(c, &h, a1)?, autgrp::make_group(c, &h, a2)?]
        }
        _ => return Err(parse_err("automorphism data does not match the mode")),
    };
    if specs.len() != code.info.z.len() {
        return Err(parse_err("wrong number of recorded generators"));
    }
    let mut groups = Vec::with_capacity(specs.len());
    for (g, recorded) in specs.into_iter().zip(&code.info.z) {
        let z = autgrp::fixed_field_generator(c, &g)?;
        if &z.render(f) != recorded {
            return Err(Error::Invariant(format!("recomputed generator {} differs from {recorded}", z.render(f))));
        }
        groups.push((g, z));
    }
    code.groups = groups;
    Ok(())
}

/// Read a matrix file and its mirror. With `restore`, the groups are
/// recomputed so that construction audits can run.
pub fn load(path: &Path, restore: bool) -> Result<LrcCode> {
    let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("{}: {e}", p.display())));
    let file = parse_ellrc(&read(path)?)?;
    let meta: CodeJson = serde_json::from_str(&read(&json_path(path))?).map_err(|e| Error::Parse(e.to_string()))?;
    let mut code = from_parts(file, &meta)?;
    if restore {
        restore_groups(&mut code)?;
    }
    Ok(code)
}
