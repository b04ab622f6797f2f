//! File formats and named-input resolution.
//!
//! Groups, G-sets, homomorphisms, and cohomology data travel as small JSON
//! documents; cochains and sections travel as sparse CSV tables where an
//! omitted row means zero. Every loader reports the offending file and
//! location (CSV line number, or serde's line/column) on failure, and every
//! format round-trips through the corresponding writer.

use crate::cochain::{
    bilinear_2cocycle, cyclic_3cocycle, trilinear_3cocycle, Cochain2, Cochain3,
};
use crate::group::{same_group, CommutingPair, FiniteGroup, GSet, Homomorphism, DEFAULT_MAX_ORDER};
use crate::induction::{EquivariantSection, SectionKind, Twist};
use crate::inertia::LoopGroupoid;
use crate::phase::Phase;
use crate::sections::{CharacterValues, CohomologyData, DegreePiece};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {location}: {message}")]
    Json { location: String, message: String },
    #[error("{location}:{line}: {message}")]
    Csv { location: String, line: usize, message: String },
    #[error("invalid input at {location}: {message}")]
    Invalid { location: String, message: String },
    #[error("unknown twist `{0}` (expected zero, klein, bilinear:n, cyclic:k, trilinear:n, or file:PATH)")]
    UnknownTwist(String),
    #[error("twist `{spec}` lives on a group of order {twist_order}, not on `{group}` (order {group_order})")]
    TwistGroupMismatch { spec: String, twist_order: usize, group: String, group_order: usize },
}

impl IoError {
    pub fn kind(&self) -> crate::ErrorKind {
        crate::ErrorKind::Validation
    }
}

fn invalid(location: &str, message: impl std::fmt::Display) -> IoError {
    IoError::Invalid { location: location.to_string(), message: message.to_string() }
}

fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path.display().to_string(), source })
}

pub fn write_file(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text)
        .map_err(|source| IoError::Write { path: path.display().to_string(), source })
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str, location: &str) -> Result<T, IoError> {
    serde_json::from_str(text)
        .map_err(|e| IoError::Json { location: location.to_string(), message: e.to_string() })
}

// ---------------------------------------------------------------------------
// Groups, G-sets, homomorphisms (JSON documents).

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum GroupDoc {
    /// `{"type":"named","name":"S3"}`
    Named { name: String },
    /// `{"type":"permutation","degree":3,"generators":[[1,2,0],[1,0,2]]}`
    Permutation {
        degree: usize,
        generators: Vec<Vec<usize>>,
        #[serde(default)]
        max_order: Option<usize>,
    },
    /// `{"type":"table","table":[[0,1],[1,0]],"names":["e","s"]}`
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default)]
        names: Option<Vec<String>>,
    },
}

pub fn parse_group(text: &str, location: &str) -> Result<Arc<FiniteGroup>, IoError> {
    let doc: GroupDoc = from_json(text, location)?;
    let group = match doc {
        GroupDoc::Named { name } => FiniteGroup::named(&name),
        GroupDoc::Permutation { degree, generators, max_order } => FiniteGroup::from_permutations(
            degree,
            &generators,
            max_order.unwrap_or(DEFAULT_MAX_ORDER),
        ),
        GroupDoc::Table { table, names } => FiniteGroup::from_table(table, names),
    };
    group.map_err(|e| invalid(location, e))
}

pub fn load_group(path: &Path) -> Result<Arc<FiniteGroup>, IoError> {
    parse_group(&read_file(path)?, &path.display().to_string())
}

/// Resolves a `--group` argument: a built-in name such as `S3`, `Z2xZ2`, or
/// `Q8`, or `file:PATH` for a group document.
pub fn resolve_group(spec: &str) -> Result<Arc<FiniteGroup>, IoError> {
    if let Some(path) = spec.strip_prefix("file:") {
        load_group(Path::new(path))
    } else {
        FiniteGroup::named(spec).map_err(|e| invalid(&format!("--group {spec}"), e))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GSetDoc {
    size: usize,
    /// `action[g][x]` is `g . x` in element indexing.
    action: Vec<Vec<usize>>,
}

pub fn parse_gset(
    text: &str,
    location: &str,
    group: &Arc<FiniteGroup>,
) -> Result<GSet, IoError> {
    let doc: GSetDoc = from_json(text, location)?;
    GSet::from_table(group.clone(), doc.size, doc.action).map_err(|e| invalid(location, e))
}

pub fn load_gset(path: &Path, group: &Arc<FiniteGroup>) -> Result<GSet, IoError> {
    parse_gset(&read_file(path)?, &path.display().to_string(), group)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomDoc {
    /// Image of each source element, as target element indices.
    map: Vec<usize>,
}

pub fn parse_homomorphism(
    text: &str,
    location: &str,
    source: &Arc<FiniteGroup>,
    target: &Arc<FiniteGroup>,
) -> Result<Homomorphism, IoError> {
    let doc: HomDoc = from_json(text, location)?;
    Homomorphism::new(source.clone(), target.clone(), doc.map).map_err(|e| invalid(location, e))
}

pub fn load_homomorphism(
    path: &Path,
    source: &Arc<FiniteGroup>,
    target: &Arc<FiniteGroup>,
) -> Result<Homomorphism, IoError> {
    parse_homomorphism(&read_file(path)?, &path.display().to_string(), source, target)
}

// ---------------------------------------------------------------------------
// Cochains (sparse CSV).

struct CsvRow {
    line: usize,
    fields: Vec<i64>,
}

fn parse_csv(text: &str, location: &str, expected: usize) -> Result<Vec<CsvRow>, IoError> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<i64> = trimmed
            .split(',')
            .map(|f| f.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|e| IoError::Csv {
                location: location.to_string(),
                line,
                message: format!("expected integer fields: {e}"),
            })?;
        if fields.len() != expected {
            return Err(IoError::Csv {
                location: location.to_string(),
                line,
                message: format!("expected {expected} comma-separated fields, got {}", fields.len()),
            });
        }
        rows.push(CsvRow { line, fields });
    }
    Ok(rows)
}

fn csv_error(location: &str, line: usize, message: impl std::fmt::Display) -> IoError {
    IoError::Csv { location: location.to_string(), line, message: message.to_string() }
}

fn check_index(
    location: &str,
    line: usize,
    value: i64,
    order: usize,
) -> Result<usize, IoError> {
    if value < 0 || value as usize >= order {
        Err(csv_error(location, line, format!("element index {value} out of range 0..{order}")))
    } else {
        Ok(value as usize)
    }
}

fn check_phase(location: &str, line: usize, num: i64, den: i64) -> Result<Phase, IoError> {
    if den == 0 {
        return Err(csv_error(location, line, "zero denominator"));
    }
    Ok(Phase::new(num, den))
}

/// Loads a 2-cochain from CSV rows `i,j,num,den`; omitted rows are zero.
pub fn parse_cochain2(
    text: &str,
    location: &str,
    group: &Arc<FiniteGroup>,
) -> Result<Cochain2, IoError> {
    let n = group.order();
    let mut table: HashMap<(usize, usize), Phase> = HashMap::new();
    for row in parse_csv(text, location, 4)? {
        let [i, j, num, den] = row.fields[..] else { unreachable!() };
        let i = check_index(location, row.line, i, n)?;
        let j = check_index(location, row.line, j, n)?;
        let phase = check_phase(location, row.line, num, den)?;
        if (i == 0 || j == 0) && !phase.is_zero() {
            return Err(csv_error(
                location,
                row.line,
                "not normalized: entries with an identity argument must be zero",
            ));
        }
        if table.insert((i, j), phase).is_some() {
            return Err(csv_error(location, row.line, format!("duplicate entry for ({i}, {j})")));
        }
    }
    Cochain2::from_fn(group.clone(), |i, j| {
        table.get(&(i, j)).copied().unwrap_or(Phase::ZERO)
    })
    .map_err(|e| invalid(location, e))
}

pub fn load_cochain2(path: &Path, group: &Arc<FiniteGroup>) -> Result<Cochain2, IoError> {
    parse_cochain2(&read_file(path)?, &path.display().to_string(), group)
}

/// Loads a 3-cochain from CSV rows `i,j,k,num,den`; omitted rows are zero.
pub fn parse_cochain3(
    text: &str,
    location: &str,
    group: &Arc<FiniteGroup>,
) -> Result<Cochain3, IoError> {
    let n = group.order();
    let mut table: HashMap<(usize, usize, usize), Phase> = HashMap::new();
    for row in parse_csv(text, location, 5)? {
        let [i, j, k, num, den] = row.fields[..] else { unreachable!() };
        let i = check_index(location, row.line, i, n)?;
        let j = check_index(location, row.line, j, n)?;
        let k = check_index(location, row.line, k, n)?;
        let phase = check_phase(location, row.line, num, den)?;
        if (i == 0 || j == 0 || k == 0) && !phase.is_zero() {
            return Err(csv_error(
                location,
                row.line,
                "not normalized: entries with an identity argument must be zero",
            ));
        }
        if table.insert((i, j, k), phase).is_some() {
            return Err(csv_error(
                location,
                row.line,
                format!("duplicate entry for ({i}, {j}, {k})"),
            ));
        }
    }
    Cochain3::from_fn(group.clone(), |i, j, k| {
        table.get(&(i, j, k)).copied().unwrap_or(Phase::ZERO)
    })
    .map_err(|e| invalid(location, e))
}

pub fn load_cochain3(path: &Path, group: &Arc<FiniteGroup>) -> Result<Cochain3, IoError> {
    parse_cochain3(&read_file(path)?, &path.display().to_string(), group)
}

pub fn cochain2_csv(c: &Cochain2) -> String {
    let n = c.group().order();
    let mut out = String::from("# i,j,num,den (omitted rows are zero)\n");
    for i in 0..n {
        for j in 0..n {
            let p = c.get(i, j);
            if !p.is_zero() {
                let _ = writeln!(out, "{i},{j},{},{}", p.numer(), p.denom());
            }
        }
    }
    out
}

pub fn cochain3_csv(c: &Cochain3) -> String {
    let n = c.group().order();
    let mut out = String::from("# i,j,k,num,den (omitted rows are zero)\n");
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let p = c.get(i, j, k);
                if !p.is_zero() {
                    let _ = writeln!(out, "{i},{j},{k},{},{}", p.numer(), p.denom());
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Named twists.

/// Rebuilds `c` over `group` when the two underlying groups agree element by
/// element; built-in twists construct their own group instance, and this
/// pins them to the instance the caller is actually working with.
fn retarget2(c: Cochain2, spec: &str, group: &Arc<FiniteGroup>) -> Result<Cochain2, IoError> {
    if !same_group(c.group(), group) {
        return Err(IoError::TwistGroupMismatch {
            spec: spec.to_string(),
            twist_order: c.group().order(),
            group: describe_group(group),
            group_order: group.order(),
        });
    }
    Cochain2::from_fn(group.clone(), |a, b| c.get(a, b))
        .map_err(|e| invalid(&format!("--twist {spec}"), e))
}

fn retarget3(c: Cochain3, spec: &str, group: &Arc<FiniteGroup>) -> Result<Cochain3, IoError> {
    if !same_group(c.group(), group) {
        return Err(IoError::TwistGroupMismatch {
            spec: spec.to_string(),
            twist_order: c.group().order(),
            group: describe_group(group),
            group_order: group.order(),
        });
    }
    Cochain3::from_fn(group.clone(), |a, b, c_| c.get(a, b, c_))
        .map_err(|e| invalid(&format!("--twist {spec}"), e))
}

fn describe_group(group: &Arc<FiniteGroup>) -> String {
    format!("group of order {}", group.order())
}

fn twist_param(spec: &str) -> Option<(&str, &str)> {
    spec.split_once(':')
}

/// Resolves a `--twist` argument to a 2-cocycle on `group`: `zero` (or
/// `zero2`), `klein`, `bilinear:n`, or `file:PATH` pointing at a cochain CSV.
pub fn resolve_twist2(spec: &str, group: &Arc<FiniteGroup>) -> Result<Cochain2, IoError> {
    match spec {
        "zero" | "zero2" => return Ok(Cochain2::zero(group.clone())),
        "klein" => {
            return retarget2(crate::cochain::klein_2cocycle(), spec, group);
        }
        _ => {}
    }
    if let Some((kind, arg)) = twist_param(spec) {
        match kind {
            "file" => return load_cochain2(Path::new(arg), group),
            "bilinear" => {
                let n: usize = arg
                    .parse()
                    .map_err(|_| invalid(&format!("--twist {spec}"), "expected bilinear:n"))?;
                let c = bilinear_2cocycle(n).map_err(|e| invalid(&format!("--twist {spec}"), e))?;
                return retarget2(c, spec, group);
            }
            _ => {}
        }
    }
    Err(IoError::UnknownTwist(spec.to_string()))
}

/// Resolves a `--twist` argument to a 3-cocycle on `group`: `zero` (or
/// `zero3`), `cyclic:k` (the carry cocycle on `Z/n`), `trilinear:n`, or
/// `file:PATH` pointing at a cochain CSV.
pub fn resolve_twist3(spec: &str, group: &Arc<FiniteGroup>) -> Result<Cochain3, IoError> {
    match spec {
        "zero" | "zero3" => return Ok(Cochain3::zero(group.clone())),
        _ => {}
    }
    if let Some((kind, arg)) = twist_param(spec) {
        match kind {
            "file" => return load_cochain3(Path::new(arg), group),
            "cyclic" | "cyclic3" => {
                let k: i64 = arg
                    .parse()
                    .map_err(|_| invalid(&format!("--twist {spec}"), "expected cyclic:k"))?;
                let c = cyclic_3cocycle(group.order(), k)
                    .map_err(|e| invalid(&format!("--twist {spec}"), e))?;
                return retarget3(c, spec, group);
            }
            "trilinear" => {
                let n: usize = arg
                    .parse()
                    .map_err(|_| invalid(&format!("--twist {spec}"), "expected trilinear:n"))?;
                let c =
                    trilinear_3cocycle(n).map_err(|e| invalid(&format!("--twist {spec}"), e))?;
                return retarget3(c, spec, group);
            }
            _ => {}
        }
    }
    Err(IoError::UnknownTwist(spec.to_string()))
}

// ---------------------------------------------------------------------------
// Sections (sparse CSV of complex values).

fn parse_float(location: &str, line: usize, field: &str) -> Result<f64, IoError> {
    field
        .trim()
        .parse::<f64>()
        .map_err(|e| csv_error(location, line, format!("expected a float, got `{field}`: {e}")))
}

/// Loads a section from CSV rows. Columns are the object coordinates — `g`
/// for an element section, `g1,g2` for a pair section, plus a base-point
/// column `x` when `base` is present — followed by `re,im`. Omitted rows are
/// zero, and the assembled values must satisfy the section's equivariance
/// law.
pub fn parse_section(
    text: &str,
    location: &str,
    twist: Twist,
    base: Option<GSet>,
) -> Result<EquivariantSection, IoError> {
    let group = twist.group().clone();
    let kind = twist.kind();
    let index_cols = match kind {
        SectionKind::Elements => 1,
        SectionKind::Pairs => 2,
    } + usize::from(base.is_some());
    let groupoid = match kind {
        SectionKind::Elements => LoopGroupoid::single(group.clone()),
        SectionKind::Pairs => LoopGroupoid::double(group.clone()),
    };
    let points = base.as_ref().map_or(1, |x| x.size());
    let mut values = vec![Complex64::new(0.0, 0.0); groupoid.object_count() * points];
    let mut seen = vec![false; values.len()];

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != index_cols + 2 {
            return Err(csv_error(
                location,
                line,
                format!("expected {} comma-separated fields, got {}", index_cols + 2, fields.len()),
            ));
        }
        let mut indices = Vec::with_capacity(index_cols);
        for f in &fields[..index_cols] {
            let v: i64 = f.trim().parse().map_err(|e| {
                csv_error(location, line, format!("expected integer index, got `{f}`: {e}"))
            })?;
            indices.push(v);
        }
        let object = match kind {
            SectionKind::Elements => check_index(location, line, indices[0], group.order())?,
            SectionKind::Pairs => {
                let g1 = check_index(location, line, indices[0], group.order())?;
                let g2 = check_index(location, line, indices[1], group.order())?;
                groupoid.pair_index(CommutingPair { g1, g2 }).ok_or_else(|| {
                    csv_error(location, line, format!("({g1}, {g2}) is not a commuting pair"))
                })?
            }
        };
        let point = if base.is_some() {
            check_index(location, line, indices[index_cols - 1], points)?
        } else {
            0
        };
        let re = parse_float(location, line, fields[index_cols])?;
        let im = parse_float(location, line, fields[index_cols + 1])?;
        let slot = object * points + point;
        if seen[slot] {
            return Err(csv_error(location, line, "duplicate entry"));
        }
        seen[slot] = true;
        values[slot] = Complex64::new(re, im);
    }

    EquivariantSection::new(twist, base, values).map_err(|e| invalid(location, e))
}

pub fn load_section(
    path: &Path,
    twist: Twist,
    base: Option<GSet>,
) -> Result<EquivariantSection, IoError> {
    parse_section(&read_file(path)?, &path.display().to_string(), twist, base)
}

/// Writes a section in the format [`parse_section`] reads, omitting zeros.
pub fn section_csv(s: &EquivariantSection) -> String {
    let base_col = if s.base().is_some() { ",x" } else { "" };
    let mut out = match s.kind() {
        SectionKind::Elements => format!("# g{base_col},re,im (omitted rows are zero)\n"),
        SectionKind::Pairs => format!("# g1,g2{base_col},re,im (omitted rows are zero)\n"),
    };
    let points = s.base().map_or(1, |x| x.size());
    for object in 0..s.groupoid().object_count() {
        for point in 0..points {
            let v = s.value(object, point);
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            match s.kind() {
                SectionKind::Elements => {
                    let _ = write!(out, "{object}");
                }
                SectionKind::Pairs => {
                    let pair = s.groupoid().pair_at(object).expect("pair groupoid object");
                    let _ = write!(out, "{},{}", pair.g1, pair.g2);
                }
            }
            if s.base().is_some() {
                let _ = write!(out, ",{point}");
            }
            let _ = writeln!(out, ",{},{}", v.re, v.im);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Cohomology data (JSON document).

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CohomologyDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    classes: Vec<ClassEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pairs: Vec<PairEntry>,
}

#[derive(Serialize, Deserialize)]
struct ClassEntry {
    /// Name of the canonical class representative.
    rep: String,
    pieces: Vec<PieceEntry>,
}

#[derive(Serialize, Deserialize)]
struct PairEntry {
    /// Names of the canonical pair-orbit representative.
    rep: [String; 2],
    pieces: Vec<PieceEntry>,
}

#[derive(Serialize, Deserialize)]
struct PieceEntry {
    degree: i64,
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    character: CharacterEntry,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum CharacterEntry {
    /// Per stabilizer element, the multiset of phases whose values sum to
    /// the trace, each as `[num, den]`.
    Exact(Vec<Vec<[i64; 2]>>),
    /// Per stabilizer element, the trace as `[re, im]`.
    Approx(Vec<[f64; 2]>),
}

fn piece_to_entry(piece: &DegreePiece) -> PieceEntry {
    let character = match &piece.values {
        CharacterValues::Exact(rows) => CharacterEntry::Exact(
            rows.iter()
                .map(|phases| phases.iter().map(|p| [p.numer(), p.denom()]).collect())
                .collect(),
        ),
        CharacterValues::Approx(traces) => {
            CharacterEntry::Approx(traces.iter().map(|t| [t.re, t.im]).collect())
        }
    };
    PieceEntry { degree: piece.degree, dim: piece.dim, label: piece.label.clone(), character }
}

fn entry_to_piece(entry: PieceEntry, location: &str) -> Result<DegreePiece, IoError> {
    let values = match entry.character {
        CharacterEntry::Exact(rows) => {
            let mut out = Vec::with_capacity(rows.len());
            for phases in rows {
                let mut row = Vec::with_capacity(phases.len());
                for [num, den] in phases {
                    if den == 0 {
                        return Err(invalid(location, "zero denominator in character phase"));
                    }
                    row.push(Phase::new(num, den));
                }
                out.push(row);
            }
            CharacterValues::Exact(out)
        }
        CharacterEntry::Approx(traces) => CharacterValues::Approx(
            traces.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        ),
    };
    Ok(DegreePiece { degree: entry.degree, dim: entry.dim, label: entry.label, values })
}

pub fn cohomology_json(data: &CohomologyData, group: &Arc<FiniteGroup>) -> String {
    let doc = CohomologyDoc {
        classes: data
            .classes()
            .map(|(rep, pieces)| ClassEntry {
                rep: group.name_of(rep).to_string(),
                pieces: pieces.iter().map(piece_to_entry).collect(),
            })
            .collect(),
        pairs: data
            .pairs()
            .map(|(pair, pieces)| PairEntry {
                rep: [group.name_of(pair.g1).to_string(), group.name_of(pair.g2).to_string()],
                pieces: pieces.iter().map(piece_to_entry).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable document") + "\n"
}

fn element_by_name(
    group: &Arc<FiniteGroup>,
    name: &str,
    location: &str,
) -> Result<usize, IoError> {
    (0..group.order())
        .find(|&g| group.name_of(g) == name)
        .ok_or_else(|| invalid(location, format!("no element named `{name}`")))
}

pub fn parse_cohomology(
    text: &str,
    location: &str,
    group: &Arc<FiniteGroup>,
) -> Result<CohomologyData, IoError> {
    let doc: CohomologyDoc = from_json(text, location)?;
    let mut data = CohomologyData::new();
    let classes = group.conjugacy_classes();
    for entry in doc.classes {
        let g = element_by_name(group, &entry.rep, location)?;
        let canonical = classes
            .iter()
            .find(|c| c.contains(&g))
            .and_then(|c| c.iter().copied().min())
            .expect("every element lies in a class");
        if g != canonical {
            return Err(invalid(
                location,
                format!(
                    "`{}` is not the canonical representative of its class (expected `{}`)",
                    entry.rep,
                    group.name_of(canonical)
                ),
            ));
        }
        data.cover_class(g);
        for piece in entry.pieces {
            data.add_class_piece(g, entry_to_piece(piece, location)?);
        }
    }
    if !doc.pairs.is_empty() {
        let orbits = group.pair_orbits();
        for entry in doc.pairs {
            let g1 = element_by_name(group, &entry.rep[0], location)?;
            let g2 = element_by_name(group, &entry.rep[1], location)?;
            let pair = CommutingPair { g1, g2 };
            let canonical = orbits
                .iter()
                .find(|o| o.members.contains(&pair))
                .map(|o| o.representative)
                .ok_or_else(|| {
                    invalid(
                        location,
                        format!("(`{}`, `{}`) is not a commuting pair", entry.rep[0], entry.rep[1]),
                    )
                })?;
            if pair != canonical {
                return Err(invalid(
                    location,
                    format!(
                        "(`{}`, `{}`) is not the canonical representative of its orbit (expected (`{}`, `{}`))",
                        entry.rep[0],
                        entry.rep[1],
                        group.name_of(canonical.g1),
                        group.name_of(canonical.g2)
                    ),
                ));
            }
            data.cover_pair(pair);
            for piece in entry.pieces {
                data.add_pair_piece(pair, entry_to_piece(piece, location)?);
            }
        }
    }
    Ok(data)
}

pub fn load_cohomology(path: &Path, group: &Arc<FiniteGroup>) -> Result<CohomologyData, IoError> {
    parse_cohomology(&read_file(path)?, &path.display().to_string(), group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::klein_2cocycle;
    use crate::induction::section_over_elements;

    #[test]
    fn group_documents_parse() {
        let named = parse_group(r#"{"type":"named","name":"S3"}"#, "test").unwrap();
        assert_eq!(named.order(), 6);
        let perm = parse_group(
            r#"{"type":"permutation","degree":3,"generators":[[1,2,0],[1,0,2]]}"#,
            "test",
        )
        .unwrap();
        assert_eq!(perm.order(), 6);
        let table = parse_group(r#"{"type":"table","table":[[0,1],[1,0]]}"#, "test").unwrap();
        assert_eq!(table.order(), 2);
        // Malformed JSON carries the location.
        let err = parse_group("{", "bad.json").unwrap_err();
        assert!(err.to_string().contains("bad.json"), "{err}");
        // A non-group table is a validation error.
        let err =
            parse_group(r#"{"type":"table","table":[[0,1],[0,1]]}"#, "bad.json").unwrap_err();
        assert!(matches!(err, IoError::Invalid { .. }), "{err}");
    }

    #[test]
    fn gset_and_homomorphism_documents_parse() {
        let group = FiniteGroup::named("Z2").unwrap();
        let x = parse_gset(r#"{"size":2,"action":[[0,1],[1,0]]}"#, "test", &group).unwrap();
        assert_eq!(x.act(1, 0), 1);
        let s3 = FiniteGroup::named("S3").unwrap();
        let f = parse_homomorphism(r#"{"map":[0,0]}"#, "test", &group, &s3).unwrap();
        assert_eq!(f.apply(1), 0);
        // Order obstruction: a generator of Z/2 cannot land on a generator of Z/3.
        let z3 = FiniteGroup::named("Z3").unwrap();
        let err = parse_homomorphism(r#"{"map":[0,1]}"#, "t", &group, &z3).unwrap_err();
        assert!(matches!(err, IoError::Invalid { .. }), "{err}");
    }

    #[test]
    fn cochain_csv_round_trip() {
        let alpha = klein_2cocycle();
        let group = alpha.group().clone();
        let text = cochain2_csv(&alpha);
        let back = parse_cochain2(&text, "round", &group).unwrap();
        assert_eq!(back, alpha);
        let beta = crate::cochain::cyclic_3cocycle(4, 3).unwrap();
        let group = beta.group().clone();
        let text = cochain3_csv(&beta);
        let back = parse_cochain3(&text, "round", &group).unwrap();
        assert_eq!(back, beta);
    }

    #[test]
    fn cochain_csv_errors_carry_line_numbers() {
        let group = FiniteGroup::named("Z2").unwrap();
        // Non-normalized row on line 2 (line 1 is a comment).
        let err = parse_cochain2("# c\n0,1,1,2\n", "t.csv", &group).unwrap_err();
        assert!(matches!(err, IoError::Csv { line: 2, .. }), "{err}");
        // Out-of-range index.
        let err = parse_cochain2("3,1,1,2\n", "t.csv", &group).unwrap_err();
        assert!(matches!(err, IoError::Csv { line: 1, .. }), "{err}");
        // Duplicate.
        let err = parse_cochain2("1,1,1,2\n1,1,0,1\n", "t.csv", &group).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        // Zero denominator.
        let err = parse_cochain2("1,1,1,0\n", "t.csv", &group).unwrap_err();
        assert!(err.to_string().contains("denominator"), "{err}");
    }

    #[test]
    fn named_twists_resolve_and_mismatch_is_caught() {
        let klein = FiniteGroup::named("Z2xZ2").unwrap();
        let alpha = resolve_twist2("klein", &klein).unwrap();
        assert!(same_group(alpha.group(), &klein));
        assert!(Arc::ptr_eq(alpha.group(), &klein));
        let z4 = FiniteGroup::named("Z4").unwrap();
        assert!(matches!(
            resolve_twist2("klein", &z4),
            Err(IoError::TwistGroupMismatch { .. })
        ));
        assert!(resolve_twist3("cyclic:1", &z4).unwrap().is_cocycle());
        assert!(matches!(resolve_twist2("nope", &z4), Err(IoError::UnknownTwist(_))));
        assert!(resolve_twist2("zero", &z4).unwrap().is_zero());
        let z3 = FiniteGroup::named("Z3xZ3xZ3").unwrap();
        assert!(resolve_twist3("trilinear:3", &z3).unwrap().is_cocycle());
    }

    #[test]
    fn section_csv_round_trip() {
        let alpha = Cochain2::zero(FiniteGroup::named("S3").unwrap());
        // Class function: indicator of the transposition class.
        let group = alpha.group().clone();
        let s = section_over_elements(&alpha, |g| {
            if group.element_order(g) == 2 {
                Complex64::new(1.0, -0.5)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let text = section_csv(&s);
        let back = parse_section(&text, "round", Twist::K(alpha), None).unwrap();
        assert_eq!(back.values(), s.values());
        // A non-equivariant table is rejected with the file in the message.
        let alpha = Cochain2::zero(FiniteGroup::named("S3").unwrap());
        let err = parse_section("1,1,0\n", "s.csv", Twist::K(alpha), None).unwrap_err();
        assert!(err.to_string().contains("s.csv"), "{err}");
    }

    #[test]
    fn cohomology_json_round_trip() {
        let group = FiniteGroup::named("S3").unwrap();
        let x = GSet::natural(group.clone()).unwrap();
        let data = CohomologyData::from_gset(&x);
        let text = cohomology_json(&data, &group);
        let back = parse_cohomology(&text, "round", &group).unwrap();
        assert_eq!(cohomology_json(&back, &group), text);
        // Same dimensions either way.
        let alpha = Cochain2::zero(group.clone());
        let d1 =
            crate::sections::ktheory_dim(&group, &data, &alpha, crate::sections::Parity::Even)
                .unwrap();
        let d2 =
            crate::sections::ktheory_dim(&group, &back, &alpha, crate::sections::Parity::Even)
                .unwrap();
        assert_eq!(d1.dimension, d2.dimension);
        assert_eq!(d1.basis, d2.basis);
        // A non-canonical representative is rejected: swap the transposition
        // class rep for another member of the same class.
        let swapped = text.replace("(0 1)", "(1 2)");
        assert!(swapped != text);
        assert!(parse_cohomology(&swapped, "bad", &group).is_err());
    }
}
