//! Line-oriented input formats: polynomial files, subgroup files, matrices,
//! stable-form configurations and network graphs. `#` starts a comment.

use crate::crossratio::{ProjPoint, StableFormConfig};
use crate::exactnum::{parse_rational, CycloField, FieldElement, QMatrix, Rational, Scalar};
use crate::flatnet::{CurrentAssignment, DualGraph, Edge};
use crate::multipoly::MultiPoly;
use crate::toruscan::ExponentSubgroup;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

fn syntax(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Syntax { line, msg: msg.into() }
}

/// Non-empty lines with comments removed, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

/// Polynomials sharing one variable order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyFile {
    pub vars: Vec<String>,
    pub polys: Vec<MultiPoly>,
}

impl PolyFile {
    pub fn var_names(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }
}

/// A `vars x y z` header followed by one polynomial per line. A header
/// `lvars ...` admits negative exponents.
pub fn parse_poly_file(text: &str) -> Result<PolyFile, IoError> {
    let mut it = lines(text);
    let (ln, head) = it.next().ok_or_else(|| IoError::Invalid("empty polynomial file".into()))?;
    let mut words = head.split_whitespace();
    let laurent = match words.next() {
        Some("vars") => false,
        Some("lvars") => true,
        _ => return Err(syntax(ln, "expected a `vars` header")),
    };
    let vars: Vec<String> = words.map(String::from).collect();
    if vars.is_empty() {
        return Err(syntax(ln, "no variables declared"));
    }
    let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut polys = Vec::new();
    for (ln, l) in it {
        polys.push(MultiPoly::parse(l, &names, laurent).map_err(|e| syntax(ln, e.to_string()))?);
    }
    if polys.is_empty() {
        return Err(IoError::Invalid("no polynomials".into()));
    }
    Ok(PolyFile { vars, polys })
}

/// Integer rows of subgroup generators; a line `--` starts the next
/// subgroup. Each subgroup is saturated.
pub fn parse_subgroups(text: &str, n: usize) -> Result<Vec<ExponentSubgroup>, IoError> {
    let mut out = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut flush = |rows: &mut Vec<Vec<i64>>| {
        if !rows.is_empty() {
            out.push(ExponentSubgroup::saturated(n, rows));
            rows.clear();
        }
    };
    for (ln, l) in lines(text) {
        if l == "--" {
            flush(&mut rows);
            continue;
        }
        let row: Vec<i64> = l.split_whitespace().map(|w| w.parse().map_err(|_| syntax(ln, format!("not an integer: {w}")))).collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(syntax(ln, format!("expected {n} entries, found {}", row.len())));
        }
        rows.push(row);
    }
    flush(&mut rows);
    if out.is_empty() {
        return Err(IoError::Invalid("no subgroup rows".into()));
    }
    Ok(out)
}

/// Whitespace-separated rows of rationals `p/q`.
pub fn parse_matrix(text: &str) -> Result<QMatrix, IoError> {
    let mut rows = Vec::new();
    for (ln, l) in lines(text) {
        let row: Vec<Rational> = l.split_whitespace().map(|w| parse_rational(w).ok_or_else(|| syntax(ln, format!("not a rational: {w}")))).collect::<Result<_, _>>()?;
        if rows.first().is_some_and(|r: &Vec<Rational>| r.len() != row.len()) {
            return Err(syntax(ln, "ragged matrix"));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(IoError::Invalid("empty matrix".into()));
    }
    Ok(QMatrix::from_rows(rows))
}

/// A stable-form configuration over Q, or over `Q(zeta_n)` when the file
/// declares `field cyclo n`; coordinates are then polynomials in `zeta`.
#[derive(Clone, Debug)]
pub enum ConfigFile {
    Rational { cfg: StableFormConfig<Rational>, residues: Option<Vec<Rational>> },
    Cyclo { field: CycloField, cfg: StableFormConfig<FieldElement>, residues: Option<Vec<FieldElement>> },
}

/// Lines `zero <coord> <mult>`, `pole <coord>`, `part <pole indices>`
/// (1-based), optional `residue <value>` per pole and `field cyclo <n>`.
/// Coordinates are rationals, `inf`, or with a cyclotomic field
/// expressions such as `zeta^2 - 1/2`.
pub fn parse_config(text: &str) -> Result<ConfigFile, IoError> {
    let mut field = None;
    for (ln, l) in lines(text) {
        let w: Vec<&str> = l.split_whitespace().collect();
        if w[0] == "field" {
            let n: u32 = match w.as_slice() {
                [_, "cyclo", n] => n.parse().map_err(|_| syntax(ln, "bad cyclotomic order"))?,
                _ => return Err(syntax(ln, "expected `field cyclo <n>`")),
            };
            if !(1..=24).contains(&n) {
                return Err(syntax(ln, "cyclotomic order must be in 1..=24"));
            }
            field = Some(CycloField::new(n));
        }
    }
    match field {
        None => {
            let (cfg, residues) = parse_config_with(text, &Rational::from_integer(0.into()), |ln, s| parse_rational(s).ok_or_else(|| syntax(ln, format!("not a rational: {s}"))))?;
            Ok(ConfigFile::Rational { cfg, residues })
        }
        Some(k) => {
            let like = k.rational(&Rational::from_integer(0.into()));
            let (cfg, residues) = parse_config_with(text, &like, |ln, s| {
                let p = MultiPoly::parse(s, &["zeta"], false).map_err(|e| syntax(ln, e.to_string()))?;
                p.eval(&[k.zeta(1)]).ok_or_else(|| syntax(ln, "cannot evaluate"))
            })?;
            Ok(ConfigFile::Cyclo { field: k, cfg, residues })
        }
    }
}

type Parsed<S> = (StableFormConfig<S>, Option<Vec<S>>);

fn parse_config_with<S: Scalar>(text: &str, like: &S, coord: impl Fn(usize, &str) -> Result<S, IoError>) -> Result<Parsed<S>, IoError> {
    let point = |ln: usize, s: &str| -> Result<ProjPoint<S>, IoError> {
        if s == "inf" {
            Ok(ProjPoint::infinity(like))
        } else {
            Ok(ProjPoint::finite(coord(ln, s)?))
        }
    };
    let mut cfg = StableFormConfig { zeros: vec![], poles: vec![], parts: vec![] };
    let mut residues = Vec::new();
    for (ln, l) in lines(text) {
        let (kw, rest) = l.split_once(char::is_whitespace).map(|(a, b)| (a, b.trim())).unwrap_or((l, ""));
        match kw {
            "field" => {}
            "zero" => {
                let (c, m) = rest.rsplit_once(char::is_whitespace).ok_or_else(|| syntax(ln, "expected `zero <coord> <mult>`"))?;
                let m: u32 = m.parse().map_err(|_| syntax(ln, format!("bad multiplicity {m}")))?;
                cfg.zeros.push((point(ln, c.trim())?, m));
            }
            "pole" => cfg.poles.push(point(ln, rest)?),
            "residue" => residues.push(coord(ln, rest)?),
            "part" => {
                let idx: Vec<usize> = rest
                    .split_whitespace()
                    .map(|w| w.parse::<usize>().ok().filter(|&i| i >= 1).map(|i| i - 1).ok_or_else(|| syntax(ln, format!("bad pole index {w}"))))
                    .collect::<Result<_, _>>()?;
                cfg.parts.push(idx);
            }
            _ => return Err(syntax(ln, format!("unknown keyword {kw}"))),
        }
    }
    if !residues.is_empty() && residues.len() != cfg.poles.len() {
        return Err(IoError::Invalid("give one residue per pole or none".into()));
    }
    Ok((cfg, (!residues.is_empty()).then_some(residues)))
}

/// A network with an optional current assignment and optional moduli.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphFile {
    pub graph: DualGraph,
    pub assignment: Option<CurrentAssignment>,
    pub moduli: Option<Vec<Rational>>,
}

/// Lines `vertex <id>`, `edge <id> <tail> <head>`, `current <edge> <int>`,
/// `source <vertex> <int>`, `modulus <edge> <p/q>`. Unlisted currents and
/// sources are zero; moduli are all given or none.
pub fn parse_graph(text: &str) -> Result<GraphFile, IoError> {
    let mut g = DualGraph { vertices: vec![], edges: vec![] };
    let mut currents = Vec::new();
    let mut sources = Vec::new();
    let mut moduli = Vec::new();
    for (ln, l) in lines(text) {
        let w: Vec<&str> = l.split_whitespace().collect();
        let fe = |e: crate::flatnet::FlatnetError| syntax(ln, e.to_string());
        match w.as_slice() {
            ["vertex", id] => {
                if g.vertices.iter().any(|v| v == id) {
                    return Err(syntax(ln, format!("duplicate vertex {id}")));
                }
                g.vertices.push(id.to_string());
            }
            ["edge", id, t, h] => {
                if g.edges.iter().any(|e| e.id == *id) {
                    return Err(syntax(ln, format!("duplicate edge {id}")));
                }
                let (tail, head) = (g.vertex_index(t).map_err(fe)?, g.vertex_index(h).map_err(fe)?);
                g.edges.push(Edge { id: id.to_string(), tail, head });
            }
            ["current", e, x] => currents.push((g.edge_index(e).map_err(fe)?, x.parse::<i64>().map_err(|_| syntax(ln, format!("bad current {x}")))?)),
            ["source", v, x] => sources.push((g.vertex_index(v).map_err(fe)?, x.parse::<i64>().map_err(|_| syntax(ln, format!("bad source {x}")))?)),
            ["modulus", e, x] => moduli.push((g.edge_index(e).map_err(fe)?, parse_rational(x).ok_or_else(|| syntax(ln, format!("bad modulus {x}")))?)),
            _ => return Err(syntax(ln, format!("cannot parse `{l}`"))),
        }
    }
    let assignment = (!currents.is_empty() || !sources.is_empty()).then(|| {
        let mut a = CurrentAssignment { divisor: vec![0; g.vertices.len()], currents: vec![0; g.edges.len()] };
        for (k, x) in &currents {
            a.currents[*k] = *x;
        }
        for (v, x) in &sources {
            a.divisor[*v] = *x;
        }
        a
    });
    let moduli = if moduli.is_empty() {
        None
    } else {
        let mut m = vec![None; g.edges.len()];
        for (k, x) in moduli {
            m[k] = Some(x);
        }
        Some(m.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| IoError::Invalid("some edges have no modulus".into()))?)
    };
    Ok(GraphFile { graph: g, assignment, moduli })
}
