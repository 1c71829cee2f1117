//! Text and JSON formats for graphs, lattices and ideals.
//!
//! ```text
//! graph 2 2          lattice 2
//! 1 1                empty
//! 1 2                1
//! 2 2                1 2
//! ```
//!
//! Indices are 1-based. Blank lines and anything after `#` are ignored.
//! The JSON forms are `{"left", "right", "edges": [[i, j], ..]}`,
//! `{"n", "elements": [[..], ..]}` and `{"n", "gens": [{"x", "y"}, ..]}`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{BipartiteGraph, GraphError};
use crate::ideal::{IdealError, MonomialDoc, MonomialIdeal};
use crate::lattice::{CoverLattice, LatticeError};
use crate::mask::{LabelList, SubsetMask};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("json: {0}")]
    Json(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

impl FormatError {
    /// A stable name for the failure, used in machine-readable error output.
    pub fn code(&self) -> &'static str {
        match self {
            FormatError::Syntax { .. } => "Syntax",
            FormatError::Json(_) => "Json",
            FormatError::Graph(e) => graph_error_code(e),
            FormatError::Lattice(e) => lattice_error_code(e),
            FormatError::Ideal(IdealError::ZeroIdeal) => "ZeroIdeal",
            FormatError::Ideal(IdealError::TooManyGenerators { .. }) => "TooManyGenerators",
            FormatError::Ideal(IdealError::WrongArity { .. }) => "WrongArity",
        }
    }
}

pub fn graph_error_code(e: &GraphError) -> &'static str {
    match e {
        GraphError::EmptyInput => "EmptyInput",
        GraphError::NoPerfectMatching { .. } => "NoPerfectMatching",
        GraphError::IsolatedVertex(_) => "IsolatedVertex",
        GraphError::EdgeOutOfRange(..) => "EdgeOutOfRange",
        GraphError::SideTooLarge(_) => "SideTooLarge",
        GraphError::TooLarge { .. } => "TooLarge",
        GraphError::NotNormalized => "NotNormalized",
        GraphError::NotUnmixed => "NotUnmixed",
        GraphError::LatticeValidation(_) => "LatticeValidation",
    }
}

pub fn lattice_error_code(e: &LatticeError) -> &'static str {
    match e {
        LatticeError::EmptyFamily => "EmptyFamily",
        LatticeError::GroundTooLarge(_) => "GroundTooLarge",
        LatticeError::WrongGround(..) => "WrongGround",
        LatticeError::MissingBottom => "MissingBottom",
        LatticeError::MissingTop => "MissingTop",
        LatticeError::NotClosed(..) => "NotClosed",
        LatticeError::NotAnElement(_) => "NotAnElement",
        LatticeError::BottomElement => "BottomElement",
    }
}

/// Either kind of input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Graph(BipartiteGraph),
    Lattice(CoverLattice),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_usize(line: usize, tok: &str) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| syntax(line, format!("expected a non-negative integer, found {tok:?}")))
}

pub fn parse_graph_text(text: &str) -> Result<BipartiteGraph, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "missing \"graph\" header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let [kw, l, r] = toks[..] else {
        return Err(syntax(hl, "header must be \"graph <n_left> <n_right>\""));
    };
    if kw != "graph" {
        return Err(syntax(hl, "header must be \"graph <n_left> <n_right>\""));
    }
    let (left, right) = (parse_usize(hl, l)?, parse_usize(hl, r)?);
    let mut edges = Vec::new();
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [i, j] = toks[..] else {
            return Err(syntax(ln, "edge lines are \"i j\""));
        };
        let (i, j) = (parse_usize(ln, i)?, parse_usize(ln, j)?);
        if i == 0 || j == 0 {
            return Err(syntax(ln, "indices are 1-based"));
        }
        edges.push((i - 1, j - 1));
    }
    Ok(BipartiteGraph::new(left, right, edges)?)
}

pub fn parse_lattice_text(text: &str) -> Result<CoverLattice, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "missing \"lattice\" header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let ["lattice", n] = toks[..] else {
        return Err(syntax(hl, "header must be \"lattice <n>\""));
    };
    let n = parse_usize(hl, n)?;
    if n > crate::mask::MAX_GROUND {
        return Err(LatticeError::GroundTooLarge(n).into());
    }
    let mut family = Vec::new();
    for (ln, l) in lines {
        if l == "empty" {
            family.push(SubsetMask::empty(n));
            continue;
        }
        let labels = l.split_whitespace().map(|t| parse_usize(ln, t)).collect::<Result<Vec<_>, _>>()?;
        let mask = SubsetMask::from_labels(n, labels).ok_or_else(|| syntax(ln, format!("labels must lie in 1..={n}")))?;
        family.push(mask);
    }
    Ok(CoverLattice::validate(family, n)?)
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct LatticeDoc {
    n: usize,
    elements: Vec<LabelList>,
}

#[derive(Serialize, Deserialize)]
struct IdealDoc {
    n: usize,
    gens: Vec<MonomialDoc>,
}

fn json_err(e: serde_json::Error) -> FormatError {
    FormatError::Json(e.to_string())
}

pub fn parse_graph_json(text: &str) -> Result<BipartiteGraph, FormatError> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(json_err)?;
    if doc.edges.iter().any(|&(i, j)| i == 0 || j == 0) {
        return Err(FormatError::Json("edge indices are 1-based".into()));
    }
    Ok(BipartiteGraph::new(doc.left, doc.right, doc.edges.into_iter().map(|(i, j)| (i - 1, j - 1)))?)
}

pub fn parse_lattice_json(text: &str) -> Result<CoverLattice, FormatError> {
    let doc: LatticeDoc = serde_json::from_str(text).map_err(json_err)?;
    if doc.n > crate::mask::MAX_GROUND {
        return Err(LatticeError::GroundTooLarge(doc.n).into());
    }
    let family = doc
        .elements
        .into_iter()
        .map(|e| e.into_mask(doc.n).ok_or_else(|| FormatError::Json(format!("labels must lie in 1..={}", doc.n))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CoverLattice::validate(family, doc.n)?)
}

pub fn parse_ideal_json(text: &str) -> Result<MonomialIdeal, FormatError> {
    let doc: IdealDoc = serde_json::from_str(text).map_err(json_err)?;
    let n = doc.n;
    let gens = doc
        .gens
        .into_iter()
        .map(|g| g.into_monomial(n).ok_or_else(|| FormatError::Json(format!("variables must lie in 1..={n}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MonomialIdeal::new(n, gens)?)
}

/// Detects the format from the first significant character or keyword.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
        return if v.get("edges").is_some() {
            parse_graph_json(text).map(Instance::Graph)
        } else if v.get("elements").is_some() {
            parse_lattice_json(text).map(Instance::Lattice)
        } else {
            Err(FormatError::Json("expected a graph (\"edges\") or lattice (\"elements\") document".into()))
        };
    }
    match content_lines(text).next() {
        Some((_, l)) if l.starts_with("graph") => parse_graph_text(text).map(Instance::Graph),
        Some((_, l)) if l.starts_with("lattice") => parse_lattice_text(text).map(Instance::Lattice),
        Some((ln, _)) => Err(syntax(ln, "expected a \"graph\" or \"lattice\" header")),
        None => Err(syntax(1, "input is empty")),
    }
}

pub fn graph_to_text(g: &BipartiteGraph) -> String {
    let mut out = format!("graph {} {}\n", g.left(), g.right());
    for (i, j) in g.edges() {
        let _ = writeln!(out, "{} {}", i + 1, j + 1);
    }
    out
}

pub fn lattice_to_text(l: &CoverLattice) -> String {
    let mut out = format!("lattice {}\n", l.n());
    for p in l.elements() {
        if p.is_empty() {
            out.push_str("empty\n");
        } else {
            let labels: Vec<String> = p.labels().iter().map(|k| k.to_string()).collect();
            let _ = writeln!(out, "{}", labels.join(" "));
        }
    }
    out
}

pub fn graph_to_json(g: &BipartiteGraph) -> serde_json::Value {
    let doc = GraphDoc { left: g.left(), right: g.right(), edges: g.edges().map(|(i, j)| (i + 1, j + 1)).collect() };
    serde_json::to_value(doc).expect("plain data serializes")
}

pub fn lattice_to_json(l: &CoverLattice) -> serde_json::Value {
    let doc = LatticeDoc { n: l.n(), elements: l.elements().iter().map(|p| LabelList(p.labels())).collect() };
    serde_json::to_value(doc).expect("plain data serializes")
}

pub fn ideal_to_json(i: &MonomialIdeal) -> serde_json::Value {
    let doc = IdealDoc {
        n: i.n(),
        gens: i.gens().iter().map(|g| MonomialDoc { x: g.x.labels(), y: g.y.labels() }).collect(),
    };
    serde_json::to_value(doc).expect("plain data serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::graph_from_lattice;
    use crate::ideal::hibi_ideal;

    #[test]
    fn graph_text() {
        let g = parse_graph_text("# path\ngraph 2 2\n1 1\n1 2  # extra\n\n2 2\n").unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0), (0, 1), (1, 1)]);
        assert_eq!(parse_graph_text(&graph_to_text(&g)).unwrap(), g);
        assert!(matches!(parse_graph_text("graph 2\n"), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(parse_graph_text("graph 1 1\n0 1\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert_eq!(
            parse_graph_text("graph 1 1\n1 2\n").unwrap_err(),
            FormatError::Graph(GraphError::EdgeOutOfRange(1, 2))
        );
    }

    #[test]
    fn lattice_text() {
        let l = parse_lattice_text("lattice 2\nempty\n1\n1 2\n").unwrap();
        assert_eq!(l, fixtures::chain());
        for f in fixtures::all() {
            assert_eq!(parse_lattice_text(&lattice_to_text(&f)).unwrap(), f);
        }
        let err = parse_lattice_text("lattice 2\nempty\n1\n2\n").unwrap_err();
        assert_eq!(err.code(), "NotClosed");
        assert!(matches!(parse_lattice_text("lattice 2\n3\n"), Err(FormatError::Syntax { line: 2, .. })));
    }

    #[test]
    fn json_round_trips() {
        for f in fixtures::all() {
            let text = lattice_to_json(&f).to_string();
            assert_eq!(parse_lattice_json(&text).unwrap(), f);
            let g = graph_from_lattice(&f);
            assert_eq!(parse_graph_json(&graph_to_json(&g).to_string()).unwrap(), g);
            let h = hibi_ideal(&f);
            assert_eq!(parse_ideal_json(&ideal_to_json(&h).to_string()).unwrap(), h);
        }
        assert_eq!(
            lattice_to_json(&fixtures::chain()),
            serde_json::json!({"n": 2, "elements": [[], [1], [1, 2]]})
        );
        assert_eq!(
            graph_to_json(&graph_from_lattice(&fixtures::chain())),
            serde_json::json!({"left": 2, "right": 2, "edges": [[1, 1], [1, 2], [2, 2]]})
        );
    }

    #[test]
    fn detection() {
        assert!(matches!(parse_instance("graph 1 1\n1 1\n"), Ok(Instance::Graph(_))));
        assert!(matches!(parse_instance("\n# c\nlattice 1\nempty\n1\n"), Ok(Instance::Lattice(_))));
        assert!(matches!(parse_instance(r#"{"n":1,"elements":[[],[1]]}"#), Ok(Instance::Lattice(_))));
        assert!(matches!(parse_instance(r#"{"left":1,"right":1,"edges":[[1,1]]}"#), Ok(Instance::Graph(_))));
        assert!(parse_instance("hello").is_err());
        assert!(parse_instance("").is_err());
    }
}
