//! File formats and reference resolution.
//!
//! Molecules travel as constructor expressions (`{"defs": {...}}`), raw
//! posets as `{"face_data": [...]}` (coface data is derived, never
//! serialized), diagrams as an expression plus a label map, and rule sets
//! as named cells.  References on the command line take the forms
//! `examples:NAME`, a bare built-in name, `FILE#DEF`, or `word:LETTERS`
//! for 1-dimensional string diagrams.

use crate::error::{Error, Result};
use crate::fixtures;
use crate::layering;
use crate::molecule::Molecule;
use crate::ogposet::{Element, FacePair, OgPoset, Orientation};
use crate::rewrite::{strings, Diagram, Label, Rule};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A constructor expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Point,
    Ref(String),
    Paste(usize, Box<Expr>, Box<Expr>),
    Atom(Box<Expr>, Box<Expr>),
}

impl Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            Expr::Point => s.serialize_str("point"),
            Expr::Ref(name) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("ref", name)?;
                m.end()
            }
            Expr::Paste(k, a, b) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("paste", &(k, a, b))?;
                m.end()
            }
            Expr::Atom(a, b) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("atom", &(a, b))?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let value = serde_json::Value::deserialize(d)?;
        parse_expr(&value).map_err(D::Error::custom)
    }
}

fn parse_expr(value: &serde_json::Value) -> std::result::Result<Expr, String> {
    match value {
        serde_json::Value::String(s) if s == "point" => Ok(Expr::Point),
        serde_json::Value::String(s) => Ok(Expr::Ref(s.clone())),
        serde_json::Value::Object(map) => {
            if map.len() != 1 {
                return Err("expression object must have exactly one key".into());
            }
            let (key, inner) = map.iter().next().expect("one entry");
            match key.as_str() {
                "ref" => match inner.as_str() {
                    Some(s) => Ok(Expr::Ref(s.to_string())),
                    None => Err("ref must name a definition".into()),
                },
                "paste" => {
                    let items = inner
                        .as_array()
                        .ok_or_else(|| "paste expects [k, expr, expr]".to_string())?;
                    if items.len() != 3 {
                        return Err("paste expects [k, expr, expr]".into());
                    }
                    let k = items[0]
                        .as_u64()
                        .ok_or_else(|| "paste index must be a natural number".to_string())?;
                    Ok(Expr::Paste(
                        k as usize,
                        Box::new(parse_expr(&items[1])?),
                        Box::new(parse_expr(&items[2])?),
                    ))
                }
                "atom" => {
                    let items = inner
                        .as_array()
                        .ok_or_else(|| "atom expects [expr, expr]".to_string())?;
                    if items.len() != 2 {
                        return Err("atom expects [expr, expr]".into());
                    }
                    Ok(Expr::Atom(
                        Box::new(parse_expr(&items[0])?),
                        Box::new(parse_expr(&items[1])?),
                    ))
                }
                other => Err(format!("unknown expression constructor: {other}")),
            }
        }
        _ => Err("expression must be a string or a one-key object".into()),
    }
}

/// `{"defs": {name: expr}}`
#[derive(Serialize, Deserialize, Default)]
pub struct MoleculeFile {
    pub defs: BTreeMap<String, Expr>,
}

/// An expression with a total label map, keys written `"(dim, index)"`.
#[derive(Serialize, Deserialize, Clone)]
pub struct DiagramExpr {
    pub shape: Expr,
    pub labels: BTreeMap<String, String>,
}

/// `{"defs": {name: diagram-expr}}`
#[derive(Serialize, Deserialize, Default)]
pub struct DiagramFile {
    pub defs: BTreeMap<String, DiagramExpr>,
}

/// `{"rules": [{"name": ..., "cell": diagram-expr}]}`
#[derive(Serialize, Deserialize, Default)]
pub struct RulesFile {
    pub rules: Vec<RuleEntry>,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct RuleEntry {
    pub name: String,
    pub cell: DiagramExpr,
}

/// `{"face_data": [[[ints, ints], ...], ...]}`
#[derive(Serialize, Deserialize)]
pub struct RawPosetFile {
    pub face_data: Vec<Vec<(Vec<usize>, Vec<usize>)>>,
}

impl RawPosetFile {
    pub fn of(poset: &OgPoset) -> RawPosetFile {
        RawPosetFile {
            face_data: poset
                .face_data()
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|p| (p.input.clone(), p.output.clone()))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn build(self) -> Result<OgPoset> {
        let face_data = self
            .face_data
            .into_iter()
            .map(|g| {
                g.into_iter()
                    .map(|(input, output)| FacePair { input, output })
                    .collect()
            })
            .collect();
        OgPoset::from_face_data(face_data)
    }
}

/// Evaluates an expression against a definition environment and the
/// built-in registry.
pub fn build_expr(expr: &Expr, defs: &BTreeMap<String, Expr>) -> Result<Molecule> {
    let mut in_progress = Vec::new();
    build_inner(expr, defs, &mut in_progress)
}

fn build_inner(
    expr: &Expr,
    defs: &BTreeMap<String, Expr>,
    in_progress: &mut Vec<String>,
) -> Result<Molecule> {
    match expr {
        Expr::Point => Ok(Molecule::point()),
        Expr::Ref(name) => {
            if let Some(def) = defs.get(name) {
                if in_progress.iter().any(|n| n == name) {
                    return Err(Error::Input(format!("cyclic definition of {name}")));
                }
                in_progress.push(name.clone());
                let m = build_inner(def, defs, in_progress)?;
                in_progress.pop();
                Ok(m)
            } else {
                fixtures::named(name)
                    .ok_or_else(|| Error::Input(format!("unknown molecule: {name}")))
            }
        }
        Expr::Paste(k, a, b) => {
            let left = build_inner(a, defs, in_progress)?;
            let right = build_inner(b, defs, in_progress)?;
            left.paste(&right, *k)
        }
        Expr::Atom(a, b) => {
            let src = build_inner(a, defs, in_progress)?;
            let tgt = build_inner(b, defs, in_progress)?;
            Molecule::atom(&src, &tgt)
        }
    }
}

fn parse_element_key(key: &str) -> Result<Element> {
    let trimmed = key.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> = trimmed.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(Error::Input(format!("bad element key: {key}")));
    }
    let dim = parts[0]
        .parse()
        .map_err(|_| Error::Input(format!("bad element key: {key}")))?;
    let index = parts[1]
        .parse()
        .map_err(|_| Error::Input(format!("bad element key: {key}")))?;
    Ok(Element::new(dim, index))
}

pub fn element_key(e: Element) -> String {
    format!("({}, {})", e.dim(), e.index())
}

pub fn build_diagram(expr: &DiagramExpr, defs: &BTreeMap<String, Expr>) -> Result<Diagram> {
    let shape = build_expr(&expr.shape, defs)?;
    let mut labels: Vec<Vec<Option<Label>>> = shape
        .poset()
        .face_data()
        .iter()
        .map(|g| vec![None; g.len()])
        .collect();
    for (key, text) in &expr.labels {
        let e = parse_element_key(key)?;
        if !shape.poset().contains(e) {
            return Err(Error::InvalidElement(e));
        }
        labels[e.dim()][e.index()] = Some(Label::new(text));
    }
    let labels: Vec<Vec<Label>> = labels
        .into_iter()
        .enumerate()
        .map(|(d, g)| {
            g.into_iter()
                .enumerate()
                .map(|(i, l)| l.ok_or(Error::MissingLabel(Element::new(d, i))))
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    Diagram::new(shape, labels)
}

pub fn diagram_expr_of(diagram: &Diagram) -> Result<DiagramExpr> {
    let shape = expression_of(diagram.shape())?;
    let mut labels = BTreeMap::new();
    for e in diagram.shape().poset().elements() {
        labels.insert(element_key(e), diagram.label(e).as_str().to_string());
    }
    Ok(DiagramExpr { shape, labels })
}

pub fn build_rules(file: &RulesFile) -> Result<Vec<Rule>> {
    let defs: BTreeMap<String, Expr> = BTreeMap::new();
    file.rules
        .iter()
        .map(|entry| Rule::new(entry.name.clone(), build_diagram(&entry.cell, &defs)?))
        .collect()
}

/// Recovers a constructor expression for a molecule by peeling atoms and
/// layerings; the result rebuilds to a canonically equal molecule.
pub fn expression_of(molecule: &Molecule) -> Result<Expr> {
    if molecule.dim() == 0 {
        return Ok(Expr::Point);
    }
    if molecule.is_atom() {
        let (src, _) = molecule.boundary_molecule(None, Orientation::Input)?;
        let (tgt, _) = molecule.boundary_molecule(None, Orientation::Output)?;
        return Ok(Expr::Atom(
            Box::new(expression_of(&src)?),
            Box::new(expression_of(&tgt)?),
        ));
    }
    // at the layering dimension a layering with at least two layers exists
    let k = molecule.lydim();
    let layering = layering::enumerate_layerings(molecule, k)?
        .into_iter()
        .next()
        .ok_or(Error::NotAMolecule)?;
    let mut expr: Option<Expr> = None;
    for (layer, _) in &layering.layers {
        let piece = expression_of(layer)?;
        expr = Some(match expr {
            None => piece,
            Some(acc) => Expr::Paste(k.max(0) as usize, Box::new(acc), Box::new(piece)),
        });
    }
    Ok(expr.expect("layerings are nonempty"))
}

/// Parses a molecule reference: `examples:NAME`, a built-in name,
/// `FILE#DEF`, or a raw-poset file (canonicalized, trusting the data to be
/// a molecule).
pub fn resolve_molecule(reference: &str) -> Result<Molecule> {
    if let Some(name) = reference.strip_prefix("examples:") {
        return fixtures::named(name)
            .ok_or_else(|| Error::Input(format!("unknown example: {name}")));
    }
    if let Some(m) = fixtures::named(reference) {
        return Ok(m);
    }
    if let Some((path, def)) = reference.split_once('#') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{path}: {e}")))?;
        let file: MoleculeFile = serde_json::from_str(&text)
            .map_err(|e| Error::Input(format!("{path}: {e}")))?;
        let expr = file
            .defs
            .get(def)
            .ok_or_else(|| Error::Input(format!("{path} has no definition {def}")))?;
        return build_expr(expr, &file.defs);
    }
    if std::path::Path::new(reference).exists() {
        let text = std::fs::read_to_string(reference)
            .map_err(|e| Error::Input(format!("{reference}: {e}")))?;
        let raw: RawPosetFile = serde_json::from_str(&text)
            .map_err(|e| Error::Input(format!("{reference}: {e}")))?;
        let (molecule, _) = Molecule::from_raw_poset(raw.build()?)?;
        return Ok(molecule);
    }
    Err(Error::Input(format!("cannot resolve molecule: {reference}")))
}

/// Parses a diagram reference: `word:LETTERS` or `FILE#DEF`.
pub fn resolve_diagram(reference: &str) -> Result<Diagram> {
    if let Some(word) = reference.strip_prefix("word:") {
        return strings::word_diagram(word);
    }
    if let Some((path, def)) = reference.split_once('#') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("{path}: {e}")))?;
        let file: DiagramFile = serde_json::from_str(&text)
            .map_err(|e| Error::Input(format!("{path}: {e}")))?;
        let expr = file
            .defs
            .get(def)
            .ok_or_else(|| Error::Input(format!("{path} has no definition {def}")))?;
        return build_diagram(expr, &BTreeMap::new());
    }
    Err(Error::Input(format!("cannot resolve diagram: {reference}")))
}

pub fn resolve_rules(path: &str) -> Result<Vec<Rule>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))?;
    let file: RulesFile =
        serde_json::from_str(&text).map_err(|e| Error::Input(format!("{path}: {e}")))?;
    build_rules(&file)
}
