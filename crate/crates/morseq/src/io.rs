//! Text and JSON formats for complexes, sequences, functions, and fields.
//!
//! Four formats are supported.
//!
//! * Facet lists (`.cplx`): UTF-8 lines, `#` starts a comment, every other
//!   nonblank line is one facet as whitespace-separated vertex numbers.
//!   The complex is the closure of the listed facets.
//! * Morse sequences: JSON lines, one item per line, either
//!   `{"op":"fill","simplex":[...]}` or
//!   `{"op":"expand","sigma":[...],"tau":[...]}`. The reader replays the
//!   items against the target complex, so a corrupted file is rejected.
//! * Discrete Morse functions: lines `<value> <vertices...>`, with `#`
//!   comments as in facet lists.
//! * Vector fields: a JSON array of `{"sigma":[...],"tau":[...]}` records.
//!
//! All writers emit faces in a fixed order, so equal inputs produce
//! byte-identical outputs. [`field_to_dot`] renders a gradient field for
//! visual inspection, and [`presented_complex_json`] serializes a chain
//! complex with its bases and boundary matrices.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::functions::DiscreteMorseFunction;
use crate::homology::PresentedChainComplex;
use crate::sequence::{MorseItem, MorseSequence, VectorField};
use crate::simplex::Simplex;

fn parse_error(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

/// Strips a `#` comment and surrounding whitespace from one line.
fn payload(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parses a facet-list text into the closure of the listed facets.
///
/// # Errors
///
/// Returns [`Error::Parse`] with the one-based line number of the first
/// malformed line.
pub fn parse_complex(text: &str) -> Result<Complex> {
    let mut facets: Vec<Vec<u32>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let data = payload(line);
        if data.is_empty() {
            continue;
        }
        let mut facet = Vec::new();
        for token in data.split_whitespace() {
            let vertex: u32 = token.parse().map_err(|_| {
                parse_error(i + 1, format!("expected a vertex number, found {token:?}"))
            })?;
            facet.push(vertex);
        }
        facets.push(facet);
    }
    Complex::closure(&facets)
}

/// Writes a complex as a facet list, one facet per line in order of
/// dimension and vertices.
#[must_use]
pub fn format_complex(k: &Complex) -> String {
    let mut facets = k.facets();
    facets.sort_by_key(|s| (s.dim(), s.clone()));
    let mut out = String::new();
    for facet in facets {
        let line = facet
            .vertices()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// One line of the sequence format.
#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
enum ItemRecord {
    Fill { simplex: Simplex },
    Expand { sigma: Simplex, tau: Simplex },
}

impl From<&MorseItem> for ItemRecord {
    fn from(item: &MorseItem) -> Self {
        match item {
            MorseItem::Fill(nu) => ItemRecord::Fill { simplex: nu.clone() },
            MorseItem::Expand(sigma, tau) => ItemRecord::Expand {
                sigma: sigma.clone(),
                tau: tau.clone(),
            },
        }
    }
}

impl From<ItemRecord> for MorseItem {
    fn from(record: ItemRecord) -> Self {
        match record {
            ItemRecord::Fill { simplex } => MorseItem::Fill(simplex),
            ItemRecord::Expand { sigma, tau } => MorseItem::Expand(sigma, tau),
        }
    }
}

/// Writes the items of a sequence in the JSON-lines format.
#[must_use]
pub fn format_sequence(seq: &MorseSequence) -> String {
    format_items(seq.items())
}

/// Writes Morse items in the JSON-lines format.
#[must_use]
pub fn format_items(items: &[MorseItem]) -> String {
    let mut out = String::new();
    for item in items {
        let record = ItemRecord::from(item);
        out.push_str(&serde_json::to_string(&record).expect("items serialize"));
        out.push('\n');
    }
    out
}

/// Parses JSON-lines items without validating them against a complex.
///
/// # Errors
///
/// Returns [`Error::Parse`] with the one-based line number of the first
/// malformed line.
pub fn parse_items(text: &str) -> Result<Vec<MorseItem>> {
    let mut items = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let data = line.trim();
        if data.is_empty() {
            continue;
        }
        let record: ItemRecord = serde_json::from_str(data)
            .map_err(|e| parse_error(i + 1, e.to_string()))?;
        items.push(record.into());
    }
    Ok(items)
}

/// Parses a JSON-lines sequence and replays it against `target`.
///
/// # Errors
///
/// Returns [`Error::Parse`] on malformed lines and
/// [`Error::InvalidSequence`] when the items do not build `target`.
pub fn parse_sequence(text: &str, target: &Complex) -> Result<MorseSequence> {
    MorseSequence::new(target.clone(), parse_items(text)?)
}

/// Writes a discrete Morse function, one face per line as the value
/// followed by the vertices, in face order.
#[must_use]
pub fn format_function(f: &DiscreteMorseFunction) -> String {
    let mut out = String::new();
    for (face, value) in f.iter() {
        let _ = write!(out, "{value}");
        for v in face.vertices() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

/// Parses a discrete Morse function from lines of the form
/// `<value> <vertices...>`.
///
/// # Errors
///
/// Returns [`Error::Parse`] with the one-based line number of the first
/// malformed line, including repeated assignments to one face.
pub fn parse_function(text: &str) -> Result<DiscreteMorseFunction> {
    let mut f = DiscreteMorseFunction::new();
    for (i, line) in text.lines().enumerate() {
        let data = payload(line);
        if data.is_empty() {
            continue;
        }
        let mut tokens = data.split_whitespace();
        let value: i64 = tokens
            .next()
            .expect("nonblank line has a first token")
            .parse()
            .map_err(|_| parse_error(i + 1, "expected an integer value"))?;
        let mut vertices = Vec::new();
        for token in tokens {
            let vertex: u32 = token.parse().map_err(|_| {
                parse_error(i + 1, format!("expected a vertex number, found {token:?}"))
            })?;
            vertices.push(vertex);
        }
        let face = Simplex::try_new(vertices)
            .map_err(|_| parse_error(i + 1, "a face needs at least one vertex"))?;
        if f.get(&face).is_some() {
            return Err(parse_error(i + 1, format!("{face} is assigned twice")));
        }
        f.insert(face, value);
    }
    Ok(f)
}

/// One record of the vector field format.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairRecord {
    sigma: Simplex,
    tau: Simplex,
}

/// Writes a vector field as a JSON array of pair records, in pair order.
#[must_use]
pub fn format_field(field: &VectorField) -> String {
    let records: Vec<PairRecord> = field
        .pairs()
        .map(|(sigma, tau)| PairRecord {
            sigma: sigma.clone(),
            tau: tau.clone(),
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&records).expect("pairs serialize");
    out.push('\n');
    out
}

/// Parses a vector field from a JSON array of pair records and validates
/// it against `k`.
///
/// # Errors
///
/// Returns [`Error::Parse`] on malformed JSON and
/// [`Error::InvalidVectorField`] when the pairs do not form a field on
/// `k`.
pub fn parse_field(text: &str, k: &Complex) -> Result<VectorField> {
    let records: Vec<PairRecord> = serde_json::from_str(text)
        .map_err(|e| parse_error(e.line(), e.to_string()))?;
    VectorField::new(k, records.into_iter().map(|r| (r.sigma, r.tau)))
}

/// Renders a gradient field on a complex as a DOT digraph: one node per
/// face, a directed arrow from the lower to the upper face of every pair,
/// and critical faces highlighted with a double circle.
#[must_use]
pub fn field_to_dot(k: &Complex, field: &VectorField) -> String {
    let mut out = String::from("digraph gradient {\n");
    out.push_str("    rankdir=BT;\n");
    out.push_str("    node [shape=circle];\n");
    for face in k.faces() {
        if field.covers(face) {
            let _ = writeln!(out, "    \"{face}\";");
        } else {
            let _ = writeln!(out, "    \"{face}\" [shape=doublecircle];");
        }
    }
    for (sigma, tau) in field.pairs() {
        let _ = writeln!(out, "    \"{sigma}\" -> \"{tau}\";");
    }
    out.push_str("}\n");
    out
}

/// Serializes a presented chain complex: the bases per degree and the
/// boundary matrices in sparse column form.
///
/// The schema is an object with two fields. `"bases"` is an array indexed
/// by degree; entry `p` lists the basis faces of degree `p`, each as its
/// vertex array. `"boundaries"` is an array indexed by degree starting at
/// one; entry `p - 1` is the degree-`p` boundary matrix as an array of
/// columns, one per basis face of degree `p` in basis order, each column
/// the sorted array of degree-`p − 1` basis indices with a nonzero entry.
#[must_use]
pub fn presented_complex_json(pc: &PresentedChainComplex) -> serde_json::Value {
    let bases: Vec<Vec<&Simplex>> = (0..pc.degree_count())
        .map(|p| pc.basis(p).iter().collect())
        .collect();
    let mut boundaries = Vec::new();
    for p in 1..pc.degree_count() {
        let index: std::collections::HashMap<&Simplex, usize> = pc
            .basis(p - 1)
            .iter()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let mut matrix = Vec::new();
        for s in pc.basis(p) {
            let boundary = pc
                .boundary_of(p, &crate::chain::Chain::from(s.clone()))
                .expect("basis faces have boundaries");
            let mut column: Vec<usize> =
                boundary.iter().map(|t| index[t]).collect();
            column.sort_unstable();
            matrix.push(column);
        }
        boundaries.push(matrix);
    }
    serde_json::json!({ "bases": bases, "boundaries": boundaries })
}
