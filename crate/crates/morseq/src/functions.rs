//! Discrete vector fields, discrete Morse functions, and their
//! correspondence with Morse sequences.
//!
//! A discrete vector field pairs faces with cofaces of one dimension
//! higher, each face in at most one pair. The field is *acyclic* when no
//! nontrivial closed gradient path exists. The gradient field of a Morse
//! sequence is acyclic, and conversely every acyclic field arises from a
//! Morse sequence; [`field_to_morse_sequence`] makes the converse
//! effective.
//!
//! A *Morse function on a sequence* assigns values so that critical faces
//! dominate their boundaries and each regular pair is weakly decreasing
//! from lower to upper face. Its weakly decreasing codimension one pairs
//! recover the gradient field. [`canonical_morse_function`] builds one from
//! the sequence itself; it is also *basic* (monotone, at most two faces per
//! value, equal values nested), and [`basic_function_to_sequence`] turns
//! any basic function back into a Morse sequence.

use std::collections::{BTreeMap, HashMap};

use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::sequence::{MorseItem, MorseSequence, VectorField};
use crate::simplex::Simplex;

/// An integer-valued function on the faces of a complex.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiscreteMorseFunction {
    values: BTreeMap<Simplex, i64>,
}

impl DiscreteMorseFunction {
    /// The empty function.
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    /// Assigns `value` to `face`, replacing any previous value.
    pub fn insert(&mut self, face: Simplex, value: i64) {
        self.values.insert(face, value);
    }

    /// The value on `face`, if assigned.
    #[must_use]
    pub fn get(&self, face: &Simplex) -> Option<i64> {
        self.values.get(face).copied()
    }

    /// Whether every face of `k` has a value.
    #[must_use]
    pub fn is_total_on(&self, k: &Complex) -> bool {
        k.faces().all(|s| self.values.contains_key(s))
    }

    /// The assigned faces and values, in face order.
    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, i64)> {
        self.values.iter().map(|(s, v)| (s, *v))
    }

    /// Number of assigned faces.
    #[must_use]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Whether no face has a value.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl FromIterator<(Simplex, i64)> for DiscreteMorseFunction {
    fn from_iter<I: IntoIterator<Item = (Simplex, i64)>>(iter: I) -> Self {
        Self {
            values: iter.into_iter().collect(),
        }
    }
}

/// Whether the vector field `field` on `k` is acyclic: no closed gradient
/// path alternates between lower faces and their paired upper faces.
///
/// Checked one dimension at a time on the digraph whose nodes are the
/// paired lower faces and whose arcs go from a lower face to the other
/// paired boundary faces of its upper face.
#[must_use]
pub fn is_acyclic(k: &Complex, field: &VectorField) -> bool {
    let top = k.dim().map_or(0, |d| d + 1);
    for p in 0..top {
        let lowers: Vec<&Simplex> = k
            .faces_of_dim(p)
            .filter(|s| field.up(s).is_some())
            .collect();
        let index: HashMap<&Simplex, _> = lowers.iter().copied().zip(0..).collect();
        let mut graph: DiGraph<(), ()> = DiGraph::new();
        let nodes: Vec<_> = lowers.iter().map(|_| graph.add_node(())).collect();
        for (i, sigma) in lowers.iter().enumerate() {
            let tau = field.up(sigma).expect("paired by construction");
            for next in tau.facets().filter(|f| f != *sigma) {
                if let Some(&j) = index.get(&next) {
                    graph.add_edge(nodes[i], nodes[j], ());
                }
            }
        }
        if is_cyclic_directed(&graph) {
            return false;
        }
    }
    true
}

/// Builds a Morse sequence whose gradient field is `field`.
///
/// Works backwards from the full complex: at the current top dimension it
/// removes unpaired facets one by one, and collapses pairs of the field
/// that have become free, always taking the smallest available face.
/// Reversing the removals yields the sequence.
///
/// # Errors
///
/// Returns [`Error::InvalidVectorField`] when `field` does not live on `k`,
/// and [`Error::CyclicField`] when the field has a closed gradient path, in
/// which case no Morse sequence induces it.
pub fn field_to_morse_sequence(k: &Complex, field: &VectorField) -> Result<MorseSequence> {
    for (sigma, tau) in field.pairs() {
        if !k.contains(sigma) || !k.contains(tau) {
            return Err(Error::InvalidVectorField {
                reason: format!("the pair ({sigma}, {tau}) is not in the complex"),
            });
        }
    }
    let mut cur = k.clone();
    let mut removed: Vec<MorseItem> = Vec::new();
    while !cur.is_void() {
        let d = cur.dim().expect("a nonvoid complex has a dimension");
        // Unpaired facets of top dimension can be perforated; pairs of the
        // field whose upper face is a top-dimensional free facet can be
        // collapsed. Taking the smallest key keeps the order canonical.
        let perforate = cur
            .facets()
            .into_iter()
            .filter(|nu| nu.dim() == d && !field.covers(nu))
            .min();
        let collapse = cur
            .free_pairs()
            .into_iter()
            .filter(|(sigma, tau)| tau.dim() == d && field.up(sigma) == Some(tau))
            .min_by(|a, b| a.1.cmp(&b.1));
        let step = match (perforate, collapse) {
            (Some(nu), Some((sigma, tau))) => {
                if nu < tau {
                    MorseItem::Fill(nu)
                } else {
                    MorseItem::Expand(sigma, tau)
                }
            }
            (Some(nu), None) => MorseItem::Fill(nu),
            (None, Some((sigma, tau))) => MorseItem::Expand(sigma, tau),
            (None, None) => return Err(Error::CyclicField),
        };
        match &step {
            MorseItem::Fill(nu) => cur.perforate(nu)?,
            MorseItem::Expand(sigma, tau) => cur.collapse(sigma, tau)?,
        }
        removed.push(step);
    }
    removed.reverse();
    let seq = MorseSequence::new(k.clone(), removed)?;
    debug_assert_eq!(
        seq.gradient_vector_field().pairs().collect::<Vec<_>>(),
        field.pairs().collect::<Vec<_>>(),
        "the rebuilt sequence must induce the given field"
    );
    Ok(seq)
}

/// Whether `f` is a Morse function on the sequence `seq`: it is total on
/// the target, every critical face strictly dominates its boundary faces,
/// and every regular pair is weakly decreasing from lower to upper face.
#[must_use]
pub fn is_morse_function_on_sequence(f: &DiscreteMorseFunction, seq: &MorseSequence) -> bool {
    let k = seq.target();
    if !f.is_total_on(k) {
        return false;
    }
    let value = |s: &Simplex| f.get(s).expect("total on the target");
    let partition = seq.partition();
    for kappa in &partition.critical {
        let fk = value(kappa);
        let dominated = k
            .boundary(kappa)
            .expect("critical faces are in the target")
            .iter()
            .all(|nu| fk > value(nu));
        if !dominated {
            return false;
        }
    }
    seq.regular_pairs()
        .iter()
        .all(|(sigma, tau)| value(sigma) >= value(tau))
}

/// The canonical Morse function of a sequence: the faces introduced by the
/// `i`-th item (counting from one) all take the value `i`.
///
/// It is a Morse function on the sequence and a basic function on its
/// target.
#[must_use]
pub fn canonical_morse_function(seq: &MorseSequence) -> DiscreteMorseFunction {
    let mut f = DiscreteMorseFunction::new();
    for (i, item) in seq.items().iter().enumerate() {
        let value = i64::try_from(i + 1).expect("sequence length fits in i64");
        for face in item.faces() {
            f.insert(face.clone(), value);
        }
    }
    f
}

/// The discrete vector field induced by a function: the codimension one
/// face relations along which `f` does not strictly increase.
///
/// # Errors
///
/// Returns [`Error::NotAMorseFunction`] when `f` is missing a value on a
/// face of `k`, or when some face participates in two weakly decreasing
/// codimension one relations. The resulting field is always acyclic.
pub fn gradient_field_of_function(
    k: &Complex,
    f: &DiscreteMorseFunction,
) -> Result<VectorField> {
    let mut pairs: Vec<(Simplex, Simplex)> = Vec::new();
    let mut used: BTreeMap<Simplex, Simplex> = BTreeMap::new();
    for tau in k.faces() {
        let ft = f.get(tau).ok_or_else(|| Error::NotAMorseFunction {
            reason: format!("no value on {tau}"),
        })?;
        for sigma in tau.facets() {
            let fs = f.get(&sigma).ok_or_else(|| Error::NotAMorseFunction {
                reason: format!("no value on {sigma}"),
            })?;
            if fs >= ft {
                for face in [&sigma, tau] {
                    if let Some(other) = used.get(face) {
                        return Err(Error::NotAMorseFunction {
                            reason: format!(
                                "{face} is in two weakly decreasing pairs, with {other} and \
                                 with {}",
                                if face == &sigma { tau } else { &sigma }
                            ),
                        });
                    }
                }
                used.insert(sigma.clone(), tau.clone());
                used.insert(tau.clone(), sigma.clone());
                pairs.push((sigma, tau.clone()));
            }
        }
    }
    let field = VectorField::new(k, pairs)?;
    debug_assert!(
        is_acyclic(k, &field),
        "the field of a Morse function cannot have a closed gradient path"
    );
    Ok(field)
}

/// Reports the first basicness violation of `f` on `k`, if any.
///
/// A function is *basic* when it is total, monotone along the face
/// relation, takes each value on at most two faces, and assigns equal
/// values only to nested faces.
fn basic_violation(k: &Complex, f: &DiscreteMorseFunction) -> Option<String> {
    for s in k.faces() {
        if f.get(s).is_none() {
            return Some(format!("totality: no value on {s}"));
        }
    }
    let value = |s: &Simplex| f.get(s).expect("checked total");
    for tau in k.faces() {
        for sigma in tau.facets() {
            if value(&sigma) > value(tau) {
                return Some(format!(
                    "monotonicity: {sigma} has a larger value than its coface {tau}"
                ));
            }
        }
    }
    let mut by_value: BTreeMap<i64, Vec<&Simplex>> = BTreeMap::new();
    for s in k.faces() {
        by_value.entry(value(s)).or_default().push(s);
    }
    for (v, faces) in &by_value {
        if faces.len() > 2 {
            return Some(format!(
                "semi-injectivity: the value {v} is taken by {} faces",
                faces.len()
            ));
        }
        if let [a, b] = faces.as_slice() {
            if !a.is_face_of(b) && !b.is_face_of(a) {
                return Some(format!(
                    "genericity: {a} and {b} share the value {v} but are not nested"
                ));
            }
        }
    }
    None
}

/// Whether `f` is a basic function on `k`.
#[must_use]
pub fn is_basic_function(k: &Complex, f: &DiscreteMorseFunction) -> bool {
    basic_violation(k, f).is_none()
}

/// Builds the Morse sequence of a basic function: faces enter in order of
/// increasing value, a value taken once contributing a filling and a value
/// taken twice an expansion of the nested pair.
///
/// # Errors
///
/// Returns [`Error::NotBasic`] naming the violated property when `f` is
/// not basic on `k`, and [`Error::InvalidSequence`] when the replay fails.
pub fn basic_function_to_sequence(
    k: &Complex,
    f: &DiscreteMorseFunction,
) -> Result<MorseSequence> {
    if let Some(property) = basic_violation(k, f) {
        return Err(Error::NotBasic { property });
    }
    let mut by_value: BTreeMap<i64, Vec<Simplex>> = BTreeMap::new();
    for s in k.faces() {
        by_value
            .entry(f.get(s).expect("basic functions are total"))
            .or_default()
            .push(s.clone());
    }
    let mut items = Vec::new();
    for (_, mut faces) in by_value {
        faces.sort_by_key(Simplex::dim);
        match faces.as_slice() {
            [nu] => items.push(MorseItem::Fill(nu.clone())),
            [sigma, tau] => items.push(MorseItem::Expand(sigma.clone(), tau.clone())),
            _ => unreachable!("semi-injectivity bounds each value by two faces"),
        }
    }
    MorseSequence::new(k.clone(), items)
}
