//! Gradient paths, extension maps, and the gradient flow.
//!
//! The regular pairs of a Morse sequence induce two kinds of paths between
//! faces of the same dimension. A *gradient path* repeatedly climbs from the
//! lower face of a pair to its upper face and steps down to another boundary
//! face. A *cogradient path* repeatedly steps down to a paired lower face of
//! the boundary and climbs to its upper face. The reference map is governed
//! by gradient path counts mod 2, the coreference map by cogradient path
//! counts mod 2.
//!
//! The *extension maps* transpose the reference and coreference maps: they
//! send a critical face to everything that references it. They invert the
//! reference and coreference maps on critical chains, and they carry the
//! critical complex back into the underlying complex.
//!
//! The *gradient flow* pushes a chain along the field; iterating it reaches
//! a fixed chain, and the fixed chains of the stabilized flow form the
//! *extension complex*, the image of the extension map.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;

use crate::chain::Chain;
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::homology::PresentedChainComplex;
use crate::reference::{CriticalComplex, Frame};
use crate::sequence::{MorseSequence, VectorField};
use crate::simplex::Simplex;

/// Memoized path counting along the gradient field of a Morse sequence.
///
/// Counts are exact (arbitrary precision); parity questions reduce mod 2.
#[derive(Debug)]
pub struct PathOracle {
    complex: Complex,
    field: VectorField,
    criticals: BTreeMap<Simplex, ()>,
    /// For each face, the number of gradient paths to each critical face.
    grad_to_critical: HashMap<Simplex, BTreeMap<Simplex, BigUint>>,
    /// For each face, the number of cogradient paths from each critical face.
    cograd_from_critical: HashMap<Simplex, BTreeMap<Simplex, BigUint>>,
    /// For each face and each seen-a-critical flag, the number of composite
    /// walks to each end face.
    composite: HashMap<(Simplex, bool), BTreeMap<Simplex, BigUint>>,
}

impl PathOracle {
    /// Prepares an oracle for the gradient field of `seq`.
    #[must_use]
    pub fn new(seq: &MorseSequence) -> Self {
        let field = seq.gradient_vector_field();
        let criticals = seq
            .critical_faces()
            .into_iter()
            .map(|s| (s, ()))
            .collect();
        Self {
            complex: seq.target().clone(),
            field,
            criticals,
            grad_to_critical: HashMap::new(),
            cograd_from_critical: HashMap::new(),
            composite: HashMap::new(),
        }
    }

    fn is_critical(&self, s: &Simplex) -> bool {
        self.criticals.contains_key(s)
    }

    /// Gradient moves out of `x`: if `x` is the lower face of a pair, the
    /// other boundary faces of its upper face.
    fn gradient_moves(&self, x: &Simplex) -> Vec<Simplex> {
        match self.field.up(x) {
            None => Vec::new(),
            Some(tau) => tau.facets().filter(|f| f != x).collect(),
        }
    }

    /// Cogradient moves out of `x`: the upper faces paired with boundary
    /// faces of `x`, except `x` itself.
    fn cogradient_moves(&self, x: &Simplex) -> Vec<Simplex> {
        x.facets()
            .filter_map(|sigma| self.field.up(&sigma).cloned())
            .filter(|tau| tau != x)
            .collect()
    }

    /// Number of gradient paths from `from` to each critical face.
    ///
    /// A critical face carries one trivial path to itself; the lower face of
    /// a pair passes through the other boundary faces of its upper face; an
    /// upper face has no outgoing path.
    pub fn gradient_counts(&mut self, from: &Simplex) -> BTreeMap<Simplex, BigUint> {
        if let Some(hit) = self.grad_to_critical.get(from) {
            return hit.clone();
        }
        let mut out = BTreeMap::new();
        if self.is_critical(from) {
            out.insert(from.clone(), BigUint::from(1_u32));
        } else {
            for next in self.gradient_moves(from) {
                for (kappa, n) in self.gradient_counts(&next) {
                    *out.entry(kappa).or_default() += n;
                }
            }
        }
        self.grad_to_critical.insert(from.clone(), out.clone());
        out
    }

    /// Number of cogradient paths from each critical face to `to`.
    ///
    /// A critical face carries one trivial path from itself; an upper face
    /// is reached from the other cofaces of its lower face; a lower face is
    /// the end of no path.
    pub fn cogradient_counts(&mut self, to: &Simplex) -> BTreeMap<Simplex, BigUint> {
        if let Some(hit) = self.cograd_from_critical.get(to) {
            return hit.clone();
        }
        let mut out = BTreeMap::new();
        if self.is_critical(to) {
            out.insert(to.clone(), BigUint::from(1_u32));
        } else if let Some(sigma) = self.field.down(to).cloned() {
            let previous: Vec<Simplex> = self
                .complex
                .coboundary(&sigma)
                .expect("a lower face belongs to the complex")
                .iter()
                .filter(|t| *t != to)
                .cloned()
                .collect();
            for prev in previous {
                for (kappa, n) in self.cogradient_counts(&prev) {
                    *out.entry(kappa).or_default() += n;
                }
            }
        }
        self.cograd_from_critical.insert(to.clone(), out.clone());
        out
    }

    /// Number of gradient paths from `from` to `to` (faces of the same
    /// dimension; zero when the dimensions differ).
    pub fn count_gradient_paths(&mut self, from: &Simplex, to: &Simplex) -> BigUint {
        count_paths(from, to, &|x| self.gradient_moves(x))
    }

    /// Number of cogradient paths from `from` to `to`.
    pub fn count_cogradient_paths(&mut self, from: &Simplex, to: &Simplex) -> BigUint {
        count_paths(from, to, &|x| self.cogradient_moves(x))
    }

    /// Number of composite walks from `from` to each end face.
    ///
    /// A composite walk mixes gradient and cogradient moves and must pass
    /// through at least one critical face. Walks that meet a critical face
    /// consist of gradient moves up to that face and cogradient moves after
    /// it, so they realize a gradient path followed by a cogradient path.
    pub fn composite_counts(&mut self, from: &Simplex) -> BTreeMap<Simplex, BigUint> {
        self.composite_counts_inner(from, false)
    }

    fn composite_counts_inner(
        &mut self,
        from: &Simplex,
        seen: bool,
    ) -> BTreeMap<Simplex, BigUint> {
        let key = (from.clone(), seen);
        if let Some(hit) = self.composite.get(&key) {
            return hit.clone();
        }
        let seen_here = seen || self.is_critical(from);
        let mut out = BTreeMap::new();
        if seen_here {
            out.insert(from.clone(), BigUint::from(1_u32));
        }
        let mut moves = self.gradient_moves(from);
        moves.extend(self.cogradient_moves(from));
        for next in moves {
            for (end, n) in self.composite_counts_inner(&next, seen_here) {
                *out.entry(end).or_default() += n;
            }
        }
        self.composite.insert(key, out.clone());
        out
    }
}

/// Counts paths from `from` to `to` along a move relation whose moves
/// strictly descend in the order of the sequence (so memoization on the
/// target face terminates).
fn count_paths(
    from: &Simplex,
    to: &Simplex,
    moves: &dyn Fn(&Simplex) -> Vec<Simplex>,
) -> BigUint {
    fn rec(
        x: &Simplex,
        to: &Simplex,
        moves: &dyn Fn(&Simplex) -> Vec<Simplex>,
        memo: &mut HashMap<Simplex, BigUint>,
    ) -> BigUint {
        if x == to {
            return BigUint::from(1_u32);
        }
        if let Some(hit) = memo.get(x) {
            return hit.clone();
        }
        let mut total = BigUint::ZERO;
        for next in moves(x) {
            total += rec(&next, to, moves, memo);
        }
        memo.insert(x.clone(), total.clone());
        total
    }
    if from.dim() != to.dim() {
        return BigUint::ZERO;
    }
    rec(from, to, moves, &mut HashMap::new())
}

/// Checks the parity description of the reference and coreference maps on
/// every face: a critical face lies in the reference image of a face
/// exactly when the number of gradient paths from the face to it is odd,
/// and in the coreference preimage exactly when the number of cogradient
/// paths from it is odd. Returns the number of disagreements.
pub fn parity_defect(
    seq: &MorseSequence,
    reference: &Frame,
    coreference: &Frame,
) -> usize {
    let mut oracle = PathOracle::new(seq);
    let criticals = seq.critical_faces();
    let mut defects = 0;
    for nu in seq.target().faces() {
        let grad = oracle.gradient_counts(nu);
        let cograd = oracle.cogradient_counts(nu);
        for kappa in criticals.iter().filter(|k| k.dim() == nu.dim()) {
            let odd_grad = grad.get(kappa).is_some_and(|n| n.bit(0));
            if odd_grad != reference.eval(nu).contains(kappa) {
                defects += 1;
            }
            let odd_cograd = cograd.get(kappa).is_some_and(|n| n.bit(0));
            if odd_cograd != coreference.eval(nu).contains(kappa) {
                defects += 1;
            }
        }
    }
    defects
}

/// The kind of restricted path used to characterize the maps by existence
/// instead of parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestrictedPathKind {
    /// A gradient path from `from` to the critical face `to` that stays on
    /// faces whose reference image contains `to`.
    Reference,
    /// A cogradient path from the critical face `from` to `to` that stays
    /// on faces whose coreference image contains `from`.
    Coreference,
}

/// Whether a restricted path of the given kind runs from `from` to `to`.
///
/// A critical face lies in the reference image of a face exactly when a
/// restricted path of kind [`RestrictedPathKind::Reference`] runs from the
/// face to the critical; dually for the coreference map.
#[must_use]
pub fn restricted_path_exists(
    seq: &MorseSequence,
    reference: &Frame,
    coreference: &Frame,
    from: &Simplex,
    to: &Simplex,
    kind: RestrictedPathKind,
) -> bool {
    if from.dim() != to.dim() {
        return false;
    }
    let oracle = PathOracle::new(seq);
    let allowed = |x: &Simplex| -> bool {
        match kind {
            RestrictedPathKind::Reference => reference.eval(x).contains(to),
            RestrictedPathKind::Coreference => coreference.eval(x).contains(from),
        }
    };
    if !allowed(from) {
        return false;
    }
    let mut stack = vec![from.clone()];
    let mut seen: BTreeMap<Simplex, ()> = BTreeMap::new();
    seen.insert(from.clone(), ());
    while let Some(x) = stack.pop() {
        if x == *to {
            return true;
        }
        let moves = match kind {
            RestrictedPathKind::Reference => oracle.gradient_moves(&x),
            RestrictedPathKind::Coreference => oracle.cogradient_moves(&x),
        };
        for next in moves {
            if allowed(&next) && !seen.contains_key(&next) {
                seen.insert(next.clone(), ());
                stack.push(next);
            }
        }
    }
    false
}

/// The extension map of a Morse sequence: sends each critical face to the
/// chain of faces whose coreference image contains it.
///
/// It is a right inverse of the reference map on critical chains, and the
/// unique critical face in the image of a critical face is that face
/// itself.
#[must_use]
pub fn extension_map(seq: &MorseSequence, coreference: &Frame) -> Frame {
    coreference.transpose_over(seq.target(), seq.critical_faces())
}

/// The coextension map of a Morse sequence: sends each critical face to the
/// chain of faces whose reference image contains it.
#[must_use]
pub fn coextension_map(seq: &MorseSequence, reference: &Frame) -> Frame {
    reference.transpose_over(seq.target(), seq.critical_faces())
}

/// Counts the critical faces where the reference map fails to invert the
/// extension map, or the coreference map the coextension map. Zero means
/// both composites are the identity on critical chains.
#[must_use]
pub fn retraction_defect(
    seq: &MorseSequence,
    reference: &Frame,
    coreference: &Frame,
    extension: &Frame,
    coextension: &Frame,
) -> usize {
    let mut defects = 0;
    for kappa in seq.critical_faces() {
        let once = Chain::from(kappa.clone());
        if reference.eval_chain(&extension.eval(&kappa)) != once {
            defects += 1;
        }
        if coreference.eval_chain(&coextension.eval(&kappa)) != once {
            defects += 1;
        }
    }
    defects
}

/// Counts the critical faces where the extension map fails to carry the
/// critical complex into the underlying complex: the boundary of the
/// extension must equal the extension of the induced boundary, and dually
/// for the coextension and the induced coboundary. Zero means both maps are
/// chain maps.
pub fn extension_chain_map_defect(
    seq: &MorseSequence,
    critical: &CriticalComplex,
    extension: &Frame,
    coextension: &Frame,
) -> Result<usize> {
    let k = seq.target();
    let mut defects = 0;
    for kappa in seq.critical_faces() {
        let through_complex = k.boundary_op(&extension.eval(&kappa))?;
        let through_critical = extension.eval_chain(critical.boundary(&kappa)?);
        if through_complex != through_critical {
            defects += 1;
        }
        let co_through_complex = k.coboundary_op(&coextension.eval(&kappa))?;
        let co_through_critical = coextension.eval_chain(critical.coboundary(&kappa)?);
        if co_through_complex != co_through_critical {
            defects += 1;
        }
    }
    Ok(defects)
}

/// The gradient flow of a Morse sequence and its stabilization.
#[derive(Debug)]
pub struct FlowOperator {
    complex: Complex,
    field: VectorField,
}

impl FlowOperator {
    /// The flow along the gradient field of `seq`.
    #[must_use]
    pub fn new(seq: &MorseSequence) -> Self {
        Self {
            complex: seq.target().clone(),
            field: seq.gradient_vector_field(),
        }
    }

    fn lift(&self, c: &Chain) -> Chain {
        c.iter()
            .filter_map(|s| self.field.up(s))
            .cloned()
            .collect()
    }

    fn drop(&self, c: &Chain) -> Chain {
        c.iter()
            .filter_map(|s| self.field.down(s))
            .cloned()
            .collect()
    }

    /// One application of the flow: the chain, plus the boundary of its
    /// lift along the field, plus the lift of its boundary.
    pub fn apply(&self, c: &Chain) -> Result<Chain> {
        let lifted = self.lift(c);
        let boundary = self.complex.boundary_op(c)?;
        Ok(c.clone() + self.complex.boundary_op(&lifted)? + self.lift(&boundary))
    }

    /// One application of the dual flow: the chain, plus the coboundary of
    /// its drop along the field, plus the drop of its coboundary.
    pub fn coapply(&self, c: &Chain) -> Result<Chain> {
        let dropped = self.drop(c);
        let coboundary = self.complex.coboundary_op(c)?;
        Ok(c.clone() + self.complex.coboundary_op(&dropped)? + self.drop(&coboundary))
    }

    /// Iterates the flow to its fixed chain.
    ///
    /// Returns the stable chain and the number of iterations used. The flow
    /// of a Morse sequence always stabilizes within one step per face of
    /// the complex; [`Error::IterationCap`] past that bound signals an
    /// internal error.
    pub fn stabilize(&self, c: &Chain) -> Result<(Chain, usize)> {
        self.iterate(c, Self::apply)
    }

    /// Iterates the dual flow to its fixed chain.
    pub fn costabilize(&self, c: &Chain) -> Result<(Chain, usize)> {
        self.iterate(c, Self::coapply)
    }

    fn iterate(
        &self,
        c: &Chain,
        step: impl Fn(&Self, &Chain) -> Result<Chain>,
    ) -> Result<(Chain, usize)> {
        let cap = self.complex.face_count() + 1;
        let mut cur = c.clone();
        for used in 0..cap {
            let next = step(self, &cur)?;
            if next == cur {
                return Ok((cur, used));
            }
            cur = next;
        }
        Err(Error::IterationCap { cap })
    }
}

/// Counts the faces where the stabilized flow disagrees with the extension
/// of the reference image, or the stabilized dual flow with the coextension
/// of the coreference image. Zero means the stabilized flow factors through
/// the critical faces.
pub fn flow_decomposition_defect(
    seq: &MorseSequence,
    reference: &Frame,
    coreference: &Frame,
    extension: &Frame,
    coextension: &Frame,
) -> Result<usize> {
    let flow = FlowOperator::new(seq);
    let mut defects = 0;
    for nu in seq.target().faces() {
        let single = Chain::from(nu.clone());
        let (stable, _) = flow.stabilize(&single)?;
        if stable != extension.eval_chain(&reference.eval(nu)) {
            defects += 1;
        }
        let (costable, _) = flow.costabilize(&single)?;
        if costable != coextension.eval_chain(&coreference.eval(nu)) {
            defects += 1;
        }
    }
    Ok(defects)
}

/// Checks that composite walk counts factor as gradient path counts into a
/// critical face times cogradient path counts out of it, and that their
/// parity matches the stabilized flow. Returns the number of face pairs
/// where either fails.
pub fn composite_walk_defect(seq: &MorseSequence) -> Result<usize> {
    let mut oracle = PathOracle::new(seq);
    let flow = FlowOperator::new(seq);
    let criticals = seq.critical_faces();
    let mut defects = 0;
    for nu in seq.target().faces() {
        let walks = oracle.composite_counts(nu);
        let grad = oracle.gradient_counts(nu);
        let (stable, _) = flow.stabilize(&Chain::from(nu.clone()))?;
        for mu in seq.target().faces_of_dim(nu.dim()) {
            let direct = walks.get(mu).cloned().unwrap_or_default();
            let mut factored = BigUint::ZERO;
            for kappa in criticals.iter().filter(|k| k.dim() == nu.dim()) {
                if let Some(a) = grad.get(kappa) {
                    let b = oracle
                        .cogradient_counts(mu)
                        .get(kappa)
                        .cloned()
                        .unwrap_or_default();
                    factored += a * b;
                }
            }
            if direct != factored {
                defects += 1;
            }
            if direct.bit(0) != stable.contains(mu) {
                defects += 1;
            }
        }
    }
    Ok(defects)
}

/// The extension complex of a Morse sequence: the image of the extension
/// map, as a chain complex under the boundary of the underlying complex.
#[derive(Debug)]
pub struct ExtensionComplex {
    /// Pairs (critical face, its extension), by dimension.
    generators: Vec<Vec<(Simplex, Chain)>>,
    reference: Frame,
    extension: Frame,
    presented: PresentedChainComplex,
}

/// Builds the extension complex of a sequence.
///
/// The generators of degree `p` are the extensions of the critical faces of
/// dimension `p`. In these coordinates the boundary of a generator is read
/// off by applying the reference map to its boundary in the complex; the
/// construction verifies that this really expands the boundary over the
/// generators and fails with [`Error::InvalidSequence`] otherwise.
pub fn extension_complex(
    seq: &MorseSequence,
    reference: &Frame,
    extension: &Frame,
) -> Result<ExtensionComplex> {
    let k = seq.target();
    let top = k.dim().map_or(0, |d| d + 1);
    let mut generators: Vec<Vec<(Simplex, Chain)>> = vec![Vec::new(); top];
    let mut bases: Vec<Vec<Simplex>> = vec![Vec::new(); top];
    for kappa in seq.critical_faces() {
        bases[kappa.dim()].push(kappa.clone());
        generators[kappa.dim()].push((kappa.clone(), extension.eval(&kappa)));
    }
    // Coordinates of the boundary of each generator over the generators one
    // degree down, obtained through the reference map (which inverts the
    // extension map on critical chains).
    let mut coords: BTreeMap<Simplex, Chain> = BTreeMap::new();
    for kappa in seq.critical_faces() {
        let boundary = k.boundary_op(&extension.eval(&kappa))?;
        let coefficients = reference.eval_chain(&boundary);
        let expanded = extension.eval_chain(&coefficients);
        if expanded != boundary {
            return Err(Error::InvalidSequence {
                reason: format!(
                    "the boundary of the extension of {kappa} leaves the extension complex"
                ),
            });
        }
        coords.insert(kappa, coefficients);
    }
    let presented = PresentedChainComplex::from_boundaries(bases, |s| {
        coords.get(s).cloned().unwrap_or_default()
    })?;
    for gens in &mut generators {
        gens.sort_by(|(a, _), (b, _)| a.cmp(b));
    }
    Ok(ExtensionComplex {
        generators,
        reference: reference.clone(),
        extension: extension.clone(),
        presented,
    })
}

impl ExtensionComplex {
    /// The generators of degree `p`: each critical face of dimension `p`
    /// with its extension.
    #[must_use]
    pub fn generators(&self, p: usize) -> &[(Simplex, Chain)] {
        self.generators.get(p).map_or(&[], Vec::as_slice)
    }

    /// Number of presented degrees.
    #[must_use]
    pub fn degree_count(&self) -> usize {
        self.generators.len()
    }

    /// Whether `c` belongs to the extension complex: extending its
    /// reference image must reproduce it.
    #[must_use]
    pub fn contains(&self, c: &Chain) -> bool {
        self.extension.eval_chain(&self.reference.eval_chain(c)) == *c
    }

    /// The underlying presented chain complex, in critical-face
    /// coordinates.
    #[must_use]
    pub fn presented(&self) -> &PresentedChainComplex {
        &self.presented
    }

    /// Betti numbers of the extension complex.
    #[must_use]
    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..self.degree_count())
            .map(|p| self.presented.betti(p))
            .collect()
    }
}

/// The outcome of comparing the fixed chains of the flow with the extension
/// complex in one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointReport {
    /// The degree that was checked.
    pub p: usize,
    /// Number of chains examined (all chains of the degree when exhaustive,
    /// a sample otherwise).
    pub checked: usize,
    /// Whether every chain of the degree was examined.
    pub exhaustive: bool,
    /// Number of chains where being fixed by the flow disagreed with
    /// membership in the extension complex.
    pub defects: usize,
}

/// Compares, degree by degree, the chains fixed by the flow with the
/// members of the extension complex, and dually the chains fixed by the
/// dual flow with the members of the coextension complex (checked through
/// the coextension of the coreference image).
///
/// Degrees with at most `exhaustive_limit` faces are checked on every
/// chain; larger degrees on singletons and sums of consecutive basis
/// faces.
pub fn flow_fixed_point_reports(
    seq: &MorseSequence,
    reference: &Frame,
    coreference: &Frame,
    extension: &Frame,
    coextension: &Frame,
    exhaustive_limit: usize,
) -> Result<Vec<FixedPointReport>> {
    let k = seq.target();
    let flow = FlowOperator::new(seq);
    let mut reports = Vec::new();
    let top = k.dim().map_or(0, |d| d + 1);
    for p in 0..top {
        let faces: Vec<Simplex> = k.faces_of_dim(p).cloned().collect();
        let mut checked = 0;
        let mut defects = 0;
        let exhaustive = faces.len() <= exhaustive_limit;
        let candidates: Vec<Chain> = if exhaustive {
            (0_u64..(1 << faces.len()))
                .map(|mask| {
                    faces
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, s)| s.clone())
                        .collect()
                })
                .collect()
        } else {
            let singletons = faces.iter().cloned().map(Chain::from);
            let windows = faces.windows(3).map(|w| w.iter().cloned().collect());
            singletons.chain(windows).collect()
        };
        for c in candidates {
            checked += 1;
            let fixed = flow.apply(&c)? == c;
            let member = extension.eval_chain(&reference.eval_chain(&c)) == c;
            if fixed != member {
                defects += 1;
            }
            let cofixed = flow.coapply(&c)? == c;
            let comember = coextension.eval_chain(&coreference.eval_chain(&c)) == c;
            if cofixed != comember {
                defects += 1;
            }
        }
        reports.push(FixedPointReport {
            p,
            checked,
            exhaustive,
            defects,
        });
    }
    Ok(reports)
}
