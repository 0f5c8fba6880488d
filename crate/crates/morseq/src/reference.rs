//! Reference and coreference maps, and the critical complex they induce.
//!
//! A Morse sequence determines two linear maps on chains, characterized by
//! four conditions. The *reference map* fixes every critical face, vanishes
//! on every upper face, and kills the boundary of every upper face; its
//! values are chains of critical faces. The *coreference map* fixes every
//! critical face, vanishes on every lower face, and kills the coboundary of
//! every lower face. Both maps are unique for a given sequence, and
//! equivalent sequences share them.
//!
//! Restricted to critical faces, the boundary followed by the reference map
//! (and the coboundary followed by the coreference map) turn the criticals
//! into a chain complex, the *critical complex*, whose homology matches the
//! homology of the underlying complex.

use std::collections::BTreeMap;

use crate::chain::Chain;
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::homology::PresentedChainComplex;
use crate::sequence::{MorseItem, MorseSequence};
use crate::simplex::Simplex;

/// A linear map on chains, stored by its values on simplices.
///
/// Simplices without an entry are sent to zero, so a frame is defined on
/// every chain of the ambient complex.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Frame {
    map: BTreeMap<Simplex, Chain>,
}

impl Frame {
    /// The frame that sends everything to zero.
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the value on a single simplex.
    pub fn insert(&mut self, s: Simplex, value: Chain) {
        self.map.insert(s, value);
    }

    /// The value on a single simplex; `None` when no value was set (the
    /// map then sends the simplex to zero).
    #[must_use]
    pub fn get(&self, s: &Simplex) -> Option<&Chain> {
        self.map.get(s)
    }

    /// The value on a single simplex, as a chain.
    #[must_use]
    pub fn eval(&self, s: &Simplex) -> Chain {
        self.map.get(s).cloned().unwrap_or_default()
    }

    /// The value on a chain, by linearity.
    #[must_use]
    pub fn eval_chain(&self, c: &Chain) -> Chain {
        c.iter().map(|s| self.eval(s)).sum()
    }

    /// The stored entries, in lexicographic order of the simplex.
    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, &Chain)> {
        self.map.iter()
    }

    /// Number of stored entries.
    #[must_use]
    pub fn len(&self) -> usize {
        self.map.len()
    }

    /// Whether no entry is stored.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// The transposed frame over the faces of `k`: entry `kappa` of the
    /// result holds every face whose image under `self` contains `kappa`.
    #[must_use]
    pub fn transpose_over(&self, k: &Complex, keys: impl IntoIterator<Item = Simplex>) -> Frame {
        let mut out = Frame::new();
        for key in keys {
            out.insert(key, Chain::zero());
        }
        for nu in k.faces() {
            for kappa in self.eval(nu).iter() {
                if let Some(entry) = out.map.get_mut(kappa) {
                    entry.toggle(nu.clone());
                }
            }
        }
        out
    }
}

/// The reference map of a Morse sequence.
///
/// Values are computed by one scan of the items, left to right: a filled
/// face is sent to itself; for an expanded pair `(sigma, tau)`, `tau` is
/// sent to zero and `sigma` to the image of the rest of the boundary of
/// `tau`, which is already known at that point.
#[must_use]
pub fn reference_map(seq: &MorseSequence) -> Frame {
    let mut frame = Frame::new();
    for item in seq.items() {
        match item {
            MorseItem::Fill(nu) => {
                frame.insert(nu.clone(), Chain::from(nu.clone()));
            }
            MorseItem::Expand(sigma, tau) => {
                let value = tau
                    .facets()
                    .filter(|rho| rho != sigma)
                    .map(|rho| frame.eval(&rho))
                    .sum();
                frame.insert(tau.clone(), Chain::zero());
                frame.insert(sigma.clone(), value);
            }
        }
    }
    frame
}

/// The coreference map of a Morse sequence.
///
/// Values are computed by one scan of the items, right to left: a filled
/// face is sent to itself; for an expanded pair `(sigma, tau)`, `sigma` is
/// sent to zero and `tau` to the image of the rest of the coboundary of
/// `sigma` in the target complex, which is already known at that point.
#[must_use]
pub fn coreference_map(seq: &MorseSequence) -> Frame {
    let mut frame = Frame::new();
    let k = seq.target();
    for item in seq.items().iter().rev() {
        match item {
            MorseItem::Fill(nu) => {
                frame.insert(nu.clone(), Chain::from(nu.clone()));
            }
            MorseItem::Expand(sigma, tau) => {
                let value = k
                    .coboundary(sigma)
                    .expect("a lower face belongs to the target")
                    .iter()
                    .filter(|rho| *rho != tau)
                    .map(|rho| frame.eval(rho))
                    .sum();
                frame.insert(sigma.clone(), Chain::zero());
                frame.insert(tau.clone(), value);
            }
        }
    }
    frame
}

/// The critical complex of a Morse sequence: the critical faces with the
/// boundary induced by the reference map and the coboundary induced by the
/// coreference map.
#[derive(Debug)]
pub struct CriticalComplex {
    bases: Vec<Vec<Simplex>>,
    boundary: BTreeMap<Simplex, Chain>,
    coboundary: BTreeMap<Simplex, Chain>,
    presented: PresentedChainComplex,
}

/// Builds the critical complex of a sequence from its reference and
/// coreference maps.
///
/// The boundary of a critical face is the image under the reference map of
/// its boundary in the target; the coboundary is the image under the
/// coreference map of its coboundary. The construction verifies that the
/// induced boundary squares to zero and fails with
/// [`Error::NotAChainComplex`] otherwise.
pub fn critical_complex(
    seq: &MorseSequence,
    reference: &Frame,
    coreference: &Frame,
) -> Result<CriticalComplex> {
    let k = seq.target();
    let criticals = seq.critical_faces();
    let top = k.dim().map_or(0, |d| d + 1);
    let mut bases: Vec<Vec<Simplex>> = vec![Vec::new(); top];
    for nu in &criticals {
        bases[nu.dim()].push(nu.clone());
    }
    let mut boundary = BTreeMap::new();
    let mut coboundary = BTreeMap::new();
    for nu in &criticals {
        let b = reference.eval_chain(&k.boundary(nu)?);
        let c = coreference.eval_chain(&k.coboundary(nu)?);
        boundary.insert(nu.clone(), b);
        coboundary.insert(nu.clone(), c);
    }
    let presented = PresentedChainComplex::from_boundaries(bases.clone(), |s| {
        boundary.get(s).cloned().unwrap_or_default()
    })?;
    for basis in &mut bases {
        basis.sort();
    }
    Ok(CriticalComplex {
        bases,
        boundary,
        coboundary,
        presented,
    })
}

impl CriticalComplex {
    /// The critical faces of dimension `p`, sorted lexicographically.
    #[must_use]
    pub fn basis(&self, p: usize) -> &[Simplex] {
        self.bases.get(p).map_or(&[], Vec::as_slice)
    }

    /// Number of presented degrees.
    #[must_use]
    pub fn degree_count(&self) -> usize {
        self.bases.len()
    }

    /// The induced boundary of a critical face.
    pub fn boundary(&self, nu: &Simplex) -> Result<&Chain> {
        self.boundary
            .get(nu)
            .ok_or_else(|| Error::NotAFace(nu.to_string()))
    }

    /// The induced coboundary of a critical face.
    pub fn coboundary(&self, nu: &Simplex) -> Result<&Chain> {
        self.coboundary
            .get(nu)
            .ok_or_else(|| Error::NotAFace(nu.to_string()))
    }

    /// The induced boundary of a chain of critical faces.
    pub fn boundary_of(&self, c: &Chain) -> Result<Chain> {
        let mut out = Chain::zero();
        for s in c.iter() {
            out += self.boundary(s)?.clone();
        }
        Ok(out)
    }

    /// The induced coboundary of a chain of critical faces.
    pub fn coboundary_of(&self, c: &Chain) -> Result<Chain> {
        let mut out = Chain::zero();
        for s in c.iter() {
            out += self.coboundary(s)?.clone();
        }
        Ok(out)
    }

    /// The underlying presented chain complex.
    #[must_use]
    pub fn presented(&self) -> &PresentedChainComplex {
        &self.presented
    }

    /// Betti numbers of the critical complex.
    #[must_use]
    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..self.degree_count())
            .map(|p| self.presented.betti(p))
            .collect()
    }

    /// Checks the duality between the induced boundary and coboundary: a
    /// critical face lies in the boundary of another exactly when the second
    /// lies in the coboundary of the first. Returns the number of critical
    /// incidences where this fails (zero means the duality holds).
    #[must_use]
    pub fn duality_defect(&self) -> usize {
        let mut defects = 0;
        for p in 1..self.degree_count() {
            for tau in self.basis(p) {
                for sigma in self.basis(p - 1) {
                    let down = self.boundary[tau].contains(sigma);
                    let up = self.coboundary[sigma].contains(tau);
                    if down != up {
                        defects += 1;
                    }
                }
            }
        }
        defects
    }
}

/// Counts the faces of the target where the reference map fails to commute
/// with the boundary: the induced boundary of the image must equal the image
/// of the boundary. Zero means the reference map is a chain map onto the
/// critical complex.
pub fn chain_map_defect(
    seq: &MorseSequence,
    reference: &Frame,
    critical: &CriticalComplex,
) -> Result<usize> {
    let k = seq.target();
    let mut defects = 0;
    for nu in k.faces() {
        let through_critical = critical.boundary_of(&reference.eval(nu))?;
        let through_complex = reference.eval_chain(&k.boundary(nu)?);
        if through_critical != through_complex {
            defects += 1;
        }
    }
    Ok(defects)
}

/// Counts the faces of the target where the coreference map fails to
/// commute with the coboundary. Zero means the coreference map is a cochain
/// map onto the critical complex.
pub fn cochain_map_defect(
    seq: &MorseSequence,
    coreference: &Frame,
    critical: &CriticalComplex,
) -> Result<usize> {
    let k = seq.target();
    let mut defects = 0;
    for nu in k.faces() {
        let through_critical = critical.coboundary_of(&coreference.eval(nu))?;
        let through_complex = coreference.eval_chain(&k.coboundary(nu)?);
        if through_critical != through_complex {
            defects += 1;
        }
    }
    Ok(defects)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::{decreasing_scheme, increasing_scheme, Tiebreak};
    use crate::simplex;

    fn full_triangle() -> Complex {
        Complex::closure(&[vec![1, 2, 3]]).unwrap()
    }

    fn triangle_v() -> MorseSequence {
        MorseSequence::new(
            full_triangle(),
            vec![
                MorseItem::Fill(simplex![1]),
                MorseItem::Expand(simplex![2], simplex![1, 2]),
                MorseItem::Expand(simplex![3], simplex![2, 3]),
                MorseItem::Expand(simplex![1, 3], simplex![1, 2, 3]),
            ],
        )
        .unwrap()
    }

    fn triangle_w() -> MorseSequence {
        MorseSequence::new(
            full_triangle(),
            vec![
                MorseItem::Fill(simplex![1]),
                MorseItem::Expand(simplex![3], simplex![1, 3]),
                MorseItem::Expand(simplex![2], simplex![2, 3]),
                MorseItem::Expand(simplex![1, 2], simplex![1, 2, 3]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn reference_map_fixes_criticals_and_kills_upper_faces() {
        let seq = triangle_v();
        let lambda = reference_map(&seq);
        let partition = seq.partition();
        for kappa in &partition.critical {
            assert_eq!(lambda.eval(kappa), Chain::from(kappa.clone()));
        }
        for tau in &partition.upper {
            assert!(lambda.eval(tau).is_zero(), "upper face {tau}");
            let boundary = seq.target().boundary(tau).unwrap();
            assert!(
                lambda.eval_chain(&boundary).is_zero(),
                "boundary of upper face {tau}"
            );
        }
    }

    #[test]
    fn coreference_map_fixes_criticals_and_kills_lower_faces() {
        let seq = triangle_v();
        let vee = coreference_map(&seq);
        let partition = seq.partition();
        for kappa in &partition.critical {
            assert_eq!(vee.eval(kappa), Chain::from(kappa.clone()));
        }
        for sigma in &partition.lower {
            assert!(vee.eval(sigma).is_zero(), "lower face {sigma}");
            let coboundary = seq.target().coboundary(sigma).unwrap();
            assert!(
                vee.eval_chain(&coboundary).is_zero(),
                "coboundary of lower face {sigma}"
            );
        }
    }

    #[test]
    fn on_a_collapsible_sequence_the_reference_map_tracks_vertices() {
        // One critical vertex: every vertex maps to it, every other face to
        // zero; the coreference map fixes the critical and kills the rest.
        let seq = triangle_v();
        let lambda = reference_map(&seq);
        let vee = coreference_map(&seq);
        let kappa = simplex![1];
        for nu in seq.target().faces() {
            let expected = if nu.dim() == 0 {
                Chain::from(kappa.clone())
            } else {
                Chain::zero()
            };
            assert_eq!(lambda.eval(nu), expected, "reference of {nu}");
            let expected_vee = if *nu == kappa {
                Chain::from(kappa.clone())
            } else {
                Chain::zero()
            };
            assert_eq!(vee.eval(nu), expected_vee, "coreference of {nu}");
        }
    }

    #[test]
    fn the_two_triangle_sequences_share_their_maps() {
        // Same criticals but different pairs, yet identical maps.
        let v = triangle_v();
        let w = triangle_w();
        assert!(!v.equivalent(&w).unwrap());
        assert_eq!(reference_map(&v), reference_map(&w));
        assert_eq!(coreference_map(&v), coreference_map(&w));
    }

    #[test]
    fn equivalent_sequences_share_their_maps() {
        let k = Complex::closure(&[vec![1, 2, 3], vec![2, 3, 4], vec![4, 5]]).unwrap();
        let seq = decreasing_scheme(&k, Tiebreak::Seeded(2));
        let rearranged = seq.arrange();
        assert!(seq.equivalent(&rearranged).unwrap());
        assert_eq!(reference_map(&seq), reference_map(&rearranged));
        assert_eq!(coreference_map(&seq), coreference_map(&rearranged));
    }

    #[test]
    fn critical_complex_of_a_circle_has_zero_boundary() {
        let circle = Complex::closure(&[vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap();
        let seq = increasing_scheme(&circle, Tiebreak::Lex);
        let lambda = reference_map(&seq);
        let vee = coreference_map(&seq);
        let cc = critical_complex(&seq, &lambda, &vee).unwrap();
        assert_eq!(cc.betti_numbers(), vec![1, 1]);
        for p in 0..cc.degree_count() {
            for kappa in cc.basis(p) {
                assert!(cc.boundary(kappa).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn critical_complex_betti_matches_the_complex() {
        let k = Complex::closure(&[
            vec![1, 2, 3],
            vec![1, 2, 4],
            vec![1, 3, 4],
            vec![2, 3, 4],
        ])
        .unwrap();
        let seq = increasing_scheme(&k, Tiebreak::Lex);
        let lambda = reference_map(&seq);
        let vee = coreference_map(&seq);
        let cc = critical_complex(&seq, &lambda, &vee).unwrap();
        let h = PresentedChainComplex::of_complex(&k);
        for p in 0..3 {
            assert_eq!(cc.presented().betti(p), h.betti(p), "degree {p}");
        }
    }

    #[test]
    fn duality_holds_on_a_random_scheme() {
        let k = Complex::closure(&[vec![1, 2, 3], vec![2, 3, 4], vec![1, 4], vec![5]]).unwrap();
        for seed in 0..5 {
            let seq = increasing_scheme(&k, Tiebreak::Seeded(seed));
            let lambda = reference_map(&seq);
            let vee = coreference_map(&seq);
            let cc = critical_complex(&seq, &lambda, &vee).unwrap();
            assert_eq!(cc.duality_defect(), 0, "seed {seed}");
        }
    }

    #[test]
    fn the_reference_map_is_a_chain_map() {
        let k = Complex::closure(&[vec![1, 2, 3], vec![2, 3, 4], vec![1, 4], vec![5]]).unwrap();
        let seq = decreasing_scheme(&k, Tiebreak::Seeded(7));
        let lambda = reference_map(&seq);
        let vee = coreference_map(&seq);
        let cc = critical_complex(&seq, &lambda, &vee).unwrap();
        assert_eq!(chain_map_defect(&seq, &lambda, &cc).unwrap(), 0);
        assert_eq!(cochain_map_defect(&seq, &vee, &cc).unwrap(), 0);
    }

    #[test]
    fn frames_evaluate_linearly() {
        let mut frame = Frame::new();
        frame.insert(simplex![1], Chain::from(simplex![9]));
        frame.insert(simplex![2], Chain::from(simplex![9]));
        let c: Chain = [simplex![1], simplex![2]].into_iter().collect();
        assert!(
            frame.eval_chain(&c).is_zero(),
            "the two images coincide and must cancel"
        );
    }

    #[test]
    fn transpose_over_inverts_membership() {
        let seq = triangle_v();
        let vee = coreference_map(&seq);
        let criticals = seq.critical_faces();
        let tilde = vee.transpose_over(seq.target(), criticals.iter().cloned());
        // The critical vertex is in the coreference image only of itself.
        assert_eq!(
            tilde.eval(&simplex![1]),
            Chain::from(simplex![1])
        );
    }
}
