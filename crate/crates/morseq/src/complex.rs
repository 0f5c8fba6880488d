//! Finite simplicial complexes and the four elementary moves.

use std::collections::{BTreeSet, HashMap};

use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::simplex::Simplex;

/// A finite simplicial complex: a set of simplices closed under taking faces.
///
/// The void complex (no faces at all) is a valid value; it is the starting
/// point of every Morse sequence.
///
/// Faces are stored per dimension. Alongside the face sets, the complex
/// maintains for each face the number of its cofaces of codimension one;
/// this makes facet and free-pair queries cheap and is updated incrementally
/// by the elementary moves.
#[derive(Debug, Clone)]
pub struct Complex {
    by_dim: Vec<BTreeSet<Simplex>>,
    coface_count: HashMap<Simplex, u32>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.by_dim == other.by_dim
    }
}

impl Eq for Complex {}

impl Complex {
    /// The void complex, which has no faces.
    #[must_use]
    pub fn void() -> Self {
        Self {
            by_dim: Vec::new(),
            coface_count: HashMap::new(),
        }
    }

    /// Builds the smallest complex containing the given facets.
    ///
    /// Every list of vertices becomes a simplex together with all its faces.
    /// Returns [`Error::InvalidFacet`] if a facet is empty.
    pub fn closure(facets: &[Vec<u32>]) -> Result<Self> {
        let simplices = facets
            .iter()
            .map(|f| Simplex::try_new(f.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::closure_of(simplices))
    }

    /// Builds the smallest complex containing the given simplices.
    #[must_use]
    pub fn closure_of(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for s in simplices {
            for f in s.proper_faces() {
                all.insert(f);
            }
            all.insert(s);
        }
        let mut complex = Self::void();
        // BTreeSet order is lexicographic, not by dimension, so group first.
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in all {
            let d = s.dim();
            if by_dim.len() <= d {
                by_dim.resize(d + 1, Vec::new());
            }
            by_dim[d].push(s);
        }
        for group in by_dim {
            for s in group {
                complex.insert_face(s);
            }
        }
        complex
    }

    /// Whether the complex has no faces.
    #[must_use]
    pub fn is_void(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// The dimension of the complex, or `None` if it is void.
    #[must_use]
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    /// Whether `s` is a face of the complex.
    #[must_use]
    pub fn contains(&self, s: &Simplex) -> bool {
        self.by_dim.get(s.dim()).is_some_and(|set| set.contains(s))
    }

    /// Total number of faces.
    #[must_use]
    pub fn face_count(&self) -> usize {
        self.by_dim.iter().map(BTreeSet::len).sum()
    }

    /// Number of faces of each dimension, from zero up to the dimension of
    /// the complex.
    #[must_use]
    pub fn face_counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(BTreeSet::len).collect()
    }

    /// The Euler characteristic: the alternating sum of the face counts.
    #[must_use]
    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, set)| {
                let n = set.len() as i64;
                if d % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// All faces, by increasing dimension and lexicographically within each
    /// dimension.
    pub fn faces(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    /// The faces of dimension `p`, in lexicographic order.
    pub fn faces_of_dim(&self, p: usize) -> impl Iterator<Item = &Simplex> {
        self.by_dim.get(p).into_iter().flatten()
    }

    /// The facets: faces that are maximal under inclusion.
    #[must_use]
    pub fn facets(&self) -> Vec<Simplex> {
        self.faces()
            .filter(|s| self.coface_count[*s] == 0)
            .cloned()
            .collect()
    }

    /// Number of cofaces of codimension one of a face of the complex.
    ///
    /// Returns [`Error::NotAFace`] if `s` is not in the complex.
    pub fn coface_count(&self, s: &Simplex) -> Result<u32> {
        self.coface_count
            .get(s)
            .copied()
            .ok_or_else(|| Error::NotAFace(s.to_string()))
    }

    /// The boundary of a face: the chain of its faces of codimension one.
    ///
    /// The boundary of a vertex is the zero chain. Returns
    /// [`Error::NotAFace`] if `s` is not in the complex.
    pub fn boundary(&self, s: &Simplex) -> Result<Chain> {
        if !self.contains(s) {
            return Err(Error::NotAFace(s.to_string()));
        }
        Ok(s.facets().collect())
    }

    /// The coboundary of a face: the chain of its cofaces of codimension one.
    ///
    /// Returns [`Error::NotAFace`] if `s` is not in the complex.
    pub fn coboundary(&self, s: &Simplex) -> Result<Chain> {
        if !self.contains(s) {
            return Err(Error::NotAFace(s.to_string()));
        }
        Ok(self.coface_candidates(s).collect())
    }

    /// The boundary operator applied to a chain: the mod 2 sum of the
    /// boundaries of its members.
    ///
    /// Returns [`Error::NotAFace`] if a member is not in the complex.
    pub fn boundary_op(&self, c: &Chain) -> Result<Chain> {
        let mut out = Chain::zero();
        for s in c.iter() {
            out += self.boundary(s)?;
        }
        Ok(out)
    }

    /// The coboundary operator applied to a chain: the mod 2 sum of the
    /// coboundaries of its members.
    ///
    /// Returns [`Error::NotAFace`] if a member is not in the complex.
    pub fn coboundary_op(&self, c: &Chain) -> Result<Chain> {
        let mut out = Chain::zero();
        for s in c.iter() {
            out += self.coboundary(s)?;
        }
        Ok(out)
    }

    /// All free pairs of the complex.
    ///
    /// A pair `(sigma, tau)` is free when `tau` is the unique coface of
    /// codimension one of `sigma`; `tau` is then automatically a facet.
    /// Pairs are returned sorted by the dimension of `tau`, then
    /// lexicographically by `tau`, then by `sigma`.
    #[must_use]
    pub fn free_pairs(&self) -> Vec<(Simplex, Simplex)> {
        let mut pairs: Vec<(Simplex, Simplex)> = self
            .faces()
            .filter(|s| self.coface_count[*s] == 1)
            .map(|s| {
                let tau = self
                    .coface_candidates(s)
                    .next()
                    .expect("a face with coface count one has a coface");
                debug_assert_eq!(
                    self.coface_count[&tau], 0,
                    "the unique coface above a free face must be a facet"
                );
                (s.clone(), tau)
            })
            .collect();
        pairs.sort_by(|(s1, t1), (s2, t2)| {
            (t1.dim(), t1, s1).cmp(&(t2.dim(), t2, s2))
        });
        pairs
    }

    /// Removes the free pair `(sigma, tau)`.
    ///
    /// Legality: both faces belong to the complex, `sigma` is a face of
    /// `tau` of codimension one, and `tau` is the only coface of
    /// codimension one of `sigma`. Returns [`Error::IllegalMove`] naming the
    /// violated condition otherwise.
    pub fn collapse(&mut self, sigma: &Simplex, tau: &Simplex) -> Result<()> {
        if !self.contains(sigma) {
            return Err(illegal(format!("{sigma} is not a face of the complex")));
        }
        if !self.contains(tau) {
            return Err(illegal(format!("{tau} is not a face of the complex")));
        }
        if !(sigma.is_face_of(tau) && sigma.dim() + 1 == tau.dim()) {
            return Err(illegal(format!(
                "{sigma} is not a face of {tau} of codimension one"
            )));
        }
        if self.coface_count[sigma] != 1 {
            return Err(illegal(format!(
                "{sigma} has {} cofaces of codimension one, expected exactly one",
                self.coface_count[sigma]
            )));
        }
        self.remove_face(tau);
        self.remove_face(sigma);
        Ok(())
    }

    /// Adds the free pair `(sigma, tau)`.
    ///
    /// Legality: neither face belongs to the complex, `sigma` is a face of
    /// `tau` of codimension one, and every other face of the boundary of
    /// `tau` already belongs to the complex. Returns [`Error::IllegalMove`]
    /// naming the violated condition otherwise.
    pub fn expand(&mut self, sigma: &Simplex, tau: &Simplex) -> Result<()> {
        if self.contains(sigma) {
            return Err(illegal(format!("{sigma} is already a face of the complex")));
        }
        if self.contains(tau) {
            return Err(illegal(format!("{tau} is already a face of the complex")));
        }
        if !(sigma.is_face_of(tau) && sigma.dim() + 1 == tau.dim()) {
            return Err(illegal(format!(
                "{sigma} is not a face of {tau} of codimension one"
            )));
        }
        for rho in tau.facets() {
            if rho != *sigma && !self.contains(&rho) {
                return Err(illegal(format!(
                    "{rho} in the boundary of {tau} is missing from the complex"
                )));
            }
        }
        self.insert_face(sigma.clone());
        self.insert_face(tau.clone());
        Ok(())
    }

    /// Removes the facet `nu`.
    ///
    /// Legality: `nu` is a face of the complex with no coface. Returns
    /// [`Error::IllegalMove`] naming the violated condition otherwise.
    pub fn perforate(&mut self, nu: &Simplex) -> Result<()> {
        if !self.contains(nu) {
            return Err(illegal(format!("{nu} is not a face of the complex")));
        }
        if self.coface_count[nu] != 0 {
            return Err(illegal(format!("{nu} is not a facet: it has a coface")));
        }
        self.remove_face(nu);
        Ok(())
    }

    /// Adds the facet `nu`.
    ///
    /// Legality: `nu` is not a face of the complex and its whole boundary
    /// already is. A vertex can always be filled. Returns
    /// [`Error::IllegalMove`] naming the violated condition otherwise.
    pub fn fill(&mut self, nu: &Simplex) -> Result<()> {
        if self.contains(nu) {
            return Err(illegal(format!("{nu} is already a face of the complex")));
        }
        for rho in nu.facets() {
            if !self.contains(&rho) {
                return Err(illegal(format!(
                    "{rho} in the boundary of {nu} is missing from the complex"
                )));
            }
        }
        self.insert_face(nu.clone());
        Ok(())
    }

    /// Checks that the face set is closed and the coface counts are exact.
    /// Used by tests; quadratic, so not part of any hot path.
    #[must_use]
    pub fn is_well_formed(&self) -> bool {
        for s in self.faces() {
            if s.dim() > 0 && !s.facets().all(|f| self.contains(&f)) {
                return false;
            }
            let count = self.coface_candidates(s).count() as u32;
            if self.coface_count.get(s) != Some(&count) {
                return false;
            }
        }
        self.by_dim.last().is_none_or(|top| !top.is_empty())
    }

    /// Cofaces of codimension one of `s` present in the complex, found by
    /// extending `s` with each vertex of the complex.
    fn coface_candidates<'a>(&'a self, s: &'a Simplex) -> impl Iterator<Item = Simplex> + 'a {
        self.by_dim
            .first()
            .into_iter()
            .flatten()
            .filter_map(|v| s.with_vertex(v.vertices()[0]))
            .filter(|t| self.contains(t))
    }

    /// Inserts a face whose boundary is already present, keeping the coface
    /// counts exact.
    pub(crate) fn insert_face(&mut self, s: Simplex) {
        let d = s.dim();
        if self.by_dim.len() <= d {
            self.by_dim.resize(d + 1, BTreeSet::new());
        }
        debug_assert!(
            s.facets().all(|f| self.contains(&f)),
            "inserting {s} would break closedness"
        );
        let above = self.coface_candidates(&s).count() as u32;
        let inserted = self.by_dim[d].insert(s.clone());
        debug_assert!(inserted, "{s} inserted twice");
        self.coface_count.insert(s.clone(), above);
        if d > 0 {
            for f in s.facets() {
                *self
                    .coface_count
                    .get_mut(&f)
                    .expect("boundary faces are present before insertion") += 1;
            }
        }
    }

    /// Removes a face that has no cofaces, keeping the coface counts exact.
    pub(crate) fn remove_face(&mut self, s: &Simplex) {
        debug_assert_eq!(
            self.coface_count.get(s),
            Some(&0),
            "removing {s} would break closedness"
        );
        let d = s.dim();
        self.by_dim[d].remove(s);
        self.coface_count.remove(s);
        if d > 0 {
            for f in s.facets() {
                *self
                    .coface_count
                    .get_mut(&f)
                    .expect("boundary faces outlive their cofaces") -= 1;
            }
        }
        while self.by_dim.last().is_some_and(BTreeSet::is_empty) {
            self.by_dim.pop();
        }
    }
}

fn illegal(clause: String) -> Error {
    Error::IllegalMove { clause }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex;

    fn full_triangle() -> Complex {
        Complex::closure(&[vec![1, 2, 3]]).unwrap()
    }

    #[test]
    fn void_complex_has_no_faces_and_no_dimension() {
        let v = Complex::void();
        assert!(v.is_void());
        assert_eq!(v.dim(), None);
        assert_eq!(v.face_count(), 0);
        assert_eq!(v.euler_characteristic(), 0);
    }

    #[test]
    fn closure_of_a_triangle_has_seven_faces() {
        let k = full_triangle();
        assert_eq!(k.face_counts(), vec![3, 3, 1]);
        assert_eq!(k.dim(), Some(2));
        assert!(k.contains(&simplex![1, 3]));
        assert!(k.is_well_formed());
    }

    #[test]
    fn closure_rejects_an_empty_facet() {
        assert!(matches!(
            Complex::closure(&[vec![1, 2], vec![]]),
            Err(Error::InvalidFacet(_))
        ));
    }

    #[test]
    fn euler_characteristic_of_a_triangle_is_one() {
        assert_eq!(full_triangle().euler_characteristic(), 1);
    }

    #[test]
    fn boundary_of_an_edge_is_its_two_vertices() {
        let k = full_triangle();
        let b = k.boundary(&simplex![1, 2]).unwrap();
        assert_eq!(b, [simplex![1], simplex![2]].into_iter().collect());
    }

    #[test]
    fn boundary_of_a_vertex_is_zero() {
        let k = full_triangle();
        assert!(k.boundary(&simplex![2]).unwrap().is_zero());
    }

    #[test]
    fn boundary_of_a_missing_face_is_an_error() {
        let k = full_triangle();
        assert!(matches!(
            k.boundary(&simplex![1, 4]),
            Err(Error::NotAFace(_))
        ));
    }

    #[test]
    fn coboundary_of_a_vertex_lists_incident_edges() {
        let k = full_triangle();
        let c = k.coboundary(&simplex![1]).unwrap();
        assert_eq!(c, [simplex![1, 2], simplex![1, 3]].into_iter().collect());
    }

    #[test]
    fn boundary_operator_cancels_the_shared_vertex() {
        let k = full_triangle();
        let c: Chain = [simplex![1, 2], simplex![2, 3]].into_iter().collect();
        let b = k.boundary_op(&c).unwrap();
        assert_eq!(
            b,
            [simplex![1], simplex![3]].into_iter().collect(),
            "vertex {{2}} appears twice and must cancel"
        );
    }

    #[test]
    fn boundary_of_boundary_vanishes_on_the_triangle() {
        let k = full_triangle();
        let b1 = k.boundary(&simplex![1, 2, 3]).unwrap();
        assert!(k.boundary_op(&b1).unwrap().is_zero());
    }

    #[test]
    fn coboundary_operator_is_adjoint_to_boundary() {
        let k = Complex::closure(&[vec![1, 2, 3], vec![2, 3, 4]]).unwrap();
        for s in k.faces() {
            for t in k.faces() {
                if s.dim() + 1 == t.dim() {
                    let down = k.boundary(t).unwrap().contains(s);
                    let up = k.coboundary(s).unwrap().contains(t);
                    assert_eq!(down, up, "{s} in boundary of {t} iff {t} in coboundary of {s}");
                }
            }
        }
    }

    #[test]
    fn free_pairs_of_a_triangle_with_a_dangling_edge() {
        // Edges {1,4} and faces around the full triangle: {1,4} is free below
        // nothing, the only free faces sit under the 2-simplex.
        let k = Complex::closure(&[vec![1, 2, 3], vec![1, 4]]).unwrap();
        let pairs = k.free_pairs();
        assert_eq!(
            pairs,
            vec![
                (simplex![4], simplex![1, 4]),
                (simplex![1, 2], simplex![1, 2, 3]),
                (simplex![1, 3], simplex![1, 2, 3]),
                (simplex![2, 3], simplex![1, 2, 3]),
            ]
        );
    }

    #[test]
    fn the_void_complex_has_no_free_pairs() {
        assert!(Complex::void().free_pairs().is_empty());
    }

    #[test]
    fn collapse_removes_exactly_the_pair() {
        let mut k = full_triangle();
        k.collapse(&simplex![1, 2], &simplex![1, 2, 3]).unwrap();
        assert_eq!(k.face_counts(), vec![3, 2]);
        assert!(!k.contains(&simplex![1, 2]));
        assert!(!k.contains(&simplex![1, 2, 3]));
        assert!(k.is_well_formed());
    }

    #[test]
    fn collapse_of_a_non_free_face_is_illegal() {
        // Vertex {2} sits below two edges, so ({2},{2,3}) is not free.
        let mut k = full_triangle();
        let err = k.collapse(&simplex![2], &simplex![2, 3]).unwrap_err();
        match err {
            Error::IllegalMove { clause } => assert!(clause.contains("cofaces")),
            other => panic!("expected an illegal move, got {other}"),
        }
    }

    #[test]
    fn expand_is_inverse_to_collapse() {
        let mut k = full_triangle();
        let before = k.clone();
        k.collapse(&simplex![1, 3], &simplex![1, 2, 3]).unwrap();
        k.expand(&simplex![1, 3], &simplex![1, 2, 3]).unwrap();
        assert_eq!(k, before);
        assert!(k.is_well_formed());
    }

    #[test]
    fn expand_with_missing_boundary_is_illegal() {
        let mut k = Complex::closure(&[vec![1, 2]]).unwrap();
        // The boundary of {1,2,3} needs {2,3}, which is absent.
        let err = k.expand(&simplex![1, 3], &simplex![1, 2, 3]).unwrap_err();
        match err {
            Error::IllegalMove { clause } => assert!(clause.contains("missing")),
            other => panic!("expected an illegal move, got {other}"),
        }
    }

    #[test]
    fn fill_and_perforate_are_inverse() {
        let mut k = Complex::closure(&[vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap();
        let before = k.clone();
        k.fill(&simplex![1, 2, 3]).unwrap();
        assert_eq!(k.face_counts(), vec![3, 3, 1]);
        k.perforate(&simplex![1, 2, 3]).unwrap();
        assert_eq!(k, before);
        assert!(k.is_well_formed());
    }

    #[test]
    fn filling_a_vertex_into_the_void_complex_is_legal() {
        let mut k = Complex::void();
        k.fill(&simplex![5]).unwrap();
        assert_eq!(k.face_counts(), vec![1]);
    }

    #[test]
    fn perforating_a_non_facet_is_illegal() {
        let mut k = full_triangle();
        assert!(matches!(
            k.perforate(&simplex![1, 2]),
            Err(Error::IllegalMove { .. })
        ));
    }

    #[test]
    fn fill_of_a_present_face_is_illegal() {
        let mut k = full_triangle();
        assert!(matches!(
            k.fill(&simplex![1, 2]),
            Err(Error::IllegalMove { .. })
        ));
    }

    #[test]
    fn facets_of_a_mixed_complex() {
        let k = Complex::closure(&[vec![1, 2, 3], vec![3, 4]]).unwrap();
        let mut facets = k.facets();
        facets.sort();
        assert_eq!(facets, vec![simplex![1, 2, 3], simplex![3, 4]]);
    }
}
