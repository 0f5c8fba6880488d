//! Mod 2 homology of presented chain complexes.
//!
//! A chain complex is presented by a basis of simplices in each degree and
//! one boundary matrix per degree. All linear algebra is over the
//! two-element field, with matrices stored column-major as packed 64-bit
//! words.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::chain::Chain;
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::simplex::Simplex;

/// A matrix over the two-element field, stored as packed columns.
#[derive(Debug, Clone)]
pub(crate) struct BitMatrix {
    rows: usize,
    cols: Vec<Vec<u64>>,
}

fn word(row: usize) -> (usize, u64) {
    (row / 64, 1_u64 << (row % 64))
}

impl BitMatrix {
    pub(crate) fn new(rows: usize, ncols: usize) -> Self {
        let words = rows.div_ceil(64);
        Self {
            rows,
            cols: vec![vec![0; words]; ncols],
        }
    }

    pub(crate) fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub(crate) fn set(&mut self, row: usize, col: usize) {
        let (w, bit) = word(row);
        self.cols[col][w] |= bit;
    }

    pub(crate) fn get(&self, row: usize, col: usize) -> bool {
        let (w, bit) = word(row);
        self.cols[col][w] & bit != 0
    }

    /// The transposed matrix.
    pub(crate) fn transposed(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.ncols(), self.rows);
        for c in 0..self.ncols() {
            for r in 0..self.rows {
                if self.get(r, c) {
                    t.set(c, r);
                }
            }
        }
        t
    }

    /// Multiplies the matrix by a column vector.
    pub(crate) fn apply(&self, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0_u64; self.rows.div_ceil(64)];
        for (c, col) in self.cols.iter().enumerate() {
            let (w, bit) = word(c);
            if v[w] & bit != 0 {
                xor_into(&mut out, col);
            }
        }
        out
    }

    /// Column echelon form, reusable for rank and span-membership queries.
    pub(crate) fn echelon(&self) -> Echelon {
        let mut ech = Echelon {
            rows: self.rows,
            pivots: HashMap::new(),
        };
        for col in &self.cols {
            ech.absorb(col.clone());
        }
        ech
    }
}

/// Reduced columns of a matrix, keyed by pivot row (the lowest set row
/// index). The number of pivots is the rank; a vector lies in the column
/// span exactly when it reduces to zero.
#[derive(Debug)]
pub(crate) struct Echelon {
    rows: usize,
    pivots: HashMap<usize, Vec<u64>>,
}

impl Echelon {
    /// Reduces `col` against the stored columns and keeps it if nonzero.
    fn absorb(&mut self, mut col: Vec<u64>) {
        while let Some(p) = lowest_set_row(&col) {
            match self.pivots.get(&p) {
                Some(other) => xor_into(&mut col, other),
                None => {
                    self.pivots.insert(p, col);
                    return;
                }
            }
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Whether `v` lies in the span of the absorbed columns.
    pub(crate) fn contains(&self, v: &[u64]) -> bool {
        debug_assert_eq!(v.len(), self.rows.div_ceil(64));
        let mut v = v.to_vec();
        while let Some(p) = lowest_set_row(&v) {
            match self.pivots.get(&p) {
                Some(other) => xor_into(&mut v, other),
                None => return false,
            }
        }
        true
    }
}

fn lowest_set_row(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// A chain complex presented by simplex bases and boundary matrices, with
/// mod 2 homology queries.
///
/// Degree `p` has basis `basis(p)`; the boundary matrix of degree `p` maps
/// degree `p` to degree `p - 1`, and the matrix of degree zero is the zero
/// map. Ranks are computed once and cached.
#[derive(Debug)]
pub struct PresentedChainComplex {
    bases: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    matrices: Vec<BitMatrix>,
    ranks: OnceLock<Vec<usize>>,
    coranks: OnceLock<Vec<usize>>,
    echelons: OnceLock<Vec<Echelon>>,
}

impl PresentedChainComplex {
    /// Presents the chain complex with the given bases, reading each
    /// basis element's boundary from `boundary`.
    ///
    /// The basis of degree `p` is sorted lexicographically. Returns
    /// [`Error::NotAFace`] if a boundary mentions a simplex missing from the
    /// basis below, [`Error::DegreeMismatch`] if a boundary has the wrong
    /// dimension, and [`Error::NotAChainComplex`] if the boundary of a
    /// boundary is nonzero somewhere.
    pub fn from_boundaries(
        mut bases: Vec<Vec<Simplex>>,
        boundary: impl Fn(&Simplex) -> Chain,
    ) -> Result<Self> {
        while bases.last().is_some_and(Vec::is_empty) {
            bases.pop();
        }
        for basis in &mut bases {
            basis.sort();
            basis.dedup();
        }
        let index: Vec<HashMap<Simplex, usize>> = bases
            .iter()
            .map(|basis| {
                basis
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect()
            })
            .collect();
        let mut matrices = Vec::with_capacity(bases.len());
        for (p, basis) in bases.iter().enumerate() {
            let rows = if p == 0 { 0 } else { bases[p - 1].len() };
            let mut m = BitMatrix::new(rows, basis.len());
            for (j, s) in basis.iter().enumerate() {
                let b = boundary(s);
                if p == 0 {
                    if !b.is_zero() {
                        return Err(Error::DegreeMismatch {
                            expected: 0,
                            found: b.dimension().unwrap_or(0),
                        });
                    }
                    continue;
                }
                if let Some(d) = b.dimension() {
                    if d != p - 1 {
                        return Err(Error::DegreeMismatch {
                            expected: p - 1,
                            found: d,
                        });
                    }
                }
                for t in b.iter() {
                    let i = index[p - 1]
                        .get(t)
                        .ok_or_else(|| Error::NotAFace(t.to_string()))?;
                    m.set(*i, j);
                }
            }
            matrices.push(m);
        }
        let presented = Self {
            bases,
            index,
            matrices,
            ranks: OnceLock::new(),
            coranks: OnceLock::new(),
            echelons: OnceLock::new(),
        };
        for p in 2..presented.degree_count() {
            for j in 0..presented.bases[p].len() {
                let col = presented.column(p, j);
                let once = presented.matrices[p].apply(&col);
                let twice = presented.matrices[p - 1].apply(&once);
                if twice.iter().any(|w| *w != 0) {
                    return Err(Error::NotAChainComplex { degree: p });
                }
            }
        }
        Ok(presented)
    }

    /// Presents the full chain complex of a simplicial complex.
    #[must_use]
    pub fn of_complex(k: &Complex) -> Self {
        let bases: Vec<Vec<Simplex>> = (0..=k.dim().map_or(0, |d| d))
            .map(|p| k.faces_of_dim(p).cloned().collect())
            .collect();
        Self::from_boundaries(bases, |s| s.facets().collect())
            .expect("the boundary of a boundary vanishes in a simplicial complex")
    }

    /// Number of presented degrees (one more than the top degree), zero for
    /// the empty presentation.
    #[must_use]
    pub fn degree_count(&self) -> usize {
        self.bases.len()
    }

    /// The basis of degree `p`, sorted lexicographically.
    #[must_use]
    pub fn basis(&self, p: usize) -> &[Simplex] {
        self.bases.get(p).map_or(&[], Vec::as_slice)
    }

    fn ranks(&self) -> &[usize] {
        self.ranks.get_or_init(|| {
            self.matrices.iter().map(|m| m.echelon().rank()).collect()
        })
    }

    fn coranks(&self) -> &[usize] {
        self.coranks.get_or_init(|| {
            self.matrices
                .iter()
                .map(|m| m.transposed().echelon().rank())
                .collect()
        })
    }

    fn echelons(&self) -> &[Echelon] {
        self.echelons
            .get_or_init(|| self.matrices.iter().map(BitMatrix::echelon).collect())
    }

    /// The Betti number of degree `p`: cycles minus boundaries.
    #[must_use]
    pub fn betti(&self, p: usize) -> usize {
        if p >= self.degree_count() {
            return 0;
        }
        let cycles = self.bases[p].len() - self.ranks()[p];
        let boundaries = self
            .ranks()
            .get(p + 1)
            .copied()
            .unwrap_or(0);
        cycles - boundaries
    }

    /// The Betti number of the cochain complex in degree `p`, computed from
    /// independently reduced transposed matrices.
    ///
    /// Over the two-element field this agrees with [`Self::betti`]; the two
    /// computations share no reduction work, so the agreement is a real
    /// cross-check.
    #[must_use]
    pub fn cobetti(&self, p: usize) -> usize {
        if p >= self.degree_count() {
            return 0;
        }
        let cocycles = self.bases[p].len()
            - self.coranks().get(p + 1).copied().unwrap_or(0);
        let coboundaries = self.coranks()[p];
        cocycles - coboundaries
    }

    /// All Betti numbers, degree zero through the top degree.
    #[must_use]
    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..self.degree_count()).map(|p| self.betti(p)).collect()
    }

    /// Packs a chain of degree `p` into a coordinate vector.
    ///
    /// Returns [`Error::DegreeMismatch`] if the chain is nonzero of a
    /// different dimension, and [`Error::NotAFace`] if a member is missing
    /// from the basis.
    fn vector(&self, p: usize, c: &Chain) -> Result<Vec<u64>> {
        if let Some(d) = c.dimension() {
            if d != p {
                return Err(Error::DegreeMismatch {
                    expected: p,
                    found: d,
                });
            }
        }
        let n = self.basis(p).len();
        let mut v = vec![0_u64; n.div_ceil(64)];
        for s in c.iter() {
            let i = self
                .index
                .get(p)
                .and_then(|ix| ix.get(s))
                .ok_or_else(|| Error::NotAFace(s.to_string()))?;
            let (w, bit) = word(*i);
            v[w] |= bit;
        }
        Ok(v)
    }

    /// Whether a chain of degree `p` is a cycle.
    pub fn is_cycle(&self, p: usize, c: &Chain) -> Result<bool> {
        if p >= self.degree_count() {
            return if c.is_zero() {
                Ok(true)
            } else {
                Err(Error::NotAFace(c.iter().next().unwrap().to_string()))
            };
        }
        let v = self.vector(p, c)?;
        Ok(self.matrices[p].apply(&v).iter().all(|w| *w == 0))
    }

    /// Whether a chain of degree `p` is the boundary of a chain of degree
    /// `p + 1`.
    pub fn is_boundary(&self, p: usize, c: &Chain) -> Result<bool> {
        if p >= self.degree_count() {
            return if c.is_zero() {
                Ok(true)
            } else {
                Err(Error::NotAFace(c.iter().next().unwrap().to_string()))
            };
        }
        let v = self.vector(p, c)?;
        if p + 1 >= self.degree_count() {
            return Ok(v.iter().all(|w| *w == 0));
        }
        Ok(self.echelons()[p + 1].contains(&v))
    }

    /// Whether two chains of degree `p` differ by a boundary.
    pub fn homologous(&self, p: usize, c: &Chain, c2: &Chain) -> Result<bool> {
        for chain in [c, c2] {
            if let Some(d) = chain.dimension() {
                if d != p {
                    return Err(Error::DegreeMismatch {
                        expected: p,
                        found: d,
                    });
                }
            }
        }
        self.is_boundary(p, &(c.clone() + c2))
    }

    /// Applies the boundary matrix of degree `p` to a chain.
    pub fn boundary_of(&self, p: usize, c: &Chain) -> Result<Chain> {
        if p >= self.degree_count() {
            return if c.is_zero() {
                Ok(Chain::zero())
            } else {
                Err(Error::NotAFace(c.iter().next().unwrap().to_string()))
            };
        }
        let v = self.vector(p, c)?;
        if p == 0 {
            return Ok(Chain::zero());
        }
        let image = self.matrices[p].apply(&v);
        Ok(self
            .bases[p - 1]
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let (w, bit) = word(*i);
                image[w] & bit != 0
            })
            .map(|(_, s)| s.clone())
            .collect())
    }

    fn column(&self, p: usize, j: usize) -> Vec<u64> {
        let n = self.basis(p).len();
        let mut v = vec![0_u64; n.div_ceil(64)];
        let (w, bit) = word(j);
        v[w] |= bit;
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex;

    fn circle() -> Complex {
        Complex::closure(&[vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap()
    }

    #[test]
    fn betti_numbers_of_a_point() {
        let k = Complex::closure(&[vec![1]]).unwrap();
        let h = PresentedChainComplex::of_complex(&k);
        assert_eq!(h.betti_numbers(), vec![1]);
    }

    #[test]
    fn betti_numbers_of_a_circle() {
        let h = PresentedChainComplex::of_complex(&circle());
        assert_eq!(h.betti_numbers(), vec![1, 1]);
    }

    #[test]
    fn betti_numbers_of_a_full_triangle() {
        let k = Complex::closure(&[vec![1, 2, 3]]).unwrap();
        let h = PresentedChainComplex::of_complex(&k);
        assert_eq!(h.betti_numbers(), vec![1, 0, 0]);
    }

    #[test]
    fn betti_numbers_of_two_components() {
        let k = Complex::closure(&[vec![1, 2], vec![3, 4]]).unwrap();
        let h = PresentedChainComplex::of_complex(&k);
        assert_eq!(h.betti(0), 2);
    }

    #[test]
    fn cobetti_agrees_with_betti_on_a_sphere() {
        let k = Complex::closure(&[
            vec![1, 2, 3],
            vec![1, 2, 4],
            vec![1, 3, 4],
            vec![2, 3, 4],
        ])
        .unwrap();
        let h = PresentedChainComplex::of_complex(&k);
        assert_eq!(h.betti_numbers(), vec![1, 0, 1]);
        for p in 0..3 {
            assert_eq!(h.betti(p), h.cobetti(p), "degree {p}");
        }
    }

    #[test]
    fn the_circle_boundary_is_a_cycle_but_not_a_boundary() {
        let h = PresentedChainComplex::of_complex(&circle());
        let z: Chain = [simplex![1, 2], simplex![2, 3], simplex![1, 3]]
            .into_iter()
            .collect();
        assert!(h.is_cycle(1, &z).unwrap());
        assert!(!h.is_boundary(1, &z).unwrap());
    }

    #[test]
    fn a_filled_triangle_boundary_is_a_boundary() {
        let k = Complex::closure(&[vec![1, 2, 3]]).unwrap();
        let h = PresentedChainComplex::of_complex(&k);
        let z: Chain = [simplex![1, 2], simplex![2, 3], simplex![1, 3]]
            .into_iter()
            .collect();
        assert!(h.is_cycle(1, &z).unwrap());
        assert!(h.is_boundary(1, &z).unwrap());
    }

    #[test]
    fn a_non_cycle_is_detected() {
        let h = PresentedChainComplex::of_complex(&circle());
        let c: Chain = [simplex![1, 2]].into_iter().collect();
        assert!(!h.is_cycle(1, &c).unwrap());
    }

    #[test]
    fn homologous_vertices_in_a_connected_complex() {
        let h = PresentedChainComplex::of_complex(&circle());
        let a: Chain = [simplex![1]].into_iter().collect();
        let b: Chain = [simplex![3]].into_iter().collect();
        assert!(h.homologous(0, &a, &b).unwrap());
    }

    #[test]
    fn chains_in_distinct_components_are_not_homologous() {
        let k = Complex::closure(&[vec![1, 2], vec![3, 4]]).unwrap();
        let h = PresentedChainComplex::of_complex(&k);
        let a: Chain = [simplex![1]].into_iter().collect();
        let b: Chain = [simplex![4]].into_iter().collect();
        assert!(!h.homologous(0, &a, &b).unwrap());
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let h = PresentedChainComplex::of_complex(&circle());
        let c: Chain = [simplex![1, 2]].into_iter().collect();
        assert!(matches!(
            h.is_cycle(0, &c),
            Err(Error::DegreeMismatch {
                expected: 0,
                found: 1
            })
        ));
    }

    #[test]
    fn a_chain_outside_the_basis_is_reported() {
        let h = PresentedChainComplex::of_complex(&circle());
        let c: Chain = [simplex![4, 5]].into_iter().collect();
        assert!(matches!(h.is_cycle(1, &c), Err(Error::NotAFace(_))));
    }

    #[test]
    fn a_broken_boundary_is_rejected() {
        // Declare the boundary of an edge to be a single vertex: the
        // composite boundary of {1,2,3}'s faces then fails to vanish.
        let bases = vec![
            vec![simplex![1], simplex![2], simplex![3]],
            vec![simplex![1, 2], simplex![1, 3], simplex![2, 3]],
            vec![simplex![1, 2, 3]],
        ];
        let result = PresentedChainComplex::from_boundaries(bases, |s| {
            if s.dim() == 1 {
                [Simplex::vertex(s.vertices()[0])].into_iter().collect()
            } else {
                s.facets().collect()
            }
        });
        assert!(matches!(result, Err(Error::NotAChainComplex { degree: 2 })));
    }

    #[test]
    fn boundary_of_applies_the_matrix() {
        let h = PresentedChainComplex::of_complex(&circle());
        let c: Chain = [simplex![1, 2], simplex![2, 3]].into_iter().collect();
        let b = h.boundary_of(1, &c).unwrap();
        assert_eq!(b, [simplex![1], simplex![3]].into_iter().collect());
    }

    #[test]
    fn rank_of_a_small_bit_matrix() {
        let mut m = BitMatrix::new(3, 3);
        // Columns: e1+e2, e2+e3, e1+e3; the third is the sum of the first
        // two, so the rank is two.
        m.set(0, 0);
        m.set(1, 0);
        m.set(1, 1);
        m.set(2, 1);
        m.set(0, 2);
        m.set(2, 2);
        assert_eq!(m.echelon().rank(), 2);
        assert_eq!(m.transposed().echelon().rank(), 2);
    }

    #[test]
    fn echelon_span_membership() {
        let mut m = BitMatrix::new(3, 2);
        m.set(0, 0);
        m.set(1, 0);
        m.set(1, 1);
        m.set(2, 1);
        let ech = m.echelon();
        assert!(ech.contains(&[0b011]));
        assert!(ech.contains(&[0b101]), "the sum of the two columns");
        assert!(!ech.contains(&[0b001]));
    }
}
