//! Simplices: finite nonempty sets of vertices.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A simplex, stored as a strictly increasing list of vertex identifiers.
///
/// A simplex with `n + 1` vertices has dimension `n`; vertices themselves are
/// simplices of dimension zero. The empty set is not a simplex.
///
/// The derived order is lexicographic on the sorted vertex lists, so
/// `{1} < {1,2} < {2}`. This order is used everywhere a deterministic
/// traversal or tie-break is needed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Builds a simplex from a list of vertices, sorting and deduplicating.
    ///
    /// # Panics
    ///
    /// Panics if the list is empty. Use [`Simplex::try_new`] to handle that
    /// case as an error.
    #[must_use]
    pub fn new(vertices: impl Into<Vec<u32>>) -> Self {
        Self::try_new(vertices).expect("a simplex needs at least one vertex")
    }

    /// Builds a simplex from a list of vertices, sorting and deduplicating.
    ///
    /// Returns [`Error::InvalidFacet`] if the list is empty.
    pub fn try_new(vertices: impl Into<Vec<u32>>) -> Result<Self> {
        let mut vs: Vec<u32> = vertices.into();
        if vs.is_empty() {
            return Err(Error::InvalidFacet(
                "a simplex needs at least one vertex".to_owned(),
            ));
        }
        vs.sort_unstable();
        vs.dedup();
        Ok(Self(vs))
    }

    /// The simplex consisting of a single vertex.
    #[must_use]
    pub fn vertex(v: u32) -> Self {
        Self(vec![v])
    }

    /// The vertices of the simplex, in strictly increasing order.
    #[must_use]
    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    /// The dimension: one less than the number of vertices.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Whether `v` is a vertex of this simplex.
    #[must_use]
    pub fn contains_vertex(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Whether this simplex is a face of `other` (equality included).
    #[must_use]
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    /// The faces of codimension one, obtained by dropping each vertex in
    /// increasing order.
    ///
    /// A vertex has no such face: the empty set is not a simplex.
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (0..n).filter(move |_| n > 1).map(move |skip| {
            let mut vs = Vec::with_capacity(n - 1);
            vs.extend(self.0.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v));
            Simplex(vs)
        })
    }

    /// All proper faces (every nonempty subset except the simplex itself).
    #[must_use]
    pub fn proper_faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        let mut out = Vec::new();
        for mask in 1_u32..((1 << n) - 1) {
            let vs: Vec<u32> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.0[i])
                .collect();
            out.push(Simplex(vs));
        }
        out
    }

    /// The simplex obtained by adjoining vertex `v`, or `None` if `v` is
    /// already a vertex.
    #[must_use]
    pub fn with_vertex(&self, v: u32) -> Option<Simplex> {
        match self.0.binary_search(&v) {
            Ok(_) => None,
            Err(pos) => {
                let mut vs = self.0.clone();
                vs.insert(pos, v);
                Some(Simplex(vs))
            }
        }
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Simplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Simplex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let vs = Vec::<u32>::deserialize(deserializer)?;
        Simplex::try_new(vs).map_err(|e| D::Error::custom(e.to_string()))
    }
}
