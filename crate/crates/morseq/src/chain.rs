//! Chains over the two-element field.
//!
//! A `p`-chain is a finite set of `p`-simplices; addition is symmetric
//! difference, so every chain is its own inverse. Chains are identified with
//! their supports throughout.

use std::collections::BTreeSet;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::simplex::Simplex;

/// A chain with coefficients in the two-element field.
///
/// All members of a nonzero chain have the same dimension. The zero chain is
/// the empty set; it has no dimension of its own and acts as the additive
/// identity in every degree.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chain(BTreeSet<Simplex>);

impl Chain {
    /// The zero chain.
    #[must_use]
    pub fn zero() -> Self {
        Self(BTreeSet::new())
    }

    /// Builds a chain from an iterator of simplices with mod 2 semantics:
    /// a simplex listed an even number of times cancels out.
    ///
    /// Returns [`Error::HeterogeneousChain`] if two surviving members have
    /// different dimensions.
    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut set = BTreeSet::new();
        let mut dim: Option<usize> = None;
        for s in simplices {
            match dim {
                None => dim = Some(s.dim()),
                Some(d) if d != s.dim() => return Err(Error::HeterogeneousChain),
                Some(_) => {}
            }
            if !set.remove(&s) {
                set.insert(s);
            }
        }
        Ok(Self(set))
    }

    /// The dimension of the chain, or `None` for the zero chain.
    #[must_use]
    pub fn dimension(&self) -> Option<usize> {
        self.0.iter().next().map(Simplex::dim)
    }

    /// Whether this is the zero chain.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of simplices in the support.
    #[must_use]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Whether the support is empty. Equivalent to [`Chain::is_zero`].
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether `s` belongs to the support.
    #[must_use]
    pub fn contains(&self, s: &Simplex) -> bool {
        self.0.contains(s)
    }

    /// The members of the support, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.0.iter()
    }

    /// Adds a single simplex mod 2: inserts it, or removes it if present.
    ///
    /// # Panics
    ///
    /// Panics if the chain is nonzero and `s` has a different dimension.
    pub fn toggle(&mut self, s: Simplex) {
        assert!(
            self.0.is_empty() || self.dimension() == Some(s.dim()),
            "cannot add a {}-simplex to a chain of dimension {:?}",
            s.dim(),
            self.dimension()
        );
        if !self.0.remove(&s) {
            self.0.insert(s);
        }
    }
}

impl From<Simplex> for Chain {
    fn from(s: Simplex) -> Self {
        let mut set = BTreeSet::new();
        set.insert(s);
        Self(set)
    }
}

impl FromIterator<Simplex> for Chain {
    /// Collects with mod 2 semantics.
    ///
    /// # Panics
    ///
    /// Panics if two surviving members have different dimensions. Use
    /// [`Chain::from_simplices`] to handle that case as an error.
    fn from_iter<I: IntoIterator<Item = Simplex>>(iter: I) -> Self {
        let mut chain = Chain::zero();
        for s in iter {
            chain.toggle(s);
        }
        chain
    }
}

impl AddAssign<Chain> for Chain {
    /// Symmetric difference of the supports.
    ///
    /// # Panics
    ///
    /// Panics if both chains are nonzero with different dimensions.
    fn add_assign(&mut self, rhs: Chain) {
        if let (Some(a), Some(b)) = (self.dimension(), rhs.dimension()) {
            assert!(a == b, "cannot add a {b}-chain to a {a}-chain");
        }
        for s in rhs.0 {
            if !self.0.remove(&s) {
                self.0.insert(s);
            }
        }
    }
}

impl AddAssign<&Chain> for Chain {
    fn add_assign(&mut self, rhs: &Chain) {
        *self += rhs.clone();
    }
}

impl Add for Chain {
    type Output = Chain;

    fn add(mut self, rhs: Chain) -> Chain {
        self += rhs;
        self
    }
}

impl Add<&Chain> for Chain {
    type Output = Chain;

    fn add(mut self, rhs: &Chain) -> Chain {
        self += rhs;
        self
    }
}

impl Sum for Chain {
    fn sum<I: Iterator<Item = Chain>>(iter: I) -> Chain {
        iter.fold(Chain::zero(), Add::add)
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Serialize for Chain {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter())
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let simplices = Vec::<Simplex>::deserialize(deserializer)?;
        Chain::from_simplices(simplices).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex;

    #[test]
    fn duplicates_cancel_mod_two() {
        let c = Chain::from_simplices([simplex![1, 2], simplex![2, 3], simplex![1, 2]]).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.contains(&simplex![2, 3]));
    }

    #[test]
    fn mixed_dimensions_are_rejected() {
        assert!(matches!(
            Chain::from_simplices([simplex![1], simplex![1, 2]]),
            Err(Error::HeterogeneousChain)
        ));
    }

    #[test]
    fn addition_is_symmetric_difference() {
        let a: Chain = [simplex![1, 2], simplex![2, 3]].into_iter().collect();
        let b: Chain = [simplex![2, 3], simplex![3, 4]].into_iter().collect();
        let sum = a + b;
        assert_eq!(
            sum,
            [simplex![1, 2], simplex![3, 4]].into_iter().collect(),
            "the shared member must cancel"
        );
    }

    #[test]
    fn every_chain_is_its_own_inverse() {
        let c: Chain = [simplex![1, 2], simplex![1, 3]].into_iter().collect();
        assert!((c.clone() + c).is_zero());
    }

    #[test]
    fn zero_is_neutral_in_every_degree() {
        let c: Chain = [simplex![1, 2, 3]].into_iter().collect();
        assert_eq!(c.clone() + Chain::zero(), c);
        assert_eq!(Chain::zero().dimension(), None);
    }

    #[test]
    #[should_panic(expected = "cannot add")]
    fn adding_chains_of_different_dimensions_panics() {
        let a: Chain = [simplex![1]].into_iter().collect();
        let b: Chain = [simplex![1, 2]].into_iter().collect();
        let _ = a + b;
    }

    #[test]
    fn display_lists_members_in_order() {
        let c: Chain = [simplex![2, 3], simplex![1, 2]].into_iter().collect();
        assert_eq!(c.to_string(), "{1,2} + {2,3}");
        assert_eq!(Chain::zero().to_string(), "0");
    }

    #[test]
    fn serde_round_trip_preserves_the_chain() {
        let c: Chain = [simplex![1, 2], simplex![1, 3]].into_iter().collect();
        let json = serde_json::to_string(&c).unwrap();
        let back: Chain = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
