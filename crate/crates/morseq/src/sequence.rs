//! Morse sequences: building a complex by expansions and fillings.
//!
//! A Morse sequence on a complex `K` is a way to build `K` from the void
//! complex by two kinds of elementary moves:
//!
//! * a *filling* adds one facet whose whole boundary is already present;
//!   the added face is *critical*;
//! * an *expansion* adds a free pair `(sigma, tau)`; the added faces are
//!   *regular*, `sigma` is the lower face of the pair and `tau` the upper.
//!
//! The criticals, lower faces, and upper faces of a sequence partition the
//! complex. Two sequences on the same complex are *equivalent* when they
//! have the same criticals and the same regular pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::simplex::Simplex;

/// One step of a Morse sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MorseItem {
    /// Fill a facet, making it critical.
    Fill(Simplex),
    /// Expand a free pair (lower face, upper face), making both regular.
    Expand(Simplex, Simplex),
}

impl MorseItem {
    /// The dimension of the step: the dimension of the filled face, or of
    /// the upper face of the expanded pair.
    #[must_use]
    pub fn dim(&self) -> usize {
        match self {
            MorseItem::Fill(nu) => nu.dim(),
            MorseItem::Expand(_, tau) => tau.dim(),
        }
    }

    /// The faces added by this step, lower face first.
    pub fn faces(&self) -> impl Iterator<Item = &Simplex> {
        let (a, b) = match self {
            MorseItem::Fill(nu) => (nu, None),
            MorseItem::Expand(sigma, tau) => (sigma, Some(tau)),
        };
        std::iter::once(a).chain(b)
    }
}

impl fmt::Display for MorseItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorseItem::Fill(nu) => write!(f, "fill {nu}"),
            MorseItem::Expand(sigma, tau) => write!(f, "expand ({sigma},{tau})"),
        }
    }
}

/// The partition of a complex induced by a Morse sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    /// Faces added by fillings.
    pub critical: BTreeSet<Simplex>,
    /// Lower faces of expanded pairs.
    pub lower: BTreeSet<Simplex>,
    /// Upper faces of expanded pairs.
    pub upper: BTreeSet<Simplex>,
}

/// The first illegal step found when replaying a list of items.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceFailure {
    /// Index of the offending item (the length of the list when the replay
    /// succeeded but built a different complex than the target).
    pub index: usize,
    /// The violated condition.
    pub clause: String,
}

/// The outcome of replaying a list of items against a target complex.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    /// Whether the items form a Morse sequence on the target.
    pub ok: bool,
    /// The first failure, when `ok` is false.
    pub failure: Option<SequenceFailure>,
    /// The induced partition, when `ok` is true.
    pub partition: Option<Partition>,
}

/// A validated Morse sequence on a complex.
///
/// Construction replays the items from the void complex, so a value of this
/// type always describes a legal sequence that builds its target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseSequence {
    target: Complex,
    items: Vec<MorseItem>,
}

/// A discrete vector field: a set of pairs `(sigma, tau)` where `sigma` is a
/// face of `tau` of codimension one and no face belongs to two pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    up: BTreeMap<Simplex, Simplex>,
    down: BTreeMap<Simplex, Simplex>,
}

/// Tie-breaking policy for the construction schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tiebreak {
    /// Always pick the candidate that is least in the deterministic order
    /// (dimension first, then lexicographic).
    Lex,
    /// Pick uniformly among the candidates with a seeded generator; the same
    /// seed always reproduces the same sequence.
    Seeded(u64),
}

/// Replays `items` from the void complex and checks the result against
/// `target`.
#[must_use]
pub fn validate_items(target: &Complex, items: &[MorseItem]) -> Diagnostics {
    let mut cur = Complex::void();
    let mut partition = Partition {
        critical: BTreeSet::new(),
        lower: BTreeSet::new(),
        upper: BTreeSet::new(),
    };
    for (index, item) in items.iter().enumerate() {
        let step = match item {
            MorseItem::Fill(nu) => {
                partition.critical.insert(nu.clone());
                cur.fill(nu)
            }
            MorseItem::Expand(sigma, tau) => {
                partition.lower.insert(sigma.clone());
                partition.upper.insert(tau.clone());
                cur.expand(sigma, tau)
            }
        };
        if let Err(e) = step {
            let clause = match e {
                Error::IllegalMove { clause } => clause,
                other => other.to_string(),
            };
            return Diagnostics {
                ok: false,
                failure: Some(SequenceFailure { index, clause }),
                partition: None,
            };
        }
        let in_target = match item {
            MorseItem::Fill(nu) => target.contains(nu),
            MorseItem::Expand(sigma, tau) => target.contains(sigma) && target.contains(tau),
        };
        if !in_target {
            return Diagnostics {
                ok: false,
                failure: Some(SequenceFailure {
                    index,
                    clause: format!("{item} adds a face outside the target complex"),
                }),
                partition: None,
            };
        }
    }
    if cur != *target {
        return Diagnostics {
            ok: false,
            failure: Some(SequenceFailure {
                index: items.len(),
                clause: "the replay does not build the target complex".to_owned(),
            }),
            partition: None,
        };
    }
    Diagnostics {
        ok: true,
        failure: None,
        partition: Some(partition),
    }
}

impl MorseSequence {
    /// Validates `items` against `target` and wraps them.
    ///
    /// Returns [`Error::InvalidSequence`] when the replay fails or builds a
    /// different complex.
    pub fn new(target: Complex, items: Vec<MorseItem>) -> Result<Self> {
        let diag = validate_items(&target, &items);
        match diag.failure {
            None => Ok(Self { target, items }),
            Some(f) => Err(Error::InvalidSequence {
                reason: format!("item {}: {}", f.index, f.clause),
            }),
        }
    }

    /// Replays `items` from the void complex and takes the result as the
    /// target.
    pub fn from_items(items: Vec<MorseItem>) -> Result<Self> {
        let mut cur = Complex::void();
        for (index, item) in items.iter().enumerate() {
            let step = match item {
                MorseItem::Fill(nu) => cur.fill(nu),
                MorseItem::Expand(sigma, tau) => cur.expand(sigma, tau),
            };
            if let Err(e) = step {
                let clause = match e {
                    Error::IllegalMove { clause } => clause,
                    other => other.to_string(),
                };
                return Err(Error::InvalidSequence {
                    reason: format!("item {index}: {clause}"),
                });
            }
        }
        Ok(Self {
            target: cur,
            items,
        })
    }

    /// The complex built by the sequence.
    #[must_use]
    pub fn target(&self) -> &Complex {
        &self.target
    }

    /// The items, in order.
    #[must_use]
    pub fn items(&self) -> &[MorseItem] {
        &self.items
    }

    /// Number of items (fillings plus expansions).
    #[must_use]
    pub fn len(&self) -> usize {
        self.items.len()
    }

    /// Whether the sequence has no items (it then builds the void complex).
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The partition of the target into criticals, lower faces, and upper
    /// faces.
    #[must_use]
    pub fn partition(&self) -> Partition {
        let mut partition = Partition {
            critical: BTreeSet::new(),
            lower: BTreeSet::new(),
            upper: BTreeSet::new(),
        };
        for item in &self.items {
            match item {
                MorseItem::Fill(nu) => {
                    partition.critical.insert(nu.clone());
                }
                MorseItem::Expand(sigma, tau) => {
                    partition.lower.insert(sigma.clone());
                    partition.upper.insert(tau.clone());
                }
            }
        }
        partition
    }

    /// The critical faces, in lexicographic order within each dimension.
    #[must_use]
    pub fn critical_faces(&self) -> BTreeSet<Simplex> {
        self.partition().critical
    }

    /// Number of critical faces of each dimension, from zero up to the
    /// dimension of the target.
    #[must_use]
    pub fn critical_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.target.dim().map_or(0, |d| d + 1)];
        for item in &self.items {
            if let MorseItem::Fill(nu) = item {
                counts[nu.dim()] += 1;
            }
        }
        counts
    }

    /// The regular pairs, in sequence order.
    #[must_use]
    pub fn regular_pairs(&self) -> Vec<(Simplex, Simplex)> {
        self.items
            .iter()
            .filter_map(|item| match item {
                MorseItem::Expand(sigma, tau) => Some((sigma.clone(), tau.clone())),
                MorseItem::Fill(_) => None,
            })
            .collect()
    }

    /// The gradient vector field: the set of regular pairs.
    #[must_use]
    pub fn gradient_vector_field(&self) -> VectorField {
        VectorField::new(&self.target, self.regular_pairs())
            .expect("the regular pairs of a Morse sequence form a vector field")
    }

    /// The prefix complexes built by the sequence, from the void complex to
    /// the target (one more entry than there are items).
    #[must_use]
    pub fn prefixes(&self) -> Vec<Complex> {
        let mut out = Vec::with_capacity(self.items.len() + 1);
        let mut cur = Complex::void();
        out.push(cur.clone());
        for item in &self.items {
            match item {
                MorseItem::Fill(nu) => cur.fill(nu),
                MorseItem::Expand(sigma, tau) => cur.expand(sigma, tau),
            }
            .expect("a validated sequence replays without error");
            out.push(cur.clone());
        }
        out
    }

    /// Whether `other` is equivalent to this sequence: same target, same
    /// criticals, and same regular pairs.
    ///
    /// Returns [`Error::TargetMismatch`] when the targets differ.
    pub fn equivalent(&self, other: &MorseSequence) -> Result<bool> {
        if self.target != other.target {
            return Err(Error::TargetMismatch);
        }
        let mine = self.partition();
        let theirs = other.partition();
        Ok(mine.critical == theirs.critical
            && self.pair_map() == other.pair_map())
    }

    fn pair_map(&self) -> BTreeMap<Simplex, Simplex> {
        self.regular_pairs().into_iter().collect()
    }

    /// An equivalent arranged sequence: dimensions never decrease, and
    /// within each dimension all expansions precede all fillings.
    ///
    /// The result is obtained by adjacent swaps that never move an item past
    /// another item it depends on, so it is again a Morse sequence on the
    /// same target.
    #[must_use]
    pub fn arrange(&self) -> MorseSequence {
        fn key(item: &MorseItem) -> (usize, u8) {
            let kind = match item {
                MorseItem::Expand(..) => 0,
                MorseItem::Fill(_) => 1,
            };
            (item.dim(), kind)
        }
        let mut items = self.items.clone();
        // Bubble passes: stable sort by (dimension, expansions first).
        loop {
            let mut swapped = false;
            for i in 1..items.len() {
                if key(&items[i - 1]) > key(&items[i]) {
                    items.swap(i - 1, i);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        let arranged = MorseSequence::new(self.target.clone(), items)
            .expect("arranging preserves validity");
        debug_assert!(arranged
            .equivalent(self)
            .expect("same target"));
        arranged
    }

    /// Whether dimensions never decrease and, within each dimension, all
    /// expansions precede all fillings.
    #[must_use]
    pub fn is_arranged(&self) -> bool {
        self.items.windows(2).all(|w| {
            let d0 = w[0].dim();
            let d1 = w[1].dim();
            if d0 > d1 {
                return false;
            }
            d0 < d1
                || !(matches!(w[0], MorseItem::Fill(_))
                    && matches!(w[1], MorseItem::Expand(..)))
        })
    }

    /// The lower and upper skeletons attached to the sequence.
    ///
    /// For each `p` from zero to the dimension of the target plus one, the
    /// lower skeleton holds the upper faces of dimension at most `p` and the
    /// criticals and lower faces of dimension at most `p - 1`; the upper
    /// skeleton holds the criticals and upper faces of dimension at most `p`
    /// and the lower faces of dimension at most `p - 1`. Both families are
    /// filtrations of the target, they only depend on the sequence up to
    /// equivalence, and consecutive members differ by the critical faces of
    /// dimension `p` and by the regular pairs of dimension `p + 1`.
    #[must_use]
    pub fn skeletons(&self) -> SkeletonSequence {
        let partition = self.partition();
        let top = self.target.dim().map_or(0, |d| d + 1);
        let mut lower = Vec::with_capacity(top + 1);
        let mut upper = Vec::with_capacity(top + 1);
        for p in 0..=top {
            let lower_faces = self.target.faces().filter(|s| {
                (partition.upper.contains(s) && s.dim() <= p)
                    || (!partition.upper.contains(s) && s.dim() < p)
            });
            let upper_faces = self.target.faces().filter(|s| {
                (!partition.lower.contains(s) && s.dim() <= p)
                    || (partition.lower.contains(s) && s.dim() < p)
            });
            lower.push(subcomplex_of(lower_faces.cloned()));
            upper.push(subcomplex_of(upper_faces.cloned()));
        }
        SkeletonSequence { lower, upper }
    }

    /// For each `p`, a certified collapse of the lower skeleton of rank
    /// `p + 1` onto the upper skeleton of rank `p`.
    ///
    /// Each witness lists free pairs that are collapsed in order, starting
    /// from the lower skeleton and ending exactly at the upper skeleton; the
    /// pairs are the expansions of dimension `p + 1` of an arranged
    /// equivalent sequence, replayed backwards. Every collapse is re-checked
    /// by actually performing the moves.
    pub fn skeleton_collapses(&self) -> Result<Vec<CollapseWitness>> {
        let arranged = self.arrange();
        let skeletons = self.skeletons();
        let top = self.target.dim().map_or(0, |d| d + 1);
        let mut witnesses = Vec::new();
        for p in 0..top {
            let mut pairs: Vec<(Simplex, Simplex)> = arranged
                .items
                .iter()
                .filter_map(|item| match item {
                    MorseItem::Expand(sigma, tau) if tau.dim() == p + 1 => {
                        Some((sigma.clone(), tau.clone()))
                    }
                    _ => None,
                })
                .collect();
            pairs.reverse();
            let mut cur = skeletons.lower[p + 1].clone();
            for (sigma, tau) in &pairs {
                cur.collapse(sigma, tau)?;
            }
            if cur != skeletons.upper[p] {
                return Err(Error::InvalidSequence {
                    reason: format!(
                        "collapsing the rank {} lower skeleton missed the rank {p} upper skeleton",
                        p + 1
                    ),
                });
            }
            witnesses.push(CollapseWitness { p, pairs });
        }
        Ok(witnesses)
    }
}

/// Builds a complex from faces already known to be closed under taking
/// faces.
fn subcomplex_of(faces: impl IntoIterator<Item = Simplex>) -> Complex {
    let mut sorted: Vec<Simplex> = faces.into_iter().collect();
    sorted.sort_by_key(Simplex::dim);
    let mut k = Complex::void();
    for s in sorted {
        k.insert_face(s);
    }
    debug_assert!(k.is_well_formed(), "skeleton faces must be closed");
    k
}

/// The lower and upper skeletons of a Morse sequence, indexed by rank.
#[derive(Debug, Clone)]
pub struct SkeletonSequence {
    /// Lower skeletons; entry `p` is void for `p = 0`.
    pub lower: Vec<Complex>,
    /// Upper skeletons; the last entry is the whole target complex.
    pub upper: Vec<Complex>,
}

/// A certified collapse from the lower skeleton of rank `p + 1` onto the
/// upper skeleton of rank `p`.
#[derive(Debug, Clone)]
pub struct CollapseWitness {
    /// Rank of the upper skeleton reached.
    pub p: usize,
    /// Free pairs, in the order they are collapsed.
    pub pairs: Vec<(Simplex, Simplex)>,
}

impl VectorField {
    /// Validates a set of pairs as a discrete vector field on `k`.
    ///
    /// Returns [`Error::InvalidVectorField`] if a pair is not a codimension
    /// one incidence inside `k`, or if a face belongs to two pairs.
    pub fn new(
        k: &Complex,
        pairs: impl IntoIterator<Item = (Simplex, Simplex)>,
    ) -> Result<Self> {
        let mut up = BTreeMap::new();
        let mut down = BTreeMap::new();
        for (sigma, tau) in pairs {
            if !k.contains(&sigma) || !k.contains(&tau) {
                return Err(Error::InvalidVectorField {
                    reason: format!("pair ({sigma},{tau}) is not inside the complex"),
                });
            }
            if !(sigma.is_face_of(&tau) && sigma.dim() + 1 == tau.dim()) {
                return Err(Error::InvalidVectorField {
                    reason: format!(
                        "{sigma} is not a face of {tau} of codimension one"
                    ),
                });
            }
            for face in [&sigma, &tau] {
                if up.contains_key(face) || down.contains_key(face) {
                    return Err(Error::InvalidVectorField {
                        reason: format!("{face} belongs to two pairs"),
                    });
                }
            }
            up.insert(sigma.clone(), tau.clone());
            down.insert(tau, sigma);
        }
        Ok(Self { up, down })
    }

    /// The pairs, ordered by lower face.
    pub fn pairs(&self) -> impl Iterator<Item = (&Simplex, &Simplex)> {
        self.up.iter()
    }

    /// Number of pairs.
    #[must_use]
    pub fn len(&self) -> usize {
        self.up.len()
    }

    /// Whether the field has no pairs.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    /// The upper face paired with `sigma`, if `sigma` is a lower face.
    #[must_use]
    pub fn up(&self, sigma: &Simplex) -> Option<&Simplex> {
        self.up.get(sigma)
    }

    /// The lower face paired with `tau`, if `tau` is an upper face.
    #[must_use]
    pub fn down(&self, tau: &Simplex) -> Option<&Simplex> {
        self.down.get(tau)
    }

    /// Whether `s` belongs to some pair.
    #[must_use]
    pub fn covers(&self, s: &Simplex) -> bool {
        self.up.contains_key(s) || self.down.contains_key(s)
    }

    /// The faces of `k` that belong to no pair.
    #[must_use]
    pub fn criticals(&self, k: &Complex) -> Vec<Simplex> {
        k.faces().filter(|s| !self.covers(s)).cloned().collect()
    }
}

/// Builds a Morse sequence on `k` from the void complex upwards, expanding
/// whenever possible and filling only when no expansion is available.
///
/// Each step considers every legal move on the current prefix: expansion
/// candidates are pairs `(sigma, tau)` of absent faces with `sigma` the only
/// absent face of the boundary of `tau`; filling candidates are absent faces
/// whose whole boundary is present. The policy picks among candidates of
/// minimal dimension (lexicographically least for [`Tiebreak::Lex`],
/// uniformly at random for [`Tiebreak::Seeded`]).
#[must_use]
pub fn increasing_scheme(k: &Complex, tiebreak: Tiebreak) -> MorseSequence {
    let mut rng = seeded_rng(tiebreak);
    let mut cur = Complex::void();
    let mut items = Vec::new();
    let mut absent: BTreeSet<Simplex> = k.faces().cloned().collect();
    while !absent.is_empty() {
        let mut expansions: Vec<(Simplex, Simplex)> = Vec::new();
        for tau in &absent {
            if tau.dim() == 0 {
                continue;
            }
            let mut missing = tau.facets().filter(|f| !cur.contains(f));
            if let (Some(sigma), None) = (missing.next(), missing.next()) {
                expansions.push((sigma, tau.clone()));
            }
        }
        let item = if expansions.is_empty() {
            let fillings: Vec<&Simplex> = {
                let min_dim = absent
                    .iter()
                    .filter(|nu| nu.facets().all(|f| cur.contains(&f)))
                    .map(Simplex::dim)
                    .min()
                    .expect("a face of minimal dimension among the absent ones can be filled");
                absent
                    .iter()
                    .filter(|nu| {
                        nu.dim() == min_dim && nu.facets().all(|f| cur.contains(&f))
                    })
                    .collect()
            };
            let nu = match &mut rng {
                None => fillings[0],
                Some(rng) => fillings.choose(rng).expect("candidates are nonempty"),
            };
            MorseItem::Fill((*nu).clone())
        } else {
            expansions.sort_by(|(s1, t1), (s2, t2)| (t1.dim(), t1, s1).cmp(&(t2.dim(), t2, s2)));
            let min_dim = expansions[0].1.dim();
            let of_min: Vec<&(Simplex, Simplex)> = expansions
                .iter()
                .take_while(|(_, t)| t.dim() == min_dim)
                .collect();
            let (sigma, tau) = match &mut rng {
                None => of_min[0],
                Some(rng) => of_min.choose(rng).expect("candidates are nonempty"),
            };
            MorseItem::Expand(sigma.clone(), tau.clone())
        };
        for face in item.faces() {
            absent.remove(face);
        }
        match &item {
            MorseItem::Fill(nu) => cur.fill(nu),
            MorseItem::Expand(sigma, tau) => cur.expand(sigma, tau),
        }
        .expect("scheme candidates are legal moves");
        items.push(item);
    }
    MorseSequence {
        target: cur,
        items,
    }
}

/// Builds a Morse sequence on `k` from the whole complex downwards,
/// collapsing whenever possible and perforating only when no collapse is
/// available, then reversing the deconstruction.
///
/// Collapse candidates are the free pairs of the current complex;
/// perforation candidates are its facets. The policy picks among candidates
/// of minimal dimension, as in [`increasing_scheme`].
#[must_use]
pub fn decreasing_scheme(k: &Complex, tiebreak: Tiebreak) -> MorseSequence {
    let mut rng = seeded_rng(tiebreak);
    let mut cur = k.clone();
    let mut reversed = Vec::new();
    while !cur.is_void() {
        let pairs = cur.free_pairs();
        let item = if pairs.is_empty() {
            let mut facets = cur.facets();
            facets.sort_by_key(|nu| (nu.dim(), nu.clone()));
            let min_dim = facets[0].dim();
            let of_min: Vec<&Simplex> = facets
                .iter()
                .take_while(|nu| nu.dim() == min_dim)
                .collect();
            let nu = match &mut rng {
                None => of_min[0],
                Some(rng) => of_min.choose(rng).expect("candidates are nonempty"),
            };
            MorseItem::Fill((*nu).clone())
        } else {
            // Free pairs are already sorted by (dimension, upper, lower).
            let min_dim = pairs[0].1.dim();
            let of_min: Vec<&(Simplex, Simplex)> = pairs
                .iter()
                .take_while(|(_, t)| t.dim() == min_dim)
                .collect();
            let (sigma, tau) = match &mut rng {
                None => of_min[0],
                Some(rng) => of_min.choose(rng).expect("candidates are nonempty"),
            };
            MorseItem::Expand(sigma.clone(), tau.clone())
        };
        match &item {
            MorseItem::Fill(nu) => cur.perforate(nu),
            MorseItem::Expand(sigma, tau) => cur.collapse(sigma, tau),
        }
        .expect("scheme candidates are legal moves");
        reversed.push(item);
    }
    reversed.reverse();
    debug_assert!(
        validate_items(k, &reversed).ok,
        "a reversed deconstruction replays into the original complex"
    );
    MorseSequence {
        target: k.clone(),
        items: reversed,
    }
}

fn seeded_rng(tiebreak: Tiebreak) -> Option<ChaCha8Rng> {
    match tiebreak {
        Tiebreak::Lex => None,
        Tiebreak::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    }
}
