//! Bundled example complexes and sequences.
//!
//! Small, hand-checked inputs used throughout the test suite and handy for
//! experiments: a collapsible triangle, a triangulated sphere, the minimal
//! 7-vertex torus, an 8-vertex dunce hat (contractible but without a
//! single free pair), a wedge of two circles, and a disk on which two
//! gradient paths run in parallel.
//!
//! Every complex is parsed from its bundled facet list, and every stored
//! sequence is replayed against its target on load, so the fixtures cannot
//! drift from the formats they exercise.

use crate::complex::Complex;
use crate::io::{parse_complex, parse_sequence};
use crate::sequence::{MorseItem, MorseSequence};
use crate::simplex::Simplex;

fn bundled(name: &str, text: &str) -> Complex {
    parse_complex(text).unwrap_or_else(|e| panic!("bundled complex {name}: {e}"))
}

/// A full triangle: the closure of one 2-face. Collapsible.
#[must_use]
pub fn triangle() -> Complex {
    bundled("triangle", include_str!("../data/triangle.cplx"))
}

/// The boundary of a tetrahedron: a 2-sphere with Betti numbers 1, 0, 1.
#[must_use]
pub fn tetrahedron_boundary() -> Complex {
    bundled(
        "tetrahedron boundary",
        include_str!("../data/tetrahedron_boundary.cplx"),
    )
}

/// The minimal torus: 7 vertices, 21 edges, 14 triangles, Betti numbers
/// 1, 2, 1.
#[must_use]
pub fn torus() -> Complex {
    bundled("torus", include_str!("../data/torus.cplx"))
}

/// An 8-vertex dunce hat: 24 edges and 17 triangles, contractible (Betti
/// numbers 1, 0, 0) yet with no free pair, so no collapse can start.
#[must_use]
pub fn dunce_hat() -> Complex {
    bundled("dunce hat", include_str!("../data/dunce_hat.cplx"))
}

/// A wedge of two circles: one vertex shared by two independent loops.
#[must_use]
pub fn figure_eight() -> Complex {
    bundled("figure eight", include_str!("../data/figure_eight.cplx"))
}

/// A disk of four triangles on which two gradient paths run in parallel
/// between the edge 12 and the edge 45 under [`double_path_sequence`].
#[must_use]
pub fn double_path() -> Complex {
    bundled("double path", include_str!("../data/double_path.cplx"))
}

/// Every bundled complex with its name.
#[must_use]
pub fn all() -> Vec<(&'static str, Complex)> {
    vec![
        ("triangle", triangle()),
        ("tetrahedron boundary", tetrahedron_boundary()),
        ("torus", torus()),
        ("dunce hat", dunce_hat()),
        ("figure eight", figure_eight()),
        ("double path", double_path()),
    ]
}

fn expand(sigma: &[u32], tau: &[u32]) -> MorseItem {
    MorseItem::Expand(Simplex::new(sigma.to_vec()), Simplex::new(tau.to_vec()))
}

fn fill(nu: &[u32]) -> MorseItem {
    MorseItem::Fill(Simplex::new(nu.to_vec()))
}

/// The first of two inequivalent sequences on the triangle: it walks the
/// boundary from the vertex 1 through 2 and 3 before sweeping the 2-face
/// in from the edge 13.
///
/// Together with [`triangle_w_sequence`] it shows that sequences with the
/// same critical faces but different regular pairs can still share their
/// reference and coreference maps.
#[must_use]
pub fn triangle_v_sequence() -> MorseSequence {
    MorseSequence::new(
        triangle(),
        vec![
            fill(&[1]),
            expand(&[2], &[1, 2]),
            expand(&[3], &[2, 3]),
            expand(&[1, 3], &[1, 2, 3]),
        ],
    )
    .expect("the bundled sequence replays")
}

/// The second of the two inequivalent triangle sequences: it walks the
/// boundary the other way around and sweeps the 2-face in from the edge
/// 12.
#[must_use]
pub fn triangle_w_sequence() -> MorseSequence {
    MorseSequence::new(
        triangle(),
        vec![
            fill(&[1]),
            expand(&[3], &[1, 3]),
            expand(&[2], &[2, 3]),
            expand(&[1, 2], &[1, 2, 3]),
        ],
    )
    .expect("the bundled sequence replays")
}

/// A sequence on [`double_path`] that fills every vertex and the edges 14,
/// 24, 35, and 45, then expands the four triangles. It is built so that
/// exactly two gradient paths run from the edge 12 to the critical edge
/// 45; the even count keeps 45 out of the reference image of 12 even
/// though both paths reach it.
#[must_use]
pub fn double_path_sequence() -> MorseSequence {
    MorseSequence::new(
        double_path(),
        vec![
            fill(&[1]),
            fill(&[2]),
            fill(&[3]),
            fill(&[4]),
            fill(&[5]),
            fill(&[1, 4]),
            fill(&[2, 4]),
            fill(&[3, 5]),
            fill(&[4, 5]),
            expand(&[3, 4], &[3, 4, 5]),
            expand(&[1, 3], &[1, 3, 4]),
            expand(&[2, 3], &[2, 3, 4]),
            expand(&[1, 2], &[1, 2, 3]),
        ],
    )
    .expect("the bundled sequence replays")
}

/// A stored sequence on the dunce hat with three critical faces: one
/// vertex, one edge, and one triangle. Three is the minimum, since the
/// complex has no free pair and so cannot reach a single critical face.
///
/// Its critical edge and triangle bound each other in the critical
/// complex, exposing the contractibility that no collapse can see.
#[must_use]
pub fn dunce_hat_sequence() -> MorseSequence {
    parse_sequence(
        include_str!("../data/dunce_hat.seq.jsonl"),
        &dunce_hat(),
    )
    .expect("the bundled sequence replays")
}
