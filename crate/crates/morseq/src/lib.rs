//! Morse sequences on finite simplicial complexes.
//!
//! A *Morse sequence* builds a complex from the void complex by two kinds
//! of steps: an *expansion* adds a free pair (a face together with its only
//! coface), and a *filling* adds a single facet. Filled faces are
//! *critical*; expanded pairs are *regular*. The critical faces govern the
//! topology of the complex: the regular pairs can always be cancelled
//! against each other, and everything the complex knows mod 2 survives on
//! the critical faces alone.
//!
//! The crate provides the moves and schemes that build such sequences, the
//! maps that transport chains between the complex and its critical faces,
//! and mod 2 homology to confirm that nothing is lost along the way.
//!
//! * [`Complex`] stores a finite simplicial complex and its elementary
//!   moves; [`Chain`] is a mod 2 chain of same-dimension faces.
//! * [`MorseSequence`] validates a sequence of [`MorseItem`] steps;
//!   [`increasing_scheme`] and [`decreasing_scheme`] construct sequences
//!   greedily from a complex.
//! * [`reference_map`] and [`coreference_map`] compute the frames that
//!   project chains onto critical chains; [`critical_complex`] packages
//!   the induced boundary, and [`extension_map`]/[`coextension_map`]
//!   embed the critical chains back.
//! * [`FlowOperator`] pushes chains along the gradient field until they
//!   stabilize on the image of the extension map.
//! * [`field_to_morse_sequence`] and [`basic_function_to_sequence`]
//!   convert acyclic vector fields and basic functions into sequences,
//!   and [`canonical_morse_function`] goes the other way.
//! * [`io`] reads and writes the text formats; [`fixtures`] bundles small
//!   worked complexes.
//!
//! ```
//! use morseq::{fixtures, increasing_scheme, PresentedChainComplex, Tiebreak};
//! use morseq::{coreference_map, critical_complex, reference_map};
//!
//! let torus = fixtures::torus();
//! let seq = increasing_scheme(&torus, Tiebreak::Lex);
//!
//! // The critical complex sees the full homology of the torus.
//! let reference = reference_map(&seq);
//! let coreference = coreference_map(&seq);
//! let critical = critical_complex(&seq, &reference, &coreference)?;
//! let homology = PresentedChainComplex::of_complex(&torus);
//! assert_eq!(homology.betti_numbers(), vec![1, 2, 1]);
//! assert_eq!(critical.betti_numbers(), homology.betti_numbers());
//! # Ok::<(), morseq::Error>(())
//! ```

pub mod chain;
pub mod fixtures;
pub mod flow;
pub mod functions;
pub mod homology;
pub mod io;
pub mod reference;
pub mod sequence;
pub mod complex;
pub mod error;
pub mod simplex;

pub use chain::Chain;
pub use flow::{
    coextension_map, composite_walk_defect, extension_chain_map_defect, extension_complex,
    extension_map, flow_decomposition_defect, flow_fixed_point_reports, parity_defect,
    restricted_path_exists, retraction_defect, ExtensionComplex, FixedPointReport,
    FlowOperator, PathOracle, RestrictedPathKind,
};
pub use functions::{
    basic_function_to_sequence, canonical_morse_function, field_to_morse_sequence,
    gradient_field_of_function, is_acyclic, is_basic_function, is_morse_function_on_sequence,
    DiscreteMorseFunction,
};
pub use homology::PresentedChainComplex;
pub use reference::{
    chain_map_defect, cochain_map_defect, coreference_map, critical_complex, reference_map,
    CriticalComplex, Frame,
};
pub use sequence::{
    decreasing_scheme, increasing_scheme, validate_items, CollapseWitness, Diagnostics,
    MorseItem, MorseSequence, Partition, SequenceFailure, SkeletonSequence, Tiebreak,
    VectorField,
};
pub use complex::Complex;
pub use error::{Error, Result};
pub use simplex::Simplex;

/// Builds a [`Simplex`] from a comma-separated list of vertices.
///
/// ```
/// use morseq::simplex;
/// assert_eq!(simplex![2, 1].vertices(), &[1, 2]);
/// ```
#[macro_export]
macro_rules! simplex {
    ($($v:expr),+ $(,)?) => {
        $crate::Simplex::new([$($v),+])
    };
}
