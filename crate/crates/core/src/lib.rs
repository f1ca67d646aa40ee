//! Homogeneous 2-partite digraphs: structures, catalog constructors, an exact
//! homogeneity decider, extension-property checkers, a classifier, a
//! back-and-forth engine and an exhaustive census.

pub mod backforth;
pub mod catalog;
pub mod classify;
pub mod digraph;
pub mod enumerate;
pub mod error;
pub mod genericity;
pub mod iso;

pub use backforth::{
    back_and_forth, replay, uniqueness_demo, BafDirection, BafStep, BafTrace, UniquenessReport, VertexOrder,
};
pub use catalog::{
    complement_matching_digraph, complete_bipartite_digraph, directed_four_cycle, empty_digraph,
    generic_2partite_approx, generic_bipartite_approx, generic_orientation_approx, m_kappa, matching_digraph,
    witness_closure, ApproximantSpec,
};
pub use classify::{
    classify_exact, classify_profile, distinct_neighbourhoods, ggk_class, ggk_structural, is_m_kappa, ClassCase,
    ClassLabel, Evidence, GgkKind,
};
pub use digraph::{
    DegreeTriple, DigraphFile, Direction, PairState, Side, Slot, TwoPartiteDigraph, UndirectedBipartiteGraph, Vertex,
};
pub use enumerate::{
    burnside_count, census_homogeneous, enumerate_all, enumerate_classes, verify_census, verify_theorem_finite,
    CensusEntry, VerifyReport,
};
pub use error::{Error, Result};
pub use genericity::{
    brute_witness_scan, brute_witness_scan_undirected, check_generic, check_generic_2partite, check_generic_bipartite,
    check_generic_orientation, generic_level, GenericMode, GenericityReport, Requirement,
};
pub use iso::{
    are_isomorphic, automorphisms, canonical_digraph, canonical_form, extends_to_automorphism, is_homogeneous,
    is_homogeneous_undirected, is_homogeneous_with, CanonicalForm, HomogeneityOptions, HomogeneityVerdict, PartialMap,
};
