//! Fixtures shared by the benchmarks.

use hom2part::{m_kappa, ApproximantSpec, Direction, TwoPartiteDigraph};

/// M_kappa with the matching running left to right.
pub fn m(kappa: usize) -> TwoPartiteDigraph {
    m_kappa(kappa, Direction::LeftToRight).expect("kappa >= 2")
}

/// A level-2 generic 2-partite approximant of side 12.
pub fn approximant() -> TwoPartiteDigraph {
    hom2part::generic_2partite_approx(&ApproximantSpec::new(12, 2, 1)).expect("level 2 at side 12 is reachable")
}
