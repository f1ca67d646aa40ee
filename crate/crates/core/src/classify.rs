//! The classification decision tree: exact mode for finite structures and
//! profile mode for level-`t` approximants.

use serde::{Deserialize, Serialize};

use crate::digraph::{Direction, PairState, Side, Slot, TwoPartiteDigraph, UndirectedBipartiteGraph};
use crate::error::Result;
use crate::genericity::{check_generic_2partite, check_generic_bipartite, check_generic_orientation, GenericityReport};
use crate::iso::{is_homogeneous, HomogeneityVerdict, PartialMap};

/// Kinds of homogeneous bipartite graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GgkKind {
    CompleteBipartite,
    EmptyBipartite,
    PerfectMatching,
    ComplementOfMatching,
    GenericBipartite,
}

/// Classification outcome with its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", content = "params")]
pub enum ClassCase {
    /// A bipartite digraph whose underlying graph has the given kind; the
    /// direction is absent when there are no arcs.
    BipartiteHomogeneous {
        subkind: GgkKind,
        direction: Option<Direction>,
    },
    MKappa {
        kappa: usize,
    },
    Generic2Partite,
    GenericOrientation,
    NotHomogeneous {
        counterexample: PartialMap,
    },
    Inconclusive {
        condition: String,
    },
}

impl ClassCase {
    /// Variant name, as it appears in JSON.
    pub fn name(&self) -> &'static str {
        match self {
            ClassCase::BipartiteHomogeneous { .. } => "BipartiteHomogeneous",
            ClassCase::MKappa { .. } => "MKappa",
            ClassCase::Generic2Partite => "Generic2Partite",
            ClassCase::GenericOrientation => "GenericOrientation",
            ClassCase::NotHomogeneous { .. } => "NotHomogeneous",
            ClassCase::Inconclusive { .. } => "Inconclusive",
        }
    }
}

/// Verdicts and reports gathered on the way to a label.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homogeneity: Option<HomogeneityVerdict>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub genericity: Vec<GenericityReport>,
    /// Some vertex has an empty perp set while another has a nonempty one:
    /// a perp profile no infinite homogeneous structure with infinite
    /// neighbourhoods can show. Diagnostic only.
    #[serde(default)]
    pub perp_irregular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassLabel {
    #[serde(flatten)]
    pub case: ClassCase,
    pub evidence: Evidence,
}

impl ClassLabel {
    fn new(case: ClassCase, evidence: Evidence) -> Self {
        ClassLabel { case, evidence }
    }
}

/// Finite homogeneous kind of a bipartite graph, by structure alone.
pub fn ggk_structural(g: &UndirectedBipartiteGraph) -> Option<GgkKind> {
    let (m, n) = (g.m(), g.n());
    let edges = g.edge_count();
    if edges == 0 {
        return Some(GgkKind::EmptyBipartite);
    }
    if edges == m * n {
        return Some(GgkKind::CompleteBipartite);
    }
    if m != n {
        return None;
    }
    let all_degrees = |k: usize| (0..m).all(|i| g.left_degree(i) == k) && (0..n).all(|j| g.right_degree(j) == k);
    if all_degrees(1) {
        return Some(GgkKind::PerfectMatching);
    }
    // every vertex misses exactly one opposite vertex, so the non-edges form a perfect matching
    if n >= 2 && all_degrees(n - 1) {
        return Some(GgkKind::ComplementOfMatching);
    }
    None
}

/// Structural kind if any, else `GenericBipartite` when the level-`t` check
/// holds, else `None` (inconclusive) with the failing report.
pub fn ggk_class(g: &UndirectedBipartiteGraph, level: usize) -> (Option<GgkKind>, Option<GenericityReport>) {
    if let Some(kind) = ggk_structural(g) {
        return (Some(kind), None);
    }
    let report = check_generic_bipartite(g, level);
    let kind = report.holds.then_some(GgkKind::GenericBipartite);
    (kind, Some(report))
}

/// Out-neighbourhoods pairwise distinct and in-neighbourhoods pairwise
/// distinct, on each side.
pub fn distinct_neighbourhoods(d: &TwoPartiteDigraph) -> bool {
    [Side::Left, Side::Right].into_iter().all(|side| {
        let other = side.opposite();
        let rows: Vec<Vec<PairState>> = (0..d.side_len(side))
            .map(|v| {
                (0..d.side_len(other))
                    .map(|w| d.pair_state(Slot { side, index: v }, Slot { side: other, index: w }))
                    .collect()
            })
            .collect();
        let pattern = |row: &Vec<PairState>, arc: PairState| row.iter().map(|&s| s == arc).collect::<Vec<bool>>();
        let distinct = |arc: PairState| {
            let mut sets: Vec<Vec<bool>> = rows.iter().map(|r| pattern(r, arc)).collect();
            sets.sort();
            sets.windows(2).all(|w| w[0] != w[1])
        };
        // seen from `side`, successors are the pairs whose arc leaves `side`
        let (out, inn) = match side {
            Side::Left => (PairState::LeftToRight, PairState::RightToLeft),
            Side::Right => (PairState::RightToLeft, PairState::LeftToRight),
        };
        distinct(out) && distinct(inn)
    })
}

/// `Some(kappa)` when `d` is an M_kappa: equal sides of size at least 2,
/// complete underlying graph, and one direction a perfect matching.
pub fn is_m_kappa(d: &TwoPartiteDigraph) -> Option<usize> {
    let kappa = d.m();
    if kappa < 2 || d.n() != kappa || !d.is_complete() {
        return None;
    }
    let is_matching = |arc: PairState| {
        (0..kappa).all(|i| (0..kappa).filter(|&j| d.state(i, j) == arc).count() == 1)
            && (0..kappa).all(|j| (0..kappa).filter(|&i| d.state(i, j) == arc).count() == 1)
    };
    (is_matching(PairState::LeftToRight) || is_matching(PairState::RightToLeft)).then_some(kappa)
}

fn perp_irregular(d: &TwoPartiteDigraph) -> bool {
    let sizes: Vec<usize> = d.slots().map(|s| d.degree_triple(s).perp).collect();
    sizes.contains(&0) && sizes.iter().any(|&p| p > 0)
}

/// Exact classification: decides homogeneity, then names the finite class.
pub fn classify_exact(d: &TwoPartiteDigraph) -> Result<ClassLabel> {
    let verdict = is_homogeneous(d, None)?;
    let evidence =
        Evidence { homogeneity: Some(verdict.clone()), perp_irregular: perp_irregular(d), ..Evidence::default() };
    if let Some(counterexample) = verdict.counterexample {
        return Ok(ClassLabel::new(ClassCase::NotHomogeneous { counterexample }, evidence));
    }
    let case = if d.is_bipartite_digraph() {
        match ggk_structural(&d.underlying_bipartite()) {
            Some(subkind) => ClassCase::BipartiteHomogeneous { subkind, direction: d.direction() },
            None => ClassCase::Inconclusive {
                condition: "homogeneous bipartite digraph whose underlying graph is none of the finite kinds".into(),
            },
        }
    } else if let Some(kappa) = is_m_kappa(d) {
        ClassCase::MKappa { kappa }
    } else {
        ClassCase::Inconclusive { condition: "homogeneous, not bipartite and not an M_kappa".into() }
    };
    Ok(ClassLabel::new(case, evidence))
}

/// Profile classification at level `t`, without deciding homogeneity.
pub fn classify_profile(d: &TwoPartiteDigraph, level: usize) -> ClassLabel {
    let mut evidence = Evidence { perp_irregular: perp_irregular(d), ..Evidence::default() };
    if d.is_bipartite_digraph() {
        let (kind, report) = ggk_class(&d.underlying_bipartite(), level);
        evidence.genericity.extend(report);
        let case = match kind {
            Some(subkind) => ClassCase::BipartiteHomogeneous { subkind, direction: d.direction() },
            None => ClassCase::Inconclusive {
                condition: format!(
                    "bipartite digraph whose underlying graph is no finite kind and fails the level-{level} generic bipartite check"
                ),
            },
        };
        return ClassLabel::new(case, evidence);
    }
    if let Some(kappa) = is_m_kappa(d) {
        return ClassLabel::new(ClassCase::MKappa { kappa }, evidence);
    }
    let complete = d.is_complete();
    if complete {
        let report = check_generic_2partite(d, level);
        let holds = report.holds;
        evidence.genericity.push(report);
        if holds {
            return ClassLabel::new(ClassCase::Generic2Partite, evidence);
        }
    }
    let report = check_generic_orientation(d, level);
    let holds = report.holds;
    evidence.genericity.push(report);
    if holds {
        return ClassLabel::new(ClassCase::GenericOrientation, evidence);
    }
    let condition = if complete {
        format!("perp sets are empty but the level-{level} generic 2-partite check fails")
    } else {
        format!("some perp set is nonempty and the level-{level} generic orientation check fails")
    };
    ClassLabel::new(ClassCase::Inconclusive { condition }, evidence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{
        complement_matching_digraph, complete_bipartite_digraph, directed_four_cycle, empty_digraph, m_kappa,
        matching_digraph,
    };

    #[test]
    fn ggk_kinds() {
        let k33 = complete_bipartite_digraph(3, 3, Direction::LeftToRight).underlying_bipartite();
        assert_eq!(ggk_structural(&k33), Some(GgkKind::CompleteBipartite));
        let matching = matching_digraph(3, Direction::LeftToRight).underlying_bipartite();
        assert_eq!(ggk_structural(&matching), Some(GgkKind::PerfectMatching));
        let co = complement_matching_digraph(3, Direction::LeftToRight).underlying_bipartite();
        assert_eq!(ggk_structural(&co), Some(GgkKind::ComplementOfMatching));
        assert_eq!(ggk_structural(&empty_digraph(2, 3).underlying_bipartite()), Some(GgkKind::EmptyBipartite));
    }

    #[test]
    fn neighbourhood_examples() {
        assert!(distinct_neighbourhoods(&m_kappa(3, Direction::LeftToRight).unwrap()));
        assert!(!distinct_neighbourhoods(&complete_bipartite_digraph(2, 2, Direction::LeftToRight)));
        assert!(!distinct_neighbourhoods(&empty_digraph(2, 2)));
    }

    #[test]
    fn m_kappa_recognition() {
        assert_eq!(is_m_kappa(&directed_four_cycle()), Some(2));
        assert_eq!(is_m_kappa(&m_kappa(5, Direction::RightToLeft).unwrap()), Some(5));
        assert_eq!(is_m_kappa(&complete_bipartite_digraph(3, 3, Direction::LeftToRight)), None);
    }

    #[test]
    fn exact_examples() {
        assert_eq!(
            classify_exact(&m_kappa(2, Direction::LeftToRight).unwrap()).unwrap().case,
            ClassCase::MKappa { kappa: 2 }
        );
        assert_eq!(
            classify_exact(&matching_digraph(2, Direction::LeftToRight)).unwrap().case,
            ClassCase::BipartiteHomogeneous {
                subkind: GgkKind::PerfectMatching,
                direction: Some(Direction::LeftToRight)
            }
        );
        let lonely = TwoPartiteDigraph::build(["x1", "x2"], ["y1"], [("x1", "y1")]).unwrap();
        assert!(matches!(classify_exact(&lonely).unwrap().case, ClassCase::NotHomogeneous { .. }));
        assert_eq!(
            classify_exact(&TwoPartiteDigraph::empty()).unwrap().case,
            ClassCase::BipartiteHomogeneous { subkind: GgkKind::EmptyBipartite, direction: None }
        );
    }

    #[test]
    fn profile_prefers_structure() {
        assert_eq!(
            classify_profile(&m_kappa(4, Direction::LeftToRight).unwrap(), 2).case,
            ClassCase::MKappa { kappa: 4 }
        );
        let label = classify_profile(&empty_digraph(3, 3), 2);
        assert_eq!(label.case, ClassCase::BipartiteHomogeneous { subkind: GgkKind::EmptyBipartite, direction: None });
    }

    #[test]
    fn json_shape() {
        let label = classify_profile(&m_kappa(4, Direction::LeftToRight).unwrap(), 1);
        let value = serde_json::to_value(&label).unwrap();
        assert_eq!(value["case"], "MKappa");
        assert_eq!(value["params"]["kappa"], 4);
        assert!(value["evidence"].is_object());
    }
}
