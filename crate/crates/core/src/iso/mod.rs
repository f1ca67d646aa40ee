//! Side-preserving isomorphism, canonical forms, automorphisms, extension of
//! partial maps, and the exact homogeneity decider.

mod refine;
mod search;

use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::digraph::{Side, Slot, TwoPartiteDigraph, UndirectedBipartiteGraph};
use crate::error::{Error, Result};
pub(crate) use search::SlotMap;

/// Default cap on the number of automorphisms listed.
pub const DEFAULT_AUT_CAP: usize = 1_000_000;

/// A finite injective map between vertex ids, meant to be side-preserving and
/// structure-preserving on its domain (see [`PartialMap::validate`]).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartialMap {
    pub pairs: Vec<(String, String)>,
}

impl PartialMap {
    pub fn new<S: Into<String>>(pairs: impl IntoIterator<Item = (S, S)>) -> Self {
        PartialMap { pairs: pairs.into_iter().map(|(a, b)| (a.into(), b.into())).collect() }
    }

    /// Identity on every vertex of `d`.
    pub fn identity(d: &TwoPartiteDigraph) -> Self {
        PartialMap::new(d.left().iter().chain(d.right()).map(|v| (v.clone(), v.clone())))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, source: &str) -> Option<&str> {
        self.pairs.iter().find(|(a, _)| a == source).map(|(_, b)| b.as_str())
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|(a, _)| a.as_str())
    }

    pub fn codomain(&self) -> impl Iterator<Item = &str> {
        self.pairs.iter().map(|(_, b)| b.as_str())
    }

    pub fn inverse(&self) -> Self {
        PartialMap { pairs: self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect() }
    }

    /// `self` followed by `then`, on the part of the domain where both are defined.
    pub fn compose(&self, then: &PartialMap) -> Self {
        PartialMap {
            pairs: self.pairs.iter().filter_map(|(a, b)| then.get(b).map(|c| (a.clone(), c.to_string()))).collect(),
        }
    }

    /// Same pairs, sorted by source id (for order-insensitive comparison).
    pub fn normalized(&self) -> Self {
        let mut pairs = self.pairs.clone();
        pairs.sort();
        PartialMap { pairs }
    }

    /// Resolves the map to slot pairs `from -> to`, checking that it is
    /// injective, side-preserving and structure-preserving.
    pub(crate) fn resolve(&self, from: &TwoPartiteDigraph, to: &TwoPartiteDigraph) -> Result<Vec<(Slot, Slot)>> {
        let bad = |msg: String| Error::InvalidPartialMap(msg);
        let mut sources = HashSet::new();
        let mut targets = HashSet::new();
        let mut slots = Vec::with_capacity(self.pairs.len());
        for (a, b) in &self.pairs {
            let sa = from.slot(a).map_err(|_| bad(format!("`{a}` is not a vertex of the source")))?;
            let sb = to.slot(b).map_err(|_| bad(format!("`{b}` is not a vertex of the target")))?;
            if sa.side != sb.side {
                return Err(bad(format!("`{a}` ({}) is sent to `{b}` ({})", sa.side, sb.side)));
            }
            if !sources.insert(a.as_str()) {
                return Err(bad(format!("`{a}` is mapped twice")));
            }
            if !targets.insert(b.as_str()) {
                return Err(bad(format!("`{b}` is hit twice")));
            }
            slots.push((sa, sb));
        }
        for &(u, fu) in &slots {
            for &(v, fv) in &slots {
                if u.side == Side::Left && v.side == Side::Right && from.pair_state(u, v) != to.pair_state(fu, fv) {
                    return Err(bad(format!(
                        "pair ({}, {}) is not carried onto ({}, {})",
                        from.id(u),
                        from.id(v),
                        to.id(fu),
                        to.id(fv)
                    )));
                }
            }
        }
        Ok(slots)
    }

    /// Checks the partial-isomorphism invariants with respect to `from -> to`.
    pub fn validate(&self, from: &TwoPartiteDigraph, to: &TwoPartiteDigraph) -> Result<()> {
        self.resolve(from, to).map(|_| ())
    }

    pub(crate) fn from_slots(from: &TwoPartiteDigraph, to: &TwoPartiteDigraph, pairs: &[(Slot, Slot)]) -> Self {
        PartialMap::new(pairs.iter().map(|&(a, b)| (from.id(a), to.id(b))))
    }

    pub(crate) fn from_slot_map(from: &TwoPartiteDigraph, to: &TwoPartiteDigraph, map: &SlotMap) -> Self {
        let pairs: Vec<(Slot, Slot)> = from.slots().map(|s| (s, map.apply(s))).collect();
        PartialMap::from_slots(from, to, &pairs)
    }
}

impl fmt::Display for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (a, b)) in self.pairs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}->{b}")?;
        }
        write!(f, "}}")
    }
}

/// Byte string identifying a structure up to side-preserving isomorphism.
/// Serialized as lowercase hex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(text: &str) -> Result<Self> {
        hex::decode(text).map(CanonicalForm).map_err(|e| Error::Format(format!("canonical form: {e}")))
    }

    /// Rebuilds the canonical representative (ids `x1..`, `y1..`).
    pub fn to_digraph(&self) -> Result<TwoPartiteDigraph> {
        let bad = || Error::Format("canonical form: malformed bytes".into());
        if self.0.len() < 8 {
            return Err(bad());
        }
        let m = u32::from_le_bytes(self.0[0..4].try_into().expect("4 bytes")) as usize;
        let n = u32::from_le_bytes(self.0[4..8].try_into().expect("4 bytes")) as usize;
        let body = &self.0[8..];
        if body.len() != m * n || body.iter().any(|&b| b > 2) {
            return Err(bad());
        }
        let states = body.iter().map(|&b| crate::digraph::PairState::from_index(b as usize)).collect();
        Ok(TwoPartiteDigraph::with_default_ids(m, n, states))
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        CanonicalForm::from_hex(&text).map_err(serde::de::Error::custom)
    }
}

/// Canonical form of `d` under side-preserving isomorphism.
pub fn canonical_form(d: &TwoPartiteDigraph) -> CanonicalForm {
    CanonicalForm(search::canonical_labeling(d).0)
}

/// `d` relabeled into canonical order with ids `x1..`, `y1..`.
pub fn canonical_digraph(d: &TwoPartiteDigraph) -> TwoPartiteDigraph {
    canonical_form(d).to_digraph().expect("canonical bytes are well formed")
}

/// A total side-preserving isomorphism `d1 -> d2`, if one exists.
pub fn are_isomorphic(d1: &TwoPartiteDigraph, d2: &TwoPartiteDigraph) -> Option<PartialMap> {
    search::find_isomorphism(d1, d2, &[]).map(|map| PartialMap::from_slot_map(d1, d2, &map))
}

pub(crate) fn automorphism_maps(d: &TwoPartiteDigraph, cap: usize) -> Result<Vec<SlotMap>> {
    let mut found = Vec::new();
    let mut overflow = false;
    let _ = search::for_each_isomorphism(d, d, &[], &mut |map| {
        if found.len() == cap {
            overflow = true;
            return ControlFlow::Break(());
        }
        found.push(map.clone());
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(Error::AutGroupTooLarge(cap));
    }
    Ok(found)
}

/// Every side-preserving automorphism of `d` (identity first), or
/// `AutGroupTooLarge` when there are more than `cap`.
pub fn automorphisms(d: &TwoPartiteDigraph, cap: usize) -> Result<Vec<PartialMap>> {
    let maps = automorphism_maps(d, cap)?;
    Ok(maps.iter().map(|map| PartialMap::from_slot_map(d, d, map)).collect())
}

/// Whether some side-preserving automorphism of `d` restricts to `phi`.
pub fn extends_to_automorphism(d: &TwoPartiteDigraph, phi: &PartialMap) -> Result<bool> {
    let pairs = phi.resolve(d, d)?;
    Ok(extends(d, &pairs))
}

pub(crate) fn extends(d: &TwoPartiteDigraph, pairs: &[(Slot, Slot)]) -> bool {
    search::find_isomorphism(d, d, pairs).is_some()
}

/// Knobs of the homogeneity search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomogeneityOptions {
    /// Largest substructure size checked; `None` means every size (exact).
    pub max_size: Option<usize>,
    /// Restrict domains to orbit representatives under the automorphism group.
    pub orbit_reduction: bool,
    /// Cap on the automorphism group used for orbit reduction.
    pub aut_cap: usize,
    /// Structures with at most this many vertices skip orbit reduction.
    pub unreduced_below: usize,
    /// Check domains on the rayon pool.
    pub parallel: bool,
}

impl Default for HomogeneityOptions {
    fn default() -> Self {
        HomogeneityOptions {
            max_size: None,
            orbit_reduction: true,
            aut_cap: DEFAULT_AUT_CAP,
            unreduced_below: 4,
            parallel: true,
        }
    }
}

/// Outcome of the homogeneity search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneityVerdict {
    pub holds: bool,
    pub counterexample: Option<PartialMap>,
}

impl HomogeneityVerdict {
    pub fn holds() -> Self {
        HomogeneityVerdict { holds: true, counterexample: None }
    }

    pub fn fails(counterexample: PartialMap) -> Self {
        HomogeneityVerdict { holds: false, counterexample: Some(counterexample) }
    }
}

/// Exact homogeneity (every size) or homogeneity up to substructures of `k`
/// vertices, with default options.
pub fn is_homogeneous(d: &TwoPartiteDigraph, k: Option<usize>) -> Result<HomogeneityVerdict> {
    is_homogeneous_with(d, &HomogeneityOptions { max_size: k, ..HomogeneityOptions::default() })
}

/// Homogeneity of an undirected bipartite graph, decided on its one-way
/// orientation (side-preserving maps of the two agree).
pub fn is_homogeneous_undirected(g: &UndirectedBipartiteGraph, k: Option<usize>) -> Result<HomogeneityVerdict> {
    is_homogeneous(&g.as_digraph(), k)
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(current.clone());
        let mut i = k;
        while i > 0 && current[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        current[i - 1] += 1;
        for j in i..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

type Domain = (Vec<usize>, Vec<usize>);

fn image(map: &SlotMap, (left, right): &Domain) -> Domain {
    let mut l: Vec<usize> = left.iter().map(|&i| map.left[i]).collect();
    let mut r: Vec<usize> = right.iter().map(|&j| map.right[j]).collect();
    l.sort_unstable();
    r.sort_unstable();
    (l, r)
}

/// Searches subsets in increasing size (then left count descending, then
/// lexicographically) and returns the first isomorphism between induced
/// substructures that does not extend.
pub fn is_homogeneous_with(d: &TwoPartiteDigraph, options: &HomogeneityOptions) -> Result<HomogeneityVerdict> {
    let total = d.vertex_count();
    let max = options.max_size.unwrap_or(total).min(total);
    let group = if options.orbit_reduction && total > options.unreduced_below {
        Some(automorphism_maps(d, options.aut_cap)?)
    } else {
        None
    };
    for size in 1..=max {
        let mut domains: Vec<Domain> = Vec::new();
        for a in (0..=size.min(d.m())).rev() {
            let b = size - a;
            if b > d.n() {
                continue;
            }
            for left in subsets(d.m(), a) {
                for right in subsets(d.n(), b) {
                    let domain = (left.clone(), right);
                    let is_rep = group.as_ref().is_none_or(|g| g.iter().all(|map| image(map, &domain) >= domain));
                    if is_rep {
                        domains.push(domain);
                    }
                }
            }
        }
        let failure = if options.parallel {
            domains.par_iter().find_map_first(|domain| non_extending_map(d, domain))
        } else {
            domains.iter().find_map(|domain| non_extending_map(d, domain))
        };
        if let Some(pairs) = failure {
            return Ok(HomogeneityVerdict::fails(PartialMap::from_slots(d, d, &pairs)));
        }
    }
    Ok(HomogeneityVerdict::holds())
}

/// First isomorphism from `d[domain]` onto an induced substructure (codomains
/// in lexicographic order) that extends to no automorphism of `d`.
fn non_extending_map(d: &TwoPartiteDigraph, domain: &Domain) -> Option<Vec<(Slot, Slot)>> {
    let (left, right) = domain;
    let source = d.induced_slots(left, right);
    for tl in subsets(d.m(), left.len()) {
        for tr in subsets(d.n(), right.len()) {
            let target = d.induced_slots(&tl, &tr);
            let mut failure = None;
            let _ = search::for_each_isomorphism(&source, &target, &[], &mut |map| {
                let pairs: Vec<(Slot, Slot)> = (0..left.len())
                    .map(|i| (Slot::left(left[i]), Slot::left(tl[map.left[i]])))
                    .chain((0..right.len()).map(|j| (Slot::right(right[j]), Slot::right(tr[map.right[j]]))))
                    .collect();
                if extends(d, &pairs) {
                    ControlFlow::Continue(())
                } else {
                    failure = Some(pairs);
                    ControlFlow::Break(())
                }
            });
            if failure.is_some() {
                return failure;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete_bipartite_digraph, directed_four_cycle, empty_digraph, m_kappa, matching_digraph};
    use crate::digraph::Direction;

    #[test]
    fn one_by_one_forms() {
        let forms: HashSet<CanonicalForm> = [
            empty_digraph(1, 1),
            complete_bipartite_digraph(1, 1, Direction::LeftToRight),
            complete_bipartite_digraph(1, 1, Direction::RightToLeft),
        ]
        .iter()
        .map(canonical_form)
        .collect();
        assert_eq!(forms.len(), 3);
    }

    #[test]
    fn m2_is_the_four_cycle() {
        let m2 = m_kappa(2, Direction::LeftToRight).unwrap();
        let c4 = directed_four_cycle();
        assert_eq!(canonical_form(&m2), canonical_form(&c4));
        let map = are_isomorphic(&m2, &c4).unwrap();
        map.validate(&m2, &c4).unwrap();
        assert_eq!(map.len(), 4);
    }

    #[test]
    fn reversed_matchings_differ() {
        let a = matching_digraph(2, Direction::LeftToRight);
        let b = matching_digraph(2, Direction::RightToLeft);
        assert!(are_isomorphic(&a, &b).is_none());
        assert_ne!(canonical_form(&a), canonical_form(&b));
        assert_eq!(are_isomorphic(&a, &a).unwrap().normalized(), PartialMap::identity(&a).normalized());
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(automorphisms(&empty_digraph(2, 1), 100).unwrap().len(), 2);
        for n in 1..=4 {
            let expected: usize = (1..=n).product();
            assert_eq!(automorphisms(&matching_digraph(n, Direction::LeftToRight), 100).unwrap().len(), expected);
        }
        let edge = TwoPartiteDigraph::build(["x1"], ["y1"], [("x1", "y1")]).unwrap();
        assert_eq!(automorphisms(&edge, 10).unwrap(), vec![PartialMap::identity(&edge)]);
        assert!(matches!(automorphisms(&empty_digraph(4, 4), 100), Err(Error::AutGroupTooLarge(100))));
    }

    #[test]
    fn extension_examples() {
        let d = matching_digraph(2, Direction::LeftToRight);
        assert!(extends_to_automorphism(&d, &PartialMap::new([("x1", "x2")])).unwrap());
        assert!(extends_to_automorphism(&d, &PartialMap::new([("x1", "x1"), ("y2", "y2")])).unwrap());
        let lonely = TwoPartiteDigraph::build(["x1", "x2"], ["y1"], [("x1", "y1")]).unwrap();
        assert!(!extends_to_automorphism(&lonely, &PartialMap::new([("x1", "x2")])).unwrap());
        assert!(matches!(
            extends_to_automorphism(&d, &PartialMap::new([("x1", "y1")])),
            Err(Error::InvalidPartialMap(_))
        ));
        assert!(matches!(
            extends_to_automorphism(&d, &PartialMap::new([("x1", "x1"), ("y1", "y2")])),
            Err(Error::InvalidPartialMap(_))
        ));
    }

    #[test]
    fn homogeneity_examples() {
        assert!(is_homogeneous(&m_kappa(2, Direction::LeftToRight).unwrap(), None).unwrap().holds);
        assert!(is_homogeneous(&complete_bipartite_digraph(3, 3, Direction::LeftToRight), None).unwrap().holds);
        let mixed = TwoPartiteDigraph::build(
            ["x1", "x2"],
            ["y1", "y2"],
            [("x1", "y1"), ("x1", "y2"), ("x2", "y1"), ("y2", "x2")],
        )
        .unwrap();
        let verdict = is_homogeneous(&mixed, None).unwrap();
        assert!(!verdict.holds);
        let phi = verdict.counterexample.unwrap();
        phi.validate(&mixed, &mixed).unwrap();
        assert!(!extends_to_automorphism(&mixed, &phi).unwrap());
    }

    #[test]
    fn smallest_counterexample_is_a_single_vertex() {
        let lonely = TwoPartiteDigraph::build(["x1", "x2"], ["y1"], [("x1", "y1")]).unwrap();
        let verdict = is_homogeneous(&lonely, None).unwrap();
        assert_eq!(verdict.counterexample.unwrap(), PartialMap::new([("x1", "x2")]));
    }

    #[test]
    fn orbit_reduction_does_not_change_verdicts() {
        let plain = HomogeneityOptions { orbit_reduction: false, parallel: false, ..Default::default() };
        for d in [
            m_kappa(3, Direction::LeftToRight).unwrap(),
            matching_digraph(3, Direction::RightToLeft),
            TwoPartiteDigraph::build(["x1", "x2", "x3"], ["y1", "y2"], [("x1", "y1"), ("y2", "x2")]).unwrap(),
        ] {
            assert_eq!(is_homogeneous(&d, None).unwrap().holds, is_homogeneous_with(&d, &plain).unwrap().holds);
        }
    }

    #[test]
    fn canonical_form_round_trips_through_hex() {
        let c = canonical_form(&m_kappa(3, Direction::LeftToRight).unwrap());
        assert_eq!(CanonicalForm::from_hex(&c.to_hex()).unwrap(), c);
        let rep = c.to_digraph().unwrap();
        assert_eq!(canonical_form(&rep), c);
        assert!(are_isomorphic(&rep, &m_kappa(3, Direction::LeftToRight).unwrap()).is_some());
    }
}
