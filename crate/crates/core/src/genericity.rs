//! Level-`t` extension-property checkers.
//!
//! A [`Requirement`] names pairwise disjoint vertex sets `A`, `B`, `C` on one
//! side; a witness is an opposite-side vertex `w` with `A ⊆ N+(w)`,
//! `B ⊆ N-(w)` and `C ⊆ w⊥`. The three generic definitions differ only in
//! which of the sets may be nonempty:
//!
//! | mode          | sets    | structure            |
//! |---------------|---------|----------------------|
//! | `Bipartite`   | `A`,`C` | undirected, `A` means adjacent |
//! | `TwoPartite`  | `A`,`B` | directed, underlying graph must be complete |
//! | `Orientation` | `A`,`B`,`C` | directed |
//!
//! Checkers enumerate every requirement of total size at most `t` on both
//! sides and report all of those without a witness.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::digraph::{relation, Relation, Side, Slot, TwoPartiteDigraph, UndirectedBipartiteGraph};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenericMode {
    Bipartite,
    #[serde(rename = "2partite")]
    TwoPartite,
    Orientation,
}

impl GenericMode {
    pub(crate) fn roles(self) -> &'static [Role] {
        match self {
            GenericMode::Bipartite => &[Role::A, Role::C],
            GenericMode::TwoPartite => &[Role::A, Role::B],
            GenericMode::Orientation => &[Role::A, Role::B, Role::C],
        }
    }

    /// Number of distinct pair states a witness can present towards one vertex.
    pub fn alphabet(self) -> usize {
        self.roles().len()
    }
}

impl fmt::Display for GenericMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenericMode::Bipartite => "bipartite",
            GenericMode::TwoPartite => "2partite",
            GenericMode::Orientation => "orientation",
        })
    }
}

impl std::str::FromStr for GenericMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bipartite" => Ok(GenericMode::Bipartite),
            "2partite" | "two-partite" | "twopartite" => Ok(GenericMode::TwoPartite),
            "orientation" => Ok(GenericMode::Orientation),
            other => Err(Error::Format(format!("unknown genericity mode `{other}`"))),
        }
    }
}

/// Which set of a requirement a vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Role {
    /// successor of the witness (or neighbour, undirected)
    A,
    /// predecessor of the witness
    B,
    /// non-neighbour of the witness
    C,
}

impl Role {
    fn index(self) -> usize {
        match self {
            Role::A => 0,
            Role::B => 1,
            Role::C => 2,
        }
    }

    pub(crate) fn of(rel: Relation) -> Role {
        match rel {
            Relation::Out => Role::A,
            Relation::In => Role::B,
            Relation::Perp => Role::C,
        }
    }
}

/// A demand on the opposite side: some `w` with `a ⊆ N+(w)`, `b ⊆ N-(w)`, `c ⊆ w⊥`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Requirement {
    pub side: Side,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
}

impl Requirement {
    pub fn new<S: Into<String>>(
        side: Side,
        a: impl IntoIterator<Item = S>,
        b: impl IntoIterator<Item = S>,
        c: impl IntoIterator<Item = S>,
    ) -> Self {
        Requirement {
            side,
            a: a.into_iter().map(Into::into).collect(),
            b: b.into_iter().map(Into::into).collect(),
            c: c.into_iter().map(Into::into).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.a.len() + self.b.len() + self.c.len()
    }

    fn members(&self) -> impl Iterator<Item = (&String, Role)> {
        self.a
            .iter()
            .map(|v| (v, Role::A))
            .chain(self.b.iter().map(|v| (v, Role::B)))
            .chain(self.c.iter().map(|v| (v, Role::C)))
    }

    /// Resolves ids to indices on `self.side`, checking sidedness and disjointness.
    fn resolve(&self, lookup: impl Fn(&str) -> Option<Slot>) -> Result<Vec<(usize, Role)>> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(self.size());
        for (id, role) in self.members() {
            let slot = lookup(id).ok_or_else(|| Error::UnknownVertex(id.clone()))?;
            if slot.side != self.side {
                return Err(Error::InvalidRequirement(format!("`{id}` is not on the {} side", self.side)));
            }
            if !seen.insert(slot.index) {
                return Err(Error::InvalidRequirement(format!("`{id}` appears in more than one set")));
            }
            out.push((slot.index, role));
        }
        Ok(out)
    }
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |v: &[String]| format!("{{{}}}", v.join(", "));
        write!(f, "{} side: A={} B={} C={}", self.side, set(&self.a), set(&self.b), set(&self.c))
    }
}

/// Requirement in index form, used by the checkers before ids are attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RawRequirement {
    pub side: Side,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl RawRequirement {
    fn sort_key(&self) -> (Side, usize, usize, usize, &[usize], &[usize], &[usize]) {
        (self.side, self.a.len(), self.b.len(), self.c.len(), &self.a, &self.b, &self.c)
    }

    pub(crate) fn with_ids(&self, ids: &[String]) -> Requirement {
        let name = |v: &[usize]| v.iter().map(|&i| ids[i].clone()).collect();
        Requirement { side: self.side, a: name(&self.a), b: name(&self.b), c: name(&self.c) }
    }
}

impl Ord for RawRequirement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for RawRequirement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub mode: GenericMode,
    pub level: usize,
    pub holds: bool,
    /// Requirements without a witness, ordered by side, then set sizes, then vertex order.
    pub defects: Vec<Requirement>,
    /// A non-adjacent cross pair, reported in `TwoPartite` mode where completeness is demanded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub incomplete_pair: Option<(String, String)>,
}

/// Bitset over the witness side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub(crate) fn full(len: usize) -> Bits {
        let mut words = vec![u64::MAX; len.div_ceil(64)];
        if !len.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (len % 64)) - 1;
            }
        }
        Bits { words }
    }

    pub(crate) fn empty(len: usize) -> Bits {
        Bits { words: vec![0; len.div_ceil(64)] }
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn intersect(&self, other: &Bits) -> Bits {
        Bits { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}

/// `masks[role][u]`: witnesses standing in `role` to vertex `u` of the requirement side.
pub(crate) struct RoleMasks {
    witnesses: usize,
    masks: [Vec<Bits>; 3],
}

impl RoleMasks {
    fn build(members: usize, witnesses: usize, role_of: impl Fn(usize, usize) -> Role) -> RoleMasks {
        let mut masks: [Vec<Bits>; 3] = std::array::from_fn(|_| vec![Bits::empty(witnesses); members]);
        for u in 0..members {
            for w in 0..witnesses {
                masks[role_of(u, w).index()][u].insert(w);
            }
        }
        RoleMasks { witnesses, masks }
    }

    pub(crate) fn for_digraph(d: &TwoPartiteDigraph, side: Side) -> RoleMasks {
        let other = side.opposite();
        RoleMasks::build(d.side_len(side), d.side_len(other), |u, w| {
            Role::of(relation(d, Slot { side: other, index: w }, Slot { side, index: u }))
        })
    }

    pub(crate) fn for_undirected(g: &UndirectedBipartiteGraph, side: Side) -> RoleMasks {
        match side {
            Side::Left => RoleMasks::build(g.m(), g.n(), |u, w| if g.adjacent(u, w) { Role::A } else { Role::C }),
            Side::Right => RoleMasks::build(g.n(), g.m(), |u, w| if g.adjacent(w, u) { Role::A } else { Role::C }),
        }
    }

    /// Every requirement of size `<= level` over roles `roles` that has no witness.
    pub(crate) fn defects(&self, side: Side, roles: &[Role], level: usize) -> Vec<RawRequirement> {
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(level);
        self.walk(side, roles, level, 0, &Bits::full(self.witnesses), &mut chosen, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        side: Side,
        roles: &[Role],
        level: usize,
        start: usize,
        alive: &Bits,
        chosen: &mut Vec<(usize, Role)>,
        out: &mut Vec<RawRequirement>,
    ) {
        if alive.is_empty() {
            let pick = |r: Role| chosen.iter().filter(|c| c.1 == r).map(|c| c.0).collect();
            out.push(RawRequirement { side, a: pick(Role::A), b: pick(Role::B), c: pick(Role::C) });
        }
        if chosen.len() == level {
            return;
        }
        let members = self.masks[0].len();
        for u in start..members {
            for &role in roles {
                let next = alive.intersect(&self.masks[role.index()][u]);
                chosen.push((u, role));
                self.walk(side, roles, level, u + 1, &next, chosen, out);
                chosen.pop();
            }
        }
    }
}

fn report(
    mode: GenericMode,
    level: usize,
    mut raw: Vec<RawRequirement>,
    ids: impl Fn(Side) -> Vec<String>,
    incomplete_pair: Option<(String, String)>,
) -> GenericityReport {
    raw.sort();
    let (left, right) = (ids(Side::Left), ids(Side::Right));
    let defects: Vec<Requirement> =
        raw.iter().map(|r| r.with_ids(if r.side == Side::Left { &left } else { &right })).collect();
    GenericityReport { mode, level, holds: defects.is_empty() && incomplete_pair.is_none(), defects, incomplete_pair }
}

fn check_digraph(d: &TwoPartiteDigraph, mode: GenericMode, level: usize) -> GenericityReport {
    let mut raw = Vec::new();
    for side in [Side::Left, Side::Right] {
        raw.extend(RoleMasks::for_digraph(d, side).defects(side, mode.roles(), level));
    }
    let incomplete_pair = if mode == GenericMode::TwoPartite { first_non_adjacent(d) } else { None };
    report(mode, level, raw, |s| d.side(s).to_vec(), incomplete_pair)
}

pub(crate) fn first_non_adjacent(d: &TwoPartiteDigraph) -> Option<(String, String)> {
    (0..d.m())
        .flat_map(|i| (0..d.n()).map(move |j| (i, j)))
        .find(|&(i, j)| !d.state(i, j).is_adjacent())
        .map(|(i, j)| (d.left()[i].clone(), d.right()[j].clone()))
}

/// Every `(U, V)` of disjoint same-side sets with `|U| + |V| <= level` needs an
/// opposite vertex adjacent to all of `U` and none of `V`. Defects carry `U` in
/// `a` and `V` in `c`.
pub fn check_generic_bipartite(g: &UndirectedBipartiteGraph, level: usize) -> GenericityReport {
    let mut raw = Vec::new();
    for side in [Side::Left, Side::Right] {
        raw.extend(RoleMasks::for_undirected(g, side).defects(side, GenericMode::Bipartite.roles(), level));
    }
    report(
        GenericMode::Bipartite,
        level,
        raw,
        |s| match s {
            Side::Left => g.left().to_vec(),
            Side::Right => g.right().to_vec(),
        },
        None,
    )
}

/// Complete underlying graph plus a witness for every `(A, B)` with `|A| + |B| <= level`.
pub fn check_generic_2partite(d: &TwoPartiteDigraph, level: usize) -> GenericityReport {
    check_digraph(d, GenericMode::TwoPartite, level)
}

/// A witness for every `(A, B, C)` with `|A| + |B| + |C| <= level`.
pub fn check_generic_orientation(d: &TwoPartiteDigraph, level: usize) -> GenericityReport {
    check_digraph(d, GenericMode::Orientation, level)
}

/// Runs the checker for `mode`; `Bipartite` mode checks the underlying graph.
pub fn check_generic(d: &TwoPartiteDigraph, mode: GenericMode, level: usize) -> GenericityReport {
    match mode {
        GenericMode::Bipartite => check_generic_bipartite(&d.underlying_bipartite(), level),
        _ => check_digraph(d, mode, level),
    }
}

/// Highest level `<= max_level` at which `mode`'s check holds, if any.
pub fn generic_level(d: &TwoPartiteDigraph, mode: GenericMode, max_level: usize) -> Option<usize> {
    (0..=max_level).take_while(|&t| check_generic(d, mode, t).holds).last()
}

/// First opposite-side vertex, in stored order, that witnesses `req`.
pub fn brute_witness_scan(d: &TwoPartiteDigraph, req: &Requirement) -> Result<Option<String>> {
    let members = req.resolve(|id| d.slot(id).ok())?;
    let other = req.side.opposite();
    let found = (0..d.side_len(other)).map(|k| Slot { side: other, index: k }).find(|&w| {
        let (out, inn, perp) = (d.out_slots(w), d.in_slots(w), d.perp_slots(w));
        members.iter().all(|&(u, role)| {
            let u = Slot { side: req.side, index: u };
            match role {
                Role::A => out.contains(&u),
                Role::B => inn.contains(&u),
                Role::C => perp.contains(&u),
            }
        })
    });
    Ok(found.map(|w| d.id(w).to_string()))
}

/// Undirected scan: `a` must lie in `N(w)` and `c` must avoid it; `b` must be empty.
pub fn brute_witness_scan_undirected(g: &UndirectedBipartiteGraph, req: &Requirement) -> Result<Option<String>> {
    if !req.b.is_empty() {
        return Err(Error::InvalidRequirement("undirected requirements have no predecessor set".into()));
    }
    let lookup = |id: &str| {
        g.left()
            .iter()
            .position(|s| s == id)
            .map(Slot::left)
            .or_else(|| g.right().iter().position(|s| s == id).map(Slot::right))
    };
    req.resolve(lookup)?;
    let candidates = match req.side {
        Side::Left => g.right(),
        Side::Right => g.left(),
    };
    for w in candidates {
        let nbrs = g.neighbourhood(w)?;
        if req.a.iter().all(|v| nbrs.contains(v)) && req.c.iter().all(|v| !nbrs.contains(v)) {
            return Ok(Some(w.clone()));
        }
    }
    Ok(None)
}

/// Witness scan over slots that skips the `used` witnesses; shared with back-and-forth.
pub(crate) fn scan_excluding(
    d: &TwoPartiteDigraph,
    side: Side,
    members: &[(usize, Role)],
    used: &[bool],
) -> Option<usize> {
    let other = side.opposite();
    (0..d.side_len(other)).filter(|&w| !used[w]).find(|&w| {
        let ws = Slot { side: other, index: w };
        members.iter().all(|&(u, role)| Role::of(relation(d, ws, Slot { side, index: u })) == role)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{complete_bipartite_digraph, empty_digraph, m_kappa};
    use crate::digraph::Direction;

    #[test]
    fn vacuous_requirement_returns_first_opposite_vertex() {
        let d = empty_digraph(2, 3);
        let req = Requirement::new::<&str>(Side::Left, [], [], []);
        assert_eq!(brute_witness_scan(&d, &req).unwrap().as_deref(), Some("y1"));
    }

    #[test]
    fn m5_has_no_vertex_with_two_left_predecessors() {
        let d = m_kappa(5, Direction::LeftToRight).unwrap();
        let req = Requirement::new(Side::Left, [], ["x1", "x2"], []);
        assert_eq!(brute_witness_scan(&d, &req).unwrap(), None);
    }

    #[test]
    fn complete_digraph_scan_on_right_side() {
        let d = complete_bipartite_digraph(2, 2, Direction::LeftToRight);
        let req = Requirement::new(Side::Right, ["y1"], [], []);
        assert_eq!(brute_witness_scan(&d, &req).unwrap().as_deref(), Some("x1"));
    }

    #[test]
    fn invalid_requirements_are_rejected() {
        let d = empty_digraph(2, 2);
        let wrong_side = Requirement::new(Side::Left, ["y1"], [], []);
        assert!(matches!(brute_witness_scan(&d, &wrong_side), Err(Error::InvalidRequirement(_))));
        let overlap = Requirement::new(Side::Left, ["x1"], ["x1"], []);
        assert!(matches!(brute_witness_scan(&d, &overlap), Err(Error::InvalidRequirement(_))));
        let unknown = Requirement::new(Side::Left, ["x9"], [], []);
        assert!(matches!(brute_witness_scan(&d, &unknown), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn level_zero_is_vacuous_with_nonempty_sides() {
        let g = empty_digraph(3, 2).underlying_bipartite();
        assert!(check_generic_bipartite(&g, 0).holds);
        let d = complete_bipartite_digraph(2, 2, Direction::RightToLeft);
        assert!(check_generic_orientation(&d, 0).holds);
        // an empty side has no witness even for the empty demand
        assert!(!check_generic_orientation(&empty_digraph(2, 0), 0).holds);
    }

    #[test]
    fn complete_bipartite_graph_misses_non_neighbour_demand() {
        let g = complete_bipartite_digraph(3, 3, Direction::LeftToRight).underlying_bipartite();
        let r = check_generic_bipartite(&g, 1);
        assert!(!r.holds);
        assert!(r.defects.contains(&Requirement::new(Side::Left, [], [], ["x1"])));
        for defect in &r.defects {
            assert_eq!(brute_witness_scan_undirected(&g, defect).unwrap(), None);
        }
    }

    #[test]
    fn m5_boundary_between_levels_one_and_two() {
        let d = m_kappa(5, Direction::LeftToRight).unwrap();
        assert!(check_generic_2partite(&d, 1).holds);
        let r = check_generic_2partite(&d, 2);
        assert!(!r.holds);
        assert!(r.defects.contains(&Requirement::new(Side::Left, [], ["x1", "x2"], [])));
        assert!(r.defects.iter().all(|q| q.size() == 2));
    }

    #[test]
    fn empty_digraph_reports_structural_defect() {
        let r = check_generic_2partite(&empty_digraph(2, 2), 0);
        assert!(!r.holds);
        assert_eq!(r.incomplete_pair, Some(("x1".into(), "y1".into())));
    }

    #[test]
    fn one_way_orientation_has_no_predecessor_witness() {
        let d = complete_bipartite_digraph(3, 3, Direction::LeftToRight);
        let r = check_generic_orientation(&d, 1);
        assert!(r.defects.contains(&Requirement::new(Side::Left, ["x1"], [], [])));
    }

    #[test]
    fn defect_order_is_normalized() {
        let d = complete_bipartite_digraph(3, 3, Direction::LeftToRight);
        let r = check_generic_orientation(&d, 2);
        let key = |q: &Requirement| (q.side, q.a.len(), q.b.len(), q.c.len());
        assert!(r.defects.windows(2).all(|w| key(&w[0]) <= key(&w[1])));
    }
}
