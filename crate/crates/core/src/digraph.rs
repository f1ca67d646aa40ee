//! Finite 2-partite digraphs and their underlying undirected bipartite graphs.
//!
//! A [`TwoPartiteDigraph`] has two disjoint, ordered vertex lists (the left
//! side `X` and the right side `Y`) and a set of arcs, each running from one
//! side to the other, with at most one arc per cross pair. Internally every
//! cross pair `(x_i, y_j)` stores a [`PairState`]; the arc list is kept in the
//! order it was supplied so that serialization is stable.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub side: Side,
}

/// Orientation shared by every arc of a bipartite digraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::LeftToRight => Direction::RightToLeft,
            Direction::RightToLeft => Direction::LeftToRight,
        }
    }

    pub fn state(self) -> PairState {
        match self {
            Direction::LeftToRight => PairState::LeftToRight,
            Direction::RightToLeft => PairState::RightToLeft,
        }
    }
}

/// The relation carried by one cross pair `(x, y)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum PairState {
    #[default]
    None = 0,
    LeftToRight = 1,
    RightToLeft = 2,
}

impl PairState {
    pub const ALL: [PairState; 3] = [PairState::None, PairState::LeftToRight, PairState::RightToLeft];

    pub fn from_index(i: usize) -> PairState {
        Self::ALL[i]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn reversed(self) -> PairState {
        match self {
            PairState::None => PairState::None,
            PairState::LeftToRight => PairState::RightToLeft,
            PairState::RightToLeft => PairState::LeftToRight,
        }
    }

    pub fn is_adjacent(self) -> bool {
        self != PairState::None
    }
}

/// Position of a vertex inside a structure: its side and index in that side's list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub side: Side,
    pub index: usize,
}

impl Slot {
    pub fn left(index: usize) -> Slot {
        Slot { side: Side::Left, index }
    }

    pub fn right(index: usize) -> Slot {
        Slot { side: Side::Right, index }
    }
}

/// Per-vertex cardinalities of `N+`, `N-` and the perp set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreeTriple {
    pub out: usize,
    #[serde(rename = "in")]
    pub inn: usize,
    pub perp: usize,
}

impl DegreeTriple {
    pub fn new(out: usize, inn: usize, perp: usize) -> Self {
        DegreeTriple { out, inn, perp }
    }
}

#[derive(Clone, Debug)]
pub struct TwoPartiteDigraph {
    left: Vec<String>,
    right: Vec<String>,
    edges: Vec<(String, String)>,
    states: Vec<PairState>,
    index: HashMap<String, Slot>,
}

impl PartialEq for TwoPartiteDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.left == other.left && self.right == other.right && self.states == other.states
    }
}

impl Eq for TwoPartiteDigraph {}

/// Where in the input a validation error was found.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Location {
    Left(usize),
    Right(usize),
    Edge(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Left(i) => write!(f, "x[{i}]"),
            Location::Right(i) => write!(f, "y[{i}]"),
            Location::Edge(i) => write!(f, "edges[{i}]"),
        }
    }
}

fn index_sides(left: &[String], right: &[String]) -> std::result::Result<HashMap<String, Slot>, (Error, Location)> {
    let mut index = HashMap::with_capacity(left.len() + right.len());
    for (i, id) in left.iter().enumerate() {
        if index.insert(id.clone(), Slot::left(i)).is_some() {
            return Err((Error::DuplicateVertex(id.clone()), Location::Left(i)));
        }
    }
    for (j, id) in right.iter().enumerate() {
        match index.get(id) {
            Some(slot) if slot.side == Side::Left => return Err((Error::SideOverlap(id.clone()), Location::Right(j))),
            Some(_) => return Err((Error::DuplicateVertex(id.clone()), Location::Right(j))),
            None => {
                index.insert(id.clone(), Slot::right(j));
            }
        }
    }
    Ok(index)
}

impl TwoPartiteDigraph {
    /// Validates and builds a structure. Repeated copies of the same arc are kept once.
    pub fn build<L, R, S>(left: L, right: R, edges: impl IntoIterator<Item = (S, S)>) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        R: IntoIterator,
        R::Item: Into<String>,
        S: Into<String>,
    {
        let left = left.into_iter().map(Into::into).collect();
        let right = right.into_iter().map(Into::into).collect();
        let edges = edges.into_iter().map(|(a, b)| (a.into(), b.into())).collect();
        Self::build_located(left, right, edges).map_err(|(e, _)| e)
    }

    pub(crate) fn build_located(
        left: Vec<String>,
        right: Vec<String>,
        edges: Vec<(String, String)>,
    ) -> std::result::Result<Self, (Error, Location)> {
        let index = index_sides(&left, &right)?;
        let (m, n) = (left.len(), right.len());
        let mut states = vec![PairState::None; m * n];
        let mut kept = Vec::with_capacity(edges.len());
        for (k, (src, dst)) in edges.into_iter().enumerate() {
            let loc = Location::Edge(k);
            let (Some(&a), Some(&b)) = (index.get(&src), index.get(&dst)) else {
                return Err((Error::UnknownEndpoint(src, dst), loc));
            };
            let (i, j, state) = match (a.side, b.side) {
                (Side::Left, Side::Right) => (a.index, b.index, PairState::LeftToRight),
                (Side::Right, Side::Left) => (b.index, a.index, PairState::RightToLeft),
                _ => return Err((Error::SameSideEdge(src, dst), loc)),
            };
            let cell = &mut states[i * n + j];
            if *cell == state {
                continue;
            }
            if *cell != PairState::None {
                return Err((Error::SymmetricEdgePair(src, dst), loc));
            }
            *cell = state;
            kept.push((src, dst));
        }
        Ok(TwoPartiteDigraph { left, right, edges: kept, states, index })
    }

    /// Builds a structure from a row-major matrix of pair states (`states[i * n + j]`
    /// describes `(left[i], right[j])`); arcs are listed in row-major order.
    pub fn from_states(left: Vec<String>, right: Vec<String>, states: Vec<PairState>) -> Result<Self> {
        let (m, n) = (left.len(), right.len());
        assert_eq!(states.len(), m * n, "state matrix has wrong size");
        let index = index_sides(&left, &right).map_err(|(e, _)| e)?;
        let mut edges = Vec::new();
        for i in 0..m {
            for j in 0..n {
                match states[i * n + j] {
                    PairState::None => {}
                    PairState::LeftToRight => edges.push((left[i].clone(), right[j].clone())),
                    PairState::RightToLeft => edges.push((right[j].clone(), left[i].clone())),
                }
            }
        }
        Ok(TwoPartiteDigraph { left, right, edges, states, index })
    }

    /// Same as [`from_states`](Self::from_states) with ids `x1..xm`, `y1..yn`.
    pub fn with_default_ids(m: usize, n: usize, states: Vec<PairState>) -> Self {
        Self::from_states(default_ids('x', m), default_ids('y', n), states).expect("default ids are distinct")
    }

    pub fn empty() -> Self {
        Self::with_default_ids(0, 0, Vec::new())
    }

    pub fn left(&self) -> &[String] {
        &self.left
    }

    pub fn right(&self) -> &[String] {
        &self.right
    }

    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }

    /// `|X|`
    pub fn m(&self) -> usize {
        self.left.len()
    }

    /// `|Y|`
    pub fn n(&self) -> usize {
        self.right.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn side(&self, side: Side) -> &[String] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn side_len(&self, side: Side) -> usize {
        self.side(side).len()
    }

    pub fn states(&self) -> &[PairState] {
        &self.states
    }

    /// State of the pair `(left[i], right[j])`.
    #[inline]
    pub fn state(&self, i: usize, j: usize) -> PairState {
        self.states[i * self.right.len() + j]
    }

    /// State of the pair formed by two opposite-side slots, seen from `(left, right)`.
    #[inline]
    pub fn pair_state(&self, a: Slot, b: Slot) -> PairState {
        match (a.side, b.side) {
            (Side::Left, Side::Right) => self.state(a.index, b.index),
            (Side::Right, Side::Left) => self.state(b.index, a.index),
            _ => PairState::None,
        }
    }

    /// Whether `a -> b` is an arc.
    #[inline]
    pub fn has_arc(&self, a: Slot, b: Slot) -> bool {
        match (a.side, b.side) {
            (Side::Left, Side::Right) => self.state(a.index, b.index) == PairState::LeftToRight,
            (Side::Right, Side::Left) => self.state(b.index, a.index) == PairState::RightToLeft,
            _ => false,
        }
    }

    pub fn slot(&self, id: &str) -> Result<Slot> {
        self.index.get(id).copied().ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn id(&self, slot: Slot) -> &str {
        &self.side(slot.side)[slot.index]
    }

    pub fn vertex(&self, id: &str) -> Result<Vertex> {
        let slot = self.slot(id)?;
        Ok(Vertex { id: id.to_string(), side: slot.side })
    }

    /// All slots, left side first, each side in stored order.
    pub fn slots(&self) -> impl Iterator<Item = Slot> + '_ {
        (0..self.m()).map(Slot::left).chain((0..self.n()).map(Slot::right))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.slots().map(|s| Vertex { id: self.id(s).to_string(), side: s.side })
    }

    /// Opposite-side slots related to `v` by the given relation (seen from `v`).
    fn related(&self, v: Slot, wanted: Relation) -> Vec<Slot> {
        let other = v.side.opposite();
        (0..self.side_len(other))
            .map(|k| Slot { side: other, index: k })
            .filter(|&w| relation(self, v, w) == wanted)
            .collect()
    }

    pub fn out_slots(&self, v: Slot) -> Vec<Slot> {
        self.related(v, Relation::Out)
    }

    pub fn in_slots(&self, v: Slot) -> Vec<Slot> {
        self.related(v, Relation::In)
    }

    pub fn perp_slots(&self, v: Slot) -> Vec<Slot> {
        self.related(v, Relation::Perp)
    }

    fn ids(&self, slots: Vec<Slot>) -> Vec<String> {
        slots.into_iter().map(|s| self.id(s).to_string()).collect()
    }

    /// `N+(v)`, in stored order.
    pub fn out_neighbourhood(&self, v: &str) -> Result<Vec<String>> {
        Ok(self.ids(self.out_slots(self.slot(v)?)))
    }

    /// `N-(v)`, in stored order.
    pub fn in_neighbourhood(&self, v: &str) -> Result<Vec<String>> {
        Ok(self.ids(self.in_slots(self.slot(v)?)))
    }

    /// Opposite-side vertices adjacent to `v` in neither direction.
    pub fn perp(&self, v: &str) -> Result<Vec<String>> {
        Ok(self.ids(self.perp_slots(self.slot(v)?)))
    }

    pub fn degree_triple(&self, v: Slot) -> DegreeTriple {
        let other = v.side.opposite();
        let mut t = DegreeTriple::new(0, 0, 0);
        for k in 0..self.side_len(other) {
            match relation(self, v, Slot { side: other, index: k }) {
                Relation::Out => t.out += 1,
                Relation::In => t.inn += 1,
                Relation::Perp => t.perp += 1,
            }
        }
        t
    }

    /// `(outdeg, indeg, perpdeg)` for every vertex, left side first.
    pub fn degree_profile(&self) -> Vec<(Vertex, DegreeTriple)> {
        self.slots().map(|s| (Vertex { id: self.id(s).to_string(), side: s.side }, self.degree_triple(s))).collect()
    }

    /// The substructure induced on `ids`. Vertices and arcs keep their stored order.
    pub fn induced<S: AsRef<str>>(&self, ids: &[S]) -> Result<Self> {
        let mut keep_left = vec![false; self.m()];
        let mut keep_right = vec![false; self.n()];
        for id in ids {
            let slot = self.slot(id.as_ref())?;
            match slot.side {
                Side::Left => keep_left[slot.index] = true,
                Side::Right => keep_right[slot.index] = true,
            }
        }
        let left: Vec<usize> = (0..self.m()).filter(|&i| keep_left[i]).collect();
        let right: Vec<usize> = (0..self.n()).filter(|&j| keep_right[j]).collect();
        Ok(self.induced_slots(&left, &right))
    }

    /// Substructure on the given left and right indices (each ascending).
    pub fn induced_slots(&self, left: &[usize], right: &[usize]) -> Self {
        let left_ids: Vec<String> = left.iter().map(|&i| self.left[i].clone()).collect();
        let right_ids: Vec<String> = right.iter().map(|&j| self.right[j].clone()).collect();
        let mut states = Vec::with_capacity(left.len() * right.len());
        for &i in left {
            for &j in right {
                states.push(self.state(i, j));
            }
        }
        let index = index_sides(&left_ids, &right_ids).expect("subset of valid ids");
        let edges =
            self.edges.iter().filter(|(a, b)| index.contains_key(a) && index.contains_key(b)).cloned().collect();
        TwoPartiteDigraph { left: left_ids, right: right_ids, edges, states, index }
    }

    pub fn underlying_bipartite(&self) -> UndirectedBipartiteGraph {
        let adjacency = self.states.iter().map(|s| s.is_adjacent()).collect();
        UndirectedBipartiteGraph::from_adjacency(self.left.clone(), self.right.clone(), adjacency)
            .expect("ids already validated")
    }

    /// True when all arcs share one direction (vacuously true without arcs).
    pub fn is_bipartite_digraph(&self) -> bool {
        let has = |s| self.states.contains(&s);
        !(has(PairState::LeftToRight) && has(PairState::RightToLeft))
    }

    /// Common direction of all arcs; `None` when edgeless or mixed.
    pub fn direction(&self) -> Option<Direction> {
        let ltr = self.states.contains(&PairState::LeftToRight);
        let rtl = self.states.contains(&PairState::RightToLeft);
        match (ltr, rtl) {
            (true, false) => Some(Direction::LeftToRight),
            (false, true) => Some(Direction::RightToLeft),
            _ => None,
        }
    }

    pub fn is_complete(&self) -> bool {
        self.states.iter().all(|s| s.is_adjacent())
    }

    /// Exchanges the roles of the two sides. Arcs are unchanged as ordered pairs.
    pub fn swap_sides(&self) -> Self {
        let (m, n) = (self.m(), self.n());
        let mut states = vec![PairState::None; m * n];
        for i in 0..m {
            for j in 0..n {
                states[j * m + i] = self.state(i, j).reversed();
            }
        }
        let index = index_sides(&self.right, &self.left).expect("ids already validated");
        TwoPartiteDigraph {
            left: self.right.clone(),
            right: self.left.clone(),
            edges: self.edges.clone(),
            states,
            index,
        }
    }

    /// Renames vertices; `rename` must be injective on the vertex set.
    pub fn relabel(&self, mut rename: impl FnMut(&str) -> String) -> Result<Self> {
        let left = self.left.iter().map(|s| rename(s)).collect();
        let right = self.right.iter().map(|s| rename(s)).collect();
        Self::from_states(left, right, self.states.clone())
    }

    pub fn to_file(&self) -> DigraphFile {
        DigraphFile { x: self.left.clone(), y: self.right.clone(), edges: self.edges.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("plain strings serialize")
    }

    /// Parses the canonical JSON file format, reporting the offending record on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: DigraphFile = serde_json::from_str(text).map_err(|e| {
            let message = e.to_string();
            let position = format!(" at line {} column {}", e.line(), e.column());
            let message = message.strip_suffix(&position).unwrap_or(&message);
            Error::Format(format!("line {}, column {}: {message}", e.line(), e.column()))
        })?;
        file.into_digraph()
    }

    /// Graphviz rendering: left vertices as boxes, right vertices as ellipses.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph D {\n  rankdir=LR;\n");
        out.push_str("  subgraph left { rank=same;\n");
        for id in &self.left {
            out.push_str(&format!("    {} [shape=box];\n", dot_quote(id)));
        }
        out.push_str("  }\n  subgraph right { rank=same;\n");
        for id in &self.right {
            out.push_str(&format!("    {} [shape=ellipse];\n", dot_quote(id)));
        }
        out.push_str("  }\n");
        for (a, b) in &self.edges {
            out.push_str(&format!("  {} -> {};\n", dot_quote(a), dot_quote(b)));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_quote(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

pub(crate) fn default_ids(prefix: char, count: usize) -> Vec<String> {
    (1..=count).map(|k| format!("{prefix}{k}")).collect()
}

/// How an opposite-side vertex `w` stands relative to `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Relation {
    /// `v -> w`
    Out,
    /// `w -> v`
    In,
    Perp,
}

#[inline]
pub(crate) fn relation(d: &TwoPartiteDigraph, v: Slot, w: Slot) -> Relation {
    if d.has_arc(v, w) {
        Relation::Out
    } else if d.has_arc(w, v) {
        Relation::In
    } else {
        Relation::Perp
    }
}

/// On-disk form: `{"x": [ids], "y": [ids], "edges": [[src, dst], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DigraphFile {
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl DigraphFile {
    pub fn into_digraph(self) -> Result<TwoPartiteDigraph> {
        TwoPartiteDigraph::build_located(self.x, self.y, self.edges)
            .map_err(|(e, loc)| Error::Format(format!("{loc}: {e}")))
    }
}

impl Serialize for TwoPartiteDigraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TwoPartiteDigraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        DigraphFile::deserialize(deserializer)?.into_digraph().map_err(serde::de::Error::custom)
    }
}

/// A bipartite graph without orientation.
#[derive(Clone, Debug)]
pub struct UndirectedBipartiteGraph {
    left: Vec<String>,
    right: Vec<String>,
    adjacency: Vec<bool>,
}

impl PartialEq for UndirectedBipartiteGraph {
    fn eq(&self, other: &Self) -> bool {
        self.left == other.left && self.right == other.right && self.adjacency == other.adjacency
    }
}

impl Eq for UndirectedBipartiteGraph {}

impl UndirectedBipartiteGraph {
    /// Edges may name their endpoints in either order.
    pub fn build<S: Into<String>>(
        left: impl IntoIterator<Item = S>,
        right: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self> {
        let left: Vec<String> = left.into_iter().map(Into::into).collect();
        let right: Vec<String> = right.into_iter().map(Into::into).collect();
        let index = index_sides(&left, &right).map_err(|(e, _)| e)?;
        let n = right.len();
        let mut adjacency = vec![false; left.len() * n];
        for (a, b) in edges {
            let (a, b): (String, String) = (a.into(), b.into());
            let (Some(&sa), Some(&sb)) = (index.get(&a), index.get(&b)) else {
                return Err(Error::UnknownEndpoint(a, b));
            };
            match (sa.side, sb.side) {
                (Side::Left, Side::Right) => adjacency[sa.index * n + sb.index] = true,
                (Side::Right, Side::Left) => adjacency[sb.index * n + sa.index] = true,
                _ => return Err(Error::SameSideEdge(a, b)),
            }
        }
        Ok(UndirectedBipartiteGraph { left, right, adjacency })
    }

    pub fn from_adjacency(left: Vec<String>, right: Vec<String>, adjacency: Vec<bool>) -> Result<Self> {
        assert_eq!(adjacency.len(), left.len() * right.len(), "adjacency matrix has wrong size");
        index_sides(&left, &right).map_err(|(e, _)| e)?;
        Ok(UndirectedBipartiteGraph { left, right, adjacency })
    }

    pub fn left(&self) -> &[String] {
        &self.left
    }

    pub fn right(&self) -> &[String] {
        &self.right
    }

    pub fn m(&self) -> usize {
        self.left.len()
    }

    pub fn n(&self) -> usize {
        self.right.len()
    }

    #[inline]
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.right.len() + j]
    }

    /// Edges as `(left id, right id)`, row-major.
    pub fn edges(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for i in 0..self.m() {
            for j in 0..self.n() {
                if self.adjacent(i, j) {
                    out.push((self.left[i].clone(), self.right[j].clone()));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&a| a).count()
    }

    pub fn left_degree(&self, i: usize) -> usize {
        (0..self.n()).filter(|&j| self.adjacent(i, j)).count()
    }

    pub fn right_degree(&self, j: usize) -> usize {
        (0..self.m()).filter(|&i| self.adjacent(i, j)).count()
    }

    /// Neighbours of `id`, in stored order.
    pub fn neighbourhood(&self, id: &str) -> Result<Vec<String>> {
        if let Some(i) = self.left.iter().position(|s| s == id) {
            return Ok((0..self.n()).filter(|&j| self.adjacent(i, j)).map(|j| self.right[j].clone()).collect());
        }
        if let Some(j) = self.right.iter().position(|s| s == id) {
            return Ok((0..self.m()).filter(|&i| self.adjacent(i, j)).map(|i| self.left[i].clone()).collect());
        }
        Err(Error::UnknownVertex(id.to_string()))
    }

    pub fn induced<S: AsRef<str>>(&self, ids: &[S]) -> Result<Self> {
        self.as_digraph().induced(ids).map(|d| d.underlying_bipartite())
    }

    /// Encodes every edge as a left-to-right arc, the canonical pair state used to run
    /// directed machinery (isomorphism, homogeneity) on undirected graphs.
    pub fn as_digraph(&self) -> TwoPartiteDigraph {
        let states = self.adjacency.iter().map(|&a| if a { PairState::LeftToRight } else { PairState::None }).collect();
        TwoPartiteDigraph::from_states(self.left.clone(), self.right.clone(), states).expect("ids already validated")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2() -> TwoPartiteDigraph {
        TwoPartiteDigraph::build(["x1", "x2"], ["y1", "y2"], [("x1", "y1"), ("x2", "y2"), ("y1", "x2"), ("y2", "x1")])
            .unwrap()
    }

    #[test]
    fn build_smallest_structure() {
        let d = TwoPartiteDigraph::build(["x1"], ["y1"], [("x1", "y1")]).unwrap();
        assert_eq!(d.edges().len(), 1);
        assert_eq!(d.state(0, 0), PairState::LeftToRight);
    }

    #[test]
    fn build_errors() {
        let err = TwoPartiteDigraph::build(["x1"], ["y1"], [("x1", "y1"), ("y1", "x1")]).unwrap_err();
        assert!(matches!(err, Error::SymmetricEdgePair(..)));
        let err = TwoPartiteDigraph::build(["x1"], ["x1"], Vec::<(&str, &str)>::new()).unwrap_err();
        assert!(matches!(err, Error::SideOverlap(_)));
        let err = TwoPartiteDigraph::build(["x1", "x1"], ["y1"], Vec::<(&str, &str)>::new()).unwrap_err();
        assert!(matches!(err, Error::DuplicateVertex(_)));
        let err = TwoPartiteDigraph::build(["x1", "x2"], ["y1"], [("x1", "x2")]).unwrap_err();
        assert!(matches!(err, Error::SameSideEdge(..)));
        let err = TwoPartiteDigraph::build(["x1"], ["y1"], [("x1", "y9")]).unwrap_err();
        assert!(matches!(err, Error::UnknownEndpoint(..)));
    }

    #[test]
    fn edge_order_does_not_affect_equality() {
        let a = TwoPartiteDigraph::build(["x1"], ["y1", "y2"], [("x1", "y1"), ("y2", "x1")]).unwrap();
        let b = TwoPartiteDigraph::build(["x1"], ["y1", "y2"], [("y2", "x1"), ("x1", "y1")]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn neighbourhoods_of_m2() {
        let d = m2();
        assert_eq!(d.out_neighbourhood("x1").unwrap(), vec!["y1"]);
        assert_eq!(d.in_neighbourhood("x1").unwrap(), vec!["y2"]);
        assert!(d.perp("x1").unwrap().is_empty());
        assert!(matches!(d.out_neighbourhood("z"), Err(Error::UnknownVertex(_))));
        assert!(!d.is_bipartite_digraph());
    }

    #[test]
    fn induced_edge_cases() {
        let d = m2();
        assert_eq!(d.induced(&["x1", "y1", "x2", "y2"]).unwrap(), d);
        let e = d.induced(&["x1", "y1"]).unwrap();
        assert_eq!(e.edges(), &[("x1".to_string(), "y1".to_string())]);
        let z = d.induced::<&str>(&[]).unwrap();
        assert_eq!((z.m(), z.n(), z.edges().len()), (0, 0, 0));
        assert!(d.induced(&["q"]).is_err());
    }

    #[test]
    fn swap_twice_is_identity() {
        let d = m2();
        let s = d.swap_sides();
        assert_eq!(s.left(), d.right());
        assert_eq!(s.swap_sides(), d);
        assert_eq!(s.out_neighbourhood("x1").unwrap(), vec!["y1"]);
    }

    #[test]
    fn json_reader_reports_record() {
        let err = TwoPartiteDigraph::from_json(r#"{"x":["a"],"y":["b"],"edges":[["a","b"],["b","a"]]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.starts_with("edges[1]:"), "{err}");
        let err = TwoPartiteDigraph::from_json("{\"x\": [\"a\"],\n \"y\": 3}").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn json_writer_keeps_stored_order() {
        let text = r#"{"x":["b","a"],"y":["c"],"edges":[["c","a"],["b","c"]]}"#;
        let d = TwoPartiteDigraph::from_json(text).unwrap();
        assert_eq!(d.to_json(), text);
    }

    #[test]
    fn dot_shapes() {
        let dot = m2().to_dot();
        assert!(dot.contains("\"x1\" [shape=box]"));
        assert!(dot.contains("\"y2\" [shape=ellipse]"));
        assert!(dot.contains("\"y1\" -> \"x2\""));
    }

    #[test]
    fn underlying_of_undirected_roundtrip() {
        let g = UndirectedBipartiteGraph::build(["x1", "x2"], ["y1"], [("y1", "x2")]).unwrap();
        assert_eq!(g.as_digraph().underlying_bipartite(), g);
        assert_eq!(g.neighbourhood("y1").unwrap(), vec!["x2"]);
        assert_eq!(g.left_degree(0), 0);
    }
}
