//! Backtracking searches over individualization-refinement trees: matching two
//! coloured structures (isomorphisms, automorphisms, extensions of partial
//! maps) and the canonical labeling.

use std::ops::ControlFlow;

use super::refine::{refine, Coloring};
use crate::digraph::{Side, Slot, TwoPartiteDigraph};

/// A side-preserving total map between the vertex slots of two structures.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct SlotMap {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl SlotMap {
    pub fn identity(m: usize, n: usize) -> SlotMap {
        SlotMap { left: (0..m).collect(), right: (0..n).collect() }
    }

    pub fn apply(&self, s: Slot) -> Slot {
        let index = match s.side {
            Side::Left => self.left[s.index],
            Side::Right => self.right[s.index],
        };
        Slot { side: s.side, index }
    }

    pub fn fixes(&self, s: Slot) -> bool {
        self.apply(s) == s
    }

    /// Map sending the vertex coloured `k` in `from` to the vertex coloured `k`
    /// in `to`; both colourings must be discrete.
    fn between(from: &Coloring, to: &Coloring) -> SlotMap {
        let invert = |colors: &[u32]| {
            let mut inv = vec![0; colors.len()];
            for (v, &c) in colors.iter().enumerate() {
                inv[c as usize] = v;
            }
            inv
        };
        let (il, ir) = (invert(&to.left), invert(&to.right));
        SlotMap {
            left: from.left.iter().map(|&c| il[c as usize]).collect(),
            right: from.right.iter().map(|&c| ir[c as usize]).collect(),
        }
    }

    /// Whether the map carries every pair state of `a` onto `b`.
    pub fn preserves(&self, a: &TwoPartiteDigraph, b: &TwoPartiteDigraph) -> bool {
        (0..a.m()).all(|i| (0..a.n()).all(|j| a.state(i, j) == b.state(self.left[i], self.right[j])))
    }
}

/// Cell sizes and per cell-pair state counts of an equitable colouring. Equal
/// quotients are necessary for the two coloured structures to be isomorphic.
fn quotient(d: &TwoPartiteDigraph, c: &Coloring) -> Vec<u32> {
    let (cl, cr) = (c.cells(Side::Left), c.cells(Side::Right));
    let mut q = vec![0u32; cl + cr + cl * cr * 3];
    for &k in &c.left {
        q[k as usize] += 1;
    }
    for &k in &c.right {
        q[cl + k as usize] += 1;
    }
    for i in 0..d.m() {
        for j in 0..d.n() {
            q[cl + cr + (c.left[i] as usize * cr + c.right[j] as usize) * 3 + d.state(i, j).index()] += 1;
        }
    }
    q
}

/// Calls `visit` on every side-preserving isomorphism `a -> b` that extends
/// the pairs in `fixed`, stopping early when `visit` breaks. The pairs must
/// already preserve structure among themselves.
pub(crate) fn for_each_isomorphism(
    a: &TwoPartiteDigraph,
    b: &TwoPartiteDigraph,
    fixed: &[(Slot, Slot)],
    visit: &mut dyn FnMut(&SlotMap) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if a.m() != b.m() || a.n() != b.n() {
        return ControlFlow::Continue(());
    }
    let sources: Vec<Slot> = fixed.iter().map(|p| p.0).collect();
    let targets: Vec<Slot> = fixed.iter().map(|p| p.1).collect();
    let ca = refine(a, &Coloring::individualized(a, &sources));
    let cb = refine(b, &Coloring::individualized(b, &targets));
    match_colorings(a, b, ca, cb, visit)
}

fn match_colorings(
    a: &TwoPartiteDigraph,
    b: &TwoPartiteDigraph,
    ca: Coloring,
    cb: Coloring,
    visit: &mut dyn FnMut(&SlotMap) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if quotient(a, &ca) != quotient(b, &cb) {
        return ControlFlow::Continue(());
    }
    let Some((side, members)) = ca.target_cell() else {
        let map = SlotMap::between(&ca, &cb);
        if map.preserves(a, b) {
            return visit(&map);
        }
        return ControlFlow::Continue(());
    };
    let v = Slot { side, index: members[0] };
    let color = ca.get(v);
    let next_a = refine(a, &ca.individualize(v));
    for w in 0..cb.side(side).len() {
        if cb.side(side)[w] != color {
            continue;
        }
        let next_b = refine(b, &cb.individualize(Slot { side, index: w }));
        match_colorings(a, b, next_a.clone(), next_b, visit)?;
    }
    ControlFlow::Continue(())
}

/// First isomorphism `a -> b` extending `fixed`, if any.
pub(crate) fn find_isomorphism(
    a: &TwoPartiteDigraph,
    b: &TwoPartiteDigraph,
    fixed: &[(Slot, Slot)],
) -> Option<SlotMap> {
    let mut found = None;
    let _ = for_each_isomorphism(a, b, fixed, &mut |map| {
        found = Some(map.clone());
        ControlFlow::Break(())
    });
    found
}

/// Canonical byte string of the coloured structure read off a discrete
/// colouring: side sizes, then pair states in colour order.
fn leaf_bytes(d: &TwoPartiteDigraph, c: &Coloring) -> Vec<u8> {
    let (m, n) = (d.m(), d.n());
    let mut bytes = Vec::with_capacity(8 + m * n);
    bytes.extend_from_slice(&(m as u32).to_le_bytes());
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    let mut body = vec![0u8; m * n];
    for i in 0..m {
        for j in 0..n {
            body[c.left[i] as usize * n + c.right[j] as usize] = d.state(i, j).index() as u8;
        }
    }
    bytes.extend_from_slice(&body);
    bytes
}

struct Leaf {
    path: Vec<Slot>,
    bytes: Vec<u8>,
    coloring: Coloring,
}

struct Canon<'a> {
    d: &'a TwoPartiteDigraph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<SlotMap>,
}

/// Transpositions of consecutive twins (same-side vertices with identical
/// rows), which are automorphisms known before any search.
fn twin_generators(d: &TwoPartiteDigraph) -> Vec<SlotMap> {
    let mut gens = Vec::new();
    for side in [Side::Left, Side::Right] {
        let len = d.side_len(side);
        let other = d.side_len(side.opposite());
        let row = |v: usize| -> Vec<usize> {
            (0..other)
                .map(|w| d.pair_state(Slot { side, index: v }, Slot { side: side.opposite(), index: w }).index())
                .collect()
        };
        let rows: Vec<Vec<usize>> = (0..len).map(row).collect();
        let mut done = vec![false; len];
        for v in 0..len {
            if done[v] {
                continue;
            }
            let class: Vec<usize> = (v..len).filter(|&w| rows[w] == rows[v]).collect();
            for pair in class.windows(2) {
                let mut g = SlotMap::identity(d.m(), d.n());
                let perm = match side {
                    Side::Left => &mut g.left,
                    Side::Right => &mut g.right,
                };
                perm.swap(pair[0], pair[1]);
                gens.push(g);
            }
            for w in class {
                done[w] = true;
            }
        }
    }
    gens
}

fn divergence(a: &[Slot], b: &[Slot]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl<'a> Canon<'a> {
    /// Whether `v` shares an orbit with an explored sibling under the known
    /// automorphisms fixing `path` pointwise.
    fn pruned(&self, path: &[Slot], side: Side, v: usize, explored: &[usize]) -> bool {
        if explored.is_empty() {
            return false;
        }
        let len = self.d.side_len(side);
        let mut parent: Vec<usize> = (0..len).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for g in &self.generators {
            if !path.iter().all(|&s| g.fixes(s)) {
                continue;
            }
            for u in 0..len {
                let image = g.apply(Slot { side, index: u }).index;
                let (ru, ri) = (find(&mut parent, u), find(&mut parent, image));
                if ru != ri {
                    parent[ru] = ri;
                }
            }
        }
        let root = find(&mut parent, v);
        explored.iter().any(|&w| find(&mut parent, w) == root)
    }

    /// Returns the depth to jump back to when the subtree just finished is
    /// known to be an automorphic image of one already explored.
    fn dfs(&mut self, path: &mut Vec<Slot>, c: Coloring) -> Option<usize> {
        let depth = path.len();
        let Some((side, members)) = c.target_cell() else {
            return self.leaf(path, c);
        };
        let mut explored = Vec::new();
        for &v in &members {
            if self.pruned(path, side, v, &explored) {
                continue;
            }
            explored.push(v);
            let slot = Slot { side, index: v };
            let child = refine(self.d, &c.individualize(slot));
            path.push(slot);
            let jump = self.dfs(path, child);
            path.pop();
            if let Some(k) = jump {
                if k < depth {
                    return Some(k);
                }
            }
        }
        None
    }

    fn leaf(&mut self, path: &[Slot], c: Coloring) -> Option<usize> {
        let bytes = leaf_bytes(self.d, &c);
        let Some(first) = &self.first else {
            let leaf = Leaf { path: path.to_vec(), bytes, coloring: c };
            self.best =
                Some(Leaf { path: leaf.path.clone(), bytes: leaf.bytes.clone(), coloring: leaf.coloring.clone() });
            self.first = Some(leaf);
            return None;
        };
        if bytes == first.bytes {
            self.generators.push(SlotMap::between(&first.coloring, &c));
            return Some(divergence(path, &first.path));
        }
        let best = self.best.as_ref().expect("set with first");
        match bytes.cmp(&best.bytes) {
            std::cmp::Ordering::Less => {
                self.best = Some(Leaf { path: path.to_vec(), bytes, coloring: c });
                None
            }
            std::cmp::Ordering::Equal => {
                self.generators.push(SlotMap::between(&best.coloring, &c));
                Some(divergence(path, &best.path))
            }
            std::cmp::Ordering::Greater => None,
        }
    }
}

/// Canonical bytes of `d` plus the canonical colouring that produced them
/// (vertex -> position, per side).
pub(crate) fn canonical_labeling(d: &TwoPartiteDigraph) -> (Vec<u8>, Coloring) {
    let mut search = Canon { d, first: None, best: None, generators: twin_generators(d) };
    let root = refine(d, &Coloring::uniform(d));
    search.dfs(&mut Vec::new(), root);
    let best = search.best.expect("every tree has a leaf");
    (best.bytes, best.coloring)
}
