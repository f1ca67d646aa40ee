//! Side-respecting colour refinement driven by pair states.

use crate::digraph::{Side, Slot, TwoPartiteDigraph};

/// Vertex colours per side. Colours are ranks, so equal colourings of two
/// isomorphic coloured structures name corresponding cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Coloring {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

impl Coloring {
    pub fn uniform(d: &TwoPartiteDigraph) -> Coloring {
        Coloring { left: vec![0; d.m()], right: vec![0; d.n()] }
    }

    /// Vertices of `prefix` get colours `1, 2, ...` in order, everything else `0`.
    pub fn individualized(d: &TwoPartiteDigraph, prefix: &[Slot]) -> Coloring {
        let mut c = Coloring::uniform(d);
        for (k, s) in prefix.iter().enumerate() {
            *c.get_mut(*s) = k as u32 + 1;
        }
        c.normalize();
        c
    }

    pub fn side(&self, side: Side) -> &[u32] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn get(&self, s: Slot) -> u32 {
        self.side(s.side)[s.index]
    }

    fn get_mut(&mut self, s: Slot) -> &mut u32 {
        match s.side {
            Side::Left => &mut self.left[s.index],
            Side::Right => &mut self.right[s.index],
        }
    }

    fn normalize(&mut self) {
        self.left = ranks(&self.left);
        self.right = ranks(&self.right);
    }

    pub fn cells(&self, side: Side) -> usize {
        self.side(side).iter().max().map_or(0, |&c| c as usize + 1)
    }

    #[cfg(test)]
    pub fn is_discrete(&self) -> bool {
        self.cells(Side::Left) == self.left.len() && self.cells(Side::Right) == self.right.len()
    }

    /// Splits `v` off its cell, placing it first.
    pub fn individualize(&self, v: Slot) -> Coloring {
        let mut next = self.clone();
        let keys: Vec<(u32, bool)> = self.side(v.side).iter().enumerate().map(|(k, &c)| (c, k != v.index)).collect();
        let ranked = ranks(&keys);
        match v.side {
            Side::Left => next.left = ranked,
            Side::Right => next.right = ranked,
        }
        next
    }

    /// Members of the first non-singleton cell, left side before right.
    pub fn target_cell(&self) -> Option<(Side, Vec<usize>)> {
        for side in [Side::Left, Side::Right] {
            let colors = self.side(side);
            let mut sizes = vec![0usize; self.cells(side)];
            for &c in colors {
                sizes[c as usize] += 1;
            }
            if let Some(cell) = sizes.iter().position(|&s| s > 1) {
                let members = (0..colors.len()).filter(|&k| colors[k] as usize == cell).collect();
                return Some((side, members));
            }
        }
        None
    }
}

/// Dense ranks of `keys` (equal keys share a rank, order preserved).
pub(crate) fn ranks<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).expect("present") as u32).collect()
}

/// Refines to the coarsest equitable colouring below `start`: each vertex is
/// re-coloured by its colour plus, for every opposite cell, how many members it
/// sends arcs to, receives arcs from, and is not adjacent to. The first round
/// from a uniform colouring is exactly the (outdeg, indeg, perpdeg) triple.
pub(crate) fn refine(d: &TwoPartiteDigraph, start: &Coloring) -> Coloring {
    let mut c = start.clone();
    loop {
        let (cl, cr) = (c.cells(Side::Left), c.cells(Side::Right));
        let left = signatures(d, &c, Side::Left, cr);
        let right = signatures(d, &c, Side::Right, cl);
        let next = Coloring { left: ranks(&left), right: ranks(&right) };
        if next.cells(Side::Left) == cl && next.cells(Side::Right) == cr {
            return next;
        }
        c = next;
    }
}

fn signatures(d: &TwoPartiteDigraph, c: &Coloring, side: Side, other_cells: usize) -> Vec<(u32, Vec<u32>)> {
    let other = side.opposite();
    let own = c.side(side);
    let theirs = c.side(other);
    (0..own.len())
        .map(|v| {
            let mut counts = vec![0u32; other_cells * 3];
            for (w, &cw) in theirs.iter().enumerate() {
                let (a, b) = (Slot { side, index: v }, Slot { side: other, index: w });
                let state = d.pair_state(a, b).index();
                counts[cw as usize * 3 + state] += 1;
            }
            (own[v], counts)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{empty_digraph, m_kappa};
    use crate::digraph::Direction;

    #[test]
    fn refinement_splits_by_degree() {
        let d = TwoPartiteDigraph::build(["x1", "x2"], ["y1"], [("x1", "y1")]).unwrap();
        let c = refine(&d, &Coloring::uniform(&d));
        assert_ne!(c.left[0], c.left[1]);
    }

    #[test]
    fn vertex_transitive_structures_stay_uniform() {
        let d = m_kappa(4, Direction::LeftToRight).unwrap();
        let c = refine(&d, &Coloring::uniform(&d));
        assert_eq!((c.cells(Side::Left), c.cells(Side::Right)), (1, 1));
        let c = refine(&d, &c.individualize(Slot::left(2)));
        // x3's partner y3 is split off as well
        assert_eq!(c.right.iter().filter(|&&k| k == c.right[2]).count(), 1);
    }

    #[test]
    fn target_cell_prefers_left() {
        let d = empty_digraph(2, 2);
        let (side, members) = Coloring::uniform(&d).target_cell().unwrap();
        assert_eq!((side, members), (Side::Left, vec![0, 1]));
    }
}
