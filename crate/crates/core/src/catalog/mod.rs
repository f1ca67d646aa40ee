//! Constructors for every class in the classification, plus finite
//! approximants of the generic (infinite) classes.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digraph::{Direction, PairState, Side, Slot, TwoPartiteDigraph};
use crate::error::{Error, Result};
use crate::genericity::{check_generic, generic_level, GenericMode, RawRequirement, Role, RoleMasks};

mod search;

pub use search::{cover_feasible, Infeasible};

/// Reseeded attempts made by the randomized builders before giving up.
pub const ATTEMPT_BUDGET: usize = 32;

pub fn complete_bipartite_digraph(m: usize, n: usize, dir: Direction) -> TwoPartiteDigraph {
    TwoPartiteDigraph::with_default_ids(m, n, vec![dir.state(); m * n])
}

pub fn empty_digraph(m: usize, n: usize) -> TwoPartiteDigraph {
    TwoPartiteDigraph::with_default_ids(m, n, vec![PairState::None; m * n])
}

/// Arcs `x_i -> y_i` (or `y_i -> x_i`).
pub fn matching_digraph(n: usize, dir: Direction) -> TwoPartiteDigraph {
    let states = (0..n * n).map(|k| if k / n == k % n { dir.state() } else { PairState::None }).collect();
    TwoPartiteDigraph::with_default_ids(n, n, states)
}

/// Arcs `x_i -> y_j` for all `i != j` (or reversed).
pub fn complement_matching_digraph(n: usize, dir: Direction) -> TwoPartiteDigraph {
    let states = (0..n * n).map(|k| if k / n != k % n { dir.state() } else { PairState::None }).collect();
    TwoPartiteDigraph::with_default_ids(n, n, states)
}

/// `M_kappa`: the perfect matching `{x_i, y_i}` runs in `matching_dir`, every other
/// cross pair runs the opposite way.
pub fn m_kappa(kappa: usize, matching_dir: Direction) -> Result<TwoPartiteDigraph> {
    if kappa < 2 {
        return Err(Error::KappaTooSmall(kappa));
    }
    let n = kappa;
    let states = (0..n * n)
        .map(|k| if k / n == k % n { matching_dir.state() } else { matching_dir.reversed().state() })
        .collect();
    Ok(TwoPartiteDigraph::with_default_ids(n, n, states))
}

/// The directed 4-cycle `x1 -> y1 -> x2 -> y2 -> x1`, written out arc by arc.
pub fn directed_four_cycle() -> TwoPartiteDigraph {
    TwoPartiteDigraph::build(["x1", "x2"], ["y1", "y2"], [("x1", "y1"), ("y1", "x2"), ("x2", "y2"), ("y2", "x1")])
        .expect("valid cycle")
}

/// Parameters of a finite approximant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproximantSpec {
    pub side_size: usize,
    pub level: usize,
    pub seed: u64,
    pub growth_cap: usize,
}

impl ApproximantSpec {
    pub fn new(side_size: usize, level: usize, seed: u64) -> Self {
        ApproximantSpec { side_size, level, seed, growth_cap: 64 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.side_size == 0 {
            return Err(Error::InvalidSpec("side_size must be positive".into()));
        }
        if self.level > self.side_size {
            return Err(Error::InvalidSpec(format!("level {} exceeds side size {}", self.level, self.side_size)));
        }
        if self.growth_cap == 0 {
            return Err(Error::InvalidSpec("growth_cap must be positive".into()));
        }
        Ok(())
    }
}

/// Maps search symbols to pair states for one generic mode.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Alphabet {
    states: [PairState; 3],
    size: usize,
}

impl Alphabet {
    fn new(mode: GenericMode, dir: Direction) -> Alphabet {
        match mode {
            GenericMode::Bipartite => Alphabet { states: [PairState::None, dir.state(), PairState::None], size: 2 },
            GenericMode::TwoPartite => {
                Alphabet { states: [PairState::LeftToRight, PairState::RightToLeft, PairState::None], size: 2 }
            }
            GenericMode::Orientation => Alphabet { states: PairState::ALL, size: 3 },
        }
    }

    fn to_digraph(self, n: usize, symbols: &[u8]) -> TwoPartiteDigraph {
        TwoPartiteDigraph::with_default_ids(n, n, symbols.iter().map(|&s| self.states[s as usize]).collect())
    }
}

fn attempt_rng(seed: u64, attempt: usize) -> ChaCha8Rng {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    rng
}

/// Random start (uniform over the mode's pair states), local-search repair of the
/// extension property, then verification by the exhaustive checker. Up to
/// [`ATTEMPT_BUDGET`] reseeded attempts.
fn build_generic(spec: &ApproximantSpec, mode: GenericMode, dir: Direction) -> Result<TwoPartiteDigraph> {
    spec.validate()?;
    let n = spec.side_size;
    let alphabet = Alphabet::new(mode, dir);
    let random_start =
        |rng: &mut ChaCha8Rng| -> Vec<u8> { (0..n * n).map(|_| rng.gen_range(0..alphabet.size) as u8).collect() };

    if let Err(why) = cover_feasible(n, alphabet.size, spec.level) {
        let d = alphabet.to_digraph(n, &random_start(&mut attempt_rng(spec.seed, 0)));
        return Err(Error::ApproximantNotFound {
            attempts: 0,
            best_level: generic_level(&d, mode, spec.level),
            reason: Some(why.to_string()),
        });
    }

    let mut best_level = None;
    for attempt in 0..ATTEMPT_BUDGET {
        let mut rng = attempt_rng(spec.seed, attempt);
        let mut symbols = random_start(&mut rng);
        let start = alphabet.to_digraph(n, &symbols);
        if check_generic(&start, mode, spec.level).holds {
            return Ok(start);
        }
        search::repair(&mut symbols, n, alphabet.size, spec.level, &mut rng);
        let d = alphabet.to_digraph(n, &symbols);
        if check_generic(&d, mode, spec.level).holds {
            return Ok(d);
        }
        best_level = best_level.max(generic_level(&d, mode, spec.level));
    }
    Err(Error::ApproximantNotFound { attempts: ATTEMPT_BUDGET, best_level, reason: None })
}

/// One-way bipartite digraph whose underlying graph is level-`t` generic.
pub fn generic_bipartite_approx(spec: &ApproximantSpec, dir: Direction) -> Result<TwoPartiteDigraph> {
    build_generic(spec, GenericMode::Bipartite, dir)
}

/// Complete underlying graph, level-`t` generic 2-partite digraph.
pub fn generic_2partite_approx(spec: &ApproximantSpec) -> Result<TwoPartiteDigraph> {
    build_generic(spec, GenericMode::TwoPartite, Direction::LeftToRight)
}

/// Level-`t` generic orientation of a generic bipartite graph.
pub fn generic_orientation_approx(spec: &ApproximantSpec) -> Result<TwoPartiteDigraph> {
    build_generic(spec, GenericMode::Orientation, Direction::LeftToRight)
}

fn fresh_id(d_ids: &std::collections::HashSet<String>, prefix: char, start: usize) -> (String, usize) {
    let mut k = start;
    loop {
        let id = format!("{prefix}{k}");
        if !d_ids.contains(&id) {
            return (id, k + 1);
        }
        k += 1;
    }
}

/// Adds fresh witnesses until every requirement of size `<= level` over the
/// original vertices has one, or `cap` vertices have been added.
///
/// Pairs a witness is not constrained on get `PairState::None`, except in
/// `TwoPartite` mode where they are oriented left to right.
pub fn witness_closure(
    d: &TwoPartiteDigraph,
    mode: GenericMode,
    level: usize,
    cap: usize,
) -> Result<TwoPartiteDigraph> {
    let (m0, n0) = (d.m(), d.n());
    let edge_state = d.direction().unwrap_or(Direction::LeftToRight).state();
    let default_state = match mode {
        GenericMode::TwoPartite => PairState::LeftToRight,
        _ => PairState::None,
    };

    let mut left: Vec<String> = d.left().to_vec();
    let mut right: Vec<String> = d.right().to_vec();
    // rows[i][j]: state of (left[i], right[j]); grown as witnesses arrive
    let mut rows: Vec<Vec<PairState>> = (0..m0).map(|i| (0..n0).map(|j| d.state(i, j)).collect()).collect();
    let mut taken: std::collections::HashSet<String> = left.iter().chain(right.iter()).cloned().collect();
    let (mut next_x, mut next_y) = (m0 + 1, n0 + 1);
    let mut added = 0usize;

    let snapshot = |left: &[String], right: &[String], rows: &[Vec<PairState>]| {
        TwoPartiteDigraph::from_states(left.to_vec(), right.to_vec(), rows.concat()).expect("fresh ids are unique")
    };
    let role_state = |side: Side, role: Role| -> PairState {
        // state of the pair (member on `side`, witness on the other side)
        match (mode, role) {
            (GenericMode::Bipartite, Role::A) => edge_state,
            (_, Role::C) => PairState::None,
            // member on the left, witness w on the right: A means w -> member
            (_, Role::A) if side == Side::Left => PairState::RightToLeft,
            (_, Role::A) => PairState::LeftToRight,
            (_, Role::B) if side == Side::Left => PairState::LeftToRight,
            (_, Role::B) => PairState::RightToLeft,
        }
    };

    for side in [Side::Left, Side::Right] {
        let current = snapshot(&left, &right, &rows);
        let members = if side == Side::Left { m0 } else { n0 };
        let defects: Vec<RawRequirement> = restricted_defects(&current, mode, side, members, level);
        for (k, req) in defects.iter().enumerate() {
            let current = snapshot(&left, &right, &rows);
            if witnessed(&current, mode, req) {
                continue;
            }
            if added == cap {
                let mut remaining = Vec::new();
                for r in &defects[k..] {
                    if !witnessed(&current, mode, r) {
                        remaining.push(r.clone());
                    }
                }
                let ids = current.side(side).to_vec();
                return Err(Error::CapExceeded {
                    cap,
                    partial: Box::new(current),
                    remaining: remaining.iter().map(|r| r.with_ids(&ids)).collect(),
                });
            }
            let demand = |u: usize| -> Option<PairState> {
                [(Role::A, &req.a), (Role::B, &req.b), (Role::C, &req.c)]
                    .into_iter()
                    .find(|(_, set)| set.contains(&u))
                    .map(|(role, _)| role_state(side, role))
            };
            match side {
                Side::Left => {
                    let (id, next) = fresh_id(&taken, 'y', next_y);
                    next_y = next;
                    taken.insert(id.clone());
                    right.push(id);
                    for (i, row) in rows.iter_mut().enumerate() {
                        let s = if i < m0 { demand(i).unwrap_or(default_state) } else { default_state };
                        row.push(s);
                    }
                }
                Side::Right => {
                    let (id, next) = fresh_id(&taken, 'x', next_x);
                    next_x = next;
                    taken.insert(id.clone());
                    left.push(id);
                    let row = (0..right.len())
                        .map(|j| if j < n0 { demand(j).unwrap_or(default_state) } else { default_state })
                        .collect();
                    rows.push(row);
                }
            }
            added += 1;
        }
    }
    Ok(snapshot(&left, &right, &rows))
}

/// Defects among requirements whose members are the first `members` vertices of `side`.
fn restricted_defects(
    d: &TwoPartiteDigraph,
    mode: GenericMode,
    side: Side,
    members: usize,
    level: usize,
) -> Vec<RawRequirement> {
    let (left, right): (Vec<usize>, Vec<usize>) = match side {
        Side::Left => ((0..members).collect(), (0..d.n()).collect()),
        Side::Right => ((0..d.m()).collect(), (0..members).collect()),
    };
    let sub = d.induced_slots(&left, &right);
    let masks = match mode {
        GenericMode::Bipartite => RoleMasks::for_undirected(&sub.underlying_bipartite(), side),
        _ => RoleMasks::for_digraph(&sub, side),
    };
    let mut out = masks.defects(side, mode.roles(), level);
    out.sort();
    out
}

fn witnessed(d: &TwoPartiteDigraph, mode: GenericMode, req: &RawRequirement) -> bool {
    let members: Vec<(usize, Role)> = req
        .a
        .iter()
        .map(|&u| (u, Role::A))
        .chain(req.b.iter().map(|&u| (u, Role::B)))
        .chain(req.c.iter().map(|&u| (u, Role::C)))
        .collect();
    let other = req.side.opposite();
    (0..d.side_len(other)).any(|w| {
        let ws = Slot { side: other, index: w };
        members.iter().all(|&(u, role)| {
            let us = Slot { side: req.side, index: u };
            let rel = crate::digraph::relation(d, ws, us);
            match (mode, role) {
                (GenericMode::Bipartite, Role::A) => rel != crate::digraph::Relation::Perp,
                _ => Role::of(rel) == role,
            }
        })
    })
}
