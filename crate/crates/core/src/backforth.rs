//! Finite-stage back-and-forth: grows a partial isomorphism between two
//! structures by alternately matching a vertex of the first (forth) and of
//! the second (back), using extension-property witnesses.

use serde::{Deserialize, Serialize};

use crate::catalog::{generic_2partite_approx, generic_orientation_approx, ApproximantSpec};
use crate::digraph::{relation, Side, Slot, TwoPartiteDigraph};
use crate::error::{Error, Result};
use crate::genericity::{first_non_adjacent, scan_excluding, GenericMode, Requirement, Role};
use crate::iso::PartialMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BafDirection {
    Forth,
    Back,
}

/// One extension step. `requirement` lives in the structure the witness was
/// found in; `vertex` is the newly matched vertex of the other structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BafStep {
    pub direction: BafDirection,
    pub vertex: String,
    pub requirement: Requirement,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BafTrace {
    pub steps: Vec<BafStep>,
    /// Map from the first structure to the second.
    pub result: PartialMap,
}

/// Vertex orders for the forth and back picks. Vertices left out are taken
/// afterwards in stored order, alternating sides: x1, y1, x2, y2, ...
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexOrder {
    pub first: Vec<String>,
    pub second: Vec<String>,
}

fn pick_order(d: &TwoPartiteDigraph, preferred: &[String]) -> Result<Vec<Slot>> {
    let mut order = Vec::with_capacity(d.vertex_count());
    let mut seen = vec![false; d.vertex_count()];
    let flat = |s: Slot| if s.side == Side::Left { s.index } else { d.m() + s.index };
    for id in preferred {
        let s = d.slot(id)?;
        if !std::mem::replace(&mut seen[flat(s)], true) {
            order.push(s);
        }
    }
    // remaining vertices alternate sides (x1, y1, x2, y2, ...), so requirements grow on both sides
    let interleaved = (0..d.m().max(d.n())).flat_map(|i| {
        let left = (i < d.m()).then_some(Slot::left(i));
        let right = (i < d.n()).then_some(Slot::right(i));
        left.into_iter().chain(right)
    });
    for s in interleaved {
        if !seen[flat(s)] {
            order.push(s);
        }
    }
    Ok(order)
}

/// Matching state in one direction: `map[side][i]` is the partner of slot `i`.
struct Half {
    left: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
}

impl Half {
    fn new(d: &TwoPartiteDigraph) -> Half {
        Half { left: vec![None; d.m()], right: vec![None; d.n()] }
    }

    fn side(&self, side: Side) -> &[Option<usize>] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn set(&mut self, s: Slot, partner: usize) {
        match s.side {
            Side::Left => self.left[s.index] = Some(partner),
            Side::Right => self.right[s.index] = Some(partner),
        }
    }

    fn used(&self, side: Side) -> Vec<bool> {
        self.side(side).iter().map(Option::is_some).collect()
    }
}

/// Requirement (in `dst` ids and indices) that a partner of `v` must meet:
/// the pattern of `v` towards the matched part of the opposite side of `src`.
fn step_requirement(
    src: &TwoPartiteDigraph,
    dst: &TwoPartiteDigraph,
    v: Slot,
    matched: &Half,
) -> (Requirement, Vec<(usize, Role)>) {
    let other = v.side.opposite();
    let mut members: Vec<(usize, Role)> = matched
        .side(other)
        .iter()
        .enumerate()
        .filter_map(|(u, partner)| partner.map(|p| (p, Role::of(relation(src, v, Slot { side: other, index: u })))))
        .collect();
    members.sort_unstable();
    let ids = |role: Role| -> Vec<String> {
        members
            .iter()
            .filter(|m| m.1 == role)
            .map(|&(p, _)| dst.id(Slot { side: other, index: p }).to_string())
            .collect()
    };
    let req = Requirement { side: other, a: ids(Role::A), b: ids(Role::B), c: ids(Role::C) };
    (req, members)
}

/// Largest possible side-preserving partial map between `d1` and `d2`.
fn max_map_size(d1: &TwoPartiteDigraph, d2: &TwoPartiteDigraph) -> usize {
    d1.m().min(d2.m()) + d1.n().min(d2.n())
}

/// Runs back-and-forth until the map has `target_size` pairs. Steps alternate
/// forth/back, starting forth; each takes the first unmatched vertex in the
/// given order and the first unused witness in stored order.
pub fn back_and_forth(
    d1: &TwoPartiteDigraph,
    d2: &TwoPartiteDigraph,
    mode: GenericMode,
    target_size: usize,
    order: Option<&VertexOrder>,
) -> Result<BafTrace> {
    if mode == GenericMode::Bipartite {
        return Err(Error::InvalidSpec("back-and-forth runs in 2partite or orientation mode".into()));
    }
    let max = max_map_size(d1, d2);
    if target_size > max {
        return Err(Error::TargetExceedsStructure { target: target_size, max });
    }
    if mode == GenericMode::TwoPartite && target_size > 0 {
        for d in [d1, d2] {
            if let Some((a, b)) = first_non_adjacent(d) {
                return Err(Error::NotComplete(a, b));
            }
        }
    }
    let default_order = VertexOrder::default();
    let order = order.unwrap_or(&default_order);
    let order1 = pick_order(d1, &order.first)?;
    let order2 = pick_order(d2, &order.second)?;
    let (mut fwd, mut bwd) = (Half::new(d1), Half::new(d2));
    let mut trace = BafTrace::default();
    let mut size = 0;
    while size < target_size {
        let direction = if trace.steps.len() % 2 == 0 { BafDirection::Forth } else { BafDirection::Back };
        let (src, dst, pick, matched, partner) = match direction {
            BafDirection::Forth => (d1, d2, &order1, &fwd, &bwd),
            BafDirection::Back => (d2, d1, &order2, &bwd, &fwd),
        };
        let v =
            *pick.iter().find(|s| matched.side(s.side)[s.index].is_none()).expect("fewer matched vertices than target");
        let (requirement, members) = step_requirement(src, dst, v, matched);
        let Some(w) = scan_excluding(dst, requirement.side, &members, &partner.used(v.side)) else {
            return Err(Error::InsufficientGenericity { step: trace.steps.len(), requirement });
        };
        let w_slot = Slot { side: v.side, index: w };
        match direction {
            BafDirection::Forth => {
                fwd.set(v, w);
                bwd.set(w_slot, v.index);
            }
            BafDirection::Back => {
                bwd.set(v, w);
                fwd.set(w_slot, v.index);
            }
        }
        trace.steps.push(BafStep {
            direction,
            vertex: src.id(v).to_string(),
            requirement,
            witness: dst.id(w_slot).to_string(),
        });
        size += 1;
    }
    let mut pairs = Vec::with_capacity(size);
    for side in [Side::Left, Side::Right] {
        for (i, partner) in fwd.side(side).iter().enumerate() {
            if let Some(p) = partner {
                pairs.push((d1.id(Slot { side, index: i }).to_string(), d2.id(Slot { side, index: *p }).to_string()));
            }
        }
    }
    trace.result = PartialMap { pairs };
    Ok(trace)
}

/// Replays `trace` against `d1`, `d2`: checks alternation, that each step's
/// requirement is the pattern of its vertex, that the witness is fresh and
/// meets it, that every prefix is a partial isomorphism, and that the final
/// map is the recorded result.
pub fn replay(d1: &TwoPartiteDigraph, d2: &TwoPartiteDigraph, trace: &BafTrace) -> Result<()> {
    let bad = |k: usize, msg: String| Error::InvalidPartialMap(format!("step {k}: {msg}"));
    let (mut fwd, mut bwd) = (Half::new(d1), Half::new(d2));
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (k, step) in trace.steps.iter().enumerate() {
        let expected = if k % 2 == 0 { BafDirection::Forth } else { BafDirection::Back };
        if step.direction != expected {
            return Err(bad(k, format!("expected a {expected:?} step")));
        }
        let (src, dst, matched) = match step.direction {
            BafDirection::Forth => (d1, d2, &fwd),
            BafDirection::Back => (d2, d1, &bwd),
        };
        let v = src.slot(&step.vertex)?;
        let w = dst.slot(&step.witness)?;
        if matched.side(v.side)[v.index].is_some() {
            return Err(bad(k, format!("`{}` is already matched", step.vertex)));
        }
        let (requirement, members) = step_requirement(src, dst, v, matched);
        if requirement != step.requirement {
            return Err(bad(k, "requirement does not describe the vertex's pattern".into()));
        }
        let meets = w.side == v.side
            && members
                .iter()
                .all(|&(u, role)| Role::of(relation(dst, w, Slot { side: requirement.side, index: u })) == role);
        if !meets {
            return Err(bad(k, format!("`{}` does not witness the requirement", step.witness)));
        }
        match step.direction {
            BafDirection::Forth => {
                if bwd.side(w.side)[w.index].is_some() {
                    return Err(bad(k, format!("witness `{}` is already used", step.witness)));
                }
                fwd.set(v, w.index);
                bwd.set(w, v.index);
                pairs.push((step.vertex.clone(), step.witness.clone()));
            }
            BafDirection::Back => {
                if fwd.side(w.side)[w.index].is_some() {
                    return Err(bad(k, format!("witness `{}` is already used", step.witness)));
                }
                bwd.set(v, w.index);
                fwd.set(w, v.index);
                pairs.push((step.witness.clone(), step.vertex.clone()));
            }
        }
        PartialMap { pairs: pairs.clone() }.validate(d1, d2).map_err(|e| bad(k, e.to_string()))?;
    }
    if (PartialMap { pairs }).normalized() != trace.result.normalized() {
        return Err(Error::InvalidPartialMap("recorded result differs from the replayed map".into()));
    }
    Ok(())
}

/// Outcome of building two approximants and running back-and-forth on them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub mode: GenericMode,
    pub side_size: usize,
    pub target_size: usize,
    pub seeds: (u64, u64),
    /// Level at which both approximants were built and verified.
    pub verified_level: Option<usize>,
    pub success: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<BafTrace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Builds approximants of side `n` for both seeds (at level `t`, or the
/// highest lower level the builder reaches) and runs back-and-forth to size
/// `t`. Failures are reported, not raised.
pub fn uniqueness_demo(n: usize, t: usize, seed1: u64, seed2: u64, mode: GenericMode) -> Result<UniquenessReport> {
    let build = |level: usize, seed: u64| -> Result<TwoPartiteDigraph> {
        let spec = ApproximantSpec::new(n, level, seed);
        match mode {
            GenericMode::TwoPartite => generic_2partite_approx(&spec),
            GenericMode::Orientation => generic_orientation_approx(&spec),
            GenericMode::Bipartite => {
                Err(Error::InvalidSpec("back-and-forth runs in 2partite or orientation mode".into()))
            }
        }
    };
    let mut report = UniquenessReport {
        mode,
        side_size: n,
        target_size: t,
        seeds: (seed1, seed2),
        verified_level: None,
        success: false,
        trace: None,
        failure: None,
    };
    let mut built = None;
    let mut last_error = None;
    for level in (0..=t.min(n)).rev() {
        match build(level, seed1).and_then(|a| Ok((a, build(level, seed2)?))) {
            Ok(pair) => {
                report.verified_level = Some(level);
                built = Some(pair);
                break;
            }
            Err(e @ Error::InvalidSpec(_)) => return Err(e),
            Err(e) => last_error = Some(e),
        }
    }
    let Some((d1, d2)) = built else {
        report.failure = last_error.map(|e| e.to_string());
        return Ok(report);
    };
    match back_and_forth(&d1, &d2, mode, t, None) {
        Ok(trace) => {
            report.success = true;
            report.trace = Some(trace);
        }
        Err(e) => report.failure = Some(e.to_string()),
    }
    Ok(report)
}
