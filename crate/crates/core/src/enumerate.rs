//! Exhaustive enumeration up to side-preserving isomorphism, the census of
//! homogeneous structures, and its cross-check against the catalog.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{
    complement_matching_digraph, complete_bipartite_digraph, empty_digraph, m_kappa, matching_digraph,
};
use crate::classify::{classify_exact, ClassCase, ClassLabel};
use crate::digraph::{Direction, PairState, Side, Slot, TwoPartiteDigraph};
use crate::error::{Error, Result};
use crate::iso::{canonical_form, CanonicalForm, HomogeneityVerdict};

/// Largest number of cross pairs enumerated without an explicit override.
pub const PAIR_BUDGET: usize = 12;

fn check_budget(m: usize, n: usize, force: bool) -> Result<()> {
    if m * n > PAIR_BUDGET && !force {
        return Err(Error::BudgetExceeded { m, n, pairs: m * n, budget: PAIR_BUDGET });
    }
    Ok(())
}

/// The labeled structure with pair-state vector number `code` (first pair
/// most significant, states in `PairState` order).
pub fn labeled(m: usize, n: usize, mut code: u64) -> TwoPartiteDigraph {
    let mut states = vec![PairState::None; m * n];
    for k in (0..m * n).rev() {
        states[k] = PairState::from_index((code % 3) as usize);
        code /= 3;
    }
    TwoPartiteDigraph::with_default_ids(m, n, states)
}

fn labeled_count(m: usize, n: usize) -> u64 {
    3u64.pow((m * n) as u32)
}

/// Canonical forms of all `m x n` structures, sorted, without duplicates.
pub fn enumerate_classes(m: usize, n: usize, force: bool) -> Result<Vec<CanonicalForm>> {
    check_budget(m, n, force)?;
    let forms: BTreeSet<CanonicalForm> = (0..labeled_count(m, n))
        .into_par_iter()
        .fold(BTreeSet::new, |mut set, code| {
            set.insert(canonical_form(&labeled(m, n, code)));
            set
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(forms.into_iter().collect())
}

/// One representative per side-preserving isomorphism class of `m x n`
/// structures, in canonical-form order.
pub fn enumerate_all(m: usize, n: usize, force: bool) -> Result<Vec<TwoPartiteDigraph>> {
    enumerate_classes(m, n, force)?.iter().map(CanonicalForm::to_digraph).collect()
}

/// Number of classes by orbit counting: the average, over pairs of side
/// permutations, of `3^(cycles on cross pairs)`.
pub fn burnside_count(m: usize, n: usize) -> u64 {
    fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in (1..=n.min(max)).rev() {
            for mut rest in partitions(n - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    fn factorial(n: usize) -> u128 {
        (1..=n as u128).product()
    }
    // permutations of cycle type `parts`: n! / prod(part) / prod(multiplicity!)
    fn class_size(n: usize, parts: &[usize]) -> u128 {
        let mut denom: u128 = parts.iter().map(|&p| p as u128).product();
        let mut k = 0;
        while k < parts.len() {
            let run = parts[k..].iter().take_while(|&&p| p == parts[k]).count();
            denom *= factorial(run);
            k += run;
        }
        factorial(n) / denom
    }
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut total: u128 = 0;
    for p in partitions(m, m) {
        for q in partitions(n, n) {
            let cycles: usize = p.iter().map(|&a| q.iter().map(|&b| gcd(a, b)).sum::<usize>()).sum();
            total += class_size(m, &p) * class_size(n, &q) * 3u128.pow(cycles as u32);
        }
    }
    (total / (factorial(m) * factorial(n))) as u64
}

/// A homogeneous structure found by the census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub canonical: CanonicalForm,
    pub representative: TwoPartiteDigraph,
    pub verdict: HomogeneityVerdict,
    pub label: ClassLabel,
}

/// All vertices on a side share one (out, in, perp) triple: necessary for
/// homogeneity, since single-vertex maps must extend.
fn side_regular(d: &TwoPartiteDigraph) -> bool {
    [Side::Left, Side::Right].into_iter().all(|side| {
        let triples: Vec<_> = (0..d.side_len(side)).map(|i| d.degree_triple(Slot { side, index: i })).collect();
        triples.windows(2).all(|w| w[0] == w[1])
    })
}

fn entry_for(canonical: CanonicalForm, representative: TwoPartiteDigraph) -> Result<CensusEntry> {
    let label = classify_exact(&representative)?;
    let verdict = label.evidence.homogeneity.clone().expect("exact classification decides homogeneity");
    Ok(CensusEntry { canonical, representative, verdict, label })
}

/// Homogeneous structures with `0 <= m <= m_max`, `0 <= n <= n_max`, each
/// labeled by exact classification, ordered by size then canonical form.
pub fn census_homogeneous(m_max: usize, n_max: usize, force: bool) -> Result<Vec<CensusEntry>> {
    let mut entries = Vec::new();
    for m in 0..=m_max {
        for n in 0..=n_max {
            let classes = enumerate_classes(m, n, force)?;
            let found: Vec<Result<Option<CensusEntry>>> = classes
                .into_par_iter()
                .map(|canonical| {
                    let rep = canonical.to_digraph()?;
                    if !side_regular(&rep) {
                        return Ok(None);
                    }
                    let entry = entry_for(canonical, rep)?;
                    Ok(entry.verdict.holds.then_some(entry))
                })
                .collect();
            for entry in found {
                entries.extend(entry?);
            }
        }
    }
    Ok(entries)
}

/// Catalog constructors whose output fits within the size bounds, with a
/// description of each.
pub fn catalog_in_range(m_max: usize, n_max: usize) -> Vec<(String, TwoPartiteDigraph)> {
    let mut out = Vec::new();
    let dirs = [Direction::LeftToRight, Direction::RightToLeft];
    for m in 0..=m_max {
        for n in 0..=n_max {
            out.push((format!("empty_digraph({m},{n})"), empty_digraph(m, n)));
            for dir in dirs {
                out.push((
                    format!("complete_bipartite_digraph({m},{n},{dir:?})"),
                    complete_bipartite_digraph(m, n, dir),
                ));
            }
        }
    }
    for k in 1..=m_max.min(n_max) {
        for dir in dirs {
            out.push((format!("matching_digraph({k},{dir:?})"), matching_digraph(k, dir)));
            out.push((format!("complement_matching_digraph({k},{dir:?})"), complement_matching_digraph(k, dir)));
            if k >= 2 {
                out.push((format!("m_kappa({k},{dir:?})"), m_kappa(k, dir).expect("kappa >= 2")));
            }
        }
    }
    out
}

/// A disagreement between the census and the classification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub kind: String,
    pub detail: String,
    pub structure: TwoPartiteDigraph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_x: usize,
    pub max_y: usize,
    pub census_size: usize,
    pub bipartite_entries: usize,
    pub m_kappa_entries: usize,
    pub catalog_checked: usize,
    pub passed: bool,
    pub discrepancies: Vec<Discrepancy>,
}

/// Checks a census: every entry re-classifies to its recorded label, is
/// homogeneous, and is labeled as a bipartite homogeneous digraph or an
/// M_kappa; every catalog structure in range appears.
pub fn verify_census(census: &[CensusEntry], m_max: usize, n_max: usize) -> VerifyReport {
    let mut discrepancies = Vec::new();
    let mut report = |kind: &str, detail: String, structure: &TwoPartiteDigraph| {
        discrepancies.push(Discrepancy { kind: kind.into(), detail, structure: structure.clone() });
    };
    let (mut bipartite, mut kappa) = (0, 0);
    for entry in census {
        let rep = &entry.representative;
        if canonical_form(rep) != entry.canonical {
            report("canonical-mismatch", "representative does not have the recorded canonical form".into(), rep);
        }
        match classify_exact(rep) {
            Ok(label) => {
                if label.case != entry.label.case {
                    report(
                        "label-mismatch",
                        format!("recorded {}, recomputed {}", entry.label.case.name(), label.case.name()),
                        rep,
                    );
                }
                if let ClassCase::NotHomogeneous { counterexample } = &label.case {
                    report("not-homogeneous", format!("{counterexample} does not extend"), rep);
                }
            }
            Err(e) => report("error", e.to_string(), rep),
        }
        match &entry.label.case {
            ClassCase::BipartiteHomogeneous { .. } => bipartite += 1,
            ClassCase::MKappa { .. } => kappa += 1,
            other => report("unexpected-case", format!("labeled {}", other.name()), rep),
        }
    }
    let forms: BTreeSet<&CanonicalForm> = census.iter().map(|e| &e.canonical).collect();
    let catalog = catalog_in_range(m_max, n_max);
    for (name, d) in &catalog {
        if !forms.contains(&canonical_form(d)) {
            report("missing-catalog-structure", format!("{name} is not in the census"), d);
        }
    }
    VerifyReport {
        max_x: m_max,
        max_y: n_max,
        census_size: census.len(),
        bipartite_entries: bipartite,
        m_kappa_entries: kappa,
        catalog_checked: catalog.len(),
        passed: discrepancies.is_empty(),
        discrepancies,
    }
}

/// Builds the census and verifies it.
pub fn verify_theorem_finite(m_max: usize, n_max: usize, force: bool) -> Result<VerifyReport> {
    let census = census_homogeneous(m_max, n_max, force)?;
    Ok(verify_census(&census, m_max, n_max))
}

/// Writes one JSON object per line.
pub fn write_jsonl<W: Write>(entries: &[CensusEntry], mut out: W) -> Result<()> {
    for entry in entries {
        let line = serde_json::to_string(entry).map_err(|e| Error::Format(e.to_string()))?;
        writeln!(out, "{line}").map_err(|e| Error::Format(e.to_string()))?;
    }
    Ok(())
}

/// Reads entries written by [`write_jsonl`]; errors name the line.
pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<CensusEntry>> {
    let mut entries = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::Format(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let entry = serde_json::from_str(&line).map_err(|e| Error::Format(format!("line {}: {e}", k + 1)))?;
        entries.push(entry);
    }
    Ok(entries)
}
