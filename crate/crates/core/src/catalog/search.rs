//! Local search for level-`t` extension properties.
//!
//! An `n x n` matrix of symbols (one per cross pair) has the level-`t`
//! property in both directions exactly when, for every `t` columns, the rows
//! show every one of the `alphabet^t` patterns, and the same holds for the
//! transpose. The search keeps a count per (column set, pattern) for both
//! directions and anneals single pair flips against the number of uncovered
//! patterns.

use std::fmt;

use rand::Rng;

/// Reason no `n x n` matrix can have the property at the requested level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Infeasible {
    /// Fewer rows than patterns to show.
    TooFewRows { rows: usize, patterns: usize },
    /// Exactly one row per pattern forces an orthogonal array of index one,
    /// whose number of columns is bounded (Bush).
    BushBound { columns: usize, bound: usize },
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasible::TooFewRows { rows, patterns } => {
                write!(f, "{rows} witnesses per side cannot show all {patterns} demand patterns")
            }
            Infeasible::BushBound { columns, bound } => write!(
                f,
                "one witness per demand pattern is an index-one orthogonal array, which has at most {bound} columns, not {columns}"
            ),
        }
    }
}

/// Necessary conditions for an `n x n` matrix over `alphabet` symbols to cover
/// every pattern on every `level` columns, in both directions.
pub fn cover_feasible(n: usize, alphabet: usize, level: usize) -> Result<(), Infeasible> {
    if level == 0 || n < level {
        return Ok(());
    }
    let patterns = alphabet.checked_pow(level as u32).unwrap_or(usize::MAX);
    if n < patterns {
        return Err(Infeasible::TooFewRows { rows: n, patterns });
    }
    if n == patterns {
        let bound = if alphabet <= level { level + 1 } else { alphabet + level - 1 };
        if n > bound {
            return Err(Infeasible::BushBound { columns: n, bound });
        }
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

struct Cover<'a> {
    n: usize,
    level: usize,
    symbols: &'a mut [u8],
    /// flattened column sets, `level` entries each
    combos: Vec<u16>,
    /// for each column: (combo, position of the column inside it)
    containing: Vec<Vec<(u32, u8)>>,
    patterns: usize,
    counts: Vec<u32>,
    uncovered: Vec<u32>,
    slot: Vec<u32>,
    powers: Vec<usize>,
}

impl<'a> Cover<'a> {
    fn new(symbols: &'a mut [u8], n: usize, alphabet: usize, level: usize) -> Self {
        let mut combos = Vec::with_capacity(binomial(n, level) * level);
        let mut current: Vec<u16> = (0..level as u16).collect();
        loop {
            combos.extend_from_slice(&current);
            // next combination in lexicographic order
            let mut i = level;
            while i > 0 && current[i - 1] as usize == n - level + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            current[i - 1] += 1;
            for k in i..level {
                current[k] = current[k - 1] + 1;
            }
        }
        let combo_count = combos.len() / level;
        let mut containing = vec![Vec::new(); n];
        for k in 0..combo_count {
            for p in 0..level {
                containing[combos[k * level + p] as usize].push((k as u32, p as u8));
            }
        }
        let patterns = alphabet.pow(level as u32);
        let powers = (0..level).map(|p| alphabet.pow(p as u32)).collect();
        let cells = 2 * combo_count * patterns;
        let mut cover = Cover {
            n,
            level,
            symbols,
            combos,
            containing,
            patterns,
            counts: vec![0; cells],
            uncovered: Vec::new(),
            slot: vec![u32::MAX; cells],
            powers,
        };
        for o in 0..2 {
            for k in 0..combo_count {
                for row in 0..n {
                    let cell = cover.cell(o, k, cover.code(o, k, row));
                    cover.counts[cell] += 1;
                }
            }
        }
        for cell in 0..cells {
            if cover.counts[cell] == 0 {
                cover.mark_uncovered(cell);
            }
        }
        cover
    }

    /// Symbol at (column, row) in orientation `o`; orientation 0 has left
    /// vertices as columns, orientation 1 right vertices.
    #[inline]
    fn entry(&self, o: usize, col: usize, row: usize) -> usize {
        let idx = if o == 0 { col * self.n + row } else { row * self.n + col };
        self.symbols[idx] as usize
    }

    #[inline]
    fn code(&self, o: usize, k: usize, row: usize) -> usize {
        let cols = &self.combos[k * self.level..(k + 1) * self.level];
        cols.iter().enumerate().map(|(p, &c)| self.entry(o, c as usize, row) * self.powers[p]).sum()
    }

    #[inline]
    fn cell(&self, o: usize, k: usize, code: usize) -> usize {
        (o * (self.combos.len() / self.level) + k) * self.patterns + code
    }

    fn mark_uncovered(&mut self, cell: usize) {
        self.slot[cell] = self.uncovered.len() as u32;
        self.uncovered.push(cell as u32);
    }

    fn mark_covered(&mut self, cell: usize) {
        let pos = self.slot[cell] as usize;
        let last = *self.uncovered.last().expect("cell is listed");
        self.uncovered.swap_remove(pos);
        if last as usize != cell {
            self.slot[last as usize] = pos as u32;
        }
        self.slot[cell] = u32::MAX;
    }

    /// Sets the symbol of pair (left `i`, right `j`), keeping counts current.
    fn set(&mut self, i: usize, j: usize, new: u8) {
        let old = self.symbols[i * self.n + j];
        if old == new {
            return;
        }
        for (o, col, row) in [(0, i, j), (1, j, i)] {
            for idx in 0..self.containing[col].len() {
                let (k, p) = self.containing[col][idx];
                let (k, p) = (k as usize, p as usize);
                let before = self.code(o, k, row);
                let after = before + new as usize * self.powers[p] - old as usize * self.powers[p];
                let cb = self.cell(o, k, before);
                self.counts[cb] -= 1;
                if self.counts[cb] == 0 {
                    self.mark_uncovered(cb);
                }
                let ca = self.cell(o, k, after);
                if self.counts[ca] == 0 {
                    self.mark_covered(ca);
                }
                self.counts[ca] += 1;
            }
        }
        self.symbols[i * self.n + j] = new;
    }

    /// Change in the number of uncovered patterns if pair (`i`, `j`) became `new`.
    fn delta(&self, i: usize, j: usize, new: u8) -> isize {
        let old = self.symbols[i * self.n + j];
        if old == new {
            return 0;
        }
        let mut delta = 0isize;
        for (o, col, row) in [(0, i, j), (1, j, i)] {
            for &(k, p) in &self.containing[col] {
                let (k, p) = (k as usize, p as usize);
                let before = self.code(o, k, row);
                let after = before + new as usize * self.powers[p] - old as usize * self.powers[p];
                if self.counts[self.cell(o, k, before)] == 1 {
                    delta += 1;
                }
                if self.counts[self.cell(o, k, after)] == 0 {
                    delta -= 1;
                }
            }
        }
        delta
    }
}

/// Pair flips tried per attempt before the search gives up.
fn flip_budget(n: usize, level: usize) -> usize {
    (400_000 * n * n / 256).max(50_000) * level.max(1)
}

const START_TEMPERATURE: f64 = 0.8;
const END_TEMPERATURE: f64 = 0.02;

/// Simulated annealing over single pair flips, minimizing the number of
/// uncovered patterns in both directions. Rewrites `symbols` (row-major,
/// `n x n`) with the best matrix seen and returns its uncovered count.
pub(crate) fn repair<R: Rng>(symbols: &mut [u8], n: usize, alphabet: usize, level: usize, rng: &mut R) -> usize {
    anneal(symbols, n, alphabet, level, flip_budget(n, level), rng)
}

fn anneal<R: Rng>(symbols: &mut [u8], n: usize, alphabet: usize, level: usize, budget: usize, rng: &mut R) -> usize {
    if level == 0 || n < level {
        return 0;
    }
    let mut cover = Cover::new(symbols, n, alphabet, level);
    let mut best = cover.uncovered.len();
    let mut best_symbols = cover.symbols.to_vec();
    let cooling = (END_TEMPERATURE / START_TEMPERATURE).powf(1.0 / budget as f64);
    let mut temperature = START_TEMPERATURE;
    for _ in 0..budget {
        if cover.uncovered.is_empty() {
            break;
        }
        temperature *= cooling;
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let old = cover.symbols[i * n + j];
        let new = (old + rng.gen_range(1..alphabet as u8)) % alphabet as u8;
        let delta = cover.delta(i, j, new);
        if delta <= 0 || rng.gen::<f64>() < (-(delta as f64) / temperature).exp() {
            cover.set(i, j, new);
            if cover.uncovered.len() < best {
                best = cover.uncovered.len();
                best_symbols.copy_from_slice(cover.symbols);
            }
        }
    }
    symbols.copy_from_slice(&best_symbols);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn feasibility_bounds() {
        assert!(cover_feasible(16, 2, 3).is_ok());
        assert_eq!(cover_feasible(16, 2, 4), Err(Infeasible::BushBound { columns: 16, bound: 5 }));
        assert_eq!(cover_feasible(16, 3, 3), Err(Infeasible::TooFewRows { rows: 16, patterns: 27 }));
        assert_eq!(cover_feasible(9, 3, 2), Err(Infeasible::BushBound { columns: 9, bound: 4 }));
        assert_eq!(cover_feasible(4, 2, 2), Err(Infeasible::BushBound { columns: 4, bound: 3 }));
        assert!(cover_feasible(5, 2, 2).is_ok());
        assert!(cover_feasible(3, 5, 0).is_ok());
    }

    #[test]
    fn counts_stay_consistent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let n = 7;
        let mut symbols: Vec<u8> = (0..n * n).map(|_| rng.gen_range(0..3)).collect();
        let mut cover = Cover::new(&mut symbols, n, 3, 2);
        for _ in 0..200 {
            let (i, j, s) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..3u8));
            cover.set(i, j, s);
        }
        let snapshot = cover.symbols.to_vec();
        let mut fresh_symbols = snapshot.clone();
        let fresh = Cover::new(&mut fresh_symbols, n, 3, 2);
        assert_eq!(cover.counts, fresh.counts);
        let mut a = cover.uncovered.clone();
        let mut b = fresh.uncovered.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
