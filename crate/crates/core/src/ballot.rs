//! Ballot sequences over mirrored bit pairs.
//!
//! Each mirrored pair `(s_i, s_{n+1-i})` of a codeword is one of four
//! [`PairSymbol`]s. Symmetric pairs leave the running height unchanged,
//! `Anti0` raises it and `Anti1` lowers it; a sequence is valid when the
//! height never drops below zero. There are `C(2m+1, m)` valid sequences of
//! length `m`.
//!
//! Ranking is lexicographic under `Sym0 < Sym1 < Anti0 < Anti1`. Completion
//! counts come from a closed form over one row of binomial coefficients, so
//! no quadratic table is needed for rank/unrank.

use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairSymbol {
    /// `(0, 0)`
    Sym0,
    /// `(1, 1)`
    Sym1,
    /// `(0, 1)`: prefix bit lighter than its mirror
    Anti0,
    /// `(1, 0)`
    Anti1,
}

impl PairSymbol {
    pub const ALL: [PairSymbol; 4] = [
        PairSymbol::Sym0,
        PairSymbol::Sym1,
        PairSymbol::Anti0,
        PairSymbol::Anti1,
    ];

    /// `(s_i, s_{n+1-i})`.
    pub fn bits(self) -> (u8, u8) {
        match self {
            PairSymbol::Sym0 => (0, 0),
            PairSymbol::Sym1 => (1, 1),
            PairSymbol::Anti0 => (0, 1),
            PairSymbol::Anti1 => (1, 0),
        }
    }

    pub fn from_bits(front: u8, back: u8) -> Self {
        match (front, back) {
            (0, 0) => PairSymbol::Sym0,
            (1, 1) => PairSymbol::Sym1,
            (0, 1) => PairSymbol::Anti0,
            _ => PairSymbol::Anti1,
        }
    }

    pub fn is_anti(self) -> bool {
        matches!(self, PairSymbol::Anti0 | PairSymbol::Anti1)
    }

    fn step(self) -> i64 {
        match self {
            PairSymbol::Anti0 => 1,
            PairSymbol::Anti1 => -1,
            _ => 0,
        }
    }
}

pub fn is_valid_sequence(seq: &[PairSymbol]) -> bool {
    first_violation(seq).is_none()
}

fn first_violation(seq: &[PairSymbol]) -> Option<usize> {
    let mut height = 0i64;
    for (i, s) in seq.iter().enumerate() {
        height += s.step();
        if height < 0 {
            return Some(i);
        }
    }
    None
}

/// Prefix-count table `f(t, h)`: valid sequences of length `t` ending at height `h`.
#[derive(Debug, Clone)]
pub struct BallotTable {
    m: usize,
    rows: Vec<Vec<BigUint>>,
}

impl BallotTable {
    pub fn new(m: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(m + 1);
        rows.push(vec![BigUint::one()]);
        for t in 1..=m {
            let prev = &rows[t - 1];
            let at = |h: usize| prev.get(h).cloned().unwrap_or_default();
            let row = (0..=t)
                .map(|h| {
                    let mut v = at(h) * 2u32 + at(h + 1);
                    if h > 0 {
                        v += at(h - 1);
                    }
                    v
                })
                .collect();
            rows.push(row);
        }
        BallotTable { m, rows }
    }

    pub fn pairs(&self) -> usize {
        self.m
    }

    pub fn get(&self, t: usize, h: usize) -> BigUint {
        self.rows
            .get(t)
            .and_then(|row| row.get(h))
            .cloned()
            .unwrap_or_default()
    }

    /// `N(t) = sum_h f(t, h)`.
    pub fn total(&self, t: usize) -> BigUint {
        self.rows[t].iter().sum()
    }
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

static COUNTS: Mutex<Vec<BigUint>> = Mutex::new(Vec::new());

/// Number of valid sequences of length `m`, `C(2m+1, m)`.
pub fn count(m: usize) -> BigUint {
    let mut cache = COUNTS.lock().unwrap_or_else(|e| e.into_inner());
    if cache.is_empty() {
        cache.push(BigUint::one());
    }
    while cache.len() <= m {
        // C(2j+3, j+1) = C(2j+1, j) (2j+3)(2j+2) / ((j+2)(j+1))
        let j = (cache.len() - 1) as u64;
        let next = cache.last().unwrap() * ((2 * j + 3) * (2 * j + 2)) / ((j + 2) * (j + 1));
        cache.push(next);
    }
    cache[m].clone()
}

/// Binomial row `C(2L, L + j)` walked outward from the centre.
struct CentralRow {
    half: u64,
    centre: BigUint,
}

impl CentralRow {
    fn new(half: u64) -> Self {
        CentralRow {
            half,
            centre: binomial(2 * half, half),
        }
    }

    fn shrink(&mut self) {
        // C(2L-2, L-1) = C(2L, L) * L / (2 (2L - 1))
        let l = self.half;
        debug_assert!(l > 0);
        self.centre = &self.centre * l / (2 * (2 * l - 1));
        self.half -= 1;
    }

    /// `[C(2L, L), C(2L, L+1), ..., C(2L, L+upto)]`.
    fn outward(&self, upto: usize) -> Vec<BigUint> {
        let l = self.half;
        let mut out = Vec::with_capacity(upto + 1);
        out.push(self.centre.clone());
        for j in 0..upto as u64 {
            let next = if j >= l {
                BigUint::zero()
            } else {
                out.last().unwrap() * (l - j) / (l + j + 1)
            };
            out.push(next);
        }
        out
    }

    /// Valid completions of length `L` starting from height `h`, and from `h + 1`.
    ///
    /// `g(L, h) = sum_{u = L-h}^{L+h+1} C(2L, u)`.
    fn completions(&self, h: usize) -> (BigUint, BigUint) {
        let row = self.outward(h + 2);
        let mut g = row[0].clone();
        for c in &row[1..=h] {
            g += c * 2u32;
        }
        g += &row[h + 1];
        let up = &g + &row[h + 1] + &row[h + 2];
        (g, up)
    }
}

/// Valid completions of length `remaining` from height `height`.
pub fn completions(remaining: usize, height: usize) -> BigUint {
    CentralRow::new(remaining as u64).completions(height).0
}

fn rows_for(m: usize) -> Option<CentralRow> {
    (m > 0).then(|| CentralRow::new(m as u64 - 1))
}

/// The `rank`-th valid sequence of length `m`.
pub fn unrank(m: usize, rank: &BigUint) -> Result<Vec<PairSymbol>> {
    if *rank >= count(m) {
        return Err(Error::RankOutOfRange { pairs: m });
    }
    let mut r = rank.clone();
    let mut seq = Vec::with_capacity(m);
    let mut height = 0usize;
    let mut row = rows_for(m);
    for t in 0..m {
        let row_ref = row.as_ref().unwrap();
        let (level, up) = row_ref.completions(height);
        let mut symbol = PairSymbol::Anti1;
        for (candidate, block) in [
            (PairSymbol::Sym0, &level),
            (PairSymbol::Sym1, &level),
            (PairSymbol::Anti0, &up),
        ] {
            if r < *block {
                symbol = candidate;
                break;
            }
            r -= block;
        }
        debug_assert!(symbol != PairSymbol::Anti1 || height > 0);
        match symbol {
            PairSymbol::Anti0 => height += 1,
            PairSymbol::Anti1 => height -= 1,
            _ => {}
        }
        seq.push(symbol);
        if t + 1 < m {
            row.as_mut().unwrap().shrink();
        }
    }
    debug_assert!(r.is_zero());
    Ok(seq)
}

/// Position of `seq` among valid sequences of its length.
pub fn rank(seq: &[PairSymbol]) -> Result<BigUint> {
    if let Some(position) = first_violation(seq) {
        return Err(Error::InvalidSequence { position });
    }
    let m = seq.len();
    let mut acc = BigUint::zero();
    let mut height = 0usize;
    let mut row = rows_for(m);
    for (t, &symbol) in seq.iter().enumerate() {
        if symbol != PairSymbol::Sym0 {
            let (level, up) = row.as_ref().unwrap().completions(height);
            match symbol {
                PairSymbol::Sym1 => acc += level,
                PairSymbol::Anti0 => acc += level * 2u32,
                PairSymbol::Anti1 => acc += level * 2u32 + up,
                PairSymbol::Sym0 => unreachable!(),
            }
        }
        match symbol {
            PairSymbol::Anti0 => height += 1,
            PairSymbol::Anti1 => height -= 1,
            _ => {}
        }
        if t + 1 < m {
            row.as_mut().unwrap().shrink();
        }
    }
    Ok(acc)
}
