//! Single composition error correcting code.
//!
//! A codeword of odd length `n` is an inner reconstruction codeword of
//! length `n - 2` with two extra bits spliced in at positions `2` and
//! `n - 1` (the starred bits). The starred bits are chosen so that
//! `w_1 + ... + w_h = 0 (mod 3)` with `h = ceil(n/2)`, and the inner middle
//! bit makes the total weight even. Lengths are restricted to
//! `n = 5 (mod 6)`: then `3 | h`, so flipping the middle bit never moves the
//! checksum, while each starred one shifts it by `2h - 1 = 2 (mod 3)`, so
//! exactly one of `(0,0)`, `(0,1)`, `(1,1)` works.
//!
//! Decoding first repairs the cumulative weights: mirror classes disagree
//! exactly where the error sits, parity fixes `w_1`, and the mod-3 checksum
//! picks the true `w_j` out of a window of three candidates determined by
//! the lower classes. With exact pair weights the outside-in search runs as
//! usual, except that the corrupted class is not consulted; any candidate
//! that survives must reproduce the received multiset up to that one error.

use num_bigint::BigUint;
use num_traits::One;

use crate::ballot;
use crate::codebook::{
    codeword_of_rank, is_codeword_r, message_bits, message_value, rank_of_codeword,
};
use crate::composition::{
    fragment, pair_count, raw_weights, BinaryString, Composition, CompositionBag,
    CompositionMultiset, WeightProfile,
};
use crate::error::{Error, Result};
use crate::reconstruct::{BoundaryState, Branching, PairSearch};

/// Smallest admissible code length.
pub const MIN_LENGTH: usize = 11;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeParamsC {
    pub k: usize,
    pub n: usize,
    /// Pairs of the ballot sequence inside the base string.
    pub pairs: usize,
    pub capacity: BigUint,
}

impl CodeParamsC {
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    /// Admissible parameters for an explicit length `n = 5 (mod 6)`.
    pub fn for_length(k: usize, n: usize) -> Result<Self> {
        if n < MIN_LENGTH || n % 6 != 5 {
            return Err(Error::InvalidMessage(format!(
                "code length {n} must be at least {MIN_LENGTH} and congruent to 5 mod 6"
            )));
        }
        let pairs = (n - 5) / 2;
        let capacity = ballot::count(pairs);
        if capacity < BigUint::one() << k {
            return Err(Error::CapacityExceeded);
        }
        Ok(CodeParamsC {
            k,
            n,
            pairs,
            capacity,
        })
    }

    pub fn encode(&self, message: &BinaryString) -> Result<BinaryString> {
        if message.len() != self.k {
            return Err(Error::InvalidMessage(format!(
                "expected {} bits, got {}",
                self.k,
                message.len()
            )));
        }
        let r = message_value(message);
        if r >= self.capacity {
            return Err(Error::CapacityExceeded);
        }
        let base = codeword_of_rank(self.n - 3, &r)?;
        for (star_front, star_back) in [(0u8, 0u8), (0, 1), (1, 1)] {
            let parity = (base.weight() as u8 + star_front + star_back) % 2;
            let candidate = assemble(&base, parity, star_front, star_back);
            if checksum3(&candidate) == 0 {
                return Ok(candidate);
            }
        }
        Err(Error::NoValidPadding)
    }

    pub fn message_of(&self, codeword: &BinaryString) -> Result<BinaryString> {
        if codeword.len() != self.n {
            return Err(Error::NotACodeword(format!(
                "length {} differs from code length {}",
                codeword.len(),
                self.n
            )));
        }
        if !is_codeword_c(codeword) {
            return Err(Error::NotACodeword(codeword.to_string()));
        }
        let r = rank_of_codeword(&base_of(codeword))?;
        if r.bits() > self.k as u64 {
            return Err(Error::NotACodeword(format!(
                "codeword index exceeds the {}-bit message space",
                self.k
            )));
        }
        message_bits(&r, self.k)
    }
}

/// Shortest admissible length holding `2^k` codewords.
pub fn params_c(k: usize) -> Result<CodeParamsC> {
    if k == 0 {
        return Err(Error::InvalidMessage(
            "message length must be at least 1".into(),
        ));
    }
    let needed = BigUint::one() << k;
    let mut n = MIN_LENGTH;
    loop {
        let pairs = (n - 5) / 2;
        let capacity = ballot::count(pairs);
        if capacity >= needed {
            return Ok(CodeParamsC {
                k,
                n,
                pairs,
                capacity,
            });
        }
        n += 6;
    }
}

/// `|S_C(n)|` for an admissible `n`.
pub fn capacity_c(n: usize) -> BigUint {
    ballot::count((n - 5) / 2)
}

/// Splices the middle bit and the starred bits into an even base string of length `n - 3`.
fn assemble(base: &BinaryString, middle: u8, star_front: u8, star_back: u8) -> BinaryString {
    let b = base.bits();
    let half = b.len() / 2;
    let mut inner = Vec::with_capacity(b.len() + 1);
    inner.extend_from_slice(&b[..half]);
    inner.push(middle);
    inner.extend_from_slice(&b[half..]);
    let last = inner.len() - 1;
    let mut bits = Vec::with_capacity(inner.len() + 2);
    bits.push(inner[0]);
    bits.push(star_front);
    bits.extend_from_slice(&inner[1..last]);
    bits.push(star_back);
    bits.push(inner[last]);
    BinaryString::new(bits).expect("assembled from bits")
}

/// Drops positions `2` and `n - 1`.
pub fn inner_of(s: &BinaryString) -> BinaryString {
    let n = s.len();
    let bits = s
        .bits()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != 1 && i != n - 2)
        .map(|(_, &b)| b)
        .collect();
    BinaryString::new(bits).expect("length at least 3")
}

fn base_of(s: &BinaryString) -> BinaryString {
    let inner = inner_of(s);
    let mid = inner.len() / 2;
    let bits = inner
        .bits()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != mid)
        .map(|(_, &b)| b)
        .collect();
    BinaryString::new(bits).expect("length at least 2")
}

/// `(w_1 + ... + w_h) mod 3` with `h = ceil(n/2)`.
pub fn checksum3(s: &BinaryString) -> u8 {
    weight_checksum(&raw_weights(&fragment(s)))
}

fn weight_checksum(w: &[u64]) -> u8 {
    (w[..pair_count(w.len())].iter().sum::<u64>() % 3) as u8
}

pub fn is_codeword_c(s: &BinaryString) -> bool {
    let n = s.len();
    n >= 5
        && n % 2 == 1
        && s.bit(2) <= s.bit(n - 1)
        && s.weight().is_multiple_of(2)
        && is_codeword_r(&inner_of(s))
        && checksum3(s) == 0
}

/// Cumulative weights recovered from a multiset with at most one composition error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairReport {
    pub w: Vec<u64>,
    pub corrupted_class: Option<usize>,
    pub sigma: Vec<u8>,
}

fn uncorrectable(msg: impl Into<String>) -> Error {
    Error::Uncorrectable(msg.into())
}

pub fn repair_weights(received: &CompositionMultiset) -> Result<RepairReport> {
    received.validate()?;
    let n = received.n();
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::InvalidMultiset(format!(
            "length {n} is not an odd length of at least 5"
        )));
    }
    let observed = raw_weights(received);
    let h = pair_count(n);
    let at = |l: usize| observed[l - 1];

    let w1 = if at(1) == at(n) {
        at(1)
    } else {
        match (at(1) % 2 == 0, at(n) % 2 == 0) {
            (true, false) => at(1),
            (false, true) => at(n),
            _ => return Err(uncorrectable("classes 1 and n disagree by more than one")),
        }
    };

    let mismatched: Vec<usize> = (1..h).filter(|&j| at(j) != at(n + 1 - j)).collect();
    if mismatched.len() > 1 {
        return Err(uncorrectable(format!(
            "mirror classes disagree at {mismatched:?}; more than one error"
        )));
    }

    let mut w = observed.clone();
    let corrupted_class;
    match mismatched.first().copied() {
        Some(1) => {
            w[0] = w1;
            w[n - 1] = w1;
            corrupted_class = Some(if at(1) != w1 { 1 } else { n });
            if weight_checksum(&w) != 0 {
                return Err(uncorrectable("checksum fails after repairing class 1"));
            }
        }
        target => {
            let j = target.unwrap_or(h);
            let value = window_candidate(&w, j, h)?;
            match target {
                Some(j) => {
                    corrupted_class = if at(j) == value {
                        Some(n + 1 - j)
                    } else if at(n + 1 - j) == value {
                        Some(j)
                    } else {
                        return Err(uncorrectable(format!(
                            "recovered w_{j} = {value} matches neither observed mirror value"
                        )));
                    };
                    w[j - 1] = value;
                    w[n - j] = value;
                }
                None => {
                    corrupted_class = match value.abs_diff(at(h)) {
                        0 => None,
                        1 => Some(h),
                        _ => return Err(uncorrectable("middle class is off by more than one")),
                    };
                    w[h - 1] = value;
                }
            }
        }
    }

    let sigma = crate::composition::sigma_from_weights(&w)
        .map_err(|e| uncorrectable(format!("repaired weights are inconsistent: {e}")))?;
    Ok(RepairReport {
        w,
        corrupted_class,
        sigma,
    })
}

/// The member of `{X, X-1, X-2}` whose residue satisfies the checksum, where
/// `X = j w_1 - sum_{t <= j-2} (j - t) sigma_t` brackets `w_j`.
fn window_candidate(w: &[u64], j: usize, h: usize) -> Result<u64> {
    let at = |l: usize| if l == 0 { 0 } else { w[l - 1] as i64 };
    let mut x = j as i64 * at(1);
    for t in 1..=j.saturating_sub(2) {
        let sigma = 2 * at(t) - at(t - 1) - at(t + 1);
        if !(0..=2).contains(&sigma) {
            return Err(uncorrectable(format!(
                "sigma_{t} = {sigma} is out of range"
            )));
        }
        x -= (j - t) as i64 * sigma;
    }
    let others: i64 = (1..=h).filter(|&i| i != j).map(at).sum();
    let residue = (-others).rem_euclid(3);
    (x - 2..=x)
        .filter(|&v| v >= 0 && v.rem_euclid(3) == residue)
        .map(|v| v as u64)
        .next()
        .ok_or_else(|| uncorrectable(format!("no admissible value for w_{j}")))
}

/// The composition that was received and the one it replaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Correction {
    pub class: usize,
    pub observed: Composition,
    pub corrected: Composition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub message: BinaryString,
    pub codeword: BinaryString,
    pub correction: Option<Correction>,
}

/// Whether `expected` and `received` agree everywhere except for one
/// composition in `class`.
fn matches_up_to_error(
    expected: &CompositionMultiset,
    received: &CompositionMultiset,
    class: Option<usize>,
) -> bool {
    (1..=expected.n()).all(|l| {
        let a = expected.class_counts(l);
        let b = received.class_counts(l);
        if Some(l) == class {
            let diff: u64 = a.iter().zip(b).map(|(x, y)| x.saturating_sub(*y)).sum();
            diff == 1
        } else {
            a == b
        }
    })
}

pub fn decode_c(params: &CodeParamsC, received: &CompositionMultiset) -> Result<DecodeOutcome> {
    if received.n() != params.n {
        return Err(Error::DimensionMismatch {
            left: received.n(),
            right: params.n,
        });
    }
    let report = repair_weights(received)?;
    let profile = WeightProfile {
        n: params.n,
        w: report.w.clone(),
        sigma: report.sigma.clone(),
    };

    let mut survivors: Vec<(BinaryString, CompositionMultiset)> = Vec::new();
    PairSearch::new(
        received,
        &profile,
        report.corrupted_class,
        false,
        Branching::Explore,
    )
    .run(&mut |candidate| {
        if !is_codeword_c(&candidate) {
            return;
        }
        let expected = fragment(&candidate);
        if matches_up_to_error(&expected, received, report.corrupted_class) {
            survivors.push((candidate, expected));
        }
    })?;

    let (codeword, expected) = match survivors.len() {
        0 => {
            return Err(uncorrectable(
                "no codeword is consistent with the repaired weights",
            ))
        }
        1 => survivors.pop().unwrap(),
        many => return Err(Error::AmbiguousDecode(many)),
    };
    let correction = report.corrupted_class.map(|class| {
        let pick = |from: &CompositionMultiset, against: &CompositionMultiset| {
            let ones = from
                .class_counts(class)
                .iter()
                .zip(against.class_counts(class))
                .position(|(x, y)| x > y)
                .expect("classes differ in one composition");
            Composition::with_weight(class, ones)
        };
        Correction {
            class,
            observed: pick(received, &expected),
            corrected: pick(&expected, received),
        }
    });
    let message = params.message_of(&codeword)?;
    Ok(DecodeOutcome {
        message,
        codeword,
        correction,
    })
}

/// Compositions determined by a known prefix and suffix of equal length:
/// substrings inside the prefix, inside the suffix, or spanning the unknown
/// middle from one to the other.
pub fn known_compositions(
    n: usize,
    total_weight: u64,
    state: &BoundaryState,
) -> Result<CompositionBag> {
    let i = state.depth();
    if state.suffix.len() != i || 2 * i > n {
        return Err(Error::InvalidMultiset(
            "boundary does not fit the length".into(),
        ));
    }
    let middle = state
        .middle_weight(total_weight)
        .ok_or_else(|| Error::InconsistentMultiset("boundary outweighs the string".into()))?;
    let mut bag = CompositionBag::new();
    let inside = |bits: &[u8], bag: &mut CompositionBag| {
        for start in 0..bits.len() {
            let mut ones = 0;
            for (len, &b) in bits[start..].iter().enumerate() {
                ones += b as usize;
                bag.insert(Composition::with_weight(len + 1, ones), 1);
            }
        }
    };
    inside(&state.prefix, &mut bag);
    inside(&state.suffix, &mut bag);
    // spanning substrings: a suffix of the prefix, the middle, a prefix of the suffix
    let gap = n - 2 * i;
    for from in 0..i {
        let head: u64 = state.prefix[from..].iter().map(|&b| b as u64).sum();
        for to in 0..i {
            let tail: u64 = state.suffix[..=to].iter().map(|&b| b as u64).sum();
            let len = (i - from) + gap + to + 1;
            bag.insert(
                Composition::with_weight(len, (head + middle + tail) as usize),
                1,
            );
        }
    }
    Ok(bag)
}
