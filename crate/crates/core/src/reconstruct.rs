//! String reconstruction from composition multisets.
//!
//! Both decoders place bits from the outside in. After the outer `i` pairs
//! are known, class `n - i - 1` contains `i` compositions that are fully
//! determined by the known prefix and suffix plus two that each miss one
//! unknown bit of pair `i + 1`. Removing the known ones leaves the weights
//! `{w_1 - wt(suffix) - s_{n-i}, w_1 - wt(prefix) - s_{i+1}}`, which pick
//! the pair unless the prefix and suffix weigh the same.
//!
//! [`reconstruct_codeword`] never branches and is meant for codewords, where
//! prefix and suffix weights never tie. [`backtrack_all`] branches on ties and
//! returns every string with the given multiset.

use std::collections::BTreeSet;

use crate::codebook::{is_codeword_r, CodeParamsR};
use crate::composition::{fragment, pair_count, BinaryString, CompositionMultiset, WeightProfile};
use crate::error::{Error, Result};

/// Largest length accepted by the exhaustive search.
pub const ORACLE_LIMIT: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Branching {
    /// A second consistent assignment is an error.
    Forbidden,
    /// Explore every consistent assignment.
    Explore,
}

/// Outside-in search over mirrored pair assignments.
pub(crate) struct PairSearch<'a> {
    multiset: &'a CompositionMultiset,
    total_weight: i64,
    sigma: &'a [u8],
    /// Class whose contents are not trusted.
    skip_class: Option<usize>,
    /// Whether the first pair may be placed as `(1, 0)` when `sigma_1 = 1`.
    both_orientations: bool,
    branching: Branching,
    prefix: Vec<u8>,
    suffix_rev: Vec<u8>,
    scratch: Vec<i64>,
}

/// Known prefix `s_1..s_i` and suffix `s_{n+1-i}..s_n` at depth `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryState {
    pub prefix: Vec<u8>,
    pub suffix: Vec<u8>,
}

impl BoundaryState {
    pub fn depth(&self) -> usize {
        self.prefix.len()
    }

    /// Ones in the unknown middle `s_{i+1}..s_{n-i}`.
    pub fn middle_weight(&self, total_weight: u64) -> Option<u64> {
        let known: u64 = self
            .prefix
            .iter()
            .chain(&self.suffix)
            .map(|&b| b as u64)
            .sum();
        total_weight.checked_sub(known)
    }
}

impl<'a> PairSearch<'a> {
    pub(crate) fn new(
        multiset: &'a CompositionMultiset,
        profile: &'a WeightProfile,
        skip_class: Option<usize>,
        both_orientations: bool,
        branching: Branching,
    ) -> Self {
        PairSearch {
            multiset,
            total_weight: profile.total_weight() as i64,
            sigma: &profile.sigma,
            skip_class,
            both_orientations,
            branching,
            prefix: Vec::new(),
            suffix_rev: Vec::new(),
            scratch: Vec::new(),
        }
    }

    fn n(&self) -> usize {
        self.multiset.n()
    }

    /// Runs the search, handing every complete string to `leaf`.
    pub(crate) fn run(&mut self, leaf: &mut dyn FnMut(BinaryString)) -> Result<()> {
        let n = self.n();
        if n == 1 {
            leaf(BinaryString::new(vec![self.sigma[0]])?);
            return Ok(());
        }
        let first: &[(u8, u8)] = match self.sigma[0] {
            0 => &[(0, 0)],
            2 => &[(1, 1)],
            _ if self.both_orientations => &[(0, 1), (1, 0)],
            _ => &[(0, 1)],
        };
        for &(front, back) in first {
            self.prefix.push(front);
            self.suffix_rev.push(back);
            self.descend(leaf)?;
            self.prefix.pop();
            self.suffix_rev.pop();
        }
        Ok(())
    }

    fn descend(&mut self, leaf: &mut dyn FnMut(BinaryString)) -> Result<()> {
        let n = self.n();
        let i = self.prefix.len();
        if i == n / 2 {
            let mut bits = self.prefix.clone();
            if n % 2 == 1 {
                bits.push(self.sigma[pair_count(n) - 1]);
            }
            bits.extend(self.suffix_rev.iter().rev());
            leaf(BinaryString::new(bits)?);
            return Ok(());
        }
        let options = self.next_pairs();
        if options.len() > 1 && self.branching == Branching::Forbidden {
            return Err(Error::InconsistentMultiset(format!(
                "prefix and suffix of length {i} have equal weight; the pair at {} is ambiguous",
                i + 1
            )));
        }
        for (front, back) in options {
            self.prefix.push(front);
            self.suffix_rev.push(back);
            let result = self.descend(leaf);
            self.prefix.pop();
            self.suffix_rev.pop();
            result?;
        }
        Ok(())
    }

    /// Assignments of pair `i + 1` consistent with `sigma` and class `n - i - 1`.
    fn next_pairs(&mut self) -> Vec<(u8, u8)> {
        // an empty result prunes the branch
        let n = self.n();
        let i = self.prefix.len();
        let candidates: &[(u8, u8)] = match self.sigma[i] {
            0 => &[(0, 0)],
            1 => &[(0, 1), (1, 0)],
            _ => &[(1, 1)],
        };
        let class = n - i - 1;
        if self.skip_class == Some(class) {
            return candidates.to_vec();
        }

        let counts = self.multiset.class_counts(class);
        self.scratch.clear();
        self.scratch.extend(counts.iter().map(|&c| c as i64));

        // prefix_weight[t] = wt(s_1..s_t), suffix_weight[t] = wt of the last t bits
        let prefix_weight: Vec<i64> = std::iter::once(0)
            .chain(self.prefix.iter().scan(0i64, |acc, &b| {
                *acc += b as i64;
                Some(*acc)
            }))
            .collect();
        let suffix_weight: Vec<i64> = std::iter::once(0)
            .chain(self.suffix_rev.iter().scan(0i64, |acc, &b| {
                *acc += b as i64;
                Some(*acc)
            }))
            .collect();

        // windows starting at t = 2..=i+1 drop t-1 leading and i+2-t trailing bits
        for t in 2..=i + 1 {
            let weight = self.total_weight - prefix_weight[t - 1] - suffix_weight[i + 2 - t];
            if weight < 0 || weight as usize > class {
                return Vec::new();
            }
            let slot = &mut self.scratch[weight as usize];
            *slot -= 1;
            if *slot < 0 {
                return Vec::new();
            }
        }
        let mut remaining: Vec<i64> = Vec::with_capacity(2);
        for (weight, &count) in self.scratch.iter().enumerate() {
            if count > 0 && remaining.len() + count as usize > 2 {
                return Vec::new();
            }
            remaining.extend(std::iter::repeat_n(weight as i64, count.max(0) as usize));
        }
        if remaining.len() != 2 {
            return Vec::new();
        }

        let prefix_total = prefix_weight[i];
        let suffix_total = suffix_weight[i];
        candidates
            .iter()
            .copied()
            .filter(|&(front, back)| {
                let mut pair = [
                    self.total_weight - suffix_total - back as i64,
                    self.total_weight - prefix_total - front as i64,
                ];
                pair.sort_unstable();
                pair[..] == remaining[..]
            })
            .collect()
    }
}

/// Reconstructs a codeword without backtracking.
pub fn reconstruct_codeword(c: &CompositionMultiset) -> Result<BinaryString> {
    let profile = WeightProfile::from_multiset(c)?;
    let mut found = None;
    PairSearch::new(c, &profile, None, false, Branching::Forbidden).run(&mut |s| {
        found = Some(s);
    })?;
    let s = found.ok_or_else(|| {
        Error::InconsistentMultiset("no pair assignment is consistent with the multiset".into())
    })?;
    if fragment(&s) != *c {
        return Err(Error::InconsistentMultiset(format!(
            "reconstructed {s} does not reproduce the multiset"
        )));
    }
    if !is_codeword_r(&s) {
        return Err(Error::NotACodeword(format!("reconstructed string {s}")));
    }
    Ok(s)
}

/// Reconstruction followed by message extraction.
pub fn decode_r(params: &CodeParamsR, c: &CompositionMultiset) -> Result<BinaryString> {
    if c.n() != params.n {
        return Err(Error::DimensionMismatch {
            left: c.n(),
            right: params.n,
        });
    }
    params.message_of(&reconstruct_codeword(c)?)
}

/// All strings sharing a composition multiset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReconstructionSet {
    pub strings: BTreeSet<BinaryString>,
}

impl ReconstructionSet {
    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn contains(&self, s: &BinaryString) -> bool {
        self.strings.contains(s)
    }
}

/// Exhaustive backtracking: every `t` with `fragment(t) = c`, for `n <= limit`.
pub fn backtrack_all(c: &CompositionMultiset, limit: usize) -> Result<ReconstructionSet> {
    if c.n() > limit {
        return Err(Error::TooLarge { n: c.n(), limit });
    }
    let profile = WeightProfile::from_multiset(c)?;
    let mut set = ReconstructionSet::default();
    let mut search = PairSearch::new(c, &profile, None, true, Branching::Explore);
    search.run(&mut |s| {
        if fragment(&s) == *c {
            set.strings.insert(s);
        }
    })?;
    Ok(set)
}

pub fn is_unique_up_to_reversal(s: &BinaryString) -> Result<bool> {
    let set = backtrack_all(&fragment(s), ORACLE_LIMIT)?;
    let reversed = s.reversed();
    Ok(set.strings.iter().all(|t| *t == *s || *t == reversed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::{enumerate_r, params_r};
    use std::collections::HashMap;

    fn bs(s: &str) -> BinaryString {
        s.parse().unwrap()
    }

    fn strings(n: usize) -> impl Iterator<Item = BinaryString> {
        (0..1u64 << n).map(move |v| BinaryString::from_u64(v, n).unwrap())
    }

    #[test]
    fn forced_decoder_examples() {
        assert_eq!(
            reconstruct_codeword(&fragment(&bs("001"))).unwrap(),
            bs("001")
        );
        assert!(reconstruct_codeword(&fragment(&bs("0101"))).is_err());
    }

    #[test]
    fn forced_decoder_round_trips_every_small_codeword() {
        for n in 2..=16 {
            for s in enumerate_r(n).unwrap() {
                assert_eq!(reconstruct_codeword(&fragment(&s)).unwrap(), s);
            }
        }
    }

    #[test]
    fn decode_round_trip() {
        for k in 1..=8 {
            let p = params_r(k).unwrap();
            for v in 0..1u64 << k {
                let m = BinaryString::from_u64(v, k).unwrap();
                assert_eq!(decode_r(&p, &fragment(&p.encode(&m).unwrap())).unwrap(), m);
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let set = |s: &str| {
            backtrack_all(&fragment(&bs(s)), ORACLE_LIMIT)
                .unwrap()
                .strings
                .into_iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(set("01"), vec!["01", "10"]);
        assert_eq!(set("001"), vec!["001", "100"]);
        assert_eq!(set("1010001010"), vec!["0101000101", "1010001010"]);
        assert!(is_unique_up_to_reversal(&bs("1010001010")).unwrap());
        assert_eq!(
            backtrack_all(&fragment(&bs("01")), 1),
            Err(Error::TooLarge { n: 2, limit: 1 })
        );
    }

    #[test]
    fn oracle_matches_brute_force_grouping() {
        for n in 1..=12 {
            let mut groups: HashMap<CompositionMultiset, BTreeSet<BinaryString>> = HashMap::new();
            for s in strings(n) {
                groups.entry(fragment(&s)).or_default().insert(s);
            }
            for (c, expected) in groups {
                assert_eq!(
                    backtrack_all(&c, ORACLE_LIMIT).unwrap().strings,
                    expected,
                    "n={n}"
                );
            }
        }
    }

    #[test]
    fn non_unique_count_at_length_eight() {
        // strings of length 8 sharing a multiset with something other than themselves or their reversal
        let count = strings(8)
            .filter(|s| !is_unique_up_to_reversal(s).unwrap())
            .count();
        assert_eq!(count, NON_UNIQUE_AT_8);
    }

    const NON_UNIQUE_AT_8: usize = 4;

    #[test]
    fn boundary_state_middle_weight() {
        let b = BoundaryState {
            prefix: vec![0, 1],
            suffix: vec![1, 1],
        };
        assert_eq!(b.depth(), 2);
        assert_eq!(b.middle_weight(4), Some(1));
        assert_eq!(b.middle_weight(2), None);
    }
}
