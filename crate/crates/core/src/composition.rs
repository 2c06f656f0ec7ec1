//! Bit strings, substring compositions and composition multisets.
//!
//! A [`CompositionMultiset`] is what an idealized fragmentation readout
//! reports for a string: the (zeros, ones) content of every substring,
//! grouped by substring length, with no positional information. From it
//! the per-length cumulative weights `w_1..w_n` and the mirrored pair
//! weights `sigma_i = s_i + s_{n+1-i}` can be recovered exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A non-empty sequence of bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryString(Vec<u8>);

impl BinaryString {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidString("empty string".into()));
        }
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidString(format!(
                "element {} at position {} is not a bit",
                bits[pos],
                pos + 1
            )));
        }
        Ok(BinaryString(bits))
    }

    /// Builds the `len`-bit big-endian representation of `value`.
    pub fn from_u64(value: u64, len: usize) -> Result<Self> {
        if len == 0 || (len < 64 && value >> len != 0) {
            return Err(Error::InvalidString(format!(
                "{value} does not fit in {len} bits"
            )));
        }
        let bits = (0..len)
            .map(|i| {
                let shift = len - 1 - i;
                if shift >= 64 {
                    0
                } else {
                    ((value >> shift) & 1) as u8
                }
            })
            .collect();
        Ok(BinaryString(bits))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    /// 1-based access, matching the usual `s_1 .. s_n` indexing.
    pub fn bit(&self, position: usize) -> u8 {
        self.0[position - 1]
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&b| b as usize).sum()
    }

    pub fn reversed(&self) -> BinaryString {
        BinaryString(self.0.iter().rev().copied().collect())
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.0
    }
}

impl FromStr for BinaryString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidString(format!(
                    "unexpected character {other:?} at position {}",
                    i + 1
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        BinaryString::new(bits)
    }
}

impl fmt::Display for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

/// The content `0^zeros 1^ones` of a substring.
///
/// Ordering is by `zeros` first, which is the canonical order of the text
/// format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition {
    pub zeros: usize,
    pub ones: usize,
}

impl Composition {
    pub fn new(zeros: usize, ones: usize) -> Result<Self> {
        if zeros + ones == 0 {
            return Err(Error::InvalidMultiset("empty composition".into()));
        }
        Ok(Composition { zeros, ones })
    }

    /// The composition of length `len` carrying `ones` ones.
    pub fn with_weight(len: usize, ones: usize) -> Self {
        debug_assert!(ones <= len && len > 0);
        Composition {
            zeros: len - ones,
            ones,
        }
    }

    pub fn len(&self) -> usize {
        self.zeros + self.ones
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0^{}1^{}", self.zeros, self.ones)
    }
}

/// A general multiset of compositions, used for class-level arithmetic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CompositionBag(BTreeMap<Composition, u64>);

impl CompositionBag {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Composition, count: u64) {
        if count > 0 {
            *self.0.entry(c).or_insert(0) += count;
        }
    }

    pub fn count(&self, c: &Composition) -> u64 {
        self.0.get(c).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Composition, u64)> + '_ {
        self.0.iter().map(|(c, n)| (*c, *n))
    }

    /// `self - other` with multiplicity. Fails unless `other` is contained in `self`.
    pub fn subtract(&self, other: &CompositionBag) -> Result<CompositionBag> {
        let mut out = self.0.clone();
        for (c, n) in other.iter() {
            match out.get_mut(&c) {
                Some(have) if *have >= n => {
                    *have -= n;
                    if *have == 0 {
                        out.remove(&c);
                    }
                }
                _ => {
                    return Err(Error::InconsistentMultiset(format!(
                        "{c} x{n} is not contained in the class"
                    )))
                }
            }
        }
        Ok(CompositionBag(out))
    }
}

impl FromIterator<Composition> for CompositionBag {
    fn from_iter<I: IntoIterator<Item = Composition>>(iter: I) -> Self {
        let mut bag = CompositionBag::new();
        for c in iter {
            bag.insert(c, 1);
        }
        bag
    }
}

/// Compositions of all substrings of a length-`n` string, partitioned by
/// substring length.
///
/// Within a class the composition is determined by its number of ones, so
/// class `l` is stored as a dense count vector indexed by weight `0..=l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompositionMultiset {
    n: usize,
    classes: Vec<Vec<u64>>,
}

impl CompositionMultiset {
    /// An empty multiset for strings of length `n`.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMultiset("length must be at least 1".into()));
        }
        Ok(CompositionMultiset {
            n,
            classes: (1..=n).map(|l| vec![0; l + 1]).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds `count` copies of `c`. The composition length selects the class.
    pub fn insert(&mut self, c: Composition, count: u64) -> Result<()> {
        let l = c.len();
        if l == 0 || l > self.n {
            return Err(Error::InvalidMultiset(format!(
                "composition {c} has length {l} outside 1..={}",
                self.n
            )));
        }
        self.classes[l - 1][c.ones] += count;
        Ok(())
    }

    pub(crate) fn remove_one(&mut self, c: Composition) -> Result<()> {
        let l = c.len();
        let slot = self
            .classes
            .get_mut(l.wrapping_sub(1))
            .and_then(|class| class.get_mut(c.ones))
            .filter(|slot| **slot > 0)
            .ok_or_else(|| Error::InvalidError(format!("{c} is not present in class {l}")))?;
        *slot -= 1;
        Ok(())
    }

    pub fn count(&self, c: Composition) -> u64 {
        let l = c.len();
        if l == 0 || l > self.n {
            return 0;
        }
        self.classes[l - 1][c.ones]
    }

    /// Weight-indexed counts of class `l`.
    pub fn class_counts(&self, l: usize) -> &[u64] {
        &self.classes[l - 1]
    }

    pub fn class_size(&self, l: usize) -> u64 {
        self.classes[l - 1].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.classes.iter().flatten().sum()
    }

    /// Distinct compositions of class `l` with their counts, zeros ascending.
    pub fn compositions(&self, l: usize) -> impl Iterator<Item = (Composition, u64)> + '_ {
        self.classes[l - 1]
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &n)| n > 0)
            .map(move |(ones, &n)| (Composition::with_weight(l, ones), n))
    }

    pub fn class(&self, l: usize) -> CompositionBag {
        let mut bag = CompositionBag::new();
        for (c, n) in self.compositions(l) {
            bag.insert(c, n);
        }
        bag
    }

    /// Checks that class `l` holds exactly `n - l + 1` compositions.
    pub fn validate(&self) -> Result<()> {
        for l in 1..=self.n {
            let size = self.class_size(l);
            let expected = (self.n - l + 1) as u64;
            if size != expected {
                return Err(Error::InvalidMultiset(format!(
                    "class {l} holds {size} compositions, expected {expected}"
                )));
            }
        }
        Ok(())
    }

    /// Number of compositions (with multiplicity) of `self` not matched in `other`.
    pub fn difference_size(&self, other: &CompositionMultiset) -> Result<u64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .classes
            .iter()
            .zip(&other.classes)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.saturating_sub(*y)))
            .sum())
    }
}

/// Composition multiset of `s`.
pub fn fragment(s: &BinaryString) -> CompositionMultiset {
    let n = s.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0usize);
    for &b in s.bits() {
        prefix.push(prefix.last().unwrap() + b as usize);
    }
    let classes = (1..=n)
        .map(|l| {
            let mut counts = vec![0u64; l + 1];
            for start in 0..=n - l {
                counts[prefix[start + l] - prefix[start]] += 1;
            }
            counts
        })
        .collect();
    CompositionMultiset { n, classes }
}

/// `w_l`: total number of ones over class `l`, for `l = 1..=n` (index 0 is `w_1`).
pub fn cumulative_weights(c: &CompositionMultiset) -> Result<Vec<u64>> {
    c.validate()?;
    Ok(raw_weights(c))
}

pub(crate) fn raw_weights(c: &CompositionMultiset) -> Vec<u64> {
    c.classes
        .iter()
        .map(|class| {
            class
                .iter()
                .enumerate()
                .map(|(ones, &n)| ones as u64 * n)
                .sum()
        })
        .collect()
}

/// Number of pair weights of a length-`n` string, `ceil(n/2)`.
pub fn pair_count(n: usize) -> usize {
    n.div_ceil(2)
}

/// Solves the cumulative-weight system for the pair weights.
///
/// With `h = ceil(n/2)`, `w_l = sum_t sigma_t * min(t, l)` for `l <= h`, so
/// `sigma_i` is the negated second difference of `w` for `i < h` and the
/// last one follows from `w_1 = sum sigma`.
pub fn sigma_from_weights(w: &[u64]) -> Result<Vec<u8>> {
    let n = w.len();
    if n == 0 {
        return Err(Error::InvalidMultiset("empty weight vector".into()));
    }
    for l in 0..n / 2 {
        if w[l] != w[n - 1 - l] {
            return Err(Error::SymmetryViolation {
                class: l + 1,
                left: w[l],
                right: w[n - 1 - l],
            });
        }
    }
    let h = pair_count(n);
    let at = |i: usize| if i == 0 { 0 } else { w[i - 1] as i64 };
    let mut sigma = Vec::with_capacity(h);
    let mut sum = 0i64;
    for i in 1..h {
        let value = 2 * at(i) - at(i - 1) - at(i + 1);
        if !(0..=2).contains(&value) {
            return Err(Error::SigmaOutOfRange { index: i, value });
        }
        sum += value;
        sigma.push(value as u8);
    }
    let last = at(1) - sum;
    let max = if n % 2 == 1 { 1 } else { 2 };
    if !(0..=max).contains(&last) {
        return Err(Error::SigmaOutOfRange {
            index: h,
            value: last,
        });
    }
    sigma.push(last as u8);
    Ok(sigma)
}

/// Pair weights read directly off the string.
pub fn sigma_direct(s: &BinaryString) -> Vec<u8> {
    let n = s.len();
    (1..=pair_count(n))
        .map(|i| {
            if 2 * i - 1 == n {
                s.bit(i)
            } else {
                s.bit(i) + s.bit(n + 1 - i)
            }
        })
        .collect()
}

/// Cumulative weights together with the pair weights they determine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    pub n: usize,
    pub w: Vec<u64>,
    pub sigma: Vec<u8>,
}

impl WeightProfile {
    pub fn from_weights(w: Vec<u64>) -> Result<Self> {
        let sigma = sigma_from_weights(&w)?;
        Ok(WeightProfile {
            n: w.len(),
            w,
            sigma,
        })
    }

    pub fn from_multiset(c: &CompositionMultiset) -> Result<Self> {
        Self::from_weights(cumulative_weights(c)?)
    }

    pub fn total_weight(&self) -> u64 {
        self.w[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BinaryString {
        s.parse().unwrap()
    }

    fn comp(z: usize, w: usize) -> Composition {
        Composition::new(z, w).unwrap()
    }

    #[test]
    fn fragment_of_101() {
        let c = fragment(&bs("101"));
        assert_eq!(
            c.class(1),
            [comp(1, 0), comp(0, 1), comp(0, 1)].into_iter().collect()
        );
        assert_eq!(c.class(2), [comp(1, 1), comp(1, 1)].into_iter().collect());
        assert_eq!(c.class(3), [comp(1, 2)].into_iter().collect());
        assert_eq!(c.total(), 6);
    }

    #[test]
    fn fragment_of_100101_class_two() {
        let c = fragment(&bs("100101"));
        let mut expected = CompositionBag::new();
        expected.insert(comp(1, 1), 4);
        expected.insert(comp(2, 0), 1);
        assert_eq!(c.class(2), expected);
    }

    #[test]
    fn fragment_single_bit() {
        let c = fragment(&bs("0"));
        assert_eq!(c.n(), 1);
        assert_eq!(c.count(comp(1, 0)), 1);
        assert_eq!(c.total(), 1);
    }

    #[test]
    fn weights_of_examples() {
        assert_eq!(
            cumulative_weights(&fragment(&bs("100101"))).unwrap(),
            vec![3, 4, 5, 5, 4, 3]
        );
        assert_eq!(
            cumulative_weights(&fragment(&bs("101"))).unwrap(),
            vec![2, 2, 2]
        );
        assert_eq!(cumulative_weights(&fragment(&bs("1"))).unwrap(), vec![1]);
    }

    #[test]
    fn weights_reject_bad_cardinality() {
        let mut c = fragment(&bs("101"));
        c.insert(comp(1, 1), 1).unwrap();
        assert!(matches!(
            cumulative_weights(&c),
            Err(Error::InvalidMultiset(_))
        ));
    }

    #[test]
    fn sigma_examples() {
        for (s, sigma) in [
            ("1010001010", vec![1, 1, 1, 1, 0]),
            ("100101", vec![2, 0, 1]),
            ("01", vec![1]),
            ("11", vec![2]),
        ] {
            let w = cumulative_weights(&fragment(&bs(s))).unwrap();
            assert_eq!(sigma_from_weights(&w).unwrap(), sigma, "{s}");
            assert_eq!(sigma_direct(&bs(s)), sigma, "{s}");
        }
    }

    #[test]
    fn sigma_rejects_asymmetric_weights() {
        assert!(matches!(
            sigma_from_weights(&[3, 4, 5, 5, 4, 2]),
            Err(Error::SymmetryViolation { class: 1, .. })
        ));
    }

    #[test]
    fn sigma_rejects_out_of_range() {
        // second difference of 5 at i = 1
        assert!(matches!(
            sigma_from_weights(&[3, 1, 1, 3]),
            Err(Error::SigmaOutOfRange { index: 1, .. })
        ));
        // odd middle forced to 2
        assert!(matches!(
            sigma_from_weights(&[2, 4, 2]),
            Err(Error::SigmaOutOfRange { index: 2, value: 2 })
        ));
    }

    #[test]
    fn bag_subtraction() {
        let mut a = CompositionBag::new();
        a.insert(comp(1, 1), 4);
        a.insert(comp(2, 0), 1);
        let mut b = CompositionBag::new();
        b.insert(comp(1, 1), 3);
        let rest = a.subtract(&b).unwrap();
        assert_eq!(rest, [comp(1, 1), comp(2, 0)].into_iter().collect());

        let one: CompositionBag = [comp(1, 1)].into_iter().collect();
        let other: CompositionBag = [comp(2, 0)].into_iter().collect();
        assert!(matches!(
            one.subtract(&other),
            Err(Error::InconsistentMultiset(_))
        ));
    }

    #[test]
    fn bag_subtraction_example_string() {
        // class 8 of 1010001010 minus the composition spanning both ends
        let c = fragment(&bs("1010001010"));
        let rest = c
            .class(8)
            .subtract(&[comp(5, 3)].into_iter().collect())
            .unwrap();
        assert_eq!(rest.total(), 2);
        let s = bs("1010001010");
        let prefix = Composition::with_weight(8, s.bits()[..8].iter().map(|&b| b as usize).sum());
        let suffix = Composition::with_weight(8, s.bits()[2..].iter().map(|&b| b as usize).sum());
        assert_eq!(rest, [prefix, suffix].into_iter().collect());
    }

    #[test]
    fn difference_sizes() {
        let a = fragment(&bs("100101"));
        assert_eq!(a.difference_size(&a).unwrap(), 0);
        let mut b = a.clone();
        b.remove_one(comp(1, 1)).unwrap();
        b.insert(comp(2, 0), 1).unwrap();
        assert_eq!(a.difference_size(&b).unwrap(), 1);
        assert_eq!(
            fragment(&bs("01"))
                .difference_size(&fragment(&bs("10")))
                .unwrap(),
            0
        );
        assert!(matches!(
            a.difference_size(&fragment(&bs("01"))),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn parse_rejects_non_bits() {
        assert!("10a1".parse::<BinaryString>().is_err());
        assert!("".parse::<BinaryString>().is_err());
        assert_eq!(BinaryString::from_u64(5, 4).unwrap().to_string(), "0101");
        assert!(BinaryString::from_u64(16, 4).is_err());
    }
}
