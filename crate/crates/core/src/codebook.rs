//! The reconstruction codebook.
//!
//! An even-length codeword has `s_1 = 0`, `s_n = 1`, and its inner mirrored
//! pairs `2..=n/2` form a valid ballot sequence. Every prefix is therefore
//! strictly lighter than the suffix of the same length, which makes the
//! codeword recoverable from its composition multiset without guessing.
//! Odd lengths take an even codeword and insert a free middle bit.
//!
//! Messages are mapped to codewords by unranking the pair sequence; for odd
//! lengths the lowest message bit is the middle bit.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::ballot::{self, PairSymbol};
use crate::composition::BinaryString;
use crate::error::{Error, Result};

/// Largest length `enumerate_r` will list.
pub const ENUMERATION_LIMIT: usize = 24;

/// Message bits read as a big-endian integer.
pub fn message_value(message: &BinaryString) -> BigUint {
    message
        .bits()
        .iter()
        .fold(BigUint::zero(), |acc, &b| (acc << 1u32) + b as u32)
}

/// The `k`-bit big-endian representation of `value`.
pub fn message_bits(value: &BigUint, k: usize) -> Result<BinaryString> {
    if value.bits() > k as u64 {
        return Err(Error::InvalidMessage(format!(
            "value does not fit in {k} bits"
        )));
    }
    BinaryString::new(
        (0..k)
            .map(|i| value.bit((k - 1 - i) as u64) as u8)
            .collect(),
    )
}

/// `|S_R(n)|`.
pub fn capacity_r(n: usize) -> BigUint {
    match n {
        0 | 1 => BigUint::zero(),
        n if n % 2 == 0 => ballot::count(n / 2 - 1),
        n => ballot::count((n - 3) / 2) * 2u32,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeParamsR {
    pub k: usize,
    pub n: usize,
    pub capacity: BigUint,
}

impl CodeParamsR {
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    /// Number of inner mirrored pairs carrying the ballot sequence.
    pub fn pairs(&self) -> usize {
        inner_pairs(self.n)
    }

    pub fn encode(&self, message: &BinaryString) -> Result<BinaryString> {
        if message.len() != self.k {
            return Err(Error::InvalidMessage(format!(
                "expected {} bits, got {}",
                self.k,
                message.len()
            )));
        }
        codeword_of_rank(self.n, &message_value(message))
    }

    pub fn message_of(&self, codeword: &BinaryString) -> Result<BinaryString> {
        if codeword.len() != self.n {
            return Err(Error::NotACodeword(format!(
                "length {} differs from code length {}",
                codeword.len(),
                self.n
            )));
        }
        let r = rank_of_codeword(codeword)?;
        if r.bits() > self.k as u64 {
            return Err(Error::NotACodeword(format!(
                "codeword index exceeds the {}-bit message space",
                self.k
            )));
        }
        message_bits(&r, self.k)
    }
}

fn inner_pairs(n: usize) -> usize {
    (n / 2).saturating_sub(1)
}

/// Shortest length, of either parity, whose codebook holds `2^k` words.
pub fn params_r(k: usize) -> Result<CodeParamsR> {
    if k == 0 {
        return Err(Error::InvalidMessage(
            "message length must be at least 1".into(),
        ));
    }
    let needed = BigUint::one() << k;
    let mut n = k + 1;
    loop {
        let capacity = capacity_r(n);
        if capacity >= needed {
            return Ok(CodeParamsR { k, n, capacity });
        }
        n += 1;
    }
}

/// The codeword of length `n` at position `rank`.
pub fn codeword_of_rank(n: usize, rank: &BigUint) -> Result<BinaryString> {
    if n < 2 || *rank >= capacity_r(n) {
        return Err(Error::CapacityExceeded);
    }
    let odd = n % 2 == 1;
    let (pair_rank, middle) = if odd {
        (rank >> 1u32, rank.bit(0) as u8)
    } else {
        (rank.clone(), 0)
    };
    let seq = ballot::unrank(inner_pairs(n), &pair_rank)?;
    let mut bits = vec![0u8; n];
    bits[n - 1] = 1;
    for (i, symbol) in seq.iter().enumerate() {
        let (front, back) = symbol.bits();
        bits[i + 1] = front;
        bits[n - 2 - i] = back;
    }
    if odd {
        bits[n / 2] = middle;
    }
    BinaryString::new(bits)
}

/// Mirrored pairs `2..=floor(n/2)` as symbols.
pub fn pair_sequence(s: &BinaryString) -> Vec<PairSymbol> {
    let n = s.len();
    (2..=n / 2)
        .map(|i| PairSymbol::from_bits(s.bit(i), s.bit(n + 1 - i)))
        .collect()
}

pub fn is_codeword_r(s: &BinaryString) -> bool {
    s.len() >= 2
        && s.bit(1) == 0
        && s.bit(s.len()) == 1
        && ballot::is_valid_sequence(&pair_sequence(s))
}

/// Inverse of [`codeword_of_rank`].
pub fn rank_of_codeword(s: &BinaryString) -> Result<BigUint> {
    if s.len() < 2 || s.bit(1) != 0 || s.bit(s.len()) != 1 {
        return Err(Error::NotACodeword(format!(
            "{s}: boundary bits must be 0 ... 1"
        )));
    }
    let pair_rank =
        ballot::rank(&pair_sequence(s)).map_err(|e| Error::NotACodeword(format!("{s}: {e}")))?;
    Ok(if s.len() % 2 == 1 {
        (pair_rank << 1u32) + s.bit(s.len().div_ceil(2)) as u32
    } else {
        pair_rank
    })
}

/// Every codeword of length `n`, in rank order.
pub fn enumerate_r(n: usize) -> Result<Vec<BinaryString>> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let total = capacity_r(n)
        .to_u64()
        .expect("bounded by the enumeration limit");
    (0..total)
        .map(|r| codeword_of_rank(n, &BigUint::from(r)))
        .collect()
}

/// `wt(s_1..s_j) < wt(s_{n+1-j}..s_n)` for every `j <= n/2`.
pub fn has_strict_separation(s: &BinaryString) -> bool {
    let n = s.len();
    let mut diff = 0i64;
    for j in 1..=n / 2 {
        diff += s.bit(n + 1 - j) as i64 - s.bit(j) as i64;
        if diff <= 0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BinaryString {
        s.parse().unwrap()
    }

    /// Brute-force filter of all strings of length `n` by the codebook definition.
    fn filter(n: usize) -> Vec<String> {
        (0..1u64 << n)
            .map(|v| BinaryString::from_u64(v, n).unwrap())
            .filter(is_codeword_r)
            .map(|s| s.to_string())
            .collect()
    }

    #[test]
    fn params_examples() {
        for (k, n, cap) in [(1, 3, 2u32), (2, 5, 6), (4, 7, 20)] {
            let p = params_r(k).unwrap();
            assert_eq!((p.n, p.capacity.clone()), (n, BigUint::from(cap)), "k={k}");
        }
        assert_eq!(capacity_r(4), BigUint::from(3u32));
        assert!(params_r(0).is_err());
    }

    #[test]
    fn encode_examples() {
        let p = params_r(1).unwrap();
        assert_eq!(p.encode(&bs("0")).unwrap(), bs("001"));
        assert_eq!(p.encode(&bs("1")).unwrap(), bs("011"));
        let p = params_r(2).unwrap();
        assert_eq!(p.encode(&bs("00")).unwrap(), enumerate_r(5).unwrap()[0]);
        assert!(p.encode(&bs("000")).is_err());
    }

    #[test]
    fn membership_examples() {
        for s in ["0001", "0011", "0111"] {
            assert!(is_codeword_r(&bs(s)), "{s}");
        }
        assert!(!is_codeword_r(&bs("0101")));
        assert!(!is_codeword_r(&bs("1001")));
        assert_eq!(filter(4), vec!["0001", "0011", "0111"]);
    }

    #[test]
    fn message_examples() {
        let p = params_r(1).unwrap();
        assert_eq!(p.message_of(&bs("001")).unwrap(), bs("0"));
        assert_eq!(p.message_of(&bs("011")).unwrap(), bs("1"));
        let p2 = CodeParamsR {
            k: 1,
            n: 4,
            capacity: capacity_r(4),
        };
        assert!(matches!(
            p2.message_of(&bs("0101")),
            Err(Error::NotACodeword(_))
        ));
    }

    #[test]
    fn enumeration_examples() {
        // rank order: Sym0, Sym1, Anti0 on the single inner pair
        assert_eq!(
            enumerate_r(4)
                .unwrap()
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>(),
            vec!["0001", "0111", "0011"]
        );
        assert_eq!(enumerate_r(2).unwrap(), vec![bs("01")]);
        assert_eq!(enumerate_r(6).unwrap().len(), 10);
        assert_eq!(enumerate_r(25), Err(Error::TooLarge { n: 25, limit: 24 }));
    }

    #[test]
    fn enumeration_agrees_with_filter() {
        for n in 2..=14 {
            let mut listed: Vec<String> = enumerate_r(n)
                .unwrap()
                .iter()
                .map(|s| s.to_string())
                .collect();
            listed.sort();
            assert_eq!(listed, filter(n), "n={n}");
            if n % 2 == 0 {
                assert_eq!(
                    capacity_r(n),
                    ballot::binomial(n as u64 - 1, n as u64 / 2 - 1)
                );
            }
        }
    }

    #[test]
    fn codewords_are_separated_and_not_reversible() {
        for n in 2..=14 {
            for s in enumerate_r(n).unwrap() {
                assert!(has_strict_separation(&s), "{s}");
                assert!(!is_codeword_r(&s.reversed()), "{s}");
            }
        }
    }

    #[test]
    fn round_trip_small_messages() {
        for k in 1..=10 {
            let p = params_r(k).unwrap();
            for v in 0..1u64 << k {
                let m = BinaryString::from_u64(v, k).unwrap();
                let c = p.encode(&m).unwrap();
                assert!(is_codeword_r(&c));
                assert_eq!(p.message_of(&c).unwrap(), m);
            }
        }
    }

    #[test]
    fn capacity_respects_lower_bound() {
        for n in (4..=64).step_by(2) {
            let bound = 3.0 * 2f64.powi(n as i32 - 5)
                / (2.0 * std::f64::consts::PI * (n as f64 - 2.0)).sqrt();
            assert!(capacity_r(n).to_f64().unwrap() >= bound, "n={n}");
        }
    }
}
