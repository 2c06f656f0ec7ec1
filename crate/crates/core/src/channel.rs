//! Single composition errors.
//!
//! An error takes one composition of some class and moves one of its bits
//! from 0 to 1 or back, keeping the substring length. Class sizes stay the
//! same and exactly one cumulative weight moves by one.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::composition::{Composition, CompositionMultiset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    ZeroToOne,
    OneToZero,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::ZeroToOne => Direction::OneToZero,
            Direction::OneToZero => Direction::ZeroToOne,
        }
    }

    fn code(self) -> &'static str {
        match self {
            Direction::ZeroToOne => "01",
            Direction::OneToZero => "10",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorSpec {
    pub class: usize,
    pub target: Composition,
    pub direction: Direction,
}

impl ErrorSpec {
    pub fn is_admissible(&self) -> bool {
        self.target.len() == self.class
            && match self.direction {
                Direction::ZeroToOne => self.target.zeros >= 1,
                Direction::OneToZero => self.target.ones >= 1,
            }
    }

    /// The composition that replaces the target.
    pub fn result(&self) -> Composition {
        let Composition { zeros, ones } = self.target;
        match self.direction {
            Direction::ZeroToOne => Composition {
                zeros: zeros - 1,
                ones: ones + 1,
            },
            Direction::OneToZero => Composition {
                zeros: zeros + 1,
                ones: ones - 1,
            },
        }
    }

    /// The error that undoes this one.
    pub fn inverse(&self) -> ErrorSpec {
        ErrorSpec {
            class: self.class,
            target: self.result(),
            direction: self.direction.flipped(),
        }
    }
}

impl fmt::Display for ErrorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "class={} from={}^0{}^1 dir={}",
            self.class,
            self.target.zeros,
            self.target.ones,
            self.direction.code()
        )
    }
}

impl FromStr for ErrorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidError(format!("cannot parse {s:?}"));
        let mut class = None;
        let mut target = None;
        let mut direction = None;
        for field in s.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(bad)?;
            match key {
                "class" => class = Some(value.parse::<usize>().map_err(|_| bad())?),
                "from" => {
                    let (zeros, rest) = value.split_once("^0").ok_or_else(bad)?;
                    let ones = rest.strip_suffix("^1").ok_or_else(bad)?;
                    target = Some(Composition {
                        zeros: zeros.parse().map_err(|_| bad())?,
                        ones: ones.parse().map_err(|_| bad())?,
                    });
                }
                "dir" => {
                    direction = Some(match value {
                        "01" => Direction::ZeroToOne,
                        "10" => Direction::OneToZero,
                        _ => return Err(bad()),
                    })
                }
                _ => return Err(bad()),
            }
        }
        Ok(ErrorSpec {
            class: class.ok_or_else(bad)?,
            target: target.ok_or_else(bad)?,
            direction: direction.ok_or_else(bad)?,
        })
    }
}

pub fn apply_error(c: &CompositionMultiset, e: &ErrorSpec) -> Result<CompositionMultiset> {
    if !e.is_admissible() {
        return Err(Error::InvalidError(format!("{e} is not admissible")));
    }
    if e.class == 0 || e.class > c.n() || c.count(e.target) == 0 {
        return Err(Error::InvalidError(format!("{e}: target is absent")));
    }
    let mut out = c.clone();
    out.remove_one(e.target)?;
    out.insert(e.result(), 1)?;
    Ok(out)
}

/// Every admissible error, once per distinct target composition and direction.
pub fn error_specs(c: &CompositionMultiset) -> impl Iterator<Item = ErrorSpec> + '_ {
    (1..=c.n()).flat_map(move |class| {
        c.compositions(class).flat_map(move |(target, _)| {
            [Direction::ZeroToOne, Direction::OneToZero]
                .into_iter()
                .map(move |direction| ErrorSpec {
                    class,
                    target,
                    direction,
                })
                .filter(ErrorSpec::is_admissible)
        })
    })
}

/// Every admissible error together with the multiset it produces.
pub fn enumerate_errors(
    c: &CompositionMultiset,
) -> impl Iterator<Item = (ErrorSpec, CompositionMultiset)> + '_ {
    error_specs(c).map(move |e| {
        let corrupted = apply_error(c, &e).expect("enumerated errors are admissible");
        (e, corrupted)
    })
}

/// Generator for trial `stream` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A uniformly chosen admissible error, deterministic in `seed`.
pub fn random_error(
    c: &CompositionMultiset,
    seed: u64,
) -> Result<(ErrorSpec, CompositionMultiset)> {
    random_error_with(c, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_error_with<R: Rng>(
    c: &CompositionMultiset,
    rng: &mut R,
) -> Result<(ErrorSpec, CompositionMultiset)> {
    let specs: Vec<ErrorSpec> = error_specs(c).collect();
    if specs.is_empty() {
        return Err(Error::NoAdmissibleError);
    }
    let e = specs[rng.random_range(0..specs.len())];
    let corrupted = apply_error(c, &e)?;
    Ok((e, corrupted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composition::{fragment, raw_weights, BinaryString};

    fn multiset(s: &str) -> CompositionMultiset {
        fragment(&s.parse::<BinaryString>().unwrap())
    }

    #[test]
    fn apply_example() {
        let c = multiset("100101");
        let e = ErrorSpec {
            class: 2,
            target: Composition { zeros: 1, ones: 1 },
            direction: Direction::OneToZero,
        };
        let out = apply_error(&c, &e).unwrap();
        assert_eq!(out.count(Composition { zeros: 2, ones: 0 }), 2);
        assert_eq!(out.count(Composition { zeros: 1, ones: 1 }), 3);
        assert_eq!(apply_error(&out, &e.inverse()).unwrap(), c);
    }

    #[test]
    fn inadmissible_errors() {
        let c = multiset("100101");
        let no_ones = ErrorSpec {
            class: 1,
            target: Composition { zeros: 1, ones: 0 },
            direction: Direction::OneToZero,
        };
        assert!(matches!(
            apply_error(&c, &no_ones),
            Err(Error::InvalidError(_))
        ));
        let absent = ErrorSpec {
            class: 2,
            target: Composition { zeros: 0, ones: 2 },
            direction: Direction::OneToZero,
        };
        assert!(matches!(
            apply_error(&c, &absent),
            Err(Error::InvalidError(_))
        ));
        let wrong_class = ErrorSpec {
            class: 3,
            target: Composition { zeros: 1, ones: 1 },
            direction: Direction::OneToZero,
        };
        assert!(matches!(
            apply_error(&c, &wrong_class),
            Err(Error::InvalidError(_))
        ));
    }

    #[test]
    fn enumerate_two_bit_string() {
        let specs: Vec<String> = error_specs(&multiset("01"))
            .map(|e| e.to_string())
            .collect();
        assert_eq!(
            specs,
            vec![
                "class=1 from=0^01^1 dir=10",
                "class=1 from=1^00^1 dir=01",
                "class=2 from=1^01^1 dir=01",
                "class=2 from=1^01^1 dir=10",
            ]
        );
    }

    #[test]
    fn enumeration_count_for_ecc_example() {
        let c = multiset("00000100001");
        let count = enumerate_errors(&c).count();
        assert!(count <= 2 * 66);
        assert_eq!(count, ERRORS_OF_EXAMPLE);
    }

    const ERRORS_OF_EXAMPLE: usize = 36;

    #[test]
    fn every_error_moves_one_weight_by_one() {
        let c = multiset("0110100111");
        let w = raw_weights(&c);
        for (e, out) in enumerate_errors(&c) {
            out.validate().unwrap();
            assert_eq!(c.difference_size(&out).unwrap(), 1, "{e}");
            let moved: Vec<i64> = raw_weights(&out)
                .iter()
                .zip(&w)
                .map(|(a, b)| *a as i64 - *b as i64)
                .filter(|d| *d != 0)
                .collect();
            assert_eq!(moved.len(), 1);
            assert_eq!(moved[0].abs(), 1);
        }
    }

    #[test]
    fn display_round_trips() {
        for e in error_specs(&multiset("0011010")) {
            assert_eq!(e.to_string().parse::<ErrorSpec>().unwrap(), e);
        }
        assert!("class=1 from=1^0 dir=01".parse::<ErrorSpec>().is_err());
    }

    #[test]
    fn random_errors_are_deterministic_and_enumerated() {
        let c = multiset("00000100001");
        let all: Vec<ErrorSpec> = error_specs(&c).collect();
        for seed in 0..50 {
            let (a, _) = random_error(&c, seed).unwrap();
            let (b, _) = random_error(&c, seed).unwrap();
            assert_eq!(a, b);
            assert!(all.contains(&a));
        }
    }

    #[test]
    fn random_errors_are_uniform() {
        let c = multiset("0110");
        let all: Vec<ErrorSpec> = error_specs(&c).collect();
        let mut hits = vec![0u32; all.len()];
        let trials = 1000;
        for seed in 0..trials {
            let (e, _) = random_error(&c, seed).unwrap();
            hits[all.iter().position(|x| *x == e).unwrap()] += 1;
        }
        let p = 1.0 / all.len() as f64;
        let mean = trials as f64 * p;
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        for h in hits {
            assert!((h as f64 - mean).abs() <= 5.0 * sd, "{h} vs {mean}");
        }
    }
}
