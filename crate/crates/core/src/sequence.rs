//! Lacunary integer sequence families and exact fractional-part evaluation.
//!
//! Terms like `3^(k^2)` quickly outgrow anything a machine word can hold; the
//! fractional part `{n_k x}` at a rational `x = p/q` only needs `n_k mod q`,
//! which is cheap via modular exponentiation. Full big-integer terms are still
//! available (behind a size guard) for gap-ratio audits and small-index work.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::rational::UnitRational;
use crate::{Error, Result};

/// Largest exponent we will materialize as a full big integer (~830 kB).
const MAX_FULL_EXPONENT: u64 = 1 << 22;
/// Cap on explicit term lists.
const MAX_EXPLICIT_LEN: usize = 1_000_000;

/// A family of strictly increasing positive integer sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceFamily {
    /// `n_k = 3^(k^2)` for odd `k`, `3^((k-1)^2+1) - 1` for even `k`.
    Theorem1,
    /// `n_k = base^k`, `base >= 2`.
    Geometric { base: u64 },
    /// `n_k = base^k - 1`, `base >= 2`.
    PowersMinusOne { base: u64 },
    /// An explicit, strictly increasing list of positive integers.
    Explicit(Vec<BigInt>),
}

impl SequenceFamily {
    pub fn geometric(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidParameter("geometric base must be >= 2"));
        }
        Ok(SequenceFamily::Geometric { base })
    }

    pub fn powers_minus_one(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidParameter("base must be >= 2"));
        }
        Ok(SequenceFamily::PowersMinusOne { base })
    }

    pub fn explicit(terms: Vec<BigInt>) -> Result<Self> {
        if terms.is_empty() || terms.len() > MAX_EXPLICIT_LEN {
            return Err(Error::SizeGuard("explicit list length"));
        }
        if terms[0] <= BigInt::zero() {
            return Err(Error::InvalidParameter("terms must be positive"));
        }
        if terms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("terms must be strictly increasing"));
        }
        Ok(SequenceFamily::Explicit(terms))
    }

    /// The exact term `n_k`, `k >= 1`.
    pub fn term(&self, k: u64) -> Result<BigInt> {
        if k == 0 {
            return Err(Error::IndexOutOfRange);
        }
        match self {
            SequenceFamily::Theorem1 => {
                let e = if k % 2 == 1 { k * k } else { (k - 1) * (k - 1) + 1 };
                if e > MAX_FULL_EXPONENT {
                    return Err(Error::SizeGuard("theorem1 exponent"));
                }
                let p = BigInt::from(3u32).pow(e as u32);
                Ok(if k % 2 == 1 { p } else { p - 1 })
            }
            SequenceFamily::Geometric { base } => {
                if k > MAX_FULL_EXPONENT {
                    return Err(Error::SizeGuard("geometric exponent"));
                }
                Ok(BigInt::from(*base).pow(k as u32))
            }
            SequenceFamily::PowersMinusOne { base } => {
                if k > MAX_FULL_EXPONENT {
                    return Err(Error::SizeGuard("power exponent"));
                }
                Ok(BigInt::from(*base).pow(k as u32) - 1)
            }
            SequenceFamily::Explicit(terms) => terms
                .get((k - 1) as usize)
                .cloned()
                .ok_or(Error::IndexOutOfRange),
        }
    }

    /// The first `count` terms.
    pub fn terms(&self, count: u64) -> Result<Vec<BigInt>> {
        (1..=count).map(|k| self.term(k)).collect()
    }

    /// `n_k mod m` without materializing `n_k`.
    pub fn term_mod(&self, k: u64, m: &BigInt) -> Result<BigInt> {
        if k == 0 {
            return Err(Error::IndexOutOfRange);
        }
        if m <= &BigInt::zero() {
            return Err(Error::InvalidParameter("modulus must be positive"));
        }
        let three = BigInt::from(3u32);
        match self {
            SequenceFamily::Theorem1 => {
                let e = if k % 2 == 1 { k * k } else { (k - 1) * (k - 1) + 1 };
                let p = three.modpow(&BigInt::from(e), m);
                Ok(if k % 2 == 1 {
                    p
                } else {
                    (p - 1i32).mod_floor(m)
                })
            }
            SequenceFamily::Geometric { base } => {
                Ok(BigInt::from(*base).modpow(&BigInt::from(k), m))
            }
            SequenceFamily::PowersMinusOne { base } => {
                let p = BigInt::from(*base).modpow(&BigInt::from(k), m);
                Ok((p - 1i32).mod_floor(m))
            }
            SequenceFamily::Explicit(terms) => {
                let t = terms.get((k - 1) as usize).ok_or(Error::IndexOutOfRange)?;
                Ok(t.mod_floor(m))
            }
        }
    }

    /// `{n_k x}` exactly, as `((n_k mod q) p) mod q / q` for `x = p/q`.
    pub fn frac_part(&self, k: u64, x: &UnitRational) -> Result<UnitRational> {
        let den = x.denom().clone();
        let r = self.term_mod(k, &den)?;
        let num = (r * x.numer()).mod_floor(&den);
        UnitRational::new(num, den)
    }

    /// `min_{1 <= k < count} n_{k+1}/n_k` as an exact rational.
    pub fn gap_ratio_lower_bound(&self, count: u64) -> Result<BigRational> {
        if count < 2 {
            return Err(Error::InvalidParameter("need at least two terms"));
        }
        let terms = self.terms(count)?;
        let mut best: Option<BigRational> = None;
        for w in terms.windows(2) {
            let r = BigRational::new(w[1].clone(), w[0].clone());
            best = Some(match best {
                Some(b) if b <= r => b,
                _ => r,
            });
        }
        Ok(best.expect("count >= 2"))
    }

    /// Streaming residues `n_1 mod m, n_2 mod m, ...` for a word-sized
    /// modulus. O(1) big-integer-free work per term for the built-in
    /// families.
    pub fn residues_u64(&self, m: u64) -> Result<ResidueStream<'_>> {
        if m == 0 {
            return Err(Error::InvalidParameter("modulus must be positive"));
        }
        let state = match self {
            SequenceFamily::Theorem1 => StreamState::Theorem1 {
                pw_prev: 1 % m,
                odd_pow: 3 % m,
            },
            SequenceFamily::Geometric { base } => StreamState::Geometric {
                base: base % m,
                acc: 1 % m,
            },
            SequenceFamily::PowersMinusOne { base } => StreamState::PowersMinusOne {
                base: base % m,
                acc: 1 % m,
            },
            SequenceFamily::Explicit(terms) => StreamState::Explicit { terms, idx: 0 },
        };
        Ok(ResidueStream { m, k: 0, state })
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn submod1(a: u64, m: u64) -> u64 {
    // (a - 1) mod m without u64 overflow
    ((a as u128 + (m - 1 % m) as u128) % m as u128) as u64
}

enum StreamState<'a> {
    Theorem1 {
        /// `3^((k-1)^2) mod m`
        pw_prev: u64,
        /// `3^(2k-1) mod m`
        odd_pow: u64,
    },
    Geometric {
        base: u64,
        acc: u64,
    },
    PowersMinusOne {
        base: u64,
        acc: u64,
    },
    Explicit {
        terms: &'a [BigInt],
        idx: usize,
    },
}

/// Iterator over `n_k mod m` produced by [`SequenceFamily::residues_u64`].
pub struct ResidueStream<'a> {
    m: u64,
    k: u64,
    state: StreamState<'a>,
}

impl Iterator for ResidueStream<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        self.k += 1;
        let m = self.m;
        match &mut self.state {
            StreamState::Theorem1 { pw_prev, odd_pow } => {
                let pw_cur = mulmod(*pw_prev, *odd_pow, m);
                let term = if self.k % 2 == 1 {
                    pw_cur
                } else {
                    submod1(mulmod(3 % m, *pw_prev, m), m)
                };
                *pw_prev = pw_cur;
                *odd_pow = mulmod(*odd_pow, 9 % m, m);
                Some(term)
            }
            StreamState::Geometric { base, acc } => {
                *acc = mulmod(*acc, *base, m);
                Some(*acc)
            }
            StreamState::PowersMinusOne { base, acc } => {
                *acc = mulmod(*acc, *base, m);
                Some(submod1(*acc, m))
            }
            StreamState::Explicit { terms, idx } => {
                let t = terms.get(*idx)?;
                *idx += 1;
                t.mod_floor(&BigInt::from(m)).to_u64()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rat(p: i64, q: i64) -> UnitRational {
        UnitRational::new(BigInt::from(p), BigInt::from(q)).unwrap()
    }

    #[test]
    fn theorem1_small_terms() {
        let s = SequenceFamily::Theorem1;
        assert_eq!(s.term(1).unwrap(), BigInt::from(3));
        assert_eq!(s.term(2).unwrap(), BigInt::from(8));
        assert_eq!(s.term(3).unwrap(), BigInt::from(19683));
        // 3^10 - 1, computed by big-integer power
        assert_eq!(s.term(4).unwrap(), BigInt::from(59048));
    }

    #[test]
    fn geometric_term() {
        let s = SequenceFamily::geometric(2).unwrap();
        assert_eq!(s.term(5).unwrap(), BigInt::from(32));
    }

    #[test]
    fn frac_part_examples() {
        let s = SequenceFamily::Theorem1;
        // 8 * (1/3) = 8/3, fractional part 2/3
        assert_eq!(s.frac_part(2, &rat(1, 3)).unwrap(), rat(2, 3));
        // zero point stays zero
        assert_eq!(
            s.frac_part(7, &UnitRational::zero()).unwrap(),
            UnitRational::zero()
        );
        // 81 * 5 = 405 = 6 mod 7
        let g3 = SequenceFamily::geometric(3).unwrap();
        assert_eq!(g3.frac_part(4, &rat(5, 7)).unwrap(), rat(6, 7));
    }

    #[test]
    fn gap_ratio_examples() {
        let s = SequenceFamily::Theorem1;
        assert_eq!(
            s.gap_ratio_lower_bound(10).unwrap(),
            BigRational::new(BigInt::from(8), BigInt::from(3))
        );
        let g = SequenceFamily::geometric(2).unwrap();
        assert_eq!(
            g.gap_ratio_lower_bound(100).unwrap(),
            BigRational::from(BigInt::from(2))
        );
        // ratios (2^(k+1)-1)/(2^k-1) = 2 + 1/(2^k-1) decrease in k, so the
        // minimum over k < 50 sits at k = 49
        let p = SequenceFamily::powers_minus_one(2).unwrap();
        let expect = BigRational::new(
            BigInt::from((1u64 << 50) - 1),
            BigInt::from((1u64 << 49) - 1),
        );
        assert_eq!(p.gap_ratio_lower_bound(50).unwrap(), expect);
    }

    #[test]
    fn explicit_validation() {
        assert!(SequenceFamily::explicit(vec![]).is_err());
        assert!(
            SequenceFamily::explicit(vec![BigInt::from(2), BigInt::from(2)]).is_err()
        );
        let s = SequenceFamily::explicit(vec![BigInt::from(3), BigInt::from(10)]).unwrap();
        assert_eq!(s.term(2).unwrap(), BigInt::from(10));
        assert_eq!(s.term(3), Err(Error::IndexOutOfRange));
    }

    #[test]
    fn residue_stream_matches_term_mod() {
        let m = 1_000_003u64;
        let mb = BigInt::from(m);
        for fam in [
            SequenceFamily::Theorem1,
            SequenceFamily::geometric(2).unwrap(),
            SequenceFamily::powers_minus_one(2).unwrap(),
        ] {
            let stream: Vec<u64> = fam.residues_u64(m).unwrap().take(30).collect();
            for (i, r) in stream.iter().enumerate() {
                let want = fam.term_mod(i as u64 + 1, &mb).unwrap().to_u64().unwrap();
                assert_eq!(*r, want, "family {fam:?} k={}", i + 1);
            }
        }
    }

    #[test]
    fn strictly_increasing_first_40() {
        for fam in [
            SequenceFamily::Theorem1,
            SequenceFamily::geometric(2).unwrap(),
            SequenceFamily::powers_minus_one(2).unwrap(),
        ] {
            let terms = fam.terms(40).unwrap();
            assert!(terms.windows(2).all(|w| w[0] < w[1]), "{fam:?}");
        }
    }

    #[test]
    fn theorem1_gap_ratio_at_least_8_3() {
        let s = SequenceFamily::Theorem1;
        let bound = BigRational::new(BigInt::from(8), BigInt::from(3));
        let terms = s.terms(41).unwrap();
        for w in terms.windows(2) {
            assert!(BigRational::new(w[1].clone(), w[0].clone()) >= bound);
        }
    }
}
