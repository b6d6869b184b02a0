//! Hereditary base-k ("superbase") notation.
//!
//! A natural is written as a sum of powers of `k` with coefficients below
//! `k`, and every exponent is written the same way, recursively. For example
//! `23 = 2^(2^2) + 2^2 + 2 + 1` and `514 = 2^(2^(2+1)+1) + 2`.
//!
//! Only the outermost base is stored. The base-free shape of the expansion
//! (exponents and coefficients) is kept as an [`Ordinal`]: replacing the base
//! by ω is precisely that shape, so changing the base never touches it.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::ordinal::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HereditaryError {
    #[error("base must be at least 2, got {0}")]
    BaseTooSmall(BigUint),
    #[error("cannot rebase from {from} down to {to}")]
    RebaseDown { from: BigUint, to: BigUint },
    #[error("coefficient {coefficient} is not below base {base}")]
    CoefficientTooLarge { coefficient: BigUint, base: BigUint },
    #[error("expanding a power with exponent {exponent} exceeds the limit of {limit} terms")]
    ExpansionLimit { exponent: String, limit: u64 },
    #[error("a block of {exponent} terms is too long to count in {max_bits} bits")]
    BlockTooLong { exponent: String, max_bits: u64 },
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
}

/// A natural number written hereditarily to a base `k ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HereditaryRep {
    base: BigUint,
    form: Ordinal,
}

/// Writes `n` hereditarily to base `k`.
pub fn to_hereditary(n: &BigUint, k: &BigUint) -> Result<HereditaryRep, HereditaryError> {
    check_base(k)?;
    Ok(HereditaryRep {
        base: k.clone(),
        form: expand(n, k),
    })
}

fn check_base(k: &BigUint) -> Result<(), HereditaryError> {
    if *k < BigUint::from(2u32) {
        Err(HereditaryError::BaseTooSmall(k.clone()))
    } else {
        Ok(())
    }
}

/// The hereditary base-`k` shape of `n`.
pub(crate) fn expand(n: &BigUint, k: &BigUint) -> Ordinal {
    if n < k {
        return Ordinal::natural(n.clone());
    }
    if let (Some(n), Some(k)) = (n.to_u64(), k.to_u64()) {
        return expand_u64(n, k);
    }
    let mut digits = Vec::new();
    let mut rest = n.clone();
    let mut position = 0u64;
    while !rest.is_zero() {
        let (q, d) = rest.div_rem(k);
        if !d.is_zero() {
            digits.push((expand(&BigUint::from(position), k), d));
        }
        rest = q;
        position += 1;
    }
    digits.reverse();
    Ordinal::from_canonical_terms(digits)
}

fn expand_u64(mut n: u64, k: u64) -> Ordinal {
    if n < k {
        return Ordinal::from(n);
    }
    let mut digits = Vec::new();
    let mut position = 0u64;
    while n > 0 {
        let d = n % k;
        if d > 0 {
            digits.push((expand_u64(position, k), BigUint::from(d)));
        }
        n /= k;
        position += 1;
    }
    digits.reverse();
    Ordinal::from_canonical_terms(digits)
}

impl HereditaryRep {
    /// Pairs a base with an expansion shape, checking every coefficient is
    /// below the base.
    pub fn from_form(base: BigUint, form: Ordinal) -> Result<Self, HereditaryError> {
        check_base(&base)?;
        check_coefficients(&form, &base)?;
        Ok(HereditaryRep { base, form })
    }

    /// Skips validation; the caller guarantees every coefficient is below `base`.
    pub(crate) fn from_parts(base: BigUint, form: Ordinal) -> Self {
        HereditaryRep { base, form }
    }

    pub fn zero(base: BigUint) -> Result<Self, HereditaryError> {
        HereditaryRep::from_form(base, Ordinal::zero())
    }

    pub fn base(&self) -> &BigUint {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    /// The exponents and coefficients, independent of the base.
    pub fn form(&self) -> &Ordinal {
        &self.form
    }

    /// Replaces the base by ω throughout.
    pub fn ordinalize(&self) -> Ordinal {
        self.form.clone()
    }

    /// Replaces every occurrence of the base by `new_base`. Bases may only
    /// grow, which keeps every coefficient below the base.
    pub fn rebase(&self, new_base: &BigUint) -> Result<HereditaryRep, HereditaryError> {
        if *new_base < self.base {
            return Err(HereditaryError::RebaseDown {
                from: self.base.clone(),
                to: new_base.clone(),
            });
        }
        Ok(HereditaryRep {
            base: new_base.clone(),
            form: self.form.clone(),
        })
    }

    /// The represented natural.
    ///
    /// # Panics
    ///
    /// If some exponent does not fit in `u32`; such values have billions of
    /// digits. Use [`HereditaryRep::checked_eval`] when the size is unknown.
    pub fn eval(&self) -> BigUint {
        eval_form(&self.form, &self.base)
    }

    /// The represented natural, or `None` when it may need more than
    /// `max_bits` bits.
    pub fn checked_eval(&self, max_bits: u64) -> Option<BigUint> {
        if self.log2_upper_bound() > max_bits as f64 {
            None
        } else {
            Some(self.eval())
        }
    }

    /// An upper bound on `log2` of the value; `-inf` for 0 and possibly
    /// `+inf` for towers too tall for `f64`.
    pub fn log2_upper_bound(&self) -> f64 {
        let log2_base = match self.base.to_f64() {
            Some(b) if b.is_finite() => b.log2(),
            _ => self.base.bits() as f64,
        };
        log2_bound(&self.form, log2_base)
    }

    /// Subtracts one, working on the representation directly.
    ///
    /// When the lowest term is `k^e·c` with `e > 0`, it becomes
    /// `k^e·(c-1) + (k-1)·k^(e-1) + … + (k-1)`, which has `e` new terms;
    /// `max_new_terms` bounds that `e`. Returns `Ok(None)` for 0.
    pub fn decrement(&self, max_new_terms: u64) -> Result<Option<HereditaryRep>, HereditaryError> {
        let Some((last, init)) = self.form.terms().split_last() else {
            return Ok(None);
        };
        let mut terms: Vec<(Ordinal, BigUint)> = init
            .iter()
            .map(|t| (t.exponent().clone(), t.coefficient().clone()))
            .collect();
        if !last.coefficient().is_one() {
            terms.push((last.exponent().clone(), last.coefficient() - 1u32));
        }
        if !last.exponent().is_zero() {
            let exponent = HereditaryRep {
                base: self.base.clone(),
                form: last.exponent().clone(),
            };
            let count = exponent
                .checked_eval(64)
                .and_then(|e| e.to_u64())
                .filter(|&e| e <= max_new_terms)
                .ok_or_else(|| HereditaryError::ExpansionLimit {
                    exponent: exponent.to_string(),
                    limit: max_new_terms,
                })?;
            let top_digit = &self.base - 1u32;
            terms.reserve(usize::try_from(count).unwrap_or(0));
            for position in (0..count).rev() {
                terms.push((expand(&BigUint::from(position), &self.base), top_digit.clone()));
            }
        }
        Ok(Some(HereditaryRep {
            base: self.base.clone(),
            form: Ordinal::from_canonical_terms(terms),
        }))
    }

    pub(crate) fn write_notation(form: &Ordinal, base: &str, out: &mut String, top_level: bool) {
        if form.is_zero() {
            out.push('0');
            return;
        }
        let separator = if top_level { " + " } else { "+" };
        for (i, t) in form.terms().iter().enumerate() {
            if i > 0 {
                out.push_str(separator);
            }
            let e = t.exponent();
            if e.is_zero() {
                out.push_str(&t.coefficient().to_string());
                continue;
            }
            out.push_str(base);
            if *e != Ordinal::one() {
                out.push('^');
                let atomic = matches!(e.terms(), [x] if x.exponent().is_zero()
                    || (*x.exponent() == Ordinal::one() && x.coefficient().is_one()));
                if !atomic {
                    out.push('(');
                }
                HereditaryRep::write_notation(e, base, out, false);
                if !atomic {
                    out.push(')');
                }
            }
            if !t.coefficient().is_one() {
                out.push('*');
                out.push_str(&t.coefficient().to_string());
            }
        }
    }
}

impl PartialOrd for HereditaryRep {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.base == other.base).then(|| self.form.cmp(&other.form))
    }
}

fn check_coefficients(form: &Ordinal, base: &BigUint) -> Result<(), HereditaryError> {
    for t in form.terms() {
        if t.coefficient() >= base {
            return Err(HereditaryError::CoefficientTooLarge {
                coefficient: t.coefficient().clone(),
                base: base.clone(),
            });
        }
        check_coefficients(t.exponent(), base)?;
    }
    Ok(())
}

fn eval_form(form: &Ordinal, base: &BigUint) -> BigUint {
    let mut total = BigUint::zero();
    for t in form.terms() {
        let e = eval_form(t.exponent(), base);
        let e: u32 = e
            .to_u32()
            .expect("exponent too large to materialize the value");
        total += base.pow(e) * t.coefficient();
    }
    total
}

fn log2_bound(form: &Ordinal, log2_base: f64) -> f64 {
    let Some(lead) = form.terms().first() else {
        return f64::NEG_INFINITY;
    };
    // value < (c+1)·k^e for the leading term k^e·c
    let e = lead.exponent();
    let e_bound = log2_bound(e, log2_base);
    let e_value = if e_bound <= 52.0 {
        eval_form_f64(e, log2_base.exp2())
    } else {
        // slack for rounding in the nested estimate
        e_bound.exp2() * (1.0 + 1e-9)
    };
    let c = lead.coefficient().to_f64().unwrap_or(f64::INFINITY);
    e_value * log2_base + (c + 1.0).log2()
}

fn eval_form_f64(form: &Ordinal, base: f64) -> f64 {
    form.terms()
        .iter()
        .map(|t| {
            t.coefficient().to_f64().unwrap_or(f64::INFINITY)
                * base.powf(eval_form_f64(t.exponent(), base))
        })
        .sum()
}

impl fmt::Display for HereditaryRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        HereditaryRep::write_notation(&self.form, &self.base.to_string(), &mut out, true);
        f.write_str(&out)
    }
}

/// Parses the canonical notation produced by `Display` at the given base.
///
/// Whitespace is ignored. Only canonical forms are accepted: terms in
/// strictly decreasing order, coefficients in `2..base` after `*`, and no
/// explicit `^0` or `^1`.
pub fn parse_rep(text: &str, base: &BigUint) -> Result<HereditaryRep, HereditaryError> {
    check_base(base)?;
    let mut p = RepParser {
        bytes: text.as_bytes(),
        pos: 0,
        base,
    };
    let form = if text.trim() == "0" {
        p.pos = text.len();
        Ordinal::zero()
    } else {
        p.sum()?
    };
    if p.peek().is_some() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(HereditaryRep {
        base: base.clone(),
        form,
    })
}

struct RepParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    base: &'a BigUint,
}

impl RepParser<'_> {
    fn error(&self, message: &str) -> HereditaryError {
        HereditaryError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn peek(&mut self) -> Option<u8> {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<BigUint, HereditaryError> {
        self.peek();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        BigUint::parse_bytes(&self.bytes[start..self.pos], 10)
            .ok_or_else(|| self.error("invalid natural number"))
    }

    fn sum(&mut self) -> Result<Ordinal, HereditaryError> {
        let mut terms: Vec<(Ordinal, BigUint)> = Vec::new();
        loop {
            let start = self.pos;
            let term = self.term()?;
            if let Some(prev) = terms.last() {
                if prev.0 <= term.0 {
                    self.pos = start;
                    return Err(self.error("terms must strictly decrease"));
                }
            }
            terms.push(term);
            if !self.eat(b'+') {
                break;
            }
        }
        Ok(Ordinal::from_canonical_terms(terms))
    }

    fn term(&mut self) -> Result<(Ordinal, BigUint), HereditaryError> {
        let start = self.pos;
        let n = self.nat()?;
        if n.is_zero() {
            self.pos = start;
            return Err(self.error("zero is only valid on its own"));
        }
        let exponent = if self.eat(b'^') {
            if n != *self.base {
                self.pos = start;
                return Err(self.error("only the base may be raised to a power"));
            }
            let at = self.pos;
            let e = self.power()?;
            if e.is_zero() || e == Ordinal::one() {
                self.pos = at;
                return Err(self.error("exponents 0 and 1 are written implicitly"));
            }
            e
        } else if n == *self.base {
            Ordinal::one()
        } else if n < *self.base {
            if self.peek() == Some(b'*') {
                return Err(self.error("a coefficient needs a power of the base"));
            }
            return Ok((Ordinal::zero(), n));
        } else {
            self.pos = start;
            return Err(self.error("numeral exceeds the base"));
        };
        let coefficient = if self.eat(b'*') {
            let at = self.pos;
            let c = self.nat()?;
            if c <= BigUint::one() || c >= *self.base {
                self.pos = at;
                return Err(self.error("coefficient must lie in 2..base"));
            }
            c
        } else {
            BigUint::one()
        };
        Ok((exponent, coefficient))
    }

    fn power(&mut self) -> Result<Ordinal, HereditaryError> {
        if self.eat(b'(') {
            let inner = self.sum()?;
            if !self.eat(b')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(inner);
        }
        let start = self.pos;
        let n = self.nat()?;
        if n == *self.base {
            Ok(Ordinal::omega())
        } else if n < *self.base {
            Ok(Ordinal::natural(n))
        } else {
            self.pos = start;
            Err(self.error("numeral exceeds the base"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn rep(n: u64, k: u64) -> HereditaryRep {
        to_hereditary(&big(n), &big(k)).unwrap()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(rep(23, 2).to_string(), "2^(2^2) + 2^2 + 2 + 1");
        assert_eq!(rep(514, 2).to_string(), "2^(2^(2+1)+1) + 2");
        assert_eq!(rep(0, 7).to_string(), "0");
        assert!(rep(0, 7).is_zero());
    }

    #[test]
    fn other_bases_print_coefficients() {
        assert_eq!(rep(6, 3).to_string(), "3*2");
        assert_eq!(rep(100, 3).to_string(), "3^(3+1) + 3^2*2 + 1");
        assert_eq!(rep(100_000, 10).to_string(), "10^5");
        assert_eq!(rep(9, 3).to_string(), "3^2");
        assert_eq!(rep(27, 3).to_string(), "3^3");
        assert_eq!(rep(3usize.pow(6) as u64 * 2, 3).to_string(), "3^(3*2)*2");
    }

    #[test]
    fn rejects_small_bases() {
        assert_eq!(
            to_hereditary(&big(5), &big(1)),
            Err(HereditaryError::BaseTooSmall(big(1)))
        );
        assert!(to_hereditary(&big(5), &big(0)).is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(rep(23, 2).eval(), big(23));
        assert_eq!(rep(514, 2).eval(), big(514));
        let bumped = rep(23, 2).rebase(&big(3)).unwrap();
        assert_eq!(bumped.to_string(), "3^(3^3) + 3^3 + 3 + 1");
        // 3^27 + 27 + 3 + 1, computed independently.
        let expected = big(3).pow(27) + big(31);
        assert_eq!(bumped.eval(), expected);
        assert_eq!(bumped.eval(), big(7_625_597_485_018));
    }

    #[test]
    fn rebase_rules() {
        let r = rep(23, 2);
        assert_eq!(r.rebase(&big(2)).unwrap(), r);
        assert_eq!(rep(2, 2).rebase(&big(3)).unwrap().eval(), big(3));
        assert_eq!(rep(2, 2).rebase(&big(3)).unwrap().to_string(), "3");
        assert_eq!(
            rep(5, 3).rebase(&big(2)),
            Err(HereditaryError::RebaseDown {
                from: big(3),
                to: big(2)
            })
        );
    }

    #[test]
    fn ordinalize_examples() {
        assert_eq!(rep(5, 9).ordinalize(), Ordinal::from(5));
        assert_eq!(rep(23, 2).ordinalize().to_string(), "w^(w^w) + w^w + w + 1");
        assert_eq!(rep(3, 2).ordinalize().to_string(), "w + 1");
    }

    #[test]
    fn large_values_use_the_bigint_path() {
        let n = big(7).pow(40) * big(3) + big(11);
        let r = to_hereditary(&n, &big(7)).unwrap();
        assert_eq!(r.eval(), n);
        let k = big(10).pow(30);
        let r = to_hereditary(&n, &k).unwrap();
        assert_eq!(r.eval(), n);
        assert_eq!(to_hereditary(&big(12), &k).unwrap().to_string(), "12");
    }

    #[test]
    fn decrement_expands_powers() {
        let r = rep(16, 2).rebase(&big(3)).unwrap();
        let d = r.decrement(1000).unwrap().unwrap();
        assert_eq!(d.eval(), big(3).pow(27) - 1u32);
        assert_eq!(d, to_hereditary(&d.eval(), &big(3)).unwrap());
        assert_eq!(rep(0, 3).decrement(10), Ok(None));
        assert_eq!(rep(7, 10).decrement(0).unwrap().unwrap(), rep(6, 10));
        assert!(matches!(
            rep(16, 2).rebase(&big(3)).unwrap().decrement(26),
            Err(HereditaryError::ExpansionLimit { limit: 26, .. })
        ));
    }

    #[test]
    fn checked_eval_refuses_towers() {
        let tower = rep(65536, 2).rebase(&big(10)).unwrap();
        assert_eq!(tower.checked_eval(1 << 20), None);
        assert_eq!(rep(1000, 2).checked_eval(64), Some(big(1000)));
        assert_eq!(rep(0, 2).checked_eval(0), Some(big(0)));
    }

    #[test]
    fn parse_canonical_forms() {
        for (n, k) in [(23, 2), (514, 2), (0, 5), (100, 3), (1, 2), (999_999, 10), (6, 3)] {
            let r = rep(n, k);
            assert_eq!(parse_rep(&r.to_string(), &big(k)).unwrap(), r);
        }
        assert_eq!(
            parse_rep("2^(2^2)+2^2+2+1", &big(2)).unwrap(),
            rep(23, 2)
        );
    }

    #[test]
    fn parse_rejects_non_canonical() {
        let two = big(2);
        for bad in ["2^1", "2^0", "1 + 2", "2 + 2", "3", "2*1", "1*2", "0 + 1", "2^", "2^(2", "x"] {
            assert!(parse_rep(bad, &two).is_err(), "{bad}");
        }
        assert!(parse_rep("3^2*3", &big(3)).is_err());
        assert!(parse_rep("4^2", &big(3)).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_big(bytes in prop::collection::vec(any::<u8>(), 0..32), k in 2u64..40) {
            let n = BigUint::from_bytes_le(&bytes);
            let r = to_hereditary(&n, &big(k)).unwrap();
            prop_assert_eq!(r.eval(), n.clone());
            prop_assert_eq!(parse_rep(&r.to_string(), &big(k)).unwrap(), r);
        }

        #[test]
        fn rebase_is_monotone(n in 1u64..1_000_000, k in 2u64..10, step in 1u64..=2) {
            let r = rep(n, k);
            let bumped = r.rebase(&big(k + step)).unwrap();
            prop_assert_eq!(bumped.ordinalize(), r.ordinalize());
            // towers such as 2^(2^(2^2)) bumped to base 4 cannot be materialized
            if let Some(v) = bumped.checked_eval(1 << 16) {
                prop_assert!(v >= big(n));
                prop_assert_eq!(v == big(n), n < k);
                prop_assert_eq!(to_hereditary(&v, &big(k + step)).unwrap(), bumped);
            }
        }

        #[test]
        fn ordinal_is_monotone_in_value(m in 0u64..100_000, n in 0u64..100_000, k in 2u64..10) {
            prop_assume!(m != n);
            let (lo, hi) = (m.min(n), m.max(n));
            prop_assert_eq!(rep(lo, k).ordinalize().cmp(&rep(hi, k).ordinalize()), Ordering::Less);
        }

        #[test]
        fn decrement_matches_arithmetic(n in 1u64..1_000_000, k in 2u64..12) {
            let d = rep(n, k).decrement(u64::MAX).unwrap().unwrap();
            prop_assert_eq!(d, rep(n - 1, k));
        }
    }
}
