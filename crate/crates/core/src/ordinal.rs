//! Ordinals below ε₀ in (extended) Cantor normal form.
//!
//! An [`Ordinal`] is a finite, strictly decreasing sum
//! `ω^α₁·c₁ + ω^α₂·c₂ + … + ω^αₖ·cₖ` whose exponents `αᵢ` are themselves
//! ordinals in the same form. Every constructor canonicalizes, so two values
//! are equal exactly when their term lists are structurally identical, and
//! the derived ordering is the ordinal ordering.
//!
//! The textual notation is ASCII: `w` for ω, `^` for exponentiation, `*c` for
//! a right coefficient, and `+` for ordinal addition, e.g.
//! `w^(w^w) + w^w + w*2 + 1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors produced by ordinal operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("{0} is not a limit ordinal")]
    NotLimit(String),
    #[error("hardy evaluation exceeded its budget of {budget} unfoldings")]
    BudgetExceeded { budget: u64 },
}

/// One `ω^exponent·coefficient` summand of a Cantor normal form.
///
/// Field order matters: the derived `Ord` compares exponents before
/// coefficients, which is exactly the ordinal comparison of monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    exponent: Ordinal,
    coefficient: BigUint,
}

impl Term {
    pub fn exponent(&self) -> &Ordinal {
        &self.exponent
    }

    pub fn coefficient(&self) -> &BigUint {
        &self.coefficient
    }
}

/// An ordinal below ε₀.
///
/// The empty term list is 0. Terms are kept in strictly decreasing exponent
/// order with nonzero coefficients, so the derived lexicographic `Ord` on the
/// term list coincides with the ordinal order (a proper prefix is smaller).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from(1u64)
    }

    /// ω
    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^exponent`
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Ordinal::monomial(exponent, BigUint::one())
    }

    /// `ω^exponent·coefficient`; a zero coefficient yields 0.
    pub fn monomial(exponent: Ordinal, coefficient: BigUint) -> Self {
        if coefficient.is_zero() {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient,
            }],
        }
    }

    pub fn natural(n: BigUint) -> Self {
        Ordinal::monomial(Ordinal::zero(), n)
    }

    /// Builds an ordinal from terms that are already in canonical order.
    ///
    /// Callers must guarantee strictly decreasing exponents and nonzero
    /// coefficients; this is checked in debug builds only.
    pub(crate) fn from_canonical_terms(terms: Vec<(Ordinal, BigUint)>) -> Self {
        let terms: Vec<Term> = terms
            .into_iter()
            .map(|(exponent, coefficient)| Term {
                exponent,
                coefficient,
            })
            .collect();
        debug_assert!(terms.iter().all(|t| !t.coefficient.is_zero()));
        debug_assert!(terms.windows(2).all(|w| w[0].exponent > w[1].exponent));
        Ordinal { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for ordinals of the form `β + 1`.
    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && !self.is_successor()
    }

    /// The natural number this ordinal equals, if it is finite.
    pub fn as_natural(&self) -> Option<BigUint> {
        match self.terms.as_slice() {
            [] => Some(BigUint::zero()),
            [t] if t.exponent.is_zero() => Some(t.coefficient.clone()),
            _ => None,
        }
    }

    /// The exponent of the leading term; `None` for 0.
    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exponent)
    }

    /// Nesting depth of the exponent tower: 0 for 0, 1 for nonzero naturals,
    /// 2 for ordinals with natural exponents, and so on.
    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|t| 1 + t.exponent.depth())
            .max()
            .unwrap_or(0)
    }

    /// Ordinal sum `self + rhs`. Terms of `self` below the leading exponent of
    /// `rhs` are absorbed.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(lead) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut merged_lead = false;
        for t in &self.terms {
            match t.exponent.cmp(&lead.exponent) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => {
                    terms.push(Term {
                        exponent: t.exponent.clone(),
                        coefficient: &t.coefficient + &lead.coefficient,
                    });
                    merged_lead = true;
                    break;
                }
                Ordering::Less => break,
            }
        }
        let rest = if merged_lead {
            &rhs.terms[1..]
        } else {
            &rhs.terms[..]
        };
        terms.extend(rest.iter().cloned());
        Ordinal { terms }
    }

    /// Hessenberg (natural) sum: merge the term lists by exponent, adding
    /// coefficients. Commutative and associative.
    pub fn natural_sum(&self, rhs: &Ordinal) -> Ordinal {
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            let (a, b) = (&self.terms[i], &rhs.terms[j]);
            match a.exponent.cmp(&b.exponent) {
                Ordering::Greater => {
                    terms.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    terms.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    terms.push(Term {
                        exponent: a.exponent.clone(),
                        coefficient: &a.coefficient + &b.coefficient,
                    });
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend(self.terms[i..].iter().cloned());
        terms.extend(rhs.terms[j..].iter().cloned());
        Ordinal { terms }
    }

    /// Natural sum of a collection of monomials `ω^eᵢ·cᵢ` given in any order.
    pub fn natural_sum_of_monomials<I>(monomials: I) -> Ordinal
    where
        I: IntoIterator<Item = (Ordinal, BigUint)>,
    {
        let mut terms: Vec<Term> = monomials
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponent, coefficient)| Term {
                exponent,
                coefficient,
            })
            .collect();
        terms.sort_by(|a, b| b.exponent.cmp(&a.exponent));
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.exponent == t.exponent => last.coefficient += t.coefficient,
                _ => merged.push(t),
            }
        }
        Ordinal { terms: merged }
    }

    /// `β` for `self = β + 1`, `None` otherwise.
    pub fn predecessor(&self) -> Option<Ordinal> {
        if !self.is_successor() {
            return None;
        }
        let mut terms = self.terms.clone();
        let last = terms.last_mut().expect("successor has a term");
        last.coefficient -= 1u32;
        if last.coefficient.is_zero() {
            terms.pop();
        }
        Some(Ordinal { terms })
    }

    /// The `n`-th element `λ[n]` of the fundamental sequence of a limit λ.
    ///
    /// Convention: `(γ + ω^(β+1))[n] = γ + ω^β·(n+1)` and
    /// `(γ + ω^λ)[n] = γ + ω^(λ[n])` for limit λ.
    pub fn fundamental_sequence(&self, n: &BigUint) -> Result<Ordinal, OrdinalError> {
        if !self.is_limit() {
            return Err(OrdinalError::NotLimit(self.to_string()));
        }
        let mut terms = self.terms.clone();
        limit_step(&mut terms, n);
        Ok(Ordinal { terms })
    }

    /// Hardy function `H_α(n)`, unfolded iteratively.
    ///
    /// `H_0(n) = n`, `H_(α+1)(n) = H_α(n+1)`, `H_λ(n) = H_(λ[n])(n)`. Every
    /// successor or limit rewrite consumes one unit of `budget`.
    pub fn hardy(&self, n: &BigUint, budget: u64) -> Result<BigUint, OrdinalError> {
        let mut terms = self.terms.clone();
        let mut n = n.clone();
        let mut used = 0u64;
        while let Some(last) = terms.last_mut() {
            if used == budget {
                return Err(OrdinalError::BudgetExceeded { budget });
            }
            used += 1;
            if last.exponent.is_zero() {
                last.coefficient -= 1u32;
                if last.coefficient.is_zero() {
                    terms.pop();
                }
                n += 1u32;
            } else {
                limit_step(&mut terms, &n);
            }
        }
        Ok(n)
    }

    fn is_atomic_exponent(&self) -> bool {
        match self.terms.as_slice() {
            [t] => t.exponent.is_zero() || (t.exponent == Ordinal::one() && t.coefficient.is_one()),
            _ => false,
        }
    }

    fn write_notation(&self, out: &mut String, top_level: bool) {
        if self.terms.is_empty() {
            out.push('0');
            return;
        }
        let separator = if top_level { " + " } else { "+" };
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(separator);
            }
            if t.exponent.is_zero() {
                out.push_str(&t.coefficient.to_string());
                continue;
            }
            out.push('w');
            if t.exponent != Ordinal::one() {
                out.push('^');
                if t.exponent.is_atomic_exponent() {
                    t.exponent.write_notation(out, false);
                } else {
                    out.push('(');
                    t.exponent.write_notation(out, false);
                    out.push(')');
                }
            }
            if !t.coefficient.is_one() {
                out.push('*');
                out.push_str(&t.coefficient.to_string());
            }
        }
    }
}

/// Rewrites a limit ordinal, given as its term list, into `λ[n]` in place.
fn limit_step(terms: &mut Vec<Term>, n: &BigUint) {
    let last = terms.pop().expect("limit has a term");
    if last.coefficient > BigUint::one() {
        terms.push(Term {
            exponent: last.exponent.clone(),
            coefficient: &last.coefficient - 1u32,
        });
    }
    // The new tail's exponent is below `last.exponent`, so the list stays
    // canonical.
    match last.exponent.predecessor() {
        Some(beta) => terms.push(Term {
            exponent: beta,
            coefficient: n + 1u32,
        }),
        None => {
            let mut exponent = last.exponent.terms;
            limit_step(&mut exponent, n);
            terms.push(Term {
                exponent: Ordinal { terms: exponent },
                coefficient: BigUint::one(),
            });
        }
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::natural(BigUint::from(n))
    }
}

impl From<BigUint> for Ordinal {
    fn from(n: BigUint) -> Self {
        Ordinal::natural(n)
    }
}

/// Three-way comparison of two ordinals.
pub fn compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.write_notation(&mut out, true);
        f.write_str(&out)
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses ordinal notation. Non-canonical sums are normalized by ordinal
/// addition from left to right, so `"1 + w"` parses to ω.
pub fn parse(text: &str) -> Result<Ordinal, OrdinalError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let ord = parser.ord()?;
    parser.skip_ws();
    if parser.pos < parser.bytes.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(ord)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> OrdinalError {
        OrdinalError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
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

    fn ord(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term()?;
        while self.eat(b'+') {
            let t = self.term()?;
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exponent = if self.eat(b'^') {
                    self.power()?
                } else {
                    Ordinal::one()
                };
                let coefficient = if self.eat(b'*') {
                    self.nat()?
                } else {
                    BigUint::one()
                };
                Ok(Ordinal::monomial(exponent, coefficient))
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::natural(self.nat()?)),
            Some(_) => Err(self.error("expected 'w' or a natural number")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn power(&mut self) -> Result<Ordinal, OrdinalError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.ord()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::natural(self.nat()?)),
            Some(_) => Err(self.error("expected '(', 'w' or a natural number after '^'")),
            None => Err(self.error("unexpected end of input after '^'")),
        }
    }

    fn nat(&mut self) -> Result<BigUint, OrdinalError> {
        self.skip_ws();
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
}
