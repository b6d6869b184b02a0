//! Cantor normal forms that keep long blocks of terms unexpanded.
//!
//! Subtracting one from `k^E` in base `k` leaves the `E` terms
//! `(k-1)·k^(E-1) + … + (k-1)·k + (k-1)`. With `k` replaced by ω these are
//! `ω^ord_k(j)·(k-1)` for `j = E-1, …, 0`, where `ord_k(j)` is the hereditary
//! base-`k` shape of `j`. A run stores such a block by its parameters.
//! Goodstein steps only consume terms from the low end of a run, so `E` may
//! be far beyond what fits in memory; it only has to be written in binary.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::hereditary::{expand, HereditaryError, HereditaryRep};
use crate::ordinal::Ordinal;

/// Blocks shorter than this are written out term by term.
pub const RUN_THRESHOLD: u64 = 64;

/// Forms with more terms than this are abbreviated when displayed.
pub const DISPLAY_TERMS: u64 = 64;

/// Default cap on the bit length of a block's term count.
pub const DEFAULT_BLOCK_BITS: u64 = 1 << 12;

type Pair = (Ordinal, BigUint);

/// The terms `ω^ord_radix(j)·digit` for `j` from `hi - 1` down to `lo`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Run {
    radix: BigUint,
    digit: BigUint,
    lo: BigUint,
    hi: BigUint,
}

impl Run {
    fn term(&self, j: &BigUint) -> Pair {
        (expand(j, &self.radix), self.digit.clone())
    }

    fn top(&self) -> Pair {
        self.term(&(&self.hi - 1u32))
    }

    fn len(&self) -> BigUint {
        &self.hi - &self.lo
    }

    /// Terms from the top, for short runs only.
    fn expanded(&self) -> impl Iterator<Item = Pair> + '_ {
        let n = self.len().to_u64().expect("short run");
        (0..n).map(move |i| self.term(&(&self.hi - 1u32 - i)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Segment {
    Terms(Vec<Pair>),
    Run(Run),
}

/// An ordinal below ε₀ whose terms may include unexpanded runs.
///
/// Equality and order are those of the ordinals represented, whatever the
/// segmentation.
#[derive(Debug, Clone, Default)]
pub struct CompactOrdinal {
    // nonempty segments, strictly decreasing overall, no two adjacent `Terms`
    segments: Vec<Segment>,
}

impl CompactOrdinal {
    pub fn zero() -> Self {
        CompactOrdinal::default()
    }

    pub fn is_zero(&self) -> bool {
        self.segments.is_empty()
    }

    /// Number of Cantor normal form terms.
    pub fn term_count(&self) -> BigUint {
        self.segments
            .iter()
            .map(|s| match s {
                Segment::Terms(t) => BigUint::from(t.len()),
                Segment::Run(r) => r.len(),
            })
            .sum()
    }

    /// Number of runs still unexpanded.
    pub fn run_count(&self) -> usize {
        self.segments
            .iter()
            .filter(|s| matches!(s, Segment::Run(_)))
            .count()
    }

    /// The plain ordinal, when it has at most `max_terms` terms.
    pub fn to_ordinal(&self, max_terms: u64) -> Option<Ordinal> {
        if self.term_count() > BigUint::from(max_terms) {
            return None;
        }
        let mut terms = Vec::new();
        for s in &self.segments {
            match s {
                Segment::Terms(t) => terms.extend(t.iter().cloned()),
                Segment::Run(r) => terms.extend(r.expanded()),
            }
        }
        Some(Ordinal::from_canonical_terms(terms))
    }

    fn leading(&self) -> Option<Cow<'_, Pair>> {
        match self.segments.first()? {
            Segment::Terms(t) => t.first().map(Cow::Borrowed),
            Segment::Run(r) => Some(Cow::Owned(r.top())),
        }
    }

    fn last(&self) -> Option<Cow<'_, Pair>> {
        match self.segments.last()? {
            Segment::Terms(t) => t.last().map(Cow::Borrowed),
            Segment::Run(r) => Some(Cow::Owned(r.term(&r.lo))),
        }
    }

    fn pop(&mut self) -> Option<Pair> {
        let (term, emptied) = match self.segments.last_mut()? {
            Segment::Terms(t) => {
                let term = t.pop().expect("segments are nonempty");
                (term, t.is_empty())
            }
            Segment::Run(r) => {
                let term = r.term(&r.lo);
                r.lo += 1u32;
                (term, r.lo == r.hi)
            }
        };
        if emptied {
            self.segments.pop();
        }
        Some(term)
    }

    fn push(&mut self, term: Pair) {
        match self.segments.last_mut() {
            Some(Segment::Terms(t)) => t.push(term),
            _ => self.segments.push(Segment::Terms(vec![term])),
        }
    }

    /// Subtracts one from the value this form denotes at `base`.
    ///
    /// A block of `E` new terms becomes a run once `E ≥ run_threshold`, and
    /// `E` must fit in `max_block_bits` bits. Returns `Ok(false)` for 0. On
    /// error `self` is unchanged.
    fn decrement_at(
        &mut self,
        base: &BigUint,
        max_block_bits: u64,
        run_threshold: u64,
    ) -> Result<bool, HereditaryError> {
        let Some(last) = self.last() else {
            return Ok(false);
        };
        let count = if last.0.is_zero() {
            BigUint::zero()
        } else {
            let exponent = HereditaryRep::from_parts(base.clone(), last.0.clone());
            exponent
                // the estimate can overshoot by up to a bit
                .checked_eval(max_block_bits.saturating_add(2))
                .filter(|e| e.bits() <= max_block_bits)
                .ok_or_else(|| HereditaryError::BlockTooLong {
                    exponent: exponent.to_string(),
                    max_bits: max_block_bits,
                })?
        };
        let (exponent, coefficient) = self.pop().expect("checked above");
        if !coefficient.is_one() {
            self.push((exponent, coefficient - 1u32));
        }
        if count.is_zero() {
            return Ok(true);
        }
        let digit = base - 1u32;
        match count.to_u64().filter(|&n| n < run_threshold) {
            Some(n) => {
                for j in (0..n).rev() {
                    self.push((expand(&BigUint::from(j), base), digit.clone()));
                }
            }
            None => self.segments.push(Segment::Run(Run {
                radix: base.clone(),
                digit,
                lo: BigUint::zero(),
                hi: count,
            })),
        }
        Ok(true)
    }

    /// Writes each explicit stretch with `sum` and abbreviates the middle of
    /// long runs.
    fn write_abbreviated(
        &self,
        f: &mut fmt::Formatter<'_>,
        sum: impl Fn(Vec<Pair>) -> String,
    ) -> fmt::Result {
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match s {
                Segment::Terms(t) => f.write_str(&sum(t.clone()))?,
                Segment::Run(r) if r.len() <= BigUint::from(3u32) => {
                    f.write_str(&sum(r.expanded().collect()))?
                }
                Segment::Run(r) => write!(
                    f,
                    "{} + ...{} terms... + {}",
                    sum(vec![r.top()]),
                    r.len() - 2u32,
                    sum(vec![r.term(&r.lo)])
                )?,
            }
        }
        Ok(())
    }
}

impl From<Ordinal> for CompactOrdinal {
    fn from(alpha: Ordinal) -> Self {
        let terms: Vec<Pair> = alpha
            .terms()
            .iter()
            .map(|t| (t.exponent().clone(), t.coefficient().clone()))
            .collect();
        let segments = if terms.is_empty() {
            Vec::new()
        } else {
            vec![Segment::Terms(terms)]
        };
        CompactOrdinal { segments }
    }
}

/// Walks the terms of a form from the top.
struct Cursor<'a> {
    segments: &'a [Segment],
    seg: usize,
    idx: usize,
    // exclusive top of the current run
    hi: BigUint,
}

impl<'a> Cursor<'a> {
    fn new(segments: &'a [Segment]) -> Self {
        let mut c = Cursor {
            segments,
            seg: 0,
            idx: 0,
            hi: BigUint::zero(),
        };
        c.enter();
        c
    }

    fn enter(&mut self) {
        self.idx = 0;
        if let Some(Segment::Run(r)) = self.segments.get(self.seg) {
            self.hi = r.hi.clone();
        }
    }

    fn run(&self) -> Option<&'a Run> {
        match self.segments.get(self.seg) {
            Some(Segment::Run(r)) => Some(r),
            _ => None,
        }
    }

    fn top(&self) -> Option<Cow<'a, Pair>> {
        match self.segments.get(self.seg)? {
            Segment::Terms(t) => Some(Cow::Borrowed(&t[self.idx])),
            Segment::Run(r) => Some(Cow::Owned(r.term(&(&self.hi - 1u32)))),
        }
    }

    fn skip(&mut self, n: &BigUint) {
        let done = match &self.segments[self.seg] {
            Segment::Terms(t) => {
                self.idx += n.to_usize().expect("within a term list");
                self.idx == t.len()
            }
            Segment::Run(r) => {
                self.hi -= n;
                self.hi == r.lo
            }
        };
        if done {
            self.seg += 1;
            self.enter();
        }
    }
}

impl Ord for CompactOrdinal {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = Cursor::new(&self.segments);
        let mut b = Cursor::new(&other.segments);
        loop {
            if let (Some(x), Some(y)) = (a.run(), b.run()) {
                if a.hi == b.hi && x.radix == y.radix && x.digit == y.digit {
                    let n = (&a.hi - &x.lo).min(&b.hi - &y.lo);
                    a.skip(&n);
                    b.skip(&n);
                    continue;
                }
            }
            match (a.top(), b.top()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => {
                    let o = x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
            }
            let one = BigUint::one();
            a.skip(&one);
            b.skip(&one);
        }
    }
}

impl PartialOrd for CompactOrdinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for CompactOrdinal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for CompactOrdinal {}

impl PartialEq<Ordinal> for CompactOrdinal {
    fn eq(&self, other: &Ordinal) -> bool {
        self.cmp(&CompactOrdinal::from(other.clone())) == Ordering::Equal
    }
}

impl fmt::Display for CompactOrdinal {
    /// Plain notation up to [`DISPLAY_TERMS`] terms, abbreviated beyond.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(alpha) = self.to_ordinal(DISPLAY_TERMS) {
            return write!(f, "{alpha}");
        }
        self.write_abbreviated(f, |t| Ordinal::from_canonical_terms(t).to_string())
    }
}

/// A natural in hereditary base notation whose shape is a [`CompactOrdinal`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactRep {
    base: BigUint,
    form: CompactOrdinal,
}

impl From<HereditaryRep> for CompactRep {
    fn from(rep: HereditaryRep) -> Self {
        CompactRep {
            base: rep.base().clone(),
            form: rep.form().clone().into(),
        }
    }
}

impl CompactRep {
    pub fn base(&self) -> &BigUint {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    pub fn form(&self) -> &CompactOrdinal {
        &self.form
    }

    /// Replaces the base by ω throughout.
    pub fn ordinalize(&self) -> CompactOrdinal {
        self.form.clone()
    }

    /// Replaces the base by a larger one; the shape is unchanged.
    pub fn rebase(&self, new_base: &BigUint) -> Result<CompactRep, HereditaryError> {
        if *new_base < self.base {
            return Err(HereditaryError::RebaseDown {
                from: self.base.clone(),
                to: new_base.clone(),
            });
        }
        Ok(CompactRep {
            base: new_base.clone(),
            form: self.form.clone(),
        })
    }

    /// Subtracts one. A new block of terms costs no memory, but its length
    /// must fit in `max_block_bits` bits.
    pub fn decrement(&self, max_block_bits: u64) -> Result<Option<CompactRep>, HereditaryError> {
        self.decrement_with(max_block_bits, RUN_THRESHOLD)
    }

    fn decrement_with(
        &self,
        max_block_bits: u64,
        run_threshold: u64,
    ) -> Result<Option<CompactRep>, HereditaryError> {
        let mut form = self.form.clone();
        if !form.decrement_at(&self.base, max_block_bits, run_threshold)? {
            return Ok(None);
        }
        Ok(Some(CompactRep {
            base: self.base.clone(),
            form,
        }))
    }

    /// An upper bound on `log2` of the value, from the leading term alone.
    pub fn log2_upper_bound(&self) -> f64 {
        match self.form.leading() {
            None => f64::NEG_INFINITY,
            Some(lead) => {
                let (e, c) = lead.into_owned();
                HereditaryRep::from_parts(self.base.clone(), Ordinal::monomial(e, c))
                    .log2_upper_bound()
            }
        }
    }

    /// The plain representation, when it has at most `max_terms` terms.
    pub fn to_hereditary(&self, max_terms: u64) -> Option<HereditaryRep> {
        let form = self.form.to_ordinal(max_terms)?;
        Some(HereditaryRep::from_parts(self.base.clone(), form))
    }

    /// The represented natural, or `None` when it may need more than
    /// `max_bits` bits.
    pub fn checked_eval(&self, max_bits: u64) -> Option<BigUint> {
        if self.is_zero() {
            return Some(BigUint::zero());
        }
        if self.log2_upper_bound() > max_bits as f64 {
            return None;
        }
        // a value below 2^max_bits has at most max_bits + 1 digits
        self.to_hereditary(max_bits.saturating_add(1))
            .map(|r| r.eval())
    }
}

impl fmt::Display for CompactRep {
    /// Hereditary notation up to [`DISPLAY_TERMS`] terms, abbreviated beyond.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = self.base.to_string();
        let sum = |t: Vec<Pair>| {
            let mut out = String::new();
            HereditaryRep::write_notation(&Ordinal::from_canonical_terms(t), &base, &mut out, true);
            out
        };
        match self.form.to_ordinal(DISPLAY_TERMS) {
            Some(alpha) => f.write_str(&sum(
                alpha
                    .terms()
                    .iter()
                    .map(|t| (t.exponent().clone(), t.coefficient().clone()))
                    .collect(),
            )),
            None => self.form.write_abbreviated(f, sum),
        }
    }
}
