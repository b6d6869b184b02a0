//! Goodstein and h-Goodstein sequences.
//!
//! Given a nondecreasing base schedule `h`, the term `b_(i+1)` is obtained by
//! writing `b_i` hereditarily in base `h(i)`, replacing the base by `h(i+1)`,
//! and subtracting one. Each step carries a [`StepWitness`]: the ordinals
//! obtained by replacing the base with ω before and after, which strictly
//! decrease.
//!
//! Values are kept in hereditary form and never forced into binary: after a
//! few steps the terms of most seeds no longer fit in memory as integers.
//! Long blocks of terms created by a subtraction stay unexpanded as well
//! (see [`crate::compact`]).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compact::{CompactOrdinal, CompactRep, DEFAULT_BLOCK_BITS};
use crate::hereditary::{to_hereditary, HereditaryError};
use crate::ordinal::OrdinalError;

/// Values wider than this many bits are shown in hereditary notation rather
/// than decimal.
pub const DECIMAL_DISPLAY_BITS: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoodsteinError {
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("length prediction is only defined for the classic schedule")]
    NotClassic,
    #[error(transparent)]
    Hereditary(#[from] HereditaryError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// The nondecreasing base function `h` with `h(i) ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseSchedule {
    /// `h(i) = i + 2`: the base goes up by one each step.
    Classic,
    /// `h(i) = c`
    Constant(BigUint),
    /// Explicit values; the last one repeats forever.
    Table(Vec<BigUint>),
    /// `h(i) = a·i + b`
    Affine { a: BigUint, b: BigUint },
}

impl BaseSchedule {
    pub fn constant(c: BigUint) -> Result<Self, GoodsteinError> {
        if c < BigUint::from(2u32) {
            return Err(GoodsteinError::InvalidSchedule(format!(
                "constant base {c} is below 2"
            )));
        }
        Ok(BaseSchedule::Constant(c))
    }

    pub fn table(values: Vec<BigUint>) -> Result<Self, GoodsteinError> {
        let Some(first) = values.first() else {
            return Err(GoodsteinError::InvalidSchedule("empty table".into()));
        };
        if *first < BigUint::from(2u32) {
            return Err(GoodsteinError::InvalidSchedule(format!(
                "table starts at {first}, below 2"
            )));
        }
        if let Some(w) = values.windows(2).find(|w| w[1] < w[0]) {
            return Err(GoodsteinError::InvalidSchedule(format!(
                "table decreases from {} to {}",
                w[0], w[1]
            )));
        }
        Ok(BaseSchedule::Table(values))
    }

    pub fn affine(a: BigUint, b: BigUint) -> Result<Self, GoodsteinError> {
        if b < BigUint::from(2u32) {
            return Err(GoodsteinError::InvalidSchedule(format!(
                "affine offset {b} is below 2"
            )));
        }
        Ok(BaseSchedule::Affine { a, b })
    }

    /// `h(i)`
    pub fn base_at(&self, i: u64) -> BigUint {
        match self {
            BaseSchedule::Classic => BigUint::from(i) + 2u32,
            BaseSchedule::Constant(c) => c.clone(),
            BaseSchedule::Table(values) => {
                let idx = usize::try_from(i).unwrap_or(usize::MAX).min(values.len() - 1);
                values[idx].clone()
            }
            BaseSchedule::Affine { a, b } => a * BigUint::from(i) + b,
        }
    }
}

impl fmt::Display for BaseSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseSchedule::Classic => f.write_str("classic"),
            BaseSchedule::Constant(c) => write!(f, "const:{c}"),
            BaseSchedule::Table(values) => {
                f.write_str("table:")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
            BaseSchedule::Affine { a, b } => write!(f, "affine:{a},{b}"),
        }
    }
}

impl FromStr for BaseSchedule {
    type Err = GoodsteinError;

    /// `classic`, `const:<c>`, `table:<v0>,<v1>,…` or `affine:<a>,<b>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let nat = |t: &str| {
            t.trim().parse::<BigUint>().map_err(|_| {
                GoodsteinError::InvalidSchedule(format!("'{t}' is not a natural number"))
            })
        };
        if s == "classic" {
            return Ok(BaseSchedule::Classic);
        }
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| GoodsteinError::InvalidSchedule(format!("unknown schedule '{s}'")))?;
        match kind {
            "const" => BaseSchedule::constant(nat(args)?),
            "table" => BaseSchedule::table(args.split(',').map(nat).collect::<Result<_, _>>()?),
            "affine" => {
                let (a, b) = args.split_once(',').ok_or_else(|| {
                    GoodsteinError::InvalidSchedule("affine needs '<a>,<b>'".into())
                })?;
                BaseSchedule::affine(nat(a)?, nat(b)?)
            }
            _ => Err(GoodsteinError::InvalidSchedule(format!(
                "unknown schedule kind '{kind}'"
            ))),
        }
    }
}

/// The term `b_i` of an h-Goodstein sequence together with its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodsteinState {
    value: CompactRep,
    step: u64,
    schedule: BaseSchedule,
}

/// Certificate for one step: the ordinal measure strictly drops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepWitness {
    pub step: u64,
    pub base_from: BigUint,
    pub base_to: BigUint,
    pub before_value: CompactRep,
    pub after_value: CompactRep,
    pub before_ordinal: CompactOrdinal,
    pub after_ordinal: CompactOrdinal,
}

impl StepWitness {
    pub fn is_descent(&self) -> bool {
        self.after_ordinal < self.before_ordinal
    }
}

impl GoodsteinState {
    pub fn new(seed: &BigUint, schedule: BaseSchedule) -> Result<Self, GoodsteinError> {
        let value = to_hereditary(seed, &schedule.base_at(0))?.into();
        Ok(GoodsteinState {
            value,
            step: 0,
            schedule,
        })
    }

    /// The current value, written in base `h(step)`.
    pub fn value(&self) -> &CompactRep {
        &self.value
    }

    pub fn step_index(&self) -> u64 {
        self.step
    }

    pub fn schedule(&self) -> &BaseSchedule {
        &self.schedule
    }

    pub fn base(&self) -> &BigUint {
        self.value.base()
    }

    pub fn ordinal(&self) -> CompactOrdinal {
        self.value.ordinalize()
    }

    /// Advances one step; `Ok(None)` once the value is 0.
    pub fn step(&self) -> Result<Option<(GoodsteinState, StepWitness)>, GoodsteinError> {
        self.step_with_limit(DEFAULT_BLOCK_BITS)
    }

    /// Like [`GoodsteinState::step`], with a cap on the bit length of the
    /// number of terms one subtraction may create.
    pub fn step_with_limit(
        &self,
        max_block_bits: u64,
    ) -> Result<Option<(GoodsteinState, StepWitness)>, GoodsteinError> {
        if self.value.is_zero() {
            return Ok(None);
        }
        let base_to = self.schedule.base_at(self.step + 1);
        let bumped = self.value.rebase(&base_to)?;
        let after = bumped
            .decrement(max_block_bits)?
            .expect("a nonzero value has a predecessor");
        let witness = StepWitness {
            step: self.step,
            base_from: self.value.base().clone(),
            base_to,
            before_ordinal: self.value.ordinalize(),
            after_ordinal: after.ordinalize(),
            before_value: self.value.clone(),
            after_value: after.clone(),
        };
        let next = GoodsteinState {
            value: after,
            step: self.step + 1,
            schedule: self.schedule.clone(),
        };
        Ok(Some((next, witness)))
    }
}

/// `ordinalize(to_hereditary(b_i, h(i)))` for the state's current term.
pub fn ordinal_of(state: &GoodsteinState) -> CompactOrdinal {
    state.ordinal()
}

/// A finite prefix of a Goodstein sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub schedule: BaseSchedule,
    /// `b_0, b_1, …`, each in its own base.
    pub values: Vec<CompactRep>,
    pub witnesses: Vec<StepWitness>,
    pub terminated: bool,
}

impl Trace {
    /// Index of the first zero term, if reached.
    pub fn first_zero_index(&self) -> Option<u64> {
        self.values
            .iter()
            .position(CompactRep::is_zero)
            .map(|i| i as u64)
    }

    pub fn records(&self) -> Vec<TraceRecord> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| TraceRecord::new(i as u64, v))
            .collect()
    }

    /// Every witness shows strict descent.
    pub fn all_descending(&self) -> bool {
        self.witnesses.iter().all(StepWitness::is_descent)
    }
}

/// Runs until the value reaches 0 or `max_steps` steps have been taken.
pub fn run(seed: &BigUint, schedule: BaseSchedule, max_steps: u64) -> Result<Trace, GoodsteinError> {
    run_with_limit(seed, schedule, max_steps, DEFAULT_BLOCK_BITS)
}

pub fn run_with_limit(
    seed: &BigUint,
    schedule: BaseSchedule,
    max_steps: u64,
    max_block_bits: u64,
) -> Result<Trace, GoodsteinError> {
    let mut state = GoodsteinState::new(seed, schedule.clone())?;
    let mut values = vec![state.value.clone()];
    let mut witnesses = Vec::new();
    let mut taken = 0;
    while taken < max_steps {
        match state.step_with_limit(max_block_bits)? {
            None => break,
            Some((next, witness)) => {
                values.push(next.value.clone());
                witnesses.push(witness);
                state = next;
                taken += 1;
            }
        }
    }
    Ok(Trace {
        schedule,
        terminated: state.value.is_zero(),
        values,
        witnesses,
    })
}

/// Predicts the index of the first zero of the classic sequence from `seed`
/// as `H_α(2) − 2`, where α is `seed` written in base 2 with 2 replaced by ω.
pub fn length_via_hardy(
    seed: &BigUint,
    schedule: &BaseSchedule,
    budget: u64,
) -> Result<BigUint, GoodsteinError> {
    if *schedule != BaseSchedule::Classic {
        return Err(GoodsteinError::NotClassic);
    }
    let two = BigUint::from(2u32);
    let alpha = to_hereditary(seed, &two)?.ordinalize();
    let h = alpha.hardy(&two, budget)?;
    Ok(h - two)
}

/// One line of a trace: `step i | base h(i) | value | ordinal`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: u64,
    pub base: String,
    /// Decimal value, or `None` when it is too large to print.
    pub value: Option<String>,
    /// The value in hereditary notation at `base`, abbreviated when long.
    pub value_rep: String,
    /// The ordinal measure, abbreviated when long.
    pub ordinal: String,
}

impl TraceRecord {
    pub fn new(step: u64, value: &CompactRep) -> Self {
        TraceRecord {
            step,
            base: value.base().to_string(),
            value: value
                .checked_eval(DECIMAL_DISPLAY_BITS)
                .map(|v| v.to_string()),
            value_rep: value.to_string(),
            ordinal: value.form().to_string(),
        }
    }
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let value = self.value.as_deref().unwrap_or(&self.value_rep);
        write!(
            f,
            "step {} | base {} | {} | {}",
            self.step, self.base, value, self.ordinal
        )
    }
}

/// Small values as machine integers, for tests and display.
pub fn small_values(trace: &Trace) -> Option<Vec<u64>> {
    trace
        .values
        .iter()
        .map(|v| v.checked_eval(64).and_then(|x| x.to_u64()))
        .collect()
}

/// The classic sequence's first-zero index by direct simulation, when it is
/// reached within `max_steps`.
pub fn simulated_length(seed: &BigUint, max_steps: u64) -> Result<Option<u64>, GoodsteinError> {
    let trace = run(seed, BaseSchedule::Classic, max_steps)?;
    Ok(trace.first_zero_index())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    /// Reference Goodstein step on plain integers: rewrite `n` hereditarily
    /// in base `k`, substitute `k_new`, subtract one.
    fn oracle_bump(n: u64, k: u64, k_new: u64) -> u64 {
        let mut total = 0u64;
        let mut rest = n;
        let mut position = 0u64;
        while rest > 0 {
            let d = rest % k;
            if d > 0 {
                let e = oracle_bump(position, k, k_new);
                total += d * k_new.pow(e as u32);
            }
            rest /= k;
            position += 1;
        }
        total
    }

    fn oracle_run(seed: u64, max_steps: usize) -> Vec<u64> {
        let mut values = vec![seed];
        let mut n = seed;
        let mut k = 2;
        while n > 0 && values.len() <= max_steps {
            n = oracle_bump(n, k, k + 1) - 1;
            k += 1;
            values.push(n);
        }
        values
    }

    #[test]
    fn oracle_sanity() {
        assert_eq!(oracle_run(3, 100), vec![3, 3, 3, 2, 1, 0]);
        assert_eq!(oracle_run(2, 100), vec![2, 2, 1, 0]);
        assert_eq!(oracle_run(1, 100), vec![1, 0]);
    }

    #[test]
    fn run_matches_oracle() {
        for seed in 0..=3 {
            let t = run(&big(seed), BaseSchedule::Classic, 100).unwrap();
            assert!(t.terminated);
            assert_eq!(small_values(&t).unwrap(), oracle_run(seed, 100));
        }
        let t = run(&big(4), BaseSchedule::Classic, 6).unwrap();
        assert_eq!(small_values(&t).unwrap(), oracle_run(4, 6));
        assert_eq!(small_values(&t).unwrap(), vec![4, 26, 41, 60, 83, 109, 139]);
    }

    #[test]
    fn run_examples() {
        let t = run(&big(2), BaseSchedule::Classic, 100).unwrap();
        assert_eq!(small_values(&t).unwrap(), vec![2, 2, 1, 0]);
        assert!(t.terminated);
        assert_eq!(t.first_zero_index(), Some(3));
        let t = run(&big(1), BaseSchedule::Classic, 100).unwrap();
        assert_eq!(small_values(&t).unwrap(), vec![1, 0]);
        let t = run(&big(4), BaseSchedule::Classic, 10).unwrap();
        assert!(!t.terminated);
        assert_eq!(t.witnesses.len(), 10);
        assert_eq!(t.first_zero_index(), None);
    }

    #[test]
    fn step_examples() {
        let s = GoodsteinState::new(&big(3), BaseSchedule::Classic).unwrap();
        assert_eq!(s.ordinal().to_string(), "w + 1");
        let (next, w) = s.step().unwrap().unwrap();
        assert_eq!(next.value().checked_eval(64), Some(big(3)));
        assert_eq!(next.step_index(), 1);
        assert_eq!(w.base_from, big(2));
        assert_eq!(w.base_to, big(3));
        assert_eq!(w.before_ordinal.to_string(), "w + 1");
        assert_eq!(w.after_ordinal.to_string(), "w");
        assert!(w.is_descent());

        let zero = GoodsteinState::new(&big(0), BaseSchedule::Classic).unwrap();
        assert_eq!(zero.step().unwrap(), None);
        assert!(ordinal_of(&zero).is_zero());

        let c = GoodsteinState::new(&big(57), BaseSchedule::constant(big(5)).unwrap()).unwrap();
        assert_eq!(c.step().unwrap().unwrap().0.value().checked_eval(64), Some(big(56)));
    }

    #[test]
    fn ordinal_of_seed_23() {
        let s = GoodsteinState::new(&big(23), BaseSchedule::Classic).unwrap();
        assert_eq!(ordinal_of(&s).to_string(), "w^(w^w) + w^w + w + 1");
    }

    #[test]
    fn hardy_lengths_match_simulation() {
        for (seed, len) in [(0, 0), (1, 1), (2, 3), (3, 5)] {
            let predicted = length_via_hardy(&big(seed), &BaseSchedule::Classic, 10_000).unwrap();
            assert_eq!(predicted, big(len));
            assert_eq!(simulated_length(&big(seed), 100).unwrap(), Some(len));
        }
        assert!(matches!(
            length_via_hardy(&big(4), &BaseSchedule::Classic, 100_000),
            Err(GoodsteinError::Ordinal(OrdinalError::BudgetExceeded { .. }))
        ));
        assert_eq!(
            length_via_hardy(&big(3), &BaseSchedule::constant(big(3)).unwrap(), 10),
            Err(GoodsteinError::NotClassic)
        );
    }

    #[test]
    fn constant_schedule_counts_down() {
        for (seed, c) in [(10, 2), (1000, 7), (4096, 2), (999, 9)] {
            let t = run(&big(seed), BaseSchedule::constant(big(c)).unwrap(), 10_000).unwrap();
            assert_eq!(t.first_zero_index(), Some(seed));
            assert!(t.all_descending());
        }
    }

    #[test]
    fn table_and_affine_schedules() {
        let table = BaseSchedule::table(vec![big(2), big(3), big(3), big(7)]).unwrap();
        assert_eq!(table.base_at(0), big(2));
        assert_eq!(table.base_at(2), big(3));
        assert_eq!(table.base_at(100), big(7));
        let affine = BaseSchedule::affine(big(3), big(2)).unwrap();
        assert_eq!(affine.base_at(4), big(14));

        let t = run(&big(12), table, 30).unwrap();
        assert!(t.all_descending());
        let mut n = 12u64;
        let bases = [2u64, 3, 3, 7];
        for (i, v) in small_values(&t).unwrap().into_iter().enumerate().skip(1) {
            let k = bases[(i - 1).min(3)];
            let k_new = bases[i.min(3)];
            n = oracle_bump(n, k, k_new) - 1;
            assert_eq!(v, n);
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(BaseSchedule::constant(big(1)).is_err());
        assert!(BaseSchedule::table(vec![]).is_err());
        assert!(BaseSchedule::table(vec![big(3), big(2)]).is_err());
        assert!(BaseSchedule::table(vec![big(1), big(2)]).is_err());
        assert!(BaseSchedule::affine(big(0), big(1)).is_err());
        assert!(BaseSchedule::affine(big(0), big(2)).is_ok());
    }

    #[test]
    fn schedule_text_round_trip() {
        for s in ["classic", "const:5", "table:2,3,3,10", "affine:2,3"] {
            let parsed: BaseSchedule = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
        assert!("const:x".parse::<BaseSchedule>().is_err());
        assert!("fib".parse::<BaseSchedule>().is_err());
        assert!("affine:3".parse::<BaseSchedule>().is_err());
    }

    #[test]
    fn rebase_is_invisible_to_the_measure() {
        let s = GoodsteinState::new(&big(100), BaseSchedule::Classic).unwrap();
        let bumped = s.value().rebase(&big(3)).unwrap();
        assert_eq!(bumped.ordinalize(), s.ordinal());
        let (_, w) = s.step().unwrap().unwrap();
        assert!(w.after_ordinal < bumped.ordinalize());
    }

    #[test]
    fn trace_records_format() {
        let t = run(&big(2), BaseSchedule::Classic, 100).unwrap();
        let lines: Vec<String> = t.records().iter().map(ToString::to_string).collect();
        assert_eq!(
            lines,
            vec![
                "step 0 | base 2 | 2 | w",
                "step 1 | base 3 | 2 | 2",
                "step 2 | base 4 | 1 | 1",
                "step 3 | base 5 | 0 | 0",
            ]
        );
    }

    #[test]
    fn huge_values_stay_symbolic() {
        let t = run(&big(100), BaseSchedule::Classic, 50).unwrap();
        assert_eq!(t.witnesses.len(), 50);
        assert!(t.all_descending());
        let last = t.records().pop().unwrap();
        assert_eq!(last.value, None);
        assert_eq!(last.base, "52");
    }
}
