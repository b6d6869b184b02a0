//! Random generators for property tests, acceptance runs and benchmarks.

use num_bigint::BigUint;
use rand::Rng;

use crate::goodstein::BaseSchedule;
use crate::ordinal::Ordinal;

/// A canonical ordinal with [`Ordinal::depth`] at most `max_depth`, at most
/// `max_terms` terms per sum and coefficients in `1..=max_coefficient`.
pub fn random_ordinal<R: Rng + ?Sized>(
    rng: &mut R,
    max_depth: usize,
    max_terms: usize,
    max_coefficient: u64,
) -> Ordinal {
    if max_depth == 0 {
        return Ordinal::zero();
    }
    if max_depth == 1 {
        return Ordinal::natural(BigUint::from(rng.random_range(0..=max_coefficient)));
    }
    let terms = rng.random_range(0..=max_terms);
    Ordinal::natural_sum_of_monomials((0..terms).map(|_| {
        let exponent = random_ordinal(rng, max_depth - 1, max_terms, max_coefficient);
        let coefficient = BigUint::from(rng.random_range(1..=max_coefficient));
        (exponent, coefficient)
    }))
}

/// Parenthesis notation of a random rooted tree with `1..=max_nodes` nodes,
/// none deeper than `max_depth` edges. Children come in insertion order, not
/// canonical order.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, max_depth: u32, max_nodes: usize) -> String {
    let nodes = rng.random_range(1..=max_nodes.max(1));
    let mut depth = vec![0u32];
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    for id in 1..nodes {
        let open: Vec<usize> = (0..id).filter(|&p| depth[p] < max_depth).collect();
        if open.is_empty() {
            break;
        }
        let parent = open[rng.random_range(0..open.len())];
        depth.push(depth[parent] + 1);
        children.push(Vec::new());
        children[parent].push(id);
    }
    let mut out = String::new();
    // Explicit stack of (node, next child index).
    let mut stack = vec![(0usize, 0usize)];
    out.push('(');
    while let Some((node, next)) = stack.last_mut() {
        match children[*node].get(*next) {
            Some(&c) => {
                *next += 1;
                out.push('(');
                stack.push((c, 0));
            }
            None => {
                out.push(')');
                stack.pop();
            }
        }
    }
    out
}

/// A random valid schedule that starts at a base in `2..=4` and climbs by at
/// most 3 per step, keeping decrement expansions small.
pub fn random_schedule<R: Rng + ?Sized>(rng: &mut R) -> BaseSchedule {
    let start = rng.random_range(2u32..=4);
    match rng.random_range(0..4) {
        0 => BaseSchedule::Classic,
        1 => BaseSchedule::Constant(BigUint::from(rng.random_range(2u32..=9))),
        2 => {
            let len = rng.random_range(1..=6);
            let mut v = start;
            let values = (0..len)
                .map(|_| {
                    let here = v;
                    v += rng.random_range(0..=3);
                    BigUint::from(here)
                })
                .collect();
            BaseSchedule::Table(values)
        }
        _ => BaseSchedule::Affine {
            a: BigUint::from(rng.random_range(0u32..=3)),
            b: BigUint::from(start),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydra::Hydra;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ordinals_respect_depth() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let a = random_ordinal(&mut rng, 4, 3, 1_000_000);
            assert!(a.depth() <= 4);
            assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
        }
    }

    #[test]
    fn trees_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let h = Hydra::parse(&random_tree(&mut rng, 4, 12)).unwrap();
            assert!(h.depth() <= 4);
            assert!((1..=12).contains(&h.node_count()));
        }
    }

    #[test]
    fn schedules_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let s = random_schedule(&mut rng);
            let mut prev = s.base_at(0);
            assert!(prev >= BigUint::from(2u32));
            for i in 1..20 {
                let b = s.base_at(i);
                assert!(b >= prev);
                prev = b;
            }
            assert_eq!(s.to_string().parse::<BaseSchedule>().unwrap(), s);
        }
    }
}
