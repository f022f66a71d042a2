//! The sampling process: pick an ordered set of `k` distinct nodes uniformly
//! at random and read off the decorations between them.
//!
//! A sample is stored as its off-diagonal upper triangle, pairs `(i, j)` with
//! `i < j` in row-major order: `(0,1), (0,2), …, (0,k-1), (1,2), …`. Diagonal
//! entries are not part of a sample.

use std::collections::BTreeMap;

use rand::seq::index;
use rayon::prelude::*;

use crate::error::{argument, domain, Error, Result};
use crate::graph::DecoratedGraph;
use crate::hom::{distinct_tuples, falling_factorial, DISTINCT_TUPLE_GUARD};
use crate::numeric::{self, blocks, Rng};
use crate::space::{Decoration, SpaceRef};

/// Position of pair `(i, j)`, `i < j < s`, in an `s`-node sample tuple.
#[inline]
pub fn pair_index(s: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < s);
    i * s - i * (i + 1) / 2 + (j - i - 1)
}

/// The `s` with `s(s-1)/2 = len`, if any (`len = 0` gives `s = 1`).
pub fn sample_size_for(len: usize) -> Option<usize> {
    let mut s = 1usize;
    while s * (s - 1) / 2 < len {
        s += 1;
    }
    (s * (s - 1) / 2 == len).then_some(s)
}

/// Draw one sample tuple using `rng`.
pub(crate) fn draw(g: &DecoratedGraph, k: usize, rng: &mut Rng) -> Vec<Decoration> {
    let nodes = index::sample(rng, g.n(), k).into_vec();
    let mut tuple = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            tuple.push(g.get(nodes[i], nodes[j]));
        }
    }
    tuple
}

fn check_k(g: &DecoratedGraph, k: usize) -> Result<()> {
    if k > g.n() {
        return Err(argument(format!("sample size {k} exceeds the {} nodes of the graph", g.n())));
    }
    Ok(())
}

/// One sample, deterministic in `seed` (stream 0 of the seeded generator).
pub fn sample(g: &DecoratedGraph, k: usize, seed: u64) -> Result<Vec<Decoration>> {
    check_k(g, k)?;
    Ok(draw(g, k, &mut numeric::rng(seed, 0)))
}

/// Counts of sample tuples, keyed by the integer codes of their entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleDistribution {
    space: SpaceRef,
    k: usize,
    counts: BTreeMap<Vec<u32>, u64>,
    total: u64,
}

impl SampleDistribution {
    pub fn new(space: SpaceRef, k: usize, counts: BTreeMap<Vec<u32>, u64>) -> Result<Self> {
        if !space.is_finite_type() {
            return Err(unsupported_interval());
        }
        let width = k * k.saturating_sub(1) / 2;
        for key in counts.keys() {
            if key.len() != width {
                return Err(argument(format!("tuple of length {} for k = {k}", key.len())));
            }
            for &c in key {
                space.from_code(c)?;
            }
        }
        let total = counts.values().sum();
        Ok(SampleDistribution {
            space,
            k,
            counts,
            total,
        })
    }

    fn empty(space: SpaceRef, k: usize) -> Self {
        SampleDistribution {
            space,
            k,
            counts: BTreeMap::new(),
            total: 0,
        }
    }

    fn record(&mut self, key: Vec<u32>) {
        *self.counts.entry(key).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &BTreeMap<Vec<u32>, u64> {
        &self.counts
    }

    pub fn probability(&self, key: &[u32]) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.get(key).copied().unwrap_or(0) as f64 / self.total as f64
    }

    /// Add the counts of `other`. Associative and commutative.
    pub fn merge(&mut self, other: &SampleDistribution) -> Result<()> {
        self.check_compatible(other)?;
        for (key, c) in &other.counts {
            *self.counts.entry(key.clone()).or_insert(0) += c;
        }
        self.total += other.total;
        Ok(())
    }

    fn check_compatible(&self, other: &SampleDistribution) -> Result<()> {
        if self.k != other.k {
            return Err(argument(format!("sample sizes differ: {} vs {}", self.k, other.k)));
        }
        if *self.space != *other.space {
            return Err(argument("sample distributions live on different spaces"));
        }
        Ok(())
    }
}

fn unsupported_interval() -> Error {
    Error::Unsupported(
        "sample tabulation needs a finite or product space; on interval spaces use moment summaries \
         (density or sampled evaluation-functional means)"
            .into(),
    )
}

fn codes(tuple: &[Decoration]) -> Vec<u32> {
    tuple.iter().map(|c| c.code().expect("finite-type element")).collect()
}

/// Tabulate `reps` independent samples. Samples are drawn in fixed blocks,
/// block `b` using stream `b` of the seeded generator, and merged in block
/// order.
pub fn empirical_distribution(g: &DecoratedGraph, k: usize, reps: usize, seed: u64) -> Result<SampleDistribution> {
    if !g.space().is_finite_type() {
        return Err(unsupported_interval());
    }
    if reps == 0 {
        return Err(argument("reps must be at least 1"));
    }
    check_k(g, k)?;
    let parts: Vec<SampleDistribution> = blocks(reps)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, len)| {
            let mut rng = numeric::rng(seed, b);
            let mut d = SampleDistribution::empty(g.space().clone(), k);
            for _ in 0..len {
                d.record(codes(&draw(g, k, &mut rng)));
            }
            d
        })
        .collect();
    let mut out = SampleDistribution::empty(g.space().clone(), k);
    for p in &parts {
        out.merge(p)?;
    }
    Ok(out)
}

/// The exact law of one sample, by enumerating all ordered tuples of `k`
/// distinct nodes. `total` is the falling factorial `n(n-1)…(n-k+1)`.
pub fn exact_sample_distribution(g: &DecoratedGraph, k: usize) -> Result<SampleDistribution> {
    if !g.space().is_finite_type() {
        return Err(unsupported_interval());
    }
    check_k(g, k)?;
    let count = falling_factorial(g.n(), k);
    if count > DISTINCT_TUPLE_GUARD {
        return Err(Error::Resource(format!(
            "{count:e} ordered tuples exceed the budget of {DISTINCT_TUPLE_GUARD:e}"
        )));
    }
    let mut out = SampleDistribution::empty(g.space().clone(), k);
    let mut tuple = Vec::with_capacity(k);
    let mut used = vec![false; g.n()];
    distinct_tuples(g.n(), k, &mut tuple, &mut used, &mut |nodes| {
        let mut key = Vec::with_capacity(k * k.saturating_sub(1) / 2);
        for i in 0..k {
            for j in i + 1..k {
                key.push(g.get(nodes[i], nodes[j]).code().expect("finite-type element"));
            }
        }
        out.record(key);
    });
    Ok(out)
}

/// Total variation distance between the normalized counts.
pub fn distribution_distance(a: &SampleDistribution, b: &SampleDistribution) -> Result<f64> {
    a.check_compatible(b)?;
    if a.total == 0 || b.total == 0 {
        return Err(domain("cannot compare an empty sample distribution"));
    }
    let mut acc = 0.0;
    for (key, _) in a.counts.iter() {
        acc += (a.probability(key) - b.probability(key)).abs();
    }
    for (key, _) in b.counts.iter().filter(|(key, _)| !a.counts.contains_key(*key)) {
        acc += b.probability(key);
    }
    Ok((acc / 2.0).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::DecorationSpace;

    fn k3() -> DecoratedGraph {
        DecoratedGraph::from_simple_graph(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]], true).unwrap()
    }

    fn one_edge() -> DecoratedGraph {
        DecoratedGraph::from_simple_graph(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]], true).unwrap()
    }

    #[test]
    fn pair_indexing() {
        let mut expected = 0;
        for s in 2..7 {
            expected = 0;
            for i in 0..s {
                for j in i + 1..s {
                    assert_eq!(pair_index(s, i, j), expected);
                    expected += 1;
                }
            }
            assert_eq!(sample_size_for(expected), Some(s));
        }
        assert!(expected > 0);
        assert_eq!(sample_size_for(0), Some(1));
        assert_eq!(sample_size_for(2), None);
    }

    #[test]
    fn constant_graph_samples() {
        let s = SpaceRef::new(DecorationSpace::colors(3).unwrap());
        let g = DecoratedGraph::constant(s, 6, Decoration::Label(2)).unwrap();
        for seed in 0..20 {
            let t = sample(&g, 4, seed).unwrap();
            assert_eq!(t, vec![Decoration::Label(2); 6]);
        }
        let d = empirical_distribution(&g, 3, 100, 9).unwrap();
        assert_eq!(d.counts().len(), 1);
        assert_eq!(d.counts()[&vec![2, 2, 2]], 100);
    }

    #[test]
    fn small_cases() {
        let empty = DecoratedGraph::from_simple_graph(&[vec![0, 0], vec![0, 0]], true).unwrap();
        assert_eq!(sample(&empty, 2, 1).unwrap(), vec![Decoration::Label(0)]);
        assert!(sample(&empty, 3, 1).is_err());
        let g = k3();
        assert!((0..10_000).all(|seed| sample(&g, 2, seed).unwrap() == vec![Decoration::Label(1)]));
    }

    #[test]
    fn sample_is_deterministic() {
        let g = one_edge();
        assert_eq!(sample(&g, 3, 42).unwrap(), sample(&g, 3, 42).unwrap());
        assert_eq!(
            empirical_distribution(&g, 2, 10_000, 3).unwrap(),
            empirical_distribution(&g, 2, 10_000, 3).unwrap()
        );
    }

    #[test]
    fn exact_distributions() {
        let empty = DecoratedGraph::from_simple_graph(&vec![vec![0; 3]; 3], true).unwrap();
        let d = exact_sample_distribution(&empty, 2).unwrap();
        assert_eq!(d.probability(&[0]), 1.0);

        let d = exact_sample_distribution(&k3(), 2).unwrap();
        assert_eq!(d.total(), 6);
        assert_eq!(d.probability(&[1]), 1.0);
        let d = exact_sample_distribution(&k3(), 3).unwrap();
        assert_eq!(d.probability(&[1, 1, 1]), 1.0);

        let d = exact_sample_distribution(&one_edge(), 2).unwrap();
        assert_eq!(d.counts()[&vec![1]], 2);
        assert_eq!(d.counts()[&vec![0]], 4);
    }

    #[test]
    fn empirical_matches_exact_one_edge() {
        let g = one_edge();
        let exact = exact_sample_distribution(&g, 2).unwrap();
        let emp = empirical_distribution(&g, 2, 100_000, 11).unwrap();
        assert_eq!(emp.total(), 100_000);
        // 4 sigma for a binomial proportion at p = 1/3.
        let sigma = (1.0 / 3.0 * 2.0 / 3.0 / 100_000.0f64).sqrt();
        assert!((emp.probability(&[1]) - 1.0 / 3.0).abs() < 4.0 * sigma);
        assert!(distribution_distance(&emp, &exact).unwrap() < 0.01);
    }

    #[test]
    fn distance_examples() {
        let g = one_edge();
        let p = exact_sample_distribution(&g, 2).unwrap();
        assert_eq!(distribution_distance(&p, &p).unwrap(), 0.0);
        let q = exact_sample_distribution(&k3(), 2).unwrap();
        assert!((distribution_distance(&p, &q).unwrap() - 4.0 / 6.0).abs() < 1e-15);
        let empty = DecoratedGraph::from_simple_graph(&vec![vec![0; 3]; 3], true).unwrap();
        let z = exact_sample_distribution(&empty, 2).unwrap();
        assert_eq!(distribution_distance(&z, &q).unwrap(), 1.0);
        let q3 = exact_sample_distribution(&k3(), 3).unwrap();
        assert!(distribution_distance(&p, &q3).is_err());
    }

    #[test]
    fn interval_space_is_unsupported() {
        let iv = SpaceRef::new(DecorationSpace::interval(0.0, 1.0).unwrap());
        let g = DecoratedGraph::constant(iv, 3, Decoration::Real(0.5)).unwrap();
        assert!(matches!(empirical_distribution(&g, 2, 10, 1), Err(Error::Unsupported(_))));
        assert!(matches!(exact_sample_distribution(&g, 2), Err(Error::Unsupported(_))));
        assert!(sample(&g, 2, 1).is_ok());
    }

    #[test]
    fn merge_is_commutative() {
        let g = one_edge();
        let a = empirical_distribution(&g, 2, 50, 1).unwrap();
        let b = empirical_distribution(&g, 2, 70, 2).unwrap();
        let mut ab = a.clone();
        ab.merge(&b).unwrap();
        let mut ba = b.clone();
        ba.merge(&a).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(ab.total(), 120);
    }

    #[test]
    fn exact_guard() {
        let s = SpaceRef::new(DecorationSpace::simple());
        let g = DecoratedGraph::constant(s, 200, Decoration::Label(0)).unwrap();
        assert!(matches!(exact_sample_distribution(&g, 4), Err(Error::Resource(_))));
    }
}
