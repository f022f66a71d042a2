//! Homomorphism weights, numbers and densities of patterns in decorated
//! graphs, and the evaluation functional linking densities to sampling.
//!
//! `hom(F, G)` sums the weight `∏ f_ij(G(a_i, a_j))` over all `n^k` maps
//! `a: [k] → V(G)`, with replacement. Sampling picks distinct nodes instead;
//! [`replacement_gap_bound`] bounds the difference between the two.

use rayon::prelude::*;

use crate::error::{argument, domain, Error, Result};
use crate::graph::{DecoratedGraph, PatternGraph};
use crate::numeric::{self, blocks, KahanSum};
use crate::sampling::{self, pair_index};
use crate::space::{binomial, Decoration};

/// Default enumeration budget: `n^k · max(1, |E(F)|)` must not exceed this.
pub const DEFAULT_GUARD: f64 = 1e8;

/// Budget for enumerating ordered distinct node tuples.
pub const DISTINCT_TUPLE_GUARD: f64 = 1e7;

/// An edge of a pattern bound to a dense `n × n` matrix of function values.
pub(crate) struct BoundEdge<'a> {
    pub i: usize,
    pub j: usize,
    pub values: &'a [f64],
}

pub(crate) fn enumeration_cost(n: usize, k: usize, edges: usize) -> f64 {
    (n as f64).powi(k as i32) * edges.max(1) as f64
}

/// `Σ_{a ∈ [n]^k} ∏_e M_e[a_i][a_j]` by full enumeration, compensated.
///
/// Nodes are reordered so the last one has minimum degree; that node is
/// summed out in the innermost loop (a row sum or a vectorized dot product),
/// and the remaining `n^{k-1}` prefixes are enumerated by an odometer, in
/// parallel over the leading digit. The reduction order is fixed, so results
/// do not depend on the thread count.
pub(crate) fn map_sum(k: usize, n: usize, edges: &[BoundEdge<'_>], guard: f64) -> Result<f64> {
    let cost = enumeration_cost(n, k, edges.len());
    if cost > guard {
        return Err(Error::Resource(format!(
            "enumerating {n}^{k} maps over {} edges exceeds the budget of {guard:e}; use a Monte Carlo estimate",
            edges.len()
        )));
    }
    if k == 0 {
        return Ok(1.0);
    }
    if n == 0 {
        return Ok(0.0);
    }

    let mut degree = vec![0usize; k];
    for e in edges {
        degree[e.i] += 1;
        degree[e.j] += 1;
    }
    // Move a minimum-degree node to position k-1.
    let last = (0..k).rev().min_by_key(|&v| degree[v]).expect("k > 0");
    let position = |v: usize| -> usize {
        if v == last {
            k - 1
        } else if v > last {
            v - 1
        } else {
            v
        }
    };

    let mut prefix: Vec<(usize, usize, &[f64])> = Vec::new();
    let mut inner: Vec<(usize, &[f64])> = Vec::new();
    for e in edges {
        let (a, b) = (position(e.i), position(e.j));
        if a == k - 1 {
            inner.push((b, e.values));
        } else if b == k - 1 {
            inner.push((a, e.values));
        } else {
            prefix.push((a, b, e.values));
        }
    }

    let row_sums: Option<Vec<f64>> = match inner.as_slice() {
        [(_, m)] => Some((0..n).map(|a| numeric::sum(&m[a * n..a * n + n])).collect()),
        _ => None,
    };

    let inner_sum = |assignment: &[usize], scratch: &mut Vec<f64>| -> f64 {
        match inner.as_slice() {
            [] => n as f64,
            [(v, _)] => row_sums.as_ref().expect("single edge")[assignment[*v]],
            [(v, m), (u, l)] => {
                let (a, b) = (assignment[*v], assignment[*u]);
                numeric::dot(&m[a * n..a * n + n], &l[b * n..b * n + n])
            }
            _ => {
                let (v0, m0) = inner[0];
                scratch.clear();
                scratch.extend_from_slice(&m0[assignment[v0] * n..assignment[v0] * n + n]);
                for &(v, m) in &inner[1..] {
                    let row = &m[assignment[v] * n..assignment[v] * n + n];
                    for (s, r) in scratch.iter_mut().zip(row) {
                        *s *= r;
                    }
                }
                numeric::sum(scratch)
            }
        }
    };

    let free = k - 1;
    if free == 0 {
        return Ok(inner_sum(&[], &mut Vec::new()));
    }

    let chunk = |lead: usize| -> f64 {
        let mut acc = KahanSum::new();
        let mut assignment = vec![0usize; free];
        assignment[0] = lead;
        let mut scratch = Vec::with_capacity(n);
        loop {
            let mut w = 1.0;
            for &(a, b, m) in &prefix {
                w *= m[assignment[a] * n + assignment[b]];
                if w == 0.0 {
                    break;
                }
            }
            if w != 0.0 {
                acc.add(w * inner_sum(&assignment, &mut scratch));
            }
            // Odometer over positions 1..free.
            let mut pos = free;
            loop {
                if pos == 1 {
                    return acc.total();
                }
                pos -= 1;
                assignment[pos] += 1;
                if assignment[pos] < n {
                    break;
                }
                assignment[pos] = 0;
            }
        }
    };

    let parts: Vec<f64> = (0..n).into_par_iter().map(chunk).collect();
    Ok(parts.into_iter().collect::<KahanSum>().total())
}

fn check_spaces(f: &PatternGraph, g: &DecoratedGraph) -> Result<()> {
    if **f.space() != **g.space() {
        return Err(domain("pattern and graph live on different spaces"));
    }
    Ok(())
}

/// Dense value matrices `f(G(a,b))`, one per edge of `f`.
pub(crate) fn edge_matrices(f: &PatternGraph, g: &DecoratedGraph) -> Vec<Vec<f64>> {
    f.edges().iter().map(|(_, _, func)| g.evaluate(func)).collect()
}

/// The weight `∏_{(i,j,f)} f(G(a_i, a_j))` of one map.
pub fn map_weight(f: &PatternGraph, g: &DecoratedGraph, assignment: &[usize]) -> Result<f64> {
    check_spaces(f, g)?;
    if assignment.len() != f.k() {
        return Err(argument(format!(
            "assignment has {} entries for a {}-node pattern",
            assignment.len(),
            f.k()
        )));
    }
    if let Some(&a) = assignment.iter().find(|&&a| a >= g.n()) {
        return Err(argument(format!("node {a} is not in a graph of {} nodes", g.n())));
    }
    Ok(f.edges()
        .iter()
        .map(|(i, j, func)| func.value(g.get(assignment[*i], assignment[*j])))
        .product())
}

/// Exact `hom(F, G)` under the default enumeration budget.
pub fn hom(f: &PatternGraph, g: &DecoratedGraph) -> Result<f64> {
    hom_with_guard(f, g, DEFAULT_GUARD)
}

pub fn hom_with_guard(f: &PatternGraph, g: &DecoratedGraph, guard: f64) -> Result<f64> {
    check_spaces(f, g)?;
    let n = g.n();
    let cost = enumeration_cost(n, f.k(), f.edges().len());
    if cost > guard {
        return Err(Error::Resource(format!(
            "hom over {n}^{} maps exceeds the budget of {guard:e}; use a Monte Carlo estimate",
            f.k()
        )));
    }
    let mats = edge_matrices(f, g);
    let edges: Vec<BoundEdge<'_>> = f
        .edges()
        .iter()
        .zip(&mats)
        .map(|((i, j, _), m)| BoundEdge {
            i: *i,
            j: *j,
            values: m,
        })
        .collect();
    map_sum(f.k(), n, &edges, guard)
}

/// `t(F, G) = hom(F, G) / n^k`.
pub fn density(f: &PatternGraph, g: &DecoratedGraph) -> Result<f64> {
    density_with_guard(f, g, DEFAULT_GUARD)
}

pub fn density_with_guard(f: &PatternGraph, g: &DecoratedGraph, guard: f64) -> Result<f64> {
    let h = hom_with_guard(f, g, guard)?;
    Ok(h / (g.n() as f64).powi(f.k() as i32))
}

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// Running mean and sum of squared deviations, mergeable (Chan et al.).
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Moments {
    pub count: f64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.count;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: Moments) -> Moments {
        if self.count == 0.0 {
            return other;
        }
        if other.count == 0.0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        Moments {
            count,
            mean: self.mean + delta * other.count / count,
            m2: self.m2 + other.m2 + delta * delta * self.count * other.count / count,
        }
    }

    pub fn estimate(&self) -> Estimate {
        let var = if self.count > 1.0 {
            (self.m2 / (self.count - 1.0)).max(0.0)
        } else {
            0.0
        };
        Estimate {
            estimate: self.mean,
            stderr: (var / self.count).sqrt(),
        }
    }
}

/// Mean of the map weight over `reps` uniform random maps (with
/// replacement). Random maps are drawn in fixed blocks, block `b` using
/// stream `b` of the seeded generator.
pub fn density_estimate(f: &PatternGraph, g: &DecoratedGraph, reps: usize, seed: u64) -> Result<Estimate> {
    use rand::Rng as _;
    check_spaces(f, g)?;
    if reps < 2 {
        return Err(argument("density estimation needs at least 2 repetitions"));
    }
    let n = g.n();
    if n == 0 {
        return Err(argument("cannot sample maps into an empty graph"));
    }
    let k = f.k();
    let parts: Vec<Moments> = blocks(reps)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, len)| {
            let mut rng = numeric::rng(seed, b);
            let mut m = Moments::default();
            let mut a = vec![0usize; k];
            for _ in 0..len {
                for slot in a.iter_mut() {
                    *slot = rng.gen_range(0..n);
                }
                let w: f64 = f
                    .edges()
                    .iter()
                    .map(|(i, j, func)| func.value(g.get(a[*i], a[*j])))
                    .product();
                m.push(w);
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    Ok(total.estimate())
}

/// The product test function `L(tuple) = ∏_{(i,j,f)} f(tuple_ij)` on sampled
/// off-diagonal tuples. Under the with-replacement law its mean is `t(F, G)`;
/// under the without-replacement sampling law the two differ by at most
/// [`replacement_gap_bound`].
#[derive(Clone, Debug)]
pub struct EvaluationFunctional {
    pattern: PatternGraph,
}

pub fn evaluation_functional(f: &PatternGraph) -> EvaluationFunctional {
    EvaluationFunctional { pattern: f.clone() }
}

impl EvaluationFunctional {
    pub fn pattern(&self) -> &PatternGraph {
        &self.pattern
    }

    /// Evaluate on the upper-triangle tuple of a `s`-node sample with
    /// `s ≥ k`; pattern node `i` reads sample node `i`.
    pub fn eval(&self, tuple: &[Decoration]) -> Result<f64> {
        let s = sampling::sample_size_for(tuple.len())
            .ok_or_else(|| argument(format!("{} is not a triangular tuple length", tuple.len())))?;
        if s < self.pattern.k() && !self.pattern.edges().is_empty() {
            return Err(argument(format!(
                "a {s}-node sample cannot feed a {}-node pattern",
                self.pattern.k()
            )));
        }
        let space = self.pattern.space();
        let mut acc = 1.0;
        for (i, j, func) in self.pattern.edges() {
            let c = tuple[pair_index(s, *i, *j)];
            space.check(&c)?;
            acc *= func.value(c);
        }
        Ok(acc)
    }

    /// Evaluate against integer codes of a finite-type space.
    pub(crate) fn eval_codes(&self, s: usize, codes: &[u32]) -> Result<f64> {
        let space = self.pattern.space();
        let mut acc = 1.0;
        for (i, j, func) in self.pattern.edges() {
            let c = space.from_code(codes[pair_index(s, *i, *j)])?;
            acc *= func.value(c);
        }
        Ok(acc)
    }
}

/// `C(k,2) · k² / n · ∏ sup|f|`, the documented bound on
/// `|E_without-replacement(L) − t(F, G)|`.
pub fn replacement_gap_bound(f: &PatternGraph, n: usize) -> f64 {
    let k = f.k();
    binomial(k, 2) as f64 * (k * k) as f64 / n as f64 * f.max_weight()
}

/// Exact mean of `L` over all ordered tuples of distinct nodes, i.e. the
/// expectation of the evaluation functional under the sampling law.
pub fn exact_sampled_functional(f: &PatternGraph, g: &DecoratedGraph) -> Result<f64> {
    check_spaces(f, g)?;
    let (n, k) = (g.n(), f.k());
    if k > n {
        return Err(argument(format!("cannot pick {k} distinct nodes out of {n}")));
    }
    let count = falling_factorial(n, k);
    if count > DISTINCT_TUPLE_GUARD {
        return Err(Error::Resource(format!(
            "{count:e} ordered tuples exceed the budget of {DISTINCT_TUPLE_GUARD:e}"
        )));
    }
    let mut acc = KahanSum::new();
    let mut tuple = Vec::with_capacity(k);
    let mut used = vec![false; n];
    distinct_tuples(n, k, &mut tuple, &mut used, &mut |a| {
        acc.add(
            f.edges()
                .iter()
                .map(|(i, j, func)| func.value(g.get(a[*i], a[*j])))
                .product(),
        )
    });
    Ok(acc.total() / count)
}

pub(crate) fn falling_factorial(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

/// Visit every ordered tuple of `k` distinct values from `0..n` in
/// lexicographic order.
pub(crate) fn distinct_tuples(
    n: usize,
    k: usize,
    tuple: &mut Vec<usize>,
    used: &mut [bool],
    visit: &mut impl FnMut(&[usize]),
) {
    if tuple.len() == k {
        visit(tuple);
        return;
    }
    for v in 0..n {
        if !used[v] {
            used[v] = true;
            tuple.push(v);
            distinct_tuples(n, k, tuple, used, visit);
            tuple.pop();
            used[v] = false;
        }
    }
}

/// Monte Carlo mean of `L` over sampled tuples (without replacement).
pub fn sampled_functional(f: &PatternGraph, g: &DecoratedGraph, reps: usize, seed: u64) -> Result<Estimate> {
    check_spaces(f, g)?;
    if reps < 2 {
        return Err(argument("need at least 2 repetitions"));
    }
    let k = f.k();
    if k > g.n() {
        return Err(argument(format!("cannot pick {k} distinct nodes out of {}", g.n())));
    }
    let l = evaluation_functional(f);
    let parts: Vec<Result<Moments>> = blocks(reps)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, len)| {
            let mut rng = numeric::rng(seed, b);
            let mut m = Moments::default();
            for _ in 0..len {
                let tuple = sampling::draw(g, k, &mut rng);
                m.push(l.eval(&tuple)?);
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::default();
    for p in parts {
        total = total.merge(p?);
    }
    Ok(total.estimate())
}
