//! Empirical convergence diagnostics for sequences of decorated graphs and
//! step graphons.
//!
//! Every verdict here is a finite-sequence heuristic: it looks at a fixed
//! catalog of patterns and a fixed window at the end of the sequence.

use std::cmp::Ordering;

use rand::Rng as _;
use rayon::prelude::*;

use crate::cutnorm::cut_norm_exact;
use crate::error::{argument, domain, Error, Result};
use crate::graph::{DecoratedGraph, PatternGraph};
use crate::graphon::{
    density_graphon_estimate, density_graphon_with_guard, density_sequence, KernelMatrix, MomentFunctionSequence,
    StepGraphon,
};
use crate::hom::{density_estimate, density_with_guard, evaluation_functional, replacement_gap_bound, DEFAULT_GUARD};
use crate::io::format_number;
use crate::numeric::{self, KahanSum};
use crate::regularity::{simultaneous_regularity, StepPartition};
use crate::sampling::{distribution_distance, empirical_distribution, pair_index, SampleDistribution};
use crate::space::{Decoration, TestFamily};

/// Printed alongside every verdict.
pub const HEURISTIC_NOTE: &str =
    "finite-sequence heuristic over a fixed pattern catalog and window; not a proof of convergence";

/// Largest number of raw code vectors [`pattern_catalog`] will inspect.
pub const CATALOG_GUARD: f64 = 1e6;

/// Largest common step count [`refinement_stage`] will build.
pub const STAGE_GUARD: usize = 4096;

fn node_pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    heap_permutations(k, &mut perm, &mut out);
    out
}

fn heap_permutations(len: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if len <= 1 {
        out.push(perm.clone());
        return;
    }
    for i in 0..len {
        heap_permutations(len - 1, perm, out);
        let swap = if len % 2 == 0 { i } else { 0 };
        perm.swap(swap, len - 1);
    }
}

/// All patterns on `1..=k_max` nodes with at most `edge_budget` edges, each
/// edge carrying a function of `family`, one representative per isomorphism
/// class.
///
/// Each pattern is encoded by one code per node pair (`0` for no edge,
/// `1 + index` for a family function); the representative is the code
/// vector that is lexicographically smallest over all relabelings. Output is
/// sorted by node count, edge count, then code vector.
pub fn pattern_catalog(family: &TestFamily, k_max: usize, edge_budget: usize) -> Result<Vec<PatternGraph>> {
    let symbols = family.len() as f64 + 1.0;
    let raw: f64 = (1..=k_max).map(|k| symbols.powi((k * (k - 1) / 2) as i32)).sum();
    if raw > CATALOG_GUARD {
        return Err(Error::Resource(format!(
            "catalog enumeration would inspect {raw:e} code vectors (budget {CATALOG_GUARD:e})"
        )));
    }
    let base = family.len() as u32 + 1;
    let mut out = Vec::new();
    for k in 1..=k_max {
        let pairs = node_pairs(k);
        let index_of = |i: usize, j: usize| pair_index(k, i.min(j), i.max(j));
        let perms = permutations(k);
        let mut found: Vec<Vec<u32>> = Vec::new();
        let mut code = vec![0u32; pairs.len()];
        loop {
            let edges = code.iter().filter(|&&c| c != 0).count();
            if edges <= edge_budget {
                let canonical = perms.iter().all(|p| {
                    let mut image = vec![0u32; pairs.len()];
                    for (&(i, j), &c) in pairs.iter().zip(&code) {
                        image[index_of(p[i], p[j])] = c;
                    }
                    image >= code
                });
                if canonical {
                    found.push(code.clone());
                }
            }
            // Odometer over the code vector, last pair fastest.
            let mut pos = code.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                code[pos] += 1;
                if code[pos] < base {
                    break;
                }
                code[pos] = 0;
            }
            if code.iter().all(|&c| c == 0) {
                break;
            }
        }
        found.sort_by(|a, b| {
            let ea = a.iter().filter(|&&c| c != 0).count();
            let eb = b.iter().filter(|&&c| c != 0).count();
            ea.cmp(&eb).then_with(|| a.cmp(b))
        });
        for code in found {
            let edges = pairs
                .iter()
                .zip(&code)
                .filter(|(_, &c)| c != 0)
                .map(|(&(i, j), &c)| (i, j, family.functions()[c as usize - 1].clone()))
                .collect();
            out.push(PatternGraph::new(family.space().clone(), k, edges)?);
        }
    }
    Ok(out)
}

/// One member of a sequence.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Graph(&'a DecoratedGraph),
    Graphon(&'a StepGraphon),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceOptions {
    /// Work budget for exact densities.
    pub guard: f64,
    /// Monte Carlo `(reps, seed)` used when an exact density exceeds the
    /// budget; without it the resource error is returned.
    pub fallback: Option<(usize, u64)>,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            guard: DEFAULT_GUARD,
            fallback: None,
        }
    }
}

/// A density value, exact unless a standard error is attached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceEntry {
    pub value: f64,
    pub stderr: Option<f64>,
}

/// Densities with one row per pattern and one column per sequence member.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityTrace {
    pub entries: Vec<Vec<TraceEntry>>,
}

impl DensityTrace {
    pub fn values(&self) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|e| e.value).collect())
            .collect()
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.stderr.is_none())
    }

    /// Plot-ready CSV: a `pattern` column followed by one column per
    /// sequence member.
    pub fn to_csv(&self) -> String {
        let cols = self.entries.first().map_or(0, Vec::len);
        let mut out = String::from("pattern");
        for c in 0..cols {
            out.push_str(&format!(",t{c}"));
        }
        out.push('\n');
        for (r, row) in self.entries.iter().enumerate() {
            out.push_str(&r.to_string());
            for e in row {
                out.push(',');
                out.push_str(&format_number(e.value));
            }
            out.push('\n');
        }
        out
    }
}

/// SplitMix64 step, used to derive independent seeds per trace cell.
fn mix(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed ^ a.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ b.wrapping_mul(0xd1b5_4a32_d192_ed69);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `t(F, X_n)` for every catalog pattern `F` and sequence member `X_n`.
pub fn density_trace(sequence: &[Target<'_>], catalog: &[PatternGraph], options: &TraceOptions) -> Result<DensityTrace> {
    if let Some(first) = sequence.first() {
        let space = target_space(first);
        if sequence.iter().any(|t| **target_space(t) != **space) || catalog.iter().any(|p| **p.space() != **space) {
            return Err(domain("sequence members and patterns must share one decoration space"));
        }
    }
    let cells: Vec<(usize, usize)> = (0..catalog.len())
        .flat_map(|r| (0..sequence.len()).map(move |c| (r, c)))
        .collect();
    let values = cells
        .par_iter()
        .map(|&(r, c)| trace_entry(&catalog[r], &sequence[c], options, r, c))
        .collect::<Result<Vec<_>>>()?;
    let cols = sequence.len();
    let entries = if cols == 0 {
        vec![Vec::new(); catalog.len()]
    } else {
        values.chunks(cols).map(<[TraceEntry]>::to_vec).collect()
    };
    Ok(DensityTrace { entries })
}

fn target_space<'a>(t: &'a Target<'_>) -> &'a crate::space::SpaceRef {
    match t {
        Target::Graph(g) => g.space(),
        Target::Graphon(w) => w.space(),
    }
}

fn trace_entry(f: &PatternGraph, target: &Target<'_>, options: &TraceOptions, r: usize, c: usize) -> Result<TraceEntry> {
    let exact = match target {
        Target::Graph(g) => density_with_guard(f, g, options.guard),
        Target::Graphon(w) => density_graphon_with_guard(f, w, options.guard),
    };
    match (exact, options.fallback) {
        (Ok(value), _) => Ok(TraceEntry { value, stderr: None }),
        (Err(e), Some((reps, seed))) if e.is_resource() => {
            let seed = mix(seed, r as u64, c as u64);
            let est = match target {
                Target::Graph(g) => density_estimate(f, g, reps, seed)?,
                Target::Graphon(w) => density_graphon_estimate(f, w, reps, seed)?,
            };
            Ok(TraceEntry {
                value: est.estimate,
                stderr: Some(est.stderr),
            })
        }
        (Err(e), _) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CauchyReport {
    pub window: usize,
    pub tol: f64,
    /// Per pattern, the largest step between consecutive members over the
    /// last `window` steps.
    pub max_step: Vec<f64>,
    pub converged: Vec<bool>,
    pub all_converged: bool,
    pub note: &'static str,
}

/// Window test on a trace given as rows of values.
pub fn cauchy_report(trace: &[Vec<f64>], window: usize, tol: f64) -> Result<CauchyReport> {
    if window == 0 {
        return Err(argument("window must be positive"));
    }
    let mut max_step = Vec::with_capacity(trace.len());
    for row in trace {
        if row.len() <= window {
            return Err(argument(format!(
                "a window of {window} needs more than {window} sequence members, got {}",
                row.len()
            )));
        }
        let tail = &row[row.len() - window - 1..];
        max_step.push(tail.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max));
    }
    let converged: Vec<bool> = max_step.iter().map(|&d| d <= tol).collect();
    Ok(CauchyReport {
        window,
        tol,
        all_converged: converged.iter().all(|&c| c),
        max_step,
        converged,
        note: HEURISTIC_NOTE,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingOptions {
    /// Nodes per sample.
    pub k: usize,
    pub reps: usize,
    pub seed: u64,
    pub tol: f64,
    /// Number of trailing neighbor pairs the verdict looks at.
    pub window: usize,
}

/// `E(L)` from sample counts compared with `t(F, G)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinkageCheck {
    pub pattern: usize,
    pub graph: usize,
    pub sampled: f64,
    pub stderr: f64,
    pub density: f64,
    /// Replacement gap bound plus four standard errors.
    pub allowed: f64,
    pub within: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingReport {
    /// Total variation between the empirical sample laws of neighbors.
    pub tv: Vec<f64>,
    pub linkage: Vec<LinkageCheck>,
    pub converged: bool,
    pub linkage_ok: bool,
    pub note: &'static str,
}

/// Compare empirical `k`-sample laws of neighbors, and check
/// `E(L(sample)) ≈ t(F, G)` for every catalog pattern with at most `k` nodes.
pub fn sampling_consistency(
    sequence: &[DecoratedGraph],
    catalog: &[PatternGraph],
    options: &SamplingOptions,
) -> Result<SamplingReport> {
    if sequence.len() < 2 {
        return Err(argument("need at least two graphs"));
    }
    let k = options.k;
    let dists = sequence
        .iter()
        .enumerate()
        .map(|(i, g)| empirical_distribution(g, k, options.reps, mix(options.seed, i as u64, 0)))
        .collect::<Result<Vec<_>>>()?;
    let tv = dists
        .windows(2)
        .map(|w| distribution_distance(&w[0], &w[1]))
        .collect::<Result<Vec<_>>>()?;

    let mut linkage = Vec::new();
    for (p, f) in catalog.iter().enumerate() {
        if f.k() > k {
            continue;
        }
        for (i, (g, d)) in sequence.iter().zip(&dists).enumerate() {
            let (sampled, stderr) = functional_mean(f, d)?;
            let density = density_with_guard(f, g, DEFAULT_GUARD)?;
            let allowed = replacement_gap_bound(f, g.n()) + 4.0 * stderr;
            linkage.push(LinkageCheck {
                pattern: p,
                graph: i,
                sampled,
                stderr,
                density,
                allowed,
                within: (sampled - density).abs() <= allowed,
            });
        }
    }
    let window = options.window.clamp(1, tv.len());
    let converged = tv[tv.len() - window..].iter().all(|&d| d <= options.tol);
    Ok(SamplingReport {
        tv,
        linkage_ok: linkage.iter().all(|c| c.within),
        linkage,
        converged,
        note: HEURISTIC_NOTE,
    })
}

/// Mean of the evaluation functional under the empirical law, with its
/// standard error.
fn functional_mean(f: &PatternGraph, d: &SampleDistribution) -> Result<(f64, f64)> {
    let l = evaluation_functional(f);
    let total = d.total() as f64;
    let mut mean = KahanSum::new();
    let mut square = KahanSum::new();
    for (codes, &count) in d.counts() {
        let x = l.eval_codes(d.k(), codes)?;
        let w = count as f64 / total;
        mean.add(w * x);
        square.add(w * x * x);
    }
    let m = mean.total();
    let var = (square.total() - m * m).max(0.0) * total / (total - 1.0).max(1.0);
    Ok((m, (var / total).sqrt()))
}

/// What to put on the diagonal of a W-random graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiagonalPolicy {
    /// The space's zero element; the graph is marked loopless.
    Zero,
    Constant(Decoration),
}

/// W-random graph with the zero diagonal.
pub fn wrandom(w: &StepGraphon, n: usize, seed: u64) -> Result<DecoratedGraph> {
    wrandom_with(w, n, seed, DiagonalPolicy::Zero)
}

/// Draw latent points `x_1..x_n` uniformly in `[0,1)` and, independently for
/// `i < j`, `G(i,j)` from the cell of the steps holding `x_i` and `x_j`.
/// Positions use RNG stream 0 and row `i` uses stream `i + 1`.
pub fn wrandom_with(w: &StepGraphon, n: usize, seed: u64, diagonal: DiagonalPolicy) -> Result<DecoratedGraph> {
    if n == 0 {
        return Err(argument("n must be at least 1"));
    }
    let space = w.space().clone();
    let diag = match diagonal {
        DiagonalPolicy::Zero => space.zero().ok_or_else(|| {
            argument(format!(
                "the {} has no zero element; pass an explicit diagonal decoration",
                space.describe()
            ))
        })?,
        DiagonalPolicy::Constant(c) => {
            space.check(&c)?;
            c
        }
    };
    let m = w.m();
    let mut pos_rng = numeric::rng(seed, 0);
    let steps: Vec<usize> = (0..n)
        .map(|_| {
            let x: f64 = pos_rng.gen();
            ((x * m as f64) as usize).min(m - 1)
        })
        .collect();
    let rows: Vec<Vec<Decoration>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = numeric::rng(seed, i as u64 + 1);
            (i + 1..n)
                .map(|j| w.cell(steps[i], steps[j]).draw(rng.gen()))
                .collect()
        })
        .collect();
    let mut upper = Vec::with_capacity(n * (n + 1) / 2);
    for row in rows {
        upper.push(diag);
        upper.extend(row);
    }
    let g = DecoratedGraph::from_upper(space, n, upper)?
        .with_metadata("generator", "wrandom")
        .with_metadata("seed", seed.to_string());
    match diagonal {
        DiagonalPolicy::Zero => Ok(g.with_metadata("diagonal", "zero").into_loopless()?),
        DiagonalPolicy::Constant(c) => Ok(g.with_metadata("diagonal", format!("constant {}", describe(c)))),
    }
}

fn describe(c: Decoration) -> String {
    match c {
        Decoration::Label(i) => i.to_string(),
        Decoration::Real(x) => format_number(x),
        Decoration::Bits(b) => b.to_string(),
    }
}

/// Stage data for one graphon of a sequence.
#[derive(Clone, Debug)]
pub struct StageEntry {
    /// The simultaneous regularity partition of the graphon's steps.
    pub partition: StepPartition,
    /// `order[r]` is the partition group placed at position `r`.
    pub order: Vec<usize>,
    /// Stepped moment components on the common step count.
    pub stepped: MomentFunctionSequence,
    /// Per-function `‖W_f − (W_f)_P‖_□`.
    pub achieved: Vec<f64>,
    pub certified: bool,
}

/// For every graphon, an equal-measure partition that is `eps`-regular for
/// all its moment components under `family`, with the components averaged
/// over it and laid out on a common number of steps.
///
/// Groups are put in a canonical order before the layout: by diagonal value
/// of each component, then by each component's sorted row of block values,
/// ties broken by smallest step. The order depends only on the block values,
/// so relabeling the steps of a graphon leaves its stage unchanged.
pub fn refinement_stage(sequence: &[StepGraphon], family: &TestFamily, eps: f64) -> Result<Vec<StageEntry>> {
    let mut stages = Vec::with_capacity(sequence.len());
    for w in sequence {
        if **w.space() != **family.space() {
            return Err(domain("graphon and family live on different spaces"));
        }
        let moments = w.moments(family)?;
        let reg = simultaneous_regularity(moments.components(), eps, &StepPartition::trivial(w.m()))?;
        let blocks = moments
            .components()
            .iter()
            .map(|c| c.quotient(&reg.partition))
            .collect::<Result<Vec<_>>>()?;
        let order = canonical_order(&blocks);
        stages.push((reg, blocks, order));
    }
    let common = stages.iter().try_fold(1usize, |acc, (reg, _, _)| {
        let q = reg.partition.len();
        let l = acc / gcd(acc, q) * q;
        if l > STAGE_GUARD {
            Err(Error::Resource(format!(
                "common step count {l} exceeds the budget of {STAGE_GUARD}"
            )))
        } else {
            Ok(l)
        }
    })?;
    stages
        .into_iter()
        .map(|(reg, blocks, order)| {
            let q = reg.partition.len();
            let components = blocks
                .iter()
                .map(|b| Ok(b.permuted(&order)?.refine(common / q)))
                .collect::<Result<Vec<_>>>()?;
            Ok(StageEntry {
                partition: reg.partition,
                order,
                stepped: MomentFunctionSequence::new(family.clone(), components)?,
                achieved: reg.achieved,
                certified: reg.certified,
            })
        })
        .collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn canonical_order(blocks: &[KernelMatrix]) -> Vec<usize> {
    let q = blocks.first().map_or(0, KernelMatrix::m);
    let signature = |g: usize| -> Vec<f64> {
        let mut sig: Vec<f64> = blocks.iter().map(|b| b.get(g, g)).collect();
        for b in blocks {
            let mut row: Vec<f64> = (0..q).map(|h| b.get(g, h)).collect();
            row.sort_by(f64::total_cmp);
            sig.extend(row);
        }
        sig
    };
    let sigs: Vec<Vec<f64>> = (0..q).map(signature).collect();
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&a, &b| {
        sigs[a]
            .iter()
            .zip(&sigs[b])
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

/// Both sides of the counting lemma for `F` between two moment sequences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountingBound {
    /// `|t(F,u) − t(F,w)|`.
    pub lhs: f64,
    /// `4 (∏_e d_e) Σ_e ‖u_e − w_e‖_□` with `d_e` the larger of the two
    /// components' sup bounds.
    pub rhs: f64,
    /// `4 Σ_e (∏_{e' ≠ e} d_{e'}) ‖u_e − w_e‖_□`, the bound the telescoping
    /// argument yields; it holds for all `d_e`, while `rhs` can fall below
    /// `lhs` once some `d_e < 1`.
    pub telescoping_rhs: f64,
}

impl CountingBound {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub fn counting_lemma_bound(
    f: &PatternGraph,
    u: &MomentFunctionSequence,
    w: &MomentFunctionSequence,
) -> Result<CountingBound> {
    if u.m() != w.m() {
        return Err(argument("moment sequences have different step counts"));
    }
    let lhs = (density_sequence(f, u)? - density_sequence(f, w)?).abs();
    let mut d = Vec::with_capacity(f.edges().len());
    let mut cut = Vec::with_capacity(f.edges().len());
    for (i, j, func) in f.edges() {
        let missing = || argument(format!("edge ({i},{j}) function is missing from a family"));
        let a = u.component(func).ok_or_else(missing)?;
        let b = w.component(func).ok_or_else(missing)?;
        d.push(a.sup_bound().max(b.sup_bound()));
        cut.push(cut_norm_exact(&a.sub(b)?)?.value);
    }
    let product: f64 = d.iter().product();
    let rhs = 4.0 * product * cut.iter().sum::<f64>();
    let telescoping_rhs = 4.0
        * (0..d.len())
            .map(|t| {
                let others: f64 = d.iter().enumerate().filter(|(r, _)| *r != t).map(|(_, v)| v).product();
                others * cut[t]
            })
            .sum::<f64>();
    Ok(CountingBound {
        lhs,
        rhs,
        telescoping_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphon::embed_graph;
    use crate::space::{default_family, DecorationSpace, FamilyParams, KDistribution, SpaceRef, TestFunction};

    fn simple() -> SpaceRef {
        SpaceRef::new(DecorationSpace::simple())
    }

    fn complete(n: usize) -> DecoratedGraph {
        let adj: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| u8::from(i != j)).collect()).collect();
        DecoratedGraph::from_simple_graph(&adj, true).unwrap()
    }

    #[test]
    fn catalog_examples() {
        let s = simple();
        let fam = default_family(&s, FamilyParams::default()).unwrap();
        let cat = pattern_catalog(&fam, 2, 1).unwrap();
        assert_eq!(cat.len(), 4);
        assert_eq!((cat[0].k(), cat[0].edges().len()), (1, 0));
        assert_eq!((cat[1].k(), cat[1].edges().len()), (2, 0));
        assert_eq!(cat[2].edges()[0].2, fam.functions()[0]);
        assert_eq!(cat[3].edges()[0].2, fam.functions()[1]);
        assert!(pattern_catalog(&fam, 0, 3).unwrap().is_empty());
    }

    #[test]
    fn catalog_counts_simple_graphs() {
        // Graphs on 3 nodes with one edge function: 4 classes.
        let s = simple();
        let one = TestFamily::new(s.clone(), vec![TestFunction::indicator(s.clone(), 1).unwrap()]).unwrap();
        let cat = pattern_catalog(&one, 3, 3).unwrap();
        assert_eq!(cat.iter().filter(|p| p.k() == 3).count(), 4);
        // Graphs on 4 nodes: 11 classes.
        let cat = pattern_catalog(&one, 4, 6).unwrap();
        assert_eq!(cat.iter().filter(|p| p.k() == 4).count(), 11);
    }

    #[test]
    fn catalog_grows_with_parameters() {
        let s = simple();
        let fam = default_family(&s, FamilyParams::default()).unwrap();
        let mut last = 0;
        for k in 0..=3 {
            let n = pattern_catalog(&fam, k, 3).unwrap().len();
            assert!(n >= last);
            last = n;
        }
        let mut last = 0;
        for b in 0..=3 {
            let n = pattern_catalog(&fam, 3, b).unwrap().len();
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn catalog_guard() {
        let s = SpaceRef::new(DecorationSpace::colors(9).unwrap());
        let fam = default_family(&s, FamilyParams::default()).unwrap();
        assert!(pattern_catalog(&fam, 5, 10).unwrap_err().is_resource());
    }

    #[test]
    fn complete_graph_trace() {
        let s = simple();
        let edge = PatternGraph::new(s.clone(), 2, vec![(0, 1, TestFunction::indicator(s.clone(), 1).unwrap())]).unwrap();
        let graphs: Vec<DecoratedGraph> = (2..8).map(complete).collect();
        let targets: Vec<Target<'_>> = graphs.iter().map(Target::Graph).collect();
        let trace = density_trace(&targets, std::slice::from_ref(&edge), &TraceOptions::default()).unwrap();
        for (n, v) in (2..8).zip(&trace.values()[0]) {
            let closed = (n * (n - 1)) as f64 / (n * n) as f64;
            assert!((v - closed).abs() < 1e-15);
        }
        let embedded: Vec<StepGraphon> = graphs.iter().map(embed_graph).collect();
        let targets: Vec<Target<'_>> = embedded.iter().map(Target::Graphon).collect();
        let trace2 = density_trace(&targets, &[edge], &TraceOptions::default()).unwrap();
        for (a, b) in trace.values()[0].iter().zip(&trace2.values()[0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(trace.to_csv().starts_with("pattern,t0,t1"));
    }

    #[test]
    fn cauchy_examples() {
        let r = cauchy_report(&[vec![0.3; 5]], 3, 1e-12).unwrap();
        assert!(r.all_converged);
        let r = cauchy_report(&[vec![0.0, 1.0, 0.0, 1.0, 0.0]], 2, 0.99).unwrap();
        assert!(!r.all_converged);
        assert_eq!(r.max_step, vec![1.0]);
        assert!(cauchy_report(&[vec![0.0, 1.0]], 2, 0.5).is_err());
    }

    fn three_step() -> StepGraphon {
        let s = simple();
        let p = [[0.8, 0.2, 0.4], [0.2, 0.6, 0.1], [0.4, 0.1, 0.3]];
        StepGraphon::from_fn(s.clone(), 3, |a, b| {
            KDistribution::bernoulli(s.clone(), Decoration::Label(0), Decoration::Label(1), p[a][b])
        })
        .unwrap()
    }

    #[test]
    fn wrandom_examples() {
        let s = simple();
        let dirac = StepGraphon::constant(s.clone(), 2, KDistribution::dirac(s.clone(), Decoration::Label(1)).unwrap()).unwrap();
        let g = wrandom(&dirac, 6, 3).unwrap();
        assert_eq!(g, complete(6).with_metadata("generator", "wrandom").with_metadata("seed", "3").with_metadata("diagonal", "zero"));

        let p = 0.3;
        let bern = StepGraphon::constant(
            s.clone(),
            1,
            KDistribution::bernoulli(s.clone(), Decoration::Label(0), Decoration::Label(1), p).unwrap(),
        )
        .unwrap();
        let n = 200;
        let g = wrandom(&bern, n, 11).unwrap();
        let pairs = (n * (n - 1) / 2) as f64;
        let edges = g.upper().iter().filter(|c| **c == Decoration::Label(1)).count() as f64;
        assert!((edges / pairs - p).abs() <= 4.0 * (p * (1.0 - p) / pairs).sqrt());
        assert_eq!(wrandom(&bern, 50, 4).unwrap(), wrandom(&bern, 50, 4).unwrap());

        let nozero = SpaceRef::new(DecorationSpace::interval(0.0, 1.0).unwrap());
        let w = StepGraphon::constant(nozero.clone(), 1, KDistribution::dirac(nozero.clone(), Decoration::Real(0.5)).unwrap()).unwrap();
        assert!(wrandom(&w, 4, 0).is_err());
        let g = wrandom_with(&w, 4, 0, DiagonalPolicy::Constant(Decoration::Real(0.0))).unwrap();
        assert_eq!(g.metadata()["diagonal"], "constant 0");
    }

    #[test]
    fn wrandom_edge_density_approaches_limit() {
        let w = three_step();
        let s = simple();
        let edge = PatternGraph::new(s.clone(), 2, vec![(0, 1, TestFunction::indicator(s.clone(), 1).unwrap())]).unwrap();
        let limit = density_graphon_with_guard(&edge, &w, DEFAULT_GUARD).unwrap();
        let mean = |n: usize| -> f64 {
            (0..100).map(|seed| density_with_guard(&edge, &wrandom(&w, n, seed).unwrap(), DEFAULT_GUARD).unwrap()).sum::<f64>() / 100.0
        };
        // The zero diagonal biases the density by -limit·(diagonal mass)/n.
        assert!((mean(200) - limit).abs() < 0.01);
        assert!((mean(200) - limit).abs() < (mean(10) - limit).abs());
    }

    #[test]
    fn wrandom_sequence_passes_cauchy_window() {
        let w = three_step();
        let fam = default_family(w.space(), FamilyParams::default()).unwrap();
        let cat = pattern_catalog(&fam, 3, 3).unwrap();
        let graphs: Vec<DecoratedGraph> = (4..=10).map(|e| wrandom(&w, 1 << e, 1).unwrap()).collect();
        let targets: Vec<Target<'_>> = graphs.iter().map(Target::Graph).collect();
        let trace = density_trace(&targets, &cat, &TraceOptions { guard: 1e10, fallback: None }).unwrap();
        let r = cauchy_report(&trace.values(), 2, 0.05).unwrap();
        assert!(r.all_converged, "{:?}", r.max_step);
    }

    #[test]
    fn sampling_consistency_examples() {
        let s = simple();
        let fam = default_family(&s, FamilyParams::default()).unwrap();
        let cat = pattern_catalog(&fam, 3, 3).unwrap();
        let opts = SamplingOptions {
            k: 3,
            reps: 20_000,
            seed: 5,
            tol: 0.05,
            window: 2,
        };
        let same = vec![complete(9); 3];
        let r = sampling_consistency(&same, &cat, &opts).unwrap();
        assert!(r.tv.iter().all(|&d| d == 0.0));
        assert!(r.converged && r.linkage_ok);

        let empty = DecoratedGraph::from_simple_graph(&vec![vec![0; 9]; 9], true).unwrap();
        let alternating = vec![complete(9), empty.clone(), complete(9)];
        let r = sampling_consistency(&alternating, &cat, &SamplingOptions { k: 2, ..opts }).unwrap();
        assert_eq!(r.tv, vec![1.0, 1.0]);
        assert!(!r.converged);
        assert!(r.linkage_ok);
    }

    #[test]
    fn stage_of_constant_sequence() {
        let s = simple();
        let fam = default_family(&s, FamilyParams::default()).unwrap();
        let mu = KDistribution::bernoulli(s.clone(), Decoration::Label(0), Decoration::Label(1), 0.4).unwrap();
        let seq = vec![StepGraphon::constant(s.clone(), 4, mu.clone()).unwrap(); 3];
        let stage = refinement_stage(&seq, &fam, 0.3).unwrap();
        for e in &stage {
            assert_eq!(e.partition.len(), 1);
            assert_eq!(e.stepped.m(), 1);
            assert!((e.stepped.components()[1].get(0, 0) - 0.4).abs() < 1e-15);
        }
    }

    #[test]
    fn stage_is_relabeling_invariant() {
        let w = three_step();
        let fam = default_family(w.space(), FamilyParams::default()).unwrap();
        let g = wrandom(&w, 12, 9).unwrap();
        let perm = [3, 7, 1, 0, 11, 5, 2, 9, 4, 6, 10, 8];
        let a = embed_graph(&g);
        let b = embed_graph(&g.permuted(&perm).unwrap());
        let stage = refinement_stage(&[a, b], &fam, 0.5).unwrap();
        for e in &stage {
            assert!(e.certified);
            assert!(e.partition.is_equal_measure());
        }
        assert_eq!(stage[0].stepped.m(), stage[1].stepped.m());
    }

    #[test]
    fn counting_lemma_examples() {
        let s = simple();
        let fam = default_family(&s, FamilyParams::default()).unwrap();
        let w = three_step();
        let u = w.moments(&fam).unwrap();
        let f1 = fam.functions()[1].clone();
        let tri = PatternGraph::new(s.clone(), 3, vec![(0, 1, f1.clone()), (0, 2, f1.clone()), (1, 2, f1.clone())]).unwrap();
        let same = counting_lemma_bound(&tri, &u, &u).unwrap();
        assert_eq!((same.lhs, same.rhs), (0.0, 0.0));

        let v = w.step_average(&StepPartition::trivial(3), true).unwrap().moments(&fam).unwrap();
        let b = counting_lemma_bound(&tri, &u, &v).unwrap();
        assert!(b.holds() && b.lhs <= b.telescoping_rhs);

        // Single edge: the difference of averages is itself a rectangle value.
        let edge = PatternGraph::new(s.clone(), 2, vec![(0, 1, f1.clone())]).unwrap();
        let b = counting_lemma_bound(&edge, &u, &v).unwrap();
        let cut = cut_norm_exact(&u.components()[1].sub(&v.components()[1]).unwrap()).unwrap().value;
        assert!(b.lhs <= cut + 1e-15);
    }

    #[test]
    fn literal_bound_fails_for_small_kernels() {
        // f = 0.1·1_edge, u_f ≡ 0.1 against w_f ≡ 0: lhs = 0.1 but 4·d·‖u−w‖ = 0.04.
        let s = simple();
        let f = TestFunction::table(s.clone(), vec![0.0, 0.1]).unwrap();
        let fam = TestFamily::new(s.clone(), vec![f.clone()]).unwrap();
        let seq = |c: usize| {
            StepGraphon::constant(s.clone(), 1, KDistribution::dirac(s.clone(), Decoration::Label(c)).unwrap())
                .unwrap()
                .moments(&fam)
                .unwrap()
        };
        let edge = PatternGraph::new(s.clone(), 2, vec![(0, 1, f)]).unwrap();
        let b = counting_lemma_bound(&edge, &seq(1), &seq(0)).unwrap();
        assert!((b.lhs - 0.1).abs() < 1e-15);
        assert!((b.rhs - 0.04).abs() < 1e-15);
        assert!(!b.holds());
        assert!(b.lhs <= b.telescoping_rhs);
    }
}
