//! Equal-measure step graphons, real step kernels, and moment function
//! sequences.
//!
//! A [`StepGraphon`] with `m` steps splits `[0,1]` into `m` intervals of
//! length `1/m` and assigns a distribution on the decoration space to each
//! pair of intervals. Integrating a test function `f` cellwise gives its
//! moment component, a [`KernelMatrix`]. Densities of patterns in a step
//! graphon only depend on the moment components of the pattern's edge
//! functions.

use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{argument, domain, validation, Error, Result};
use crate::graph::{DecoratedGraph, PatternGraph};
use crate::hom::{map_sum, BoundEdge, Estimate, Moments, DEFAULT_GUARD};
use crate::numeric::{self, blocks};
use crate::regularity::StepPartition;
use crate::space::{KDistribution, SpaceKind, SpaceRef, TestFamily, TestFunction};

/// Tolerance for moment-sequence realizability checks.
pub const REALIZABILITY_TOL: f64 = 1e-9;

/// A symmetric real step function on `m` equal steps, with a stored bound
/// `sup_bound ≥ max |values|`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix {
    m: usize,
    values: Vec<f64>,
    sup_bound: f64,
}

impl KernelMatrix {
    pub fn new(m: usize, values: Vec<f64>, sup_bound: f64) -> Result<Self> {
        if values.len() != m * m {
            return Err(validation(format!("expected {} values for m = {m}", m * m)));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(validation("kernel values must be finite"));
        }
        for i in 0..m {
            for j in i + 1..m {
                if values[i * m + j] != values[j * m + i] {
                    return Err(validation(format!("kernel is not symmetric at ({i},{j})")));
                }
            }
        }
        let max = max_abs(&values);
        if !(sup_bound >= max) {
            return Err(validation(format!("sup bound {sup_bound} below max |value| {max}")));
        }
        Ok(KernelMatrix { m, values, sup_bound })
    }

    /// Kernel with `sup_bound` set to the largest absolute value.
    pub fn from_values(m: usize, values: Vec<f64>) -> Result<Self> {
        let bound = max_abs(&values);
        Self::new(m, values, bound)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(validation("kernel rows must form a square matrix"));
        }
        Self::from_values(m, rows.concat())
    }

    pub fn constant(m: usize, c: f64) -> Result<Self> {
        Self::from_values(m, vec![c; m * m])
    }

    pub fn zeros(m: usize) -> Self {
        KernelMatrix {
            m,
            values: vec![0.0; m * m],
            sup_bound: 0.0,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.m + j]
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.values)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks(self.m.max(1)).map(<[f64]>::to_vec).collect()
    }

    /// `∫∫ W`, the mean of all entries.
    pub fn mean(&self) -> f64 {
        self.values.iter().copied().collect::<numeric::KahanSum>().total() / (self.m * self.m) as f64
    }

    /// `‖W‖₂² = ∫∫ W²`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v * v).collect::<numeric::KahanSum>().total()
            / (self.m * self.m) as f64
    }

    /// `self − other`, with bound `sup(self) + sup(other)`.
    pub fn sub(&self, other: &KernelMatrix) -> Result<KernelMatrix> {
        self.check_same_m(other)?;
        let values: Vec<f64> = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        let bound = self.sup_bound + other.sup_bound;
        let max = max_abs(&values);
        Ok(KernelMatrix {
            m: self.m,
            values,
            sup_bound: bound.max(max),
        })
    }

    pub fn add(&self, other: &KernelMatrix) -> Result<KernelMatrix> {
        self.check_same_m(other)?;
        let values: Vec<f64> = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        let max = max_abs(&values);
        Ok(KernelMatrix {
            m: self.m,
            values,
            sup_bound: (self.sup_bound + other.sup_bound).max(max),
        })
    }

    pub fn scale(&self, c: f64) -> KernelMatrix {
        KernelMatrix {
            m: self.m,
            values: self.values.iter().map(|v| c * v).collect(),
            sup_bound: c.abs() * self.sup_bound,
        }
    }

    fn check_same_m(&self, other: &KernelMatrix) -> Result<()> {
        if self.m != other.m {
            return Err(argument(format!("kernel sizes differ: {} vs {}", self.m, other.m)));
        }
        Ok(())
    }

    /// The same step function on `m·r` steps, each step split into `r`.
    pub fn refine(&self, r: usize) -> KernelMatrix {
        let mr = self.m * r;
        let mut values = vec![0.0; mr * mr];
        for i in 0..mr {
            for j in 0..mr {
                values[i * mr + j] = self.get(i / r, j / r);
            }
        }
        KernelMatrix {
            m: mr,
            values,
            sup_bound: self.sup_bound,
        }
    }

    /// Rename step `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<KernelMatrix> {
        crate::graph::check_permutation(perm, self.m)?;
        let m = self.m;
        let mut values = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                values[perm[i] * m + perm[j]] = self.get(i, j);
            }
        }
        Ok(KernelMatrix {
            m,
            values,
            sup_bound: self.sup_bound,
        })
    }

    /// Average over each block `P_a × P_b`, kept on the original `m` steps.
    pub fn step_average(&self, p: &StepPartition) -> Result<KernelMatrix> {
        let q = self.block_means(p)?;
        let owner = p.owners();
        let m = self.m;
        let mut values = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                values[i * m + j] = q[owner[i] * p.len() + owner[j]];
            }
        }
        Ok(KernelMatrix {
            m,
            values,
            sup_bound: self.sup_bound,
        })
    }

    /// Block averages as a `|P| × |P|` kernel. With equal-size groups this is
    /// the same step function after rearranging steps group by group.
    pub fn quotient(&self, p: &StepPartition) -> Result<KernelMatrix> {
        if !p.is_equal_measure() {
            return Err(argument("quotient needs groups of equal size"));
        }
        let k = p.len();
        Ok(KernelMatrix {
            m: k,
            values: self.block_means(p)?,
            sup_bound: self.sup_bound,
        })
    }

    fn block_means(&self, p: &StepPartition) -> Result<Vec<f64>> {
        if p.m() != self.m {
            return Err(argument(format!("partition of {} steps applied to m = {}", p.m(), self.m)));
        }
        let k = p.len();
        let mut q = vec![0.0; k * k];
        for (a, ga) in p.groups().iter().enumerate() {
            for (b, gb) in p.groups().iter().enumerate().skip(a) {
                let mut acc = numeric::KahanSum::new();
                for &i in ga {
                    for &j in gb {
                        acc.add(self.get(i, j));
                    }
                }
                let v = acc.total() / (ga.len() * gb.len()) as f64;
                q[a * k + b] = v;
                q[b * k + a] = v;
            }
        }
        Ok(q)
    }
}

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// A symmetric `m × m` array of distributions on one decoration space.
#[derive(Clone, Debug, PartialEq)]
pub struct StepGraphon {
    space: SpaceRef,
    m: usize,
    cells: Vec<KDistribution>,
}

impl StepGraphon {
    /// Build from the row-major upper triangle (diagonal included).
    pub fn from_upper(space: SpaceRef, m: usize, upper: Vec<KDistribution>) -> Result<Self> {
        if upper.len() != m * (m + 1) / 2 {
            return Err(validation(format!(
                "expected {} upper-triangle cells for m = {m}, got {}",
                m * (m + 1) / 2,
                upper.len()
            )));
        }
        if m == 0 {
            return Err(validation("a graphon needs at least one step"));
        }
        let mut cells: Vec<Option<KDistribution>> = vec![None; m * m];
        let mut it = upper.into_iter();
        for i in 0..m {
            for j in i..m {
                let mu = it.next().expect("length checked");
                if **mu.space() != *space {
                    return Err(domain("graphon cell lives on another space"));
                }
                cells[j * m + i] = Some(mu.clone());
                cells[i * m + j] = Some(mu);
            }
        }
        Ok(StepGraphon {
            space,
            m,
            cells: cells.into_iter().map(|c| c.expect("filled")).collect(),
        })
    }

    pub fn from_fn(
        space: SpaceRef,
        m: usize,
        mut cell: impl FnMut(usize, usize) -> Result<KDistribution>,
    ) -> Result<Self> {
        let mut upper = Vec::with_capacity(m * (m + 1) / 2);
        for i in 0..m {
            for j in i..m {
                upper.push(cell(i, j)?);
            }
        }
        Self::from_upper(space, m, upper)
    }

    pub fn constant(space: SpaceRef, m: usize, mu: KDistribution) -> Result<Self> {
        Self::from_fn(space, m, |_, _| Ok(mu.clone()))
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cell(&self, a: usize, b: usize) -> &KDistribution {
        &self.cells[a * self.m + b]
    }

    pub fn upper(&self) -> Vec<&KDistribution> {
        let mut out = Vec::with_capacity(self.m * (self.m + 1) / 2);
        for i in 0..self.m {
            for j in i..self.m {
                out.push(self.cell(i, j));
            }
        }
        out
    }

    /// `W_f(a,b) = ∫ f dW(a,b)`.
    pub fn moment_component(&self, f: &TestFunction) -> Result<KernelMatrix> {
        if !f.same_space(&self.space) {
            return Err(domain("test function lives on another space"));
        }
        let values: Vec<f64> = self.cells.iter().map(|mu| mu.expect(f)).collect();
        let bound = f.bound().max(max_abs(&values));
        KernelMatrix::new(self.m, values, bound)
    }

    /// All moment components for a family.
    pub fn moments(&self, family: &TestFamily) -> Result<MomentFunctionSequence> {
        let components = family
            .functions()
            .iter()
            .map(|f| self.moment_component(f))
            .collect::<Result<Vec<_>>>()?;
        MomentFunctionSequence::new(family.clone(), components)
    }

    /// Average over each block `P_a × P_b` (a mixture of the cell
    /// distributions). Groups must have equal size unless `weighted` is set,
    /// in which case each group pair is averaged with step-count weights.
    pub fn step_average(&self, p: &StepPartition, weighted: bool) -> Result<StepGraphon> {
        if p.m() != self.m {
            return Err(argument(format!("partition of {} steps applied to m = {}", p.m(), self.m)));
        }
        if !weighted && !p.is_equal_measure() {
            return Err(argument(
                "graphon averaging needs equal-measure groups unless weighted averaging is requested",
            ));
        }
        let k = p.len();
        let mut blocks: Vec<Option<KDistribution>> = vec![None; k * k];
        for (a, ga) in p.groups().iter().enumerate() {
            for (b, gb) in p.groups().iter().enumerate().skip(a) {
                let parts = ga
                    .iter()
                    .flat_map(|&i| gb.iter().map(move |&j| (1.0, self.cell(i, j))));
                let mu = KDistribution::mixture(self.space.clone(), parts)?;
                blocks[b * k + a] = Some(mu.clone());
                blocks[a * k + b] = Some(mu);
            }
        }
        let owner = p.owners();
        let m = self.m;
        let mut cells = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                cells.push(blocks[owner[i] * k + owner[j]].clone().expect("filled"));
            }
        }
        Ok(StepGraphon {
            space: self.space.clone(),
            m,
            cells,
        })
    }
}

/// The step graphon of a graph: `n` steps, cell `(a,b)` the point mass at
/// `G(a,b)`.
pub fn embed_graph(g: &DecoratedGraph) -> StepGraphon {
    let n = g.n();
    let cells = g
        .entries()
        .iter()
        .map(|&c| KDistribution::dirac(g.space().clone(), c).expect("graph entries belong to the space"))
        .collect();
    StepGraphon {
        space: g.space().clone(),
        m: n,
        cells,
    }
}

fn density_of_kernels(k: usize, m: usize, edges: &[(usize, usize, &KernelMatrix)], guard: f64) -> Result<f64> {
    let bound: Vec<BoundEdge<'_>> = edges
        .iter()
        .map(|(i, j, w)| BoundEdge {
            i: *i,
            j: *j,
            values: w.values(),
        })
        .collect();
    Ok(map_sum(k, m, &bound, guard)? / (m as f64).powi(k as i32))
}

/// Exact `t(F, W) = m^{-k} Σ_{a ∈ [m]^k} ∏ W_f(a_i, a_j)`.
pub fn density_graphon(f: &PatternGraph, w: &StepGraphon) -> Result<f64> {
    density_graphon_with_guard(f, w, DEFAULT_GUARD)
}

pub fn density_graphon_with_guard(f: &PatternGraph, w: &StepGraphon, guard: f64) -> Result<f64> {
    if **f.space() != *w.space {
        return Err(domain("pattern and graphon live on different spaces"));
    }
    let components = f
        .edges()
        .iter()
        .map(|(_, _, func)| w.moment_component(func))
        .collect::<Result<Vec<_>>>()?;
    let edges: Vec<(usize, usize, &KernelMatrix)> = f
        .edges()
        .iter()
        .zip(&components)
        .map(|((i, j, _), c)| (*i, *j, c))
        .collect();
    density_of_kernels(f.k(), w.m, &edges, guard)
}

/// Monte Carlo estimate of `t(F, W)`: uniform points fall into uniform steps.
pub fn density_graphon_estimate(f: &PatternGraph, w: &StepGraphon, reps: usize, seed: u64) -> Result<Estimate> {
    if **f.space() != *w.space {
        return Err(domain("pattern and graphon live on different spaces"));
    }
    if reps < 2 {
        return Err(argument("density estimation needs at least 2 repetitions"));
    }
    let components = f
        .edges()
        .iter()
        .map(|(_, _, func)| w.moment_component(func))
        .collect::<Result<Vec<_>>>()?;
    let k = f.k();
    let m = w.m;
    let parts: Vec<Moments> = blocks(reps)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, len)| {
            let mut rng = numeric::rng(seed, b);
            let mut acc = Moments::default();
            let mut a = vec![0usize; k];
            for _ in 0..len {
                for slot in a.iter_mut() {
                    *slot = rng.gen_range(0..m);
                }
                let x: f64 = f
                    .edges()
                    .iter()
                    .zip(&components)
                    .map(|((i, j, _), c)| c.get(a[*i], a[*j]))
                    .product();
                acc.push(x);
            }
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(Moments::default(), Moments::merge).estimate())
}

/// One kernel per function of a family, all on the same number of steps.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentFunctionSequence {
    family: TestFamily,
    components: Vec<KernelMatrix>,
}

impl MomentFunctionSequence {
    /// For an indicator family on a finite space, every cell must be a
    /// probability vector (within [`REALIZABILITY_TOL`]).
    pub fn new(family: TestFamily, components: Vec<KernelMatrix>) -> Result<Self> {
        if components.len() != family.len() {
            return Err(validation(format!(
                "{} components for a family of {} functions",
                components.len(),
                family.len()
            )));
        }
        if let Some(first) = components.first() {
            if components.iter().any(|c| c.m() != first.m()) {
                return Err(validation("moment components must share the step count"));
            }
        }
        let s = MomentFunctionSequence { family, components };
        if s.family.indicator_labels().is_some() {
            if let Some((row, col, detail)) = s.worst_indicator_cell() {
                return Err(Error::MomentInfeasible { row, col, detail });
            }
        }
        Ok(s)
    }

    /// Build without the realizability check, for sequences that are only
    /// used as indexed kernel families (differences, arbitrary test input).
    pub fn unchecked(family: TestFamily, components: Vec<KernelMatrix>) -> Result<Self> {
        if components.len() != family.len() {
            return Err(validation("component count must match the family"));
        }
        if let Some(first) = components.first() {
            if components.iter().any(|c| c.m() != first.m()) {
                return Err(validation("moment components must share the step count"));
            }
        }
        Ok(MomentFunctionSequence { family, components })
    }

    pub fn family(&self) -> &TestFamily {
        &self.family
    }

    pub fn components(&self) -> &[KernelMatrix] {
        &self.components
    }

    pub fn m(&self) -> usize {
        self.components.first().map_or(0, KernelMatrix::m)
    }

    pub fn component(&self, f: &TestFunction) -> Option<&KernelMatrix> {
        self.family.position(f).map(|i| &self.components[i])
    }

    pub fn step_average(&self, p: &StepPartition) -> Result<MomentFunctionSequence> {
        let components = self
            .components
            .iter()
            .map(|c| c.step_average(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentFunctionSequence {
            family: self.family.clone(),
            components,
        })
    }

    /// Largest violation of nonnegativity or normalization over all cells,
    /// when it exceeds the tolerance.
    fn worst_indicator_cell(&self) -> Option<(usize, usize, String)> {
        let m = self.m();
        let mut worst: Option<(f64, usize, usize, String)> = None;
        for a in 0..m {
            for b in a..m {
                let mut sum = 0.0;
                let mut min = f64::INFINITY;
                for c in &self.components {
                    let v = c.get(a, b);
                    sum += v;
                    min = min.min(v);
                }
                let violation = (sum - 1.0).abs().max(-min);
                if violation > REALIZABILITY_TOL && worst.as_ref().map_or(true, |w| violation > w.0) {
                    worst = Some((
                        violation,
                        a,
                        b,
                        format!("weights sum to {sum}, smallest weight {min}"),
                    ));
                }
            }
        }
        worst.map(|(_, a, b, d)| (a, b, d))
    }
}

/// `t(F, s)` for a pattern whose edge functions all belong to `s`'s family.
pub fn density_sequence(f: &PatternGraph, s: &MomentFunctionSequence) -> Result<f64> {
    density_sequence_with_guard(f, s, DEFAULT_GUARD)
}

pub fn density_sequence_with_guard(f: &PatternGraph, s: &MomentFunctionSequence, guard: f64) -> Result<f64> {
    let mut edges = Vec::with_capacity(f.edges().len());
    for (i, j, func) in f.edges() {
        let c = s
            .component(func)
            .ok_or_else(|| argument(format!("edge ({i},{j}) function is not in the family")))?;
        edges.push((*i, *j, c));
    }
    if s.components.is_empty() {
        // No steps to integrate over; only the empty pattern makes sense.
        return if edges.is_empty() {
            Ok(1.0)
        } else {
            Err(argument("empty moment sequence"))
        };
    }
    density_of_kernels(f.k(), s.m(), &edges, guard)
}

/// The graphon whose indicator moments are `s`: cell `(a,b)` puts weight
/// `s_{1_c}(a,b)` on label `c`. Only finite spaces with an indicator family
/// are supported.
pub fn reconstruct(s: &MomentFunctionSequence) -> Result<StepGraphon> {
    let space = s.family.space().clone();
    if !matches!(space.kind(), SpaceKind::Finite { .. }) {
        return Err(Error::Unsupported(
            "reconstruction is implemented for finite spaces with an indicator family only".into(),
        ));
    }
    let labels = s.family.indicator_labels().ok_or_else(|| {
        Error::Unsupported("reconstruction needs the indicator family of the finite space".into())
    })?;
    if let Some((row, col, detail)) = s.worst_indicator_cell() {
        return Err(Error::MomentInfeasible { row, col, detail });
    }
    let m = s.m();
    StepGraphon::from_fn(space.clone(), m, |a, b| {
        let mut support: Vec<_> = labels
            .iter()
            .zip(&s.components)
            .map(|(&c, comp)| (crate::space::Decoration::Label(c), comp.get(a, b).max(0.0)))
            .collect();
        let total: f64 = support.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > crate::space::NORMALIZATION_TOL {
            for (_, w) in support.iter_mut() {
                *w /= total;
            }
        }
        KDistribution::new(space.clone(), support)
    })
}
