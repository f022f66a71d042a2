//! Weak (Frieze–Kannan) regularity partitions of step kernels.
//!
//! Starting from a base partition, repeatedly find a rectangle `S × T`
//! witnessing the cut norm of `X − X_P` and split every group by `S` and `T`.
//! Each split raises `‖X_P‖₂²` by at least the square of the witnessed cut
//! norm, and `‖X_P‖₂² ≤ sup²`, so a kernel can be split on fewer than
//! `⌈1/ε²⌉` rounds before `‖X − X_P‖_□ ≤ ε·sup`.

use crate::cutnorm::{cut_norm_exact, cut_norm_heuristic, Witness, EXACT_MAX_M};
use crate::error::{argument, validation, Result};
use crate::graphon::{KernelMatrix, StepGraphon};
use crate::space::TestFamily;

/// A partition of the steps `0..m` into nonempty groups. Groups are kept
/// sorted internally and ordered by their smallest step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepPartition {
    m: usize,
    groups: Vec<Vec<usize>>,
}

impl StepPartition {
    pub fn new(m: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; m];
        for g in &groups {
            if g.is_empty() {
                return Err(validation("partition groups must be nonempty"));
            }
            for &i in g {
                if i >= m || seen[i] {
                    return Err(validation(format!("step {i} is out of range or repeated")));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(validation("partition groups must cover every step"));
        }
        Ok(Self::canonical(m, groups))
    }

    fn canonical(m: usize, mut groups: Vec<Vec<usize>>) -> Self {
        for g in groups.iter_mut() {
            g.sort_unstable();
        }
        groups.sort_by_key(|g| g[0]);
        StepPartition { m, groups }
    }

    /// One group holding every step.
    pub fn trivial(m: usize) -> Self {
        StepPartition {
            m,
            groups: vec![(0..m).collect()],
        }
    }

    pub fn singletons(m: usize) -> Self {
        StepPartition {
            m,
            groups: (0..m).map(|i| vec![i]).collect(),
        }
    }

    /// Consecutive blocks of `size` steps; `size` must divide `m`.
    pub fn blocks(m: usize, size: usize) -> Result<Self> {
        if size == 0 || m % size != 0 {
            return Err(argument(format!("block size {size} does not divide {m}")));
        }
        Ok(StepPartition {
            m,
            groups: (0..m / size).map(|b| (b * size..(b + 1) * size).collect()).collect(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// True when all groups have the same number of steps, hence the same
    /// measure.
    pub fn is_equal_measure(&self) -> bool {
        self.groups.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// Group index of every step.
    pub fn owners(&self) -> Vec<usize> {
        let mut owner = vec![0; self.m];
        for (g, members) in self.groups.iter().enumerate() {
            for &i in members {
                owner[i] = g;
            }
        }
        owner
    }

    /// Every group of `self` lies inside a group of `coarser`.
    pub fn refines(&self, coarser: &StepPartition) -> bool {
        if self.m != coarser.m {
            return false;
        }
        let owner = coarser.owners();
        self.groups
            .iter()
            .all(|g| g.iter().all(|&i| owner[i] == owner[g[0]]))
    }

    /// Split every group by membership in each of `sets`.
    pub fn refine_by(&self, sets: &[&[usize]]) -> StepPartition {
        let mut member = vec![0u64; self.m];
        for (b, set) in sets.iter().enumerate() {
            for &i in set.iter() {
                member[i] |= 1 << b;
            }
        }
        let mut groups = Vec::new();
        for g in &self.groups {
            let mut parts: Vec<(u64, Vec<usize>)> = Vec::new();
            for &i in g {
                match parts.iter_mut().find(|(key, _)| *key == member[i]) {
                    Some((_, p)) => p.push(i),
                    None => parts.push((member[i], vec![i])),
                }
            }
            groups.extend(parts.into_iter().map(|(_, p)| p));
        }
        Self::canonical(self.m, groups)
    }

    /// Split every group into consecutive chunks whose size is the gcd of the
    /// group sizes, so that all groups get the same measure.
    pub fn equalize(&self) -> StepPartition {
        let g = self.groups.iter().map(Vec::len).fold(0, gcd);
        if g == 0 {
            return self.clone();
        }
        let groups = self
            .groups
            .iter()
            .flat_map(|grp| grp.chunks(g).map(<[usize]>::to_vec))
            .collect();
        Self::canonical(self.m, groups)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Rounds allowed by the energy-increment argument for one kernel.
pub fn round_cap(eps: f64) -> usize {
    (1.0 / (eps * eps) - 1e-9).ceil() as usize
}

/// How witness rectangles are found.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessSearch {
    /// Use the alternating heuristic even when exact enumeration is possible.
    pub force_heuristic: bool,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for WitnessSearch {
    fn default() -> Self {
        WitnessSearch {
            force_heuristic: false,
            restarts: 20,
            seed: 0,
        }
    }
}

impl WitnessSearch {
    /// `(cut norm or lower bound, witness, exact?)`.
    fn find(&self, d: &KernelMatrix) -> Result<(f64, Witness, bool)> {
        if !self.force_heuristic && d.m() <= EXACT_MAX_M {
            let c = cut_norm_exact(d)?;
            Ok((c.value, c.witness, true))
        } else {
            let c = cut_norm_heuristic(d, self.restarts, self.seed)?;
            Ok((c.value, c.witness, false))
        }
    }
}

/// One refinement step of the loop.
#[derive(Clone, Debug, PartialEq)]
pub struct Round {
    /// Index of the kernel whose witness was used.
    pub kernel: usize,
    /// Witnessed `‖X − X_P‖_□` before the split.
    pub cut_error: f64,
    /// `‖X_P‖₂²` before and after the split.
    pub energy_before: f64,
    pub energy_after: f64,
    /// The partition after this round.
    pub partition: StepPartition,
}

#[derive(Clone, Debug)]
pub struct WeakRegularity {
    pub partition: StepPartition,
    pub approx: KernelMatrix,
    /// Final `‖X − X_P‖_□` (exact) or its best-known lower bound (heuristic).
    pub achieved: f64,
    pub certified: bool,
    pub rounds: Vec<Round>,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(argument(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(())
}

/// A partition `P` with `‖X − X_P‖_□ ≤ eps·sup_bound`, by refinement from
/// the trivial partition.
pub fn weak_regularity(x: &KernelMatrix, eps: f64) -> Result<WeakRegularity> {
    weak_regularity_with(x, eps, &WitnessSearch::default())
}

pub fn weak_regularity_with(x: &KernelMatrix, eps: f64, search: &WitnessSearch) -> Result<WeakRegularity> {
    check_eps(eps)?;
    let target = eps * x.sup_bound();
    let cap = round_cap(eps);
    let mut partition = StepPartition::trivial(x.m());
    let mut rounds = Vec::new();
    loop {
        let approx = x.step_average(&partition)?;
        if x.sup_bound() == 0.0 {
            return Ok(WeakRegularity {
                partition,
                approx,
                achieved: 0.0,
                certified: true,
                rounds,
            });
        }
        let d = x.sub(&approx)?;
        let (value, witness, exact) = search.find(&d)?;
        if value <= target || rounds.len() >= cap {
            return Ok(WeakRegularity {
                partition,
                approx,
                achieved: value,
                certified: exact && value <= target,
                rounds,
            });
        }
        let energy_before = approx.energy();
        let next = partition.refine_by(&[&witness.rows, &witness.cols]);
        let energy_after = x.step_average(&next)?.energy();
        rounds.push(Round {
            kernel: 0,
            cut_error: value,
            energy_before,
            energy_after,
            partition: next.clone(),
        });
        partition = next;
    }
}

#[derive(Clone, Debug)]
pub struct SimultaneousRegularity {
    /// Equal-measure partition refining the base.
    pub partition: StepPartition,
    /// Per-kernel `‖X_i − (X_i)_S‖_□` (or lower bounds in heuristic mode).
    pub achieved: Vec<f64>,
    pub certified: bool,
    pub rounds: Vec<Round>,
}

/// One equal-measure partition, refining `base`, that is `eps`-regular for
/// every kernel in `xs`.
///
/// Each round splits by the witness of the worst offender (largest
/// `‖X_i − (X_i)_P‖_□ / sup_i`). Once no kernel offends, all groups are cut
/// into chunks of the gcd of the group sizes and the errors are checked
/// again, resuming the rounds if needed. Chunking only refines, so energies
/// never drop and every kernel is the worst offender on fewer than
/// `⌈1/ε²⌉` rounds; the loop is capped at `|xs|·⌈1/ε²⌉` rounds.
pub fn simultaneous_regularity(xs: &[KernelMatrix], eps: f64, base: &StepPartition) -> Result<SimultaneousRegularity> {
    simultaneous_regularity_with(xs, eps, base, &WitnessSearch::default())
}

pub fn simultaneous_regularity_with(
    xs: &[KernelMatrix],
    eps: f64,
    base: &StepPartition,
    search: &WitnessSearch,
) -> Result<SimultaneousRegularity> {
    check_eps(eps)?;
    let m = base.m();
    if xs.iter().any(|x| x.m() != m) {
        return Err(argument("all kernels must have the base partition's step count"));
    }
    if !base.is_equal_measure() {
        return Err(argument("the base partition must have groups of equal size"));
    }
    let cap = xs.len().max(1) * round_cap(eps);
    let mut partition = base.clone();
    let mut rounds = Vec::new();
    loop {
        let mut achieved = Vec::with_capacity(xs.len());
        let mut worst: Option<(f64, usize, Witness)> = None;
        let mut all_exact = true;
        for (i, x) in xs.iter().enumerate() {
            if x.sup_bound() == 0.0 {
                achieved.push(0.0);
                continue;
            }
            let d = x.sub(&x.step_average(&partition)?)?;
            let (value, witness, exact) = search.find(&d)?;
            all_exact &= exact;
            achieved.push(value);
            let ratio = value / x.sup_bound();
            if ratio > eps && worst.as_ref().map_or(true, |w| ratio > w.0) {
                worst = Some((ratio, i, witness));
            }
        }
        let Some((_, kernel, witness)) = worst.filter(|_| rounds.len() < cap) else {
            if !partition.is_equal_measure() {
                partition = partition.equalize();
                continue;
            }
            let ok = xs
                .iter()
                .zip(&achieved)
                .all(|(x, a)| *a <= eps * x.sup_bound());
            return Ok(SimultaneousRegularity {
                certified: all_exact && ok && partition.refines(base),
                partition,
                achieved,
                rounds,
            });
        };
        let x = &xs[kernel];
        let energy_before = x.step_average(&partition)?.energy();
        let next = partition.refine_by(&[&witness.rows, &witness.cols]);
        let energy_after = x.step_average(&next)?.energy();
        rounds.push(Round {
            kernel,
            cut_error: achieved[kernel],
            energy_before,
            energy_after,
            partition: next.clone(),
        });
        partition = next;
    }
}

#[derive(Clone, Debug)]
pub struct GraphonRegularity {
    pub partition: StepPartition,
    /// The graphon averaged over the partition blocks.
    pub graphon: StepGraphon,
    /// Per-function errors of the moment components.
    pub achieved: Vec<f64>,
    pub certified: bool,
    pub rounds: Vec<Round>,
}

/// Simultaneous regularity for all moment components of `w` under `family`,
/// starting from the trivial partition.
pub fn regularize_graphon(w: &StepGraphon, family: &TestFamily, eps: f64) -> Result<GraphonRegularity> {
    regularize_graphon_with(w, family, eps, &WitnessSearch::default())
}

pub fn regularize_graphon_with(
    w: &StepGraphon,
    family: &TestFamily,
    eps: f64,
    search: &WitnessSearch,
) -> Result<GraphonRegularity> {
    let components = w.moments(family)?;
    let result = simultaneous_regularity_with(
        components.components(),
        eps,
        &StepPartition::trivial(w.m()),
        search,
    )?;
    let graphon = w.step_average(&result.partition, false)?;
    Ok(GraphonRegularity {
        partition: result.partition,
        graphon,
        achieved: result.achieved,
        certified: result.certified,
        rounds: result.rounds,
    })
}
