//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use deko::space::{default_family, FamilyParams};
use deko::{
    Decoration, DecoratedGraph, DecorationSpace, KDistribution, KernelMatrix, PatternGraph, SpaceRef, StepGraphon,
    TestFamily,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The spaces exercised by the randomized tests.
pub fn spaces() -> Vec<SpaceRef> {
    vec![
        SpaceRef::new(DecorationSpace::simple()),
        SpaceRef::new(DecorationSpace::colors(3).unwrap()),
        SpaceRef::new(DecorationSpace::multigraph(3).unwrap()),
        SpaceRef::new(DecorationSpace::interval(0.0, 1.0).unwrap()),
        SpaceRef::new(DecorationSpace::product(2).unwrap()),
    ]
}

pub fn family(space: &SpaceRef) -> TestFamily {
    default_family(space, FamilyParams::default()).unwrap()
}

pub fn element(space: &DecorationSpace, rng: &mut TestRng) -> Decoration {
    match space.kind() {
        deko::space::SpaceKind::Interval { lo, hi } => {
            // Mix a few repeated grid points with continuous values.
            if rng.gen_bool(0.3) {
                Decoration::Real(*lo + (*hi - *lo) * f64::from(rng.gen_range(0..5u32)) / 4.0)
            } else {
                Decoration::Real(rng.gen_range(*lo..=*hi))
            }
        }
        _ => {
            let n = space.cardinality().unwrap() as u32;
            space.from_code(rng.gen_range(0..n)).unwrap()
        }
    }
}

pub fn graph(space: &SpaceRef, n: usize, rng: &mut TestRng) -> DecoratedGraph {
    DecoratedGraph::from_fn(space.clone(), n, |_, _| element(space, rng)).unwrap()
}

/// A distribution with 1 to 3 support points and random weights.
pub fn distribution(space: &SpaceRef, rng: &mut TestRng) -> KDistribution {
    let points = rng.gen_range(1..=3);
    let raw: Vec<(Decoration, f64)> = (0..points)
        .map(|_| (element(space, rng), rng.gen_range(0.05..1.0)))
        .collect();
    let total: f64 = raw.iter().map(|(_, w)| w).sum();
    KDistribution::new(space.clone(), raw.into_iter().map(|(c, w)| (c, w / total)).collect()).unwrap()
}

pub fn graphon(space: &SpaceRef, m: usize, rng: &mut TestRng) -> StepGraphon {
    StepGraphon::from_fn(space.clone(), m, |_, _| Ok(distribution(space, rng))).unwrap()
}

/// Each node pair carries a random family function with probability 1/2.
pub fn pattern(fam: &TestFamily, k: usize, rng: &mut TestRng) -> PatternGraph {
    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if rng.gen_bool(0.5) {
                let f = fam.functions().choose(rng).unwrap().clone();
                edges.push((i, j, f));
            }
        }
    }
    PatternGraph::new(fam.space().clone(), k, edges).unwrap()
}

/// Symmetric kernel drawn from one of several value distributions.
pub fn kernel(m: usize, rng: &mut TestRng) -> KernelMatrix {
    let style = rng.gen_range(0..4);
    let mut rows = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i..m {
            let v = match style {
                0 => rng.gen_range(-1.0..1.0),
                1 => {
                    if rng.gen_bool(0.5) {
                        1.0
                    } else {
                        -1.0
                    }
                }
                2 => rng.gen_range(0.0..1.0),
                _ => f64::from(rng.gen_range(-3..=3)) * 0.5,
            };
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    KernelMatrix::from_rows(&rows).unwrap()
}

pub fn complete(n: usize) -> DecoratedGraph {
    let adj: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| u8::from(i != j)).collect()).collect();
    DecoratedGraph::from_simple_graph(&adj, true).unwrap()
}

pub fn permutation(n: usize, rng: &mut TestRng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Random assignment of `m` steps to `q` blocks, every block nonempty.
fn blocks(m: usize, q: usize, rng: &mut TestRng) -> Vec<usize> {
    let mut owner: Vec<usize> = (0..m).map(|i| if i < q { i } else { rng.gen_range(0..q) }).collect();
    owner.shuffle(rng);
    owner
}

/// A block kernel on a hidden partition plus uniform noise.
pub fn planted_kernel(m: usize, rng: &mut TestRng) -> KernelMatrix {
    let q = rng.gen_range(2..=4.min(m));
    let owner = blocks(m, q, rng);
    let mut level = vec![vec![0.0; q]; q];
    for a in 0..q {
        for b in a..q {
            let v = rng.gen_range(-1.0..1.0);
            level[a][b] = v;
            level[b][a] = v;
        }
    }
    let noise = rng.gen_range(0.0..0.2);
    let mut rows = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i..m {
            let v = level[owner[i]][owner[j]] + noise * rng.gen_range(-1.0..1.0);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    KernelMatrix::from_rows(&rows).unwrap()
}

/// A graphon whose cells depend only on hidden blocks of the steps.
pub fn planted_graphon(space: &SpaceRef, m: usize, rng: &mut TestRng) -> StepGraphon {
    let q = rng.gen_range(2..=3.min(m));
    let owner = blocks(m, q, rng);
    let cells: Vec<Vec<KDistribution>> = (0..q)
        .map(|_| (0..q).map(|_| KDistribution::dirac(space.clone(), element(space, rng)).unwrap()).collect())
        .collect();
    StepGraphon::from_fn(space.clone(), m, |i, j| {
        let (a, b) = (owner[i].min(owner[j]), owner[i].max(owner[j]));
        Ok(cells[a][b].clone())
    })
    .unwrap()
}
