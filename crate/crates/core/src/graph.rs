//! Decorated graphs and test-function-decorated pattern graphs.

use std::collections::BTreeMap;

use crate::error::{argument, domain, validation, Result};
use crate::space::{Decoration, DecorationSpace, SpaceKind, SpaceRef, TestFunction};

/// A symmetric `n × n` array of decorations. The diagonal is always stored;
/// a loopless graph has the space's zero element on every diagonal entry.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoratedGraph {
    space: SpaceRef,
    n: usize,
    entries: Vec<Decoration>,
    loopless: bool,
    metadata: BTreeMap<String, String>,
}

impl DecoratedGraph {
    /// Build from a full row-major `n × n` array.
    pub fn new(space: SpaceRef, n: usize, entries: Vec<Decoration>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(validation(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                entries.len()
            )));
        }
        for i in 0..n {
            for j in i..n {
                let e = &entries[i * n + j];
                space.check(e)?;
                if *e != entries[j * n + i] {
                    return Err(validation(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(DecoratedGraph {
            space,
            n,
            entries,
            loopless: false,
            metadata: BTreeMap::new(),
        })
    }

    /// Build from `f(i, j)` evaluated for `i ≤ j`.
    pub fn from_fn(
        space: SpaceRef,
        n: usize,
        mut f: impl FnMut(usize, usize) -> Decoration,
    ) -> Result<Self> {
        let mut upper = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                upper.push(f(i, j));
            }
        }
        Self::from_upper(space, n, upper)
    }

    /// Build from the row-major upper triangle including the diagonal.
    pub fn from_upper(space: SpaceRef, n: usize, upper: Vec<Decoration>) -> Result<Self> {
        if upper.len() != n * (n + 1) / 2 {
            return Err(validation(format!(
                "expected {} upper-triangle entries for n = {n}, got {}",
                n * (n + 1) / 2,
                upper.len()
            )));
        }
        let mut entries = vec![Decoration::Label(0); n * n];
        let mut it = upper.into_iter();
        for i in 0..n {
            for j in i..n {
                let e = it.next().expect("length checked");
                space.check(&e)?;
                entries[i * n + j] = e;
                entries[j * n + i] = e;
            }
        }
        Ok(DecoratedGraph {
            space,
            n,
            entries,
            loopless: false,
            metadata: BTreeMap::new(),
        })
    }

    /// Every entry, diagonal included, equal to `c`.
    pub fn constant(space: SpaceRef, n: usize, c: Decoration) -> Result<Self> {
        space.check(&c)?;
        Ok(DecoratedGraph {
            space,
            n,
            entries: vec![c; n * n],
            loopless: false,
            metadata: BTreeMap::new(),
        })
    }

    /// Encode a 0/1 adjacency matrix over the simple-graph space.
    pub fn from_simple_graph(adjacency: &[Vec<u8>], loopless: bool) -> Result<Self> {
        let n = adjacency.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in adjacency {
            if row.len() != n {
                return Err(validation("adjacency matrix must be square"));
            }
            for &a in row {
                if a > 1 {
                    return Err(validation(format!("adjacency entry {a} is not 0/1")));
                }
                entries.push(Decoration::Label(a as usize));
            }
        }
        let g = DecoratedGraph::new(SpaceRef::new(DecorationSpace::simple()), n, entries)?;
        if loopless {
            g.into_loopless()
        } else {
            Ok(g)
        }
    }

    /// Encode a multigraph with multiplicities `0..=d` over `{0,…,d}`.
    pub fn from_multigraph(multiplicities: &[Vec<u32>], d: u32) -> Result<Self> {
        let n = multiplicities.len();
        let space = SpaceRef::new(DecorationSpace::multigraph(d as usize)?);
        let mut entries = Vec::with_capacity(n * n);
        for row in multiplicities {
            if row.len() != n {
                return Err(validation("multiplicity matrix must be square"));
            }
            for &m in row {
                if m > d {
                    return Err(validation(format!("multiplicity {m} exceeds {d}")));
                }
                entries.push(Decoration::Label(m as usize));
            }
        }
        DecoratedGraph::new(space, n, entries)
    }

    /// Mark the graph loopless, checking that the diagonal is the zero element.
    pub fn into_loopless(mut self) -> Result<Self> {
        let zero = self
            .space
            .zero()
            .ok_or_else(|| validation("loopless graphs need a space with a zero element"))?;
        if (0..self.n).any(|i| self.get(i, i) != zero) {
            return Err(validation("loopless graph has a nonzero diagonal entry"));
        }
        self.loopless = true;
        Ok(self)
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn loopless(&self) -> bool {
        self.loopless
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Decoration {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Decoration] {
        &self.entries
    }

    /// Row-major upper triangle including the diagonal.
    pub fn upper(&self) -> Vec<Decoration> {
        let mut out = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in i..self.n {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// The graph with node `i` renamed `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        let n = self.n;
        let mut entries = vec![self.entries[0]; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[perm[i] * n + perm[j]] = self.get(i, j);
            }
        }
        Ok(DecoratedGraph {
            entries,
            ..self.clone()
        })
    }

    /// `f` applied to every entry, as a dense row-major matrix.
    pub(crate) fn evaluate(&self, f: &TestFunction) -> Vec<f64> {
        self.entries.iter().map(|&c| f.value(c)).collect()
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(argument("permutation has the wrong length"));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(argument("not a permutation"));
        }
        seen[p] = true;
    }
    Ok(())
}

/// A pattern on nodes `0..k` whose edges carry test functions.
///
/// Node pairs without an edge contribute no factor to homomorphism weights,
/// which is the same as decorating them with the constant 1.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternGraph {
    space: SpaceRef,
    k: usize,
    edges: Vec<(usize, usize, TestFunction)>,
}

impl PatternGraph {
    pub fn new(space: SpaceRef, k: usize, edges: Vec<(usize, usize, TestFunction)>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, f) in &edges {
            if i >= j || *j >= k {
                return Err(validation(format!("pattern edge ({i},{j}) must satisfy i < j < {k}")));
            }
            if !seen.insert((*i, *j)) {
                return Err(validation(format!("pattern pair ({i},{j}) decorated twice")));
            }
            if !f.same_space(&space) {
                return Err(domain("pattern edge function lives on another space"));
            }
        }
        Ok(PatternGraph { space, k, edges })
    }

    /// A pattern with no edges.
    pub fn empty(space: SpaceRef, k: usize) -> Self {
        PatternGraph {
            space,
            k,
            edges: Vec::new(),
        }
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[(usize, usize, TestFunction)] {
        &self.edges
    }

    pub fn function(&self, i: usize, j: usize) -> Option<&TestFunction> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.edges
            .iter()
            .find(|(a, b, _)| *a == i && *b == j)
            .map(|(_, _, f)| f)
    }

    /// `∏ sup|f|` over the edges, a bound on every homomorphism weight.
    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|(_, _, f)| f.bound()).product()
    }

    /// Rename node `i` to `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.k)?;
        let edges = self
            .edges
            .iter()
            .map(|(i, j, f)| {
                let (a, b) = (perm[*i], perm[*j]);
                (a.min(b), a.max(b), f.clone())
            })
            .collect();
        PatternGraph::new(self.space.clone(), self.k, edges)
    }

    /// Disjoint union, nodes of `other` shifted by `self.k()`.
    pub fn disjoint_union(&self, other: &PatternGraph) -> Result<Self> {
        if self.space != other.space {
            return Err(domain("patterns live on different spaces"));
        }
        let mut edges = self.edges.clone();
        edges.extend(
            other
                .edges
                .iter()
                .map(|(i, j, f)| (i + self.k, j + self.k, f.clone())),
        );
        PatternGraph::new(self.space.clone(), self.k + other.k, edges)
    }
}

/// The pattern of a multigraph `F`: an edge of multiplicity `m` becomes the
/// function `x ↦ x^m`, so that homomorphism numbers count multigraph
/// homomorphisms. On an interval space this is `Monomial(m)`; on the finite
/// space `{0,…,d}` it is the table `c ↦ c^m` (label index read as a number).
/// Pairs of multiplicity zero carry no function.
pub fn multigraph_pattern(multiplicities: &[Vec<u32>], d: u32, space: &SpaceRef) -> Result<PatternGraph> {
    let k = multiplicities.len();
    let mut edges = Vec::new();
    for i in 0..k {
        if multiplicities[i].len() != k {
            return Err(validation("multiplicity matrix must be square"));
        }
        for j in 0..k {
            let m = multiplicities[i][j];
            if m > d {
                return Err(validation(format!("multiplicity {m} exceeds {d}")));
            }
            if m != multiplicities[j][i] {
                return Err(validation("multiplicity matrix must be symmetric"));
            }
            if i == j && m != 0 {
                return Err(validation("patterns cannot have loops"));
            }
            if i < j && m > 0 {
                let f = match space.kind() {
                    SpaceKind::Interval { .. } => TestFunction::monomial(space.clone(), m)?,
                    SpaceKind::Finite { elements } => {
                        if elements.len() != d as usize + 1 {
                            return Err(domain(format!(
                                "multigraph pattern with d = {d} needs a finite space of {} elements",
                                d + 1
                            )));
                        }
                        let values = (0..=d).map(|c| f64::from(c).powi(m as i32)).collect();
                        TestFunction::table(space.clone(), values)?
                    }
                    SpaceKind::FiniteProduct { .. } => {
                        return Err(domain("multigraph patterns need an interval or {0..d} space"))
                    }
                };
                edges.push((i, j, f));
            }
        }
    }
    PatternGraph::new(space.clone(), k, edges)
}
