//! Decoration spaces, test functions on them, and finite-support distributions.
//!
//! Three kinds of compact decoration space are supported: a finite set of
//! labels, a closed real interval, and the finite product `{0,1}^b`. Elements
//! are represented by [`Decoration`], whose variant must match the space kind.
//!
//! Distributions are compared only through test-function integrals; no metric
//! on the underlying space is ever used.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{argument, domain, validation, Result};

/// Largest supported width of a finite product space.
pub const MAX_PRODUCT_BITS: u32 = 24;

/// Weights of a distribution must sum to one within this tolerance.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Interval support points closer than this are merged.
pub const MERGE_TOL: f64 = 1e-14;

/// An element of a decoration space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decoration {
    /// Index into the labels of a finite space.
    Label(usize),
    /// A point of an interval space.
    Real(f64),
    /// A bit vector of a finite product space; bit `i` is coordinate `i`.
    Bits(u32),
}

impl Decoration {
    pub fn total_cmp(&self, other: &Decoration) -> Ordering {
        use Decoration::*;
        match (self, other) {
            (Label(a), Label(b)) => a.cmp(b),
            (Real(a), Real(b)) => a.total_cmp(b),
            (Bits(a), Bits(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Decoration::Label(_) => 0,
            Decoration::Real(_) => 1,
            Decoration::Bits(_) => 2,
        }
    }

    /// Integer code of a finite-type element (label index or bit mask).
    pub fn code(&self) -> Option<u32> {
        match *self {
            Decoration::Label(i) => u32::try_from(i).ok(),
            Decoration::Bits(b) => Some(b),
            Decoration::Real(_) => None,
        }
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decoration::Label(i) => write!(f, "#{i}"),
            Decoration::Real(x) => write!(f, "{x}"),
            Decoration::Bits(b) => write!(f, "{b:#b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpaceKind {
    Finite { elements: Vec<String> },
    Interval { lo: f64, hi: f64 },
    /// `{0,1}^bits`. `truncated` records that the space stands in for a
    /// countable product cut off at `bits` coordinates.
    FiniteProduct { bits: u32, truncated: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecorationSpace {
    kind: SpaceKind,
    zero: Option<Decoration>,
}

pub type SpaceRef = Arc<DecorationSpace>;

impl DecorationSpace {
    pub fn finite<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let elements: Vec<String> = labels.into_iter().map(Into::into).collect();
        if elements.is_empty() {
            return Err(validation("finite space needs at least one element"));
        }
        let mut sorted = elements.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != elements.len() {
            return Err(validation("finite space labels must be distinct"));
        }
        Ok(DecorationSpace {
            kind: SpaceKind::Finite { elements },
            zero: None,
        })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(validation(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(DecorationSpace {
            kind: SpaceKind::Interval { lo, hi },
            zero: None,
        })
    }

    pub fn product(bits: u32) -> Result<Self> {
        Self::product_with(bits, false)
    }

    /// A product space that truncates `{0,1}^N` to its first `bits` coordinates.
    pub fn truncated_product(bits: u32) -> Result<Self> {
        Self::product_with(bits, true)
    }

    fn product_with(bits: u32, truncated: bool) -> Result<Self> {
        if bits == 0 || bits > MAX_PRODUCT_BITS {
            return Err(validation(format!(
                "product space width must be in 1..={MAX_PRODUCT_BITS}, got {bits}"
            )));
        }
        Ok(DecorationSpace {
            kind: SpaceKind::FiniteProduct { bits, truncated },
            zero: None,
        })
    }

    /// Simple graphs: `{non-edge, edge}` with zero = non-edge.
    pub fn simple() -> Self {
        DecorationSpace::finite(["non-edge", "edge"])
            .and_then(|s| s.with_zero(Decoration::Label(0)))
            .expect("static space")
    }

    /// `c` edge colors labelled `"0".."c-1"`, color 0 being the missing edge.
    pub fn colors(c: usize) -> Result<Self> {
        DecorationSpace::finite((0..c).map(|i| i.to_string()))?.with_zero(Decoration::Label(0))
    }

    /// Multigraphs with multiplicities `0..=d`; label index equals multiplicity.
    pub fn multigraph(d: usize) -> Result<Self> {
        Self::colors(d + 1)
    }

    pub fn with_zero(mut self, zero: Decoration) -> Result<Self> {
        self.check(&zero)?;
        self.zero = Some(zero);
        Ok(self)
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn zero(&self) -> Option<Decoration> {
        self.zero
    }

    pub fn is_finite_type(&self) -> bool {
        !matches!(self.kind, SpaceKind::Interval { .. })
    }

    /// Number of elements for finite-type spaces.
    pub fn cardinality(&self) -> Option<usize> {
        match &self.kind {
            SpaceKind::Finite { elements } => Some(elements.len()),
            SpaceKind::FiniteProduct { bits, .. } => Some(1usize << bits),
            SpaceKind::Interval { .. } => None,
        }
    }

    pub fn contains(&self, c: &Decoration) -> bool {
        match (&self.kind, *c) {
            (SpaceKind::Finite { elements }, Decoration::Label(i)) => i < elements.len(),
            (SpaceKind::Interval { lo, hi }, Decoration::Real(x)) => x.is_finite() && *lo <= x && x <= *hi,
            (SpaceKind::FiniteProduct { bits, .. }, Decoration::Bits(b)) => u64::from(b) < (1u64 << bits),
            _ => false,
        }
    }

    pub fn check(&self, c: &Decoration) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(domain(format!("element {c} does not belong to {}", self.describe())))
        }
    }

    /// Element with the given finite-type code.
    pub fn from_code(&self, code: u32) -> Result<Decoration> {
        let c = match self.kind {
            SpaceKind::Finite { .. } => Decoration::Label(code as usize),
            SpaceKind::FiniteProduct { .. } => Decoration::Bits(code),
            SpaceKind::Interval { .. } => {
                return Err(domain("interval spaces have no integer codes"));
            }
        };
        self.check(&c)?;
        Ok(c)
    }

    /// All elements of a finite-type space, in code order.
    pub fn elements(&self) -> Result<Vec<Decoration>> {
        match self.cardinality() {
            Some(n) => (0..n as u32).map(|c| self.from_code(c)).collect(),
            None => Err(domain("interval spaces cannot be enumerated")),
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            SpaceKind::Finite { elements } => format!("finite space of {} elements", elements.len()),
            SpaceKind::Interval { lo, hi } => format!("interval [{lo}, {hi}]"),
            SpaceKind::FiniteProduct { bits, .. } => format!("product space {{0,1}}^{bits}"),
        }
    }
}

/// The shape of a test function, independent of its space.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionForm {
    /// One value per element of a finite space.
    Table(Vec<f64>),
    /// `x ↦ x^degree` on an interval.
    Monomial(u32),
    /// On `{0,1}^b`: 1 iff every set bit of the support is set in the argument.
    ProductIndicator(u32),
    Constant(f64),
    LinearCombination(Vec<(f64, FunctionForm)>),
}

impl FunctionForm {
    fn validate(&self, space: &DecorationSpace) -> Result<()> {
        match (self, space.kind()) {
            (FunctionForm::Table(values), SpaceKind::Finite { elements }) => {
                if values.len() != elements.len() {
                    return Err(domain(format!(
                        "table has {} values for {} elements",
                        values.len(),
                        elements.len()
                    )));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(validation("table values must be finite"));
                }
                Ok(())
            }
            (FunctionForm::Table(_), _) => Err(domain("table functions live on finite spaces")),
            (FunctionForm::Monomial(_), SpaceKind::Interval { .. }) => Ok(()),
            (FunctionForm::Monomial(_), _) => Err(domain("monomials live on interval spaces")),
            (FunctionForm::ProductIndicator(x), SpaceKind::FiniteProduct { bits, .. }) => {
                if u64::from(*x) >= 1u64 << bits {
                    Err(domain(format!("support {x:#b} wider than {bits} bits")))
                } else {
                    Ok(())
                }
            }
            (FunctionForm::ProductIndicator(_), _) => {
                Err(domain("product indicators live on product spaces"))
            }
            (FunctionForm::Constant(c), _) => {
                if c.is_finite() {
                    Ok(())
                } else {
                    Err(validation("constant must be finite"))
                }
            }
            (FunctionForm::LinearCombination(terms), _) => {
                for (a, g) in terms {
                    if !a.is_finite() {
                        return Err(validation("coefficients must be finite"));
                    }
                    g.validate(space)?;
                }
                Ok(())
            }
        }
    }

    /// Evaluate at an element already known to belong to the space.
    fn value(&self, c: Decoration) -> f64 {
        match (self, c) {
            (FunctionForm::Table(values), Decoration::Label(i)) => values[i],
            (FunctionForm::Monomial(d), Decoration::Real(x)) => pow(x, *d),
            (FunctionForm::ProductIndicator(x), Decoration::Bits(b)) => {
                if x & !b == 0 {
                    1.0
                } else {
                    0.0
                }
            }
            (FunctionForm::Constant(v), _) => *v,
            (FunctionForm::LinearCombination(terms), _) => {
                terms.iter().map(|(a, g)| a * g.value(c)).sum()
            }
            _ => unreachable!("element kind checked by caller"),
        }
    }

    /// An upper bound for `sup |f|` (exact for everything but linear
    /// combinations on infinite spaces).
    fn sup_bound(&self, space: &DecorationSpace) -> f64 {
        match (self, space.kind()) {
            (FunctionForm::Table(values), _) => values.iter().fold(0.0, |m, v| m.max(v.abs())),
            (FunctionForm::Monomial(d), SpaceKind::Interval { lo, hi }) => {
                pow(lo.abs(), *d).max(pow(hi.abs(), *d))
            }
            (FunctionForm::ProductIndicator(_), _) => 1.0,
            (FunctionForm::Constant(c), _) => c.abs(),
            (FunctionForm::LinearCombination(_), SpaceKind::Finite { elements }) => (0..elements
                .len())
                .map(|i| self.value(Decoration::Label(i)).abs())
                .fold(0.0, f64::max),
            (FunctionForm::LinearCombination(_), SpaceKind::FiniteProduct { bits, .. })
                if *bits <= 16 =>
            {
                (0..1u32 << bits)
                    .map(|b| self.value(Decoration::Bits(b)).abs())
                    .fold(0.0, f64::max)
            }
            (FunctionForm::LinearCombination(terms), _) => {
                terms.iter().map(|(a, g)| a.abs() * g.sup_bound(space)).sum()
            }
            (FunctionForm::Monomial(_), _) => unreachable!("validated"),
        }
    }
}

/// `x^d` by repeated multiplication, so that results are reproducible.
fn pow(x: f64, d: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..d {
        acc *= x;
    }
    acc
}

/// A bounded real function on a decoration space.
#[derive(Clone, Debug)]
pub struct TestFunction {
    space: SpaceRef,
    form: FunctionForm,
    bound: f64,
}

impl PartialEq for TestFunction {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.space, &other.space) || self.space == other.space)
            && self.form == other.form
    }
}

impl TestFunction {
    pub fn new(space: SpaceRef, form: FunctionForm) -> Result<Self> {
        form.validate(&space)?;
        let bound = form.sup_bound(&space);
        Ok(TestFunction { space, form, bound })
    }

    pub fn table(space: SpaceRef, values: Vec<f64>) -> Result<Self> {
        Self::new(space, FunctionForm::Table(values))
    }

    /// Indicator of the finite element with label index `index`.
    pub fn indicator(space: SpaceRef, index: usize) -> Result<Self> {
        let n = match space.kind() {
            SpaceKind::Finite { elements } => elements.len(),
            _ => return Err(domain("indicators by label need a finite space")),
        };
        if index >= n {
            return Err(domain(format!("label index {index} out of range")));
        }
        let mut values = vec![0.0; n];
        values[index] = 1.0;
        Self::table(space, values)
    }

    pub fn monomial(space: SpaceRef, degree: u32) -> Result<Self> {
        Self::new(space, FunctionForm::Monomial(degree))
    }

    pub fn product_indicator(space: SpaceRef, support: u32) -> Result<Self> {
        Self::new(space, FunctionForm::ProductIndicator(support))
    }

    pub fn constant(space: SpaceRef, c: f64) -> Result<Self> {
        Self::new(space, FunctionForm::Constant(c))
    }

    pub fn linear_combination(space: SpaceRef, terms: Vec<(f64, TestFunction)>) -> Result<Self> {
        let mut forms = Vec::with_capacity(terms.len());
        for (a, g) in terms {
            if !g.same_space(&space) {
                return Err(domain("linear combination mixes spaces"));
            }
            forms.push((a, g.form));
        }
        Self::new(space, FunctionForm::LinearCombination(forms))
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn form(&self) -> &FunctionForm {
        &self.form
    }

    /// Stored upper bound on `sup |f|`.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn is_constant_one(&self) -> bool {
        self.form == FunctionForm::Constant(1.0)
    }

    pub(crate) fn same_space(&self, space: &DecorationSpace) -> bool {
        std::ptr::eq(Arc::as_ptr(&self.space), space) || *self.space == *space
    }

    pub fn eval(&self, c: &Decoration) -> Result<f64> {
        self.space.check(c)?;
        Ok(self.form.value(*c))
    }

    /// Evaluate without checking membership; `c` must belong to the space.
    pub(crate) fn value(&self, c: Decoration) -> f64 {
        self.form.value(c)
    }

    pub fn integrate(&self, mu: &KDistribution) -> Result<f64> {
        integrate(self, mu)
    }
}

/// `f(c)`, checking that `c` belongs to the function's space.
pub fn eval(f: &TestFunction, c: &Decoration) -> Result<f64> {
    f.eval(c)
}

/// `∫ f dμ` for a finite-support distribution.
pub fn integrate(f: &TestFunction, mu: &KDistribution) -> Result<f64> {
    if !f.same_space(&mu.space) {
        return Err(domain("function and distribution live on different spaces"));
    }
    Ok(mu.expect(f))
}

/// Parameters for [`default_family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    /// Largest monomial degree for interval spaces.
    pub max_degree: u32,
    /// Largest number of set bits in a product-indicator support.
    pub max_support: u32,
}

impl Default for FamilyParams {
    fn default() -> Self {
        FamilyParams {
            max_degree: 2,
            max_support: 2,
        }
    }
}

/// Cap on the size of an enumerated family.
const MAX_FAMILY: usize = 1 << 20;

/// An ordered, finite list of test functions on one space.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFamily {
    space: SpaceRef,
    functions: Vec<TestFunction>,
}

impl TestFamily {
    pub fn new(space: SpaceRef, functions: Vec<TestFunction>) -> Result<Self> {
        if functions.iter().any(|f| !f.same_space(&space)) {
            return Err(domain("family functions must share the family's space"));
        }
        Ok(TestFamily { space, functions })
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn functions(&self) -> &[TestFunction] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn position(&self, f: &TestFunction) -> Option<usize> {
        self.functions.iter().position(|g| g == f)
    }

    /// The first `t` functions.
    pub fn truncate(&self, t: usize) -> TestFamily {
        TestFamily {
            space: self.space.clone(),
            functions: self.functions.iter().take(t).cloned().collect(),
        }
    }

    /// True when this is exactly one indicator per element of a finite
    /// space (in any order).
    pub fn indicator_labels(&self) -> Option<Vec<usize>> {
        let n = match self.space.kind() {
            SpaceKind::Finite { elements } => elements.len(),
            _ => return None,
        };
        if self.functions.len() != n {
            return None;
        }
        let mut labels = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for f in &self.functions {
            let FunctionForm::Table(values) = f.form() else {
                return None;
            };
            let ones: Vec<usize> = (0..n).filter(|&i| values[i] == 1.0).collect();
            let zeros = values.iter().filter(|&&v| v == 0.0).count();
            if ones.len() != 1 || zeros != n - 1 || seen[ones[0]] {
                return None;
            }
            seen[ones[0]] = true;
            labels.push(ones[0]);
        }
        Some(labels)
    }
}

/// The built-in generating family of a space.
///
/// Canonical orders: finite spaces give one indicator per label in label
/// order; intervals give `1, x, …, x^D`; product spaces give one product
/// indicator per support mask with at most `B` set bits, in ascending mask
/// value.
pub fn default_family(space: &SpaceRef, params: FamilyParams) -> Result<TestFamily> {
    let functions = match space.kind() {
        SpaceKind::Finite { elements } => (0..elements.len())
            .map(|i| TestFunction::indicator(space.clone(), i))
            .collect::<Result<Vec<_>>>()?,
        SpaceKind::Interval { .. } => (0..=params.max_degree)
            .map(|d| TestFunction::monomial(space.clone(), d))
            .collect::<Result<Vec<_>>>()?,
        SpaceKind::FiniteProduct { bits, .. } => {
            if params.max_support > *bits {
                return Err(argument(format!(
                    "support size {} exceeds {bits} bits",
                    params.max_support
                )));
            }
            let count: usize = (0..=params.max_support)
                .map(|j| binomial(*bits as usize, j as usize))
                .sum();
            if count > MAX_FAMILY {
                return Err(argument(format!("family of {count} functions is too large")));
            }
            (0..1u32 << bits)
                .filter(|x| x.count_ones() <= params.max_support)
                .map(|x| TestFunction::product_indicator(space.clone(), x))
                .collect::<Result<Vec<_>>>()?
        }
    };
    TestFamily::new(space.clone(), functions)
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A probability measure on a decoration space with finite support.
///
/// Support points are kept sorted and merged, so two distributions built from
/// the same weighted points compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct KDistribution {
    space: SpaceRef,
    support: Vec<(Decoration, f64)>,
}

impl KDistribution {
    pub fn new(space: SpaceRef, support: Vec<(Decoration, f64)>) -> Result<Self> {
        for (c, w) in &support {
            space.check(c)?;
            if !w.is_finite() || *w < 0.0 {
                return Err(validation(format!("weight {w} must be finite and nonnegative")));
            }
        }
        let total: f64 = support.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(validation(format!("weights sum to {total}, expected 1")));
        }
        Ok(KDistribution {
            space,
            support: canonical_support(support),
        })
    }

    pub fn dirac(space: SpaceRef, c: Decoration) -> Result<Self> {
        space.check(&c)?;
        Ok(KDistribution {
            space,
            support: vec![(c, 1.0)],
        })
    }

    /// Uniform distribution on all elements of a finite-type space.
    pub fn uniform(space: SpaceRef) -> Result<Self> {
        let elements = space.elements()?;
        let w = 1.0 / elements.len() as f64;
        let support = elements.into_iter().map(|c| (c, w)).collect();
        Ok(KDistribution {
            space,
            support: canonical_support(support),
        })
    }

    /// `p·δ_one + (1-p)·δ_zero`.
    pub fn bernoulli(space: SpaceRef, zero: Decoration, one: Decoration, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(validation(format!("probability {p} outside [0,1]")));
        }
        Self::new(space, vec![(zero, 1.0 - p), (one, p)])
    }

    /// Convex combination `Σ λ_i μ_i`; the `λ_i` are renormalized to sum to one.
    pub fn mixture<'a>(
        space: SpaceRef,
        parts: impl IntoIterator<Item = (f64, &'a KDistribution)>,
    ) -> Result<Self> {
        let mut support = Vec::new();
        let mut total = 0.0;
        for (lambda, mu) in parts {
            if !lambda.is_finite() || lambda < 0.0 {
                return Err(validation("mixture weights must be nonnegative"));
            }
            if !(Arc::ptr_eq(&space, &mu.space) || space == mu.space) {
                return Err(domain("mixture components live on different spaces"));
            }
            total += lambda;
            support.extend(mu.support.iter().map(|&(c, w)| (c, lambda * w)));
        }
        if total <= 0.0 {
            return Err(validation("mixture needs positive total weight"));
        }
        for (_, w) in support.iter_mut() {
            *w /= total;
        }
        Ok(KDistribution {
            space,
            support: canonical_support(support),
        })
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn support(&self) -> &[(Decoration, f64)] {
        &self.support
    }

    /// `Σ w_i f(c_i)` without the space check.
    pub(crate) fn expect(&self, f: &TestFunction) -> f64 {
        self.support.iter().map(|&(c, w)| w * f.value(c)).sum()
    }

    /// Inverse-CDF draw from a uniform variate `u ∈ [0,1)`.
    pub fn draw(&self, u: f64) -> Decoration {
        let mut acc = 0.0;
        for &(c, w) in &self.support {
            acc += w;
            if u < acc {
                return c;
            }
        }
        self.support
            .iter()
            .rev()
            .find(|(_, w)| *w > 0.0)
            .map(|&(c, _)| c)
            .unwrap_or(self.support[0].0)
    }

    /// The single support point, if this is a point mass.
    pub fn as_dirac(&self) -> Option<Decoration> {
        match self.support.as_slice() {
            [(c, _)] => Some(*c),
            _ => None,
        }
    }
}

fn canonical_support(mut support: Vec<(Decoration, f64)>) -> Vec<(Decoration, f64)> {
    support.retain(|(_, w)| *w > 0.0);
    support.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(Decoration, f64)> = Vec::with_capacity(support.len());
    for (c, w) in support {
        match merged.last_mut() {
            Some((last, acc)) if same_point(last, &c) => *acc += w,
            _ => merged.push((c, w)),
        }
    }
    merged
}

fn same_point(a: &Decoration, b: &Decoration) -> bool {
    match (a, b) {
        (Decoration::Real(x), Decoration::Real(y)) => (x - y).abs() <= MERGE_TOL,
        _ => a == b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(s: DecorationSpace) -> SpaceRef {
        Arc::new(s)
    }

    #[test]
    fn eval_examples() {
        let s = arc(DecorationSpace::finite(["0", "1"]).unwrap());
        let f1 = TestFunction::table(s.clone(), vec![0.0, 1.0]).unwrap();
        assert_eq!(f1.eval(&Decoration::Label(1)).unwrap(), 1.0);

        let one = TestFunction::constant(s.clone(), 1.0).unwrap();
        assert_eq!(one.eval(&Decoration::Label(0)).unwrap(), 1.0);

        let iv = arc(DecorationSpace::interval(0.0, 2.0).unwrap());
        let cube = TestFunction::monomial(iv.clone(), 3).unwrap();
        assert_eq!(cube.eval(&Decoration::Real(0.5)).unwrap(), 0.125);
        assert_eq!(cube.bound(), 8.0);
    }

    #[test]
    fn eval_rejects_foreign_elements() {
        let s = arc(DecorationSpace::finite(["a", "b"]).unwrap());
        let f = TestFunction::indicator(s, 0).unwrap();
        assert!(f.eval(&Decoration::Label(2)).is_err());
        assert!(f.eval(&Decoration::Real(0.0)).is_err());
        let iv = arc(DecorationSpace::interval(0.0, 1.0).unwrap());
        let x = TestFunction::monomial(iv, 1).unwrap();
        assert!(x.eval(&Decoration::Real(1.5)).is_err());
    }

    #[test]
    fn forms_must_match_space_kind() {
        let s = arc(DecorationSpace::finite(["a", "b"]).unwrap());
        assert!(TestFunction::monomial(s.clone(), 1).is_err());
        assert!(TestFunction::product_indicator(s.clone(), 1).is_err());
        assert!(TestFunction::table(s, vec![1.0]).is_err());
        let p = arc(DecorationSpace::product(2).unwrap());
        assert!(TestFunction::product_indicator(p, 4).is_err());
    }

    #[test]
    fn integrate_examples() {
        let s = arc(DecorationSpace::colors(3).unwrap());
        let mu = KDistribution::uniform(s.clone()).unwrap();
        let f = TestFunction::indicator(s, 2).unwrap();
        assert!((integrate(&f, &mu).unwrap() - 1.0 / 3.0).abs() < 1e-15);

        let iv = arc(DecorationSpace::interval(0.0, 1.0).unwrap());
        let x = TestFunction::monomial(iv.clone(), 1).unwrap();
        let delta = KDistribution::dirac(iv, Decoration::Real(0.7)).unwrap();
        assert_eq!(integrate(&x, &delta).unwrap(), 0.7);

        let b = arc(DecorationSpace::finite(["0", "1"]).unwrap());
        let f1 = TestFunction::table(b.clone(), vec![0.0, 1.0]).unwrap();
        let mu = KDistribution::new(b, vec![(Decoration::Label(0), 0.25), (Decoration::Label(1), 0.75)])
            .unwrap();
        assert_eq!(integrate(&f1, &mu).unwrap(), 0.75);
    }

    #[test]
    fn integrate_space_mismatch() {
        let a = arc(DecorationSpace::colors(2).unwrap());
        let b = arc(DecorationSpace::colors(3).unwrap());
        let f = TestFunction::indicator(a, 0).unwrap();
        let mu = KDistribution::uniform(b).unwrap();
        assert!(integrate(&f, &mu).is_err());
    }

    #[test]
    fn default_family_examples() {
        let s = arc(DecorationSpace::finite(["0", "1"]).unwrap());
        let fam = default_family(&s, FamilyParams::default()).unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam.functions()[0].form(), &FunctionForm::Table(vec![1.0, 0.0]));
        assert_eq!(fam.functions()[1].form(), &FunctionForm::Table(vec![0.0, 1.0]));

        let iv = arc(DecorationSpace::interval(0.0, 1.0).unwrap());
        let fam = default_family(
            &iv,
            FamilyParams {
                max_degree: 2,
                max_support: 0,
            },
        )
        .unwrap();
        let degrees: Vec<_> = fam.functions().iter().map(|f| f.form().clone()).collect();
        assert_eq!(
            degrees,
            vec![FunctionForm::Monomial(0), FunctionForm::Monomial(1), FunctionForm::Monomial(2)]
        );

        let p = arc(DecorationSpace::product(2).unwrap());
        let fam = default_family(
            &p,
            FamilyParams {
                max_degree: 0,
                max_support: 2,
            },
        )
        .unwrap();
        assert_eq!(fam.len(), 4);
        assert!(default_family(
            &p,
            FamilyParams {
                max_degree: 0,
                max_support: 3
            }
        )
        .is_err());
    }

    #[test]
    fn product_indicator_exhaustive() {
        for bits in 1..=8u32 {
            let p = arc(DecorationSpace::product(bits).unwrap());
            for x in 0..1u32 << bits {
                let f = TestFunction::product_indicator(p.clone(), x).unwrap();
                for c in 0..1u32 << bits {
                    let implied = (0..bits).all(|i| (x >> i) & 1 == 0 || (c >> i) & 1 == 1);
                    let v = f.eval(&Decoration::Bits(c)).unwrap();
                    assert_eq!(v == 1.0, implied);
                }
            }
        }
    }

    #[test]
    fn distribution_validation() {
        let s = arc(DecorationSpace::colors(2).unwrap());
        assert!(KDistribution::new(s.clone(), vec![(Decoration::Label(0), 0.5)]).is_err());
        assert!(KDistribution::new(
            s.clone(),
            vec![(Decoration::Label(0), 1.5), (Decoration::Label(1), -0.5)]
        )
        .is_err());
        let iv = arc(DecorationSpace::interval(0.0, 1.0).unwrap());
        assert!(KDistribution::dirac(iv, Decoration::Real(2.0)).is_err());
    }

    #[test]
    fn mixtures_merge_support() {
        let iv = arc(DecorationSpace::interval(0.0, 1.0).unwrap());
        let a = KDistribution::dirac(iv.clone(), Decoration::Real(0.5)).unwrap();
        let b = KDistribution::dirac(iv.clone(), Decoration::Real(0.5 + 1e-16)).unwrap();
        let c = KDistribution::dirac(iv.clone(), Decoration::Real(0.25)).unwrap();
        let mix = KDistribution::mixture(iv, [(1.0, &a), (1.0, &b), (2.0, &c)]).unwrap();
        assert_eq!(mix.support().len(), 2);
        assert_eq!(mix.support()[0], (Decoration::Real(0.25), 0.5));
    }

    #[test]
    fn space_validation() {
        assert!(DecorationSpace::finite(Vec::<String>::new()).is_err());
        assert!(DecorationSpace::finite(["a", "a"]).is_err());
        assert!(DecorationSpace::interval(1.0, 1.0).is_err());
        assert!(DecorationSpace::interval(0.0, f64::INFINITY).is_err());
        assert!(DecorationSpace::product(0).is_err());
        assert!(DecorationSpace::product(25).is_err());
        assert!(DecorationSpace::truncated_product(24).is_ok());
    }

    #[test]
    fn linear_combination_bound() {
        let s = arc(DecorationSpace::colors(3).unwrap());
        let f = TestFunction::indicator(s.clone(), 0).unwrap();
        let g = TestFunction::indicator(s.clone(), 1).unwrap();
        let h = TestFunction::linear_combination(s, vec![(2.0, f), (-3.0, g)]).unwrap();
        assert_eq!(h.bound(), 3.0);
        assert_eq!(h.eval(&Decoration::Label(1)).unwrap(), -3.0);
    }
}
