//! JSON documents for every public type.
//!
//! Decorations are written as plain numbers: the label index of a finite
//! space, the point of an interval, or the bitmask of a product space.
//! Symmetric arrays store their upper triangle row by row, diagonal included.
//! Floats are printed with 17 significant digits (C's `%.17g`), so every
//! value survives a round trip bit for bit.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{validation, Error, Result};
use crate::graph::{DecoratedGraph, PatternGraph};
use crate::graphon::{KernelMatrix, MomentFunctionSequence, StepGraphon};
use crate::regularity::StepPartition;
use crate::sampling::SampleDistribution;
use crate::space::{
    Decoration, DecorationSpace, FunctionForm, KDistribution, SpaceKind, SpaceRef, TestFamily, TestFunction,
};

/// `%.17g`: 17 significant digits, trailing zeros removed, exponent form
/// outside `1e-4 ≤ |x| < 1e17`.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{x:.*}", (16 - exp) as usize)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Compact JSON with [`format_number`] floats.
#[derive(Clone, Copy, Debug, Default)]
pub struct NumberFormatter;

impl serde_json::ser::Formatter for NumberFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(format_number(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serialize any value with [`NumberFormatter`], newline-terminated.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, NumberFormatter);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// A type with a JSON document form.
pub trait Document: Sized {
    type Repr: Serialize + DeserializeOwned;
    fn to_repr(&self) -> Self::Repr;
    fn from_repr(repr: Self::Repr) -> Result<Self>;
}

pub fn to_string<T: Document>(value: &T) -> Result<String> {
    to_json(&value.to_repr())
}

pub fn from_str<T: Document>(text: &str) -> Result<T> {
    T::from_repr(serde_json::from_str(text)?)
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load<T: Document>(path: &Path) -> Result<T> {
    from_str(&read_text(path)?)
}

pub fn save<T: Document>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_string(value)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceRepr {
    Finite {
        elements: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zero: Option<usize>,
    },
    Interval {
        lo: f64,
        hi: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zero: Option<f64>,
    },
    Product {
        bits: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        zero: Option<u32>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        truncated: bool,
    },
}

impl Document for DecorationSpace {
    type Repr = SpaceRepr;

    fn to_repr(&self) -> SpaceRepr {
        match self.kind() {
            SpaceKind::Finite { elements } => SpaceRepr::Finite {
                elements: elements.clone(),
                zero: match self.zero() {
                    Some(Decoration::Label(i)) => Some(i),
                    _ => None,
                },
            },
            SpaceKind::Interval { lo, hi } => SpaceRepr::Interval {
                lo: *lo,
                hi: *hi,
                zero: match self.zero() {
                    Some(Decoration::Real(x)) => Some(x),
                    _ => None,
                },
            },
            SpaceKind::FiniteProduct { bits, truncated } => SpaceRepr::Product {
                bits: *bits,
                zero: match self.zero() {
                    Some(Decoration::Bits(b)) => Some(b),
                    _ => None,
                },
                truncated: *truncated,
            },
        }
    }

    fn from_repr(repr: SpaceRepr) -> Result<Self> {
        let (space, zero) = match repr {
            SpaceRepr::Finite { elements, zero } => {
                (DecorationSpace::finite(elements)?, zero.map(Decoration::Label))
            }
            SpaceRepr::Interval { lo, hi, zero } => (DecorationSpace::interval(lo, hi)?, zero.map(Decoration::Real)),
            SpaceRepr::Product { bits, zero, truncated } => {
                let s = if truncated {
                    DecorationSpace::truncated_product(bits)?
                } else {
                    DecorationSpace::product(bits)?
                };
                (s, zero.map(Decoration::Bits))
            }
        };
        match zero {
            Some(z) => space.with_zero(z),
            None => Ok(space),
        }
    }
}

fn decode_space(repr: SpaceRepr) -> Result<SpaceRef> {
    Ok(SpaceRef::new(DecorationSpace::from_repr(repr)?))
}

pub fn encode_element(c: Decoration) -> Value {
    match c {
        Decoration::Label(i) => Value::from(i as u64),
        Decoration::Real(x) => Value::from(x),
        Decoration::Bits(b) => Value::from(b),
    }
}

pub fn decode_element(space: &DecorationSpace, v: &Value) -> Result<Decoration> {
    let bad = || validation(format!("{v} is not an element of the {}", space.describe()));
    let c = match space.kind() {
        SpaceKind::Finite { .. } => Decoration::Label(v.as_u64().ok_or_else(bad)? as usize),
        SpaceKind::Interval { .. } => Decoration::Real(v.as_f64().ok_or_else(bad)?),
        SpaceKind::FiniteProduct { .. } => {
            Decoration::Bits(v.as_u64().and_then(|b| u32::try_from(b).ok()).ok_or_else(bad)?)
        }
    };
    space.check(&c)?;
    Ok(c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionRepr {
    Table(Vec<f64>),
    Monomial(u32),
    ProductIndicator(u32),
    Constant(f64),
    Linear(Vec<(f64, FunctionRepr)>),
}

fn encode_form(form: &FunctionForm) -> FunctionRepr {
    match form {
        FunctionForm::Table(v) => FunctionRepr::Table(v.clone()),
        FunctionForm::Monomial(d) => FunctionRepr::Monomial(*d),
        FunctionForm::ProductIndicator(s) => FunctionRepr::ProductIndicator(*s),
        FunctionForm::Constant(c) => FunctionRepr::Constant(*c),
        FunctionForm::LinearCombination(terms) => {
            FunctionRepr::Linear(terms.iter().map(|(a, f)| (*a, encode_form(f))).collect())
        }
    }
}

fn decode_form(repr: FunctionRepr) -> FunctionForm {
    match repr {
        FunctionRepr::Table(v) => FunctionForm::Table(v),
        FunctionRepr::Monomial(d) => FunctionForm::Monomial(d),
        FunctionRepr::ProductIndicator(s) => FunctionForm::ProductIndicator(s),
        FunctionRepr::Constant(c) => FunctionForm::Constant(c),
        FunctionRepr::Linear(terms) => {
            FunctionForm::LinearCombination(terms.into_iter().map(|(a, f)| (a, decode_form(f))).collect())
        }
    }
}

pub fn encode_function(f: &TestFunction) -> FunctionRepr {
    encode_form(f.form())
}

pub fn decode_function(space: &SpaceRef, repr: FunctionRepr) -> Result<TestFunction> {
    TestFunction::new(space.clone(), decode_form(repr))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyRepr {
    pub space: SpaceRepr,
    pub functions: Vec<FunctionRepr>,
}

impl Document for TestFamily {
    type Repr = FamilyRepr;

    fn to_repr(&self) -> FamilyRepr {
        FamilyRepr {
            space: self.space().to_repr(),
            functions: self.functions().iter().map(encode_function).collect(),
        }
    }

    fn from_repr(repr: FamilyRepr) -> Result<Self> {
        let space = decode_space(repr.space)?;
        let functions = repr
            .functions
            .into_iter()
            .map(|f| decode_function(&space, f))
            .collect::<Result<_>>()?;
        TestFamily::new(space, functions)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRepr {
    pub space: SpaceRepr,
    pub n: usize,
    pub entries: Vec<Value>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub loopless: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

impl Document for DecoratedGraph {
    type Repr = GraphRepr;

    fn to_repr(&self) -> GraphRepr {
        GraphRepr {
            space: self.space().to_repr(),
            n: self.n(),
            entries: self.upper().into_iter().map(encode_element).collect(),
            loopless: self.loopless(),
            metadata: self.metadata().clone(),
        }
    }

    fn from_repr(repr: GraphRepr) -> Result<Self> {
        let space = decode_space(repr.space)?;
        let upper = repr
            .entries
            .iter()
            .map(|v| decode_element(&space, v))
            .collect::<Result<_>>()?;
        let mut g = DecoratedGraph::from_upper(space, repr.n, upper)?;
        if repr.loopless {
            g = g.into_loopless()?;
        }
        Ok(repr
            .metadata
            .into_iter()
            .fold(g, |g, (k, v)| g.with_metadata(k, v)))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternRepr {
    pub space: SpaceRepr,
    pub k: usize,
    pub edges: Vec<(usize, usize, FunctionRepr)>,
}

impl Document for PatternGraph {
    type Repr = PatternRepr;

    fn to_repr(&self) -> PatternRepr {
        PatternRepr {
            space: self.space().to_repr(),
            k: self.k(),
            edges: self
                .edges()
                .iter()
                .map(|(i, j, f)| (*i, *j, encode_function(f)))
                .collect(),
        }
    }

    fn from_repr(repr: PatternRepr) -> Result<Self> {
        let space = decode_space(repr.space)?;
        let edges = repr
            .edges
            .into_iter()
            .map(|(i, j, f)| Ok((i, j, decode_function(&space, f)?)))
            .collect::<Result<_>>()?;
        PatternGraph::new(space, repr.k, edges)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphonRepr {
    pub space: SpaceRepr,
    pub m: usize,
    /// Upper triangle of cell distributions as `[element, weight]` pairs.
    pub cells: Vec<Vec<(Value, f64)>>,
}

impl Document for StepGraphon {
    type Repr = GraphonRepr;

    fn to_repr(&self) -> GraphonRepr {
        GraphonRepr {
            space: self.space().to_repr(),
            m: self.m(),
            cells: self
                .upper()
                .into_iter()
                .map(|mu| mu.support().iter().map(|(c, w)| (encode_element(*c), *w)).collect())
                .collect(),
        }
    }

    fn from_repr(repr: GraphonRepr) -> Result<Self> {
        let space = decode_space(repr.space)?;
        let cells = repr
            .cells
            .into_iter()
            .map(|cell| {
                let support = cell
                    .iter()
                    .map(|(v, w)| Ok((decode_element(&space, v)?, *w)))
                    .collect::<Result<_>>()?;
                KDistribution::new(space.clone(), support)
            })
            .collect::<Result<_>>()?;
        StepGraphon::from_upper(space, repr.m, cells)
    }
}

fn upper_values(x: &KernelMatrix) -> Vec<f64> {
    let m = x.m();
    (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).map(|(i, j)| x.get(i, j)).collect()
}

fn from_upper_values(m: usize, upper: &[f64]) -> Result<Vec<f64>> {
    if upper.len() != m * (m + 1) / 2 {
        return Err(validation(format!(
            "expected {} upper-triangle values for m = {m}, got {}",
            m * (m + 1) / 2,
            upper.len()
        )));
    }
    let mut full = vec![0.0; m * m];
    let mut it = upper.iter();
    for i in 0..m {
        for j in i..m {
            let v = *it.next().expect("length checked");
            full[i * m + j] = v;
            full[j * m + i] = v;
        }
    }
    Ok(full)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsRepr {
    pub space: SpaceRepr,
    pub family: Vec<FunctionRepr>,
    pub m: usize,
    pub components: Vec<Vec<f64>>,
}

impl Document for MomentFunctionSequence {
    type Repr = MomentsRepr;

    fn to_repr(&self) -> MomentsRepr {
        MomentsRepr {
            space: self.family().space().to_repr(),
            family: self.family().functions().iter().map(encode_function).collect(),
            m: self.m(),
            components: self.components().iter().map(upper_values).collect(),
        }
    }

    fn from_repr(repr: MomentsRepr) -> Result<Self> {
        let family = TestFamily::from_repr(FamilyRepr {
            space: repr.space,
            functions: repr.family,
        })?;
        if repr.components.len() != family.len() {
            return Err(validation("one component is needed per family function"));
        }
        let components = family
            .functions()
            .iter()
            .zip(&repr.components)
            .map(|(f, upper)| {
                let values = from_upper_values(repr.m, upper)?;
                let max = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                KernelMatrix::new(repr.m, values, f.bound().max(max))
            })
            .collect::<Result<_>>()?;
        MomentFunctionSequence::new(family, components)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixRepr {
    pub values: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_bound: Option<f64>,
}

impl Document for KernelMatrix {
    type Repr = MatrixRepr;

    fn to_repr(&self) -> MatrixRepr {
        MatrixRepr {
            values: self.rows(),
            sup_bound: Some(self.sup_bound()),
        }
    }

    fn from_repr(repr: MatrixRepr) -> Result<Self> {
        let x = KernelMatrix::from_rows(&repr.values)?;
        match repr.sup_bound {
            Some(b) => KernelMatrix::new(x.m(), x.values().to_vec(), b),
            None => Ok(x),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionRepr {
    pub space: SpaceRepr,
    pub k: usize,
    pub total: u64,
    pub counts: Vec<(Vec<u32>, u64)>,
}

impl Document for SampleDistribution {
    type Repr = DistributionRepr;

    fn to_repr(&self) -> DistributionRepr {
        DistributionRepr {
            space: self.space().to_repr(),
            k: self.k(),
            total: self.total(),
            counts: self.counts().iter().map(|(t, c)| (t.clone(), *c)).collect(),
        }
    }

    fn from_repr(repr: DistributionRepr) -> Result<Self> {
        let space = decode_space(repr.space)?;
        let d = SampleDistribution::new(space, repr.k, repr.counts.into_iter().collect())?;
        if d.total() != repr.total {
            return Err(validation("counts do not add up to the stated total"));
        }
        Ok(d)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionRepr {
    pub m: usize,
    pub groups: Vec<Vec<usize>>,
}

impl Document for StepPartition {
    type Repr = PartitionRepr;

    fn to_repr(&self) -> PartitionRepr {
        PartitionRepr {
            m: self.m(),
            groups: self.groups().to_vec(),
        }
    }

    fn from_repr(repr: PartitionRepr) -> Result<Self> {
        StepPartition::new(repr.m, repr.groups)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{default_family, FamilyParams};

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_number(2.0 / 9.0), "0.22222222222222221");
        assert_eq!(format_number(0.25), "0.25");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-3.5), "-3.5");
        assert_eq!(format_number(1e-5), "1.0000000000000001e-05");
        assert_eq!(format_number(1e20), "1e+20");
        assert_eq!(format_number(123456.0), "123456");
        assert_eq!(format_number(0.1), "0.10000000000000001");
        for x in [std::f64::consts::PI, 1.0 / 3.0, 6.02e23, -7.5e-9, 0.0001] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn spaces_round_trip() {
        for s in [
            DecorationSpace::simple(),
            DecorationSpace::colors(3).unwrap(),
            DecorationSpace::interval(0.0, 2.0).unwrap(),
            DecorationSpace::interval(-1.0, 1.0).unwrap().with_zero(Decoration::Real(0.0)).unwrap(),
            DecorationSpace::product(3).unwrap(),
            DecorationSpace::truncated_product(5).unwrap().with_zero(Decoration::Bits(0)).unwrap(),
        ] {
            let text = to_string(&s).unwrap();
            assert_eq!(from_str::<DecorationSpace>(&text).unwrap(), s);
        }
        let text = to_string(&DecorationSpace::simple()).unwrap();
        assert_eq!(text, "{\"kind\":\"finite\",\"elements\":[\"non-edge\",\"edge\"],\"zero\":0}\n");
    }

    #[test]
    fn documents_round_trip() {
        let s = SpaceRef::new(DecorationSpace::colors(3).unwrap());
        let g = DecoratedGraph::from_fn(s.clone(), 4, |i, j| Decoration::Label((i + 2 * j) % 3))
            .unwrap()
            .with_metadata("origin", "test");
        let back: DecoratedGraph = from_str(&to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);

        let fam = default_family(&s, FamilyParams::default()).unwrap();
        let f = PatternGraph::new(
            s.clone(),
            3,
            vec![(0, 1, fam.functions()[1].clone()), (1, 2, fam.functions()[2].clone())],
        )
        .unwrap();
        let back: PatternGraph = from_str(&to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);

        let w = crate::graphon::embed_graph(&g);
        let back: StepGraphon = from_str(&to_string(&w).unwrap()).unwrap();
        assert_eq!(back, w);

        let mom = w.moments(&fam).unwrap();
        let back: MomentFunctionSequence = from_str(&to_string(&mom).unwrap()).unwrap();
        for (a, b) in back.components().iter().zip(mom.components()) {
            assert_eq!(a.values(), b.values());
        }

        let x = KernelMatrix::from_rows(&[vec![0.5, -1.0], vec![-1.0, 0.25]]).unwrap();
        let back: KernelMatrix = from_str(&to_string(&x).unwrap()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn interval_functions_round_trip() {
        let s = SpaceRef::new(DecorationSpace::interval(0.0, 1.0).unwrap());
        let f = TestFunction::linear_combination(
            s.clone(),
            vec![
                (2.0, TestFunction::monomial(s.clone(), 2).unwrap()),
                (-0.5, TestFunction::constant(s.clone(), 1.0).unwrap()),
            ],
        )
        .unwrap();
        let p = PatternGraph::new(s.clone(), 2, vec![(0, 1, f)]).unwrap();
        let text = to_string(&p).unwrap();
        assert!(text.contains("\"linear\""));
        assert_eq!(from_str::<PatternGraph>(&text).unwrap(), p);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(from_str::<DecorationSpace>("{\"kind\":\"finite\",\"elements\":[]}").is_err());
        assert!(from_str::<DecoratedGraph>(
            "{\"space\":{\"kind\":\"finite\",\"elements\":[\"a\",\"b\"]},\"n\":2,\"entries\":[0,1,2]}"
        )
        .is_err());
        assert!(from_str::<KernelMatrix>("{\"values\":[[1,2],[3,4]]}").is_err());
        assert!(from_str::<StepPartition>("{\"m\":3,\"groups\":[[0,1]]}").is_err());
    }
}
