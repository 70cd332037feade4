//! Attributes `f: U → R`, their inverse-image partitions, joins and
//! completeness.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;

use crate::bits;
use crate::error::{Error, Result};
use crate::gf2::{Basis, SetKet};
use crate::partition::{self, discrete, SetPartition};
use crate::universe::Universe;

/// An attribute value: an opaque ordered token.
///
/// Numbers compare numerically and sort before text tokens; tuples (values
/// of joined attributes) sort last.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Number(Ratio<i64>),
    Token(String),
    Tuple(Vec<Value>),
}

impl Value {
    pub fn int(n: i64) -> Value {
        Value::Number(Ratio::from_integer(n))
    }

    pub fn token(s: impl Into<String>) -> Value {
        Value::Token(s.into())
    }

    /// Parses an integer (`-3`), decimal (`1.25`) or fraction (`3/2`) literal.
    pub fn parse_number(text: &str) -> Option<Value> {
        let text = text.trim();
        if let Some((n, d)) = text.split_once('/') {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            return (d != 0).then(|| Value::Number(Ratio::new(n, d)));
        }
        if let Some((whole, frac)) = text.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
                return None;
            }
            let negative = whole.starts_with('-');
            let whole: i64 = if whole.is_empty() || whole == "-" {
                0
            } else {
                whole.parse().ok()?
            };
            let scale = 10i64.checked_pow(frac.len() as u32)?;
            let frac: i64 = frac.parse().ok()?;
            let magnitude = whole.abs().checked_mul(scale)?.checked_add(frac)?;
            let n = if negative { -magnitude } else { magnitude };
            return Some(Value::Number(Ratio::new(n, scale)));
        }
        text.parse::<i64>().ok().map(Value::int)
    }

    pub fn as_number(&self) -> Option<Ratio<i64>> {
        match self {
            Value::Number(r) => Some(*r),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Value::Number(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Token(s) => f.write_str(s),
            Value::Tuple(vs) => {
                let parts: Vec<String> = vs.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Token(s) => write!(f, "{s:?}"),
            other => write!(f, "{other}"),
        }
    }
}

/// A total function from a universe to values.
#[derive(Clone, PartialEq, Eq)]
pub struct Attribute {
    name: String,
    universe: Universe,
    /// Indexed by element position.
    values: Vec<Value>,
}

impl Attribute {
    /// Builds an attribute from `(element, value)` pairs. Every element must
    /// appear exactly once.
    pub fn new<S: AsRef<str>>(
        name: impl Into<String>,
        universe: &Universe,
        pairs: Vec<(S, Value)>,
    ) -> Result<Attribute> {
        let name = name.into();
        let mut slots: Vec<Option<Value>> = vec![None; universe.size()];
        for (label, value) in pairs {
            let i = universe.require(label.as_ref())?;
            if slots[i].replace(value).is_some() {
                return Err(Error::DuplicateAssignment {
                    attribute: name,
                    element: label.as_ref().to_string(),
                });
            }
        }
        let mut values = Vec::with_capacity(slots.len());
        for (i, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(v) => values.push(v),
                None => {
                    return Err(Error::PartialAttribute {
                        attribute: name,
                        element: universe.label(i).to_string(),
                    })
                }
            }
        }
        Ok(Attribute {
            name,
            universe: universe.clone(),
            values,
        })
    }

    pub fn from_fn(
        name: impl Into<String>,
        universe: &Universe,
        f: impl Fn(&str) -> Value,
    ) -> Attribute {
        Attribute {
            name: name.into(),
            universe: universe.clone(),
            values: universe.labels().iter().map(|l| f(l)).collect(),
        }
    }

    /// Value list in universe order.
    pub fn from_values(
        name: impl Into<String>,
        universe: &Universe,
        values: Vec<Value>,
    ) -> Result<Attribute> {
        let name = name.into();
        if values.len() != universe.size() {
            let element = universe
                .labels()
                .get(values.len())
                .cloned()
                .unwrap_or_default();
            return Err(Error::PartialAttribute {
                attribute: name,
                element,
            });
        }
        Ok(Attribute {
            name,
            universe: universe.clone(),
            values,
        })
    }

    /// The tuple-valued attribute `u ↦ (f(u), g(u), ...)`.
    pub fn product(name: impl Into<String>, parts: &[&Attribute]) -> Result<Attribute> {
        let first = parts.first().ok_or(Error::EmptyAttributeSet)?;
        if parts.iter().any(|f| !compatible(first, f)) {
            return Err(Error::UniverseMismatch);
        }
        let values = (0..first.universe.size())
            .map(|i| Value::Tuple(parts.iter().map(|f| f.values[i].clone()).collect()))
            .collect();
        Ok(Attribute {
            name: name.into(),
            universe: first.universe.clone(),
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn value_at(&self, i: usize) -> &Value {
        &self.values[i]
    }

    pub fn value_of(&self, label: &str) -> Result<&Value> {
        Ok(&self.values[self.universe.require(label)?])
    }

    /// Attained values with their preimage masks, in value order.
    pub fn preimages(&self) -> BTreeMap<&Value, u64> {
        let mut out: BTreeMap<&Value, u64> = BTreeMap::new();
        for (i, v) in self.values.iter().enumerate() {
            *out.entry(v).or_default() |= 1 << i;
        }
        out
    }

    /// `f⁻¹(r)` as a mask; zero for unattained values.
    pub fn preimage(&self, r: &Value) -> u64 {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| *v == r)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn is_numeric(&self) -> bool {
        self.values.iter().all(|v| v.as_number().is_some())
    }
}

impl fmt::Debug for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .universe
            .labels()
            .iter()
            .zip(&self.values)
            .map(|(l, v)| format!("{l}:{v:?}"))
            .collect();
        write!(f, "Attribute {}({})", self.name, pairs.join(", "))
    }
}

/// Partition of `U` into the nonempty preimages `f⁻¹(r)`.
pub fn inverse_image_partition(f: &Attribute) -> SetPartition {
    SetPartition::from_masks(&f.universe, f.preimages().into_values())
        .expect("preimages of a total function partition U")
}

impl Attribute {
    pub fn partition(&self) -> SetPartition {
        inverse_image_partition(self)
    }
}

/// Same universe.
pub fn compatible(f: &Attribute, g: &Attribute) -> bool {
    f.universe == g.universe
}

/// Attributes sharing one universe. Joins and completeness checks reject the
/// empty set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSet {
    attributes: Vec<Attribute>,
}

impl AttributeSet {
    pub fn new(attributes: Vec<Attribute>) -> Result<AttributeSet> {
        if let Some(first) = attributes.first() {
            if attributes.iter().any(|f| !compatible(first, f)) {
                return Err(Error::UniverseMismatch);
            }
        }
        Ok(AttributeSet { attributes })
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn universe(&self) -> Option<&Universe> {
        self.attributes.first().map(Attribute::universe)
    }

    /// Value tuple `(f(u), ..., g(u))` of one element.
    pub fn tuple_at(&self, i: usize) -> Vec<Value> {
        self.attributes
            .iter()
            .map(|f| f.values[i].clone())
            .collect()
    }
}

/// A partition whose blocks carry the value tuple shared by their elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedPartition {
    pub partition: SetPartition,
    /// Aligned with `partition.blocks()`.
    pub tuples: Vec<Vec<Value>>,
}

/// Iterated join of the inverse-image partitions of `fs`.
pub fn join_attributes(fs: &AttributeSet) -> Result<AnnotatedPartition> {
    let (first, rest) = fs
        .attributes
        .split_first()
        .ok_or(Error::EmptyAttributeSet)?;
    let mut p = inverse_image_partition(first);
    for f in rest {
        p = partition::join(&p, &inverse_image_partition(f))?;
    }
    let tuples = p
        .blocks()
        .iter()
        .map(|b| fs.tuple_at(bits::least(*b)))
        .collect();
    Ok(AnnotatedPartition {
        partition: p,
        tuples,
    })
}

/// Whether the join of the attributes' partitions is discrete.
pub fn is_csca(fs: &AttributeSet) -> Result<bool> {
    let joined = join_attributes(fs)?;
    Ok(joined.partition == discrete(joined.partition.universe()))
}

/// Nonzero vectors of the eigenspace `℘(f⁻¹(r))`, in binary-counting order
/// over the preimage, as standard-basis kets. Empty when `r` is unattained.
pub fn eigen_sets(f: &Attribute, r: &Value) -> Vec<SetKet> {
    let pre = f.preimage(r);
    let basis = Basis::standard(&f.universe);
    let members: Vec<usize> = bits::ones(pre).collect();
    (1u64..1 << members.len())
        .map(|sel| {
            let mask = bits::ones(sel).fold(0, |acc, k| acc | 1 << members[k]);
            SetKet::new(&basis, mask).expect("preimage lies in U")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{enumerate_partitions, indiscrete};

    fn abc() -> Universe {
        Universe::new(["a", "b", "c"]).unwrap()
    }

    fn f_112(u: &Universe) -> Attribute {
        Attribute::new(
            "f",
            u,
            vec![
                ("a", Value::int(1)),
                ("b", Value::int(1)),
                ("c", Value::int(2)),
            ],
        )
        .unwrap()
    }

    fn g_xyy(u: &Universe) -> Attribute {
        Attribute::new(
            "g",
            u,
            vec![
                ("a", Value::token("x")),
                ("b", Value::token("y")),
                ("c", Value::token("y")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn value_parsing_and_order() {
        assert_eq!(Value::parse_number("2"), Some(Value::int(2)));
        assert_eq!(
            Value::parse_number("1.50"),
            Some(Value::Number(Ratio::new(3, 2)))
        );
        assert_eq!(
            Value::parse_number("-0.25"),
            Some(Value::Number(Ratio::new(-1, 4)))
        );
        assert_eq!(
            Value::parse_number("3/6"),
            Some(Value::Number(Ratio::new(1, 2)))
        );
        assert_eq!(Value::parse_number("x"), None);
        assert_eq!(Value::parse_number("1/0"), None);
        assert_eq!(Value::parse_number("1."), None);
        assert!(Value::int(10) > Value::int(9));
        assert!(Value::int(100) < Value::token("a"));
        assert_eq!(Value::parse_number("1.0"), Some(Value::int(1)));
        assert_eq!(Value::Number(Ratio::new(3, 2)).to_string(), "3/2");
        assert_eq!(
            Value::Tuple(vec![Value::int(1), Value::token("x")]).to_string(),
            "(1,x)"
        );
    }

    #[test]
    fn totality_is_enforced() {
        let u = abc();
        let err =
            Attribute::new("f", &u, vec![("a", Value::int(1)), ("b", Value::int(1))]).unwrap_err();
        assert_eq!(
            err,
            Error::PartialAttribute {
                attribute: "f".into(),
                element: "c".into()
            }
        );
        let err = Attribute::new(
            "f",
            &u,
            vec![
                ("a", Value::int(1)),
                ("a", Value::int(2)),
                ("b", Value::int(1)),
                ("c", Value::int(1)),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateAssignment { .. }));
    }

    #[test]
    fn inverse_images() {
        let u = abc();
        assert_eq!(inverse_image_partition(&f_112(&u)).to_string(), "{a,b}|{c}");
        let constant = Attribute::from_fn("k", &u, |_| Value::int(0));
        assert_eq!(constant.partition(), indiscrete(&u));
        let injective = Attribute::from_fn("id", &u, |l| Value::token(l));
        assert_eq!(injective.partition(), discrete(&u));
    }

    #[test]
    fn compatibility() {
        let u = abc();
        let v = Universe::new(["a'", "b'", "c'"]).unwrap();
        let f = f_112(&u);
        let h = Attribute::from_fn("h", &v, |_| Value::int(0));
        assert!(compatible(&f, &g_xyy(&u)));
        assert!(compatible(&f, &f));
        assert!(!compatible(&f, &h));
        assert_eq!(AttributeSet::new(vec![f, h]), Err(Error::UniverseMismatch));
    }

    #[test]
    fn join_and_csca() {
        let u = abc();
        let fs = AttributeSet::new(vec![f_112(&u), g_xyy(&u)]).unwrap();
        let joined = join_attributes(&fs).unwrap();
        assert_eq!(joined.partition, discrete(&u));
        let tuples: Vec<String> = joined
            .tuples
            .iter()
            .map(|t| Value::Tuple(t.clone()).to_string())
            .collect();
        assert_eq!(tuples, ["(1,x)", "(1,y)", "(2,y)"]);
        assert!(is_csca(&fs).unwrap());

        let single = AttributeSet::new(vec![f_112(&u)]).unwrap();
        assert_eq!(
            join_attributes(&single).unwrap().partition,
            f_112(&u).partition()
        );
        let twice = AttributeSet::new(vec![f_112(&u), f_112(&u)]).unwrap();
        assert_eq!(
            join_attributes(&twice).unwrap().partition,
            f_112(&u).partition()
        );
        assert!(!is_csca(&single).unwrap());

        let constant = Attribute::from_fn("k", &u, |_| Value::int(0));
        assert!(!is_csca(&AttributeSet::new(vec![constant]).unwrap()).unwrap());
        let injective = Attribute::from_fn("id", &u, |l| Value::token(l));
        assert!(is_csca(&AttributeSet::new(vec![injective]).unwrap()).unwrap());

        let empty = AttributeSet::new(vec![]).unwrap();
        assert_eq!(join_attributes(&empty), Err(Error::EmptyAttributeSet));
        assert_eq!(is_csca(&empty), Err(Error::EmptyAttributeSet));
    }

    #[test]
    fn eigen_set_examples() {
        let u = abc();
        let f = f_112(&u);
        let show =
            |r| -> Vec<String> { eigen_sets(&f, &r).iter().map(ToString::to_string).collect() };
        assert_eq!(show(Value::int(1)), ["{a}", "{b}", "{a,b}"]);
        assert_eq!(show(Value::int(2)), ["{c}"]);
        assert!(show(Value::int(3)).is_empty());
    }

    /// Every attribute on `n` elements with values drawn from `0..k`.
    fn attributes(u: &Universe, k: usize, name: &str) -> Vec<Attribute> {
        let n = u.size();
        (0..k.pow(n as u32))
            .map(|mut code| {
                let values = (0..n)
                    .map(|_| {
                        let v = code % k;
                        code /= k;
                        Value::int(v as i64)
                    })
                    .collect();
                Attribute::from_values(name, u, values).unwrap()
            })
            .collect()
    }

    #[test]
    fn pair_attribute_matches_join_exhaustive() {
        for n in 1..=4 {
            let u = Universe::indexed(n).unwrap();
            let fs = attributes(&u, 3, "f");
            for f in &fs {
                for g in fs.iter().step_by(if n == 4 { 7 } else { 1 }) {
                    let pair = Attribute::product("fg", &[f, g]).unwrap();
                    let set = AttributeSet::new(vec![f.clone(), g.clone()]).unwrap();
                    let joined = join_attributes(&set).unwrap();
                    assert_eq!(pair.partition(), joined.partition);
                    // annotation agrees with each block's elements
                    for (b, t) in joined.partition.blocks().iter().zip(&joined.tuples) {
                        assert!(bits::ones(*b).all(|i| set.tuple_at(i) == *t));
                    }
                }
            }
        }
    }

    #[test]
    fn join_is_order_insensitive() {
        for n in 1..=4 {
            let u = Universe::indexed(n).unwrap();
            let fs = attributes(&u, 2, "f");
            for f in &fs {
                for g in &fs {
                    for h in fs.iter().step_by(3) {
                        let orders = [
                            [f, g, h],
                            [f, h, g],
                            [g, f, h],
                            [g, h, f],
                            [h, f, g],
                            [h, g, f],
                        ];
                        let parts: Vec<SetPartition> = orders
                            .iter()
                            .map(|o| {
                                let set =
                                    AttributeSet::new(o.iter().map(|a| (*a).clone()).collect())
                                        .unwrap();
                                join_attributes(&set).unwrap().partition
                            })
                            .collect();
                        assert!(parts.windows(2).all(|w| w[0] == w[1]));
                    }
                }
            }
        }
    }

    #[test]
    fn preimages_decompose_the_universe() {
        for n in 1..=4 {
            let u = Universe::indexed(n).unwrap();
            for f in attributes(&u, 3, "f") {
                let pre = f.preimages();
                let total: usize = pre.values().map(|m| bits::count(*m)).sum();
                assert_eq!(total, n);
                assert_eq!(pre.values().fold(0, |a, m| a | m), u.full_mask());
                for (r, m) in &pre {
                    assert_eq!(eigen_sets(&f, r).len(), (1 << bits::count(*m)) - 1);
                }
            }
        }
    }

    #[test]
    fn csca_tuples_are_injective() {
        let u = Universe::indexed(3).unwrap();
        let fs = attributes(&u, 2, "f");
        for f in &fs {
            for g in &fs {
                let set = AttributeSet::new(vec![f.clone(), g.clone()]).unwrap();
                if is_csca(&set).unwrap() {
                    let tuples: std::collections::BTreeSet<Vec<Value>> =
                        (0..3).map(|i| set.tuple_at(i)).collect();
                    assert_eq!(tuples.len(), 3);
                }
            }
        }
    }

    #[test]
    fn every_partition_is_an_inverse_image() {
        let u = Universe::indexed(4).unwrap();
        for p in enumerate_partitions(&u, 6).unwrap() {
            let f = Attribute::from_fn("blk", &u, |l| {
                let i = u.index_of(l).unwrap();
                Value::int(bits::least(p.block_of(i)) as i64)
            });
            assert_eq!(f.partition(), p);
        }
    }
}
