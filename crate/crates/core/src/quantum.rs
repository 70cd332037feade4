//! The probability calculus on sets.
//!
//! Brackets count overlaps, the squared norm of `S` is `|S|`, and measuring
//! an attribute `f` in state `S` yields value `r` with probability
//! `|f⁻¹(r) ∩ S| / |S|`, collapsing the state to `f⁻¹(r) ∩ S`. Measurement
//! refines partitions (it makes distinctions); evolution by a non-singular
//! linear map keeps distinct states distinct.
//!
//! Brackets, norms and Pythagorean sums read kets as subsets of `U`, so they
//! require the standard basis. Measurement converts its state to the
//! standard basis, which is the home basis of every attribute.

use std::fmt;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::attribute::{is_csca, Attribute, AttributeSet, Value};
use crate::bits;
use crate::error::{Error, Result};
use crate::gf2::{is_nonsingular, Basis, LinearMap, SetKet};
use crate::partition::{self, SetPartition};

pub type Probability = Ratio<u64>;

fn standard_mask(s: &SetKet) -> Result<u64> {
    if s.basis().is_standard() {
        Ok(s.coords())
    } else {
        Err(Error::NonStandardBasis(s.basis().name().to_string()))
    }
}

fn standard_pair(t: &SetKet, s: &SetKet) -> Result<(u64, u64)> {
    if t.universe() != s.universe() {
        return Err(Error::UniverseMismatch);
    }
    Ok((standard_mask(t)?, standard_mask(s)?))
}

/// `⟨T|S⟩ = |T ∩ S|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bracket(pub u64);

impl Bracket {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn bracket(t: &SetKet, s: &SetKet) -> Result<Bracket> {
    let (t, s) = standard_pair(t, s)?;
    Ok(Bracket(bits::count(t & s) as u64))
}

/// `‖S‖ = √|S|`, with the exact square alongside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norm {
    pub squared: u64,
    pub value: f64,
}

pub fn norm(s: &SetKet) -> Result<Norm> {
    let squared = bits::count(standard_mask(s)?) as u64;
    Ok(Norm {
        squared,
        value: (squared as f64).sqrt(),
    })
}

/// The overlap `Σ_u ⟨T|{u}⟩⟨{u}|S⟩` together with the resolution of `S`
/// into its singletons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KetBraResolution {
    pub sum: u64,
    pub singletons: Vec<SetKet>,
}

pub fn ketbra_resolve(t: &SetKet, s: &SetKet) -> Result<KetBraResolution> {
    let (tm, sm) = standard_pair(t, s)?;
    let n = s.universe().size();
    let sum = (0..n).map(|u| (tm >> u & 1) * (sm >> u & 1)).sum::<u64>();
    assert_eq!(
        sum,
        bracket(t, s)?.0,
        "ket-bra resolution disagrees with the bracket"
    );
    let singletons = bits::ones(sm)
        .map(|u| SetKet::new(s.basis(), 1 << u).expect("singleton of U"))
        .collect();
    Ok(KetBraResolution { sum, singletons })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub value: Value,
    pub probability: Probability,
    /// `f⁻¹(r) ∩ S`.
    pub state: SetKet,
}

/// Outcomes of measuring some attribute in a nonempty state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeDistribution {
    pub state: SetKet,
    pub outcomes: Vec<Outcome>,
}

impl OutcomeDistribution {
    pub fn total(&self) -> Probability {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    pub fn probability_of(&self, value: &Value) -> Probability {
        self.outcomes
            .iter()
            .find(|o| o.value == *value)
            .map_or(Probability::from_integer(0), |o| o.probability)
    }

    pub fn outcome(&self, value: &Value) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.value == *value)
    }

    /// `Σ r Pr(r|S)` when every outcome value is numeric.
    pub fn expectation(&self) -> Option<Ratio<i64>> {
        self.outcomes
            .iter()
            .try_fold(Ratio::from_integer(0), |acc, o| {
                let r = o.value.as_number()?;
                let p = Ratio::new(*o.probability.numer() as i64, *o.probability.denom() as i64);
                Some(acc + r * p)
            })
    }

    /// Checks normalization, nonempty disjoint collapses and that they cover
    /// the conditioning state.
    pub fn is_consistent(&self) -> bool {
        let s = self.state.standard_mask();
        let mut union = 0u64;
        for o in &self.outcomes {
            let m = o.state.standard_mask();
            if m == 0 || m & union != 0 || m & !s != 0 {
                return false;
            }
            union |= m;
        }
        union == s && self.total() == Probability::from_integer(1)
    }
}

/// Laplacian equiprobability over the singletons of `S`.
pub fn born_distribution(s: &SetKet) -> Result<OutcomeDistribution> {
    let mask = standard_mask(s)?;
    if mask == 0 {
        return Err(Error::EmptyState);
    }
    let size = bits::count(mask) as u64;
    let outcomes = bits::ones(mask)
        .map(|u| Outcome {
            value: Value::token(s.universe().label(u)),
            probability: Probability::new(1, size),
            state: SetKet::new(s.basis(), 1 << u).expect("singleton of U"),
        })
        .collect();
    Ok(OutcomeDistribution {
        state: s.clone(),
        outcomes,
    })
}

/// The projection `S ↦ R ∩ S` onto `℘(R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    basis: Basis,
    range: u64,
}

impl Projection {
    pub fn range(&self) -> u64 {
        self.range
    }

    /// Projects a ket (converted to the standard basis) and returns the
    /// result in the standard basis.
    pub fn apply(&self, s: &SetKet) -> Result<SetKet> {
        if s.universe() != self.basis.universe() {
            return Err(Error::UniverseMismatch);
        }
        SetKet::new(&self.basis, self.range & s.standard_mask())
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∩()", self.basis.format_coords(self.range))
    }
}

/// `f = Σ_r r·[f⁻¹(r) ∩ ()]`, kept as the list of (value, projection) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralDecomposition {
    pub terms: Vec<(Value, Projection)>,
}

impl SpectralDecomposition {
    /// Symmetric-difference sum of the projected pieces of `s`.
    pub fn reconstruct(&self, s: &SetKet) -> Result<SetKet> {
        let mut mask = 0u64;
        for (_, p) in &self.terms {
            mask ^= p.apply(s)?.coords();
        }
        let basis = &self.terms[0].1.basis;
        SetKet::new(basis, mask)
    }
}

pub fn spectral_decompose(f: &Attribute) -> SpectralDecomposition {
    let basis = Basis::standard(f.universe());
    let terms: Vec<(Value, Projection)> = f
        .preimages()
        .into_iter()
        .map(|(r, range)| {
            (
                r.clone(),
                Projection {
                    basis: basis.clone(),
                    range,
                },
            )
        })
        .collect();
    let full = f.universe().full_mask();
    // Completeness: the projections sum to the identity.
    assert_eq!(terms.iter().fold(0, |acc, (_, p)| acc ^ p.range), full);
    // Orthogonality: distinct projections compose to the zero map.
    for (i, (_, p)) in terms.iter().enumerate() {
        for (_, q) in &terms[i + 1..] {
            assert_eq!(p.range & q.range, 0);
        }
    }
    SpectralDecomposition { terms }
}

fn measurement_state(f: &Attribute, s: &SetKet) -> Result<SetKet> {
    if s.universe() != f.universe() {
        return Err(Error::UniverseMismatch);
    }
    let s = s.to_standard();
    if s.is_zero() {
        return Err(Error::EmptyState);
    }
    Ok(s)
}

/// `Pr(r|S) = |f⁻¹(r) ∩ S| / |S|` for every value with nonzero probability.
pub fn measure_distribution(f: &Attribute, s: &SetKet) -> Result<OutcomeDistribution> {
    let s = measurement_state(f, s)?;
    let mask = s.coords();
    let size = bits::count(mask) as u64;
    let outcomes = f
        .preimages()
        .into_iter()
        .filter_map(|(r, pre)| {
            let hit = pre & mask;
            (hit != 0).then(|| Outcome {
                value: r.clone(),
                probability: Probability::new(bits::count(hit) as u64, size),
                state: SetKet::new(s.basis(), hit).expect("subset of U"),
            })
        })
        .collect();
    Ok(OutcomeDistribution { state: s, outcomes })
}

/// One sampled measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementStep {
    pub attribute: String,
    pub value: Value,
    pub pre: SetKet,
    pub post: SetKet,
    pub probability: Probability,
}

fn step_rng(seed: u64, step: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(step);
    rng
}

/// Samples one outcome of measuring `f` in `s`, using the stream `step` of
/// the generator keyed by `seed`. Identical arguments give identical steps.
pub fn measure_sample_at(
    f: &Attribute,
    s: &SetKet,
    seed: u64,
    step: u64,
) -> Result<MeasurementStep> {
    let pre = measurement_state(f, s)?;
    let mask = pre.coords();
    // Drawing a uniform element of S and reading its value samples r with
    // probability |f⁻¹(r) ∩ S| / |S| exactly.
    let k = step_rng(seed, step).gen_range(0..bits::count(mask));
    let element = bits::ones(mask).nth(k).expect("k < |S|");
    let value = f.value_at(element).clone();
    let hit = f.preimage(&value) & mask;
    Ok(MeasurementStep {
        attribute: f.name().to_string(),
        probability: Probability::new(bits::count(hit) as u64, bits::count(mask) as u64),
        post: SetKet::new(pre.basis(), hit).expect("subset of U"),
        value,
        pre,
    })
}

pub fn measure_sample(f: &Attribute, s: &SetKet, seed: u64) -> Result<MeasurementStep> {
    measure_sample_at(f, s, seed, 0)
}

/// The join of `{S, S^c}` with `f⁻¹`, blocks flagged by whether they lie in
/// `S` (the possible collapsed states) or in `S^c` (not potential from `S`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementJoin {
    pub partition: SetPartition,
    /// Aligned with `partition.blocks()`.
    pub possible: Vec<bool>,
}

impl MeasurementJoin {
    pub fn possible_states(&self) -> Vec<u64> {
        self.partition
            .blocks()
            .iter()
            .zip(&self.possible)
            .filter(|(_, p)| **p)
            .map(|(b, _)| *b)
            .collect()
    }
}

pub fn measurement_join(f: &Attribute, s: &SetKet) -> Result<MeasurementJoin> {
    if s.universe() != f.universe() {
        return Err(Error::UniverseMismatch);
    }
    let mask = s.standard_mask();
    let u = f.universe();
    let complement = u.full_mask() & !mask;
    let state_partition =
        SetPartition::from_masks(u, [mask, complement].into_iter().filter(|m| *m != 0))?;
    let partition = partition::join(&state_partition, &f.partition())?;
    let possible = partition.blocks().iter().map(|b| b & mask != 0).collect();
    Ok(MeasurementJoin {
        partition,
        possible,
    })
}

/// `(‖S‖², Σ_B ‖B ∩ S‖²)`; the two always agree.
pub fn pythagoras_check(p: &SetPartition, s: &SetKet) -> Result<(u64, u64)> {
    if s.universe() != p.universe() {
        return Err(Error::UniverseMismatch);
    }
    let mask = standard_mask(s)?;
    let right = p
        .blocks()
        .iter()
        .map(|b| bits::count(b & mask) as u64)
        .sum();
    Ok((bits::count(mask) as u64, right))
}

/// Applies a non-singular map. The state is first written in the map's
/// domain basis. Singular maps are rejected: they merge distinct states.
pub fn evolve(m: &LinearMap, s: &SetKet) -> Result<SetKet> {
    if !is_nonsingular(m) {
        return Err(Error::SingularMap);
    }
    m.apply(&s.to_basis(m.domain())?)
}

/// Sequential sampled measurements with collapsed states threaded through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub seed: u64,
    pub steps: Vec<MeasurementStep>,
}

impl MeasurementRecord {
    pub fn final_state(&self) -> Option<&SetKet> {
        self.steps.last().map(|s| &s.post)
    }

    /// Observed values in attribute order.
    pub fn tuple(&self) -> Vec<Value> {
        self.steps.iter().map(|s| s.value.clone()).collect()
    }

    /// Product of the step probabilities.
    pub fn probability(&self) -> Probability {
        self.steps.iter().map(|s| s.probability).product()
    }
}

/// Measures each attribute of a complete set in turn, starting from `s`.
/// Step `k` samples from stream `k` of the seeded generator. The final state
/// is a singleton identified by the recorded value tuple.
pub fn csca_measure(fs: &AttributeSet, s: &SetKet, seed: u64) -> Result<MeasurementRecord> {
    csca_measure_from(fs, s, seed, 0)
}

/// As [`csca_measure`], with step `k` drawn from stream `first_stream + k`.
pub fn csca_measure_from(
    fs: &AttributeSet,
    s: &SetKet,
    seed: u64,
    first_stream: u64,
) -> Result<MeasurementRecord> {
    if !is_csca(fs)? {
        return Err(Error::NotCsca);
    }
    let mut state = s.clone();
    let mut steps = Vec::with_capacity(fs.len());
    for (k, f) in fs.attributes().iter().enumerate() {
        let step = measure_sample_at(f, &state, seed, first_stream + k as u64)?;
        state = step.post.clone();
        steps.push(step);
    }
    Ok(MeasurementRecord { seed, steps })
}

/// One leaf of the exact cascade: the value tuple, the final state and its
/// probability (product of the step probabilities).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalOutcome {
    pub tuple: Vec<Value>,
    pub state: SetKet,
    pub probability: Probability,
}

/// Exact distribution of final states after measuring every attribute of
/// `fs` in order, starting from `s`. Works for any nonempty attribute set;
/// for a complete set every final state is a singleton.
pub fn cascade_distribution(fs: &AttributeSet, s: &SetKet) -> Result<Vec<FinalOutcome>> {
    if fs.is_empty() {
        return Err(Error::EmptyAttributeSet);
    }
    let mut leaves = vec![FinalOutcome {
        tuple: Vec::new(),
        state: s.clone(),
        probability: Probability::from_integer(1),
    }];
    for f in fs.attributes() {
        let mut next = Vec::new();
        for leaf in leaves {
            for o in measure_distribution(f, &leaf.state)?.outcomes {
                let mut tuple = leaf.tuple.clone();
                tuple.push(o.value);
                next.push(FinalOutcome {
                    tuple,
                    state: o.state,
                    probability: leaf.probability * o.probability,
                });
            }
        }
        leaves = next;
    }
    Ok(leaves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Permutation;
    use crate::universe::Universe;

    fn abc() -> Universe {
        Universe::new(["a", "b", "c"]).unwrap()
    }

    fn ket(u: &Universe, labels: &[&str]) -> SetKet {
        SetKet::standard(u, u.mask_of(labels).unwrap()).unwrap()
    }

    fn f_112(u: &Universe) -> Attribute {
        Attribute::from_values("f", u, vec![Value::int(1), Value::int(1), Value::int(2)]).unwrap()
    }

    fn g_xyy(u: &Universe) -> Attribute {
        Attribute::from_values(
            "g",
            u,
            vec![Value::token("x"), Value::token("y"), Value::token("y")],
        )
        .unwrap()
    }

    #[test]
    fn bracket_examples() {
        let u = abc();
        assert_eq!(
            bracket(&ket(&u, &["a", "b"]), &ket(&u, &["b", "c"])).unwrap(),
            Bracket(1)
        );
        let s = ket(&u, &["a", "c"]);
        assert_eq!(bracket(&s, &s).unwrap().value(), 2);
        for i in 0..3 {
            for j in 0..3 {
                let ui = SetKet::standard(&u, 1 << i).unwrap();
                let uj = SetKet::standard(&u, 1 << j).unwrap();
                assert_eq!(bracket(&ui, &uj).unwrap().value(), u64::from(i == j));
            }
        }
    }

    #[test]
    fn bracket_rejects_foreign_basis() {
        let u = abc();
        let up = Basis::from_subsets(
            &u,
            "U'",
            &[
                ("a'", vec!["a", "b"]),
                ("b'", vec!["b", "c"]),
                ("c'", vec!["a", "b", "c"]),
            ],
        )
        .unwrap();
        let a_prime = SetKet::from_labels(&up, &["a'"]).unwrap();
        assert_eq!(
            bracket(&ket(&u, &["a"]), &a_prime),
            Err(Error::NonStandardBasis("U'".into()))
        );
        assert_eq!(norm(&a_prime), Err(Error::NonStandardBasis("U'".into())));
        let n = norm(&a_prime.to_standard()).unwrap();
        assert_eq!(n.squared, 2);
        assert!((n.value - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn norm_examples() {
        let u = abc();
        assert_eq!(norm(&ket(&u, &[])).unwrap().squared, 0);
        assert_eq!(norm(&ket(&u, &[])).unwrap().value, 0.0);
        assert_eq!(norm(&ket(&u, &["a", "b", "c"])).unwrap().squared, 3);
    }

    #[test]
    fn ketbra_examples() {
        let u = abc();
        let r = ketbra_resolve(&ket(&u, &["a", "b"]), &ket(&u, &["b", "c"])).unwrap();
        assert_eq!(r.sum, 1);
        assert_eq!(r.singletons.len(), 2);
        let r = ketbra_resolve(&ket(&u, &["a"]), &ket(&u, &[])).unwrap();
        assert_eq!(r.sum, 0);
        assert!(r.singletons.is_empty());
    }

    #[test]
    fn born_examples() {
        let u = abc();
        let d = born_distribution(&ket(&u, &["a", "b"])).unwrap();
        assert_eq!(d.outcomes.len(), 2);
        assert!(d
            .outcomes
            .iter()
            .all(|o| o.probability == Probability::new(1, 2)));
        let d = born_distribution(&ket(&u, &["a"])).unwrap();
        assert_eq!(d.outcomes[0].probability, Probability::from_integer(1));
        assert_eq!(born_distribution(&ket(&u, &[])), Err(Error::EmptyState));
    }

    #[test]
    fn spectral_examples() {
        let u = abc();
        let sd = spectral_decompose(&f_112(&u));
        let shown: Vec<String> = sd.terms.iter().map(|(r, p)| format!("{r}:{p}")).collect();
        assert_eq!(shown, ["1:{a,b}∩()", "2:{c}∩()"]);
        let injective = Attribute::from_fn("id", &u, |l| Value::token(l));
        assert_eq!(spectral_decompose(&injective).terms.len(), 3);
        for m in u.subsets() {
            let s = SetKet::standard(&u, m).unwrap();
            assert_eq!(sd.reconstruct(&s).unwrap(), s);
        }
    }

    #[test]
    fn measure_examples() {
        let u = abc();
        let f = f_112(&u);
        let d = measure_distribution(&f, &ket(&u, &["a", "b", "c"])).unwrap();
        assert_eq!(d.probability_of(&Value::int(1)), Probability::new(2, 3));
        assert_eq!(d.probability_of(&Value::int(2)), Probability::new(1, 3));
        assert_eq!(
            d.outcome(&Value::int(1)).unwrap().state,
            ket(&u, &["a", "b"])
        );
        assert_eq!(d.outcome(&Value::int(2)).unwrap().state, ket(&u, &["c"]));
        assert!(d.is_consistent());
        assert_eq!(d.expectation(), Some(Ratio::new(4, 3)));

        let again = measure_distribution(&f, &ket(&u, &["a", "b"])).unwrap();
        assert_eq!(again.outcomes.len(), 1);
        assert_eq!(again.outcomes[0].probability, Probability::from_integer(1));

        let injective = Attribute::from_fn("id", &u, |l| Value::token(l));
        let d = measure_distribution(&injective, &ket(&u, &["a", "b", "c"])).unwrap();
        assert!(d
            .outcomes
            .iter()
            .all(|o| o.probability == Probability::new(1, 3)));
        assert_eq!(
            measure_distribution(&f, &ket(&u, &[])),
            Err(Error::EmptyState)
        );
        assert_eq!(d.expectation(), None);
    }

    #[test]
    fn measurement_converts_to_home_basis() {
        let u = abc();
        let up = Basis::from_subsets(
            &u,
            "U'",
            &[
                ("a'", vec!["a", "b"]),
                ("b'", vec!["b", "c"]),
                ("c'", vec!["a", "b", "c"]),
            ],
        )
        .unwrap();
        let a_prime = SetKet::from_labels(&up, &["a'"]).unwrap();
        let d = measure_distribution(&f_112(&u), &a_prime).unwrap();
        assert_eq!(d.state, ket(&u, &["a", "b"]));
        assert_eq!(d.outcomes.len(), 1);
    }

    #[test]
    fn sampling_is_deterministic() {
        let u = abc();
        let f = f_112(&u);
        let s = ket(&u, &["a", "b", "c"]);
        for seed in 0..50 {
            assert_eq!(
                measure_sample(&f, &s, seed).unwrap(),
                measure_sample(&f, &s, seed).unwrap()
            );
        }
        let step = measure_sample(&f, &ket(&u, &["a"]), 9).unwrap();
        assert_eq!(step.value, Value::int(1));
        assert_eq!(step.probability, Probability::from_integer(1));
        assert_eq!(step.post, ket(&u, &["a"]));
        // different streams of one seed are not all identical
        let vals: std::collections::BTreeSet<Value> = (0..64)
            .map(|k| measure_sample_at(&f, &s, 1, k).unwrap().value)
            .collect();
        assert_eq!(vals.len(), 2);
    }

    #[test]
    fn measurement_join_examples() {
        let u = abc();
        let f = f_112(&u);
        let mj = measurement_join(&f, &ket(&u, &["a", "b"])).unwrap();
        assert_eq!(mj.partition.to_string(), "{a,b}|{c}");
        assert_eq!(mj.possible, [true, false]);
        let mj = measurement_join(&f, &ket(&u, &["a", "b", "c"])).unwrap();
        assert_eq!(mj.partition, f.partition());
        assert!(mj.possible.iter().all(|p| *p));
    }

    #[test]
    fn pythagoras_examples() {
        let u = abc();
        let p = SetPartition::parse(&u, "{a}|{b,c}").unwrap();
        assert_eq!(pythagoras_check(&p, &ket(&u, &["a", "b"])).unwrap(), (2, 2));
        assert_eq!(
            pythagoras_check(&p, &ket(&u, &["a", "b", "c"])).unwrap(),
            (3, 3)
        );
    }

    #[test]
    fn evolve_examples() {
        let u = abc();
        let std = Basis::standard(&u);
        let s = ket(&u, &["a", "c"]);
        assert_eq!(evolve(&LinearMap::identity(&std), &s).unwrap(), s);
        let swap = LinearMap::from_permutation(&Permutation::parse_cycles(&u, "(a b)").unwrap());
        assert_eq!(evolve(&swap, &s).unwrap(), ket(&u, &["b", "c"]));
        let singular = LinearMap::on_basis(&std, vec![0b001, 0b001, 0b100]).unwrap();
        assert_eq!(evolve(&singular, &s), Err(Error::SingularMap));
    }

    #[test]
    fn csca_examples() {
        let u = abc();
        let fs = AttributeSet::new(vec![f_112(&u), g_xyy(&u)]).unwrap();
        let all = ket(&u, &["a", "b", "c"]);
        for seed in 0..20 {
            let rec = csca_measure(&fs, &all, seed).unwrap();
            let last = rec.final_state().unwrap();
            assert_eq!(bits::count(last.coords()), 1);
            let i = bits::least(last.coords());
            assert_eq!(rec.tuple(), fs.tuple_at(i));
            assert_eq!(rec.probability(), Probability::new(1, 3));
        }
        let leaves = cascade_distribution(&fs, &all).unwrap();
        assert_eq!(leaves.len(), 3);
        assert!(leaves
            .iter()
            .all(|l| l.probability == Probability::new(1, 3)));

        let single = AttributeSet::new(vec![f_112(&u)]).unwrap();
        assert_eq!(csca_measure(&single, &all, 0), Err(Error::NotCsca));
        assert_eq!(csca_measure(&fs, &ket(&u, &[]), 0), Err(Error::EmptyState));
    }
}
