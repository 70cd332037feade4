//! Permutation groups acting on a universe and their orbit partitions.
//!
//! Composition follows the arrow diagram `U --t--> U --t'--> U`: the product
//! `t't` applies `t` first. [`Permutation::then`] spells this out as
//! `t.then(&t2)`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::bits;
use crate::error::{Error, Result};
use crate::gf2::SetKet;
use crate::partition::SetPartition;
use crate::universe::Universe;

/// Default cap on the order of a generated group (`|S_8|/4`).
pub const DEFAULT_GROUP_BOUND: usize = 10080;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
    universe: Universe,
}

impl Permutation {
    pub fn identity(universe: &Universe) -> Permutation {
        Permutation {
            images: (0..universe.size()).collect(),
            universe: universe.clone(),
        }
    }

    /// `images[i]` is the index of `t(u_i)`.
    pub fn from_images(universe: &Universe, images: Vec<usize>) -> Result<Permutation> {
        let n = universe.size();
        if images.len() != n {
            return Err(Error::NotAPermutation(format!(
                "{} images for {n} elements",
                images.len()
            )));
        }
        let mut hit = 0u64;
        for &j in &images {
            if j >= n || hit >> j & 1 == 1 {
                return Err(Error::NotAPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
            hit |= 1 << j;
        }
        Ok(Permutation {
            images,
            universe: universe.clone(),
        })
    }

    /// Parses cycle notation such as `(a b c)(d e)`; `()` is the identity.
    /// Cycles are composed left to right as written, so disjoint cycles may
    /// appear in any order.
    pub fn parse_cycles(universe: &Universe, text: &str) -> Result<Permutation> {
        let mut perm = Permutation::identity(universe);
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(Error::NotAPermutation("empty cycle notation".into()));
        }
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::NotAPermutation(format!("expected `(` in `{text}`")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::NotAPermutation(format!("unclosed cycle in `{text}`")))?;
            let labels: Vec<&str> = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .collect();
            let idx = labels
                .iter()
                .map(|l| universe.require(l))
                .collect::<Result<Vec<_>>>()?;
            if bits::count(idx.iter().fold(0u64, |m, &i| m | 1 << i)) != idx.len() {
                return Err(Error::NotAPermutation(format!(
                    "repeated element in cycle `({})`",
                    labels.join(" ")
                )));
            }
            let mut images: Vec<usize> = (0..universe.size()).collect();
            for (k, &i) in idx.iter().enumerate() {
                images[i] = idx[(k + 1) % idx.len()];
            }
            perm = perm.then(&Permutation {
                images,
                universe: universe.clone(),
            });
            rest = body[close + 1..].trim_start();
        }
        Ok(perm)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// Image of a subset mask.
    pub fn apply_mask(&self, mask: u64) -> u64 {
        bits::ones(mask).fold(0, |acc, i| acc | 1 << self.images[i])
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&i| next.images[i]).collect(),
            universe: self.universe.clone(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation {
            images,
            universe: self.universe.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = 0u64;
        let mut any = false;
        for start in 0..self.images.len() {
            if seen >> start & 1 == 1 || self.images[start] == start {
                continue;
            }
            any = true;
            let mut cycle = vec![self.universe.label(start)];
            seen |= 1 << start;
            let mut i = self.images[start];
            while i != start {
                cycle.push(self.universe.label(i));
                seen |= 1 << i;
                i = self.images[i];
            }
            write!(f, "({})", cycle.join(" "))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// Which group axioms a set of permutations violates, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxiomReport {
    pub missing_identity: bool,
    /// Elements whose inverse is absent.
    pub missing_inverses: Vec<Permutation>,
    /// A pair `(t, t')` whose product `t't` (t first) is absent, with the product.
    pub not_closed: Option<(Permutation, Permutation, Permutation)>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        !self.missing_identity && self.missing_inverses.is_empty() && self.not_closed.is_none()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            return f.write_str("identity, inverses and closure all hold");
        }
        let mut parts = Vec::new();
        if self.missing_identity {
            parts.push("identity missing".to_string());
        }
        if !self.missing_inverses.is_empty() {
            let ts: Vec<String> = self
                .missing_inverses
                .iter()
                .map(|t| t.to_string())
                .collect();
            parts.push(format!("no inverse for {}", ts.join(", ")));
        }
        if let Some((t, t2, p)) = &self.not_closed {
            parts.push(format!("{t} then {t2} gives {p}, which is absent"));
        }
        f.write_str(&parts.join("; "))
    }
}

/// Checks identity, inverses and closure for an arbitrary permutation set.
pub fn verify_group_axioms(elements: &[Permutation]) -> AxiomReport {
    let set: BTreeSet<&Permutation> = elements.iter().collect();
    let mut report = AxiomReport::default();
    match elements.first() {
        Some(t) => report.missing_identity = !set.contains(&Permutation::identity(&t.universe)),
        None => report.missing_identity = true,
    }
    report.missing_inverses = elements
        .iter()
        .filter(|t| !set.contains(&t.inverse()))
        .cloned()
        .collect();
    'outer: for t in elements {
        for t2 in elements {
            let p = t.then(t2);
            if !set.contains(&p) {
                report.not_closed = Some((t.clone(), t2.clone(), p));
                break 'outer;
            }
        }
    }
    report
}

/// A set of permutations of one universe satisfying the group axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformationGroup {
    universe: Universe,
    /// Sorted; identity first.
    elements: Vec<Permutation>,
}

impl TransformationGroup {
    /// Accepts an explicit element list after verifying the axioms.
    pub fn from_elements(universe: &Universe, elements: Vec<Permutation>) -> Result<Self> {
        if elements.iter().any(|t| t.universe != *universe) {
            return Err(Error::UniverseMismatch);
        }
        let mut elements: Vec<Permutation> = elements
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let report = verify_group_axioms(&elements);
        if !report.holds() {
            return Err(Error::InvalidGroup(Box::new(report)));
        }
        elements.sort();
        Ok(TransformationGroup {
            universe: universe.clone(),
            elements,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn verify(&self) -> AxiomReport {
        verify_group_axioms(&self.elements)
    }

    /// `{t(u) : t ∈ G}` as a mask.
    pub fn orbit_of(&self, u: usize) -> u64 {
        self.elements.iter().fold(0, |acc, t| acc | 1 << t.apply(u))
    }

    pub fn stabilizer_order(&self, u: usize) -> usize {
        self.elements.iter().filter(|t| t.apply(u) == u).count()
    }
}

/// Smallest group containing `generators`, by breadth-first closure.
pub fn generate_group(
    universe: &Universe,
    generators: &[Permutation],
    bound: usize,
) -> Result<TransformationGroup> {
    if generators.iter().any(|g| g.universe != *universe) {
        return Err(Error::UniverseMismatch);
    }
    let id = Permutation::identity(universe);
    let mut seen: BTreeSet<Permutation> = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    // In a finite group, closure under right multiplication by generators
    // yields inverses too.
    while let Some(t) = queue.pop_front() {
        for g in generators {
            let next = t.then(g);
            if !seen.contains(&next) {
                if seen.len() >= bound {
                    return Err(Error::BoundExceeded {
                        what: "group closure",
                        size: seen.len() + 1,
                        bound,
                    });
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(TransformationGroup {
        universe: universe.clone(),
        elements: seen.into_iter().collect(),
    })
}

/// The relation `u ~ u'` iff some element sends `u` to `u'`, one row mask per
/// element. It is an equivalence relation whenever `elements` is a group.
pub fn orbit_relation(universe: &Universe, elements: &[Permutation]) -> Vec<u64> {
    (0..universe.size())
        .map(|u| elements.iter().fold(0, |acc, t| acc | 1 << t.apply(u)))
        .collect()
}

/// Whether a relation given as row masks is reflexive, symmetric and transitive.
pub fn is_equivalence(rows: &[u64]) -> bool {
    let reflexive = rows.iter().enumerate().all(|(u, r)| r >> u & 1 == 1);
    let symmetric = (0..rows.len()).all(|u| bits::ones(rows[u]).all(|v| rows[v] >> u & 1 == 1));
    let transitive = (0..rows.len()).all(|u| bits::ones(rows[u]).all(|v| rows[v] & !rows[u] == 0));
    reflexive && symmetric && transitive
}

/// Orbits of the group, as a partition.
pub fn orbit_partition(g: &TransformationGroup) -> SetPartition {
    let mut blocks = Vec::new();
    let mut covered = 0u64;
    for u in 0..g.universe.size() {
        if covered >> u & 1 == 0 {
            let orbit = g.orbit_of(u);
            covered |= orbit;
            blocks.push(orbit);
        }
    }
    SetPartition::from_masks(&g.universe, blocks).expect("orbits of a group partition U")
}

/// Orbit partition of an unverified permutation set; fails with the axiom
/// report when the set is not a group.
pub fn orbit_partition_checked(
    universe: &Universe,
    elements: Vec<Permutation>,
) -> Result<SetPartition> {
    TransformationGroup::from_elements(universe, elements).map(|g| orbit_partition(&g))
}

/// `t(S) ⊆ S` for every `t ∈ G`. The ket is read as a subset of `U`
/// whatever basis it is written in.
pub fn is_invariant(g: &TransformationGroup, s: &SetKet) -> Result<bool> {
    if s.universe() != g.universe() {
        return Err(Error::UniverseMismatch);
    }
    let mask = s.standard_mask();
    Ok(g.elements.iter().all(|t| t.apply_mask(mask) & !mask == 0))
}
