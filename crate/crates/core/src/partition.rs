//! Set partitions of a universe and the partition lattice.
//!
//! A partition is kept in canonical form: each block is a subset mask and the
//! blocks are sorted by their least element, so structural equality is
//! partition equality. The refinement order puts the indiscrete partition
//! (one block) at the bottom and the discrete partition (all singletons) at
//! the top; join moves up by intersecting blocks.

use std::fmt;

use num_rational::Ratio;

use crate::bits;
use crate::error::{Error, Result};
use crate::universe::Universe;

/// Default cap on `|U|` for [`enumerate_partitions`]. Bell(6) = 203.
pub const DEFAULT_PARTITION_BOUND: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    universe: Universe,
    blocks: Vec<u64>,
}

impl SetPartition {
    /// Builds a partition from block masks, checking that the blocks are
    /// nonempty, disjoint and cover the universe.
    pub fn from_masks(universe: &Universe, masks: impl IntoIterator<Item = u64>) -> Result<Self> {
        let full = universe.full_mask();
        let mut seen = 0u64;
        let mut blocks = Vec::new();
        for m in masks {
            if m == 0 {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if m & !full != 0 {
                return Err(Error::InvalidPartition(
                    "block contains elements outside the universe".into(),
                ));
            }
            if m & seen != 0 {
                return Err(Error::InvalidPartition(format!(
                    "blocks overlap in {}",
                    universe.format_mask(m & seen)
                )));
            }
            seen |= m;
            blocks.push(m);
        }
        if seen != full {
            return Err(Error::InvalidPartition(format!(
                "blocks miss {}",
                universe.format_mask(full & !seen)
            )));
        }
        Ok(Self::canonical(universe.clone(), blocks))
    }

    pub fn from_blocks<S: AsRef<str>>(universe: &Universe, blocks: &[Vec<S>]) -> Result<Self> {
        let masks = blocks
            .iter()
            .map(|b| universe.mask_of(b))
            .collect::<Result<Vec<_>>>()?;
        if let Some(b) = blocks
            .iter()
            .zip(&masks)
            .find(|(b, m)| bits::count(**m) != b.len())
        {
            let labels: Vec<&str> = b.0.iter().map(AsRef::as_ref).collect();
            return Err(Error::InvalidPartition(format!(
                "repeated label in block {{{}}}",
                labels.join(",")
            )));
        }
        Self::from_masks(universe, masks)
    }

    /// Builds a partition from a block index per element (e.g. a restricted
    /// growth string). Indices need not be contiguous.
    pub fn from_assignment(universe: &Universe, assignment: &[usize]) -> Result<Self> {
        if assignment.len() != universe.size() {
            return Err(Error::InvalidPartition(format!(
                "assignment has {} entries for a universe of {}",
                assignment.len(),
                universe.size()
            )));
        }
        let mut groups: Vec<(usize, u64)> = Vec::new();
        for (i, &k) in assignment.iter().enumerate() {
            match groups.iter_mut().find(|(key, _)| *key == k) {
                Some((_, m)) => *m |= 1 << i,
                None => groups.push((k, 1 << i)),
            }
        }
        Ok(Self::canonical(
            universe.clone(),
            groups.into_iter().map(|(_, m)| m).collect(),
        ))
    }

    /// Parses the canonical text form, e.g. `{a}|{b,c}`.
    pub fn parse(universe: &Universe, text: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        for part in text.split('|') {
            let part = part.trim();
            let inner = part
                .strip_prefix('{')
                .and_then(|p| p.strip_suffix('}'))
                .ok_or_else(|| Error::InvalidPartition(format!("malformed block `{part}`")))?;
            let labels: Vec<&str> = inner
                .split(',')
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            blocks.push(labels);
        }
        Self::from_blocks(universe, &blocks)
    }

    fn canonical(universe: Universe, mut blocks: Vec<u64>) -> Self {
        blocks.sort_unstable_by_key(|m| bits::least(*m));
        SetPartition { universe, blocks }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Block masks ordered by least element.
    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_labels(&self) -> Vec<Vec<&str>> {
        self.blocks
            .iter()
            .map(|m| self.universe.elements(*m))
            .collect()
    }

    /// Mask of the block containing element `i`.
    pub fn block_of(&self, i: usize) -> u64 {
        *self
            .blocks
            .iter()
            .find(|m| *m >> i & 1 == 1)
            .expect("blocks cover the universe")
    }

    /// Re-checks the partition invariants. Always `Ok` for values built by
    /// this module.
    pub fn validate(&self) -> Result<()> {
        Self::from_masks(&self.universe, self.blocks.iter().copied()).map(|_| ())
    }

    pub fn is_indiscrete(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.universe.size()
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            f.write_str(&self.universe.format_mask(*m))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetPartition({self})")
    }
}

/// The one-block partition `{U}`.
pub fn indiscrete(universe: &Universe) -> SetPartition {
    SetPartition::canonical(universe.clone(), vec![universe.full_mask()])
}

/// The all-singletons partition.
pub fn discrete(universe: &Universe) -> SetPartition {
    SetPartition::canonical(
        universe.clone(),
        (0..universe.size()).map(|i| 1u64 << i).collect(),
    )
}

fn same_universe(p: &SetPartition, q: &SetPartition) -> Result<()> {
    if p.universe == q.universe {
        Ok(())
    } else {
        Err(Error::UniverseMismatch)
    }
}

/// Partition whose blocks are the nonempty intersections `B ∩ C`.
pub fn join(p: &SetPartition, q: &SetPartition) -> Result<SetPartition> {
    same_universe(p, q)?;
    let blocks = p
        .blocks
        .iter()
        .flat_map(|b| q.blocks.iter().map(move |c| b & c))
        .filter(|m| *m != 0)
        .collect();
    Ok(SetPartition::canonical(p.universe.clone(), blocks))
}

/// Finest common coarsening: blocks of `p` and `q` that overlap are merged
/// until no two blocks overlap. Provided for lattice rendering.
pub fn meet(p: &SetPartition, q: &SetPartition) -> Result<SetPartition> {
    same_universe(p, q)?;
    // `merged` stays pairwise disjoint, so anything overlapping the grown
    // block already overlapped `b` and one pass suffices.
    let mut merged: Vec<u64> = Vec::new();
    for &b in p.blocks.iter().chain(&q.blocks) {
        let mut acc = b;
        merged.retain(|&m| {
            if m & b != 0 {
                acc |= m;
                false
            } else {
                true
            }
        });
        merged.push(acc);
    }
    Ok(SetPartition::canonical(p.universe.clone(), merged))
}

/// True iff every block of `p` lies inside some block of `q`, i.e. `p` is at
/// least as refined as `q`.
pub fn refines(p: &SetPartition, q: &SetPartition) -> Result<bool> {
    same_universe(p, q)?;
    Ok(p.blocks
        .iter()
        .all(|b| q.blocks.iter().any(|c| b & !c == 0)))
}

/// True iff `upper` covers `lower` in the refinement order: `upper` strictly
/// refines `lower` with nothing in between. In the partition lattice that
/// means exactly one block of `lower` is split in two.
pub fn covers(upper: &SetPartition, lower: &SetPartition) -> Result<bool> {
    Ok(upper.block_count() == lower.block_count() + 1 && refines(upper, lower)?)
}

/// The occupation numbers of the blocks, largest first.
pub fn block_sizes(p: &SetPartition) -> Vec<usize> {
    let mut sizes: Vec<usize> = p.blocks.iter().map(|m| bits::count(*m)).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Ordered pairs of elements lying in different blocks.
pub fn dit(p: &SetPartition) -> DitSet {
    let full = p.universe.full_mask();
    let rows = (0..p.universe.size())
        .map(|i| full & !p.block_of(i))
        .collect();
    DitSet {
        universe: p.universe.clone(),
        rows,
    }
}

/// `|dit(p)| / |U|^2`.
pub fn logical_entropy(p: &SetPartition) -> Ratio<u64> {
    let n = p.universe.size() as u64;
    Ratio::new(dit(p).len() as u64, n * n)
}

/// Every partition of `universe` exactly once, in lexicographic order of
/// restricted growth strings (so the indiscrete partition comes first and
/// the discrete one last).
pub fn enumerate_partitions(universe: &Universe, bound: usize) -> Result<Vec<SetPartition>> {
    let n = universe.size();
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "partition enumeration",
            size: n,
            bound,
        });
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    // prefix_max[i] = max(rgs[0..=i])
    let mut prefix_max = vec![0usize; n];
    loop {
        out.push(SetPartition::from_assignment(universe, &rgs)?);
        // Find the rightmost position that can be incremented.
        let mut i = n;
        loop {
            if i <= 1 {
                return Ok(out);
            }
            i -= 1;
            if rgs[i] <= prefix_max[i - 1] {
                break;
            }
        }
        rgs[i] += 1;
        prefix_max[i] = prefix_max[i - 1].max(rgs[i]);
        for j in i + 1..n {
            rgs[j] = 0;
            prefix_max[j] = prefix_max[i];
        }
    }
}

/// The distinctions of a partition: ordered pairs `(u, u')` in different
/// blocks. Stored as one row mask per element.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DitSet {
    universe: Universe,
    rows: Vec<u64>,
}

impl DitSet {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| bits::count(*r)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| *r == 0)
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    /// Pairs in row-major order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(u, r)| bits::ones(*r).map(move |v| (u, v)))
            .collect()
    }

    pub fn union(&self, other: &DitSet) -> Result<DitSet> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch);
        }
        Ok(DitSet {
            universe: self.universe.clone(),
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a | b)
                .collect(),
        })
    }

    pub fn is_subset(&self, other: &DitSet) -> Result<bool> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch);
        }
        Ok(self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0))
    }

    pub fn is_irreflexive(&self) -> bool {
        self.rows.iter().enumerate().all(|(u, r)| r >> u & 1 == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().into_iter().all(|(u, v)| self.contains(v, u))
    }

    /// Whether the complement within `U x U` (the indistinctness relation) is
    /// reflexive, symmetric and transitive.
    pub fn complement_is_equivalence(&self) -> bool {
        let full = self.universe.full_mask();
        let same: Vec<u64> = self.rows.iter().map(|r| full & !r).collect();
        let reflexive = same.iter().enumerate().all(|(u, r)| r >> u & 1 == 1);
        let symmetric = (0..same.len()).all(|u| bits::ones(same[u]).all(|v| same[v] >> u & 1 == 1));
        let transitive =
            (0..same.len()).all(|u| bits::ones(same[u]).all(|v| same[v] & !same[u] == 0));
        reflexive && symmetric && transitive
    }
}

impl fmt::Display for DitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(u, v)| format!("({},{})", self.universe.label(u), self.universe.label(v)))
            .collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

impl fmt::Debug for DitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DitSet{self}")
    }
}
