//! The power set of a universe as the vector space `Z2^n`.
//!
//! Addition is symmetric difference. A [`Basis`] is any list of `n`
//! independent subsets; a [`SetKet`] is a vector written as a subset of some
//! basis. Subsets are bit masks throughout and all linear algebra is
//! word-level Gauss-Jordan elimination.

use std::cmp::Reverse;
use std::fmt;
use std::sync::Arc;

use crate::bits;
use crate::error::{Error, Result};
use crate::universe::{format_labels, Universe};

/// Default cap on `|U|` for [`ket_table`] (the table has `2^n` rows).
pub const DEFAULT_TABLE_BOUND: usize = 10;

struct Reduced {
    /// (row, combination of input indices producing it). Each row has a
    /// distinct pivot bit that no other row contains.
    rows: Vec<(u64, u64)>,
    /// First nontrivial combination of inputs summing to zero, if any.
    dependency: Option<u64>,
}

fn reduce(vectors: &[u64]) -> Reduced {
    let mut rows: Vec<(u64, u64)> = Vec::with_capacity(vectors.len());
    let mut dependency = None;
    for (i, &v) in vectors.iter().enumerate() {
        let (mut cur, mut comb) = (v, 1u64 << i);
        for &(row, rc) in &rows {
            if cur & (1 << bits::least(row)) != 0 {
                cur ^= row;
                comb ^= rc;
            }
        }
        if cur == 0 {
            dependency.get_or_insert(comb);
            continue;
        }
        let pivot = 1u64 << bits::least(cur);
        for (row, rc) in rows.iter_mut() {
            if *row & pivot != 0 {
                *row ^= cur;
                *rc ^= comb;
            }
        }
        rows.push((cur, comb));
    }
    Reduced { rows, dependency }
}

/// GF(2) rank of a list of vectors.
pub fn rank(vectors: &[u64]) -> usize {
    reduce(vectors).rows.len()
}

/// An ordered list of `|U|` independent subsets of `U`.
///
/// Equality ignores the display name and labels: two bases are equal when
/// they have the same vectors, in the same order, over the same universe.
#[derive(Clone)]
pub struct Basis(Arc<BasisInner>);

struct BasisInner {
    name: String,
    universe: Universe,
    labels: Vec<String>,
    vectors: Vec<u64>,
    /// `inverse[i]` is the coordinate mask of the singleton `{u_i}`.
    inverse: Vec<u64>,
}

/// Validates `vectors` as a basis of `℘(U)`.
pub fn check_basis(
    universe: &Universe,
    name: impl Into<String>,
    labels: Vec<String>,
    vectors: Vec<u64>,
) -> Result<Basis> {
    let n = universe.size();
    if vectors.len() != n {
        return Err(Error::WrongBasisSize {
            expected: n,
            got: vectors.len(),
        });
    }
    if labels.len() != n {
        return Err(Error::WrongBasisSize {
            expected: n,
            got: labels.len(),
        });
    }
    if let Some(i) = (1..n).find(|&i| labels[..i].contains(&labels[i])) {
        return Err(Error::DuplicateLabel(labels[i].clone()));
    }
    let full = universe.full_mask();
    if let Some(v) = vectors.iter().find(|v| **v & !full != 0) {
        return Err(Error::OutsideUniverse(format!("basis vector {v:#b}")));
    }
    let reduced = reduce(&vectors);
    if let Some(dep) = reduced.dependency {
        return Err(Error::RankDeficient {
            rank: reduced.rows.len(),
            dependent: bits::ones(dep).collect(),
        });
    }
    let mut inverse = vec![0u64; n];
    for (row, comb) in reduced.rows {
        debug_assert_eq!(bits::count(row), 1);
        inverse[bits::least(row)] = comb;
    }
    Ok(Basis(Arc::new(BasisInner {
        name: name.into(),
        universe: universe.clone(),
        labels,
        vectors,
        inverse,
    })))
}

impl Basis {
    /// The singletons of `U` in universe order, named `name`.
    pub fn standard_named(universe: &Universe, name: impl Into<String>) -> Basis {
        let n = universe.size();
        let singletons: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        Basis(Arc::new(BasisInner {
            name: name.into(),
            universe: universe.clone(),
            labels: universe.labels().to_vec(),
            vectors: singletons.clone(),
            inverse: singletons,
        }))
    }

    pub fn standard(universe: &Universe) -> Basis {
        Self::standard_named(universe, "U")
    }

    /// Builds a basis from labelled subsets given by element labels.
    pub fn from_subsets<L, S>(
        universe: &Universe,
        name: impl Into<String>,
        vectors: &[(L, Vec<S>)],
    ) -> Result<Basis>
    where
        L: AsRef<str>,
        S: AsRef<str>,
    {
        let labels = vectors
            .iter()
            .map(|(l, _)| l.as_ref().to_string())
            .collect();
        let masks = vectors
            .iter()
            .map(|(_, s)| universe.mask_of(s))
            .collect::<Result<Vec<_>>>()?;
        check_basis(universe, name, labels, masks)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn universe(&self) -> &Universe {
        &self.0.universe
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn dim(&self) -> usize {
        self.0.vectors.len()
    }

    /// Basis vectors as standard-basis masks.
    pub fn vectors(&self) -> &[u64] {
        &self.0.vectors
    }

    pub fn is_standard(&self) -> bool {
        self.0.vectors.iter().enumerate().all(|(i, v)| *v == 1 << i)
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.0.labels.iter().position(|l| l == label)
    }

    pub fn coords_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<u64> {
        labels.iter().try_fold(0u64, |acc, l| {
            let i = self
                .label_index(l.as_ref())
                .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_string()))?;
            Ok(acc | 1 << i)
        })
    }

    /// Sum of the basis vectors selected by `coords`, as a standard mask.
    pub fn expand(&self, coords: u64) -> u64 {
        bits::ones(coords).fold(0, |acc, j| acc ^ self.0.vectors[j])
    }

    /// Coordinates of a standard mask in this basis.
    pub fn coordinates(&self, mask: u64) -> u64 {
        bits::ones(mask).fold(0, |acc, i| acc ^ self.0.inverse[i])
    }

    /// `{a',b'}` for a coordinate mask.
    pub fn format_coords(&self, coords: u64) -> String {
        format_labels(bits::ones(coords).map(|j| self.0.labels[j].as_str()))
    }

    /// `U'={a',b',c'}`, the column heading used in ket tables.
    pub fn heading(&self) -> String {
        format!(
            "{}={}",
            self.name(),
            self.format_coords(bits::full(self.dim()))
        )
    }
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.universe == other.0.universe && self.0.vectors == other.0.vectors)
    }
}

impl Eq for Basis {}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .0
            .labels
            .iter()
            .zip(&self.0.vectors)
            .map(|(l, v)| format!("{l}={}", self.0.universe.format_mask(*v)))
            .collect();
        write!(f, "Basis({}: {})", self.name(), vs.join(", "))
    }
}

/// A vector of `℘(U)` expressed in a particular basis.
///
/// Derived equality compares the basis and the coordinates; use
/// [`SetKet::same_vector`] to compare abstract vectors across bases.
#[derive(Clone, PartialEq, Eq)]
pub struct SetKet {
    basis: Basis,
    coords: u64,
}

impl SetKet {
    pub fn new(basis: &Basis, coords: u64) -> Result<SetKet> {
        if coords & !bits::full(basis.dim()) != 0 {
            return Err(Error::OutsideUniverse(format!(
                "coordinates {coords:#b} in basis `{}`",
                basis.name()
            )));
        }
        Ok(SetKet {
            basis: basis.clone(),
            coords,
        })
    }

    /// Ket in the standard basis of `universe` with the given subset mask.
    pub fn standard(universe: &Universe, mask: u64) -> Result<SetKet> {
        SetKet::new(&Basis::standard(universe), mask)
    }

    pub fn from_labels<S: AsRef<str>>(basis: &Basis, labels: &[S]) -> Result<SetKet> {
        SetKet::new(basis, basis.coords_of(labels)?)
    }

    pub fn empty(basis: &Basis) -> SetKet {
        SetKet {
            basis: basis.clone(),
            coords: 0,
        }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn universe(&self) -> &Universe {
        self.basis.universe()
    }

    pub fn coords(&self) -> u64 {
        self.coords
    }

    /// The subset of `U` this ket denotes.
    pub fn standard_mask(&self) -> u64 {
        self.basis.expand(self.coords)
    }

    pub fn is_zero(&self) -> bool {
        self.coords == 0
    }

    pub fn same_vector(&self, other: &SetKet) -> bool {
        self.universe() == other.universe() && self.standard_mask() == other.standard_mask()
    }

    /// Symmetric difference; both kets must be in the same basis.
    pub fn add(&self, other: &SetKet) -> Result<SetKet> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                expected: self.basis.name().to_string(),
                found: other.basis.name().to_string(),
            });
        }
        Ok(SetKet {
            basis: self.basis.clone(),
            coords: self.coords ^ other.coords,
        })
    }

    /// The same abstract vector written in `target`.
    pub fn to_basis(&self, target: &Basis) -> Result<SetKet> {
        if self.universe() != target.universe() {
            return Err(Error::UniverseMismatch);
        }
        if self.basis == *target {
            return Ok(SetKet {
                basis: target.clone(),
                coords: self.coords,
            });
        }
        Ok(SetKet {
            basis: target.clone(),
            coords: target.coordinates(self.standard_mask()),
        })
    }

    /// The same vector in the standard basis of its universe.
    pub fn to_standard(&self) -> SetKet {
        if self.basis.is_standard() {
            return self.clone();
        }
        SetKet {
            basis: Basis::standard(self.universe()),
            coords: self.standard_mask(),
        }
    }
}

impl fmt::Display for SetKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.basis.format_coords(self.coords))
    }
}

impl fmt::Debug for SetKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}⟩_{}", self, self.basis.name())
    }
}

/// Free function form of [`SetKet::add`].
pub fn add(s: &SetKet, t: &SetKet) -> Result<SetKet> {
    s.add(t)
}

/// Free function form of [`SetKet::to_basis`].
pub fn to_basis(s: &SetKet, target: &Basis) -> Result<SetKet> {
    s.to_basis(target)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowOrder {
    /// Nonempty subsets in binary-counting order (element 0 is the low
    /// bit), then the empty set.
    #[default]
    Binary,
    /// Descending cardinality; ties broken by span (last index minus first
    /// index, smaller first) and then by first element. This reproduces the
    /// classic three-basis table layout.
    Paper,
}

impl RowOrder {
    fn rows(self, universe: &Universe) -> Vec<u64> {
        let full = universe.full_mask();
        let mut rows: Vec<u64> = (1..=full).collect();
        if self == RowOrder::Paper {
            rows.sort_by_key(|&m| {
                let lo = bits::least(m);
                let hi = 63 - m.leading_zeros() as usize;
                (Reverse(bits::count(m)), hi - lo, lo)
            });
        }
        rows.push(0);
        rows
    }
}

/// Every ket of `℘(U)` written in each of several bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KetTable {
    bases: Vec<Basis>,
    /// Standard masks, one per row.
    rows: Vec<u64>,
}

impl KetTable {
    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn headings(&self) -> Vec<String> {
        self.bases.iter().map(Basis::heading).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row `k` as one ket per basis.
    pub fn row(&self, k: usize) -> Vec<SetKet> {
        let mask = self.rows[k];
        self.bases
            .iter()
            .map(|b| SetKet {
                basis: b.clone(),
                coords: b.coordinates(mask),
            })
            .collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<SetKet>> + '_ {
        (0..self.rows.len()).map(|k| self.row(k))
    }

    /// Rows rendered as strings, one cell per basis.
    pub fn cells(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }
}

/// Builds the ket table for `bases`, which must share one universe.
pub fn ket_table(bases: &[Basis], order: RowOrder, bound: usize) -> Result<KetTable> {
    let first = bases.first().ok_or(Error::WrongBasisSize {
        expected: 1,
        got: 0,
    })?;
    let universe = first.universe();
    if bases.iter().any(|b| b.universe() != universe) {
        return Err(Error::UniverseMismatch);
    }
    if universe.size() > bound {
        return Err(Error::BoundExceeded {
            what: "ket table",
            size: universe.size(),
            bound,
        });
    }
    Ok(KetTable {
        bases: bases.to_vec(),
        rows: order.rows(universe),
    })
}

/// A linear map `℘(U) → ℘(U)` as a bit matrix.
///
/// Column `j` is the image of domain basis vector `j`, written in codomain
/// coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearMap {
    domain: Basis,
    codomain: Basis,
    columns: Vec<u64>,
}

impl LinearMap {
    pub fn new(domain: &Basis, codomain: &Basis, columns: Vec<u64>) -> Result<LinearMap> {
        let n = domain.dim();
        if domain.universe() != codomain.universe() {
            return Err(Error::UniverseMismatch);
        }
        if columns.len() != n || columns.iter().any(|c| c & !bits::full(n) != 0) {
            return Err(Error::MatrixShape { n });
        }
        Ok(LinearMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            columns,
        })
    }

    /// Endomorphism on one basis.
    pub fn on_basis(basis: &Basis, columns: Vec<u64>) -> Result<LinearMap> {
        Self::new(basis, basis, columns)
    }

    pub fn identity(basis: &Basis) -> LinearMap {
        LinearMap {
            domain: basis.clone(),
            codomain: basis.clone(),
            columns: (0..basis.dim()).map(|j| 1u64 << j).collect(),
        }
    }

    /// The permutation matrix sending `{u}` to `{t(u)}` in the standard basis.
    pub fn from_permutation(perm: &crate::group::Permutation) -> LinearMap {
        let basis = Basis::standard(perm.universe());
        let columns = (0..basis.dim()).map(|j| 1u64 << perm.apply(j)).collect();
        LinearMap {
            domain: basis.clone(),
            codomain: basis,
            columns,
        }
    }

    pub fn domain(&self) -> &Basis {
        &self.domain
    }

    pub fn codomain(&self) -> &Basis {
        &self.codomain
    }

    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    pub fn rank(&self) -> usize {
        rank(&self.columns)
    }

    pub fn apply(&self, s: &SetKet) -> Result<SetKet> {
        if s.basis != self.domain {
            return Err(Error::BasisMismatch {
                expected: self.domain.name().to_string(),
                found: s.basis.name().to_string(),
            });
        }
        let coords = bits::ones(s.coords).fold(0, |acc, j| acc ^ self.columns[j]);
        Ok(SetKet {
            basis: self.codomain.clone(),
            coords,
        })
    }
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self
            .columns
            .iter()
            .zip(self.domain.labels())
            .map(|(c, l)| format!("{l}->{}", self.codomain.format_coords(*c)))
            .collect();
        write!(f, "LinearMap({})", cols.join(", "))
    }
}

/// Matrix-vector product over GF(2).
pub fn apply_map(m: &LinearMap, s: &SetKet) -> Result<SetKet> {
    m.apply(s)
}

/// Full rank, equivalently injective on all `2^n` kets.
pub fn is_nonsingular(m: &LinearMap) -> bool {
    m.rank() == m.domain.dim()
}
