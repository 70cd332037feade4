use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::bits;
use crate::error::{Error, Result};

/// Largest supported universe; subsets are stored as `u64` masks.
pub const MAX_UNIVERSE: usize = 64;

/// A finite ordered set of distinct labels.
///
/// The order is fixed at construction. Element `i` is bit `i` in every subset
/// mask built over this universe. Two universes are equal when they carry the
/// same labels in the same order; cloning is cheap.
#[derive(Clone)]
pub struct Universe(Arc<Inner>);

struct Inner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if labels.len() > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge {
                size: labels.len(),
                max: MAX_UNIVERSE,
            });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Universe(Arc::new(Inner { labels, index })))
    }

    /// Universe with labels `e0, e1, ...`, handy for exhaustive checks.
    pub fn indexed(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| format!("e{i}")))
    }

    pub fn size(&self) -> usize {
        self.0.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Mask of the whole universe.
    pub fn full_mask(&self) -> u64 {
        bits::full(self.size())
    }

    pub fn mask_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<u64> {
        labels
            .iter()
            .try_fold(0u64, |acc, l| Ok(acc | 1 << self.require(l.as_ref())?))
    }

    pub fn elements(&self, mask: u64) -> Vec<&str> {
        bits::ones(mask).map(|i| self.label(i)).collect()
    }

    /// `{a,b}` for a subset mask, `∅` for the empty set.
    pub fn format_mask(&self, mask: u64) -> String {
        format_labels(bits::ones(mask).map(|i| self.label(i)))
    }

    /// All `2^n` subset masks in binary-counting order.
    pub fn subsets(&self) -> impl Iterator<Item = u64> {
        0..=self.full_mask()
    }

    pub fn ptr_eq(&self, other: &Universe) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

pub(crate) fn format_labels<'a>(labels: impl Iterator<Item = &'a str>) -> String {
    let items: Vec<&str> = labels.collect();
    if items.is_empty() {
        "∅".to_string()
    } else {
        format!("{{{}}}", items.join(","))
    }
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other) || self.0.labels == other.0.labels
    }
}

impl Eq for Universe {}

impl PartialOrd for Universe {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Universe {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.labels().cmp(other.labels())
    }
}

impl Hash for Universe {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.labels.hash(state);
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Universe{:?}", self.0.labels)
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_mask(self.full_mask()))
    }
}
