//! The partition lattice of a small universe as a ranked diagram.

use qmsets::partition::covers;
use qmsets::{enumerate_partitions, SetPartition, Universe};

use crate::render::Table;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    /// Nodes from the discrete partition down to the indiscrete one; within
    /// a rank, in enumeration order.
    pub nodes: Vec<SetPartition>,
    /// Rank of each node: its block count minus one.
    pub ranks: Vec<usize>,
    /// Covering pairs `(lower, upper)` as node indices: `upper` refines
    /// `lower` with exactly one more block.
    pub edges: Vec<(usize, usize)>,
}

/// All partitions of `universe` with their covering relation.
pub fn lattice_render(universe: &Universe, bound: usize) -> qmsets::Result<Lattice> {
    let mut nodes = enumerate_partitions(universe, bound)?;
    nodes.sort_by_key(|p| std::cmp::Reverse(p.block_count()));
    let ranks: Vec<usize> = nodes.iter().map(|p| p.block_count() - 1).collect();
    let mut edges = Vec::new();
    for (lo, lower) in nodes.iter().enumerate() {
        for (hi, upper) in nodes.iter().enumerate() {
            if ranks[hi] == ranks[lo] + 1 && covers(upper, lower)? {
                edges.push((lo, hi));
            }
        }
    }
    edges.sort_by_key(|&(lo, hi)| (hi, lo));
    Ok(Lattice {
        nodes,
        ranks,
        edges,
    })
}

impl Lattice {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// One line per rank, top rank first, then the covering pairs.
    pub fn diagram(&self) -> String {
        let mut out = String::new();
        let top = self.ranks.first().copied().unwrap_or(0);
        for rank in (0..=top).rev() {
            let row: Vec<String> = self
                .nodes
                .iter()
                .zip(&self.ranks)
                .filter(|(_, r)| **r == rank)
                .map(|(p, _)| p.to_string())
                .collect();
            out.push_str(&format!("rank {rank}: {}\n", row.join("   ")));
        }
        out.push_str(&format!("covers ({}):\n", self.edges.len()));
        for &(lo, hi) in &self.edges {
            out.push_str(&format!("  {} < {}\n", self.nodes[lo], self.nodes[hi]));
        }
        out
    }

    pub fn tables(&self) -> Vec<Table> {
        let mut nodes = Table::new("nodes", &["node", "rank", "partition"]);
        for (k, (p, r)) in self.nodes.iter().zip(&self.ranks).enumerate() {
            nodes.push(vec![k.to_string(), r.to_string(), p.to_string()]);
        }
        let mut edges = Table::new("covers", &["lower", "upper"]);
        for &(lo, hi) in &self.edges {
            edges.push(vec![self.nodes[lo].to_string(), self.nodes[hi].to_string()]);
        }
        vec![nodes, edges]
    }
}
