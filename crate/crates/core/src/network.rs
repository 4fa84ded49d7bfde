//! Binary undirected networks and their lower-triangular vectorization.
//!
//! Nodes and edges are indexed from zero. Edges are ordered column-wise over
//! the strictly lower triangle: `(1,0), (2,0), …, (V-1,0), (2,1), …, (V-1,V-2)`,
//! so edge `l` of a file or parameter vector always refers to the same pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bijection between node pairs `(v, u)` with `v > u` and edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeIndexMap {
    nodes: usize,
    pairs: Vec<(u32, u32)>,
}

impl EdgeIndexMap {
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < 2 {
            return Err(Error::TooFewNodes(nodes));
        }
        let mut pairs = Vec::with_capacity(nodes * (nodes - 1) / 2);
        for u in 0..nodes {
            for v in u + 1..nodes {
                pairs.push((v as u32, u as u32));
            }
        }
        Ok(Self { nodes, pairs })
    }

    /// Recovers the node count from an edge-vector length.
    pub fn from_edge_count(edges: usize) -> Result<Self> {
        let nodes = ((1.0 + (1.0 + 8.0 * edges as f64).sqrt()) / 2.0).round() as usize;
        if nodes < 2 || nodes * (nodes - 1) / 2 != edges {
            return Err(Error::NotAnEdgeCount(edges));
        }
        Self::new(nodes)
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> usize {
        self.pairs.len()
    }

    /// Linear index of the pair `(v, u)`, requiring `u < v < V`.
    pub fn edge_index(&self, v: usize, u: usize) -> Result<usize> {
        if v >= self.nodes {
            return Err(Error::NodeOutOfRange {
                node: v,
                nodes: self.nodes,
            });
        }
        if u >= v {
            return Err(Error::NotLowerTriangular { v, u });
        }
        Ok(self.index_unchecked(v, u))
    }

    #[inline]
    pub(crate) fn index_unchecked(&self, v: usize, u: usize) -> usize {
        u * self.nodes - u * (u + 1) / 2 + (v - u - 1)
    }

    /// Index of the unordered pair `{a, b}`, `a != b`.
    #[inline]
    pub(crate) fn index_unordered(&self, a: usize, b: usize) -> usize {
        if a > b {
            self.index_unchecked(a, b)
        } else {
            self.index_unchecked(b, a)
        }
    }

    /// Inverse of [`edge_index`](Self::edge_index): the pair `(v, u)` with `v > u`.
    pub fn edge_pair(&self, l: usize) -> Result<(usize, usize)> {
        self.pairs
            .get(l)
            .map(|&(v, u)| (v as usize, u as usize))
            .ok_or(Error::EdgeOutOfRange {
                index: l,
                edges: self.pairs.len(),
            })
    }

    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|&(v, u)| (v as usize, u as usize))
    }
}

/// Dense `V × V` adjacency matrix, row-major, entries as parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    nodes: usize,
    cells: Vec<u8>,
}

impl Adjacency {
    pub fn zeros(nodes: usize) -> Self {
        Self {
            nodes,
            cells: vec![0; nodes * nodes],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let nodes = rows.len();
        let mut cells = Vec::with_capacity(nodes * nodes);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != nodes {
                return Err(Error::parse(
                    i + 1,
                    format!("row has {} columns, expected {nodes}", row.len()),
                ));
            }
            cells.extend_from_slice(row);
        }
        Ok(Self { nodes, cells })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.nodes + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.cells[row * self.nodes + col] = value;
    }

    /// Sets both `(a, b)` and `(b, a)`.
    pub fn set_symmetric(&mut self, a: usize, b: usize, value: u8) {
        self.set(a, b, value);
        self.set(b, a, value);
    }
}

/// Lower-triangular edge vector of a symmetric binary matrix. The diagonal is ignored.
pub fn vectorize(adjacency: &Adjacency) -> Result<Vec<u8>> {
    let n = adjacency.nodes();
    for row in 0..n {
        for col in 0..n {
            if row == col {
                continue;
            }
            let value = adjacency.get(row, col);
            if value > 1 {
                return Err(Error::NonBinary {
                    row,
                    col,
                    value: value.to_string(),
                });
            }
            if col < row && value != adjacency.get(col, row) {
                return Err(Error::Asymmetric { row, col });
            }
        }
    }
    let map = EdgeIndexMap::new(n)?;
    Ok(map.pairs().map(|(v, u)| adjacency.get(v, u)).collect())
}

/// Symmetric adjacency matrix with zero diagonal from an edge vector.
pub fn matricize(edges: &[u8], map: &EdgeIndexMap) -> Result<Adjacency> {
    if edges.len() != map.edges() {
        return Err(Error::DimensionMismatch {
            what: "edge vector",
            expected: map.edges(),
            found: edges.len(),
        });
    }
    let mut adjacency = Adjacency::zeros(map.nodes());
    for ((v, u), &a) in map.pairs().zip(edges) {
        adjacency.set_symmetric(v, u, a);
    }
    Ok(adjacency)
}

/// Diagnostic group: control (`y = 0`) or case (`y = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Group {
    Control,
    Case,
}

impl Group {
    pub const BOTH: [Group; 2] = [Group::Control, Group::Case];

    pub fn index(self) -> usize {
        match self {
            Group::Control => 0,
            Group::Case => 1,
        }
    }

    pub fn from_index(y: usize) -> Option<Self> {
        match y {
            0 => Some(Group::Control),
            1 => Some(Group::Case),
            _ => None,
        }
    }
}

/// One subject's network and group label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkObservation {
    pub subject_id: String,
    pub label: Group,
    pub edges: Vec<u8>,
}

impl NetworkObservation {
    pub fn new(subject_id: impl Into<String>, label: Group, edges: Vec<u8>) -> Result<Self> {
        if let Some(pos) = edges.iter().position(|&a| a > 1) {
            return Err(Error::NonBinary {
                row: pos,
                col: 0,
                value: edges[pos].to_string(),
            });
        }
        Ok(Self {
            subject_id: subject_id.into(),
            label,
            edges,
        })
    }
}

/// Checks that all observations share one edge count and returns its map.
pub fn common_edge_map(data: &[NetworkObservation]) -> Result<EdgeIndexMap> {
    let first = data.first().ok_or(Error::EmptyData)?;
    let map = EdgeIndexMap::from_edge_count(first.edges.len())?;
    for obs in data {
        if obs.edges.len() != map.edges() {
            return Err(Error::DimensionMismatch {
                what: "subject edge vector",
                expected: map.edges(),
                found: obs.edges.len(),
            });
        }
    }
    Ok(map)
}

/// Hemisphere of a brain region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Hemisphere {
    Left,
    Right,
    Other,
}

impl Hemisphere {
    pub fn code(self) -> &'static str {
        match self {
            Hemisphere::Left => "L",
            Hemisphere::Right => "R",
            Hemisphere::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeInfo {
    pub name: String,
    pub hemisphere: Hemisphere,
    pub lobe: String,
}

/// Names, hemispheres and lobes of the nodes, in node order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeMetadata {
    nodes: Vec<NodeInfo>,
}

impl NodeMetadata {
    /// Names must be unique.
    pub fn new(nodes: Vec<NodeInfo>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for n in &nodes {
            if !seen.insert(n.name.as_str()) {
                return Err(Error::InvalidMetadata(format!("duplicate node name {:?}", n.name)));
            }
        }
        Ok(Self { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[NodeInfo] {
        &self.nodes
    }

    /// Errors unless there is exactly one row per node of `map`.
    pub fn check_nodes(&self, map: &EdgeIndexMap) -> Result<()> {
        if self.nodes.len() != map.nodes() {
            return Err(Error::DimensionMismatch {
                what: "node metadata rows",
                expected: map.nodes(),
                found: self.nodes.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn metadata_names_are_unique() {
        let info = |name: &str| NodeInfo {
            name: name.into(),
            hemisphere: Hemisphere::Left,
            lobe: "frontal".into(),
        };
        assert!(NodeMetadata::new(vec![info("a"), info("b")]).is_ok());
        assert!(NodeMetadata::new(vec![info("a"), info("a")]).is_err());
        let meta = NodeMetadata::new(vec![info("a"), info("b")]).unwrap();
        assert!(meta.check_nodes(&EdgeIndexMap::new(2).unwrap()).is_ok());
        assert!(meta.check_nodes(&EdgeIndexMap::new(3).unwrap()).is_err());
    }

    #[test]
    fn first_and_last_edges() {
        let map = EdgeIndexMap::new(68).unwrap();
        assert_eq!(map.edges(), 2278);
        assert_eq!(map.edge_index(1, 0).unwrap(), 0);
        assert_eq!(map.edge_index(67, 66).unwrap(), 2277);
    }

    #[test]
    fn column_wise_order_at_four_nodes() {
        let map = EdgeIndexMap::new(4).unwrap();
        let order: Vec<_> = map.pairs().collect();
        assert_eq!(order, vec![(1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (3, 2)]);
        // (v=3, u=2) in one-based numbering is the fourth edge
        assert_eq!(map.edge_index(2, 1).unwrap(), 3);
    }

    #[test]
    fn rejects_bad_pairs() {
        let map = EdgeIndexMap::new(4).unwrap();
        assert!(matches!(
            map.edge_index(4, 1),
            Err(Error::NodeOutOfRange { .. })
        ));
        assert!(matches!(
            map.edge_index(1, 1),
            Err(Error::NotLowerTriangular { .. })
        ));
        assert!(matches!(
            map.edge_index(1, 2),
            Err(Error::NotLowerTriangular { .. })
        ));
        assert!(map.edge_pair(6).is_err());
        assert!(EdgeIndexMap::new(1).is_err());
    }

    #[test]
    fn edge_count_inversion() {
        assert_eq!(EdgeIndexMap::from_edge_count(2278).unwrap().nodes(), 68);
        assert_eq!(EdgeIndexMap::from_edge_count(1).unwrap().nodes(), 2);
        assert!(EdgeIndexMap::from_edge_count(5).is_err());
        assert!(EdgeIndexMap::from_edge_count(0).is_err());
    }

    #[test]
    fn vectorize_small_cases() {
        let empty = Adjacency::zeros(4);
        assert_eq!(vectorize(&empty).unwrap(), vec![0; 6]);

        let mut complete = Adjacency::zeros(4);
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    complete.set(a, b, 1);
                }
            }
        }
        assert_eq!(vectorize(&complete).unwrap(), vec![1; 6]);

        let mut single = Adjacency::zeros(4);
        single.set_symmetric(2, 1, 1);
        assert_eq!(vectorize(&single).unwrap(), vec![0, 0, 0, 1, 0, 0]);
    }

    #[test]
    fn vectorize_ignores_diagonal_and_rejects_bad_input() {
        let mut a = Adjacency::zeros(3);
        a.set(0, 0, 1);
        a.set(2, 2, 7);
        assert_eq!(vectorize(&a).unwrap(), vec![0, 0, 0]);

        let mut asym = Adjacency::zeros(3);
        asym.set(2, 0, 1);
        assert!(matches!(vectorize(&asym), Err(Error::Asymmetric { .. })));

        let mut two = Adjacency::zeros(3);
        two.set_symmetric(1, 0, 2);
        assert!(matches!(vectorize(&two), Err(Error::NonBinary { .. })));
    }

    proptest! {
        #[test]
        fn index_round_trip(nodes in 2usize..40, seed in any::<u64>()) {
            let map = EdgeIndexMap::new(nodes).unwrap();
            let l = (seed as usize) % map.edges();
            let (v, u) = map.edge_pair(l).unwrap();
            prop_assert!(u < v);
            prop_assert_eq!(map.edge_index(v, u).unwrap(), l);
        }

        #[test]
        fn matricize_inverts_vectorize(edges in proptest::collection::vec(0u8..2, 15)) {
            let map = EdgeIndexMap::new(6).unwrap();
            let adjacency = matricize(&edges, &map).unwrap();
            for v in 0..6 {
                prop_assert_eq!(adjacency.get(v, v), 0);
            }
            prop_assert_eq!(vectorize(&adjacency).unwrap(), edges);
        }
    }
}
