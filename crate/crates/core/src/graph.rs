//! Extended graphs: finite multigraphs that admit loops, parallel edges, and
//! artificial valence-2 vertices used to carry loop attachments.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a graph vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

/// Identifier of a graph edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

/// Whether a vertex is a genuine point of the modeled network or an
/// artificial subdivision point introduced so an isolated closed curve can be
/// written as a vertex with a loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexKind {
    Regular,
    Artificial,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {0:?} references missing vertex {1:?}")]
    MissingEndpoint(EdgeId, VertexId),
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(EdgeId),
    #[error("artificial vertex {0:?} must have valence 2, found {1}")]
    BadArtificialValence(VertexId, usize),
    #[error("an m-valent graph needs k*m even, got k={0} m={1}")]
    OddHalfEdges(u64, u32),
}

/// A finite multigraph. Loops and parallel edges are allowed; a loop
/// contributes 2 to the valence of its vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedGraph {
    vertices: BTreeMap<VertexId, VertexKind>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl ExtendedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from explicit vertex and edge lists, checking ids.
    pub fn from_parts(
        vertices: impl IntoIterator<Item = (VertexId, VertexKind)>,
        edges: impl IntoIterator<Item = (EdgeId, VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::new();
        for (v, kind) in vertices {
            if g.vertices.insert(v, kind).is_some() {
                return Err(GraphError::DuplicateVertex(v));
            }
        }
        for (e, a, b) in edges {
            if !g.vertices.contains_key(&a) {
                return Err(GraphError::MissingEndpoint(e, a));
            }
            if !g.vertices.contains_key(&b) {
                return Err(GraphError::MissingEndpoint(e, b));
            }
            if g.edges.insert(e, (a, b)).is_some() {
                return Err(GraphError::DuplicateEdge(e));
            }
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId, kind: VertexKind) {
        self.vertices.insert(v, kind);
    }

    pub fn add_edge(&mut self, e: EdgeId, a: VertexId, b: VertexId) {
        debug_assert!(self.vertices.contains_key(&a) && self.vertices.contains_key(&b));
        self.edges.insert(e, (a, b));
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.remove(&e)
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> Option<VertexKind> {
        debug_assert_eq!(self.valence(v), 0, "remove only isolated vertices");
        self.vertices.remove(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, VertexKind)> + '_ {
        self.vertices.iter().map(|(&v, &k)| (v, k))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(a, b))| (e, a, b))
    }

    pub fn vertex_kind(&self, v: VertexId) -> Option<VertexKind> {
        self.vertices.get(&v).copied()
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Valence of `v`; a loop at `v` counts twice.
    pub fn valence(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    /// Edges incident to `v`, each with its far endpoint. A loop appears twice.
    pub fn incident(&self, v: VertexId) -> Vec<(EdgeId, VertexId)> {
        let mut out = Vec::new();
        for (&e, &(a, b)) in &self.edges {
            if a == v {
                out.push((e, b));
            }
            if b == v {
                out.push((e, a));
            }
        }
        out
    }

    /// Checks structural well-formedness: endpoints exist and artificial
    /// vertices carry exactly valence 2.
    pub fn validate(&self) -> Result<(), GraphError> {
        for (&e, &(a, b)) in &self.edges {
            if !self.vertices.contains_key(&a) {
                return Err(GraphError::MissingEndpoint(e, a));
            }
            if !self.vertices.contains_key(&b) {
                return Err(GraphError::MissingEndpoint(e, b));
            }
        }
        for (&v, &kind) in &self.vertices {
            if kind == VertexKind::Artificial {
                let val = self.valence(v);
                if val != 2 {
                    return Err(GraphError::BadArtificialValence(v, val));
                }
            }
        }
        Ok(())
    }

    /// Partition of the vertex set into connected components, each returned
    /// as a subgraph retaining the original ids. Components are ordered by
    /// their minimal vertex id.
    pub fn components(&self) -> Vec<ExtendedGraph> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.vertices.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp_vs = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            comp_vs.insert(start);
            while let Some(v) = queue.pop_front() {
                for (_, w) in self.incident(v) {
                    if seen.insert(w) {
                        comp_vs.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            let mut g = ExtendedGraph::new();
            for &v in &comp_vs {
                g.vertices.insert(v, self.vertices[&v]);
            }
            for (&e, &(a, b)) in &self.edges {
                if comp_vs.contains(&a) {
                    g.edges.insert(e, (a, b));
                }
            }
            out.push(g);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// First Betti number `E - V + C`. Every vertex counts, artificial ones
    /// included: an isolated circle written as an artificial vertex with a
    /// loop gives 1 - 1 + 1 = 1.
    pub fn betti1(&self) -> u64 {
        let e = self.edges.len() as i64;
        let v = self.vertices.len() as i64;
        let c = self.component_count() as i64;
        let b = e - v + c;
        debug_assert!(b >= 0);
        b as u64
    }

    /// A maximal forest: one spanning tree per connected component, grown
    /// from the minimal vertex by repeatedly taking the lowest-id edge that
    /// reaches a new vertex. Loops are never tree edges.
    pub fn maximal_tree(&self) -> SpanningForest {
        let mut forest = SpanningForest { trees: Vec::new() };
        for comp in self.components() {
            let root = *comp.vertices.keys().next().expect("component is nonempty");
            let mut in_tree: BTreeSet<VertexId> = BTreeSet::from([root]);
            let mut tree_edges = BTreeSet::new();
            let mut parent = BTreeMap::new();
            loop {
                // Lowest-id edge with exactly one endpoint inside the tree.
                let next = comp.edges.iter().find_map(|(&e, &(a, b))| {
                    match (in_tree.contains(&a), in_tree.contains(&b)) {
                        (true, false) => Some((e, a, b)),
                        (false, true) => Some((e, b, a)),
                        _ => None,
                    }
                });
                match next {
                    Some((e, inside, outside)) => {
                        in_tree.insert(outside);
                        tree_edges.insert(e);
                        parent.insert(outside, (inside, e));
                    }
                    None => break,
                }
            }
            let non_tree_edges = comp
                .edges
                .keys()
                .copied()
                .filter(|e| !tree_edges.contains(e))
                .collect();
            forest.trees.push(ComponentTree {
                root,
                vertices: in_tree,
                tree_edges,
                parent,
                non_tree_edges,
            });
        }
        forest
    }

    /// Collapses decorations: loops become weight 2 on their vertex, bundles
    /// of parallel edges become a single weighted adjacency. Weight at a
    /// vertex is twice the number of loops there; the multiplicity of an
    /// unordered pair is the number of parallel edges joining it.
    pub fn reduce_weighted(&self) -> ReducedWeightedGraph {
        let mut vertex_weights: BTreeMap<VertexId, u64> =
            self.vertices.keys().map(|&v| (v, 0)).collect();
        let mut multiplicities: BTreeMap<(VertexId, VertexId), u64> = BTreeMap::new();
        for &(a, b) in self.edges.values() {
            if a == b {
                *vertex_weights.get_mut(&a).expect("endpoint exists") += 2;
            } else {
                let key = (a.min(b), a.max(b));
                *multiplicities.entry(key).or_insert(0) += 1;
            }
        }
        ReducedWeightedGraph {
            vertex_weights,
            multiplicities,
        }
    }
}

/// Rooted spanning tree of one connected component.
#[derive(Debug, Clone)]
pub struct ComponentTree {
    pub root: VertexId,
    pub vertices: BTreeSet<VertexId>,
    pub tree_edges: BTreeSet<EdgeId>,
    /// child -> (parent, connecting edge)
    pub parent: BTreeMap<VertexId, (VertexId, EdgeId)>,
    pub non_tree_edges: Vec<EdgeId>,
}

impl ComponentTree {
    /// Path of tree edges from `v` up to the root.
    pub fn path_to_root(&self, v: VertexId) -> Vec<(VertexId, EdgeId)> {
        let mut out = Vec::new();
        let mut cur = v;
        while let Some(&(p, e)) = self.parent.get(&cur) {
            out.push((p, e));
            cur = p;
        }
        out
    }
}

/// Maximal forest of a graph: one tree per component.
#[derive(Debug, Clone)]
pub struct SpanningForest {
    pub trees: Vec<ComponentTree>,
}

impl SpanningForest {
    pub fn tree_edges(&self) -> BTreeSet<EdgeId> {
        self.trees
            .iter()
            .flat_map(|t| t.tree_edges.iter().copied())
            .collect()
    }

    pub fn non_tree_edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .trees
            .iter()
            .flat_map(|t| t.non_tree_edges.iter().copied())
            .collect();
        out.sort();
        out
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.trees.iter().any(|t| t.tree_edges.contains(&e))
    }

    pub fn tree_for(&self, v: VertexId) -> Option<&ComponentTree> {
        self.trees.iter().find(|t| t.vertices.contains(&v))
    }
}

/// Loop-and-bundle-free summary of a multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedWeightedGraph {
    pub vertex_weights: BTreeMap<VertexId, u64>,
    pub multiplicities: BTreeMap<(VertexId, VertexId), u64>,
}

/// Rank of the free fundamental group of a connected graph with `k` vertices
/// all of valence `m`: such a graph has `k*m/2` edges, so the rank is
/// `k*(m-2)/2 + 1`. With `k = 0` the graph is taken to be a bare circle,
/// contributing rank 1.
pub fn free_rank_m_valent(k: u64, m: u32) -> Result<u64, GraphError> {
    if k == 0 {
        return Ok(1);
    }
    if (k * m as u64) % 2 != 0 {
        return Err(GraphError::OddHalfEdges(k, m));
    }
    Ok(k * (m as u64 - 2) / 2 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }
    fn e(i: u32) -> EdgeId {
        EdgeId(i)
    }

    fn theta() -> ExtendedGraph {
        // Two vertices joined by three parallel edges.
        ExtendedGraph::from_parts(
            [(v(0), VertexKind::Regular), (v(1), VertexKind::Regular)],
            [(e(0), v(0), v(1)), (e(1), v(0), v(1)), (e(2), v(0), v(1))],
        )
        .unwrap()
    }

    #[test]
    fn betti1_theta_is_two() {
        assert_eq!(theta().betti1(), 2);
    }

    #[test]
    fn betti1_bare_circle_is_one() {
        let g = ExtendedGraph::from_parts(
            [(v(0), VertexKind::Artificial)],
            [(e(0), v(0), v(0))],
        )
        .unwrap();
        g.validate().unwrap();
        assert_eq!(g.betti1(), 1);
    }

    #[test]
    fn betti1_tree_is_zero() {
        let g = ExtendedGraph::from_parts(
            [
                (v(0), VertexKind::Regular),
                (v(1), VertexKind::Regular),
                (v(2), VertexKind::Regular),
                (v(3), VertexKind::Regular),
            ],
            [(e(0), v(0), v(1)), (e(1), v(1), v(2)), (e(2), v(1), v(3))],
        )
        .unwrap();
        assert_eq!(g.betti1(), 0);
    }

    #[test]
    fn betti1_sums_over_components() {
        let g = ExtendedGraph::from_parts(
            [
                (v(0), VertexKind::Regular),
                (v(1), VertexKind::Regular),
                (v(5), VertexKind::Artificial),
            ],
            [
                (e(0), v(0), v(1)),
                (e(1), v(0), v(1)),
                (e(2), v(5), v(5)),
            ],
        )
        .unwrap();
        assert_eq!(g.component_count(), 2);
        assert_eq!(g.betti1(), 2);
    }

    #[test]
    fn maximal_tree_of_parallel_bundle() {
        // Four parallel edges: the tree takes the lowest, three survive.
        let g = ExtendedGraph::from_parts(
            [(v(0), VertexKind::Regular), (v(1), VertexKind::Regular)],
            [
                (e(10), v(0), v(1)),
                (e(11), v(0), v(1)),
                (e(12), v(0), v(1)),
                (e(13), v(0), v(1)),
            ],
        )
        .unwrap();
        let forest = g.maximal_tree();
        assert_eq!(forest.trees.len(), 1);
        assert_eq!(forest.tree_edges(), BTreeSet::from([e(10)]));
        assert_eq!(forest.non_tree_edges(), vec![e(11), e(12), e(13)]);
        assert_eq!(g.betti1(), 3);
    }

    #[test]
    fn loops_never_enter_tree() {
        let g = ExtendedGraph::from_parts(
            [(v(0), VertexKind::Regular), (v(1), VertexKind::Regular)],
            [(e(0), v(0), v(0)), (e(1), v(0), v(1))],
        )
        .unwrap();
        let forest = g.maximal_tree();
        assert_eq!(forest.tree_edges(), BTreeSet::from([e(1)]));
        assert_eq!(forest.non_tree_edges(), vec![e(0)]);
    }

    #[test]
    fn reduce_weighted_loops_and_bundles() {
        let g = ExtendedGraph::from_parts(
            [(v(0), VertexKind::Regular), (v(1), VertexKind::Regular)],
            [
                (e(0), v(0), v(0)),
                (e(1), v(0), v(1)),
                (e(2), v(0), v(1)),
                (e(3), v(1), v(0)),
            ],
        )
        .unwrap();
        let r = g.reduce_weighted();
        assert_eq!(r.vertex_weights[&v(0)], 2);
        assert_eq!(r.vertex_weights[&v(1)], 0);
        assert_eq!(r.multiplicities[&(v(0), v(1))], 3);
    }

    #[test]
    fn four_valent_weight_rule() {
        // Every vertex of a 4-valent network satisfies weight + sum of
        // multiplicities = 4.
        let g = ExtendedGraph::from_parts(
            [(v(0), VertexKind::Regular), (v(1), VertexKind::Regular)],
            [
                (e(0), v(0), v(0)),
                (e(1), v(0), v(1)),
                (e(2), v(0), v(1)),
                (e(3), v(1), v(1)),
            ],
        )
        .unwrap();
        let r = g.reduce_weighted();
        for (vv, w) in &r.vertex_weights {
            let m: u64 = r
                .multiplicities
                .iter()
                .filter(|((a, b), _)| a == vv || b == vv)
                .map(|(_, &m)| m)
                .sum();
            assert_eq!(w + m, 4);
        }
    }

    #[test]
    fn free_rank_formula() {
        assert_eq!(free_rank_m_valent(0, 4).unwrap(), 1);
        assert_eq!(free_rank_m_valent(1, 4).unwrap(), 2);
        assert_eq!(free_rank_m_valent(2, 4).unwrap(), 3);
        assert_eq!(free_rank_m_valent(4, 4).unwrap(), 5);
        assert_eq!(free_rank_m_valent(2, 3).unwrap(), 2);
        assert_eq!(free_rank_m_valent(4, 3).unwrap(), 3);
        assert!(free_rank_m_valent(3, 3).is_err());
    }

    #[test]
    fn four_valent_rank_matches_edge_count() {
        // For k 4-valent vertices the formula must agree with E - V + 1.
        for k in 1..=10u64 {
            let rank = free_rank_m_valent(k, 4).unwrap();
            let edges = k * 4 / 2;
            assert_eq!(rank, edges - k + 1);
            assert_eq!(rank, k + 1);
        }
    }

    #[test]
    fn artificial_vertex_valence_enforced() {
        let g = ExtendedGraph::from_parts(
            [(v(0), VertexKind::Artificial), (v(1), VertexKind::Regular)],
            [(e(0), v(0), v(1))],
        )
        .unwrap();
        assert_eq!(
            g.validate(),
            Err(GraphError::BadArtificialValence(v(0), 1))
        );
    }
}
