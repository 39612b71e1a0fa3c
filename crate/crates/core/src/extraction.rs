//! Half-density general-position subsets via a locally optimal cut.
//!
//! A subset of points is an edge set. The cross edges of any cut form a
//! bipartite, hence triangle-free, graph, and triangles are the only
//! collinear triples, so the cross edges are in general position. Local
//! search guarantees at least half of the edges cross.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::collinearity::CollinearityError;
use crate::construction::PairIndex;
use crate::oracle::CollinearityOracle;
use crate::polyring::Var;

/// A set of points of the construction, viewed as the edges of a graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSubset {
    edges: BTreeSet<PairIndex>,
}

impl EdgeSubset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn edges(&self) -> &BTreeSet<PairIndex> {
        &self.edges
    }

    pub fn iter(&self) -> impl Iterator<Item = PairIndex> + '_ {
        self.edges.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: &PairIndex) -> bool {
        self.edges.contains(e)
    }

    pub fn insert(&mut self, e: PairIndex) -> bool {
        self.edges.insert(e)
    }

    pub fn remove(&mut self, e: &PairIndex) -> bool {
        self.edges.remove(e)
    }

    pub fn vertex_set(&self) -> BTreeSet<Var> {
        self.edges.iter().flat_map(|e| [e.i(), e.j()]).collect()
    }

    pub fn difference(&self, other: &EdgeSubset) -> EdgeSubset {
        self.edges.difference(&other.edges).copied().collect()
    }

    fn adjacency(&self) -> BTreeMap<Var, BTreeSet<Var>> {
        let mut adj: BTreeMap<Var, BTreeSet<Var>> = BTreeMap::new();
        for e in &self.edges {
            adj.entry(e.i()).or_default().insert(e.j());
            adj.entry(e.j()).or_default().insert(e.i());
        }
        adj
    }
}

impl FromIterator<PairIndex> for EdgeSubset {
    fn from_iter<I: IntoIterator<Item = PairIndex>>(iter: I) -> Self {
        Self {
            edges: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn flipped(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    sides: BTreeMap<Var, Side>,
    cross_edges: EdgeSubset,
    flips: usize,
}

impl Cut {
    pub fn side(&self, v: Var) -> Option<Side> {
        self.sides.get(&v).copied()
    }

    pub fn left(&self) -> Vec<Var> {
        self.members(Side::Left)
    }

    pub fn right(&self) -> Vec<Var> {
        self.members(Side::Right)
    }

    fn members(&self, side: Side) -> Vec<Var> {
        self.sides
            .iter()
            .filter(|&(_, &s)| s == side)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn cross_edges(&self) -> &EdgeSubset {
        &self.cross_edges
    }

    /// Number of single-vertex moves the local search made.
    pub fn flips(&self) -> usize {
        self.flips
    }
}

/// Seeded random start, then passes over the vertices in ascending order,
/// moving any vertex with more neighbours on its own side than across.
/// Each move grows the cut by at least one edge, so there are at most
/// `|p|` moves.
pub fn local_search_cut(p: &EdgeSubset, seed: u64) -> Cut {
    let adj = p.adjacency();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sides: BTreeMap<Var, Side> = adj
        .keys()
        .map(|&v| (v, if rng.gen::<bool>() { Side::Left } else { Side::Right }))
        .collect();

    let mut flips = 0;
    loop {
        let mut moved = false;
        for (v, neighbours) in &adj {
            let own = sides[v];
            let same = neighbours.iter().filter(|u| sides[*u] == own).count();
            if 2 * same > neighbours.len() {
                sides.insert(*v, own.flipped());
                flips += 1;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }

    let cross_edges = p.iter().filter(|e| sides[&e.i()] != sides[&e.j()]).collect();
    Cut {
        sides,
        cross_edges,
        flips,
    }
}

pub fn extract_general_position(p: &EdgeSubset, seed: u64) -> EdgeSubset {
    local_search_cut(p, seed).cross_edges
}

/// Some triangle in `p`, i.e. a collinear triple of its points.
pub fn find_collinear_triple(p: &EdgeSubset) -> Option<[PairIndex; 3]> {
    let adj = p.adjacency();
    for e in p.iter() {
        if let Some(&w) = adj[&e.i()].intersection(&adj[&e.j()]).next() {
            let pair = |a, b| PairIndex::new(a, b).expect("adjacent vertices are distinct");
            return Some([e, pair(e.i(), w), pair(e.j(), w)]);
        }
    }
    None
}

/// No three points of `p` are collinear.
///
/// Only triangle triples are collinear, so this searches for a triangle
/// instead of testing every triple.
pub fn verify_general_position(p: &EdgeSubset) -> bool {
    find_collinear_triple(p).is_none()
}

/// Exhaustive variant: asks `oracle` about every triple of `p`.
pub fn verify_general_position_with(
    p: &EdgeSubset,
    oracle: &dyn CollinearityOracle,
) -> Result<bool, CollinearityError> {
    let edges: Vec<PairIndex> = p.iter().collect();
    for a in 0..edges.len() {
        for b in a + 1..edges.len() {
            for c in b + 1..edges.len() {
                if oracle.collinear([edges[a], edges[b], edges[c]])? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSides {
    pub left: Vec<Var>,
    pub right: Vec<Var>,
}

/// Extraction result in the shape the CLI writes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    pub input_size: usize,
    pub output_size: usize,
    pub edges: EdgeSubset,
    pub cut: CutSides,
}

pub fn extract(p: &EdgeSubset, seed: u64) -> Extraction {
    let cut = local_search_cut(p, seed);
    Extraction {
        input_size: p.len(),
        output_size: cut.cross_edges.len(),
        cut: CutSides {
            left: cut.left(),
            right: cut.right(),
        },
        edges: cut.cross_edges,
    }
}
