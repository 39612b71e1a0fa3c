//! Partitions into general-position classes and triangle-free colorings.
//!
//! A partition of the points indexed by `K_n` into classes with no three
//! collinear points is the same thing as an edge coloring of `K_n` with no
//! monochromatic triangle. Iterated extraction gives a logarithmic upper
//! bound on the number of classes; small multicolor Ramsey numbers give
//! lower bounds.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::construction::{prefix_edges, PairIndex};
use crate::extraction::{extract_general_position, verify_general_position, EdgeSubset};
use crate::gf16::Gf16;
use crate::polyring::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("need at least 2 vertices, got {0}")]
    TooFewVertices(u32),
    #[error("need at least 1 color, got {0}")]
    NoColors(u32),
    #[error("edge {0} is not colored")]
    Uncolored(PairIndex),
    #[error("edge {0} lies outside K_{1}")]
    OutsideGraph(PairIndex, u32),
    #[error("edge {edge} has color {color}, outside 1..={m}")]
    ColorOutOfRange { edge: PairIndex, color: u32, m: u32 },
    #[error("edge {0} is colored twice")]
    Recolored(PairIndex),
    #[error("classes do not cover K_{0} exactly once")]
    NotAPartition(u32),
}

/// A total coloring of the edges of `K_n` with colors `1..=m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    n: u32,
    m: u32,
    colors: BTreeMap<PairIndex, u32>,
}

impl EdgeColoring {
    pub fn new(n: u32, m: u32, colors: BTreeMap<PairIndex, u32>) -> Result<Self, PartitionError> {
        if n < 2 {
            return Err(PartitionError::TooFewVertices(n));
        }
        if m < 1 {
            return Err(PartitionError::NoColors(m));
        }
        for (&edge, &color) in &colors {
            if edge.j() > n {
                return Err(PartitionError::OutsideGraph(edge, n));
            }
            if !(1..=m).contains(&color) {
                return Err(PartitionError::ColorOutOfRange { edge, color, m });
            }
        }
        if let Some(e) = prefix_edges(n).into_iter().find(|e| !colors.contains_key(e)) {
            return Err(PartitionError::Uncolored(e));
        }
        Ok(Self { n, m, colors })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn color(&self, e: PairIndex) -> u32 {
        self.colors[&e]
    }

    pub fn colors(&self) -> &BTreeMap<PairIndex, u32> {
        &self.colors
    }

    /// Color classes; entry `c - 1` holds the edges of color `c`.
    pub fn classes(&self) -> Vec<EdgeSubset> {
        let mut classes = vec![EdgeSubset::new(); self.m as usize];
        for (&e, &c) in &self.colors {
            classes[c as usize - 1].insert(e);
        }
        classes
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coloring serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Serialize, Deserialize)]
struct ColoringRepr {
    n: u32,
    m: u32,
    edges: Vec<(Var, Var, u32)>,
}

impl Serialize for EdgeColoring {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ColoringRepr {
            n: self.n,
            m: self.m,
            edges: self.colors.iter().map(|(e, &c)| (e.i(), e.j(), c)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EdgeColoring {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = ColoringRepr::deserialize(deserializer)?;
        let mut colors = BTreeMap::new();
        for (a, b, c) in raw.edges {
            let e = PairIndex::new(a, b).map_err(D::Error::custom)?;
            if colors.insert(e, c).is_some() {
                return Err(D::Error::custom(PartitionError::Recolored(e)));
            }
        }
        EdgeColoring::new(raw.n, raw.m, colors).map_err(D::Error::custom)
    }
}

/// A triangle `{a, b, c}` (ascending) whose three edges share a color.
pub fn monochromatic_triangle(c: &EdgeColoring) -> Option<[Var; 3]> {
    let n = c.n;
    let color = |a: Var, b: Var| c.colors[&PairIndex::new(a, b).expect("distinct")];
    for a in 1..=n {
        for b in a + 1..=n {
            let ab = color(a, b);
            for k in b + 1..=n {
                if color(a, k) == ab && color(b, k) == ab {
                    return Some([a, b, k]);
                }
            }
        }
    }
    None
}

pub fn is_valid_coloring(c: &EdgeColoring) -> bool {
    monochromatic_triangle(c).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub classes: Vec<EdgeSubset>,
    pub source_size: usize,
}

impl PartitionResult {
    /// Classes are pairwise disjoint and their union is `source`.
    pub fn is_partition_of(&self, source: &EdgeSubset) -> bool {
        let total: usize = self.classes.iter().map(EdgeSubset::len).sum();
        total == source.len()
            && self.source_size == source.len()
            && self.classes.iter().all(|class| class.edges().is_subset(source.edges()))
            && {
                let union: EdgeSubset = self.classes.iter().flat_map(EdgeSubset::iter).collect();
                union.len() == total
            }
    }

    pub fn all_classes_general_position(&self) -> bool {
        self.classes.iter().all(verify_general_position)
    }

    /// Reads class `c` as color `c + 1`. The classes must partition `K_n`.
    pub fn to_coloring(&self, n: u32) -> Result<EdgeColoring, PartitionError> {
        let mut colors = BTreeMap::new();
        for (idx, class) in self.classes.iter().enumerate() {
            for e in class.iter() {
                if colors.insert(e, idx as u32 + 1).is_some() {
                    return Err(PartitionError::NotAPartition(n));
                }
            }
        }
        if colors.len() != prefix_edges(n).len() {
            return Err(PartitionError::NotAPartition(n));
        }
        EdgeColoring::new(n, self.classes.len().max(1) as u32, colors)
    }
}

/// `floor(log2 k) + 1`, the most classes iterated halving can produce for
/// `k >= 1` points.
pub fn halving_bound(k: usize) -> usize {
    match k {
        0 => 0,
        k => k.ilog2() as usize + 1,
    }
}

/// Peels off general-position subsets of at least half the remainder until
/// nothing is left. Round `r` extracts with seed `seed + r`.
pub fn iterative_halving_partition(p: &EdgeSubset, seed: u64) -> PartitionResult {
    let mut remainder = p.clone();
    let mut classes = Vec::new();
    let mut round = 0u64;
    while !remainder.is_empty() {
        let class = extract_general_position(&remainder, seed.wrapping_add(round));
        remainder = remainder.difference(&class);
        classes.push(class);
        round += 1;
    }
    PartitionResult {
        classes,
        source_size: p.len(),
    }
}

/// Exhausted search for one color count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub colors: u32,
    /// Search nodes visited before the tree was exhausted.
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinColors {
    Found {
        m: u32,
        witness: EdgeColoring,
        refuted: Vec<Refutation>,
    },
    /// Every count up to the budget was refuted.
    Unknown { budget: u32, refuted: Vec<Refutation> },
}

impl MinColors {
    pub fn value(&self) -> Option<u32> {
        match self {
            MinColors::Found { m, .. } => Some(*m),
            MinColors::Unknown { .. } => None,
        }
    }
}

struct ColoringSearch {
    n: usize,
    m: u8,
    edges: Vec<(usize, usize)>,
    // color[a * n + b], 0 = uncolored
    color: Vec<u8>,
    nodes: u64,
}

impl ColoringSearch {
    fn new(n: u32, m: u32) -> Self {
        let n = n as usize;
        // colex order: every triangle is closed as early as possible
        let edges = (1..n).flat_map(|b| (0..b).map(move |a| (a, b))).collect();
        Self {
            n,
            m: m.min(u8::MAX as u32) as u8,
            edges,
            color: vec![0; n * n],
            nodes: 0,
        }
    }

    fn set(&mut self, a: usize, b: usize, c: u8) {
        self.color[a * self.n + b] = c;
        self.color[b * self.n + a] = c;
    }

    fn closes_triangle(&self, a: usize, b: usize, c: u8) -> bool {
        (0..self.n).any(|k| self.color[a * self.n + k] == c && self.color[b * self.n + k] == c)
    }

    /// Colors edge `idx` onward; colors above `used + 1` are never tried, and
    /// the first edge is pinned to color 1.
    fn search(&mut self, idx: usize, used: u8) -> bool {
        self.nodes += 1;
        if idx == self.edges.len() {
            return true;
        }
        let (a, b) = self.edges[idx];
        for c in 1..=self.m.min(used + 1) {
            if self.closes_triangle(a, b, c) {
                continue;
            }
            self.set(a, b, c);
            if self.search(idx + 1, used.max(c)) {
                return true;
            }
            self.set(a, b, 0);
        }
        false
    }

    fn coloring(&self, n: u32, m: u32) -> EdgeColoring {
        let colors = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let e = PairIndex::new(a as Var + 1, b as Var + 1).expect("distinct");
                (e, self.color[a * self.n + b] as u32)
            })
            .collect();
        EdgeColoring::new(n, m, colors).expect("search colors every edge")
    }
}

/// Smallest number of colors `<= budget` admitting a coloring of `K_n` with
/// no monochromatic triangle, by backtracking with color-symmetry breaking.
pub fn min_colors(n: u32, budget: u32) -> Result<MinColors, PartitionError> {
    if n < 2 {
        return Err(PartitionError::TooFewVertices(n));
    }
    if budget < 1 {
        return Err(PartitionError::NoColors(budget));
    }
    let mut refuted = Vec::new();
    for m in 1..=budget {
        let mut search = ColoringSearch::new(n, m);
        if search.search(0, 0) {
            return Ok(MinColors::Found {
                m,
                witness: search.coloring(n, m),
                refuted,
            });
        }
        refuted.push(Refutation {
            colors: m,
            nodes: search.nodes,
        });
    }
    Ok(MinColors::Unknown { budget, refuted })
}

/// The 3-coloring of `K_16` on GF(16): `{x, y}` gets color `1 + (log(x - y) mod 3)`,
/// i.e. the coset of the cubic residues containing `x - y`. Vertex `v`
/// stands for the field element with bit pattern `v - 1`.
pub fn greenwood_gleason_coloring() -> EdgeColoring {
    let colors = prefix_edges(16)
        .into_iter()
        .map(|e| {
            let x = Gf16::new((e.i() - 1) as u8);
            let y = Gf16::new((e.j() - 1) as u8);
            let log = (x + y).log().expect("distinct elements differ");
            (e, log % 3 + 1)
        })
        .collect();
    EdgeColoring::new(16, 3, colors).expect("all 120 edges colored")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    VerifiedInRepo,
    Cited,
}

/// `R(3, ..., 3)` with `colors` threes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RamseyFact {
    pub colors: u32,
    pub value: u32,
    pub provenance: Provenance,
}

impl RamseyFact {
    pub fn label(&self) -> String {
        let threes = vec!["3"; self.colors as usize].join(",");
        format!("R({threes})={}", self.value)
    }
}

/// Known triangle Ramsey numbers. `R(3)` and `R(3,3)` are reproduced by
/// [`min_colors`] in the test suite; `R(3,3,3) = 17` is taken from the
/// literature (only its `K_16` half is checked, via
/// [`greenwood_gleason_coloring`]).
pub const RAMSEY_TABLE: [RamseyFact; 3] = [
    RamseyFact {
        colors: 1,
        value: 3,
        provenance: Provenance::VerifiedInRepo,
    },
    RamseyFact {
        colors: 2,
        value: 6,
        provenance: Provenance::VerifiedInRepo,
    },
    RamseyFact {
        colors: 3,
        value: 17,
        provenance: Provenance::Cited,
    },
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactUsed {
    pub ramsey: String,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundCertificate {
    pub k: usize,
    pub forced_classes: u32,
    pub facts_used: Vec<FactUsed>,
}

/// Largest `n` with `C(n, 2) <= k`.
pub fn complete_graph_within(k: usize) -> u32 {
    let mut n = 0u32;
    while ((n as usize + 1) * n as usize) / 2 <= k {
        n += 1;
    }
    n
}

/// Classes forced for the first `k` points: they contain every edge of `K_n`
/// for the largest `n` with `C(n,2) <= k`, and `n >= R(3,...,3)` with `m`
/// threes forces more than `m` classes.
pub fn lower_bound_certificate(k: usize) -> LowerBoundCertificate {
    if k == 0 {
        return LowerBoundCertificate {
            k,
            forced_classes: 0,
            facts_used: Vec::new(),
        };
    }
    let n = complete_graph_within(k);
    let decisive = RAMSEY_TABLE.iter().filter(|f| f.value <= n).max_by_key(|f| f.colors);
    match decisive {
        Some(f) => LowerBoundCertificate {
            k,
            forced_classes: f.colors + 1,
            facts_used: vec![FactUsed {
                ramsey: f.label(),
                provenance: f.provenance,
            }],
        },
        None => LowerBoundCertificate {
            k,
            forced_classes: 1,
            facts_used: Vec::new(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::pair;
    use proptest::prelude::*;

    fn coloring(n: u32, entries: &[(Var, Var, u32)]) -> EdgeColoring {
        let m = entries.iter().map(|e| e.2).max().unwrap();
        EdgeColoring::new(n, m, entries.iter().map(|&(a, b, c)| (pair(a, b), c)).collect()).unwrap()
    }

    fn full(n: u32) -> EdgeSubset {
        prefix_edges(n).into_iter().collect()
    }

    #[test]
    fn validity_examples() {
        assert!(!is_valid_coloring(&coloring(3, &[(1, 2, 1), (2, 3, 1), (1, 3, 1)])));
        assert!(is_valid_coloring(&coloring(3, &[(1, 2, 1), (2, 3, 1), (1, 3, 2)])));
        let pentagons = coloring(
            5,
            &[
                (1, 2, 1),
                (2, 3, 1),
                (3, 4, 1),
                (4, 5, 1),
                (1, 5, 1),
                (1, 3, 2),
                (2, 4, 2),
                (3, 5, 2),
                (1, 4, 2),
                (2, 5, 2),
            ],
        );
        assert!(is_valid_coloring(&pentagons));
    }

    #[test]
    fn coloring_validation() {
        let partial: BTreeMap<_, _> = [(pair(1, 2), 1)].into();
        assert_eq!(
            EdgeColoring::new(3, 1, partial),
            Err(PartitionError::Uncolored(pair(1, 3)))
        );
        let bad: BTreeMap<_, _> = [(pair(1, 2), 3)].into();
        assert!(matches!(
            EdgeColoring::new(2, 2, bad),
            Err(PartitionError::ColorOutOfRange { .. })
        ));
        assert!(EdgeColoring::from_json(r#"{"n":2,"m":1,"edges":[[1,2,1],[2,1,1]]}"#).is_err());
    }

    #[test]
    fn halving_examples() {
        let one = iterative_halving_partition(&[pair(1, 2)].into_iter().collect(), 0);
        assert_eq!(one.classes.len(), 1);

        let tri: EdgeSubset = [pair(1, 2), pair(2, 3), pair(1, 3)].into_iter().collect();
        let r = iterative_halving_partition(&tri, 0);
        assert_eq!(r.classes.iter().map(EdgeSubset::len).collect::<Vec<_>>(), [2, 1]);
        assert!(r.is_partition_of(&tri));

        let k17 = full(17);
        let r = iterative_halving_partition(&k17, 0);
        assert!(r.classes.len() <= 8);
        assert!(r.is_partition_of(&k17) && r.all_classes_general_position());
        assert!(iterative_halving_partition(&EdgeSubset::new(), 0).classes.is_empty());
    }

    #[test]
    fn halving_bound_values() {
        assert_eq!([0, 1, 2, 3, 4, 7, 8, 136].map(halving_bound), [0, 1, 2, 2, 3, 3, 4, 8]);
    }

    #[test]
    fn min_colors_examples() {
        assert_eq!(min_colors(2, 3).unwrap().value(), Some(1));
        assert_eq!(min_colors(3, 3).unwrap().value(), Some(2));
        assert_eq!(min_colors(5, 3).unwrap().value(), Some(2));
        let six = min_colors(6, 4).unwrap();
        assert_eq!(six.value(), Some(3));
        if let MinColors::Found { witness, refuted, .. } = &six {
            assert!(is_valid_coloring(witness));
            assert_eq!(refuted.iter().map(|r| r.colors).collect::<Vec<_>>(), [1, 2]);
        }
        let unknown = min_colors(6, 2).unwrap();
        assert_eq!(unknown.value(), None);
        assert_eq!(min_colors(1, 2), Err(PartitionError::TooFewVertices(1)));
        assert_eq!(min_colors(4, 0), Err(PartitionError::NoColors(0)));
    }

    // Plain enumeration of all 2^15 two-colorings of K_6 (and 2^10 of K_5).
    fn two_colorable_by_enumeration(n: u32) -> bool {
        let edges = prefix_edges(n);
        (0u32..1 << edges.len()).any(|mask| {
            let colors = edges
                .iter()
                .enumerate()
                .map(|(b, e)| (*e, (mask >> b & 1) + 1))
                .collect();
            is_valid_coloring(&EdgeColoring::new(n, 2, colors).unwrap())
        })
    }

    #[test]
    fn ramsey_r33_by_enumeration() {
        assert!(two_colorable_by_enumeration(5));
        assert!(!two_colorable_by_enumeration(6));
    }

    #[test]
    fn min_colors_monotone_and_matches_table() {
        let values: Vec<u32> = (2..=8).map(|n| min_colors(n, 3).unwrap().value().unwrap()).collect();
        assert_eq!(values, [1, 2, 2, 2, 3, 3, 3]);
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
        // verified-in-repo entries: R(3,...,3) with m threes is the first n needing m+1 colors
        for fact in RAMSEY_TABLE
            .iter()
            .filter(|f| f.provenance == Provenance::VerifiedInRepo)
        {
            let first = (2..=8).find(|&n| min_colors(n, 3).unwrap().value().unwrap() > fact.colors);
            assert_eq!(first, Some(fact.value));
        }
    }

    #[test]
    fn greenwood_gleason() {
        let c = greenwood_gleason_coloring();
        assert_eq!((c.n(), c.m(), c.colors().len()), (16, 3, 120));
        assert!(c.classes().iter().all(|class| class.len() == 40));
        assert!(is_valid_coloring(&c));
        assert!(c.classes().iter().all(verify_general_position));
    }

    #[test]
    fn certificate_examples() {
        let cert = lower_bound_certificate(3);
        assert_eq!(cert.forced_classes, 2);
        assert_eq!(lower_bound_certificate(15).forced_classes, 3);
        let cert = lower_bound_certificate(136);
        assert_eq!(cert.forced_classes, 4);
        assert_eq!(
            cert.facts_used,
            [FactUsed {
                ramsey: "R(3,3,3)=17".into(),
                provenance: Provenance::Cited
            }]
        );
        assert_eq!(lower_bound_certificate(1).forced_classes, 1);
        assert_eq!(lower_bound_certificate(14).forced_classes, 2);
        assert_eq!(
            serde_json::to_string(&lower_bound_certificate(15)).unwrap(),
            r#"{"k":15,"forced_classes":3,"facts_used":[{"ramsey":"R(3,3)=6","provenance":"verified-in-repo"}]}"#
        );
    }

    #[test]
    fn partition_coloring_equivalence() {
        for n in 3..=8 {
            let r = iterative_halving_partition(&full(n), n as u64);
            let c = r.to_coloring(n).unwrap();
            assert!(is_valid_coloring(&c));
            if let MinColors::Found { witness, .. } = min_colors(n, 3).unwrap() {
                assert!(witness.classes().iter().all(verify_general_position));
            }
        }
    }

    #[test]
    fn sandwich() {
        for n in 3..=8u32 {
            let k = prefix_edges(n).len();
            let lower = lower_bound_certificate(k).forced_classes;
            let exact = min_colors(n, 4).unwrap().value().unwrap();
            let upper = iterative_halving_partition(&full(n), 0).classes.len() as u32;
            assert!(lower <= exact && exact <= upper, "n={n}: {lower} {exact} {upper}");
        }
    }

    #[test]
    fn coloring_json() {
        let c = coloring(3, &[(1, 2, 1), (2, 3, 1), (1, 3, 2)]);
        let json = c.to_json();
        assert_eq!(json, r#"{"n":3,"m":2,"edges":[[1,2,1],[1,3,2],[2,3,1]]}"#);
        assert_eq!(EdgeColoring::from_json(&json).unwrap(), c);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn halving_bound_holds(mask in prop::collection::vec(any::<bool>(), 990), seed in any::<u64>()) {
            // K_45 has 990 edges
            let p: EdgeSubset = prefix_edges(45).into_iter().zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| e).collect();
            let r = iterative_halving_partition(&p, seed);
            prop_assert!(r.classes.len() <= halving_bound(p.len()));
            prop_assert!(r.is_partition_of(&p));
            prop_assert!(r.all_classes_general_position());
        }
    }
}
