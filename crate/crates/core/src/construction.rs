//! The point set: one point per edge `{i, j}` of the complete graph,
//! `P_{i,j} = (t_i + t_j, t_i^2 + t_i t_j + t_j^2)`.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::polyring::{Polynomial, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("({0},{1}) is not a valid pair index: endpoints must be distinct")]
    LoopPair(Var, Var),
    #[error("pair index ({0},{1}) uses index 0; indices are 1-based")]
    ZeroIndex(Var, Var),
    #[error("prefix size must be at least 2, got {0}")]
    PrefixTooSmall(u32),
    #[error("pair {0} lies outside the prefix 1..={1}")]
    OutOfPrefix(PairIndex, u32),
    #[error("pair {0} appears more than once")]
    DuplicatePair(PairIndex),
    #[error("coordinates of point {0} do not match the construction")]
    CoordinateMismatch(PairIndex),
}

/// An edge `{i, j}` of `K_n`, stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairIndex {
    i: Var,
    j: Var,
}

impl PairIndex {
    /// Normalizes orientation; rejects loops and index 0.
    pub fn new(a: Var, b: Var) -> Result<Self, ConstructionError> {
        if a == 0 || b == 0 {
            return Err(ConstructionError::ZeroIndex(a, b));
        }
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Self { i: a, j: b }),
            std::cmp::Ordering::Greater => Ok(Self { i: b, j: a }),
            std::cmp::Ordering::Equal => Err(ConstructionError::LoopPair(a, b)),
        }
    }

    pub fn i(&self) -> Var {
        self.i
    }

    pub fn j(&self) -> Var {
        self.j
    }

    pub fn contains(&self, v: Var) -> bool {
        self.i == v || self.j == v
    }

    /// The endpoint other than `v`, if `v` is an endpoint.
    pub fn other(&self, v: Var) -> Option<Var> {
        if self.i == v {
            Some(self.j)
        } else if self.j == v {
            Some(self.i)
        } else {
            None
        }
    }

    pub fn shared_vertex(&self, other: &PairIndex) -> Option<Var> {
        if other.contains(self.i) {
            Some(self.i)
        } else if other.contains(self.j) {
            Some(self.j)
        } else {
            None
        }
    }
}

impl fmt::Display for PairIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl Serialize for PairIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.i, self.j].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PairIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [a, b] = <[Var; 2]>::deserialize(deserializer)?;
        PairIndex::new(a, b).map_err(D::Error::custom)
    }
}

/// Shorthand for tests and examples; panics on an invalid pair.
pub fn pair(a: Var, b: Var) -> PairIndex {
    PairIndex::new(a, b).expect("valid pair index")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicPoint {
    pub index: PairIndex,
    pub x: Polynomial,
    pub y: Polynomial,
}

pub fn make_point(p: PairIndex) -> SymbolicPoint {
    let ti = Polynomial::var(p.i);
    let tj = Polynomial::var(p.j);
    let x = &ti + &tj;
    let y = &(&(&ti * &ti) + &(&ti * &tj)) + &(&tj * &tj);
    SymbolicPoint { index: p, x, y }
}

/// All `C(n,2)` edges of `K_n` in lexicographic order.
pub fn prefix_edges(n: u32) -> Vec<PairIndex> {
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| PairIndex { i, j }))
        .collect()
}

/// A finite subset of the construction with every index in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    n: u32,
    points: Vec<SymbolicPoint>,
}

impl PointSet {
    pub fn full_prefix(n: u32) -> Result<Self, ConstructionError> {
        if n < 2 {
            return Err(ConstructionError::PrefixTooSmall(n));
        }
        Ok(Self {
            n,
            points: prefix_edges(n).into_iter().map(make_point).collect(),
        })
    }

    /// Materializes the points of an edge set, sorted by index.
    pub fn from_edges<I>(n: u32, edges: I) -> Result<Self, ConstructionError>
    where
        I: IntoIterator<Item = PairIndex>,
    {
        if n < 2 {
            return Err(ConstructionError::PrefixTooSmall(n));
        }
        let mut edges: Vec<PairIndex> = edges.into_iter().collect();
        edges.sort();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(ConstructionError::DuplicatePair(w[0]));
            }
        }
        if let Some(e) = edges.iter().find(|e| e.j > n) {
            return Err(ConstructionError::OutOfPrefix(*e, n));
        }
        Ok(Self {
            n,
            points: edges.into_iter().map(make_point).collect(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn points(&self) -> &[SymbolicPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = PairIndex> + '_ {
        self.points.iter().map(|p| p.index)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("point set serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    i: Var,
    j: Var,
    x: Polynomial,
    y: Polynomial,
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    n: u32,
    points: Vec<PointRepr>,
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PointSetRepr {
            n: self.n,
            points: self
                .points
                .iter()
                .map(|p| PointRepr {
                    i: p.index.i,
                    j: p.index.j,
                    x: p.x.clone(),
                    y: p.y.clone(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PointSetRepr::deserialize(deserializer)?;
        let mut edges = Vec::with_capacity(raw.points.len());
        for p in &raw.points {
            let idx = PairIndex::new(p.i, p.j).map_err(D::Error::custom)?;
            let expected = make_point(idx);
            if expected.x != p.x || expected.y != p.y {
                return Err(D::Error::custom(ConstructionError::CoordinateMismatch(idx)));
            }
            edges.push(idx);
        }
        PointSet::from_edges(raw.n, edges).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn make_point_examples() {
        let p = make_point(pair(1, 2));
        assert_eq!(p.x.to_string(), "t1 + t2");
        assert_eq!(p.y.to_string(), "t1^2 + t1*t2 + t2^2");
        let p = make_point(pair(2, 5));
        assert_eq!(p.x.to_string(), "t2 + t5");
        assert_eq!(p.y.to_string(), "t2^2 + t2*t5 + t5^2");
        assert_eq!(PairIndex::new(3, 3), Err(ConstructionError::LoopPair(3, 3)));
        assert!(PairIndex::new(0, 3).is_err());
        assert_eq!(PairIndex::new(5, 2).unwrap(), pair(2, 5));
    }

    #[test]
    fn full_prefix_sizes() {
        assert_eq!(PointSet::full_prefix(2).unwrap().len(), 1);
        assert_eq!(PointSet::full_prefix(4).unwrap().len(), 6);
        assert_eq!(PointSet::full_prefix(17).unwrap().len(), 136);
        assert_eq!(PointSet::full_prefix(1), Err(ConstructionError::PrefixTooSmall(1)));
    }

    #[test]
    fn prefix_points_distinct() {
        for n in 2..=8 {
            let set = PointSet::full_prefix(n).unwrap();
            let coords: HashSet<(Polynomial, Polynomial)> =
                set.points().iter().map(|p| (p.x.clone(), p.y.clone())).collect();
            assert_eq!(coords.len(), set.len());
            assert_eq!(set, PointSet::full_prefix(n).unwrap());
        }
    }

    #[test]
    fn from_edges_validates() {
        assert!(matches!(
            PointSet::from_edges(3, [pair(1, 4)]),
            Err(ConstructionError::OutOfPrefix(_, 3))
        ));
        assert!(matches!(
            PointSet::from_edges(3, [pair(1, 2), pair(1, 2)]),
            Err(ConstructionError::DuplicatePair(_))
        ));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let set = PointSet::full_prefix(3).unwrap();
        let json = set.to_json();
        assert!(json.starts_with(r#"{"n":3,"points":[{"i":1,"j":2,"x":[{"coeff":"1","vars":[[1,1]]}"#));
        let back = PointSet::from_json(&json).unwrap();
        assert_eq!(back, set);
        assert_eq!(back.to_json(), json);

        let tampered = json.replacen(r#""coeff":"1","vars":[[1,1]]"#, r#""coeff":"2","vars":[[1,1]]"#, 1);
        assert!(PointSet::from_json(&tampered).is_err());
    }
}
