//! Collinearity of constructed points and the five-way case split of edge
//! triples.
//!
//! Three distinct edges of `K_n` form exactly one of five shapes. Only the
//! triangle shape yields collinear points; for every other shape a specific
//! monomial of the collinearity determinant has a nonzero coefficient, which
//! [`witness_coefficient`] extracts.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construction::{make_point, prefix_edges, PairIndex};
use crate::oracle::{CollinearityOracle, SymbolicOracle};
use crate::polyring::{det3, Monomial, PolyError, Polynomial, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollinearityError {
    #[error("edge {0} appears twice in the triple")]
    DuplicateEdge(PairIndex),
    #[error("triangle triples are collinear and have no witness monomial")]
    TriangleHasNoWitness,
    #[error(transparent)]
    Evaluation(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternTag {
    Triangle,
    Star,
    Path,
    CherryPlusEdge,
    Matching,
}

impl PatternTag {
    pub const ALL: [PatternTag; 5] = [
        PatternTag::Triangle,
        PatternTag::Star,
        PatternTag::Path,
        PatternTag::CherryPlusEdge,
        PatternTag::Matching,
    ];
}

impl fmt::Display for PatternTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Isomorphism type of three distinct edges, with role-labeled vertices.
///
/// Role letters follow the edge lists below; where a shape has symmetries the
/// smallest available index takes the earliest letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriplePattern {
    /// `{ij, ik, jk}` with `i < j < k`.
    Triangle { i: Var, j: Var, k: Var },
    /// `{ij, ik, il}` with center `i` and leaves `j < k < l`.
    Star { i: Var, j: Var, k: Var, l: Var },
    /// `{ij, jk, kl}` oriented so that `i < l`.
    Path { i: Var, j: Var, k: Var, l: Var },
    /// `{ij, ik, lm}` with `j < k` and `l < m`.
    CherryPlusEdge { i: Var, j: Var, k: Var, l: Var, m: Var },
    /// `{ij, kl, mn}`, each edge ascending and edges ordered by first vertex.
    Matching {
        i: Var,
        j: Var,
        k: Var,
        l: Var,
        m: Var,
        n: Var,
    },
}

impl TriplePattern {
    pub fn tag(&self) -> PatternTag {
        match self {
            TriplePattern::Triangle { .. } => PatternTag::Triangle,
            TriplePattern::Star { .. } => PatternTag::Star,
            TriplePattern::Path { .. } => PatternTag::Path,
            TriplePattern::CherryPlusEdge { .. } => PatternTag::CherryPlusEdge,
            TriplePattern::Matching { .. } => PatternTag::Matching,
        }
    }

    /// The three edges in determinant row order.
    pub fn edges(&self) -> [PairIndex; 3] {
        let e = |a, b| PairIndex::new(a, b).expect("pattern roles are distinct");
        match *self {
            TriplePattern::Triangle { i, j, k } => [e(i, j), e(i, k), e(j, k)],
            TriplePattern::Star { i, j, k, l } => [e(i, j), e(i, k), e(i, l)],
            TriplePattern::Path { i, j, k, l } => [e(i, j), e(j, k), e(k, l)],
            TriplePattern::CherryPlusEdge { i, j, k, l, m } => [e(i, j), e(i, k), e(l, m)],
            TriplePattern::Matching { i, j, k, l, m, n } => [e(i, j), e(k, l), e(m, n)],
        }
    }

    /// Monomial whose coefficient certifies a nonzero determinant:
    /// `t_l^2 t_k` for stars, paths and cherries, `t_m^2 t_i` for matchings.
    pub fn witness_monomial(&self) -> Option<Monomial> {
        let powers = match *self {
            TriplePattern::Triangle { .. } => return None,
            TriplePattern::Star { k, l, .. }
            | TriplePattern::Path { k, l, .. }
            | TriplePattern::CherryPlusEdge { k, l, .. } => [(l, 2), (k, 1)],
            TriplePattern::Matching { i, m, .. } => [(m, 2), (i, 1)],
        };
        Some(Monomial::from_powers(powers).expect("pattern indices are positive"))
    }
}

fn check_distinct(edges: &[PairIndex; 3]) -> Result<(), CollinearityError> {
    if edges[0] == edges[1] || edges[0] == edges[2] {
        return Err(CollinearityError::DuplicateEdge(edges[0]));
    }
    if edges[1] == edges[2] {
        return Err(CollinearityError::DuplicateEdge(edges[1]));
    }
    Ok(())
}

pub fn classify(e1: PairIndex, e2: PairIndex, e3: PairIndex) -> Result<TriplePattern, CollinearityError> {
    let mut edges = [e1, e2, e3];
    check_distinct(&edges)?;
    edges.sort();

    let mut degree: BTreeMap<Var, u8> = BTreeMap::new();
    for e in &edges {
        *degree.entry(e.i()).or_default() += 1;
        *degree.entry(e.j()).or_default() += 1;
    }

    let pattern = match degree.len() {
        3 => {
            let v: Vec<Var> = degree.keys().copied().collect();
            TriplePattern::Triangle {
                i: v[0],
                j: v[1],
                k: v[2],
            }
        }
        4 => {
            if let Some((&center, _)) = degree.iter().find(|&(_, &d)| d == 3) {
                let mut leaves: Vec<Var> = edges.iter().filter_map(|e| e.other(center)).collect();
                leaves.sort_unstable();
                TriplePattern::Star {
                    i: center,
                    j: leaves[0],
                    k: leaves[1],
                    l: leaves[2],
                }
            } else {
                // Two endpoints of degree 1; walk from the smaller one.
                let ends: Vec<Var> = degree.iter().filter(|&(_, &d)| d == 1).map(|(&v, _)| v).collect();
                let (i, l) = (ends[0], ends[1]);
                let neighbor = |v: Var| edges.iter().find_map(|e| e.other(v)).expect("endpoint has an edge");
                TriplePattern::Path {
                    i,
                    j: neighbor(i),
                    k: neighbor(l),
                    l,
                }
            }
        }
        5 => {
            let (&center, _) = degree.iter().find(|&(_, &d)| d == 2).expect("cherry has a center");
            let mut leaves: Vec<Var> = edges.iter().filter_map(|e| e.other(center)).collect();
            leaves.sort_unstable();
            let loose = edges
                .iter()
                .find(|e| !e.contains(center))
                .expect("cherry has a disjoint edge");
            TriplePattern::CherryPlusEdge {
                i: center,
                j: leaves[0],
                k: leaves[1],
                l: loose.i(),
                m: loose.j(),
            }
        }
        6 => TriplePattern::Matching {
            i: edges[0].i(),
            j: edges[0].j(),
            k: edges[1].i(),
            l: edges[1].j(),
            m: edges[2].i(),
            n: edges[2].j(),
        },
        other => unreachable!("three distinct edges span 3..=6 vertices, got {other}"),
    };
    Ok(pattern)
}

/// Determinant of the rows `(1, x, y)` for the given points, in the given order.
pub fn collinearity_determinant(edges: [PairIndex; 3]) -> Polynomial {
    let rows = edges.map(|e| {
        let p = make_point(e);
        [Polynomial::one(), p.x, p.y]
    });
    det3(&rows)
}

/// Collinearity decided by identical vanishing of the determinant.
pub fn is_collinear_symbolic(e1: PairIndex, e2: PairIndex, e3: PairIndex) -> Result<bool, CollinearityError> {
    let edges = [e1, e2, e3];
    check_distinct(&edges)?;
    Ok(collinearity_determinant(edges).is_zero())
}

/// Collinearity decided by pattern alone: collinear iff the edges form a triangle.
pub fn is_collinear_fast(e1: PairIndex, e2: PairIndex, e3: PairIndex) -> Result<bool, CollinearityError> {
    Ok(classify(e1, e2, e3)?.tag() == PatternTag::Triangle)
}

pub fn witness_coefficient(pattern: &TriplePattern) -> Result<(Monomial, BigInt), CollinearityError> {
    let monomial = pattern
        .witness_monomial()
        .ok_or(CollinearityError::TriangleHasNoWitness)?;
    let coeff = collinearity_determinant(pattern.edges()).coefficient(&monomial);
    Ok((monomial, coeff))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub edges: [PairIndex; 3],
    pub pattern: PatternTag,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: u32,
    pub triples_checked: u64,
    pub per_pattern_counts: BTreeMap<PatternTag, u64>,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn empty(n: u32) -> Self {
        Self {
            n,
            triples_checked: 0,
            per_pattern_counts: PatternTag::ALL.iter().map(|&t| (t, 0)).collect(),
            violations: Vec::new(),
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.triples_checked += other.triples_checked;
        for (tag, count) in other.per_pattern_counts {
            *self.per_pattern_counts.entry(tag).or_default() += count;
        }
        self.violations.extend(other.violations);
        self
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn patterns_witnessed(&self) -> usize {
        self.per_pattern_counts.values().filter(|&&c| c > 0).count()
    }
}

fn check_triple(edges: [PairIndex; 3], oracle: &dyn CollinearityOracle, report: &mut VerificationReport) {
    report.triples_checked += 1;
    let pattern = match classify(edges[0], edges[1], edges[2]) {
        Ok(p) => p,
        Err(err) => {
            report.violations.push(Violation {
                edges,
                pattern: PatternTag::Triangle,
                reason: err.to_string(),
            });
            return;
        }
    };
    let tag = pattern.tag();
    *report.per_pattern_counts.entry(tag).or_default() += 1;

    let fail = |reason: String| Violation {
        edges,
        pattern: tag,
        reason,
    };
    match oracle.collinear(edges) {
        Ok(collinear) if collinear != (tag == PatternTag::Triangle) => report.violations.push(fail(format!(
            "{} oracle reports collinear={collinear} for a {tag} triple",
            oracle.name()
        ))),
        Ok(_) => {}
        Err(err) => report
            .violations
            .push(fail(format!("{} oracle failed: {err}", oracle.name()))),
    }
    if tag != PatternTag::Triangle {
        match witness_coefficient(&pattern) {
            Ok((m, c)) if c.is_zero() => report
                .violations
                .push(fail(format!("witness {m} has zero coefficient"))),
            Ok(_) => {}
            Err(err) => report.violations.push(fail(err.to_string())),
        }
    }
}

/// Exhaustively checks every triple of distinct edges of `K_n` against the
/// symbolic determinant.
pub fn verify_claim1(n: u32, jobs: usize) -> VerificationReport {
    verify_claim1_with(n, &SymbolicOracle, jobs)
}

/// Same sweep with the collinearity answers taken from `oracle`. Witness
/// coefficients are always computed symbolically.
///
/// Triples are streamed; with `jobs > 1` the sweep is split by first edge and
/// merged, and the result is identical to the sequential one.
pub fn verify_claim1_with(n: u32, oracle: &dyn CollinearityOracle, jobs: usize) -> VerificationReport {
    let edges = prefix_edges(n);
    let sweep_from = |a: usize| {
        let mut report = VerificationReport::empty(n);
        for b in a + 1..edges.len() {
            for c in b + 1..edges.len() {
                check_triple([edges[a], edges[b], edges[c]], oracle, &mut report);
            }
        }
        report
    };

    let mut report = if jobs <= 1 {
        (0..edges.len())
            .map(sweep_from)
            .fold(VerificationReport::empty(n), VerificationReport::merge)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..edges.len())
                .into_par_iter()
                .map(sweep_from)
                .reduce(|| VerificationReport::empty(n), VerificationReport::merge)
        })
    };
    report.violations.sort_by_key(|v| v.edges);
    report
}
