//! Cross-checks the symbolic determinants against a separate expansion that
//! shares no code with `polyring`: dense exponent vectors, machine integers
//! and the six-term Leibniz formula.

use std::collections::HashMap;

use nocollinear::construction::prefix_edges;
use nocollinear::{
    classify, collinearity::collinearity_determinant, is_collinear_fast, witness_coefficient, PairIndex, PatternTag,
};

const VARS: usize = 9;

type Exps = [u8; VARS];

#[derive(Clone, Default, Debug, PartialEq)]
struct Dense(HashMap<Exps, i64>);

impl Dense {
    fn constant(c: i64) -> Self {
        Dense([([0; VARS], c)].into_iter().collect())
    }

    fn var(v: u32) -> Self {
        let mut e = [0; VARS];
        e[v as usize] = 1;
        Dense([(e, 1)].into_iter().collect())
    }

    fn add(&self, other: &Dense, sign: i64) -> Dense {
        let mut out = self.0.clone();
        for (e, c) in &other.0 {
            *out.entry(*e).or_default() += sign * c;
        }
        out.retain(|_, c| *c != 0);
        Dense(out)
    }

    fn mul(&self, other: &Dense) -> Dense {
        let mut out: HashMap<Exps, i64> = HashMap::new();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &other.0 {
                let mut e = [0; VARS];
                for k in 0..VARS {
                    e[k] = ea[k] + eb[k];
                }
                *out.entry(e).or_default() += ca * cb;
            }
        }
        out.retain(|_, c| *c != 0);
        Dense(out)
    }
}

fn row(e: PairIndex) -> [Dense; 3] {
    let (ti, tj) = (Dense::var(e.i()), Dense::var(e.j()));
    let x = ti.add(&tj, 1);
    let y = ti.mul(&ti).add(&ti.mul(&tj), 1).add(&tj.mul(&tj), 1);
    [Dense::constant(1), x, y]
}

fn leibniz(rows: &[[Dense; 3]; 3]) -> Dense {
    const PERMS: [([usize; 3], i64); 6] = [
        ([0, 1, 2], 1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([0, 2, 1], -1),
        ([2, 1, 0], -1),
        ([1, 0, 2], -1),
    ];
    PERMS.iter().fold(Dense::default(), |acc, (p, sign)| {
        let term = rows[0][p[0]].mul(&rows[1][p[1]]).mul(&rows[2][p[2]]);
        acc.add(&term, *sign)
    })
}

fn to_dense(p: &nocollinear::Polynomial) -> Dense {
    let mut out = HashMap::new();
    for (m, c) in p.terms() {
        let mut e = [0; VARS];
        for &(v, k) in m.powers() {
            e[v as usize] = k as u8;
        }
        out.insert(e, i64::try_from(c.clone()).unwrap());
    }
    Dense(out)
}

#[test]
fn determinants_match_leibniz_expansion_on_k8() {
    let edges = prefix_edges(8);
    let mut witness_values: HashMap<PatternTag, Vec<i64>> = HashMap::new();
    for a in 0..edges.len() {
        for b in a + 1..edges.len() {
            for c in b + 1..edges.len() {
                let triple = [edges[a], edges[b], edges[c]];
                let pattern = classify(triple[0], triple[1], triple[2]).unwrap();
                let ordered = pattern.edges();
                let reference = leibniz(&ordered.map(row));
                assert_eq!(to_dense(&collinearity_determinant(ordered)), reference, "{triple:?}");
                assert_eq!(
                    reference.0.is_empty(),
                    is_collinear_fast(triple[0], triple[1], triple[2]).unwrap(),
                    "{triple:?}"
                );

                if let Some(m) = pattern.witness_monomial() {
                    let mut e = [0; VARS];
                    for &(v, k) in m.powers() {
                        e[v as usize] = k as u8;
                    }
                    let expected = reference.0.get(&e).copied().unwrap_or(0);
                    let (_, got) = witness_coefficient(&pattern).unwrap();
                    assert_eq!(i64::try_from(got).unwrap(), expected);
                    witness_values.entry(pattern.tag()).or_default().push(expected);
                }
            }
        }
    }
    // Frozen from the expansion: +1 on the main diagonal for stars, paths and
    // cherries, -1 from an odd permutation for matchings.
    for (tag, frozen) in [
        (PatternTag::Star, 1),
        (PatternTag::Path, 1),
        (PatternTag::CherryPlusEdge, 1),
        (PatternTag::Matching, -1),
    ] {
        let values = &witness_values[&tag];
        assert!(!values.is_empty());
        assert!(values.iter().all(|&v| v == frozen), "{tag}: {values:?}");
    }
}
