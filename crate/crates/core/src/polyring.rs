//! Sparse multivariate polynomials over arbitrary-precision integers.
//!
//! Indeterminates are `t_1, t_2, ...` (1-based). A [`Polynomial`] is kept in
//! canonical form at all times: no zero coefficients and no zero exponents,
//! so structural equality coincides with polynomial equality.
//!
//! Monomials are ordered graded-lexicographically: higher total degree is
//! greater, ties are broken by comparing exponents starting from `t_1`
//! (so `t_1 > t_2 > ...`). Terms are serialized from the greatest monomial
//! down.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Index of an indeterminate; `t_1` has index 1.
pub type Var = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("assignment has no value for t_{0}")]
    MissingVariable(Var),
    #[error("variable index 0 is not allowed (indeterminates are 1-based)")]
    ZeroVariable,
    #[error("invalid coefficient {0:?}")]
    BadCoefficient(String),
}

/// A power product `t_{v1}^{e1} * t_{v2}^{e2} * ...`.
///
/// Stored as `(variable, exponent)` pairs sorted by variable with every
/// exponent positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    powers: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self::from_powers([(v, 1)]).expect("valid single variable")
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs.
    /// Repeated variables are merged and zero exponents are dropped.
    pub fn from_powers<I>(powers: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Var, u32)>,
    {
        let mut acc: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in powers {
            if v == 0 {
                return Err(PolyError::ZeroVariable);
            }
            *acc.entry(v).or_insert(0) += e;
        }
        Ok(Self {
            powers: acc.into_iter().filter(|&(_, e)| e != 0).collect(),
        })
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.powers
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.powers
            .binary_search_by_key(&v, |&(var, _)| var)
            .map(|idx| self.powers[idx].1)
            .unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (mut a, mut b) = (self.powers.iter().peekable(), other.powers.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        out.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&p), None) => {
                    out.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    out.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial { powers: out }
    }

    fn evaluate(&self, assignment: &BTreeMap<Var, BigRational>) -> Result<BigRational, PolyError> {
        let mut acc = BigRational::one();
        for &(v, e) in &self.powers {
            let value = assignment.get(&v).ok_or(PolyError::MissingVariable(v))?;
            acc *= Pow::pow(value, e);
        }
        Ok(acc)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // Lex with t_1 > t_2 > ...: at the first variable where the
            // exponents differ, the larger exponent wins. A variable present
            // in only one monomial has exponent 0 in the other.
            for (&(va, ea), &(vb, eb)) in self.powers.iter().zip(&other.powers) {
                match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {}
                        ord => return ord,
                    },
                }
            }
            self.powers.len().cmp(&other.powers.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.powers.is_empty() {
            return f.write_str("1");
        }
        for (idx, &(v, e)) in self.powers.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            write!(f, "t{v}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in `Z[t_1, t_2, ...]` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::from_terms([(Monomial::one(), c.into())])
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The indeterminate `t_v`.
    pub fn var(v: Var) -> Self {
        Self::from_terms([(Monomial::var(v), BigInt::one())])
    }

    /// Sums the given terms, dropping whatever cancels to zero.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigInt)>,
    {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// Terms from the greatest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn scale(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn evaluate(&self, assignment: &BTreeMap<Var, BigRational>) -> Result<BigRational, PolyError> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            acc += m.evaluate(assignment)? * BigRational::from_integer(c.clone());
        }
        Ok(acc)
    }

    /// Re-derives canonical form; a no-op for any value built through this API.
    pub fn normalized(&self) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add add, Sub sub, Mul mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Zero for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let magnitude = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{magnitude}*{m}")?;
            }
        }
        Ok(())
    }
}

/// 3x3 determinant by cofactor expansion along the first row.
///
/// Generic so the same routine serves the polynomial ring and exact
/// rational evaluation.
pub fn det3<T>(m: &[[T; 3]; 3]) -> T
where
    for<'a> &'a T: Mul<&'a T, Output = T> + Sub<&'a T, Output = T>,
    T: Add<T, Output = T> + Sub<T, Output = T>,
{
    let minor =
        |r1: usize, r2: usize, c1: usize, c2: usize| -> T { &(&m[r1][c1] * &m[r2][c2]) - &(&m[r1][c2] * &m[r2][c1]) };
    let a = &m[0][0] * &minor(1, 2, 1, 2);
    let b = &m[0][1] * &minor(1, 2, 0, 2);
    let c = &m[0][2] * &minor(1, 2, 0, 1);
    a - b + c
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: String,
    vars: Vec<(Var, u32)>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms()
            .map(|(m, c)| TermRepr {
                coeff: c.to_string(),
                vars: m.powers().to_vec(),
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<TermRepr>::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            let c: BigInt = t
                .coeff
                .parse()
                .map_err(|_| D::Error::custom(PolyError::BadCoefficient(t.coeff.clone())))?;
            let m = Monomial::from_powers(t.vars).map_err(D::Error::custom)?;
            terms.push((m, c));
        }
        Ok(Polynomial::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(v: Var) -> Polynomial {
        Polynomial::var(v)
    }

    fn c(k: i64) -> Polynomial {
        Polynomial::constant(k)
    }

    fn mono(p: &[(Var, u32)]) -> Monomial {
        Monomial::from_powers(p.iter().copied()).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn add_examples() {
        assert!((t(1) + (-t(1))).is_zero());
        let s = t(1) + t(2);
        assert_eq!(&s + &s, c(2) * t(1) + c(2) * t(2));
        let y = t(1) * t(1) + t(1) * t(2) + t(2) * t(2);
        assert_eq!(y + (-(t(1) * t(2))), t(1) * t(1) + t(2) * t(2));
    }

    #[test]
    fn mul_examples() {
        assert_eq!((t(1) + t(2)) * (t(1) - t(2)), t(1) * t(1) - t(2) * t(2));
        let lhs = (t(3) - t(2)) * (t(1) + t(2) + t(3));
        let rhs = t(1) * t(3) + t(2) * t(3) + t(3) * t(3) - t(1) * t(2) - t(2) * t(2) - t(2) * t(3);
        assert_eq!(lhs, rhs);
        assert!((lhs * Polynomial::zero()).is_zero());
    }

    #[test]
    fn mul_degree_adds() {
        let a = t(1) * t(1) + t(2);
        let b = t(3) * t(2) * t(2) - c(5);
        assert_eq!((&a * &b).degree(), Some(5));
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn det3_basics() {
        let id = [[c(1), c(0), c(0)], [c(0), c(1), c(0)], [c(0), c(0), c(1)]];
        assert_eq!(det3(&id), c(1));
        let row = [t(1), t(2) * t(3), c(4)];
        let other = [c(7), t(1), t(2)];
        assert!(det3(&[row.clone(), other, row]).is_zero());
    }

    #[test]
    fn coefficient_examples() {
        let p = t(1) * t(1) - t(2) * t(2);
        assert_eq!(p.coefficient(&mono(&[(1, 2)])), BigInt::from(1));
        assert_eq!(p.coefficient(&mono(&[(1, 1), (2, 1)])), BigInt::from(0));
    }

    #[test]
    fn evaluate_examples() {
        let a: BTreeMap<Var, BigRational> = [(1, q(1, 2)), (2, q(1, 3))].into();
        assert_eq!((t(1) + t(2)).evaluate(&a).unwrap(), q(5, 6));
        assert_eq!(Polynomial::zero().evaluate(&BTreeMap::new()).unwrap(), q(0, 1));
        let b: BTreeMap<Var, BigRational> = [(1, q(1, 1)), (2, q(2, 1))].into();
        let y = t(1) * t(1) + t(1) * t(2) + t(2) * t(2);
        assert_eq!(y.evaluate(&b).unwrap(), q(7, 1));
        let missing: BTreeMap<Var, BigRational> = [(1, q(1, 1))].into();
        assert_eq!(y.evaluate(&missing), Err(PolyError::MissingVariable(2)));
    }

    #[test]
    fn zero_variable_rejected() {
        assert_eq!(Monomial::from_powers([(0, 1)]), Err(PolyError::ZeroVariable));
    }

    #[test]
    fn grlex_order() {
        // degree first, then t_1 > t_2 > ...
        assert!(mono(&[(1, 2)]) > mono(&[(1, 1), (2, 1)]));
        assert!(mono(&[(1, 1), (2, 1)]) > mono(&[(2, 2)]));
        assert!(mono(&[(2, 3)]) > mono(&[(1, 2)]));
        assert!(mono(&[(1, 1)]) > mono(&[(2, 1)]));
        assert!(mono(&[(1, 1), (3, 1)]) > mono(&[(2, 2)]));
        assert!(Monomial::one() < mono(&[(9, 1)]));
        let y = t(1) * t(1) + t(1) * t(2) + t(2) * t(2);
        assert_eq!(y.to_string(), "t1^2 + t1*t2 + t2^2");
        assert_eq!((c(-3) * t(2) + c(1)).to_string(), "-3*t2 + 1");
    }

    #[test]
    fn serialization_format() {
        let p = c(2) * t(1) * t(1) - t(1) * t(3) + c(-7);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"[{"coeff":"2","vars":[[1,2]]},{"coeff":"-1","vars":[[1,1],[3,1]]},{"coeff":"-7","vars":[]}]"#
        );
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Polynomial>(r#"[{"coeff":"x","vars":[]}]"#).is_err());
        assert!(serde_json::from_str::<Polynomial>(r#"[{"coeff":"1","vars":[[0,1]]}]"#).is_err());
    }

    // Independent oracle for det3: fraction-free Gaussian elimination over Q.
    fn det_by_elimination(m: &[[BigRational; 3]; 3]) -> BigRational {
        let mut a = m.clone();
        let mut sign = BigRational::one();
        for col in 0..3 {
            let Some(pivot) = (col..3).find(|&r| !a[r][col].is_zero()) else {
                return BigRational::zero();
            };
            if pivot != col {
                a.swap(pivot, col);
                sign = -sign;
            }
            for r in col + 1..3 {
                let f = &a[r][col] / &a[col][col];
                let pivot_row = a[col].clone();
                for (entry, p) in a[r].iter_mut().zip(&pivot_row).skip(col) {
                    *entry -= &f * p;
                }
            }
        }
        sign * &a[0][0] * &a[1][1] * &a[2][2]
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        let term = (-9i64..=9, prop::collection::vec((1u32..=6, 0u32..=2), 0..=2));
        prop::collection::vec(term, 0..5).prop_map(|terms| {
            Polynomial::from_terms(
                terms
                    .into_iter()
                    .map(|(k, powers)| (Monomial::from_powers(powers).unwrap(), BigInt::from(k))),
            )
        })
    }

    fn arb_assignment() -> impl Strategy<Value = BTreeMap<Var, BigRational>> {
        prop::collection::vec((-50i64..50, 1i64..20), 6).prop_map(|vals| {
            vals.into_iter()
                .enumerate()
                .map(|(i, (n, d))| (i as Var + 1, q(n, d)))
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(a.normalized(), a);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn det3_agrees_with_evaluation(
            entries in prop::collection::vec(arb_poly(), 9),
            assignment in arb_assignment(),
            k in -5i64..=5,
        ) {
            let m: [[Polynomial; 3]; 3] = std::array::from_fn(|r| std::array::from_fn(|col| entries[3 * r + col].clone()));
            let d = det3(&m);
            let numeric: [[BigRational; 3]; 3] =
                std::array::from_fn(|r| std::array::from_fn(|col| m[r][col].evaluate(&assignment).unwrap()));
            prop_assert_eq!(d.evaluate(&assignment).unwrap(), det_by_elimination(&numeric));

            let mut scaled = m.clone();
            scaled[1] = std::array::from_fn(|col| m[1][col].scale(&BigInt::from(k)));
            prop_assert_eq!(det3(&scaled), d.scale(&BigInt::from(k)));
        }

        #[test]
        fn serde_round_trip(p in arb_poly()) {
            let json = serde_json::to_string(&p).unwrap();
            let back: Polynomial = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
            prop_assert_eq!(back, p);
        }
    }
}
