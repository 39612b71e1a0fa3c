//! Exact-rational instantiation of the indeterminates.
//!
//! Drawing `t_1..t_n` as random rationals turns the symbolic construction
//! into concrete points. Rationals satisfy polynomial relations, so each
//! draw is certified: every triangle determinant must evaluate to exactly
//! zero (a polynomial identity) and every other triple determinant must be
//! nonzero. A draw that hits a root asks the caller to resample.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, RandBigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::collinearity::{classify, PatternTag};
use crate::construction::{make_point, prefix_edges, PairIndex};
use crate::polyring::{det3, PolyError, Var};

/// Largest accepted `bit_size`.
pub const MAX_BIT_SIZE: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("an instantiation needs n >= 2, got {0}")]
    TooFewVariables(u32),
    #[error("bit_size must lie in 8..={MAX_BIT_SIZE}, got {0}")]
    BadBitSize(u32),
    #[error("triangle triple {0:?} has a nonzero determinant; the evaluation is broken")]
    IdentityViolated([PairIndex; 3]),
    #[error("no certified instantiation after {0} resamples")]
    ResamplesExhausted(u32),
    #[error("malformed numeric export: {0}")]
    Parse(String),
    #[error(transparent)]
    Evaluation(#[from] PolyError),
}

/// Concrete values for `t_1..t_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instantiation {
    n: u32,
    values: BTreeMap<Var, BigRational>,
    seed: u64,
    bit_size: u32,
}

impl Instantiation {
    /// Explicit values `t_1 = values[0], ...`. Distinctness is not enforced so
    /// that degenerate choices can be fed to [`certify`].
    pub fn from_values(values: Vec<BigRational>) -> Self {
        let bit_size = values
            .iter()
            .map(|v| v.numer().bits().max(v.denom().bits()) as u32)
            .max()
            .unwrap_or(0);
        Self {
            n: values.len() as u32,
            values: values.into_iter().enumerate().map(|(k, v)| (k as Var + 1, v)).collect(),
            seed: 0,
            bit_size,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn bit_size(&self) -> u32 {
        self.bit_size
    }

    pub fn values(&self) -> &BTreeMap<Var, BigRational> {
        &self.values
    }

    /// Coordinates of `P_{i,j}` at these values.
    pub fn point(&self, e: PairIndex) -> Result<NumericPoint, PolyError> {
        let p = make_point(e);
        Ok(NumericPoint {
            index: e,
            x: p.x.evaluate(&self.values)?,
            y: p.y.evaluate(&self.values)?,
        })
    }

    /// All `C(n,2)` points of the prefix.
    pub fn point_set(&self) -> NumericPointSet {
        let points = prefix_edges(self.n)
            .into_iter()
            .map(|e| self.point(e).expect("prefix indices are assigned"))
            .collect();
        NumericPointSet { points }
    }
}

/// Draws `n` pairwise distinct rationals `p/q` with `|p| < 2^bit_size` and
/// `1 <= q < 2^bit_size` from a ChaCha stream seeded by `seed`.
pub fn instantiate(n: u32, seed: u64, bit_size: u32) -> Result<Instantiation, NumericError> {
    if n < 2 {
        return Err(NumericError::TooFewVariables(n));
    }
    if !(8..=MAX_BIT_SIZE).contains(&bit_size) {
        return Err(NumericError::BadBitSize(bit_size));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = BigInt::one() << bit_size;
    let mut values: Vec<BigRational> = Vec::with_capacity(n as usize);
    while values.len() < n as usize {
        let mut numer = BigInt::from_biguint(Sign::Plus, rng.gen_biguint(bit_size as u64));
        if rng.gen::<bool>() {
            numer = -numer;
        }
        let denom = rng.gen_bigint_range(&BigInt::one(), &bound);
        let v = BigRational::new(numer, denom);
        if !values.contains(&v) {
            values.push(v);
        }
    }
    let mut inst = Instantiation::from_values(values);
    inst.seed = seed;
    inst.bit_size = bit_size;
    Ok(inst)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericPoint {
    pub index: PairIndex,
    pub x: BigRational,
    pub y: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericPointSet {
    pub points: Vec<NumericPoint>,
}

impl NumericPoint {
    /// Integer coordinates `(w, w x, w y)` with `w = lcm` of the denominators.
    pub fn homogeneous(&self) -> [BigInt; 3] {
        let w = self.x.denom().lcm(self.y.denom());
        let scaled = |v: &BigRational| v.numer() * (&w / v.denom());
        let (x, y) = (scaled(&self.x), scaled(&self.y));
        [w, x, y]
    }
}

/// `det [w_r, X_r, Y_r]` over the integers; it equals `w_1 w_2 w_3` times the
/// collinearity determinant, so it vanishes exactly when that one does.
fn homogeneous_determinant(rows: [&[BigInt; 3]; 3]) -> BigInt {
    det3(&rows.map(|r| r.clone()))
}

fn rational_determinant(points: [&NumericPoint; 3]) -> BigRational {
    let rows = points.map(NumericPoint::homogeneous);
    let scale: BigInt = rows.iter().map(|r| &r[0]).product();
    BigRational::new(homogeneous_determinant([&rows[0], &rows[1], &rows[2]]), scale)
}

/// Collinearity by exact evaluation at a fixed instantiation.
#[derive(Debug, Clone)]
pub struct NumericOracle {
    inst: Instantiation,
    // prefix points, evaluated once
    cache: BTreeMap<PairIndex, NumericPoint>,
}

impl NumericOracle {
    pub fn new(inst: Instantiation) -> Self {
        let cache = inst.point_set().points.into_iter().map(|p| (p.index, p)).collect();
        Self { inst, cache }
    }

    pub fn instantiation(&self) -> &Instantiation {
        &self.inst
    }

    fn point(&self, e: PairIndex) -> Result<std::borrow::Cow<'_, NumericPoint>, PolyError> {
        match self.cache.get(&e) {
            Some(p) => Ok(std::borrow::Cow::Borrowed(p)),
            None => self.inst.point(e).map(std::borrow::Cow::Owned),
        }
    }

    /// Exact value of the collinearity determinant.
    pub fn determinant(&self, edges: [PairIndex; 3]) -> Result<BigRational, PolyError> {
        let [a, b, c] = [self.point(edges[0])?, self.point(edges[1])?, self.point(edges[2])?];
        Ok(rational_determinant([&a, &b, &c]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub n: u32,
    pub seed: u64,
    pub bit_size: u32,
    pub triples_checked: u64,
    pub triangle_triples: u64,
    pub non_triangle_triples: u64,
    /// Schwartz-Zippel bound `3 T / 2^(2 bit_size)` on the chance that a draw
    /// makes some non-triangle determinant vanish.
    pub failure_bound: f64,
}

/// An instantiation that passed [`certify`]; the only input accepted by
/// [`export_numeric`].
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedInstantiation {
    inst: Instantiation,
    report: CertificationReport,
}

impl CertifiedInstantiation {
    pub fn instantiation(&self) -> &Instantiation {
        &self.inst
    }

    pub fn report(&self) -> &CertificationReport {
        &self.report
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certification {
    Certified(CertifiedInstantiation),
    /// A non-triangle determinant vanished at this draw.
    ResampleNeeded {
        edges: [PairIndex; 3],
        pattern: PatternTag,
    },
}

#[derive(Default)]
struct Tally {
    triangles: u64,
    others: u64,
    first_bad_triangle: Option<[PairIndex; 3]>,
    first_root: Option<([PairIndex; 3], PatternTag)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.triangles += other.triangles;
        self.others += other.others;
        self.first_bad_triangle = min_opt(self.first_bad_triangle, other.first_bad_triangle);
        self.first_root = match (self.first_root, other.first_root) {
            (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
            (a, b) => a.or(b),
        };
        self
    }
}

fn min_opt<T: Ord>(a: Option<T>, b: Option<T>) -> Option<T> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

/// Evaluates the collinearity determinant of every edge triple of the prefix.
pub fn certify(inst: &Instantiation, jobs: usize) -> Result<Certification, NumericError> {
    let points = inst.point_set().points;
    let rows: Vec<[BigInt; 3]> = points.iter().map(NumericPoint::homogeneous).collect();
    let sweep_from = |a: usize| {
        let mut tally = Tally::default();
        for b in a + 1..points.len() {
            for c in b + 1..points.len() {
                let (p, q, r) = (&points[a], &points[b], &points[c]);
                let edges = [p.index, q.index, r.index];
                let tag = classify(edges[0], edges[1], edges[2])
                    .expect("prefix edges are distinct")
                    .tag();
                let zero = homogeneous_determinant([&rows[a], &rows[b], &rows[c]]).is_zero();
                if tag == PatternTag::Triangle {
                    tally.triangles += 1;
                    if !zero && tally.first_bad_triangle.is_none() {
                        tally.first_bad_triangle = Some(edges);
                    }
                } else {
                    tally.others += 1;
                    if zero && tally.first_root.is_none() {
                        tally.first_root = Some((edges, tag));
                    }
                }
            }
        }
        tally
    };

    let tally = if jobs <= 1 {
        (0..points.len()).map(sweep_from).fold(Tally::default(), Tally::merge)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..points.len())
                .into_par_iter()
                .map(sweep_from)
                .reduce(Tally::default, Tally::merge)
        })
    };

    if let Some(edges) = tally.first_bad_triangle {
        return Err(NumericError::IdentityViolated(edges));
    }
    if let Some((edges, pattern)) = tally.first_root {
        return Ok(Certification::ResampleNeeded { edges, pattern });
    }
    let sample_space = 2f64.powi(2 * inst.bit_size as i32);
    let report = CertificationReport {
        n: inst.n,
        seed: inst.seed,
        bit_size: inst.bit_size,
        triples_checked: tally.triangles + tally.others,
        triangle_triples: tally.triangles,
        non_triangle_triples: tally.others,
        failure_bound: 3.0 * tally.others as f64 / sample_space,
    };
    Ok(Certification::Certified(CertifiedInstantiation {
        inst: inst.clone(),
        report,
    }))
}

/// Tries seeds `seed, seed+1, ...` until a draw certifies. Returns the
/// certified draw and how many resamples it took.
pub fn certify_with_resampling(
    n: u32,
    seed: u64,
    bit_size: u32,
    max_resamples: u32,
    jobs: usize,
) -> Result<(CertifiedInstantiation, u32), NumericError> {
    for attempt in 0..=max_resamples {
        let inst = instantiate(n, seed.wrapping_add(attempt as u64), bit_size)?;
        if let Certification::Certified(c) = certify(&inst, jobs)? {
            return Ok((c, attempt));
        }
    }
    Err(NumericError::ResamplesExhausted(max_resamples))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rendering {
    /// `p/q` in lowest terms, always with an explicit denominator.
    Exact,
    /// Fixed-point decimal rounded half away from zero.
    Decimal { precision: usize },
}

pub fn render_rational(r: &BigRational, rendering: Rendering) -> String {
    match rendering {
        Rendering::Exact => format!("{}/{}", r.numer(), r.denom()),
        Rendering::Decimal { precision } => render_decimal(r, precision),
    }
}

fn render_decimal(r: &BigRational, precision: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), precision);
    let (num, den): (BigInt, BigInt) = (r.numer().abs() * &scale, r.denom().clone());
    // round(num/den) half away from zero
    let twice: BigInt = num * 2u32 + &den;
    let rounded = twice.div_floor(&(den * 2u32));
    let mut digits = rounded.to_string();
    if digits.len() <= precision {
        digits = format!("{}{digits}", "0".repeat(precision + 1 - digits.len()));
    }
    let split = digits.len() - precision;
    let mut out = String::new();
    if r.is_negative() && !rounded.is_zero() {
        out.push('-');
    }
    out.push_str(&digits[..split]);
    if precision > 0 {
        out.push('.');
        out.push_str(&digits[split..]);
    }
    out
}

/// Parses `p/q`, an integer, or a plain decimal into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, NumericError> {
    let bad = || NumericError::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() || !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mantissa: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let value = BigRational::new(mantissa, num_traits::pow(BigInt::from(10), frac_part.len()));
    Ok(if negative { -value } else { value })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportRow {
    pub i: Var,
    pub j: Var,
    pub x: String,
    pub y: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericExport {
    pub n: u32,
    pub seed: u64,
    pub bit_size: u32,
    pub points: Vec<ExportRow>,
}

/// Renders the certified prefix as CSV (`i,j,x,y`, LF endings) or JSON.
pub fn export_numeric(cert: &CertifiedInstantiation, format: ExportFormat, rendering: Rendering) -> String {
    let inst = cert.instantiation();
    let rows: Vec<ExportRow> = inst
        .point_set()
        .points
        .iter()
        .map(|p| ExportRow {
            i: p.index.i(),
            j: p.index.j(),
            x: render_rational(&p.x, rendering),
            y: render_rational(&p.y, rendering),
        })
        .collect();
    match format {
        ExportFormat::Csv => render_csv(&rows),
        ExportFormat::Json => {
            let doc = NumericExport {
                n: inst.n,
                seed: inst.seed,
                bit_size: inst.bit_size,
                points: rows,
            };
            let mut s = serde_json::to_string(&doc).expect("export serializes");
            s.push('\n');
            s
        }
    }
}

pub fn render_csv(rows: &[ExportRow]) -> String {
    let mut out = String::from("i,j,x,y\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.i, r.j, r.x, r.y).expect("writing to a String");
    }
    out
}

pub fn parse_csv(s: &str) -> Result<Vec<ExportRow>, NumericError> {
    let mut lines = s.split_terminator('\n');
    if lines.next() != Some("i,j,x,y") {
        return Err(NumericError::Parse("missing header i,j,x,y".into()));
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            let [i, j, x, y] = fields[..] else {
                return Err(NumericError::Parse(format!("row {}: expected 4 fields", k + 1)));
            };
            let idx = |f: &str| {
                f.parse::<Var>()
                    .map_err(|_| NumericError::Parse(format!("row {}: bad index {f:?}", k + 1)))
            };
            parse_rational(x)?;
            parse_rational(y)?;
            Ok(ExportRow {
                i: idx(i)?,
                j: idx(j)?,
                x: x.to_owned(),
                y: y.to_owned(),
            })
        })
        .collect()
}

pub fn parse_json(s: &str) -> Result<NumericExport, NumericError> {
    let doc: NumericExport = serde_json::from_str(s).map_err(|e| NumericError::Parse(e.to_string()))?;
    for r in &doc.points {
        parse_rational(&r.x)?;
        parse_rational(&r.y)?;
    }
    Ok(doc)
}

impl ExportRow {
    pub fn values(&self) -> Result<(BigRational, BigRational), NumericError> {
        Ok((parse_rational(&self.x)?, parse_rational(&self.y)?))
    }
}
