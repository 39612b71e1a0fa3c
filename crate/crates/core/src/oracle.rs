//! Interchangeable collinearity deciders, registered by name.
//!
//! The pattern shortcut, the symbolic determinant and exact-rational
//! evaluation at a certified instantiation all answer the same question for
//! points of the construction. Sweeps that want to cross-check one against
//! the others look them up here.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::collinearity::{is_collinear_fast, is_collinear_symbolic, CollinearityError};
use crate::construction::PairIndex;
use crate::numeric::{certify_with_resampling, NumericError, NumericOracle};

pub trait CollinearityOracle: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether the three (distinct) points are collinear.
    fn collinear(&self, edges: [PairIndex; 3]) -> Result<bool, CollinearityError>;
}

/// Collinear iff the edges form a triangle.
#[derive(Debug, Clone, Copy, Default)]
pub struct PatternOracle;

impl CollinearityOracle for PatternOracle {
    fn name(&self) -> &'static str {
        "pattern"
    }

    fn collinear(&self, [a, b, c]: [PairIndex; 3]) -> Result<bool, CollinearityError> {
        is_collinear_fast(a, b, c)
    }
}

/// Identical vanishing of the determinant in `Z[t_1, t_2, ...]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SymbolicOracle;

impl CollinearityOracle for SymbolicOracle {
    fn name(&self) -> &'static str {
        "symbolic"
    }

    fn collinear(&self, [a, b, c]: [PairIndex; 3]) -> Result<bool, CollinearityError> {
        is_collinear_symbolic(a, b, c)
    }
}

impl CollinearityOracle for NumericOracle {
    fn name(&self) -> &'static str {
        "numeric"
    }

    fn collinear(&self, edges: [PairIndex; 3]) -> Result<bool, CollinearityError> {
        if edges[0] == edges[1] || edges[0] == edges[2] || edges[1] == edges[2] {
            let dup = if edges[1] == edges[2] { edges[1] } else { edges[0] };
            return Err(CollinearityError::DuplicateEdge(dup));
        }
        Ok(self.determinant(edges)?.is_zero())
    }
}

/// Parameters an oracle factory may need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleSettings {
    pub n: u32,
    pub seed: u64,
    pub bit_size: u32,
    pub max_resamples: u32,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            n: 8,
            seed: 0,
            bit_size: 64,
            max_resamples: 5,
        }
    }
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("unknown oracle {name:?}; available: {available}")]
    Unknown { name: String, available: String },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

pub type OracleFactory = fn(&OracleSettings) -> Result<Box<dyn CollinearityOracle>, OracleError>;

pub struct OracleRegistry {
    factories: BTreeMap<&'static str, OracleFactory>,
}

impl OracleRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    /// Registry holding `pattern`, `symbolic` and `numeric`.
    pub fn builtin() -> Self {
        let mut registry = Self::empty();
        registry.register("pattern", |_| Ok(Box::new(PatternOracle)));
        registry.register("symbolic", |_| Ok(Box::new(SymbolicOracle)));
        registry.register("numeric", |s| {
            let (certified, _) = certify_with_resampling(s.n, s.seed, s.bit_size, s.max_resamples, 1)?;
            Ok(Box::new(NumericOracle::new(certified.instantiation().clone())))
        });
        registry
    }

    /// Adds or replaces a factory.
    pub fn register(&mut self, name: &'static str, factory: OracleFactory) {
        self.factories.insert(name, factory);
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.factories.keys().copied()
    }

    pub fn create(&self, name: &str, settings: &OracleSettings) -> Result<Box<dyn CollinearityOracle>, OracleError> {
        let factory = self.factories.get(name).ok_or_else(|| OracleError::Unknown {
            name: name.to_owned(),
            available: self.names().collect::<Vec<_>>().join(", "),
        })?;
        factory(settings)
    }
}

impl Default for OracleRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}
