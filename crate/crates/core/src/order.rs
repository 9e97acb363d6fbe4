//! Tie-break well-orders on `N^n` and the weighted order `<_a`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{check_dim, Error, Result};
use crate::poly::{Exponent, Polynomial, WeightVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TieBreak {
    GradedLex,
    Lex,
    GradedRevLex,
}

impl TieBreak {
    pub fn name(self) -> &'static str {
        match self {
            TieBreak::GradedLex => "grlex",
            TieBreak::Lex => "lex",
            TieBreak::GradedRevLex => "grevlex",
        }
    }
}

impl FromStr for TieBreak {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grlex" => Ok(TieBreak::GradedLex),
            "lex" => Ok(TieBreak::Lex),
            "grevlex" => Ok(TieBreak::GradedRevLex),
            other => Err(Error::InvalidOrder(format!(
                "unknown tie-break `{other}` (expected grlex, lex or grevlex)"
            ))),
        }
    }
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A sum-compatible well-order `≺` on `N^n`.
///
/// `precedence[0]` is the index of the most significant variable, so the
/// identity permutation gives `x1 ≻ x2 ≻ ... ≻ xn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TieBreakOrder {
    kind: TieBreak,
    precedence: Vec<usize>,
}

impl TieBreakOrder {
    pub fn new(kind: TieBreak, precedence: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; precedence.len()];
        for &i in &precedence {
            if i >= precedence.len() || seen[i] {
                return Err(Error::InvalidOrder(format!(
                    "variable precedence {precedence:?} is not a permutation"
                )));
            }
            seen[i] = true;
        }
        if precedence.is_empty() {
            return Err(Error::InvalidOrder("no variables".into()));
        }
        Ok(TieBreakOrder { kind, precedence })
    }

    pub fn with_kind(kind: TieBreak, n: usize) -> Self {
        TieBreakOrder {
            kind,
            precedence: (0..n).collect(),
        }
    }

    /// Graded-lex with `x1 ≻ x2 ≻ ... ≻ xn`.
    pub fn default_for(n: usize) -> Self {
        Self::with_kind(TieBreak::GradedLex, n)
    }

    pub fn kind(&self) -> TieBreak {
        self.kind
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn dim(&self) -> usize {
        self.precedence.len()
    }

    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Result<Ordering> {
        check_dim(self.dim(), a.dim())?;
        check_dim(self.dim(), b.dim())?;
        Ok(self.cmp(a, b))
    }

    /// Unchecked comparison; both exponents must have length `dim()`.
    pub(crate) fn cmp(&self, a: &Exponent, b: &Exponent) -> Ordering {
        let (a, b) = (a.coords(), b.coords());
        let lex = || {
            self.precedence
                .iter()
                .map(|&i| a[i].cmp(&b[i]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        };
        let degree = || {
            let da: u64 = a.iter().map(|&c| c as u64).sum();
            let db: u64 = b.iter().map(|&c| c as u64).sum();
            da.cmp(&db)
        };
        match self.kind {
            TieBreak::Lex => lex(),
            TieBreak::GradedLex => degree().then_with(lex),
            TieBreak::GradedRevLex => degree().then_with(|| {
                self.precedence
                    .iter()
                    .rev()
                    .map(|&i| b[i].cmp(&a[i]))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            }),
        }
    }
}

/// The weighted order `<_a`: compare `<a, .>` first, break ties with `≺`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedOrder {
    weight: WeightVector,
    tie: TieBreakOrder,
}

impl WeightedOrder {
    pub fn new(weight: WeightVector, tie: TieBreakOrder) -> Result<Self> {
        check_dim(weight.dim(), tie.dim())?;
        Ok(WeightedOrder { weight, tie })
    }

    /// `weight` with the default graded-lex tie-break.
    pub fn with_default_tie(weight: WeightVector) -> Self {
        let tie = TieBreakOrder::default_for(weight.dim());
        WeightedOrder { weight, tie }
    }

    pub fn weight(&self) -> &WeightVector {
        &self.weight
    }

    pub fn tie(&self) -> &TieBreakOrder {
        &self.tie
    }

    pub fn dim(&self) -> usize {
        self.weight.dim()
    }

    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Result<Ordering> {
        check_dim(self.dim(), a.dim())?;
        check_dim(self.dim(), b.dim())?;
        Ok(self.cmp(a, b))
    }

    pub(crate) fn cmp(&self, a: &Exponent, b: &Exponent) -> Ordering {
        self.weight
            .int_pairing(a)
            .cmp(&self.weight.int_pairing(b))
            .then_with(|| self.tie.cmp(a, b))
    }
}

/// True iff every support exponent of `f` has the same weight.
pub fn is_homogeneous(f: &Polynomial, a: &WeightVector) -> Result<bool> {
    check_dim(f.nvars(), a.dim())?;
    let mut weights = f.terms().map(|(e, _)| a.int_pairing(e));
    let first = weights.next().ok_or(Error::ZeroPolynomial)?;
    Ok(weights.all(|w| w == first))
}
