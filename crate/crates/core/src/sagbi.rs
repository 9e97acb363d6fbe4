//! Canonical bases: the relation criterion, completion, minimal and reduced
//! bases.

use std::fmt;

use num_traits::Zero;

use crate::division::{DivisionStatus, Factorizer, Subductor};
use crate::error::{check_dim, Error, Result};
use crate::order::WeightedOrder;
use crate::poly::{Exponent, Polynomial, Scalar, Valuation};
use crate::semigroup::AffineSemigroup;
use crate::toric::{evaluate_relation, toric_kernel};

/// Generators of `A = Q[[f_1, ..., f_s]]`.
///
/// Generators must be nonzero and vanish at the origin; a unit would not
/// define a substitution of formal power series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    nvars: usize,
    gens: Vec<Polynomial>,
}

impl AlgebraPresentation {
    pub fn new(gens: Vec<Polynomial>) -> Result<Self> {
        let nvars = gens.first().ok_or(Error::EmptyAlgebra)?.nvars();
        for (i, g) in gens.iter().enumerate() {
            check_dim(nvars, g.nvars())?;
            if g.is_zero() {
                return Err(Error::ZeroGenerator(i));
            }
            if !g.coefficient(&Exponent::zero(nvars)).is_zero() {
                return Err(Error::ConstantTermGenerator(i));
            }
        }
        Ok(AlgebraPresentation { nvars, gens })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    /// Largest `a`-valuation among the generators.
    pub fn max_valuation(&self, ord: &WeightedOrder) -> Result<Scalar> {
        let mut best: Option<Scalar> = None;
        for g in &self.gens {
            if let Valuation::Finite(v) = g.valuation(ord.weight())? {
                if best.as_ref().is_none_or(|b| &v > b) {
                    best = Some(v);
                }
            }
        }
        Ok(best.expect("generators are nonzero"))
    }

    fn check_cap(&self, ord: &WeightedOrder, cap: &Scalar) -> Result<()> {
        check_dim(self.nvars, ord.dim())?;
        let v = self.max_valuation(ord)?;
        if cap < &v {
            return Err(Error::CapBelowValuation {
                cap: cap.to_string(),
                valuation: v.to_string(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisStatus {
    Exact,
    CapReached,
}

impl BasisStatus {
    pub fn name(self) -> &'static str {
        match self {
            BasisStatus::Exact => "exact",
            BasisStatus::CapReached => "cap_reached",
        }
    }
}

impl fmt::Display for BasisStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalBasis {
    pub elements: Vec<Polynomial>,
    pub order: WeightedOrder,
    pub status: BasisStatus,
    pub cap: Scalar,
    pub minimal: bool,
    pub reduced: bool,
    /// Elements adjoined by completion, in the order they were found.
    pub adjoined: Vec<Polynomial>,
}

impl CanonicalBasis {
    pub fn is_exact(&self) -> bool {
        self.status == BasisStatus::Exact
    }

    pub fn nvars(&self) -> usize {
        self.order.dim()
    }

    pub fn leading_exponents(&self) -> Vec<Exponent> {
        self.elements
            .iter()
            .map(|g| g.leading_exponent(&self.order).expect("basis elements are nonzero"))
            .collect()
    }

    /// The semigroup spanned by the leading exponents.
    pub fn semigroup(&self) -> AffineSemigroup {
        AffineSemigroup::new(self.nvars(), self.leading_exponents())
            .expect("leading exponents share the dimension")
    }

    pub fn initial_forms(&self) -> Vec<Polynomial> {
        self.elements
            .iter()
            .map(|g| g.initial_form(self.order.weight()).expect("basis elements are nonzero"))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Canonicity {
    Yes,
    /// An element of the algebra whose leading exponent is not generated
    /// by the current leading exponents.
    No(Polynomial),
    /// Every failure to reduce to zero was cut off by the cap.
    UnknownCap,
}

struct RoundOutcome {
    candidates: Vec<Polynomial>,
    unknown: bool,
}

/// Evaluates the relations among the leading monomials and subducts each
/// resulting element.
fn round(gens: &[Polynomial], ord: &WeightedOrder, cap: &Scalar) -> Result<RoundOutcome> {
    let monic: Vec<Polynomial> = gens.iter().map(|g| g.monic(ord)).collect::<Result<_>>()?;
    let mut subductor = Subductor::new(monic.clone(), ord)?;
    let relations = toric_kernel(subductor.leading_exponents())?;
    let mut outcome = RoundOutcome {
        candidates: Vec::new(),
        unknown: false,
    };
    for rel in &relations {
        let s = evaluate_relation(rel, &monic)?;
        if s.is_zero() {
            continue;
        }
        let r = subductor.subduct_capped(&s, cap);
        if r.remainder.is_zero() {
            if r.status == DivisionStatus::Truncated {
                outcome.unknown = true;
            }
        } else if r.status.is_final() {
            outcome.candidates.push(r.remainder);
        } else {
            // remainder + tail = s - (finite quotient sum), still in A, and
            // its leading term is a remainder term
            outcome.candidates.push(&r.remainder + &r.tail);
        }
    }
    Ok(outcome)
}

/// Tests whether `A`'s generators form a canonical basis for `ord`.
pub fn is_canonical(a: &AlgebraPresentation, ord: &WeightedOrder, cap: &Scalar) -> Result<Canonicity> {
    a.check_cap(ord, cap)?;
    let outcome = round(a.generators(), ord, cap)?;
    Ok(match outcome.candidates.into_iter().next() {
        Some(w) => Canonicity::No(w),
        None if outcome.unknown => Canonicity::UnknownCap,
        None => Canonicity::Yes,
    })
}

/// Completion: adjoin remainders of the relation elements until every one
/// subducts to zero or only the cap stops progress.
pub fn complete(a: &AlgebraPresentation, ord: &WeightedOrder, cap: &Scalar) -> Result<CanonicalBasis> {
    a.check_cap(ord, cap)?;
    let mut elements = a.generators().to_vec();
    let mut adjoined = Vec::new();
    let status = loop {
        let mut outcome = round(&elements, ord, cap)?;
        let mut leads: Vec<Exponent> = elements
            .iter()
            .map(|g| g.leading_exponent(ord))
            .collect::<Result<_>>()?;
        let mut keyed: Vec<(Exponent, Polynomial)> = outcome
            .candidates
            .drain(..)
            .map(|c| Ok((c.leading_exponent(ord)?, c)))
            .collect::<Result<_>>()?;
        keyed.sort_by(|(x, _), (y, _)| ord.cmp(x, y));
        let mut grew = false;
        for (lead, c) in keyed {
            if Factorizer::new(leads.clone(), ord.dim()).contains(&lead) {
                continue;
            }
            let g = c.monic(ord)?;
            leads.push(lead);
            elements.push(g.clone());
            adjoined.push(g);
            grew = true;
        }
        if !grew {
            break if outcome.unknown {
                BasisStatus::CapReached
            } else {
                BasisStatus::Exact
            };
        }
    };
    Ok(CanonicalBasis {
        elements,
        order: ord.clone(),
        status,
        cap: cap.clone(),
        minimal: false,
        reduced: false,
        adjoined,
    })
}

fn sort_by_lead(elements: &mut [Polynomial], ord: &WeightedOrder) {
    elements.sort_by(|f, g| {
        ord.cmp(
            &f.leading_exponent(ord).expect("nonzero"),
            &g.leading_exponent(ord).expect("nonzero"),
        )
    });
}

fn minimalize_relaxed(b: &CanonicalBasis) -> CanonicalBasis {
    let ord = &b.order;
    let mut items: Vec<(Exponent, Polynomial)> = b
        .elements
        .iter()
        .map(|g| (g.leading_exponent(ord).expect("nonzero"), g.clone()))
        .collect();
    items.sort_by(|(x, _), (y, _)| ord.cmp(y, x));
    let mut i = 0;
    while i < items.len() {
        let others: Vec<Exponent> = items
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (e, _))| e.clone())
            .collect();
        if Factorizer::new(others, ord.dim()).contains(&items[i].0) {
            items.remove(i);
        } else {
            i += 1;
        }
    }
    let mut elements: Vec<Polynomial> = items.into_iter().map(|(_, g)| g).collect();
    sort_by_lead(&mut elements, ord);
    CanonicalBasis {
        elements,
        minimal: true,
        reduced: false,
        ..b.clone()
    }
}

/// Drops elements whose leading exponent is generated by the others.
pub fn minimalize(b: &CanonicalBasis) -> Result<CanonicalBasis> {
    if !b.is_exact() {
        return Err(Error::BasisNotExact);
    }
    Ok(minimalize_relaxed(b))
}

fn is_minimal(b: &CanonicalBasis) -> bool {
    let leads = b.leading_exponents();
    (0..leads.len()).all(|i| {
        let others: Vec<Exponent> = leads
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, e)| e.clone())
            .collect();
        !Factorizer::new(others, b.nvars()).contains(&leads[i])
    })
}

fn reduce_relaxed(b: &CanonicalBasis) -> Result<CanonicalBasis> {
    let ord = &b.order;
    let monic: Vec<Polynomial> = b.elements.iter().map(|g| g.monic(ord)).collect::<Result<_>>()?;
    let mut subductor = Subductor::new(monic.clone(), ord)?;
    let mut all_final = true;
    let mut elements = Vec::with_capacity(monic.len());
    for g in &monic {
        let lead = g.leading_exponent(ord)?;
        let mut tail = g.clone();
        tail.remove_term(&lead);
        let r = subductor.subduct_capped(&tail, &b.cap);
        let mut reduced = Polynomial::monomial(lead, Scalar::from_integer(1.into()));
        reduced = &reduced + &r.remainder;
        if !r.status.is_final() {
            all_final = false;
            reduced = &reduced + &r.tail;
        }
        elements.push(reduced);
    }
    sort_by_lead(&mut elements, ord);
    let exact = b.is_exact() && all_final;
    Ok(CanonicalBasis {
        elements,
        status: if exact {
            BasisStatus::Exact
        } else {
            BasisStatus::CapReached
        },
        minimal: true,
        reduced: exact,
        ..b.clone()
    })
}

/// The reduced basis: monic elements whose tails avoid the leading-exponent
/// semigroup. Unique for a given algebra and order.
pub fn reduce(b: &CanonicalBasis) -> Result<CanonicalBasis> {
    if !b.is_exact() {
        return Err(Error::BasisNotExact);
    }
    if !is_minimal(b) {
        return Err(Error::BasisNotMinimal);
    }
    reduce_relaxed(b)
}

/// Completion followed by minimalization and reduction. A cap-limited
/// completion still goes through both steps; the result is then flagged
/// `CapReached` and not marked reduced.
pub fn reduced_basis(a: &AlgebraPresentation, ord: &WeightedOrder, cap: &Scalar) -> Result<CanonicalBasis> {
    let b = complete(a, ord, cap)?;
    reduce_relaxed(&minimalize_relaxed(&b))
}
