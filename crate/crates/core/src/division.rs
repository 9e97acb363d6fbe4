//! Subduction: division of a series by a list of generators.
//!
//! `F` is rewritten as `H + R` where `H` is a (possibly infinite) series in
//! the generators and no exponent of `R` is a sum of generator leading
//! exponents. Only finitely many quotient terms are ever produced; a weight
//! cap bounds the work.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{check_dim, Error, Result};
use crate::order::WeightedOrder;
use crate::poly::{Exponent, Polynomial, Scalar, Valuation};
use crate::semigroup::AffineSemigroup;

/// Multiplicities `m` with `sum m_i * theta_i = beta`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factorization {
    pub multiplicities: Vec<u32>,
}

impl Factorization {
    /// `sum m_i * theta_i`.
    pub fn evaluate(&self, thetas: &[Exponent]) -> Option<Exponent> {
        let n = thetas.first()?.dim();
        let mut acc = Exponent::zero(n);
        for (t, &m) in thetas.iter().zip(&self.multiplicities) {
            acc = &acc + &t.scaled(m);
        }
        Some(acc)
    }
}

/// Memoised feasibility search for factorizations over a fixed list of
/// exponents.
#[derive(Clone, Debug)]
pub(crate) struct Factorizer {
    gens: Vec<Exponent>,
    /// `reach[i][j]`: some generator with index `>= i` is positive in
    /// coordinate `j`.
    reach: Vec<Vec<bool>>,
    memo: HashMap<(usize, Exponent), bool>,
}

impl Factorizer {
    pub(crate) fn new(gens: Vec<Exponent>, n: usize) -> Self {
        let s = gens.len();
        let mut reach = vec![vec![false; n]; s + 1];
        for i in (0..s).rev() {
            let (head, tail) = reach.split_at_mut(i + 1);
            for (j, r) in head[i].iter_mut().enumerate() {
                *r = tail[0][j] || gens[i].coords()[j] > 0;
            }
        }
        Factorizer {
            gens,
            reach,
            memo: HashMap::new(),
        }
    }

    fn max_multiple(g: &Exponent, target: &Exponent) -> u32 {
        g.coords()
            .iter()
            .zip(target.coords())
            .filter(|(gi, _)| **gi > 0)
            .map(|(gi, ti)| ti / gi)
            .min()
            .unwrap_or(0)
    }

    fn feasible(&mut self, i: usize, target: &Exponent) -> bool {
        if target.is_zero() {
            return true;
        }
        if i == self.gens.len() {
            return false;
        }
        if target
            .coords()
            .iter()
            .zip(&self.reach[i])
            .any(|(t, r)| *t > 0 && !r)
        {
            return false;
        }
        if let Some(&known) = self.memo.get(&(i, target.clone())) {
            return known;
        }
        let g = self.gens[i].clone();
        let mut result = false;
        if !g.is_zero() {
            let mut rest = target.clone();
            for _ in 0..=Self::max_multiple(&g, target) {
                if self.feasible(i + 1, &rest) {
                    result = true;
                    break;
                }
                match rest.checked_sub(&g) {
                    Some(r) => rest = r,
                    None => break,
                }
            }
        } else {
            result = self.feasible(i + 1, target);
        }
        self.memo.insert((i, target.clone()), result);
        result
    }

    /// The lexicographically smallest multiplicity vector, if any.
    pub(crate) fn factor(&mut self, target: &Exponent) -> Option<Factorization> {
        if !self.feasible(0, target) {
            return None;
        }
        let mut multiplicities = Vec::with_capacity(self.gens.len());
        let mut rest = target.clone();
        for i in 0..self.gens.len() {
            let g = self.gens[i].clone();
            let mut k = 0;
            if !g.is_zero() {
                while !self.feasible(i + 1, &rest) {
                    rest = rest.checked_sub(&g).expect("feasibility guarantees a fit");
                    k += 1;
                }
            }
            multiplicities.push(k);
        }
        debug_assert!(rest.is_zero());
        Some(Factorization { multiplicities })
    }

    pub(crate) fn contains(&mut self, target: &Exponent) -> bool {
        self.feasible(0, target)
    }
}

/// Decides whether `beta` lies in the semigroup generated by `gens` and
/// returns the lexicographically smallest multiplicity vector if so.
pub fn monomial_membership(beta: &Exponent, gens: &[Exponent]) -> Result<Option<Factorization>> {
    for g in gens {
        check_dim(beta.dim(), g.dim())?;
    }
    Ok(Factorizer::new(gens.to_vec(), beta.dim()).factor(beta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DivisionStatus {
    /// The loop ran until nothing was left.
    Exact,
    /// The cap was reached, but the generator leading exponents span a
    /// cofinite semigroup and every leftover term lies above its largest
    /// gap. The remainder is therefore final; only the quotient series is
    /// cut off, and the leftover tail is a member of the algebra.
    Converged,
    /// The cap was reached with unprocessed terms whose fate is unknown.
    Truncated,
}

impl DivisionStatus {
    pub fn name(self) -> &'static str {
        match self {
            DivisionStatus::Exact => "exact",
            DivisionStatus::Converged => "converged",
            DivisionStatus::Truncated => "truncated",
        }
    }

    /// The remainder is the true remainder of the full series division.
    pub fn is_final(self) -> bool {
        !matches!(self, DivisionStatus::Truncated)
    }
}

impl fmt::Display for DivisionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One emitted quotient term `c * g_1^{m_1} ... g_s^{m_s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientTerm {
    pub coefficient: Scalar,
    pub multiplicities: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionResult {
    pub remainder: Polynomial,
    pub quotient_terms: Vec<QuotientTerm>,
    pub status: DivisionStatus,
    pub cap: Scalar,
    /// Unprocessed terms left when the cap stopped the loop; zero when
    /// exact. Always `F = sum of quotient products + remainder + tail`.
    pub tail: Polynomial,
}

impl DivisionResult {
    /// `sum of quotient products + remainder + tail`, which equals the
    /// divided polynomial.
    pub fn reconstruct(&self, gens: &[Polynomial]) -> Result<Polynomial> {
        let mut acc = self.remainder.try_add(&self.tail)?;
        for q in &self.quotient_terms {
            acc = acc.try_add(&product(gens, &q.multiplicities)?.scale(&q.coefficient))?;
        }
        Ok(acc)
    }
}

fn product(gens: &[Polynomial], m: &[u32]) -> Result<Polynomial> {
    if gens.len() != m.len() {
        return Err(Error::ArityMismatch {
            relation: m.len(),
            generators: gens.len(),
        });
    }
    let n = gens.first().map_or(0, Polynomial::nvars);
    let mut acc = Polynomial::one(n);
    for (g, &k) in gens.iter().zip(m) {
        if k > 0 {
            acc = acc.try_mul(&g.pow(k))?;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
enum Convergence {
    /// Leading exponents do not span a cofinite semigroup (or the check hit
    /// its bound).
    Unavailable,
    /// Every exponent whose integer-scaled weight exceeds this is covered.
    Above(BigInt),
    /// The semigroup is all of `N^n`.
    Everything,
}

/// Reusable division context for a fixed generator list and order.
///
/// Caches generator powers, products and factorizations between calls.
#[derive(Clone, Debug)]
pub struct Subductor {
    gens: Vec<Polynomial>,
    ord: WeightedOrder,
    leads: Vec<Exponent>,
    factorizer: Factorizer,
    powers: Vec<Vec<Polynomial>>,
    products: HashMap<Vec<u32>, Polynomial>,
    convergence: Option<Convergence>,
}

impl Subductor {
    pub fn new(gens: Vec<Polynomial>, ord: &WeightedOrder) -> Result<Self> {
        let n = ord.dim();
        let mut leads = Vec::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            check_dim(n, g.nvars())?;
            if g.is_zero() {
                return Err(Error::ZeroGenerator(i));
            }
            leads.push(g.leading_exponent(ord)?);
        }
        let powers = gens.iter().map(|g| vec![Polynomial::one(g.nvars())]).collect();
        Ok(Subductor {
            factorizer: Factorizer::new(leads.clone(), n),
            gens,
            ord: ord.clone(),
            leads,
            powers,
            products: HashMap::new(),
            convergence: None,
        })
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn order(&self) -> &WeightedOrder {
        &self.ord
    }

    pub fn leading_exponents(&self) -> &[Exponent] {
        &self.leads
    }

    /// Whether `beta` is a sum of generator leading exponents.
    pub fn covers(&mut self, beta: &Exponent) -> bool {
        self.factorizer.contains(beta)
    }

    /// Divides `f`, working on terms of weight at most `cap`.
    pub fn subduct(&mut self, f: &Polynomial, cap: &Scalar) -> Result<DivisionResult> {
        self.check_input(f, cap)?;
        Ok(self.run(f, cap, None))
    }

    /// As [`Self::subduct`], also returning the leading exponents the loop
    /// processed, in order.
    pub fn subduct_traced(
        &mut self,
        f: &Polynomial,
        cap: &Scalar,
    ) -> Result<(DivisionResult, Vec<Exponent>)> {
        self.check_input(f, cap)?;
        let mut trace = Vec::new();
        let result = self.run(f, cap, Some(&mut trace));
        Ok((result, trace))
    }

    /// Division without the cap precondition: a cap below `ν(f)` just
    /// truncates immediately.
    pub(crate) fn subduct_capped(&mut self, f: &Polynomial, cap: &Scalar) -> DivisionResult {
        self.run(f, cap, None)
    }

    fn check_input(&self, f: &Polynomial, cap: &Scalar) -> Result<()> {
        check_dim(self.ord.dim(), f.nvars())?;
        if let Valuation::Finite(v) = f.valuation(self.ord.weight())? {
            if &v > cap {
                return Err(Error::CapBelowValuation {
                    cap: cap.to_string(),
                    valuation: v.to_string(),
                });
            }
        }
        Ok(())
    }

    fn convergence(&mut self) -> &Convergence {
        if self.convergence.is_none() {
            let report = AffineSemigroup::new(self.ord.dim(), self.leads.clone())
                .expect("leading exponents share the dimension")
                .gap_report();
            let c = if !report.cofinite {
                Convergence::Unavailable
            } else {
                match report
                    .gaps
                    .iter()
                    .map(|g| self.ord.weight().int_pairing(g))
                    .max()
                {
                    Some(w) => Convergence::Above(w),
                    None => Convergence::Everything,
                }
            };
            self.convergence = Some(c);
        }
        self.convergence.as_ref().expect("just set")
    }

    fn product(&mut self, m: &[u32]) -> Polynomial {
        if let Some(p) = self.products.get(m) {
            return p.clone();
        }
        let n = self.ord.dim();
        let mut acc = Polynomial::one(n);
        for (i, &k) in m.iter().enumerate() {
            if k == 0 {
                continue;
            }
            while self.powers[i].len() <= k as usize {
                let next = self.powers[i].last().expect("nonempty") * &self.gens[i];
                self.powers[i].push(next);
            }
            acc = &acc * &self.powers[i][k as usize];
        }
        self.products.insert(m.to_vec(), acc.clone());
        acc
    }

    fn run(
        &mut self,
        f: &Polynomial,
        cap: &Scalar,
        mut trace: Option<&mut Vec<Exponent>>,
    ) -> DivisionResult {
        let n = self.ord.dim();
        let cap_int = self.ord.weight().to_int_scale(cap);
        let mut current = f.clone();
        let mut remainder = Polynomial::zero(n);
        let mut quotient_terms = Vec::new();
        let status = loop {
            let Some((lead, coeff, weight)) = leading(&current, &self.ord) else {
                break DivisionStatus::Exact;
            };
            if Scalar::from_integer(weight.clone()) > cap_int {
                let converged = match self.convergence() {
                    Convergence::Everything => true,
                    Convergence::Above(w) => &weight > w,
                    Convergence::Unavailable => false,
                };
                break if converged {
                    DivisionStatus::Converged
                } else {
                    DivisionStatus::Truncated
                };
            }
            if let Some(t) = trace.as_deref_mut() {
                t.push(lead.clone());
            }
            match self.factorizer.factor(&lead) {
                Some(fact) => {
                    let prod = self.product(&fact.multiplicities);
                    let q = coeff / prod.coefficient(&lead);
                    current.sub_scaled(&prod, &q);
                    debug_assert!(current.coefficient(&lead).is_zero());
                    quotient_terms.push(QuotientTerm {
                        coefficient: q,
                        multiplicities: fact.multiplicities,
                    });
                }
                None => {
                    current.remove_term(&lead);
                    remainder.add_term(lead, coeff);
                }
            }
        };
        DivisionResult {
            remainder,
            quotient_terms,
            status,
            cap: cap.clone(),
            tail: current,
        }
    }
}

/// Leading exponent, coefficient and integer-scaled weight.
fn leading(p: &Polynomial, ord: &WeightedOrder) -> Option<(Exponent, Scalar, BigInt)> {
    let mut best: Option<(&Exponent, &Scalar, BigInt)> = None;
    for (e, c) in p.terms() {
        let w = ord.weight().int_pairing(e);
        let better = match &best {
            None => true,
            Some((be, _, bw)) => w < *bw || (w == *bw && ord.tie().cmp(e, be).is_gt()),
        };
        if better {
            best = Some((e, c, w));
        }
    }
    best.map(|(e, c, w)| (e.clone(), c.clone(), w))
}

/// One-shot division of `f` by `gens` under `ord`, stopping at weight `cap`.
pub fn subduct(
    f: &Polynomial,
    gens: &[Polynomial],
    ord: &WeightedOrder,
    cap: &Scalar,
) -> Result<DivisionResult> {
    Subductor::new(gens.to_vec(), ord)?.subduct(f, cap)
}
