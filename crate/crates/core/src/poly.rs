//! Exact multivariate polynomials over `Q` together with the weighted data
//! attached to them: supports, `a`-valuations, `a`-initial forms and leading
//! terms.
//!
//! Polynomials stand in for truncations of power series. Every stored object
//! is finite; the series behaviour shows up only through the caps used by
//! [`crate::division`].

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};
use crate::order::WeightedOrder;

/// Exact rational coefficient.
pub type Scalar = BigRational;

/// A point of `N^n`, the exponent of a monomial.
///
/// The derived ordering is plain lexicographic order on the coordinates. It
/// is only used as the canonical storage order of polynomial terms, never as
/// a monomial order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(coords: Vec<u32>) -> Self {
        Exponent(coords)
    }

    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Exponent(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    /// Componentwise `self <= other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    pub fn scaled(&self, k: u32) -> Exponent {
        Exponent(self.0.iter().map(|c| c * k).collect())
    }

    /// `self - other` as a signed integer vector.
    pub fn difference(&self, other: &Exponent) -> Vec<i64> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| *a as i64 - *b as i64)
            .collect()
    }
}

impl Add for &Exponent {
    type Output = Exponent;

    fn add(self, rhs: &Exponent) -> Exponent {
        debug_assert_eq!(self.dim(), rhs.dim());
        Exponent(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A strictly positive rational weight vector `a ∈ (Q_{>0})^n`.
///
/// Alongside the rational coordinates we keep the primitive integer vector
/// proportional to them; comparisons of weighted degrees only ever need the
/// integer form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    coords: Vec<Scalar>,
    primitive: Vec<BigInt>,
    /// `primitive[i] = coords[i] * scale`.
    scale: Scalar,
}

impl WeightVector {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(|c| !c.is_positive()) {
            return Err(Error::NonPositiveWeight);
        }
        let denom_lcm = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scaled: Vec<BigInt> = coords
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let g = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let primitive: Vec<BigInt> = scaled.iter().map(|v| v / &g).collect();
        let scale = BigRational::new(denom_lcm, g);
        Ok(WeightVector {
            coords,
            primitive,
            scale,
        })
    }

    pub fn from_integers(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| Scalar::from_integer(c.into())).collect())
    }

    /// Parses a comma separated list such as `1,2` or `3/2, 1`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut coords = Vec::new();
        let mut offset = 0;
        for part in text.split(',') {
            let trimmed = part.trim();
            let value = parse_rational(trimmed)
                .ok_or_else(|| Error::parse(offset, format!("invalid weight entry `{trimmed}`")))?;
            coords.push(value);
            offset += part.len() + 1;
        }
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// The primitive positive integer vector on the ray of `self`.
    pub fn primitive(&self) -> &[BigInt] {
        &self.primitive
    }

    /// The inner product `<a, alpha>`.
    pub fn pairing(&self, alpha: &Exponent) -> Scalar {
        Scalar::new(self.int_pairing(alpha), BigInt::one()) / &self.scale
    }

    /// `<a, alpha>` up to the positive factor `scale`; order-equivalent to
    /// [`Self::pairing`].
    pub(crate) fn int_pairing(&self, alpha: &Exponent) -> BigInt {
        debug_assert_eq!(alpha.dim(), self.dim());
        let mut acc = BigInt::zero();
        for (w, &e) in self.primitive.iter().zip(alpha.coords()) {
            if e != 0 {
                acc += w * BigInt::from(e);
            }
        }
        acc
    }

    /// Converts a rational bound on `<a, .>` into the scale of
    /// [`Self::int_pairing`].
    pub(crate) fn to_int_scale(&self, value: &Scalar) -> Scalar {
        value * &self.scale
    }

    pub(crate) fn pairing_i64(&self, v: &[i64]) -> Scalar {
        let mut acc = Scalar::zero();
        for (c, &x) in self.coords.iter().zip(v) {
            if x != 0 {
                acc += c * Scalar::from_integer(x.into());
            }
        }
        acc
    }

    /// The same ray rescaled so that the smallest coordinate is 1.
    pub fn normalized(&self) -> WeightVector {
        let min = self.coords.iter().min().cloned().unwrap_or_else(Scalar::one);
        WeightVector::new(self.coords.iter().map(|c| c / &min).collect())
            .expect("rescaling keeps coordinates positive")
    }
}

impl fmt::Debug for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightVector({self})")
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses an integer or a fraction such as `-3/2`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    parse_rational(text.trim()).ok_or_else(|| Error::parse(0, format!("invalid rational `{}`", text.trim())))
}

pub(crate) fn parse_rational(text: &str) -> Option<Scalar> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Scalar::new(num, den))
}

/// The `a`-valuation `ν(f, a)`; `+∞` for the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(Scalar),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// Multivariate polynomial with exact rational coefficients.
///
/// Terms live in a map keyed by exponent, so equality and hashing are
/// structural. Zero coefficients are never stored and the zero polynomial is
/// the empty map.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial(Exponent::zero(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn monomial(exp: Exponent, c: Scalar) -> Self {
        let nvars = exp.dim();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Polynomial { nvars, terms }
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Exponent::unit(nvars, i), Scalar::one())
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, merging
    /// repeated exponents.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Scalar)>,
    {
        let mut p = Polynomial::zero(nvars);
        for (e, c) in terms {
            check_dim(nvars, e.dim())?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Terms in canonical storage order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `Supp(f)`, in canonical order.
    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn remove_term(&mut self, e: &Exponent) -> Option<Scalar> {
        self.terms.remove(e)
    }

    /// `ν(f, a)`.
    pub fn valuation(&self, a: &WeightVector) -> Result<Valuation> {
        check_dim(self.nvars, a.dim())?;
        Ok(match self.terms.keys().map(|e| a.int_pairing(e)).min() {
            Some(v) => Valuation::Finite(Scalar::from_integer(v) / &a.scale),
            None => Valuation::Infinite,
        })
    }

    /// Minimal value of the integer-scaled pairing; `None` for zero.
    pub(crate) fn int_valuation(&self, a: &WeightVector) -> Option<BigInt> {
        self.terms.keys().map(|e| a.int_pairing(e)).min()
    }

    /// `in(f, a)`: the terms of minimal weight.
    pub fn initial_form(&self, a: &WeightVector) -> Result<Polynomial> {
        check_dim(self.nvars, a.dim())?;
        let v = self.int_valuation(a).ok_or(Error::ZeroPolynomial)?;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| a.int_pairing(e) == v)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Ok(Polynomial {
            nvars: self.nvars,
            terms,
        })
    }

    /// `exp(f, a)` together with its coefficient, i.e. `M(f, a)`.
    pub fn leading_term(&self, ord: &WeightedOrder) -> Result<(&Exponent, &Scalar)> {
        check_dim(self.nvars, ord.weight().dim())?;
        let mut best: Option<(&Exponent, &Scalar, BigInt)> = None;
        for (e, c) in &self.terms {
            let d = ord.weight().int_pairing(e);
            let better = match &best {
                None => true,
                Some((be, _, bd)) => match d.cmp(bd) {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => ord.tie().cmp(e, be) == Ordering::Greater,
                },
            };
            if better {
                best = Some((e, c, d));
            }
        }
        best.map(|(e, c, _)| (e, c)).ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_exponent(&self, ord: &WeightedOrder) -> Result<Exponent> {
        self.leading_term(ord).map(|(e, _)| e.clone())
    }

    pub fn leading_coefficient(&self, ord: &WeightedOrder) -> Result<Scalar> {
        self.leading_term(ord).map(|(_, c)| c.clone())
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self, ord: &WeightedOrder) -> Result<Polynomial> {
        let lc = self.leading_coefficient(ord)?;
        Ok(self.scale(&lc.recip()))
    }

    /// Componentwise-minimal elements of `Supp(f)`, in canonical order.
    ///
    /// Every `exp(f, a)` for `a` strictly positive is among them.
    pub fn minimal_support_elements(&self) -> Result<Vec<Exponent>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let support: Vec<&Exponent> = self.terms.keys().collect();
        Ok(support
            .iter()
            .filter(|e| !support.iter().any(|o| o != *e && o.divides(e)))
            .map(|e| (*e).clone())
            .collect())
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn try_add(&self, rhs: &Polynomial) -> Result<Polynomial> {
        check_dim(self.nvars, rhs.nvars)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Polynomial) -> Result<Polynomial> {
        check_dim(self.nvars, rhs.nvars)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, rhs: &Polynomial) -> Result<Polynomial> {
        check_dim(self.nvars, rhs.nvars)?;
        let mut out = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self -= c * other`, in place.
    pub(crate) fn sub_scaled(&mut self, other: &Polynomial, c: &Scalar) {
        for (e, v) in &other.terms {
            self.add_term(e.clone(), -(v * c));
        }
    }

    /// Largest absolute numerator or denominator among the coefficients;
    /// handy for keeping generated test data small.
    pub fn height(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| std::cmp::max(c.numer().abs(), c.denom().abs()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    /// Panics on a dimension mismatch; see [`Polynomial::try_add`].
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial dimensions differ")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial dimensions differ")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial dimensions differ")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::text::VarNames::default_for(self.nvars);
        write!(f, "{}", names.format(self))
    }
}
