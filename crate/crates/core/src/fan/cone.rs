//! Relatively open rational polyhedral cones inside the positive orthant,
//! for ambient dimension at most 3.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::poly::{Scalar, WeightVector};

/// `{b in U^n : <b, v> = 0 for v in equalities, <b, w> > 0 for w in
/// inequalities}`.
///
/// Constraints are kept in a canonical form: equalities as the primitive
/// rows of a reduced echelon basis, inequalities reduced modulo the
/// equalities, primitive, irredundant and sorted. The coordinate
/// inequalities `b_i > 0` are implicit and never listed. Two cones are
/// equal iff their constraint lists are.
#[derive(Clone)]
pub struct Cone {
    n: usize,
    pub equalities: Vec<Vec<i64>>,
    pub inequalities: Vec<Vec<i64>>,
    pub dim: usize,
    /// Sum of the primitive extreme rays of the closure.
    pub interior_point: WeightVector,
    rays: Vec<Vec<i64>>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.equalities == other.equalities
            && self.inequalities == other.inequalities
    }
}

impl Eq for Cone {}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cone")
            .field("equalities", &self.equalities)
            .field("inequalities", &self.inequalities)
            .field("dim", &self.dim)
            .field("interior_point", &self.interior_point)
            .finish()
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

fn dot_q(a: &[Scalar], w: &[i64]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, &y) in a.iter().zip(w) {
        if y != 0 {
            acc += x * Scalar::from_integer(y.into());
        }
    }
    acc
}

/// Scales a rational vector to the primitive integer vector with the same
/// direction.
fn primitive_q(v: &[Scalar]) -> Vec<i64> {
    let l = v.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| {
            let y = if g.is_zero() { x.clone() } else { x / &g };
            i64::try_from(y).expect("constraint entry fits in i64")
        })
        .collect()
}

fn primitive(v: &[i128]) -> Vec<i64> {
    let g = v.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    v.iter()
        .map(|&x| {
            let y = if g == 0 { x } else { x / g };
            i64::try_from(y).expect("ray entry fits in i64")
        })
        .collect()
}

/// A nonzero vector orthogonal to all of `vs` (`n - 1` vectors in
/// dimension `n <= 3`), or zero if they are dependent.
fn null_vector(n: usize, vs: &[&Vec<i64>]) -> Vec<i128> {
    match n {
        1 => vec![1],
        2 => vec![-(vs[0][1] as i128), vs[0][0] as i128],
        3 => {
            let (a, b) = (vs[0], vs[1]);
            let (a0, a1, a2) = (a[0] as i128, a[1] as i128, a[2] as i128);
            let (b0, b1, b2) = (b[0] as i128, b[1] as i128, b[2] as i128);
            vec![a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0]
        }
        _ => panic!("cones are limited to dimension 3"),
    }
}

fn subsets<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, items[i]);
            out.push(rest);
        }
    }
    out
}

/// Rank of a set of integer vectors.
pub(crate) fn rank(vs: &[Vec<i64>]) -> usize {
    rref(vs).len()
}

/// Reduced row echelon form over `Q`; returns the nonzero rows together
/// with their pivot columns.
fn rref(vs: &[Vec<i64>]) -> Vec<(usize, Vec<Scalar>)> {
    let Some(n) = vs.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<Scalar>> = vs
        .iter()
        .map(|v| v.iter().map(|&x| Scalar::from_integer(x.into())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots.into_iter().zip(rows).collect()
}

impl Cone {
    /// Builds the canonical cone, or `None` when it has no strictly
    /// positive point.
    pub(crate) fn from_constraints(
        n: usize,
        equalities: &[Vec<i64>],
        inequalities: &[Vec<i64>],
    ) -> Option<Cone> {
        assert!((1..=3).contains(&n), "cones are limited to dimension 3");
        let echelon = rref(equalities);
        let mut eqs: Vec<Vec<i64>> = echelon.iter().map(|(_, row)| primitive_q(row)).collect();
        eqs.sort();
        let reduce = |w: &[i64]| -> Vec<i64> {
            let mut v: Vec<Scalar> = w.iter().map(|&x| Scalar::from_integer(x.into())).collect();
            for (c, row) in &echelon {
                let f = v[*c].clone();
                if !f.is_zero() {
                    for (x, y) in v.iter_mut().zip(row) {
                        *x -= &f * y;
                    }
                }
            }
            primitive_q(&v)
        };
        let mut ineqs: Vec<Vec<i64>> = Vec::new();
        for w in inequalities {
            let r = reduce(w);
            if r.iter().all(|&x| x == 0) {
                return None;
            }
            ineqs.push(r);
        }
        ineqs.sort();
        ineqs.dedup();

        let units: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                e
            })
            .collect();
        let rays = extreme_rays(n, &eqs, &ineqs, &units);
        if rays.is_empty() {
            return None;
        }
        let mut p = vec![0i64; n];
        for r in &rays {
            for (x, y) in p.iter_mut().zip(r) {
                *x += y;
            }
        }
        if p.iter().any(|&x| x <= 0) || ineqs.iter().any(|w| dot(&p, w) <= 0) {
            return None;
        }
        let dim = n - eqs.len();
        let unit_reps: Vec<Vec<i64>> = units.iter().map(|u| reduce(u)).collect();
        ineqs.retain(|w| {
            if unit_reps.contains(w) {
                return false;
            }
            let tight: Vec<Vec<i64>> = rays.iter().filter(|r| dot(r, w) == 0).cloned().collect();
            dim >= 1 && rank(&tight) == dim - 1 && !tight.is_empty()
        });
        Some(Cone {
            n,
            equalities: eqs,
            inequalities: ineqs,
            dim,
            interior_point: WeightVector::from_integers(&p).expect("positive interior point"),
            rays,
        })
    }

    /// The whole orthant `U^n`.
    pub fn full(n: usize) -> Cone {
        Cone::from_constraints(n, &[], &[]).expect("orthant is nonempty")
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.n
    }

    /// Primitive extreme rays of the closure, sorted.
    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    /// Extreme rays of the closure lying on `<b, w> = 0`.
    pub fn facet_rays(&self, w: &[i64]) -> Vec<Vec<i64>> {
        self.rays.iter().filter(|r| dot(r, w) == 0).cloned().collect()
    }

    /// Membership in the relatively open cone.
    pub fn contains(&self, b: &WeightVector) -> bool {
        b.dim() == self.n
            && self.equalities.iter().all(|v| b.pairing_i64(v).is_zero())
            && self.inequalities.iter().all(|w| b.pairing_i64(w).is_positive())
    }

    /// Membership in the closure, for a nonnegative rational vector.
    pub fn closure_contains(&self, b: &[Scalar]) -> bool {
        b.len() == self.n
            && b.iter().all(|x| !x.is_negative())
            && self.equalities.iter().all(|v| dot_q(b, v).is_zero())
            && self.inequalities.iter().all(|w| !dot_q(b, w).is_negative())
    }
}

/// Primitive extreme rays of `{b >= 0 : <b, v> = 0, <b, w> >= 0}`.
pub(crate) fn closed_rays(n: usize, eqs: &[Vec<i64>], ineqs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let units: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    extreme_rays(n, eqs, ineqs, &units)
}

fn extreme_rays(n: usize, eqs: &[Vec<i64>], ineqs: &[Vec<i64>], units: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let normals: Vec<&Vec<i64>> = eqs.iter().chain(ineqs).chain(units).collect();
    let valid = |r: &[i64]| {
        r.iter().any(|&x| x != 0)
            && r.iter().all(|&x| x >= 0)
            && eqs.iter().all(|v| dot(r, v) == 0)
            && ineqs.iter().all(|w| dot(r, w) >= 0)
    };
    let mut rays: Vec<Vec<i64>> = Vec::new();
    for subset in subsets(&normals, n - 1) {
        let v = null_vector(n, &subset);
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        for cand in [primitive(&v), primitive(&v.iter().map(|x| -x).collect::<Vec<_>>())] {
            if valid(&cand) && !rays.contains(&cand) {
                rays.push(cand);
            }
        }
    }
    rays.sort();
    rays
}
