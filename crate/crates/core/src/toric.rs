//! Binomial generators for the relations among monomials.
//!
//! For exponents `theta_1, ..., theta_s` the kernel of
//! `K[X_1, ..., X_s] -> K[x]`, `X_i -> x^{theta_i}`, is spanned by
//! binomials. We take an integer basis of the lattice
//! `{u : sum u_i theta_i = 0}`, turn it into binomials and saturate by
//! each `X_i` in turn. Buchberger's algorithm on pure difference binomials
//! never leaves the class of pure difference binomials, so everything
//! stays in exponent arithmetic.

use std::cmp::Ordering;
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use crate::error::{check_dim, Error, Result};
use crate::poly::{Exponent, Polynomial};
use crate::text::VarNames;

/// The binomial `X^plus - X^minus` over `s` symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinomialRelation {
    pub plus: Vec<u32>,
    pub minus: Vec<u32>,
}

impl BinomialRelation {
    pub fn arity(&self) -> usize {
        self.plus.len()
    }

    /// True iff both sides map to the same monomial under `thetas`.
    pub fn holds_for(&self, thetas: &[Exponent]) -> bool {
        image(&self.plus, thetas) == image(&self.minus, thetas)
    }

    /// The binomial as a polynomial in `s` variables.
    pub fn to_polynomial(&self) -> Polynomial {
        let s = self.arity();
        let one = crate::poly::Scalar::from_integer(1.into());
        let mut p = Polynomial::monomial(Exponent::new(self.plus.clone()), one.clone());
        p.add_term(Exponent::new(self.minus.clone()), -one);
        debug_assert_eq!(p.nvars(), s);
        p
    }
}

impl fmt::Display for BinomialRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = VarNames::indexed("X", self.arity());
        write!(
            f,
            "{} - {}",
            names.format_monomial(&Exponent::new(self.plus.clone())),
            names.format_monomial(&Exponent::new(self.minus.clone()))
        )
    }
}

fn image(m: &[u32], thetas: &[Exponent]) -> Vec<u64> {
    let n = thetas.first().map_or(0, Exponent::dim);
    let mut acc = vec![0u64; n];
    for (k, t) in m.iter().zip(thetas) {
        for (a, c) in acc.iter_mut().zip(t.coords()) {
            *a += *k as u64 * *c as u64;
        }
    }
    acc
}

/// `prod g_i^{plus_i} - prod g_i^{minus_i}`.
pub fn evaluate_relation(rel: &BinomialRelation, gens: &[Polynomial]) -> Result<Polynomial> {
    if rel.arity() != gens.len() || rel.minus.len() != gens.len() {
        return Err(Error::ArityMismatch {
            relation: rel.arity(),
            generators: gens.len(),
        });
    }
    let n = gens.first().ok_or(Error::EmptyAlgebra)?.nvars();
    let side = |m: &[u32]| -> Result<Polynomial> {
        let mut acc = Polynomial::one(n);
        for (g, &k) in gens.iter().zip(m) {
            if k > 0 {
                acc = acc.try_mul(&g.pow(k))?;
            }
        }
        Ok(acc)
    };
    side(&rel.plus)?.try_sub(&side(&rel.minus)?)
}

/// A generating set of binomials for the relations among `x^{theta_i}`.
///
/// The result is the reduced Gröbner basis of the relation ideal for
/// graded-lex order with `X_1 > ... > X_s`, leading side first, sorted by
/// degree of the leading side and then lexicographically.
pub fn toric_kernel(thetas: &[Exponent]) -> Result<Vec<BinomialRelation>> {
    let n = thetas.first().ok_or(Error::EmptyAlgebra)?.dim();
    for t in thetas {
        check_dim(n, t.dim())?;
    }
    let s = thetas.len();
    // X_j - 1 for a zero exponent; the other variables never meet X_j
    let mut out: Vec<BinomialRelation> = Vec::new();
    let live: Vec<usize> = (0..s).filter(|&j| !thetas[j].is_zero()).collect();
    for j in (0..s).filter(|&j| thetas[j].is_zero()) {
        let mut plus = vec![0; s];
        plus[j] = 1;
        out.push(BinomialRelation { plus, minus: vec![0; s] });
    }
    if !live.is_empty() {
        let sub: Vec<Exponent> = live.iter().map(|&j| thetas[j].clone()).collect();
        for b in kernel_of_nonzero(&sub) {
            let mut plus = vec![0; s];
            let mut minus = vec![0; s];
            for (k, &j) in live.iter().enumerate() {
                plus[j] = b.lead[k];
                minus[j] = b.trail[k];
            }
            out.push(BinomialRelation { plus, minus });
        }
    }
    out.sort_by(|a, b| {
        degree(&a.plus)
            .cmp(&degree(&b.plus))
            .then_with(|| b.plus.cmp(&a.plus))
            .then_with(|| b.minus.cmp(&a.minus))
    });
    Ok(out)
}

/// Saturates the lattice ideal one variable at a time. The ideal is
/// homogeneous for `deg X_j = |theta_j| > 0`, so a Gröbner basis for
/// weighted reverse-lex with `X_i` last, divided by powers of `X_i`,
/// generates `I : X_i^inf`.
fn kernel_of_nonzero(thetas: &[Exponent]) -> Vec<Binomial> {
    let s = thetas.len();
    let weights: Vec<u64> = thetas.iter().map(|t| t.total_degree()).collect();
    let mut gens: Vec<Binomial> = lattice_kernel(thetas)
        .iter()
        .filter_map(|u| {
            let plus = u.iter().map(|&x| x.max(0) as u32).collect();
            let minus = u.iter().map(|&x| (-x).max(0) as u32).collect();
            Binomial::oriented(plus, minus, &graded_lex)
        })
        .collect();
    if gens.is_empty() {
        return gens;
    }
    let unit = vec![1; s];
    for i in 0..s {
        let ord = |a: &[u32], b: &[u32]| weighted_revlex_last(&weights, i, a, b);
        gens = groebner(gens, &ord, &weights)
            .into_iter()
            .filter_map(|mut g| {
                let k = g.lead[i].min(g.trail[i]);
                g.lead[i] -= k;
                g.trail[i] -= k;
                Binomial::oriented(g.lead, g.trail, &ord)
            })
            .collect();
    }
    groebner(gens, &graded_lex, &unit)
}

/// Normal form of `X^m` under the rewriting rules `X^plus -> X^minus`.
///
/// With the output of [`toric_kernel`] this decides membership:
/// `X^u - X^v` is a relation iff the two normal forms agree.
pub fn binomial_normal_form(relations: &[BinomialRelation], m: &[u32]) -> Vec<u32> {
    let rules: Vec<Binomial> = relations
        .iter()
        .map(|r| Binomial {
            lead: r.plus.clone(),
            trail: r.minus.clone(),
        })
        .collect();
    normal_form(&rules, m.to_vec())
}

fn degree(m: &[u32]) -> u64 {
    m.iter().map(|&c| c as u64).sum()
}

/// Integer kernel basis of the matrix with columns `thetas`, by unimodular
/// column operations.
fn lattice_kernel(thetas: &[Exponent]) -> Vec<Vec<i64>> {
    let s = thetas.len();
    let n = thetas[0].dim();
    // cols[j] = (image column, transform column)
    let mut cols: Vec<(Vec<i128>, Vec<i128>)> = (0..s)
        .map(|j| {
            let a = thetas[j].coords().iter().map(|&c| c as i128).collect();
            let mut u = vec![0i128; s];
            u[j] = 1;
            (a, u)
        })
        .collect();
    let mut pivot = 0;
    for row in 0..n {
        if pivot == s {
            break;
        }
        loop {
            // smallest nonzero |entry| in this row among remaining columns
            let best = (pivot..s)
                .filter(|&j| cols[j].0[row] != 0)
                .min_by_key(|&j| cols[j].0[row].abs());
            let Some(b) = best else { break };
            cols.swap(pivot, b);
            let p = cols[pivot].0[row];
            let mut done = true;
            for j in pivot + 1..s {
                let q = cols[j].0[row].div_euclid(p);
                if q != 0 {
                    let (pa, pu) = cols[pivot].clone();
                    for (x, y) in cols[j].0.iter_mut().zip(&pa) {
                        *x -= q * y;
                    }
                    for (x, y) in cols[j].1.iter_mut().zip(&pu) {
                        *x -= q * y;
                    }
                }
                if cols[j].0[row] != 0 {
                    done = false;
                }
            }
            if done {
                pivot += 1;
                break;
            }
        }
    }
    cols[pivot..]
        .iter()
        .map(|(_, u)| {
            u.iter()
                .map(|&x| i64::try_from(x).expect("kernel entry fits in i64"))
                .collect()
        })
        .collect()
}

/// `X^lead - X^trail` with `lead` greater in the order at hand.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Binomial {
    lead: Vec<u32>,
    trail: Vec<u32>,
}

type MonomialOrder<'a> = dyn Fn(&[u32], &[u32]) -> Ordering + 'a;

impl Binomial {
    fn oriented(a: Vec<u32>, b: Vec<u32>, ord: &MonomialOrder) -> Option<Binomial> {
        match ord(&a, &b) {
            Ordering::Greater => Some(Binomial { lead: a, trail: b }),
            Ordering::Less => Some(Binomial { lead: b, trail: a }),
            Ordering::Equal => None,
        }
    }
}

/// Graded-lex with `X_1 > X_2 > ...`.
fn graded_lex(a: &[u32], b: &[u32]) -> Ordering {
    degree(a).cmp(&degree(b)).then_with(|| a.cmp(b))
}

/// Weighted degree, then reverse-lex with `X_last` the cheapest variable
/// and the rest in reverse index order.
fn weighted_revlex_last(w: &[u64], last: usize, a: &[u32], b: &[u32]) -> Ordering {
    let wd = |m: &[u32]| -> u64 { m.iter().zip(w).map(|(&c, &x)| c as u64 * x).sum() };
    wd(a).cmp(&wd(b))
        .then_with(|| b[last].cmp(&a[last]))
        .then_with(|| {
            (0..a.len())
                .rev()
                .filter(|&j| j != last)
                .map(|j| b[j].cmp(&a[j]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn normal_form(rules: &[Binomial], mut m: Vec<u32>) -> Vec<u32> {
    'outer: loop {
        for r in rules {
            if divides(&r.lead, &m) {
                for ((x, l), t) in m.iter_mut().zip(&r.lead).zip(&r.trail) {
                    *x = *x - l + t;
                }
                continue 'outer;
            }
        }
        return m;
    }
}

/// Bit `j % 64` is set when coordinate `j` is positive; a divisor's mask
/// is a subset of the multiple's.
fn support_mask(m: &[u32]) -> u64 {
    m.iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(0, |acc, (j, _)| acc | 1 << (j % 64))
}

#[derive(Default)]
struct Rules {
    list: Vec<Binomial>,
    masks: Vec<u64>,
}

impl Rules {
    fn push(&mut self, b: Binomial) {
        self.masks.push(support_mask(&b.lead));
        self.list.push(b);
    }

    fn reduce(&self, mut m: Vec<u32>) -> Vec<u32> {
        let mut mask = support_mask(&m);
        'outer: loop {
            for (r, &rm) in self.list.iter().zip(&self.masks) {
                if rm & !mask == 0 && divides(&r.lead, &m) {
                    for ((x, l), t) in m.iter_mut().zip(&r.lead).zip(&r.trail) {
                        *x = *x - l + t;
                    }
                    mask = support_mask(&m);
                    continue 'outer;
                }
            }
            return m;
        }
    }
}

/// Reduced Gröbner basis of a pure difference binomial ideal.
///
/// Pairs are taken smallest lcm first. An element whose lead becomes
/// divisible by a newer lead is retired and its reduction re-inserted, so
/// the live set stays interreduced on leads.
fn groebner(gens: Vec<Binomial>, ord: &MonomialOrder, weights: &[u64]) -> Vec<Binomial> {
    let mut basis: Vec<Binomial> = Vec::new();
    let mut masks: Vec<u64> = Vec::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut pairs: BinaryHeap<Reverse<(u64, usize, usize)>> = BinaryHeap::new();
    // queued[j][i] for i < j: the pair is still waiting
    let mut queued: Vec<Vec<bool>> = Vec::new();
    let mut pending: Vec<Binomial> = gens;
    let mut rules = Rules::default();

    loop {
        while let Some(g) = pending.pop() {
            let u = rules.reduce(g.lead);
            let v = rules.reduce(g.trail);
            let Some(h) = Binomial::oriented(u, v, ord) else { continue };
            let hm = support_mask(&h.lead);
            let k = basis.len();
            let mut retired = false;
            for j in 0..k {
                if alive[j] && hm & !masks[j] == 0 && divides(&h.lead, &basis[j].lead) {
                    alive[j] = false;
                    retired = true;
                    pending.push(basis[j].clone());
                }
            }
            let mut row = vec![false; k];
            for j in 0..k {
                if alive[j] {
                    let d: u64 = basis[j]
                        .lead
                        .iter()
                        .zip(&h.lead)
                        .zip(weights)
                        .map(|((x, y), &w)| *x.max(y) as u64 * w)
                        .sum();
                    pairs.push(Reverse((d, j, k)));
                    row[j] = true;
                }
            }
            queued.push(row);
            masks.push(hm);
            basis.push(h.clone());
            alive.push(true);
            if retired {
                rules = Rules::default();
                for (g, _) in basis.iter().zip(&alive).filter(|(_, &a)| a) {
                    rules.push(g.clone());
                }
            } else {
                rules.push(h);
            }
        }
        // lowest degree first
        let Some(Reverse((_, i, j))) = pairs.pop() else { break };
        queued[j][i] = false;
        if !(alive[i] && alive[j]) {
            continue;
        }
        let (a, b) = (&basis[i], &basis[j]);
        if a.lead.iter().zip(&b.lead).all(|(x, y)| *x == 0 || *y == 0) {
            continue;
        }
        let lcm: Vec<u32> = a.lead.iter().zip(&b.lead).map(|(x, y)| *x.max(y)).collect();
        // chain criterion: a third lead divides the lcm and both of its
        // pairs with i and j are already done
        let lm = support_mask(&lcm);
        let waiting = |p: usize, q: usize| queued[p.max(q)][p.min(q)];
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && alive[k]
                && masks[k] & !lm == 0
                && divides(&basis[k].lead, &lcm)
                && !waiting(i, k)
                && !waiting(j, k)
        });
        if chained {
            continue;
        }
        let shift = |g: &Binomial| -> Vec<u32> {
            lcm.iter()
                .zip(&g.lead)
                .zip(&g.trail)
                .map(|((l, d), t)| l - d + t)
                .collect()
        };
        let u = rules.reduce(shift(a));
        let v = rules.reduce(shift(b));
        if u != v {
            pending.push(Binomial { lead: u, trail: v });
        }
    }

    // reduced: normalise every trail against the live leads
    let mut out: Vec<Binomial> = rules
        .list
        .iter()
        .map(|g| Binomial {
            lead: g.lead.clone(),
            trail: rules.reduce(g.trail.clone()),
        })
        .collect();
    out.sort_by(|x, y| ord(&x.lead, &y.lead));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_polynomial;

    fn e(v: &[u32]) -> Exponent {
        Exponent::new(v.to_vec())
    }

    fn rel(plus: &[u32], minus: &[u32]) -> BinomialRelation {
        BinomialRelation {
            plus: plus.to_vec(),
            minus: minus.to_vec(),
        }
    }

    #[test]
    fn kernel_examples() {
        let k = toric_kernel(&[e(&[1, 0]), e(&[1, 1]), e(&[1, 2])]).unwrap();
        assert_eq!(k, vec![rel(&[1, 0, 1], &[0, 2, 0])]);
        assert_eq!(k[0].to_string(), "X1*X3 - X2^2");
        assert!(toric_kernel(&[e(&[1, 0]), e(&[0, 1])]).unwrap().is_empty());
        let k = toric_kernel(&[e(&[4]), e(&[6])]).unwrap();
        assert_eq!(k, vec![rel(&[3, 0], &[0, 2])]);
        assert_eq!(k[0].to_string(), "X1^3 - X2^2");
    }

    #[test]
    fn kernel_needs_saturation() {
        // the lattice basis alone misses relations here
        let thetas = [e(&[2, 0]), e(&[0, 3]), e(&[1, 1])];
        let k = toric_kernel(&thetas).unwrap();
        assert!(k.iter().all(|r| r.holds_for(&thetas)));
        let target = rel(&[3, 2, 0], &[0, 0, 6]);
        assert_eq!(
            binomial_normal_form(&k, &target.plus),
            binomial_normal_form(&k, &target.minus)
        );
        let thetas = [e(&[3]), e(&[5]), e(&[7])];
        let k = toric_kernel(&thetas).unwrap();
        // reduced grlex basis, cross-checked against a CAS
        assert_eq!(k.len(), 6);
        assert_eq!(k[0].to_string(), "X1*X3 - X2^2");
        assert_eq!(k[5].to_string(), "X2^7 - X3^5");
        assert!(k.iter().all(|r| r.holds_for(&thetas)));
    }

    #[test]
    fn repeated_exponents_give_linear_relations() {
        let k = toric_kernel(&[e(&[1, 1]), e(&[1, 1])]).unwrap();
        assert_eq!(k, vec![rel(&[1, 0], &[0, 1])]);
    }

    #[test]
    fn evaluation_examples() {
        let two = VarNames::default_for(2);
        let gens: Vec<Polynomial> = ["x + y", "x*y", "x*y^2"]
            .iter()
            .map(|s| parse_polynomial(s, &two).unwrap())
            .collect();
        assert_eq!(
            evaluate_relation(&rel(&[1, 0, 1], &[0, 2, 0]), &gens).unwrap(),
            parse_polynomial("x*y^3", &two).unwrap()
        );
        let one = VarNames::default_for(1);
        let curve: Vec<Polynomial> = ["t^4", "t^6 + t^7"]
            .iter()
            .map(|s| parse_polynomial(s, &one).unwrap())
            .collect();
        assert_eq!(
            evaluate_relation(&rel(&[3, 0], &[0, 2]), &curve).unwrap(),
            parse_polynomial("-2*t^13 - t^14", &one).unwrap()
        );
        let monos: Vec<Polynomial> = ["x^2", "y^3", "x*y"]
            .iter()
            .map(|s| parse_polynomial(s, &two).unwrap())
            .collect();
        assert!(evaluate_relation(&rel(&[3, 2, 0], &[0, 0, 6]), &monos)
            .unwrap()
            .is_zero());
        assert!(matches!(
            evaluate_relation(&rel(&[1, 0], &[0, 1]), &monos),
            Err(Error::ArityMismatch { .. })
        ));
    }
}
