//! Finitely generated subsemigroups of `N^n`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::division::Factorizer;
use crate::error::{check_dim, Result};
use crate::poly::Exponent;

/// The semigroup `N g_1 + ... + N g_k`; zero generators are dropped and
/// the rest stored sorted without repeats.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineSemigroup {
    n: usize,
    gens: Vec<Exponent>,
}

/// Limits for [`AffineSemigroup::gap_report_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapLimits {
    /// Largest pure axis power searched for on each axis.
    pub axis_bound: u32,
    /// Largest number of residue states or box points examined.
    pub state_budget: u64,
}

impl Default for GapLimits {
    fn default() -> Self {
        GapLimits {
            axis_bound: 64,
            state_budget: 2_000_000,
        }
    }
}

/// Per-axis data behind a cofiniteness verdict.
///
/// For axis `i` with modulus `m = modulus`, every class of points with the
/// other coordinates fixed below their moduli and `x_i` fixed mod `m`
/// contains a member; the largest least member along `x_i` is
/// `largest_minimum`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxisCertificate {
    pub axis: usize,
    pub modulus: u32,
    pub states: u64,
    pub largest_minimum: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub cofinite: bool,
    /// Every point of `N^n` outside the semigroup; meaningful only when
    /// `cofinite`.
    pub gaps: Vec<Exponent>,
    /// Exclusive box `[0, bound_1) x ... x [0, bound_n)` containing all gaps.
    pub bound: Vec<u32>,
    /// Smallest pure power `m_i e_i` of the generators on each axis.
    pub axis_powers: Vec<Option<u32>>,
    /// True when a search limit, not the mathematics, decided the answer.
    pub limited: bool,
    pub note: Option<String>,
    pub certificate: Vec<AxisCertificate>,
    /// For `n = 1`: least member in each residue class mod the smallest
    /// generator.
    pub apery: Option<Vec<u64>>,
}

impl GapReport {
    pub fn gap_count(&self) -> usize {
        self.gaps.len()
    }
}

impl AffineSemigroup {
    pub fn new(n: usize, gens: Vec<Exponent>) -> Result<Self> {
        for g in &gens {
            check_dim(n, g.dim())?;
        }
        let mut gens: Vec<Exponent> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        gens.sort();
        gens.dedup();
        Ok(AffineSemigroup { n, gens })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.gens
    }

    pub fn member(&self, beta: &Exponent) -> Result<bool> {
        check_dim(self.n, beta.dim())?;
        Ok(self.factorizer().contains(beta))
    }

    fn factorizer(&self) -> Factorizer {
        Factorizer::new(self.gens.clone(), self.n)
    }

    /// Every generator of `other` lies in `self`.
    pub fn contains(&self, other: &AffineSemigroup) -> Result<bool> {
        check_dim(self.n, other.n)?;
        let mut f = self.factorizer();
        Ok(other.gens.iter().all(|g| f.contains(g)))
    }

    pub fn equals(&self, other: &AffineSemigroup) -> Result<bool> {
        Ok(self.contains(other)? && other.contains(self)?)
    }

    /// The generators not expressible through the others. This is the
    /// unique minimal generating set, since `N^n` has no units.
    pub fn minimal_generators(&self) -> Vec<Exponent> {
        let mut kept: Vec<Exponent> = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            let others: Vec<Exponent> = self
                .gens
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, h)| h.clone())
                .collect();
            if !Factorizer::new(others, self.n).contains(g) {
                kept.push(g.clone());
            }
        }
        kept
    }

    pub fn gap_report(&self) -> GapReport {
        self.gap_report_with(GapLimits::default())
    }

    /// Decides cofiniteness and lists the gaps.
    ///
    /// With `m_i` the smallest axis power on axis `i`, the semigroup is
    /// cofinite iff for each `i` every class (other coordinates below their
    /// moduli, `x_i mod m_i`) has a member whose other coordinates equal the
    /// class representative exactly. Least members are found by a shortest
    /// path search; beyond the largest of them every point is a member, so
    /// the gaps sit in a finite box.
    pub fn gap_report_with(&self, limits: GapLimits) -> GapReport {
        let n = self.n;
        let axis_powers: Vec<Option<u32>> = (0..n)
            .map(|i| {
                self.gens
                    .iter()
                    .filter(|g| {
                        g.coords()
                            .iter()
                            .enumerate()
                            .all(|(j, &c)| (j == i) == (c > 0))
                    })
                    .map(|g| g.coords()[i])
                    .min()
            })
            .collect();
        let mut report = GapReport {
            cofinite: false,
            gaps: Vec::new(),
            bound: Vec::new(),
            axis_powers: axis_powers.clone(),
            limited: false,
            note: None,
            certificate: Vec::new(),
            apery: None,
        };
        let mut moduli = Vec::with_capacity(n);
        for (i, m) in axis_powers.iter().enumerate() {
            match m {
                None => {
                    report.note = Some(format!("no pure power on axis {}", i + 1));
                    return report;
                }
                Some(m) if *m > limits.axis_bound => {
                    report.limited = true;
                    report.note = Some(format!(
                        "bound-limited: smallest power on axis {} is {m}, above the search bound {}",
                        i + 1,
                        limits.axis_bound
                    ));
                    return report;
                }
                Some(m) => moduli.push(*m as u64),
            }
        }
        let states: u64 = moduli.iter().product();
        if states > limits.state_budget {
            report.limited = true;
            report.note = Some(format!(
                "bound-limited: {states} residue states exceed the budget {}",
                limits.state_budget
            ));
            return report;
        }

        let mut bound = Vec::with_capacity(n);
        for i in 0..n {
            let dist = self.least_members(i, &moduli);
            if dist.iter().any(Option::is_none) {
                report.note = Some(format!(
                    "a residue class along axis {} has no member",
                    i + 1
                ));
                return report;
            }
            let largest = dist.iter().flatten().copied().max().unwrap_or(0);
            if n == 1 {
                report.apery = Some(dist.iter().flatten().copied().collect());
            }
            report.certificate.push(AxisCertificate {
                axis: i,
                modulus: moduli[i] as u32,
                states,
                largest_minimum: largest,
            });
            bound.push((largest + 1).saturating_sub(moduli[i]));
        }

        let points: u64 = bound.iter().product();
        if points > limits.state_budget {
            report.limited = true;
            report.note = Some(format!(
                "bound-limited: gap box of {points} points exceeds the budget {}",
                limits.state_budget
            ));
            return report;
        }
        report.cofinite = true;
        report.bound = bound.iter().map(|&b| b as u32).collect();
        report.gaps = self.non_members_in_box(&report.bound);
        report
    }

    /// Shortest-path search for axis `i`. States are (other coordinates
    /// below their moduli, `x_i mod m_i`), indexed in mixed radix with the
    /// residue last; the distance is the least `x_i` of a member in the
    /// class.
    fn least_members(&self, i: usize, moduli: &[u64]) -> Vec<Option<u64>> {
        let n = self.n;
        let total: u64 = moduli.iter().product();
        let index = |z: &[u64], r: u64| -> usize {
            let mut idx = 0u64;
            for j in (0..n).filter(|&j| j != i) {
                idx = idx * moduli[j] + z[j];
            }
            (idx * moduli[i] + r) as usize
        };
        let mut dist: Vec<Option<u64>> = vec![None; total as usize];
        let mut coords_of: Vec<Vec<u64>> = vec![Vec::new(); total as usize];
        let mut heap = BinaryHeap::new();
        let start = vec![0u64; n];
        let s0 = index(&start, 0);
        dist[s0] = Some(0);
        coords_of[s0] = start;
        heap.push(Reverse((0u64, s0)));
        while let Some(Reverse((d, s))) = heap.pop() {
            if dist[s] != Some(d) {
                continue;
            }
            let z = coords_of[s].clone();
            'gens: for g in &self.gens {
                let mut next = z.clone();
                for j in (0..n).filter(|&j| j != i) {
                    next[j] += g.coords()[j] as u64;
                    if next[j] >= moduli[j] {
                        continue 'gens;
                    }
                }
                let gi = g.coords()[i] as u64;
                let r = (d + gi) % moduli[i];
                let t = index(&next, r);
                let nd = d + gi;
                if dist[t].is_none_or(|old| nd < old) {
                    dist[t] = Some(nd);
                    coords_of[t] = next;
                    heap.push(Reverse((nd, t)));
                }
            }
        }
        dist
    }

    /// Non-members in the box `[0, bound)`, in lexicographic order.
    fn non_members_in_box(&self, bound: &[u32]) -> Vec<Exponent> {
        let n = self.n;
        let total: usize = bound.iter().map(|&b| b as usize).product();
        if total == 0 {
            return Vec::new();
        }
        // strides for lexicographic mixed radix, last coordinate fastest
        let mut stride = vec![1usize; n];
        for j in (0..n.saturating_sub(1)).rev() {
            stride[j] = stride[j + 1] * bound[j + 1] as usize;
        }
        let offsets: Vec<(Vec<u32>, usize)> = self
            .gens
            .iter()
            .filter(|g| g.coords().iter().zip(bound).all(|(c, b)| c < b))
            .map(|g| {
                let off = g
                    .coords()
                    .iter()
                    .zip(&stride)
                    .map(|(&c, s)| c as usize * s)
                    .sum();
                (g.coords().to_vec(), off)
            })
            .collect();
        let mut member = vec![false; total];
        let mut point = vec![0u32; n];
        let mut gaps = Vec::new();
        for idx in 0..total {
            let here = idx == 0
                || offsets.iter().any(|(g, off)| {
                    g.iter().zip(&point).all(|(a, b)| a <= b) && member[idx - off]
                });
            member[idx] = here;
            if !here {
                gaps.push(Exponent::new(point.clone()));
            }
            for j in (0..n).rev() {
                point[j] += 1;
                if point[j] < bound[j] {
                    break;
                }
                point[j] = 0;
            }
        }
        gaps
    }
}
