//! The standard fan: cones of weight space on which the initial algebra is
//! constant, their traversal, and the universal canonical basis.

mod cone;

use num_traits::{One, Signed, Zero};

pub use cone::Cone;

use crate::error::{check_dim, Error, Result};
use crate::order::{TieBreakOrder, WeightedOrder};
use crate::poly::{Polynomial, Scalar, WeightVector};
use crate::sagbi::{reduced_basis, AlgebraPresentation, BasisStatus, CanonicalBasis};
use crate::semigroup::AffineSemigroup;

/// A cell of the fan, labelled by the reduced basis at its points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanCell {
    pub cone: Cone,
    /// Reduced basis; its order records the weight it was computed at,
    /// which lies in `cone`.
    pub basis: CanonicalBasis,
    pub semigroup: AffineSemigroup,
    pub initial_forms: Vec<Polynomial>,
    pub multihomogeneous: bool,
}

/// A facet crossing between two full-dimensional cells, witnessed at
/// `point`. Indices refer to [`StandardFan::cells`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub cells: (usize, usize),
    /// Primitive normal, positive on the side of `cells.0`.
    pub normal: Vec<i64>,
    pub point: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardFan {
    pub cells: Vec<FanCell>,
    pub walls: Vec<Wall>,
    pub algebra: AlgebraPresentation,
    pub tie: TieBreakOrder,
    pub cap: Scalar,
    /// Every cell's basis is exact.
    pub complete_flag: bool,
}

impl StandardFan {
    /// Index of the cell whose relatively open cone contains `a`.
    pub fn locate(&self, a: &WeightVector) -> Option<usize> {
        self.cells.iter().position(|c| c.cone.contains(a))
    }

    /// Recomputes the cell at `a` from scratch with the cap policy used by
    /// [`traverse`].
    pub fn cell_at(&self, a: &WeightVector) -> Result<FanCell> {
        check_dim(self.algebra.nvars(), a.dim())?;
        CellFactory {
            algebra: &self.algebra,
            tie: &self.tie,
            cap: &self.cap,
        }
        .cell_at(a)
    }

    /// Indices of the cells whose closure contains `a`.
    pub fn locate_closure(&self, a: &WeightVector) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| self.cells[i].cone.closure_contains(a.coords()))
            .collect()
    }
}

/// `{b : in(g, b) = in(g, a) for every basis element g}`.
pub fn equivalence_cone(basis: &CanonicalBasis, a: &WeightVector) -> Result<Cone> {
    if !basis.is_exact() {
        return Err(Error::BasisNotExact);
    }
    if !basis.reduced {
        return Err(Error::BasisNotReduced);
    }
    cone_of(&basis.elements, a)
}

fn cone_of(elements: &[Polynomial], a: &WeightVector) -> Result<Cone> {
    let n = a.dim();
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for g in elements {
        let init = g.initial_form(a)?;
        let support = init.support();
        let base = &support[0];
        for alpha in &support[1..] {
            eqs.push(alpha.difference(base));
        }
        for (beta, _) in g.terms() {
            if init.coefficient(beta).is_zero() {
                ineqs.push(beta.difference(base));
            }
        }
    }
    Cone::from_constraints(n, &eqs, &ineqs).ok_or_else(|| {
        Error::InconsistentFan(format!("equivalence cone at ({a}) has no positive point"))
    })
}

pub fn is_multihomogeneous(cell: &FanCell) -> bool {
    cell.initial_forms.iter().all(Polynomial::is_monomial)
}

/// Union of the reduced bases of all cells, without repeats.
pub fn universal_basis(fan: &StandardFan) -> Result<Vec<Polynomial>> {
    if !fan.complete_flag {
        return Err(Error::IncompleteFan);
    }
    let mut out: Vec<Polynomial> = Vec::new();
    for cell in &fan.cells {
        for g in &cell.basis.elements {
            if !out.contains(g) {
                out.push(g.clone());
            }
        }
    }
    Ok(out)
}

/// The distinct initial forms of `f` over `U^n`, each with its cone.
pub fn single_poly_fan(f: &Polynomial) -> Result<Vec<(Cone, Polynomial)>> {
    let n = f.nvars();
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    let minimal = f.minimal_support_elements()?;
    let mut found: Vec<(Cone, Polynomial)> = Vec::new();
    for k in 1..=n.min(minimal.len()) {
        for subset in index_subsets(minimal.len(), k) {
            let base = &minimal[subset[0]];
            let eqs: Vec<Vec<i64>> = subset[1..]
                .iter()
                .map(|&i| minimal[i].difference(base))
                .collect();
            // closed normal cone: the subset attains the minimum, ties allowed
            let closed: Vec<Vec<i64>> = minimal.iter().map(|b| b.difference(base)).collect();
            let Some(p) = closed_point(n, &eqs, &closed) else {
                continue;
            };
            let init = f.initial_form(&p)?;
            if found.iter().any(|(_, g)| *g == init) {
                continue;
            }
            found.push((cone_of(std::slice::from_ref(f), &p)?, init));
        }
    }
    found.sort_by_key(|(c, _)| cone_sort_key(c));
    Ok(found)
}

/// A strictly positive point of the relative interior of
/// `{b >= 0 : eqs, <b, w> >= 0 for w in closed}`, if that set meets `U^n`.
fn closed_point(n: usize, eqs: &[Vec<i64>], closed: &[Vec<i64>]) -> Option<WeightVector> {
    let rays = cone::closed_rays(n, eqs, closed);
    let mut p = vec![0i64; n];
    for r in &rays {
        for (x, y) in p.iter_mut().zip(r) {
            *x += y;
        }
    }
    if p.iter().all(|&x| x > 0) {
        WeightVector::from_integers(&p).ok()
    } else {
        None
    }
}

fn index_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..m {
        for rest in index_subsets(m, k - 1) {
            if rest.first().is_none_or(|&r| r > first) {
                let mut v = vec![first];
                v.extend(rest);
                out.push(v);
            }
        }
    }
    out
}

/// Interior point scaled to first coordinate 1; sorts `n = 2` cells by
/// increasing slope `b2 / b1`.
fn cone_sort_key(c: &Cone) -> Vec<Scalar> {
    let p = c.interior_point.coords();
    p.iter().map(|x| x / &p[0]).collect()
}

/// Computes cells at given weights, with the cap applied to the weight
/// rescaled so its smallest coordinate is 1.
struct CellFactory<'a> {
    algebra: &'a AlgebraPresentation,
    tie: &'a TieBreakOrder,
    cap: &'a Scalar,
}

impl CellFactory<'_> {
    fn cell_at(&self, a: &WeightVector) -> Result<FanCell> {
        let a = a.normalized();
        let ord = WeightedOrder::new(a.clone(), self.tie.clone())?;
        let floor = self.algebra.max_valuation(&ord)?;
        let cap = if self.cap < &floor { floor } else { self.cap.clone() };
        let basis = reduced_basis(self.algebra, &ord, &cap)?;
        let cone = cone_of(&basis.elements, &a)?;
        let initial_forms = basis.initial_forms();
        let semigroup = basis.semigroup();
        let mut cell = FanCell {
            cone,
            basis,
            semigroup,
            initial_forms,
            multihomogeneous: false,
        };
        cell.multihomogeneous = is_multihomogeneous(&cell);
        Ok(cell)
    }
}

const MAX_CELLS: usize = 4096;

/// Enumerates the cells of the fan of `a` for `n <= 3` variables.
///
/// For `n = 1` there is a single cell. For `n = 2` the slope `b2 / b1` is
/// swept: each uncovered point or gap is sampled until the open cells and
/// the walls between them cover `(0, inf)`. For `n = 3` full-dimensional
/// cells are found by crossing facets; walls are recorded as [`Wall`]s
/// rather than as cells.
pub fn traverse(a: &AlgebraPresentation, tie: &TieBreakOrder, cap: &Scalar) -> Result<StandardFan> {
    let n = a.nvars();
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if tie.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: tie.dim(),
        });
    }
    let factory = CellFactory {
        algebra: a,
        tie,
        cap,
    };
    let (mut cells, raw_walls) = match n {
        1 => (vec![factory.cell_at(&WeightVector::from_integers(&[1])?)?], Vec::new()),
        2 => sweep_plane(&factory)?,
        _ => flip_facets(&factory)?,
    };
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&i, &j| cone_sort_key(&cells[i].cone).cmp(&cone_sort_key(&cells[j].cone)));
    let mut position = vec![0; cells.len()];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let mut walls: Vec<Wall> = Vec::new();
    for w in raw_walls {
        let (i, j) = (position[w.cells.0], position[w.cells.1]);
        let wall = if i < j {
            Wall { cells: (i, j), ..w }
        } else {
            Wall {
                cells: (j, i),
                normal: w.normal.iter().map(|x| -x).collect(),
                point: w.point,
            }
        };
        if !walls.iter().any(|o| o.cells == wall.cells && o.normal == wall.normal) {
            walls.push(wall);
        }
    }
    walls.sort_by(|x, y| x.cells.cmp(&y.cells).then_with(|| x.normal.cmp(&y.normal)));
    let mut sorted = Vec::with_capacity(cells.len());
    for &i in &order {
        sorted.push(std::mem::replace(&mut cells[i], placeholder()));
    }
    let complete_flag = sorted.iter().all(|c| c.basis.status == BasisStatus::Exact);
    Ok(StandardFan {
        cells: sorted,
        walls,
        algebra: a.clone(),
        tie: tie.clone(),
        cap: cap.clone(),
        complete_flag,
    })
}

fn placeholder() -> FanCell {
    let a = WeightVector::from_integers(&[1]).expect("positive");
    FanCell {
        cone: Cone::full(1),
        basis: CanonicalBasis {
            elements: Vec::new(),
            order: WeightedOrder::with_default_tie(a),
            status: BasisStatus::Exact,
            cap: Scalar::zero(),
            minimal: true,
            reduced: true,
            adjoined: Vec::new(),
        },
        semigroup: AffineSemigroup::new(1, Vec::new()).expect("empty"),
        initial_forms: Vec::new(),
        multihomogeneous: true,
    }
}

/// A cell of the `n = 2` sweep in slope coordinates `lambda = b2 / b1`.
#[derive(Clone, Debug)]
enum Piece {
    /// `lo < lambda < hi`; `hi = None` is unbounded.
    Open(Scalar, Option<Scalar>),
    Point(Scalar),
}

impl Piece {
    fn of(cone: &Cone) -> Piece {
        if let Some(v) = cone.equalities.first() {
            return Piece::Point(Scalar::new((-v[0]).into(), v[1].into()));
        }
        let mut lo = Scalar::zero();
        let mut hi: Option<Scalar> = None;
        for w in &cone.inequalities {
            // w1 + lambda w2 > 0
            if w[1] == 0 {
                continue;
            }
            let t = Scalar::new((-w[0]).into(), w[1].into());
            if w[1] > 0 {
                if t > lo {
                    lo = t;
                }
            } else if hi.as_ref().is_none_or(|h| &t < h) {
                hi = Some(t);
            }
        }
        Piece::Open(lo, hi)
    }

    fn start(&self) -> (&Scalar, u8) {
        match self {
            Piece::Point(p) => (p, 0),
            Piece::Open(lo, _) => (lo, 1),
        }
    }

    fn overlaps(&self, other: &Piece) -> bool {
        let inside = |x: &Scalar, lo: &Scalar, hi: &Option<Scalar>| {
            x > lo && hi.as_ref().is_none_or(|h| x < h)
        };
        match (self, other) {
            (Piece::Point(p), Piece::Point(q)) => p == q,
            (Piece::Point(p), Piece::Open(lo, hi)) | (Piece::Open(lo, hi), Piece::Point(p)) => {
                inside(p, lo, hi)
            }
            (Piece::Open(l1, h1), Piece::Open(l2, h2)) => {
                let lo = if l1 > l2 { l1 } else { l2 };
                match (h1, h2) {
                    (None, None) => true,
                    (Some(h), None) | (None, Some(h)) => lo < h,
                    (Some(a), Some(b)) => lo < if a < b { a } else { b },
                }
            }
        }
    }
}

/// First uncovered slope, or `None` when the pieces cover `(0, inf)`.
fn next_sample(pieces: &[Piece]) -> Option<Scalar> {
    let mut sorted: Vec<&Piece> = pieces.iter().collect();
    sorted.sort_by(|a, b| a.start().cmp(&b.start()));
    let two = Scalar::from_integer(2.into());
    let mut cursor = Scalar::zero();
    let mut covered = true;
    let gap = |c: &Scalar, covered: bool, next: Option<&Scalar>| -> Scalar {
        if !covered {
            return c.clone();
        }
        match next {
            Some(p) => (c + p) / &two,
            None if c.is_zero() => Scalar::one(),
            None => c * &two,
        }
    };
    for piece in sorted {
        match piece {
            Piece::Point(p) => {
                if p > &cursor {
                    return Some(gap(&cursor, covered, Some(p)));
                }
                cursor = p.clone();
                covered = true;
            }
            Piece::Open(lo, hi) => {
                if lo > &cursor {
                    return Some(gap(&cursor, covered, Some(lo)));
                }
                if !covered && lo == &cursor {
                    return Some(cursor);
                }
                cursor = hi.as_ref()?.clone();
                covered = false;
            }
        }
    }
    Some(gap(&cursor, covered, None))
}

fn sweep_plane(factory: &CellFactory) -> Result<(Vec<FanCell>, Vec<Wall>)> {
    let mut cells: Vec<FanCell> = Vec::new();
    let mut pieces: Vec<Piece> = Vec::new();
    while let Some(lambda) = next_sample(&pieces) {
        if cells.len() >= MAX_CELLS {
            return Err(Error::InconsistentFan(format!(
                "more than {MAX_CELLS} cells; the cap may be too small for a finite fan"
            )));
        }
        let a = WeightVector::new(vec![Scalar::one(), lambda.clone()])?;
        let cell = factory.cell_at(&a)?;
        let piece = Piece::of(&cell.cone);
        if let Some(j) = pieces.iter().position(|p| p.overlaps(&piece)) {
            return Err(Error::InconsistentFan(format!(
                "cell computed at slope {lambda} overlaps cell {j}"
            )));
        }
        pieces.push(piece);
        cells.push(cell);
    }
    // walls: a point cell between two open cells
    let mut walls = Vec::new();
    for (k, p) in pieces.iter().enumerate() {
        let Piece::Point(x) = p else { continue };
        let left = pieces
            .iter()
            .position(|q| matches!(q, Piece::Open(_, Some(h)) if h == x));
        let right = pieces
            .iter()
            .position(|q| matches!(q, Piece::Open(l, _) if l == x));
        if let (Some(l), Some(r)) = (left, right) {
            let v = &cells[k].cone.equalities[0];
            // <b, normal> > 0 on the left side, where b2 / b1 is smaller
            let normal = if v[1] > 0 { v.clone() } else { v.iter().map(|c| -c).collect() };
            walls.push(Wall {
                cells: (l, r),
                normal,
                point: vec![x.denom().clone(), x.numer().clone()]
                    .into_iter()
                    .map(|c| i64::try_from(c).expect("wall coordinate fits in i64"))
                    .collect(),
            });
        }
    }
    Ok((cells, walls))
}

fn flip_facets(factory: &CellFactory) -> Result<(Vec<FanCell>, Vec<Wall>)> {
    let starts: [[i64; 3]; 6] = [
        [1, 1, 1],
        [7, 11, 13],
        [13, 7, 11],
        [11, 13, 7],
        [101, 103, 107],
        [3, 17, 29],
    ];
    let mut cells: Vec<FanCell> = Vec::new();
    for s in starts {
        let cell = factory.cell_at(&WeightVector::from_integers(&s)?)?;
        if cell.cone.is_full_dimensional() {
            cells.push(cell);
            break;
        }
    }
    if cells.is_empty() {
        return Err(Error::InconsistentFan(
            "no full-dimensional cell found at the start weights".into(),
        ));
    }
    let mut walls = Vec::new();
    let mut next = 0;
    while next < cells.len() {
        let facets = cells[next].cone.inequalities.clone();
        for w in &facets {
            let rays = cells[next].cone.facet_rays(w);
            let mut centre = vec![0i64; 3];
            for r in &rays {
                for (x, y) in centre.iter_mut().zip(r) {
                    *x += y;
                }
            }
            let mut points = vec![centre.clone()];
            for r in &rays {
                points.push(centre.iter().zip(r).map(|(x, y)| x + y).collect());
            }
            for p in points {
                if p.iter().any(|&x| x <= 0) {
                    continue;
                }
                if let Some(j) = cross_facet(factory, &mut cells, &p, w)? {
                    walls.push(Wall {
                        cells: (next, j),
                        normal: w.clone(),
                        point: p,
                    });
                }
                if cells.len() > MAX_CELLS {
                    return Err(Error::InconsistentFan(format!(
                        "more than {MAX_CELLS} cells; the cap may be too small for a finite fan"
                    )));
                }
            }
        }
        next += 1;
    }
    Ok((cells, walls))
}

/// Finds the full-dimensional cell on the far side of the facet `w` at
/// `p`, adding newly met cells to `cells`. Returns its index.
fn cross_facet(
    factory: &CellFactory,
    cells: &mut Vec<FanCell>,
    p: &[i64],
    w: &[i64],
) -> Result<Option<usize>> {
    let p_q: Vec<Scalar> = p.iter().map(|&x| Scalar::from_integer(x.into())).collect();
    let mut eps = Scalar::one();
    for (x, &wi) in p.iter().zip(w) {
        if wi > 0 {
            let bound = Scalar::new((*x).into(), (2 * wi).into());
            if bound < eps {
                eps = bound;
            }
        }
    }
    for _ in 0..48 {
        let q: Vec<Scalar> = p_q
            .iter()
            .zip(w)
            .map(|(x, &wi)| x - &eps * Scalar::from_integer(wi.into()))
            .collect();
        if q.iter().any(|x| !x.is_positive()) {
            eps /= Scalar::from_integer(2.into());
            continue;
        }
        let qw = WeightVector::new(q)?;
        let known = cells.iter().position(|c| c.cone.contains(&qw));
        let idx = match known {
            Some(j) => Some(j),
            None => {
                let cell = factory.cell_at(&qw)?;
                if cell.cone.is_full_dimensional() {
                    if let Some(j) = cells.iter().position(|c| c.cone == cell.cone) {
                        Some(j)
                    } else {
                        cells.push(cell);
                        Some(cells.len() - 1)
                    }
                } else {
                    None
                }
            }
        };
        if let Some(j) = idx {
            if cells[j].cone.closure_contains(&p_q) {
                return Ok(Some(j));
            }
        }
        eps /= Scalar::from_integer(2.into());
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_polynomial, VarNames};

    fn p2(s: &str) -> Polynomial {
        parse_polynomial(s, &VarNames::default_for(2)).unwrap()
    }

    #[test]
    fn single_polynomial_faces() {
        let faces = single_poly_fan(&p2("x + y")).unwrap();
        let forms: Vec<Polynomial> = faces.iter().map(|(_, f)| f.clone()).collect();
        assert_eq!(forms, vec![p2("y"), p2("x + y"), p2("x")]);
        assert_eq!(faces[1].0.equalities, vec![vec![1, -1]]);
        assert_eq!(faces[2].0.inequalities, vec![vec![-1, 1]]);

        let faces = single_poly_fan(&p2("3*x^2*y")).unwrap();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].0, Cone::full(2));

        let t = parse_polynomial("t + t^2", &VarNames::default_for(1)).unwrap();
        let faces = single_poly_fan(&t).unwrap();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].1, parse_polynomial("t", &VarNames::default_for(1)).unwrap());
    }

    #[test]
    fn collinear_support_face() {
        let f = p2("x^2 + x*y + y^2 + x^5");
        let faces = single_poly_fan(&f).unwrap();
        let forms: Vec<Polynomial> = faces.iter().map(|(_, f)| f.clone()).collect();
        assert_eq!(forms, vec![p2("y^2"), p2("x^2 + x*y + y^2"), p2("x^2")]);
    }

    #[test]
    fn next_sample_walks_gaps() {
        let q = |a: i64, b: i64| Scalar::new(a.into(), b.into());
        assert_eq!(next_sample(&[]), Some(q(1, 1)));
        let pieces = vec![Piece::Open(q(0, 1), Some(q(1, 1)))];
        assert_eq!(next_sample(&pieces), Some(q(1, 1)));
        let pieces = vec![
            Piece::Open(q(0, 1), Some(q(1, 1))),
            Piece::Point(q(1, 1)),
        ];
        assert_eq!(next_sample(&pieces), Some(q(2, 1)));
        let pieces = vec![
            Piece::Open(q(1, 2), Some(q(1, 1))),
            Piece::Point(q(1, 1)),
            Piece::Open(q(1, 1), None),
        ];
        assert_eq!(next_sample(&pieces), Some(q(1, 4)));
    }
}
