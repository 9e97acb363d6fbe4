//! Acceptance checks. Run with `cargo test -p canonfan-core --test acceptance`.
//!
//! Prints one PASS/FAIL line per criterion and exits nonzero if any fails.
//! Oracles below are brute force and share no code with the library
//! beyond polynomial arithmetic.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use canonfan_core::*;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn q(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

fn e(v: &[u32]) -> Exponent {
    Exponent::new(v.to_vec())
}

fn polys(n: usize, src: &[&str]) -> Vec<Polynomial> {
    let names = VarNames::default_for(n);
    src.iter()
        .map(|s| parse_polynomial(s, &names).expect("test input parses"))
        .collect()
}

fn algebra(n: usize, src: &[&str]) -> AlgebraPresentation {
    AlgebraPresentation::new(polys(n, src)).expect("valid presentation")
}

fn order(w: &[i64]) -> WeightedOrder {
    WeightedOrder::with_default_tie(WeightVector::from_integers(w).expect("positive weight"))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Semigroup membership by plain recursion over generator subtraction.
struct Oracle {
    gens: Vec<Vec<u32>>,
    memo: HashMap<Vec<u32>, bool>,
}

impl Oracle {
    fn new(gens: &[Exponent]) -> Oracle {
        Oracle {
            gens: gens
                .iter()
                .filter(|g| !g.is_zero())
                .map(|g| g.coords().to_vec())
                .collect(),
            memo: HashMap::new(),
        }
    }

    fn member(&mut self, beta: &[u32]) -> bool {
        if beta.iter().all(|&c| c == 0) {
            return true;
        }
        if let Some(&m) = self.memo.get(beta) {
            return m;
        }
        let gens = self.gens.clone();
        let m = gens.iter().any(|g| {
            g.iter().zip(beta).all(|(a, b)| a <= b) && {
                let rest: Vec<u32> = beta.iter().zip(g).map(|(b, a)| b - a).collect();
                self.member(&rest)
            }
        });
        self.memo.insert(beta.to_vec(), m);
        m
    }
}

fn criterion_1() -> Check {
    let a = algebra(2, &["x + y", "x*y", "x*y^2"]);
    let ord = order(&[1, 2]);
    let leads: Vec<Exponent> = a
        .generators()
        .iter()
        .map(|g| g.leading_exponent(&ord))
        .collect::<Result<_>>()
        .map_err(err)?;
    ensure!(
        leads == [e(&[1, 0]), e(&[1, 1]), e(&[1, 2])],
        "leading exponents {leads:?}"
    );
    let kernel = toric_kernel(&leads).map_err(err)?;
    let shown: Vec<String> = kernel.iter().map(|r| r.to_string()).collect();
    ensure!(shown == ["X1*X3 - X2^2"], "kernel {shown:?}");

    let s = evaluate_relation(&kernel[0], a.generators()).map_err(err)?;
    let r = subduct(&s, a.generators(), &ord, &q(10)).map_err(err)?;
    let xy3 = polys(2, &["x*y^3"]).remove(0);
    ensure!(
        r.remainder == xy3 && r.status == DivisionStatus::Exact,
        "first remainder {} ({})",
        r.remainder,
        r.status
    );

    for k in 2..=8u32 {
        let cap = q(2 * k as i64 + 3);
        let b = complete(&a, &ord, &cap).map_err(err)?;
        let expected: Vec<Polynomial> = (3..=k + 1)
            .map(|j| Polynomial::monomial(e(&[1, j]), q(1)))
            .collect();
        ensure!(
            b.adjoined == expected && b.status == BasisStatus::CapReached,
            "cap {cap}: adjoined {:?}, status {}",
            b.adjoined,
            b.status
        );
    }
    Ok("kernel X1*X3 - X2^2, remainder x*y^3, cap 2k+3 adjoins x*y^3..x*y^(k+1) for k = 2..8".into())
}

fn criterion_2() -> Check {
    let a = algebra(1, &["t^4", "t^6 + t^7"]);
    let ord = order(&[1]);
    let b = complete(&a, &ord, &q(30)).map_err(err)?;
    ensure!(b.status == BasisStatus::Exact, "status {}", b.status);
    ensure!(b.elements.len() == 3, "{} elements", b.elements.len());
    let sg = b.semigroup();
    let gens = sg.minimal_generators();
    ensure!(gens == [e(&[4]), e(&[6]), e(&[13])], "semigroup {gens:?}");

    let report = sg.gap_report();
    let gaps: Vec<u32> = report.gaps.iter().map(|g| g.coords()[0]).collect();
    ensure!(report.cofinite, "not cofinite");
    ensure!(gaps == [1, 2, 3, 5, 7, 9, 11, 15], "gaps {gaps:?}");

    let mut oracle = Oracle::new(&gens);
    let brute: Vec<u32> = (1..=30).filter(|&m| !oracle.member(&[m])).collect();
    ensure!(brute == gaps, "oracle gaps {brute:?}");
    Ok("3 elements, <4,6,13>, 8 gaps agree with brute force up to 30".into())
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let n: i64 = rng.gen_range(-9..=9);
        if n != 0 {
            return Scalar::new(n.into(), rng.gen_range(1..=9i64).into());
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, terms: usize, max_exp: u32, constant: bool) -> Polynomial {
    loop {
        let mut f = Polynomial::zero(n);
        for _ in 0..terms {
            let ex = Exponent::new((0..n).map(|_| rng.gen_range(0..=max_exp)).collect());
            if ex.is_zero() && !constant {
                continue;
            }
            f = &f + &Polynomial::monomial(ex, random_scalar(rng));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for case in 0..500 {
        let n = rng.gen_range(1..=3);
        let s = rng.gen_range(1..=4);
        let gens: Vec<Polynomial> = (0..s)
            .map(|_| {
                let t = rng.gen_range(1..=3);
                random_poly(&mut rng, n, t, 3, false)
            })
            .collect();
        let t = rng.gen_range(1..=5);
        let f = random_poly(&mut rng, n, t, 4, true);
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let ord = order(&w);
        let top = f
            .terms()
            .map(|(ex, _)| ord.weight().pairing(ex))
            .max()
            .expect("nonzero");
        let cap = top + q(6);
        let r = subduct(&f, &gens, &ord, &cap).map_err(err)?;
        *counts.entry(r.status.name()).or_default() += 1;

        let back = r.reconstruct(&gens).map_err(err)?;
        ensure!(back == f, "case {case}: reconstruction differs");
        if !r.status.is_final() {
            continue;
        }
        ensure!(r.tail.is_zero() || r.status == DivisionStatus::Converged, "case {case}: tail");
        let leads: Vec<Exponent> = gens
            .iter()
            .map(|g| g.leading_exponent(&ord))
            .collect::<Result<_>>()
            .map_err(err)?;
        let mut oracle = Oracle::new(&leads);
        for (ex, _) in r.remainder.terms() {
            ensure!(
                !oracle.member(ex.coords()),
                "case {case}: remainder exponent {ex} is expressible"
            );
        }
    }
    let summary: Vec<String> = counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
    ensure!(
        counts.get("exact").copied().unwrap_or(0) >= 100,
        "too few exact instances: {}",
        summary.join(", ")
    );
    Ok(format!("500 instances ({})", summary.join(", ")))
}

fn criterion_4() -> Check {
    type Case<'a> = (usize, &'a [i64], &'a [&'a str], &'a [&'a str]);
    let cases: [Case; 5] = [
        (2, &[1, 2], &["x", "y"], &["x + y", "y + x^2"]),
        (
            1,
            &[1],
            &["t^4", "t^6 + t^7"],
            &["t^4 + t^6 + t^7", "t^6 + t^7 + 2*t^8"],
        ),
        (
            2,
            &[1, 2],
            &["x + y", "x*y", "y^3"],
            &["x + y", "x*y + (x + y)^2", "y^3 + 2*x*y*(x + y)"],
        ),
        (
            2,
            &[1, 2],
            &["x^2", "x*y", "y^2", "x^3", "y^3"],
            &["x^2 + x*y", "x*y", "y^2 + x^3", "x^3", "y^3 + x^2*y^2"],
        ),
        (
            2,
            &[1, 2],
            &["x + y^2", "y^2", "y^3"],
            &["x", "y^2", "y^3 + x*y^2"],
        ),
    ];
    for (i, (n, w, left, right)) in cases.iter().enumerate() {
        let ord = order(w);
        let l = reduced_basis(&algebra(*n, left), &ord, &q(30)).map_err(err)?;
        let r = reduced_basis(&algebra(*n, right), &ord, &q(30)).map_err(err)?;
        for b in [&l, &r] {
            ensure!(b.is_exact() && b.reduced, "pair {}: basis not exact and reduced", i + 1);
        }
        ensure!(
            l.elements == r.elements,
            "pair {}: {:?} vs {:?}",
            i + 1,
            l.elements,
            r.elements
        );
    }
    Ok("5 pairs give identical reduced bases".into())
}

fn grlex(n: usize) -> TieBreakOrder {
    TieBreakOrder::default_for(n)
}

fn random_weight(rng: &mut ChaCha8Rng, n: usize) -> WeightVector {
    let coords = (0..n)
        .map(|_| Scalar::new(rng.gen_range(1..=997i64).into(), rng.gen_range(1..=991i64).into()))
        .collect();
    WeightVector::new(coords).expect("positive")
}

/// The reduced basis at `a`, recomputed from scratch. Starts from the
/// fan's cap policy and doubles the cap until the basis is exact, since
/// extreme weights can push needed elements past the fan's cap.
fn exact_cell_at(fan: &StandardFan, a: &WeightVector) -> std::result::Result<FanCell, String> {
    let mut cap = fan.cap.clone();
    for _ in 0..12 {
        let probe = StandardFan {
            cells: Vec::new(),
            walls: Vec::new(),
            algebra: fan.algebra.clone(),
            tie: fan.tie.clone(),
            cap: cap.clone(),
            complete_flag: false,
        };
        let cell = probe.cell_at(a).map_err(err)?;
        if cell.basis.is_exact() {
            return Ok(cell);
        }
        cap = &cap * q(2);
    }
    Err(format!("no exact basis at {a} up to cap {cap}"))
}

fn same_set(x: &[Polynomial], y: &[Polynomial]) -> bool {
    x.len() == y.len() && x.iter().all(|p| y.contains(p))
}

fn same_label(fan: &StandardFan, cell: &FanCell, a: &WeightVector) -> Check {
    let fresh = exact_cell_at(fan, a)?;
    ensure!(
        same_set(&fresh.basis.elements, &cell.basis.elements),
        "basis at {a} differs from its cell"
    );
    ensure!(
        fresh.semigroup.equals(&cell.semigroup).map_err(err)?,
        "semigroup at {a} differs from its cell"
    );
    Ok(String::new())
}

fn mutually_exclusive(s: &AffineSemigroup, t: &AffineSemigroup) -> std::result::Result<bool, String> {
    let witness = |x: &AffineSemigroup, y: &AffineSemigroup| -> std::result::Result<bool, String> {
        let mut oracle = Oracle::new(y.generators());
        Ok(x.generators().iter().any(|g| !oracle.member(g.coords())))
    };
    Ok(witness(s, t)? && witness(t, s)?)
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cap = q(30);

    let mono = algebra(2, &["x^2", "y^3", "x*y"]);
    let f1 = traverse(&mono, &grlex(2), &cap).map_err(err)?;
    ensure!(
        f1.cells.len() == 1 && f1.cells[0].cone.is_full_dimensional() && f1.complete_flag,
        "monomial fan has {} cells",
        f1.cells.len()
    );
    for _ in 0..20 {
        let w = random_weight(&mut rng, 2);
        let ord = WeightedOrder::new(w.clone(), grlex(2)).map_err(err)?;
        let c = is_canonical(&mono, &ord, &cap).map_err(err)?;
        ensure!(c == Canonicity::Yes, "monomial algebra not canonical at {w}");
    }

    let walled = algebra(2, &["x + y", "x*y", "y^3"]);
    let f2 = traverse(&walled, &grlex(2), &cap).map_err(err)?;
    ensure!(f2.complete_flag, "fan of K[[x+y, xy, y^3]] is incomplete");
    let wall = f2
        .walls
        .iter()
        .find(|w| w.normal == [1, -1] || w.normal == [-1, 1])
        .ok_or("no wall on b1 = b2")?;
    let (l, r) = wall.cells;
    let (sl, sr) = (&f2.cells[l].semigroup, &f2.cells[r].semigroup);
    ensure!(!sl.equals(sr).map_err(err)?, "semigroups agree across the wall");
    ensure!(mutually_exclusive(sl, sr)?, "no mutual non-inclusion across the wall");

    let mut landed = 0;
    for fan in [&f1, &f2] {
        for _ in 0..1000 {
            let a = random_weight(&mut rng, 2);
            match fan.locate(&a) {
                Some(i) => {
                    same_label(fan, &fan.cells[i], &a)?;
                    landed += 1;
                }
                None => ensure!(!fan.locate_closure(&a).is_empty(), "{a} lies in no cell"),
            }
        }
        for (i, c) in fan.cells.iter().enumerate() {
            ensure!(
                c.multihomogeneous == c.cone.is_full_dimensional()
                    && is_multihomogeneous(c) == c.multihomogeneous,
                "cell {i}: multihomogeneous flag disagrees with dimension"
            );
        }
    }
    Ok(format!(
        "1 cell; wall at b1 = b2 with mutual non-inclusion; {landed}/2000 weights matched their cell"
    ))
}

/// A relative-interior point: a random positive combination of the rays.
fn interior_sample(rng: &mut ChaCha8Rng, cone: &Cone) -> Vec<Scalar> {
    let n = cone.ambient_dim();
    let mut p = vec![Scalar::zero(); n];
    for ray in cone.rays() {
        let c = Scalar::new(rng.gen_range(1..=50i64).into(), rng.gen_range(1..=7i64).into());
        for (x, &y) in p.iter_mut().zip(ray) {
            *x += &c * Scalar::from_integer(y.into());
        }
    }
    p
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let fans = [
        traverse(&algebra(2, &["x + y", "x*y", "y^3"]), &grlex(2), &q(30)).map_err(err)?,
        traverse(&algebra(2, &["x^2", "y^3", "x*y"]), &grlex(2), &q(30)).map_err(err)?,
    ];
    let mut pairs = 0;
    for fan in &fans {
        for i in 0..fan.cells.len() {
            for j in i..fan.cells.len() {
                let (ci, cj) = (&fan.cells[i], &fan.cells[j]);
                if !ci.semigroup.equals(&cj.semigroup).map_err(err)? {
                    continue;
                }
                pairs += 1;
                for _ in 0..100 {
                    let p = interior_sample(&mut rng, &ci.cone);
                    let r = interior_sample(&mut rng, &cj.cone);
                    let t = Scalar::new(rng.gen_range(1..=99i64).into(), 100.into());
                    let mix: Vec<Scalar> = p
                        .iter()
                        .zip(&r)
                        .map(|(x, y)| &t * x + (Scalar::from_integer(1.into()) - &t) * y)
                        .collect();
                    let a = WeightVector::new(mix).map_err(err)?;
                    let fresh = exact_cell_at(fan, &a)?;
                    ensure!(
                        fresh.semigroup.equals(&ci.semigroup).map_err(err)?,
                        "combination {a} of cells {i} and {j} has another semigroup"
                    );
                }
            }
        }
    }
    Ok(format!("{pairs} same-semigroup cell pairs x 100 combinations"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0usize;
    for map in 0..50 {
        let n = rng.gen_range(1..=3);
        let s = rng.gen_range(2..=4);
        let thetas: Vec<Exponent> = (0..s)
            .map(|_| loop {
                let t = Exponent::new((0..n).map(|_| rng.gen_range(0..=6)).collect());
                if !t.is_zero() {
                    break t;
                }
            })
            .collect();
        let kernel = toric_kernel(&thetas).map_err(err)?;
        ensure!(
            kernel.iter().all(|r| r.holds_for(&thetas)),
            "map {map}: a returned binomial is not a relation"
        );
        // group multiplicity vectors by image; each group must share one
        // normal form
        let mut classes: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
        let total = 9usize.pow(s as u32);
        for code in 0..total {
            let mut c = code;
            let m: Vec<u32> = (0..s)
                .map(|_| {
                    let d = (c % 9) as u32;
                    c /= 9;
                    d
                })
                .collect();
            let image: Vec<u32> = (0..n)
                .map(|i| m.iter().zip(&thetas).map(|(k, t)| k * t.coords()[i]).sum())
                .collect();
            let nf = binomial_normal_form(&kernel, &m);
            match classes.get(&image) {
                Some(prev) => {
                    ensure!(prev == &nf, "map {map}: relation with multiplicities {m:?} does not reduce to zero");
                    checked += 1;
                }
                None => {
                    classes.insert(image, nf);
                }
            }
        }
    }
    Ok(format!("50 maps, {checked} relations reduce to zero"))
}

fn criterion_8() -> Check {
    let sg = AffineSemigroup::new(
        2,
        vec![e(&[2, 0]), e(&[3, 0]), e(&[0, 2]), e(&[0, 3]), e(&[1, 1])],
    )
    .map_err(err)?;
    let report = sg.gap_report();
    let gaps: BTreeSet<Exponent> = report.gaps.iter().cloned().collect();
    let expected: BTreeSet<Exponent> = [e(&[1, 0]), e(&[0, 1]), e(&[1, 2]), e(&[2, 1])].into();
    ensure!(report.cofinite && gaps == expected, "gaps {:?}", report.gaps);
    let mut oracle = Oracle::new(sg.generators());
    for x in 0..12 {
        for y in 0..12 {
            let gap = !oracle.member(&[x, y]);
            ensure!(gap == expected.contains(&e(&[x, y])), "oracle disagrees at ({x},{y})");
        }
    }
    let diag = AffineSemigroup::new(2, vec![e(&[1, 1])]).map_err(err)?;
    ensure!(!diag.gap_report().cofinite, "<(1,1)> reported cofinite");
    Ok("4 gaps, confirmed on a 12x12 box; <(1,1)> not cofinite".into())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, Duration, fn() -> Check);
    let criteria: [Criterion; 8] = [
        ("infinite basis example", Duration::from_secs(1), criterion_1),
        ("curve example", Duration::from_secs(1), criterion_2),
        ("division contract", Duration::from_secs(60), criterion_3),
        ("reduced-basis uniqueness", Duration::from_secs(60), criterion_4),
        ("fan properties", Duration::from_secs(120), criterion_5),
        ("convexity sampling", Duration::from_secs(120), criterion_6),
        ("toric kernel completeness", Duration::from_secs(120), criterion_7),
        ("gaps and cofiniteness", Duration::from_secs(10), criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {}. {name}: {detail} ({:.3} s, limit {} s)",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
