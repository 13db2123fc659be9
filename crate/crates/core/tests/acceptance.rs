//! Acceptance run. Prints one `ACn PASS|FAIL` line per criterion and exits
//! nonzero if any criterion fails.

use std::error::Error as StdError;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use glab_core::artinian::{displace, monomials_of_degree, ChowClass, ChowRing, Monomial};
use glab_core::certificate::{Specialization, TrialConfig};
use glab_core::complex::{Face, SimplicialComplex};
use glab_core::corpus::{self, sphere_corpus};
use glab_core::frame::GenericFrame;
use glab_core::lefschetz::{
    certify_anisotropy, check_main_identity, main_identity_sides, random_nonzero_class, strong_lefschetz_check,
    weak_lefschetz_check, ElementChoice, IdentityKind, Split,
};
use glab_core::scalar::{Dual, Field, Gf2k, Gf2kField, RationalFunction, Var};
use glab_core::volume::{sample_monomials, vol_ideal_vanishing, VolumeFunctional};
use glab_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, Box<dyn StdError>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+).into());
        }
    };
}

fn gf64() -> Gf2kField {
    Gf2kField::new(64).unwrap()
}

fn named(name: &str) -> SimplicialComplex {
    corpus::builtin(name).unwrap()
}

fn face(v: &[u32]) -> Face {
    Face::new(v.to_vec()).unwrap()
}

/// `a = b` as rational functions, by multiplying out denominators.
fn cross_equal(a: &RationalFunction, b: &RationalFunction) -> bool {
    match (a.parts(), b.parts()) {
        (Some((na, da)), Some((nb, db))) => na.mul(db) == nb.mul(da),
        _ => false,
    }
}

fn ac1() -> Check {
    let mut spaces = 0;
    for (name, k) in sphere_corpus() {
        let h = k.h_vector()?;
        for seed in 0..3 {
            let s = Specialization::for_complex(&k, gf64(), 100 + seed)?;
            let dims: Vec<i64> = ChowRing::new(&k, &s.frame)?.dims().iter().map(|&x| x as i64).collect();
            ensure!(dims == h, "{name} seed {seed}: dims {dims:?}, h {h:?}");
            spaces += 1;
        }
    }
    Ok(format!("{spaces} rings, dim A^m = h_m"))
}

fn ac2() -> Check {
    let k = corpus::cycle(5);
    let frame = GenericFrame::exact(k.vertices().iter().copied(), 2)?;
    let vol = VolumeFunctional::new(&k, &frame, frame.aux_point())?;
    let a = |v: u32| frame.coord(v, 0).unwrap().clone();
    let br = |v: u32, w: u32| frame.bracket(&[v, w]).unwrap();
    let mut checked = 0;
    for j in 1..=5u32 {
        for w in j + 1..=5 {
            let value = vol.vol_monomial(&Monomial::from_pairs([(j, 1), (w, 1)]))?;
            if k.is_face(&[j, w]) {
                ensure!(
                    cross_equal(&value, &br(j, w).inv()?),
                    "Vol(x{j} x{w}) != [v{j} v{w}]^-1"
                );
            } else {
                ensure!(value.is_zero_rf(), "Vol(x{j} x{w}) nonzero");
            }
            checked += 1;
        }
        let (prev, next) = ((j + 3) % 5 + 1, j % 5 + 1);
        let value = vol.vol_monomial(&Monomial::from_pairs([(j, 2)]))?;
        let formula = a(j)
            .inv()?
            .mul(&a(prev).mul(&br(prev, j).inv()?).add(&a(next).mul(&br(j, next).inv()?)));
        ensure!(
            cross_equal(&value, &formula),
            "Vol(x{j}^2) disagrees with the polygon formula"
        );
        checked += 1;
    }
    Ok(format!("{checked} exact volumes on C5"))
}

fn ac3() -> Check {
    let k = corpus::cycle(5);
    let frame = GenericFrame::exact(k.vertices().iter().copied(), 2)?;
    let y = frame.aux_point();
    let vol = VolumeFunctional::new(&k, &frame, y.clone())?;
    for j in 1..=5u32 {
        let prev = (j + 3) % 5 + 1;
        let sigma = face(&[prev, j]);
        let rhs = frame
            .bracket(&[prev, j])?
            .mul(&vol.vol_monomial(&Monomial::square_free(&sigma))?.square());
        // formal partial derivatives of the facet sum
        let formal = vol
            .vol_monomial(&Monomial::from_pairs([(j, 2)]))?
            .derivation(prev, j, 2);
        ensure!(cross_equal(&formal, &rhs), "formal derivative fails at j = {j}");
        // the jet lift of the same derivation
        let split = Split::new(&k, sigma, face(&[prev]), face(&[j]))?;
        let (lhs, rhs2) = main_identity_sides(&k, &frame, &y, &split)?;
        ensure!(cross_equal(&lhs, &rhs2), "jet derivative fails at j = {j}");
        ensure!(cross_equal(&lhs, &formal), "jet and formal routes differ at j = {j}");
    }
    let mut splits = 0;
    for p in 4..=9 {
        let k = corpus::cycle(p);
        for split in Split::all(&k)? {
            for seed in 0..3 {
                let c = check_main_identity(&k, &split, &TrialConfig::new(seed, 1))?;
                ensure!(c.passed, "C{p} split {:?} seed {seed}", split.pairs());
            }
            splits += 1;
        }
    }
    Ok(format!(
        "symbolic on C5; {splits} splits on C4..C9 x 3 seeds in GF(2^64)"
    ))
}

fn spread<T: Clone>(items: &[T], n: usize) -> Vec<T> {
    if items.len() <= n {
        return items.to_vec();
    }
    (0..n).map(|i| items[i * items.len() / n].clone()).collect()
}

fn ac4() -> Check {
    let mut summary = Vec::new();
    for (name, kind) in [
        ("cross-polytope:3", IdentityKind::Even),
        ("cross-polytope:4", IdentityKind::Odd),
        ("join:cycle:3,cycle:3", IdentityKind::Odd),
    ] {
        let k = named(name);
        let splits = spread(&Split::all(&k)?, 12);
        ensure!(splits.len() >= 10, "{name}: only {} splits", splits.len());
        for (i, split) in splits.iter().enumerate() {
            ensure!(split.kind() == kind, "{name}: unexpected kind {:?}", split.kind());
            let c = check_main_identity(&k, split, &TrialConfig::new(40 + i as u64, 3))?;
            ensure!(c.passed, "{name}: split {:?} failed", split);
            ensure!(c.trials.iter().all(|t| !t.lhs.is_zero()), "{name}: zero left side");
            ensure!(
                split.vanishing_candidates(&k).is_empty() || c.trials.iter().all(|t| !t.vanishing.is_empty()),
                "{name}: vanishing clause not exercised"
            );
        }
        summary.push(format!("{name} {}", splits.len()));
    }
    Ok(format!("splits x 3 seeds: {}", summary.join(", ")))
}

fn ac5() -> Check {
    let mut worst = f64::NEG_INFINITY;
    for name in ["join:cycle:3,cycle:3", "cross-polytope:3"] {
        let k = named(name);
        let e = k.pure_rank()? / 2;
        let cfg = TrialConfig::new(5, 3);
        let s = Specialization::for_complex(&k, cfg.field, 999)?;
        for i in 0..20 {
            let u = random_nonzero_class(&k, &s.frame, e, 1000 + i)?;
            let c = certify_anisotropy(&k, &u, &cfg)?;
            ensure!(c.passed, "{name}: class {i} failed");
            ensure!(
                c.trials.iter().all(|t| !t.lhs.is_zero() && t.lhs == t.rhs),
                "{name}: class {i} has lhs != rhs or zero"
            );
            let bound = c.degree_bounds.log2_failure_bound.ok_or("missing bound")?;
            ensure!(bound < -40.0, "{name}: bound 2^{bound}");
            worst = worst.max(bound);
        }
        ensure!(
            certify_anisotropy(&k, &ChowClass::zero(e), &cfg).unwrap_err() == Error::ZeroClass,
            "{name}: zero class accepted"
        );
        // a class in the ideal of the first trial's frame
        let first = Specialization::for_complex(&k, cfg.field, cfg.trial_seed(0, 0))?;
        let mut form = ChowClass::zero(1);
        for (v, a) in first.frame.linear_form(0) {
            form.add_term(Monomial::var(v), a);
        }
        let shift = Monomial::from_pairs(k.facets()[0].vertices()[..e - 1].iter().map(|&v| (v, 1)));
        let in_ideal = form.mul_monomial(&shift).restrict_to(&k);
        ensure!(
            certify_anisotropy(&k, &in_ideal, &cfg).unwrap_err() == Error::ZeroClass,
            "{name}: ideal class accepted"
        );
    }
    Ok(format!("40 certificates, worst bound 2^{worst:.1}"))
}

fn ac6() -> Check {
    let mut count = 0;
    for (name, k) in sphere_corpus() {
        let r = weak_lefschetz_check(&k, &ElementChoice::Random, &TrialConfig::new(6, 3))?;
        ensure!(r.passed, "{name}: weak Lefschetz failed");
        if name == "icosahedron" {
            let top = r.witness().unwrap().ranks.last().unwrap().rank;
            ensure!(top == 9, "icosahedron rank {top}");
        }
        count += 1;
    }
    let mut names: Vec<String> = (3..=9).map(|p| format!("cycle:{p}")).collect();
    names.extend((3..=6).map(|p| format!("suspension:cycle:{p}")));
    names.push("cross-polytope:3".into());
    for name in &names {
        let r = weak_lefschetz_check(&named(name), &ElementChoice::Suspension, &TrialConfig::new(7, 3))?;
        ensure!(r.passed, "{name}: suspension element failed");
    }
    Ok(format!(
        "random element on {count} spheres, suspension element on {}",
        names.len()
    ))
}

fn ac7() -> Check {
    let mut names: Vec<String> = (3..=9).map(|p| format!("cycle:{p}")).collect();
    names.extend(["cross-polytope:3", "cross-polytope:4", "join:cycle:3,cycle:3"].map(String::from));
    for name in &names {
        let k = named(name);
        let h = k.h_vector()?;
        let r = strong_lefschetz_check(&k, &ElementChoice::Random, &TrialConfig::new(8, 3))?;
        for t in &r.trials {
            for x in &t.ranks {
                let hm = h[x.m] as usize;
                ensure!(
                    x.rank == hm && x.source_dim == hm && x.target_dim == hm,
                    "{name} seed {}: degree {} rank {} vs h {hm}",
                    t.seed,
                    x.m,
                    x.rank
                );
            }
        }
    }
    Ok(format!("{} complexes x 3 seeds bijective", names.len()))
}

fn random_combination(k: &SimplicialComplex, m: usize, rng: &mut ChaCha8Rng) -> ChowClass<Gf2k> {
    let mut out = ChowClass::zero(m);
    for mono in monomials_of_degree(k, m) {
        if rng.gen_bool(0.5) {
            out.add_term(mono, gf64().random(rng));
        }
    }
    out
}

#[derive(Clone, Debug)]
enum Expr {
    Var(u32),
    One,
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
}

fn random_expr(rng: &mut ChaCha8Rng, vars: u32, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.85) {
            Expr::Var(rng.gen_range(0..vars))
        } else {
            Expr::One
        };
    }
    let a = Box::new(random_expr(rng, vars, depth - 1));
    let b = Box::new(random_expr(rng, vars, depth - 1));
    match rng.gen_range(0..3) {
        0 => Expr::Add(a, b),
        1 => Expr::Mul(a, b),
        _ => Expr::Div(a, b),
    }
}

fn eval_expr<F: Field>(e: &Expr, xs: &[F]) -> Option<F> {
    Some(match e {
        Expr::Var(i) => xs[*i as usize].clone(),
        Expr::One => xs[0].one_like(),
        Expr::Add(a, b) => eval_expr(a, xs)?.add(&eval_expr(b, xs)?),
        Expr::Mul(a, b) => eval_expr(a, xs)?.mul(&eval_expr(b, xs)?),
        Expr::Div(a, b) => eval_expr(a, xs)?.div(&eval_expr(b, xs)?).ok()?,
    })
}

fn ac8() -> Check {
    let field = gf64();
    let spheres = sphere_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    let mut brion = 0;
    for (name, k) in &spheres {
        let d = k.pure_rank()?;
        let tau = k.facets()[0].clone();
        for (batch, monos) in sample_monomials(k, d, 50, &mut rng).chunks(10).enumerate() {
            let s = Specialization::for_complex(k, field, 800 + batch as u64)?;
            let vol = VolumeFunctional::new(k, &s.frame, s.point.clone())?;
            let tau_inv = s.frame.bracket_face(&tau)?.inv()?;
            for z in monos {
                let direct = vol.vol_monomial(z)?;
                let moved = displace(
                    k,
                    &s.frame,
                    &ChowClass::monomial(z.clone(), field.one()),
                    &Face::empty(),
                    Some(&tau),
                )?;
                let square = Monomial::square_free(&tau);
                ensure!(
                    moved.class.terms().all(|(m, _)| *m == square),
                    "{name}: {z} not displaced to a single facet"
                );
                let via = moved.class.coeff(&square).map_or(field.zero(), |c| c.mul(&tau_inv));
                ensure!(direct == via, "{name}: Brion and displacement differ on {z}");
                brion += 1;
            }
        }
    }

    for t in 0..50u64 {
        let (name, k) = &spheres[t as usize % spheres.len()];
        let d = k.pure_rank()?;
        let s = Specialization::for_complex(k, field, 900 + t)?;
        let vol = VolumeFunctional::new(k, &s.frame, s.point.clone())?;
        let samples = sample_monomials(k, d - 1, 3, &mut rng);
        ensure!(
            vol_ideal_vanishing(k, &s.frame, &vol, &samples)?,
            "{name}: ideal element with nonzero volume"
        );
    }

    for t in 0..50u64 {
        let (name, k) = &spheres[t as usize % spheres.len()];
        let d = k.pure_rank()?;
        let s = Specialization::for_complex(k, field, 950 + t)?;
        let vol = VolumeFunctional::new(k, &s.frame, s.point.clone())?;
        let extra = if d % 2 == 1 {
            Monomial::var(k.vertices()[0])
        } else {
            Monomial::one()
        };
        let q = |u: &ChowClass<Gf2k>| vol.class(&u.mul(u).mul_monomial(&extra).restrict_to(k));
        let u = random_combination(k, d / 2, &mut rng);
        let v = random_combination(k, d / 2, &mut rng);
        let sum = q(&u.add(&v)?)?;
        ensure!(sum == q(&u)?.add(&q(&v)?), "{name}: Vol((u+v)^2) is not additive");
    }

    let (mut compared, mut skipped) = (0, 0);
    for t in 0..60u32 {
        let n = 1 + t % 6;
        let expr = random_expr(&mut rng, n, 4);
        let exact: Vec<RationalFunction> = (0..n).map(|i| RationalFunction::var(Var::aux(i))).collect();
        let Some(f) = eval_expr(&expr, &exact) else {
            skipped += 1;
            continue;
        };
        let xs: Vec<Gf2k> = (0..n).map(|_| field.random(&mut rng)).collect();
        for i in 0..n {
            let duals: Vec<Dual<Gf2k>> = xs
                .iter()
                .enumerate()
                .map(|(j, x)| Dual::new(*x, if j == i as usize { field.one() } else { field.zero() }))
                .collect();
            let symbolic = f
                .partial(Var::aux(i))
                .specialize(&field.one(), &mut |v: Var| v.as_aux().map(|j| xs[j as usize]));
            match (eval_expr(&expr, &duals), symbolic) {
                (Some(dual), Ok(sym)) => {
                    ensure!(dual.slope == sym, "derivative mismatch on {expr:?} in variable {i}");
                    compared += 1;
                }
                _ => skipped += 1,
            }
        }
    }
    ensure!(compared >= 100, "only {compared} derivatives compared");

    Ok(format!(
        "{brion} Brion/displacement, 50 ideal, 50 Frobenius, {compared} derivatives ({skipped} poles skipped)"
    ))
}

fn ac9() -> Check {
    let spheres = sphere_corpus();
    for (name, k) in &spheres {
        ensure!(k.is_homology_sphere_f2(), "{name} not detected as a sphere");
        ensure!(k.is_pseudomanifold(), "{name} not a pseudomanifold");
    }
    let path = SimplicialComplex::from_facets([vec![1, 2], vec![2, 3]])?;
    let bowtie = SimplicialComplex::from_facets([vec![1, 2, 3], vec![1, 4, 5]])?;
    ensure!(!path.is_homology_sphere_f2(), "path graph accepted");
    ensure!(!bowtie.is_homology_sphere_f2(), "glued triangles accepted");
    let torus = corpus::torus();
    ensure!(torus.is_pseudomanifold(), "torus not a pseudomanifold");
    ensure!(torus.betti_f2() == vec![1, 2, 1], "torus betti {:?}", torus.betti_f2());
    ensure!(!torus.is_homology_sphere_f2(), "torus accepted");
    ensure!(!corpus::rp2().is_homology_sphere_f2(), "rp2 accepted");
    Ok(format!("{} spheres accepted, 4 negatives rejected", spheres.len()))
}

fn main() {
    let rows: [(u32, fn() -> Check, Option<u64>); 9] = [
        (1, ac1, Some(60)),
        (2, ac2, Some(10)),
        (3, ac3, None),
        (4, ac4, Some(120)),
        (5, ac5, None),
        (6, ac6, Some(60)),
        (7, ac7, None),
        (8, ac8, None),
        (9, ac9, None),
    ];
    let mut failed = 0;
    for (n, check, limit) in rows {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|s| elapsed > Duration::from_secs(s));
        let limit_text = limit.map_or(String::new(), |s| format!(" / {s}s"));
        match result {
            Ok(detail) if !over => println!("AC{n} PASS {detail} ({:.2}s{limit_text})", elapsed.as_secs_f64()),
            Ok(detail) => {
                failed += 1;
                println!(
                    "AC{n} FAIL over time: {detail} ({:.2}s{limit_text})",
                    elapsed.as_secs_f64()
                );
            }
            Err(e) => {
                failed += 1;
                println!("AC{n} FAIL {e} ({:.2}s{limit_text})", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
