//! Acceptance suite: one PASS/FAIL line per criterion. Run with `cargo test --test acceptance`.

use std::time::Instant;

use latsum::fixtures::{arrangement, check_entry, manifest, ManifestEntry};
use latsum::genfun::{generating_function, generating_function_unchecked, lattice_sum_value, Options, Value, WeightVector};
use latsum::hierarchy::check_hierarchy;
use latsum::kernel::{bernoulli_poly, kernel_coefficient, kernel_moment};
use latsum::lattice::{Arrangement, Functional, GenericDirection};
use latsum::oracle::convergence_scan;
use latsum::polytope::genfun_via_polytopes;
use latsum::rat::{q, qi, GaussQ, Q};
use latsum::scalar::{cyclotomic_order, ExactRing, ExactScalar, Ring};

/// Exact criteria compare canonical scalars with zero tolerance.
const ORACLE_FINAL_ERROR: f64 = 1e-3;
const ORACLE_SIZES: [u64; 4] = [250, 500, 1000, 2000];
const ORACLE_PRECISION: usize = 128;
const BUDGET_222_S: f64 = 10.0;
const BUDGET_HIGHER_S: f64 = 60.0;
const BUDGET_A2_S: f64 = 600.0;
const BUDGET_SCAN_S: f64 = 60.0;
const BUDGET_POLYTOPE_S: f64 = 300.0;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn entries(ids: &[&str]) -> Vec<ManifestEntry> {
    let all = manifest();
    ids.iter().map(|id| all.iter().find(|e| e.id == *id).unwrap_or_else(|| panic!("manifest row {id}")).clone()).collect()
}

fn table_rows(ids: &[&str], budget: f64) -> Verdict {
    let mut failures = vec![];
    let mut slowest: f64 = 0.0;
    for e in entries(ids) {
        match check_entry(&e, &Options::default()) {
            Ok(o) => {
                slowest = slowest.max(o.seconds);
                if !o.pass {
                    failures.push(format!("{}: got {}", e.id, o.got));
                } else if o.seconds > budget {
                    failures.push(format!("{}: {:.1}s over budget", e.id, o.seconds));
                }
            }
            Err(err) => failures.push(format!("{}: {err}", e.id)),
        }
    }
    if failures.is_empty() {
        verdict(true, format!("{} rows exact, slowest {slowest:.2}s (budget {budget}s)", ids.len()))
    } else {
        verdict(false, failures.join("; "))
    }
}

fn criterion_1() -> Verdict {
    table_rows(&["a1_222_alpha1", "a1_222_alpha2", "a1_222_alpha3"], BUDGET_222_S)
}

fn criterion_2() -> Verdict {
    table_rows(&["a1_444_alpha1", "a1_666_alpha2", "a1_888_alpha3", "a1_zeta_222_alpha1", "a1_zeta_444_alpha1", "a1_zeta_666_alpha2"], BUDGET_HIGHER_S)
}

fn criterion_3() -> Verdict {
    table_rows(&["a2_mixed_alpha1", "a2_twos_alpha2", "a2_mixed_alpha3", "a2_zeta_twos_alpha2"], BUDGET_A2_S)
}

fn criterion_4() -> Verdict {
    let mut notes = vec![];
    let mut pass = true;
    for fixture in ["a1_alpha1", "a1_alpha2", "a1_alpha3"] {
        let arr = arrangement(fixture).unwrap().arrangement;
        let k = WeightVector::new(vec![2, 2, 2]);
        let y = [qi(0)];
        let start = Instant::now();
        let s = lattice_sum_value(&arr, &y, &k, &Options::default()).unwrap().s.to_numeric(ORACLE_PRECISION);
        let rows = convergence_scan(&arr, &k, &y, &ORACLE_SIZES, Some(&s), ORACLE_PRECISION).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let errors: Vec<f64> = rows.iter().map(|r| r.error.unwrap()).collect();
        let monotone = errors.windows(2).all(|w| w[1] < w[0]);
        let last = errors[errors.len() - 1];
        let ok = monotone && last < ORACLE_FINAL_ERROR && secs < BUDGET_SCAN_S;
        pass &= ok;
        notes.push(format!("{fixture}: |Z(2000) - S| = {last:.2e}, monotone {monotone}, {secs:.1}s"));
    }
    verdict(pass, notes.join("; "))
}

fn criterion_5() -> Verdict {
    let arr = arrangement("a2_zero").unwrap().arrangement;
    let phi = arr.choose_phi();
    let mut notes = vec![];
    let mut pass = true;
    for y in [vec![qi(0), qi(0)], vec![q(1, 7), q(1, 11)]] {
        let ring = ExactRing::new(cyclotomic_order(&arr, arr.bases(), &phi, &y).unwrap());
        // every division is exact or the call fails with NonDivisible
        match generating_function_unchecked(&ring, &arr, &y, &phi, 6) {
            Ok((_, divisions)) => {
                pass &= divisions > 0;
                notes.push(format!("y = ({}, {}): {divisions} exact divisions, zero remainder", y[0], y[1]));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("y = ({}, {}): {e}", y[0], y[1]));
            }
        }
    }
    verdict(pass, notes.join("; "))
}

fn polytope_case(arr: &Arrangement, y: &[Q], order: u32) -> Result<(f64, usize), String> {
    let start = Instant::now();
    let phi = arr.choose_phi();
    let ring = ExactRing::new(cyclotomic_order(arr, arr.bases(), &phi, y).map_err(|e| e.to_string())?);
    let f = generating_function(&ring, arr, y, &phi, order).map_err(|e| e.to_string())?;
    let p = genfun_via_polytopes(&ring, arr, y, order).map_err(|e| e.to_string())?;
    if !f.sub(&p.series).map_err(|e| e.to_string())?.is_zero() {
        return Err("series differ".into());
    }
    Ok((start.elapsed().as_secs_f64(), p.cells.len()))
}

fn criterion_6() -> Verdict {
    let a = arrangement("ex31_rational").unwrap().arrangement;
    let b = arrangement("a1_alphahalf").unwrap().arrangement;
    let mut notes = vec![];
    let mut pass = true;
    for (name, arr, y) in [("3-functional rank 2", &a, vec![q(1, 7), q(1, 11)]), ("rank 1, alpha = 1/2", &b, vec![q(1, 3)])] {
        match polytope_case(arr, &y, 4) {
            Ok((secs, cells)) => {
                pass &= secs < BUDGET_POLYTOPE_S;
                notes.push(format!("{name}: equal through order 4 over {cells} cells, {secs:.2}s"));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{name}: {e}"));
            }
        }
    }
    verdict(pass, notes.join("; "))
}

fn criterion_7() -> Verdict {
    let mut notes = vec![];
    let mut pass = true;
    let lam1 = arrangement("a1_alpha1").unwrap();
    let y0 = [qi(0)];
    let ring = ExactRing::new(cyclotomic_order(&lam1.arrangement, lam1.arrangement.bases(), &lam1.arrangement.choose_phi(), &y0).unwrap());
    for g in 0..3 {
        let rep = check_hierarchy(&ring, &lam1.arrangement, &[g], &y0, 5);
        let ok = rep.as_ref().is_ok_and(|r| r.passed());
        pass &= ok;
        notes.push(format!("Lambda_1 minus {}: {}", lam1.names[g], if ok { "0" } else { "nonzero" }));
    }
    let ex = arrangement("ex31_rational").unwrap();
    let y = [q(1, 7), q(1, 11)];
    let ring = ExactRing::new(cyclotomic_order(&ex.arrangement, ex.arrangement.bases(), &ex.arrangement.choose_phi(), &y).unwrap());
    let rep = check_hierarchy(&ring, &ex.arrangement, &[2], &y, 4);
    let ok = rep.as_ref().is_ok_and(|r| r.passed());
    pass &= ok;
    notes.push(format!("3-functional minus f3 (order 4): {}", if ok { "0" } else { "nonzero" }));
    verdict(pass, notes.join("; "))
}

/// ∫₀¹ x^j e^{λx} dx for j = 0..=n with e^λ = `exp_lambda`, λ ≠ 0.
fn monomial_integrals(lambda: &ExactScalar, exp_lambda: &ExactScalar, n: u32) -> Vec<ExactScalar> {
    let inv = lambda.inv().unwrap();
    let mut out = vec![exp_lambda.sub(&ExactScalar::one(lambda.order())).mul(&inv)];
    for j in 1..=n {
        let prev = out[j as usize - 1].scale(&qi(j as i64));
        out.push(exp_lambda.sub(&prev).mul(&inv));
    }
    out
}

/// Taylor coefficients of t/(ρe^t − 1) through t^n.
fn kernel_taylor(ring: &ExactRing, rho: &ExactScalar, n: u32) -> Vec<ExactScalar> {
    let fact = |j: u32| (1..=j).fold(qi(1), |a, i| a * qi(i as i64));
    // t/(ρe^t − 1) = 1/w(t) with w = (ρe^t − 1)/t when ρ = 1, and t·(1/u(t)) otherwise
    let unit_rho = rho.sub(&ring.one()).is_zero();
    let w: Vec<ExactScalar> = (0..=n + 1)
        .map(|j| {
            if unit_rho {
                ring.rational(&fact(j + 1).recip())
            } else if j == 0 {
                rho.sub(&ring.one())
            } else {
                rho.scale(&fact(j).recip())
            }
        })
        .collect();
    let inv0 = w[0].inv().unwrap();
    let mut inv: Vec<ExactScalar> = vec![inv0.clone()];
    for j in 1..=n {
        let mut acc = ring.zero();
        for i in 1..=j {
            acc = acc.add(&w[i as usize].mul(&inv[(j - i) as usize]));
        }
        inv.push(acc.mul(&inv0).neg());
    }
    if unit_rho {
        inv
    } else {
        std::iter::once(ring.zero()).chain(inv.into_iter().take(n as usize)).collect()
    }
}

fn criterion_8() -> Verdict {
    let mut failures = vec![];
    let ring = ExactRing::new(12);
    let mut bernoulli = 0;
    for k in 0..=8 {
        for y in [qi(0), q(1, 2), q(1, 3)] {
            let c = kernel_coefficient(&ring, k, &GaussQ::real(qi(0)), &y).unwrap();
            if c != ring.rational(&bernoulli_poly(k, &y)) {
                failures.push(format!("C({k},{y};0)"));
            }
            bernoulli += 1;
        }
    }
    let fact = |j: u32| (1..=j).fold(qi(1), |a, i| a * qi(i as i64));
    let mut moments = 0;
    for b in [qi(0), q(1, 2), q(1, 3)] {
        let rho = ring.exp_two_pi_i(&GaussQ::real(-b.clone())).unwrap();
        let taylor = kernel_taylor(&ring, &rho, 4);
        for k in 0..=4u32 {
            // C(k, x; b) = e^{−2πibx}·k!·Σ_j a_{k−j} x^j/j!
            let poly: Vec<ExactScalar> = (0..=k).map(|j| taylor[(k - j) as usize].scale(&(fact(k) / fact(j)))).collect();
            for m in -3i64..=3 {
                let s = Q::from_integer(m.into()) + &b;
                let integrals: Vec<ExactScalar> = if s == qi(0) {
                    (0..=k).map(|j| ring.rational(&Q::new(1.into(), (j + 1).into()))).collect()
                } else {
                    let lambda = ring.two_pi_i(&GaussQ::real(-s.clone()));
                    monomial_integrals(&lambda, &rho, k)
                };
                let integral = poly.iter().zip(&integrals).fold(ring.zero(), |acc, (c, i)| acc.add(&c.mul(i)));
                let two_pi_i_k = (0..k).fold(ring.one(), |acc, _| acc.mul(&ring.two_pi_i(&GaussQ::real(qi(1)))));
                let got = two_pi_i_k.mul(&integral).scale(&fact(k).recip()).neg();
                if got != ring.rational(&kernel_moment(k, m, &b)) {
                    failures.push(format!("moment k={k} m={m} b={b}"));
                }
                moments += 1;
            }
        }
    }
    if failures.is_empty() {
        verdict(true, format!("{bernoulli} Bernoulli identities, {moments} moments by exact integration"))
    } else {
        verdict(false, failures.join(", "))
    }
}

fn exact_s(arr: &Arrangement, y: &[Q], k: &[u32], phi: Option<GenericDirection>) -> Result<String, String> {
    let opts = Options { phi, ..Options::default() };
    match lattice_sum_value(arr, y, &WeightVector::new(k.to_vec()), &opts).map_err(|e| e.to_string())?.s {
        Value::Exact(x) => Ok(x.to_canonical_string()),
        Value::Numeric(_) => Err("numeric".into()),
    }
}

fn criterion_9() -> Verdict {
    let mut failures = vec![];
    let mut checks = 0;
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    for e in manifest() {
        let arr = arrangement(&e.fixture).unwrap().arrangement;
        let y: Vec<Q> = e.y.iter().map(|s| latsum::rat::parse_rational(s).unwrap()).collect();
        let base = exact_s(&arr, &y, &e.k, None);
        // the reversed order of functionals
        let perm: Vec<usize> = (0..arr.len()).rev().collect();
        let k_rev: Vec<u32> = perm.iter().map(|&i| e.k[i]).collect();
        let permuted = exact_s(&arr.permuted(&perm).unwrap(), &y, &k_rev, None);
        // every bundled arrangement has no indispensable functional, so any generic φ is admissible
        let neg = GenericDirection { phi: arr.choose_phi().phi.iter().map(|x| -x).collect() };
        let flipped = exact_s(&arr, &y, &e.k, Some(neg));
        let threads = (one.install(|| exact_s(&arr, &y, &e.k, None)), four.install(|| exact_s(&arr, &y, &e.k, None)));
        for (what, other) in [("permutation", &permuted), ("phi", &flipped), ("1 thread", &threads.0), ("4 threads", &threads.1)] {
            checks += 1;
            if base.is_err() || other != &base {
                failures.push(format!("{} under {what}", e.id));
            }
        }
        if arr.rank() == 2 {
            let alt = (2..8).filter_map(|m| arr.phi_with_ratio(m)).find(|p| *p != arr.choose_phi());
            if let Some(p) = alt {
                checks += 1;
                if exact_s(&arr, &y, &e.k, Some(p)) != base {
                    failures.push(format!("{} under phi ratio", e.id));
                }
            }
        }
    }
    if failures.is_empty() {
        verdict(true, format!("{checks} bit-identical comparisons over {} fixtures rows", manifest().len()))
    } else {
        verdict(false, failures.join(", "))
    }
}

fn criterion_10() -> Verdict {
    let (beta, gamma, y2) = (q(1, 3), q(1, 5), q(1, 7));
    let y = [q(2, 9), y2.clone()];
    let plane = |alpha: Q| {
        Arrangement::new(
            2,
            vec![Functional::real(&[1, 0], alpha), Functional::real(&[0, 1], beta.clone()), Functional::real(&[1, 1], gamma.clone())],
        )
        .unwrap()
    };
    let line = Arrangement::new(1, vec![Functional::real(&[1], beta.clone()), Functional::real(&[1], gamma.clone())]).unwrap();
    let k = WeightVector::new(vec![0, 1, 2]);
    let s0 = lattice_sum_value(&plane(qi(0)), &y, &k, &Options::default()).unwrap().s;
    let s1 = lattice_sum_value(&line, &[y2], &WeightVector::new(vec![1, 2]), &Options::default()).unwrap().s;
    let (s0, s1) = (s0.as_exact().unwrap().clone(), s1.as_exact().unwrap().clone());
    let reduced = s0 == s1.neg();
    let half = lattice_sum_value(&plane(q(1, 2)), &y, &k, &Options::default()).unwrap().s;
    let vanishes = half.is_zero();
    verdict(reduced && vanishes, format!("alpha = 0 equals minus the line sum: {reduced}; alpha = 1/2 gives 0: {vanishes}"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("weight (2,2,2) rank-1 values", criterion_1),
        ("higher-weight rank-1 values and zeta rows", criterion_2),
        ("nine-functional rank-2 values and zeta row", criterion_3),
        ("oracle agreement and monotone decay", criterion_4),
        ("exact division in the zero-constant A2 arrangement", criterion_5),
        ("polytope assembly equals the basis sum", criterion_6),
        ("hierarchy identity", criterion_7),
        ("kernel identities", criterion_8),
        ("invariance under permutation, phi and threads", criterion_9),
        ("zero-weight reduction", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let secs = start.elapsed().as_secs_f64();
        failed += usize::from(!v.pass);
        println!("criterion {:>2} {} [{secs:.1}s] {name}: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
