//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use mingens_cli::{exit, run};
use mingens_core::constructions::{char0_simplex, simplex_diagonal, two_var_triangle};
use mingens_core::dual_certificates::{greedy_point_search, verify_certificate, SearchOptions};
use mingens_core::generator_count::{
    degree_profile, sharp_instance, telescope_generators, verify_monomial_lower_bound, WorkingDegree,
};
use mingens_core::groebner::ideal_equal;
use mingens_core::norm_lift::{
    attempt_seed, conjecture_params, galois_attempt, instance_from_attempt, verify_norm_instance, Embedding,
    SearchStats,
};
use mingens_core::polynomials::{binomial, monomials_of_degree, monomials_up_to, parse_poly};
use mingens_core::univariate::{count_irreducibles, extremal_set, verify_univariate_minimality};
use mingens_core::{Error, FieldCtx, FieldElement, Monomial, MultiPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const SHARP_TIME_LIMIT: Duration = Duration::from_secs(1);
const SEARCH_BUDGET: u64 = 10_000;
const RANDOM_INSTANCES: usize = 20;
const PROBE_ATTEMPTS: u64 = 100;
const EXTREMAL_MAX_D: u32 = 200;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> mingens_cli::RunOutput {
    let mut argv = vec!["mingens", "--json"];
    argv.extend_from_slice(args);
    run(argv, false)
}

fn criterion_1() -> Check {
    let q = FieldCtx::rational();
    for (n, d, expect) in [(2usize, 2u32, 3usize), (2, 3, 4), (3, 2, 6), (3, 3, 10)] {
        let start = Instant::now();
        let out = cli(&["mu-bound", "-n", &n.to_string(), "-d", &d.to_string(), "--sharp"]);
        let elapsed = start.elapsed();
        ensure(out.code == exit::OK, || format!("({n},{d}) exit {}", out.code))?;
        let v = out.json();
        ensure(v["count"] == expect, || format!("({n},{d}) count {}", v["count"]))?;
        ensure(v["lower_bound_verified"] == true, || format!("({n},{d}) lower bound rejected"))?;
        ensure(elapsed < SHARP_TIME_LIMIT, || format!("({n},{d}) took {elapsed:?}"))?;
        let gens = sharp_instance(&q, n, d);
        let r = telescope_generators(&q, n, &gens, d, WorkingDegree::Auto).map_err(|e| e.to_string())?;
        ensure(r.generators.len() as u64 == binomial((n + d as usize - 1) as u64, d as u64), || {
            format!("({n},{d}) library count {}", r.generators.len())
        })?;
        ensure(verify_monomial_lower_bound(n, d, &r.generators), || format!("({n},{d}) library lower bound"))?;
    }
    Ok("sharp instances give 3, 4, 6, 10 generators".into())
}

fn random_poly(ctx: &mingens_core::Field, n: usize, monos: &[Monomial], rng: &mut ChaCha8Rng) -> MultiPoly {
    let terms = monos
        .iter()
        .filter_map(|m| {
            let keep = rng.gen_bool(0.6);
            let c = rng.gen_range(-3..=3);
            keep.then(|| (m.clone(), FieldElement::from_i64(ctx, c)))
        })
        .collect::<Vec<_>>();
    MultiPoly::from_terms(ctx, n, terms).expect("valid terms")
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fields = [FieldCtx::prime(5).unwrap(), FieldCtx::rational()];
    let mut homogeneous = 0;
    for t in 0..RANDOM_INSTANCES {
        let ctx = &fields[t % 2];
        let n = rng.gen_range(1..=3usize);
        let d = rng.gen_range(1..=4u32);
        let homog = t % 4 < 2;
        let monos = if homog { monomials_of_degree(n, d) } else { monomials_up_to(n, d) };
        let count = rng.gen_range(1..=3);
        let gens: Vec<MultiPoly> = (0..count)
            .map(|_| random_poly(ctx, n, &monos, &mut rng))
            .filter(|g| !g.is_zero())
            .collect();
        let profile = degree_profile(ctx, n, &gens, d, WorkingDegree::Auto).map_err(|e| e.to_string())?;
        for k in 0..profile.c.len() {
            let cap = binomial((n + k - 1) as u64, k as u64) as usize;
            ensure(profile.c[k] <= cap, || format!("instance {t}: c_{k} = {} > {cap}", profile.c[k]))?;
            if k > 0 {
                ensure(profile.c[k - 1] <= profile.c[k], || format!("instance {t}: c decreases at {k}"))?;
            }
        }
        if homog {
            homogeneous += 1;
            let r = telescope_generators(ctx, n, &gens, d, WorkingDegree::Auto).map_err(|e| e.to_string())?;
            let same = ideal_equal(ctx, n, &r.generators, &gens).map_err(|e| e.to_string())?;
            ensure(same, || format!("instance {t}: telescoped ideal differs"))?;
        }
    }
    Ok(format!("{RANDOM_INSTANCES} instances, {homogeneous} homogeneous confirmed by Groebner bases"))
}

fn criterion_3() -> Check {
    let dir = std::env::temp_dir().join(format!("mingens-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let budget = SEARCH_BUDGET.to_string();
    for (field, n, d, size) in [("gf:7", "2", "3", 10usize), ("gf:11", "2", "4", 15), ("q", "3", "2", 10)] {
        let out = cli(&[
            "certificate", "search", "--field", field, "-n", n, "-d", d, "--seed", "1", "--budget", &budget,
        ]);
        ensure(out.code == exit::OK, || format!("{field}: exit {} {}", out.code, out.stderr))?;
        let v = out.json();
        let cert = &v["certificate"];
        ensure(cert["points"].as_array().map(Vec::len) == Some(size), || format!("{field}: wrong size"))?;
        let one = if field == "q" { Value::from("1/1") } else { Value::from(1) };
        ensure(cert["diagonal"].as_array().unwrap().iter().all(|x| *x == one), || {
            format!("{field}: diagonal not 1")
        })?;
        let path = dir.join(format!("{field}.json"));
        std::fs::write(&path, &out.stdout).map_err(|e| e.to_string())?;
        let back = cli(&["certificate", "verify", path.to_str().unwrap()]);
        ensure(back.code == exit::OK && back.json()["verdict"]["valid"] == true, || {
            format!("{field}: re-verification failed")
        })?;
    }
    let small = cli(&["certificate", "search", "--field", "gf:2", "-n", "1", "-d", "2", "--seed", "1"]);
    ensure(small.code == exit::USAGE && small.stderr.contains("too small"), || {
        format!("F_2: exit {} {}", small.code, small.stderr)
    })?;
    let f2 = FieldCtx::prime(2).unwrap();
    let err = greedy_point_search(&f2, 1, 2, 1, SEARCH_BUDGET, &SearchOptions::default());
    ensure(matches!(err, Err(Error::FieldTooSmall { .. })), || format!("F_2: {err:?}"))?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok("F_7, F_11 and Q certificates re-verify; F_2 reports FieldTooSmall".into())
}

fn criterion_4() -> Check {
    let q = FieldCtx::rational();
    let r = char0_simplex(2, 2, &q).map_err(|e| e.to_string())?;
    let expected: Vec<MultiPoly> = [
        "X1*X2",
        "X1*(X1-1)",
        "X2*(X2-1)",
        "X1*(X1+X2-2)",
        "X2*(X1+X2-2)",
        "(X1+X2-1)*(X1+X2-2)",
    ]
    .iter()
    .map(|s| parse_poly(s, 2, &q).unwrap())
    .collect();
    let got = &r.certificate.polys;
    ensure(got.len() == expected.len() && expected.iter().all(|e| got.contains(e)), || {
        "generators differ from the six listed".into()
    })?;
    let mut checked = 0;
    for n in 1..=3usize {
        for d in 0..=4u32 {
            let r = char0_simplex(n, d, &q).map_err(|e| e.to_string())?;
            ensure(verify_certificate(&r.certificate).valid, || format!("(n={n}, d={d}) invalid"))?;
            for (p, diag) in r.certificate.points.iter().zip(&r.certificate.diagonal) {
                let di: Vec<i64> = p
                    .coords()
                    .iter()
                    .map(|c| c.as_rational().unwrap().to_integer().try_into().unwrap())
                    .collect();
                let f: i64 = di.iter().sum();
                let fact = |k: i64| (1..=k).product::<i64>();
                let sign = if (d as i64 - f) % 2 == 0 { 1 } else { -1 };
                let value = sign * fact(d as i64 - f) * di.iter().map(|&x| fact(x)).product::<i64>();
                ensure(*diag == FieldElement::from_i64(&q, value), || format!("(n={n}, d={d}) diagonal at {di:?}"))?;
                let exps: Vec<u32> = di.iter().map(|&x| x as u32).collect();
                ensure(simplex_diagonal(d, &exps) == value.into(), || format!("closed form at {di:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("six generators reproduced; {checked} diagonal values match"))
}

fn criterion_5() -> Check {
    let f11 = FieldCtx::prime(11).unwrap();
    let r = two_var_triangle(4, &FieldElement::from_i64(&f11, 1), &FieldElement::from_i64(&f11, 2))
        .map_err(|e| e.to_string())?;
    ensure(r.certificate.len() == 15, || format!("{} polynomials", r.certificate.len()))?;
    let v = verify_certificate(&r.certificate);
    ensure(v.valid, || format!("{:?}", v.first_failure))?;
    let f3 = FieldCtx::prime(3).unwrap();
    let err = two_var_triangle(2, &FieldElement::from_i64(&f3, 1), &FieldElement::from_i64(&f3, 2));
    ensure(matches!(err, Err(Error::PowerCollision { m: 2 })), || format!("F_3: {:?}", err.err()))?;
    Ok("F_11 triangle verifies with 15 polynomials; F_3 collides at m=2".into())
}

/// Multiplication of coefficient vectors (constant term first) modulo `p`.
fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

fn monic_of_degree(k: usize, q: u64) -> Vec<Vec<u64>> {
    (0..q.pow(k as u32))
        .map(|mut idx| {
            let mut v: Vec<u64> = (0..k)
                .map(|_| {
                    let c = idx % q;
                    idx /= q;
                    c
                })
                .collect();
            v.push(1);
            v
        })
        .collect()
}

/// Counts monic irreducibles of each degree 1..=max by sieving out products.
fn brute_counts(q: u64, max: usize) -> Vec<u64> {
    use std::collections::HashSet;
    let mut reducible: HashSet<Vec<u64>> = HashSet::new();
    for a in 1..max {
        for b in a..=max - a {
            for f in monic_of_degree(a, q) {
                for g in monic_of_degree(b, q) {
                    reducible.insert(poly_mul(&f, &g, q));
                }
            }
        }
    }
    (1..=max)
        .map(|k| monic_of_degree(k, q).iter().filter(|f| !reducible.contains(*f)).count() as u64)
        .collect()
}

fn criterion_6() -> Check {
    let expected_q2 = [2u64, 1, 2, 3, 6, 9, 18, 30];
    for (q, max) in [(2u64, 8usize), (3, 5)] {
        let brute = brute_counts(q, max);
        if q == 2 {
            ensure(brute == expected_q2, || format!("q=2 brute force {brute:?}"))?;
        }
        for k in 1..=max {
            let m = count_irreducibles(q, k as u32).map_err(|e| e.to_string())?;
            ensure(m == brute[k - 1].into(), || format!("q={q}, k={k}: {m} vs {}", brute[k - 1]))?;
        }
    }
    Ok("Moebius counts equal brute force for q=2 (k<=8) and q=3 (k<=5)".into())
}

fn mobius(n: u64) -> i64 {
    let (mut n, mut sign, mut p) = (n, 1, 2);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

/// Sorted irreducible degrees for `q`, enough to cover a budget of `d`.
fn sorted_degrees(q: u64, d: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut k = 1u32;
    while out.iter().skip(1).map(|&x| x as u64).sum::<u64>() <= d as u64 {
        let total: i128 = (1..=k as u64)
            .filter(|e| k as u64 % e == 0)
            .map(|e| mobius(e) as i128 * (q as i128).pow(k / e as u32))
            .sum();
        out.extend(std::iter::repeat_n(k, (total / k as i128) as usize));
        k += 1;
    }
    out
}

/// Largest `m` with `sum_{i=2}^m deg h_i <= d`, and that sum.
fn oracle_m(degrees: &[u32], d: u32) -> (usize, u32) {
    let (mut m, mut used) = (1usize, 0u32);
    while m < degrees.len() && used + degrees[m] <= d {
        used += degrees[m];
        m += 1;
    }
    (m, used)
}

fn criterion_7() -> Check {
    let small = extremal_set(2, 3).map_err(|e| e.to_string())?;
    ensure(small.m == 3 && small.max_degree == 3, || format!("(2,3): m={} max={}", small.m, small.max_degree))?;
    let hundred = extremal_set(2, 100).map_err(|e| e.to_string())?;
    ensure(hundred.m == 22, || format!("(2,100): m={}", hundred.m))?;
    let degrees = sorted_degrees(2, EXTREMAL_MAX_D);
    let mut prev = 0;
    for d in 1..=EXTREMAL_MAX_D {
        let r = extremal_set(2, d).map_err(|e| e.to_string())?;
        let (m, used) = oracle_m(&degrees, d);
        ensure(r.m == m, || format!("d={d}: m={} oracle {m}", r.m))?;
        ensure(r.max_degree == used && used <= d, || format!("d={d}: max_degree {}", r.max_degree))?;
        ensure(used + degrees[m] > d, || format!("d={d}: m+1 fits"))?;
        ensure(r.m >= prev, || format!("d={d}: m decreased"))?;
        prev = r.m;
        let v = verify_univariate_minimality(&r.generators).map_err(|e| e.to_string())?;
        ensure(v.generates_unit && v.minimal, || format!("d={d}: minimality verdict {v:?}"))?;
    }
    Ok(format!("m(3)=3, m(100)=22; oracle, maximality and minimality hold for d<={EXTREMAL_MAX_D}"))
}

fn criterion_8() -> Check {
    for d in 1..=3u32 {
        let r = extremal_set(5, d).map_err(|e| e.to_string())?;
        let expect = binomial(1 + d as u64, d as u64) as usize;
        ensure(r.m == expect && r.m == d as usize + 1, || format!("d={d}: m={}", r.m))?;
    }
    Ok("q=5, d<=3 gives d+1 generators".into())
}

fn criterion_9() -> Check {
    let params = conjecture_params(2, 8, 2).map_err(|e| e.to_string())?;
    ensure(params.k == 4 && params.d_prime == 2 && params.target_size == 6, || format!("{params:?}"))?;
    let emb = Embedding::new(2, params.k).map_err(|e| e.to_string())?;
    let (mut accepted, mut exhausted) = (0u64, 0u64);
    for a in 0..PROBE_ATTEMPTS {
        match galois_attempt(&params, &emb, attempt_seed(9, a), SEARCH_BUDGET) {
            Ok(att) if att.galois_failure.is_none() => {
                let inst = instance_from_attempt(&params, &emb, att, SearchStats::default()).map_err(|e| e.to_string())?;
                let v = verify_norm_instance(&inst).map_err(|e| e.to_string())?;
                ensure(v.valid, || format!("attempt {a}: accepted instance fails {v:?}"))?;
                accepted += 1;
            }
            Ok(_) => {}
            Err(Error::BudgetExhausted { .. }) => exhausted += 1,
            Err(e) => return Err(format!("attempt {a}: {e}")),
        }
    }
    let rate = accepted as f64 / PROBE_ATTEMPTS as f64;
    Ok(format!(
        "{accepted}/{PROBE_ATTEMPTS} accepted (rate {rate:.2}, {exhausted} exhausted), all accepted verify"
    ))
}

fn criterion_10() -> Check {
    let dir = std::env::temp_dir().join(format!("mingens-determinism-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let spec = dir.join("batch.json");
    std::fs::write(
        &spec,
        r#"{"experiments": [
            {"name": "search", "command": "certificate search",
             "fixed": {"field": "gf:5", "n": 2, "no-structured": true}, "grid": {"d": [2, 3], "seed": [1, 2]}},
            {"name": "probe", "command": "conjecture probe",
             "fixed": {"q": 2, "n": 1, "attempts": 5}, "grid": {"d": {"from": 4, "to": 6}, "seed": [3]}}
        ]}"#,
    )
    .map_err(|e| e.to_string())?;
    let commands: Vec<Vec<&str>> = vec![
        vec!["certificate", "search", "--field", "gf:7", "-n", "2", "-d", "3", "--seed", "5", "--no-structured"],
        vec!["certificate", "search", "--field", "gf:2^2", "-n", "2", "-d", "2", "--seed", "8"],
        vec!["certificate", "search", "--field", "q", "-n", "3", "-d", "2", "--seed", "1", "--no-structured"],
        vec!["conjecture", "probe", "--q", "2", "--d", "8", "-n", "2", "--seed", "4"],
        vec!["conjecture", "probe", "--q", "3", "--d", "6", "-n", "1", "--seed", "4", "--attempts", "30"],
        vec!["batch", spec.to_str().unwrap()],
    ];
    for args in &commands {
        let a = cli(args);
        let b = cli(args);
        ensure(!a.stdout.is_empty(), || format!("{args:?}: empty output, {}", a.stderr))?;
        ensure(a == b, || format!("{args:?}: outputs differ"))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} randomized commands byte-identical across reruns", commands.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("Thm 1 sharpness", criterion_1),
        ("Thm 1 profile invariants", criterion_2),
        ("Thm 2 certificates", criterion_3),
        ("char-0 simplex construction", criterion_4),
        ("two-variable triangle", criterion_5),
        ("irreducible counts", criterion_6),
        ("univariate extremal sets", criterion_7),
        ("q > d regime", criterion_8),
        ("conjecture probe", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
