//! Acceptance suite: one pass/fail line per criterion. Runs without the
//! libtest harness so the report prints in order.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_cap::boundary::CriticalKind;
use toric_cap::capacity::{c_k_concave, c_k_convex, c_k_general};
use toric_cap::homology::{betti, u_map_rank, Window};
use toric_cap::rational::{fmt_q, midpoint, q, qi};
use toric_cap::samples::{lshape, nice_profiles, random_concave, random_convex, random_star, random_scalars};
use toric_cap::{
    asymptotic_limit, check_nice, includes, min_spec, spectrum, Point, Threshold, ToricProfile, Q,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome { pass: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { pass: false, detail: detail.into() }
}

fn star_profiles(seed: u64, n: usize) -> Vec<ToricProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| {
        let v = rng.gen_range(3..=10);
        random_star(&mut rng, v)
    }).collect()
}

fn homology_profiles() -> Vec<ToricProfile> {
    let mut v = vec![
        ToricProfile::ellipsoid(qi(1), qi(1)).unwrap(),
        ToricProfile::ellipsoid(qi(1), qi(2)).unwrap(),
        ToricProfile::ellipsoid(q(3, 2), q(5, 7)).unwrap(),
        ToricProfile::polydisk(qi(1), qi(1)).unwrap(),
        ToricProfile::polydisk(qi(2), qi(1)).unwrap(),
        ToricProfile::polydisk(qi(1), q(13, 8)).unwrap(),
        lshape(qi(2), qi(1), qi(1), qi(2)),
        lshape(qi(3), q(1, 2), q(2, 3), q(5, 2)),
    ];
    v.extend(star_profiles(11, 3));
    v
}

/// Criterion 1: `H[δ,∞)` is `1` in odd degrees `3..21`, `0` in even `2..20`.
fn positive_part() -> Outcome {
    let profiles = homology_profiles();
    for p in &profiles {
        let w = Window::new(min_spec(p) / qi(2), Threshold::Infinite).unwrap();
        let t = match betti(p, &w, 2..=21) {
            Ok(t) => t,
            Err(e) => return fail(format!("{:?}: {e}", p.vertices())),
        };
        for n in 2..=21 {
            let expect = usize::from(n % 2 == 1);
            if t.get(n) != expect {
                return fail(format!("degree {n} has rank {} on {:?}", t.get(n), p.vertices()));
            }
        }
    }
    ok(format!("{} profiles, degrees 2..21", profiles.len()))
}

/// Criterion 2: isolating windows of nice regions see one point (corner) or
/// one circle (interior) in the entry's index.
fn isolating_windows() -> Outcome {
    let a_max = qi(4);
    let mut checked = 0;
    let mut nice_count = 0;
    for p in nice_profiles() {
        let all = spectrum(&p, &(&a_max * qi(2))).unwrap();
        let values: Vec<Q> = {
            let mut v: Vec<Q> = all.iter().map(|e| e.action.clone()).collect();
            v.dedup();
            v
        };
        // niceness only matters up to the first value past a_max, which
        // bounds the widest isolating window
        let reach = values.iter().find(|v| **v > a_max).cloned().unwrap_or_else(|| &a_max * qi(2));
        let report = check_nice(&p, &reach, 8).unwrap();
        if !report.is_nice {
            return fail(format!("sample region not nice: {:?}", report.violations));
        }
        nice_count += 1;
        for e in all.iter().filter(|e| e.action <= a_max) {
            let i = values.binary_search(&e.action).unwrap();
            let below = if i == 0 { Q::from_integer(0.into()) } else { values[i - 1].clone() };
            let lo = midpoint(&below, &e.action);
            let hi = midpoint(&e.action, &values[i + 1]);
            let w = Window::new(lo, Threshold::Finite(hi)).unwrap();
            let top = e.index + 4;
            let t = match betti(&p, &w, 0..=top) {
                Ok(t) => t,
                Err(err) => return fail(format!("{err} at action {}", fmt_q(&e.action))),
            };
            let expected: Vec<(i64, usize)> = match e.point.kind {
                CriticalKind::CornerX | CriticalKind::CornerY => vec![(e.index, 1)],
                _ => vec![(e.index, 1), (e.index + 1, 1)],
            };
            if t.support() != expected {
                return fail(format!(
                    "entry {:?} m={} action {}: got {:?}, expected {:?}",
                    e.point.kind,
                    e.m,
                    fmt_q(&e.action),
                    t.support(),
                    expected
                ));
            }
            checked += 1;
        }
    }
    ok(format!("{nice_count} nice profiles, {checked} spectrum entries up to action 4"))
}

/// Criterion 3: windows inside spectrum gaps have no homology.
fn empty_windows() -> Outcome {
    let profiles = homology_profiles();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for trial in 0..100 {
        let p = profiles.choose(&mut rng).unwrap();
        let values: Vec<Q> = {
            let mut v: Vec<Q> = spectrum(p, &qi(6)).unwrap().into_iter().map(|e| e.action).collect();
            v.dedup();
            v
        };
        let i = rng.gen_range(0..values.len());
        let lo = if i == 0 { Q::from_integer(0.into()) } else { values[i - 1].clone() };
        let hi = values[i].clone();
        let width = &hi - &lo;
        let s = q(rng.gen_range(1..50), 100);
        let t = q(rng.gen_range(51..100), 100);
        let w = Window::new(&lo + &width * s, Threshold::Finite(&lo + &width * t)).unwrap();
        match betti(p, &w, 0..=25) {
            Ok(t) if t.is_zero() => {}
            Ok(t) => return fail(format!("trial {trial}: {:?} on {:?}", t.support(), p.vertices())),
            Err(e) => return fail(format!("trial {trial}: {e}")),
        }
    }
    ok("100 gap windows, degrees 0..25")
}

/// Criterion 4: general algorithm agrees with the concave closed form.
fn concave_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 0..20 {
        let p = random_concave(&mut rng, 10);
        for k in 1..=10 {
            let g = c_k_general(&p, k).map(|r| r.value);
            let f = c_k_concave(&p, k).map(|r| r.value);
            if g.is_err() || g != f {
                return fail(format!("region {n} k={k}: general {g:?} formula {f:?} {:?}", p.vertices()));
            }
        }
    }
    ok("20 concave regions, k = 1..10")
}

/// Criterion 5: general algorithm agrees with the convex closed form.
fn convex_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 0..20 {
        let p = random_convex(&mut rng, 8);
        for k in 1..=10 {
            let g = c_k_general(&p, k).map(|r| r.value);
            let f = c_k_convex(&p, k).map(|r| r.value);
            if g.is_err() || g != f {
                return fail(format!("region {n} k={k}: general {g:?} formula {f:?} {:?}", p.vertices()));
            }
        }
    }
    ok("20 convex regions, k = 1..10")
}

fn general_values(p: &ToricProfile, k_max: i64) -> Result<Vec<Q>, String> {
    (1..=k_max).map(|k| c_k_general(p, k).map(|r| r.value).map_err(|e| e.to_string())).collect()
}

/// Criterion 6: monotonicity, scaling, spectrality and growth.
fn capacity_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let k_small = 5;
    // inclusions: a shrunken random region inside another random region
    for n in 0..20 {
        let (vo, vi) = (rng.gen_range(2..=6), rng.gen_range(2..=6));
        let outer = random_star(&mut rng, vo);
        let mut inner = random_star(&mut rng, vi);
        let shrink = q(rng.gen_range(3..=9), 10);
        while !includes(&inner, &outer) {
            inner = inner.scale(&shrink).unwrap();
        }
        let (ci, co) = match (general_values(&inner, k_small), general_values(&outer, k_small)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return fail(format!("inclusion {n}: {e}")),
        };
        if let Some(k) = ci.iter().zip(&co).position(|(a, b)| a > b) {
            return fail(format!("inclusion {n}: c_{} inner {} > outer {}", k + 1, fmt_q(&ci[k]), fmt_q(&co[k])));
        }
    }
    // scaling by random rationals
    let scalars = random_scalars(&mut rng, 10);
    let bases = star_profiles(66, 10);
    for (c, p) in scalars.iter().zip(&bases) {
        let base = general_values(p, k_small);
        let scaled = general_values(&p.scale(c).unwrap(), k_small);
        match (base, scaled) {
            (Ok(b), Ok(s)) => {
                if b.iter().zip(&s).any(|(b, s)| b * c != *s) {
                    return fail(format!("scaling by {} failed on {:?}", fmt_q(c), p.vertices()));
                }
            }
            (Err(e), _) | (_, Err(e)) => return fail(e),
        }
    }
    // spectrality and growth up to k = 12
    let mut growth_profiles = vec![
        ToricProfile::ellipsoid(qi(1), qi(1)).unwrap(),
        ToricProfile::polydisk(qi(1), q(13, 8)).unwrap(),
        lshape(qi(2), qi(1), qi(1), qi(2)),
    ];
    growth_profiles.extend(star_profiles(67, 3));
    for p in &growth_profiles {
        let vals = match general_values(p, 12) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        for (k, v) in vals.iter().enumerate() {
            if !spectrum(p, v).unwrap().iter().any(|e| e.action == *v) {
                return fail(format!("c_{} = {} not in the spectrum", k + 1, fmt_q(v)));
            }
        }
        if vals.windows(2).any(|w| w[0] > w[1]) {
            return fail(format!("sequence decreases on {:?}", p.vertices()));
        }
    }
    ok("20 inclusions, 10 scalings (k ≤ 5); spectrality and growth on 6 regions (k ≤ 12)")
}

/// Criterion 7: the shift-sum map has rank one.
fn u_map() -> Outcome {
    let mut profiles = vec![
        ToricProfile::ellipsoid(qi(1), qi(1)).unwrap(),
        ToricProfile::polydisk(qi(2), qi(1)).unwrap(),
        lshape(qi(2), qi(1), qi(1), qi(2)),
    ];
    profiles.extend(star_profiles(7, 2));
    for p in &profiles {
        let d = min_spec(p) / qi(2);
        for k in 1..=8 {
            match u_map_rank(p, &d, k) {
                Ok(1) => {}
                other => return fail(format!("k={k}: {other:?} on {:?}", p.vertices())),
            }
        }
    }
    ok("5 profiles, k = 1..8")
}

/// Criterion 8: `k·a ≤ c_k ≤ (k+1)·a′` for comparison regions and the
/// ratio close to the limit.
fn asymptotics() -> Outcome {
    struct Case {
        name: &'static str,
        values: Vec<Q>,
        a: Q,
        a_prime: Q,
        limit: Q,
    }
    let ball = ToricProfile::ellipsoid(qi(1), qi(1)).unwrap();
    let poly = ToricProfile::polydisk(qi(2), qi(1)).unwrap();
    let l = lshape(qi(2), qi(1), qi(1), qi(2));
    let inner = ToricProfile::polydisk(qi(1), qi(1)).unwrap();
    let outer = ToricProfile::new(vec![
        Point::new(qi(9), qi(0)),
        Point::new(q(9, 8), q(9, 8)),
        Point::new(qi(0), qi(9)),
    ])
    .unwrap();
    if !includes(&inner, &l) || !includes(&l, &outer) || !includes(&poly, &outer) {
        return fail("comparison regions are not nested");
    }
    if !inner.classify().weakly_convex || !outer.classify().concave {
        return fail("comparison regions have the wrong class");
    }
    let k_formula = 200;
    let k_general = 30;
    let lim_inner = asymptotic_limit(&inner);
    let lim_outer = asymptotic_limit(&outer);
    let cases = vec![
        Case {
            name: "ellipsoid(1,1)",
            values: (1..=k_formula).map(|k| c_k_concave(&ball, k).unwrap().value).collect(),
            a: asymptotic_limit(&ball),
            a_prime: asymptotic_limit(&ball),
            limit: asymptotic_limit(&ball),
        },
        Case {
            name: "polydisk(2,1)",
            values: (1..=k_formula).map(|k| c_k_convex(&poly, k).unwrap().value).collect(),
            a: asymptotic_limit(&poly),
            a_prime: lim_outer.clone(),
            limit: asymptotic_limit(&poly),
        },
        Case {
            name: "L-shape",
            values: match general_values(&l, k_general) {
                Ok(v) => v,
                Err(e) => return fail(e),
            },
            a: lim_inner.clone(),
            a_prime: lim_outer.clone(),
            limit: asymptotic_limit(&l),
        },
    ];
    let mut notes = Vec::new();
    for c in &cases {
        if &c.a_prime - &c.a > q(1, 8) {
            return fail(format!("{}: bracket wider than 1/8", c.name));
        }
        for (i, v) in c.values.iter().enumerate() {
            let k = qi(i as i64 + 1);
            if *v < &k * &c.a || *v > (&k + qi(1)) * &c.a_prime {
                return fail(format!("{}: c_{} = {} outside bracket", c.name, i + 1, fmt_q(v)));
            }
        }
        // the closed forms of the comparison regions bracket the L-shape too
        let k = c.values.len() as i64;
        let ratio = c.values.last().unwrap() / qi(k);
        let rel = ((&ratio - &c.limit) / &c.limit).abs();
        if rel >= q(1, 10) {
            return fail(format!("{}: c_k/k = {} at k = {k}", c.name, fmt_q(&ratio)));
        }
        notes.push(format!("{} k={k} err={:.4}", c.name, toric_cap::rational::to_f64(&rel)));
    }
    for k in 1..=k_general {
        let lo = c_k_convex(&inner, k).unwrap().value;
        let hi = c_k_concave(&outer, k).unwrap().value;
        let v = &cases[2].values[k as usize - 1];
        if *v < lo || *v > hi {
            return fail(format!("L-shape c_{k} outside the comparison capacities"));
        }
    }
    ok(notes.join("; "))
}

/// Criterion 9: `c_k(B) = ⌈k/2⌉` by both methods.
fn ball() -> Outcome {
    let b = ToricProfile::ellipsoid(qi(1), qi(1)).unwrap();
    for k in 1..=12i64 {
        // brute force over j of min(j, k+1−j)
        let oracle = (1..=k).map(|j| j.min(k + 1 - j)).max().unwrap();
        if oracle != (k + 1) / 2 {
            return fail("oracle disagrees with ⌈k/2⌉");
        }
        let g = c_k_general(&b, k).map(|r| r.value);
        let f = c_k_concave(&b, k).map(|r| r.value);
        if g != Ok(qi(oracle)) || f != Ok(qi(oracle)) {
            return fail(format!("k={k}: general {g:?} formula {f:?}"));
        }
    }
    ok("k = 1..12")
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 9] = [
        (1, "positive-part homology", positive_part, Some(Duration::from_secs(10))),
        (2, "isolating window homology", isolating_windows, Some(Duration::from_secs(30))),
        (3, "empty-window vanishing", empty_windows, None),
        (4, "concave oracle equivalence", concave_oracle, Some(Duration::from_secs(60))),
        (5, "convex oracle equivalence", convex_oracle, Some(Duration::from_secs(60))),
        (6, "capacity properties", capacity_properties, None),
        (7, "u-map rank", u_map, None),
        (8, "asymptotics", asymptotics, Some(Duration::from_secs(120))),
        (9, "ball capacities", ball, None),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (n, name, run, limit) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let mut out = run();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > limit {
                out.pass = false;
                out.detail = format!("{} (over the {}s budget)", out.detail, limit.as_secs());
            }
        }
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {n} [{status}] {name}: {} ({:.2}s)", out.detail, elapsed.as_secs_f64());
        if !out.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
