//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails.

mod common;

use cactilab::braid::{alpha_gen, lambda, lambda_inverse, prb_act, sigma, w_invert, w_multiply, BraidAut, WElement};
use cactilab::cacti::{base_cactus, pontrjagin_cactus, random_cactus, rotation_cactus, Cacti, Cactus};
use cactilab::cells::enumerate_cells;
use cactilab::discs::{base_config, random_config, FramedDiscConfig, FramedDiscs};
use cactilab::freegroup::{product_word, Letter, Word};
use cactilab::loops::{
    check_algebra_associativity, omega, random_circle_loop, random_ut3_loop, CircleGroup, GroupModel, Loop,
    UniTriangular3,
};
use cactilab::operad::{
    check_operad_axioms, check_pushout_suite, check_realization_axioms, HarnessConfig, Realization, OPERAD_AXIOMS,
    REALIZATION_AXIOMS,
};
use cactilab::rational::{q, ParseMode, Q};
use cactilab::segments::{adapted_path, is_adapted, random_config as random_segments, random_point, SegmentConfig};
use cactilab::svg::{render_cactus, render_discs};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// Outcome of one criterion: pass flag and a short detail line.
type Verdict = (bool, String);

fn discs_src(rng: &mut ChaCha8Rng, n: usize) -> FramedDiscConfig {
    random_config(rng, n)
}

fn cacti_src(rng: &mut ChaCha8Rng, n: usize) -> Cactus {
    random_cactus(rng, n)
}

fn harness(seed: u64) -> HarnessConfig {
    HarnessConfig {
        trials: 100,
        max_arity: 4,
        max_total_arity: 8,
        samples: 64,
        seed,
    }
}

fn realization_suite<R: Realization>(
    name: &str,
    re: &R,
    src: fn(&mut ChaCha8Rng, usize) -> R::Elem,
    notes: &mut Vec<String>,
) -> bool {
    let mut src = src;
    let report = check_realization_axioms(re, &mut src, &harness(1));
    let all_present = REALIZATION_AXIOMS.iter().all(|a| report.entry(a).is_some());
    let enough = report.entries.iter().all(|e| e.trials >= 100);
    if !report.passed() {
        notes.push(format!("{name}: {}", report.to_json()));
    }
    report.passed() && all_present && enough
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut notes = Vec::new();
    let d = realization_suite("discs", &FramedDiscs, discs_src, &mut notes);
    let c = realization_suite("cacti", &Cacti, cacti_src, &mut notes);
    let secs = start.elapsed().as_secs_f64();
    let fast = secs < 60.0;
    (
        d && c && fast,
        format!("discs {}, cacti {}, {secs:.1}s (limit 60s) {}", ok(d), ok(c), notes.join("; ")),
    )
}

fn criterion_2() -> Verdict {
    let cfg = HarnessConfig { trials: 120, ..harness(2) };
    let mut s1 = discs_src;
    let mut s2 = cacti_src;
    let d = check_operad_axioms(&FramedDiscs, &mut s1, &cfg);
    let c = check_operad_axioms(&Cacti, &mut s2, &cfg);
    let full = |r: &cactilab::operad::AxiomReport| {
        r.passed() && OPERAD_AXIOMS.iter().all(|a| r.entry(a).is_some_and(|e| e.trials >= 100))
    };
    let pass = full(&d) && full(&c);
    let mut detail = format!("discs {}, cacti {}", ok(full(&d)), ok(full(&c)));
    if !pass {
        detail.push_str(&format!(" {} {}", d.to_json(), c.to_json()));
    }
    (pass, detail)
}

fn criterion_3() -> Verdict {
    let cfg = harness(3);
    let mut s1 = discs_src;
    let mut s2 = cacti_src;
    let d = check_pushout_suite(&FramedDiscs, &mut s1, &cfg, 50);
    let c = check_pushout_suite(&Cacti, &mut s2, &cfg, 50);
    let describe = |r: &Result<cactilab::operad::PushoutSuiteReport, _>| match r {
        Ok(r) => format!(
            "{}/{} (min coverage {}/{})",
            r.passed, r.instances, r.min_covered.0, r.min_covered.1
        ),
        Err(e) => format!("error {e}"),
    };
    let good = |r: &Result<cactilab::operad::PushoutSuiteReport, _>| {
        matches!(r, Ok(r) if r.pass() && r.instances >= 50 && r.min_covered.0 == r.min_covered.1)
    };
    (good(&d) && good(&c), format!("discs {}, cacti {}", describe(&d), describe(&c)))
}

/// `w = c x_i c⁻¹` for some `c`, by peeling cancelling end letters.
fn conjugate_of_generator(w: &Word, i: usize) -> bool {
    let ls = w.letters();
    let (mut a, mut b) = (0, ls.len());
    while b - a > 1 && ls[a].gen == ls[b - 1].gen && ls[a].inverse != ls[b - 1].inverse {
        a += 1;
        b -= 1;
    }
    b - a == 1 && ls[a] == Letter::new(i, false)
}

fn criterion_4() -> Verdict {
    let mut checked = 0;
    let mut failures: Vec<String> = Vec::new();
    let eq_on_generators = |a: &BraidAut, b: &BraidAut, n: usize| {
        (0..n).all(|k| {
            let x = Word::generator(n, k).unwrap();
            a.forward().apply(&x).unwrap() == b.forward().apply(&x).unwrap()
        })
    };
    for n in 2..=6usize {
        for i in 1..n {
            for j in 1..n {
                if i.abs_diff(j) >= 2 {
                    let (si, sj) = (sigma(i, n).unwrap(), sigma(j, n).unwrap());
                    checked += 1;
                    if !eq_on_generators(&si.compose(&sj).unwrap(), &sj.compose(&si).unwrap(), n) {
                        failures.push(format!("far commutation {i},{j} n={n}"));
                    }
                }
            }
            if i + 1 < n {
                let (a, b) = (sigma(i, n).unwrap(), sigma(i + 1, n).unwrap());
                let lhs = a.compose(&b).unwrap().compose(&a).unwrap();
                let rhs = b.compose(&a).unwrap().compose(&b).unwrap();
                checked += 1;
                if !eq_on_generators(&lhs, &rhs, n) {
                    failures.push(format!("braid relation {i} n={n}"));
                }
            }
        }
        for i in 1..=n {
            for j in i + 1..=n {
                let a = alpha_gen(i, j, n).unwrap();
                let pure = (0..n).all(|k| conjugate_of_generator(a.forward().image(k), k));
                let p = product_word(n);
                let fixes = a.forward().apply(&p).unwrap() == p;
                checked += 1;
                if !(pure && fixes && a.certificate_holds()) {
                    failures.push(format!("alpha {i}{j} n={n} not pure"));
                }
            }
        }
    }
    (failures.is_empty(), format!("{checked} identities checked; failures: {failures:?}"))
}

fn criterion_5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = Vec::new();
    let mut pairs = 0;
    let mut roundtrips = 0;
    for k in 0..100 {
        let n = 1 + k % 5;
        let len = rng.gen_range(0..=4);
        let v = random_w(&mut rng, n, len);
        let len = rng.gen_range(0..=4);
        let w = random_w(&mut rng, n, len);
        let vw = w_multiply(&v, &w).unwrap();
        let alpha_hom = vw.alpha_endo() == v.alpha_endo().compose(&w.alpha_endo()).unwrap();
        let m_hom = vw
            .twists()
            .iter()
            .zip(v.twists().iter().zip(w.twists()))
            .all(|(a, (b, c))| *a == b + c);
        let lam = lambda(&vw).unwrap() == lambda(&v).unwrap().multiply(&lambda(&w).unwrap()).unwrap();
        pairs += 1;
        if !(alpha_hom && m_hom && lam && vw.fixes_product()) {
            bad.push(format!("pair {k}"));
        }
        let len = rng.gen_range(0..=5);
        let x = random_w(&mut rng, n, len);
        roundtrips += 1;
        if lambda_inverse(&lambda(&x).unwrap()).unwrap() != x {
            bad.push(format!("roundtrip {k}"));
        }
    }
    (bad.is_empty(), format!("{pairs} pairs, {roundtrips} round trips, n <= 5; failures: {bad:?}"))
}

fn criterion_6() -> Verdict {
    let mut bad = Vec::new();
    let mut checks = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 1..=4 {
        let one = WElement::identity(n);
        let mut gens = WElement::generators(n);
        let inverses: Vec<WElement> = gens.iter().map(|g| w_invert(g).unwrap()).collect();
        gens.extend(inverses);
        let mut phis: Vec<WElement> = gens.clone();
        phis.extend((0..5).map(|_| random_w(&mut rng, n, 3)));
        for g in &gens {
            checks += 1;
            if prb_act(g, g, &one).unwrap() != one {
                bad.push(format!("(g,g).1 n={n} g={g}"));
            }
            for phi in &phis {
                checks += 1;
                let expected = w_multiply(phi, &w_invert(g).unwrap()).unwrap();
                if prb_act(g, &one, phi).unwrap() != expected {
                    bad.push(format!("(g,1).phi n={n}"));
                }
            }
        }
    }
    let (mut same, mut differ) = (0, 0);
    for k in 0..50 {
        let n = 1 + k % 4;
        let g = random_w(&mut rng, n, 3);
        let d = if k % 2 == 0 {
            // same element reached along a different word
            let h = random_w(&mut rng, n, 2);
            w_multiply(&w_multiply(&g, &h).unwrap(), &w_invert(&h).unwrap()).unwrap()
        } else {
            random_w(&mut rng, n, 3)
        };
        let fixes = prb_act(&g, &d, &WElement::identity(n)).unwrap() == WElement::identity(n);
        let equal = lambda(&g).unwrap() == lambda(&d).unwrap();
        if equal {
            same += 1;
        } else {
            differ += 1;
        }
        if fixes != equal {
            bad.push(format!("stabilizer pair {k}"));
        }
    }
    let pass = bad.is_empty() && same > 0 && differ > 0;
    (
        pass,
        format!("{checks} generator checks; stabilizer 50 pairs ({same} equal, {differ} distinct); failures: {bad:?}"),
    )
}

fn omega_suite<G: GroupModel>(group: &G, gen: fn(&mut ChaCha8Rng) -> Loop, seed: u64) -> (usize, usize, usize, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let mut pont = 0;
    for k in 0..20 {
        let (a, b) = (gen(&mut rng), gen(&mut rng));
        let out = omega(group, &pontrjagin_cactus(), &[a.clone(), b.clone()]).unwrap();
        let (f, pts) = concatenation(group, &a, &b);
        pont += 1;
        if !loops_agree(group, &out, f, pts) {
            bad.push(format!("{} pontrjagin {k}", group.name()));
        }
    }
    let mut rot = 0;
    let l = gen(&mut rng);
    for k in 0..20 {
        let s = q(k, 20) + q(rng.gen_range(0..3), 60);
        let out = omega(group, &rotation_cactus(&s), std::slice::from_ref(&l)).unwrap();
        let (f, pts) = rotated(group, &l, &s);
        rot += 1;
        if !loops_agree(group, &out, f, pts) {
            bad.push(format!("{} rotation s={s}", group.name()));
        }
    }
    let mut assoc = 0;
    for k in 0..50 {
        let n = 1 + k % 3;
        let c = random_cactus(&mut rng, n);
        let ds: Vec<Cactus> = (0..n)
            .map(|_| {
                let m = rng.gen_range(1..=2);
                random_cactus(&mut rng, m)
            })
            .collect();
        let m: usize = ds.iter().map(|d| d.arity()).sum();
        let ls: Vec<Loop> = (0..m).map(|_| gen(&mut rng)).collect();
        assoc += 1;
        if check_algebra_associativity(group, &c, &ds, &ls) != Ok(true) {
            bad.push(format!("{} associativity {k}", group.name()));
        }
    }
    (pont, rot, assoc, bad)
}

fn criterion_7() -> Verdict {
    let (p1, r1, a1, mut bad) = omega_suite(&CircleGroup, |r| random_circle_loop(r), 7);
    let (p2, r2, a2, bad2) = omega_suite(&UniTriangular3, |r| random_ut3_loop(r), 77);
    bad.extend(bad2);
    (
        bad.is_empty(),
        format!(
            "S1: {p1} pontrjagin, {r1} rotations, {a1} composites; UT3: {p2} pontrjagin, {r2} rotations, {a2} composites; failures: {bad:?}"
        ),
    )
}

fn criterion_8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = Vec::new();
    let (mut leaves, mut degree_one, mut pairs) = (0, 0, 0);
    for k in 0..100 {
        let n = 1 + k % 4;
        let cfg = random_segments(&mut rng, n);
        if !cfg.validate_connected() {
            bad.push(format!("config {k} disconnected"));
            continue;
        }
        if has_generalized_leaf(&cfg) && (n == 1 || cfg.find_leaf().is_ok()) {
            leaves += 1;
        }
        if has_degree_one_leaf(&cfg) {
            degree_one += 1;
        }
        let pts = sample_points(&cfg);
        for _ in 0..8 {
            let p = if rng.gen_bool(0.5) { pts[rng.gen_range(0..pts.len())].clone() } else { random_point(&mut rng, &cfg) };
            let q = if rng.gen_bool(0.5) { pts[rng.gen_range(0..pts.len())].clone() } else { random_point(&mut rng, &cfg) };
            pairs += 1;
            let path = match adapted_path(&cfg, &p, &q) {
                Ok(path) => path,
                Err(e) => {
                    bad.push(format!("config {k}: {e}"));
                    continue;
                }
            };
            let ends = path.eval(&cfg, &Q::from_integer(0.into())) == p && path.eval(&cfg, &Q::from_integer(1.into())) == q;
            let legs: Legs = path.pieces.iter().map(|pc| (pc.segment, pc.from.clone(), pc.to.clone())).collect();
            let all = brute_force_paths(&cfg, &p, &q, 2 * n);
            if !(is_adapted(&cfg, &path) && ends && all.len() == 1 && all[0] == legs) {
                bad.push(format!("config {k}: {} paths by search, {}", all.len(), cfg.to_json().replace('\n', "")));
            }
        }
    }
    (
        bad.is_empty() && leaves == 100,
        format!(
            "100 configs, {pairs} endpoint pairs; leaf found in {leaves}/100 (degree-one leaf in {degree_one}/100); failures: {:?}",
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn criterion_9() -> Verdict {
    let mut bad = Vec::new();
    for n in 1..=3 {
        for len in 1..=8 {
            let fast: Vec<Vec<usize>> = enumerate_cells(n, len).iter().map(|c| c.labels().to_vec()).collect();
            if fast != naive_cells(n, len) {
                bad.push(format!("n={n} len={len}"));
            }
            for c in enumerate_cells(n, len) {
                if c.dimension() != naive_dimension(c.labels()) {
                    bad.push(format!("dimension of {c}"));
                }
            }
        }
    }
    let two = enumerate_cells(2, 8);
    let dims: Vec<usize> = two.iter().map(|c| c.dimension()).collect();
    let pass = bad.is_empty() && two.len() == 4 && dims == vec![0, 0, 1, 1];
    (pass, format!("n <= 3, length <= 8; n = 2 gives {} cells with dimensions {dims:?}; failures: {bad:?}", two.len()))
}

fn criterion_10(suite_start: Instant) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bad = Vec::new();
    let mut count = 0;
    for k in 0..40 {
        let n = 1 + k % 4;
        let d = random_config(&mut rng, n);
        let s = d.to_json();
        let back = FramedDiscConfig::from_json(&s, ParseMode::Strict).unwrap();
        if back != d || back.to_json() != s {
            bad.push(format!("discs {k}"));
        }
        let c = random_cactus(&mut rng, n);
        let s = c.to_json();
        let back = Cactus::from_json(&s, ParseMode::Strict).unwrap();
        if back != c || back.to_json() != s {
            bad.push(format!("cactus {k}"));
        }
        let l = random_circle_loop(&mut rng);
        let s = l.to_json(&CircleGroup);
        let back = Loop::from_json(&CircleGroup, &s, ParseMode::Strict).unwrap();
        if back != l || back.to_json(&CircleGroup) != s {
            bad.push(format!("s1 loop {k}"));
        }
        let l = random_ut3_loop(&mut rng);
        let s = l.to_json(&UniTriangular3);
        let back = Loop::from_json(&UniTriangular3, &s, ParseMode::Strict).unwrap();
        if back != l || back.to_json(&UniTriangular3) != s {
            bad.push(format!("ut3 loop {k}"));
        }
        let g = random_segments(&mut rng, n);
        let s = g.to_json();
        let back = SegmentConfig::from_json(&s, ParseMode::Strict).unwrap();
        if back != g || back.to_json() != s {
            bad.push(format!("segments {k}"));
        }
        if render_discs(&d) != render_discs(&d.clone()) || render_cactus(&c) != render_cactus(&c.clone()) {
            bad.push(format!("render {k}"));
        }
        count += 1;
    }
    let fixed = render_discs(&base_config(3, &q(1, 8)).unwrap());
    let labelled = (1..=3).all(|k| fixed.contains(&format!(">{k}</text>")));
    if !labelled || fixed != render_discs(&base_config(3, &q(1, 8)).unwrap()) {
        bad.push("base discs render".into());
    }
    if render_cactus(&base_cactus(4)) != render_cactus(&base_cactus(4)) {
        bad.push("base cactus render".into());
    }
    let elapsed = suite_start.elapsed();
    let fast = elapsed < Duration::from_secs(300);
    (
        bad.is_empty() && fast,
        format!(
            "{count} rounds of 5 kinds round-tripped; renders stable; suite time {:.1}s (limit 300s); failures: {bad:?}",
            elapsed.as_secs_f64()
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "failed"
    }
}

fn run(n: usize, title: &str, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let (pass, detail) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(v) => v,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        }
    };
    println!(
        "criterion {n:>2} {} [{:.1}s] {title}: {detail}",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    pass
}

fn main() {
    let start = Instant::now();
    let results = [
        run(1, "realization axioms, discs and cacti", criterion_1),
        run(2, "operad laws", criterion_2),
        run(3, "pasting pushouts", criterion_3),
        run(4, "braid relations and pure generators", criterion_4),
        run(5, "W_n products and the bijection to PRB_n", criterion_5),
        run(6, "fibre action formulas and stabilizer", criterion_6),
        run(7, "loop-space action", criterion_7),
        run(8, "adapted paths", criterion_8),
        run(9, "cell enumeration", criterion_9),
        run(10, "serialization and rendering", || criterion_10(start)),
    ];
    let passed = results.iter().filter(|&&b| b).count();
    println!("acceptance: {passed}/{} criteria passed in {:.1}s", results.len(), start.elapsed().as_secs_f64());
    if passed != results.len() {
        std::process::exit(1);
    }
}
