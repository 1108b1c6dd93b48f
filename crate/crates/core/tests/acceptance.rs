//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test -p dp3 --test acceptance -- --nocapture` to see the
//! report. Every criterion has a pinned time limit; exceeding it is a failure.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use dp3::contour::phi;
use dp3::dimer::{self, KuoVariant, Method, PointOutcome, RecurrenceKind};
use dp3::formula;
use dp3::quiver::{initial_seed, Seed};
use dp3::walk::{alcove_walk, apply_tau, apply_tau_word, prism_of, Alcove, Locator, Tau, TauWord};
use dp3::{LaurentPoly, LatticePoint, SixTuple};

const ENUMERATION_BUDGET: u64 = 1_000_000;
const WINDOW_MAX_MATCHINGS: u128 = 500_000;
const TRANSFER_TERMS: u64 = 50_000_000;

struct Line {
    number: u8,
    name: &'static str,
    pass: bool,
    elapsed: Duration,
    limit: Duration,
    detail: String,
}

fn run(number: u8, name: &'static str, limit: Duration, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (ok, detail) = f();
    let elapsed = start.elapsed();
    Line { number, name, pass: ok && elapsed <= limit, elapsed, limit, detail }
}

fn lp(i: i64, j: i64, k: i64) -> LatticePoint {
    LatticePoint::new(i, j, k)
}

fn word(s: &str) -> TauWord {
    s.parse().expect("valid tau word")
}

/// Checks a worked example end to end: prism, contours, counts, and the
/// agreement of mutation, closed form and matchings at every prism point.
fn worked_example(
    w: &str,
    alcove: [(i64, i64); 3],
    prism: Option<[(i64, i64, i64); 6]>,
    contours: [[i64; 6]; 6],
    counts: [u128; 6],
    counts_seen: &mut Vec<(LatticePoint, u128)>,
) -> (bool, String) {
    let w = word(w);
    let (s1, _) = w.factor();
    let mut problems = Vec::new();
    if alcove_walk(&s1) != Alcove::from_vertices(alcove) {
        problems.push("alcove".to_string());
    }
    let points = prism_of(&w).0;
    if let Some(expect) = prism {
        if points != expect.map(|(i, j, k)| lp(i, j, k)) {
            problems.push(format!("prism {:?}", points));
        }
    }
    let cluster = apply_tau_word(&initial_seed(), &w).expect("tau words mutate at toric vertices").cluster;
    for (r, &p) in points.iter().enumerate() {
        if phi(p) != SixTuple(contours[r]) {
            problems.push(format!("contour {r}: {}", phi(p)));
        }
        let g = dimer::core_for_point(p).expect("non-self-intersecting");
        let pf = dimer::partition_function(&g, ENUMERATION_BUDGET).expect("within budget");
        counts_seen.push((p, pf.matchings));
        if pf.matchings != counts[r] {
            problems.push(format!("count {r}: {}", pf.matchings));
        }
        let c = g.covering_monomial().mul(&pf.value);
        if c != formula::cluster_variable(p) || c != cluster[r] {
            problems.push(format!("polynomial {r}"));
        }
    }
    let ok = problems.is_empty();
    let detail = if ok {
        format!("counts {:?}", counts)
    } else {
        problems.join("; ")
    };
    (ok, detail)
}

fn criterion_1() -> (bool, String) {
    let bases = prism_of(&TauWord::new(vec![])).0;
    let mut bad = Vec::new();
    for (r, &p) in bases.iter().enumerate() {
        let ok = dimer::c_value_at(p, Method::default()).map(|c| c == LaurentPoly::var(r + 1));
        if ok != Ok(true) {
            bad.push(format!("C{}", r + 1));
        }
    }
    (bad.is_empty(), if bad.is_empty() { "c(C_r) = x_r for r = 1..6".into() } else { bad.join(", ") })
}

fn criterion_4() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let words: Vec<TauWord> = (0..200)
        .map(|_| {
            let len = rng.gen_range(0..=8);
            TauWord::new((0..len).map(|_| Tau::ALL[rng.gen_range(0..5)]).collect())
        })
        .collect();
    let bad: Vec<String> = words
        .par_iter()
        .filter_map(|w| {
            let seed = apply_tau_word(&initial_seed(), w).ok()?;
            let prism = prism_of(w);
            let ok = (0..6).all(|r| seed.cluster[r] == formula::cluster_variable(prism.0[r]));
            (!ok).then(|| w.to_string())
        })
        .collect();
    (bad.is_empty(), format!("200 words, {} mismatches {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()))
}

fn criterion_5(counts_seen: &mut Vec<(LatticePoint, u128)>) -> (bool, String) {
    let points = LatticePoint::window(3, -2, 3);
    let results = dimer::grand_equivalence(&points, WINDOW_MAX_MATCHINGS, Method::Enumerate(ENUMERATION_BUDGET));
    let (mut checked, mut self_int, mut over, mut failed) = (0, 0, 0, Vec::new());
    for r in &results {
        match &r.outcome {
            PointOutcome::Checked { equal, matchings, .. } => {
                checked += 1;
                counts_seen.push((r.point, *matchings));
                if !equal {
                    failed.push(r.point.to_string());
                }
            }
            PointOutcome::SkippedSelfIntersecting(_) => self_int += 1,
            PointOutcome::SkippedOverBudget { .. } => over += 1,
            PointOutcome::Failed(e) => failed.push(format!("{} ({e})", r.point)),
        }
    }
    (
        failed.is_empty() && checked > 0,
        format!(
            "{checked} points equal, {self_int} self-intersecting skipped, {over} over {WINDOW_MAX_MATCHINGS} matchings skipped, failures {:?}",
            failed
        ),
    )
}

fn criterion_6() -> (bool, String) {
    let bad = formula::check_floor_identities(-10, 10);
    (bad.is_empty(), format!("{} counterexamples on [-10,10]", bad.len()))
}

fn apply_all(seed: &Seed, taus: &[Tau]) -> Seed {
    taus.iter().fold(seed.clone(), |s, &t| apply_tau(&s, t).expect("toric"))
}

fn criterion_7() -> (bool, String) {
    use Tau::*;
    let mut relations: Vec<(Vec<Tau>, Vec<Tau>)> = Vec::new();
    for t in Tau::ALL {
        relations.push((vec![t, t], vec![]));
    }
    for (a, b) in [(T1, T2), (T1, T3), (T2, T3)] {
        relations.push(([a, b].repeat(3), vec![]));
    }
    for a in [T1, T2, T3] {
        for b in [T4, T5] {
            relations.push((vec![a, b], vec![b, a]));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let prefixes: Vec<Vec<Tau>> = (0..50)
        .map(|_| {
            let len = rng.gen_range(0..=6);
            (0..len).map(|_| Tau::ALL[rng.gen_range(0..5)]).collect()
        })
        .collect();
    let bad: Vec<String> = prefixes
        .par_iter()
        .flat_map_iter(|prefix| {
            let base = apply_all(&initial_seed(), prefix);
            let mut out = Vec::new();
            if Tau::ALL.iter().any(|&t| apply_tau(&base, t).unwrap().quiver != base.quiver) {
                out.push(format!("{} moves the quiver", TauWord::new(prefix.clone())));
            }
            for (lhs, rhs) in &relations {
                if apply_all(&base, lhs) != apply_all(&base, rhs) {
                    out.push(format!("{} {} != {}", TauWord::new(prefix.clone()), TauWord::new(lhs.clone()), TauWord::new(rhs.clone())));
                }
            }
            out
        })
        .collect();
    (bad.is_empty(), format!("50 prefixes x {} relations, {} failures {:?}", relations.len(), bad.len(), bad.first()))
}

/// Verifies the condensation set-up at `p` with a move of `kind` whose variant
/// is `want`, taking the one with the smallest outer contour.
fn kuo_instance(p: LatticePoint, kind: RecurrenceKind, want: KuoVariant) -> Result<String, String> {
    let perimeter = |t: &SixTuple| t.0.iter().map(|x| x.abs()).sum::<i64>();
    let best = kind
        .moves()
        .into_iter()
        .filter_map(|d| dimer::build_kuo_instance(p, lp(p.i + d.0, p.j + d.1, p.k + d.2)).ok())
        .filter(|inst| inst.variant == want)
        .min_by_key(|inst| perimeter(&inst.outer));
    let Some(inst) = best else {
        return Err(format!("{p} {kind}: no {want} set-up"));
    };
    let q = inst.to;
    match dimer::verify_kuo_instance(&inst, Method::Transfer(TRANSFER_TERMS)) {
        Ok(r) if r.passed() => Ok(format!("{p}->{q}")),
        Ok(_) => Err(format!("{p}->{q} identity fails")),
        Err(e) => Err(format!("{p}->{q} {e}")),
    }
}

fn criterion_8() -> (bool, String) {
    use KuoVariant::*;
    let pinned = [
        (lp(0, 5, 3), RecurrenceKind::R1, Balanced),
        (lp(0, 5, 3), RecurrenceKind::R2, Balanced),
        (lp(-5, 3, 1), RecurrenceKind::R4, Unbalanced),
        (lp(-3, -2, 1), RecurrenceKind::R4, Unbalanced),
        (lp(1, 3, 1), RecurrenceKind::R4, Unbalanced),
        (lp(-5, 6, 6), RecurrenceKind::R2, NonAlternating),
        (lp(0, 4, 0), RecurrenceKind::R2, Monochromatic),
    ];
    let mut failures = Vec::new();
    let mut verified = [0usize; 4];
    let idx = |v: KuoVariant| KuoVariant::ALL.iter().position(|&x| x == v).unwrap();
    let results: Vec<_> = pinned.par_iter().map(|&(p, kind, want)| (want, kuo_instance(p, kind, want))).collect();
    for (want, r) in results {
        match r {
            Ok(_) => verified[idx(want)] += 1,
            Err(e) => failures.push(e),
        }
    }
    // three further small instances per variant
    let small: Vec<LatticePoint> = LatticePoint::window(2, -1, 2);
    for want in KuoVariant::ALL {
        let mut extra = 0;
        'search: for &p in &small {
            for kind in [RecurrenceKind::R4, RecurrenceKind::R1, RecurrenceKind::R2] {
                if extra == 3 {
                    break 'search;
                }
                if kuo_instance(p, kind, want).is_ok() {
                    extra += 1;
                    verified[idx(want)] += 1;
                }
            }
        }
        if extra < 3 {
            failures.push(format!("only {extra} small {want} instances"));
        }
    }
    let summary: Vec<String> = KuoVariant::ALL.iter().zip(verified).map(|(v, n)| format!("{v} {n}")).collect();
    (failures.is_empty(), format!("verified: {}; failures {:?}", summary.join(", "), failures))
}

fn criterion_9(counts_seen: &[(LatticePoint, u128)]) -> (bool, String) {
    let mut bad = Vec::new();
    for &(p, n) in counts_seen {
        let profile = formula::exponent_profile(p);
        let expect = BigInt::from(2).pow(profile.power_of_two()) * BigInt::from(3).pow(profile.power_of_three());
        let mut m = n;
        while m % 2 == 0 && m > 0 {
            m /= 2;
        }
        while m % 3 == 0 && m > 0 {
            m /= 3;
        }
        if BigInt::from(n) != expect || m != 1 {
            bad.push(p.to_string());
        }
    }
    (bad.is_empty() && !counts_seen.is_empty(), format!("{} counts, failures {:?}", counts_seen.len(), bad))
}

fn criterion_10() -> (bool, String) {
    let mut entries: BTreeSet<String> = BTreeSet::new();
    let mut polys: Vec<LaurentPoly> = Vec::new();
    let mut frontier = vec![initial_seed()];
    let mut words = 1usize;
    for _ in 0..5 {
        let mut next = Vec::new();
        for seed in &frontier {
            for v in seed.quiver.toric_vertices() {
                next.push(seed.mutate(v).expect("valid vertex"));
            }
        }
        words += next.len();
        frontier = next;
        for seed in &frontier {
            for p in &seed.cluster {
                if entries.insert(p.to_string()) {
                    polys.push(p.clone());
                }
            }
        }
    }
    let locator = Locator::new(8);
    let missing: Vec<String> = polys
        .par_iter()
        .filter(|p| locator.locate(p).is_err())
        .map(|p| p.to_string())
        .collect();
    (
        missing.is_empty(),
        format!("{words} words, {} distinct entries, {} not located", polys.len(), missing.len()),
    )
}

#[test]
fn acceptance() {
    let mut counts_seen = Vec::new();
    let mut lines = vec![run(1, "base-case calibration", Duration::from_secs(1), criterion_1)];
    lines.push(run(2, "worked example, tau word ending in t4", Duration::from_secs(60), || {
        worked_example(
            "t1 t2 t3 t1 t2 t3 t2 t1 t4",
            [(1, 3), (1, 2), (0, 3)],
            Some([(1, 3, -1), (1, 3, 0), (1, 2, 0), (1, 2, -1), (0, 3, -1), (0, 3, 0)]),
            [[2, -3, 0, 5, -6, 3], [3, -4, 1, 4, -5, 2], [2, -3, 1, 3, -4, 2], [1, -2, 0, 4, -5, 3], [2, -2, -1, 5, -5, 2], [3, -3, 0, 4, -4, 1]],
            [393216, 131072, 1024, 3072, 12288, 4096],
            &mut counts_seen,
        )
    }));
    lines.push(run(3, "worked example, tau word ending in t4 t5", Duration::from_secs(30), || {
        worked_example(
            "t1 t2 t3 t1 t3 t2 t1 t4 t5",
            [(2, 1), (1, 2), (1, 1)],
            None,
            [[0, -2, 1, 3, -5, 4], [-1, -1, 0, 4, -6, 5], [0, -1, -1, 5, -6, 4], [1, -2, 0, 4, -5, 3], [0, -1, 0, 3, -4, 3], [-1, 0, -1, 4, -5, 4]],
            [3072, 27648, 27648, 3072, 96, 864],
            &mut counts_seen,
        )
    }));
    lines.push(run(4, "mutation equals closed form", Duration::from_secs(120), criterion_4));
    lines.push(run(5, "closed form equals matchings on the window", Duration::from_secs(600), || criterion_5(&mut counts_seen)));
    lines.push(run(6, "floor identities", Duration::from_secs(1), criterion_6));
    lines.push(run(7, "Coxeter relations", Duration::from_secs(60), criterion_7));
    lines.push(run(8, "condensation suite", Duration::from_secs(300), criterion_8));
    lines.push(run(9, "power-product law", Duration::from_secs(10), || criterion_9(&counts_seen)));
    lines.push(run(10, "toric words located", Duration::from_secs(600), criterion_10));

    println!();
    for l in &lines {
        println!(
            "criterion {:>2} {} {} [{:.2?} / limit {:?}] {}",
            l.number,
            if l.pass { "PASS" } else { "FAIL" },
            l.name,
            l.elapsed,
            l.limit,
            l.detail
        );
    }
    let failed: Vec<u8> = lines.iter().filter(|l| !l.pass).map(|l| l.number).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
