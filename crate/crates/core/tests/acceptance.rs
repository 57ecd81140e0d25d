//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fpair_core::constructions::{predict_fpair, FacetSelect, OpStep, Recipe, Seed};
use fpair_core::geometry::format_rational;
use fpair_core::lattice::FPair;
use fpair_core::oracle::{self, refute_simple_pair_19_57, Status};
use fpair_core::planner::{invariant_checks, table, write_bundle, CertifyError, ConstructError, Planner};

const TABLE_TIME_LIMIT: Duration = Duration::from_secs(1);
const CERTIFY_TIME_LIMIT: Duration = Duration::from_secs(15 * 60);
const RANDOM_RECIPES: usize = 50;
const RNG_SEED: u64 = 0x5eed_f1f0;

/// Every polytope checked for Euler, degree, Balinski and Kalai during the run.
#[derive(Default)]
struct InvariantLog {
    checked: usize,
    failures: Vec<String>,
}

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome {
            pass,
            summary: summary.into(),
            details: Vec::new(),
        }
    }
}

fn set(pairs: impl IntoIterator<Item = (usize, usize)>) -> BTreeSet<(usize, usize)> {
    pairs.into_iter().collect()
}

fn compare_sets(got: &BTreeSet<(usize, usize)>, want: &BTreeSet<(usize, usize)>) -> Vec<String> {
    let mut out = Vec::new();
    let extra: Vec<_> = got.difference(want).collect();
    let missing: Vec<_> = want.difference(got).collect();
    if !extra.is_empty() {
        out.push(format!("unexpected: {extra:?}"));
    }
    if !missing.is_empty() {
        out.push(format!("missing: {missing:?}"));
    }
    out
}

const E6_SPORADIC_LITERAL: [(usize, usize); 17] = [
    (8, 24),
    (9, 27),
    (9, 29),
    (10, 30),
    (10, 32),
    (10, 34),
    (11, 33),
    (12, 38),
    (12, 39),
    (13, 39),
    (14, 42),
    (14, 44),
    (15, 47),
    (18, 54),
    (19, 57),
    (17, 53),
    (20, 62),
];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let t = table(6, 25, None).expect("d = 6 table");
    let elapsed = start.elapsed();
    let got = set(t.infeasible());
    let mut want = set((7..=25).map(|f0| (f0, 3 * f0 + 1)));
    want.extend(E6_SPORADIC_LITERAL);
    want.insert((11, 36));
    let mut details = compare_sets(&got, &want);
    let fast = elapsed < TABLE_TIME_LIMIT;
    if !fast {
        details.push(format!("took {elapsed:?}"));
    }
    let pass = got == want && fast;
    Outcome {
        pass,
        summary: format!(
            "{} infeasible pairs for d = 6, f0 ≤ 25, expected {}, in {elapsed:?}",
            got.len(),
            want.len()
        ),
        details,
    }
}

fn criterion_2() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;

    let t5 = table(5, 15, None).expect("d = 5 table");
    let mut want5 = set((7..=15).map(|f0| (f0, 5 * f0 / 2 + 1)));
    want5.extend([(8, 20), (9, 25), (13, 35)]);
    let got5 = set(t5.infeasible());
    for line in compare_sets(&got5, &want5) {
        details.push(format!("d = 5 {line}"));
        pass = false;
    }

    let t4 = table(4, 12, None).expect("d = 4 table");
    let want4 = set([(6, 12), (7, 14), (8, 17), (10, 20)]);
    let got4 = set(t4.infeasible());
    for line in compare_sets(&got4, &want4) {
        details.push(format!("d = 4 {line}"));
        pass = false;
    }

    let t3 = table(3, 12, None).expect("d = 3 table");
    let band3: usize = (4..=12usize).map(|f0| 3 * f0 - 6 + 1 - (3 * f0).div_ceil(2)).sum();
    let feasible3 = t3.pairs_with(Status::Feasible).len();
    if !t3.infeasible().is_empty() || feasible3 != band3 {
        details.push(format!(
            "d = 3: {feasible3} feasible of {band3} band pairs, {} infeasible",
            t3.infeasible().len()
        ));
        pass = false;
    }
    Outcome {
        pass,
        summary: format!(
            "d = 5: {} exclusions, d = 4: {} exclusions, d = 3: {feasible3} band pairs all feasible",
            got5.len(),
            got4.len()
        ),
        details,
    }
}

fn record_checks(log: &mut InvariantLog, label: &str, l: &fpair_core::lattice::FaceLattice) {
    log.checked += 1;
    for (check, ok) in invariant_checks(l) {
        if !ok {
            log.failures.push(format!("{label}: {check}"));
        }
    }
}

/// Plans and certifies `target`; certification checks every stage.
fn certify_pair(planner: &mut Planner, target: FPair, log: &mut InvariantLog) -> Result<String, String> {
    match planner.construct(target) {
        Ok(w) => {
            log.checked += w.trace.len() - 1;
            record_checks(log, &target.to_string(), &w.lattice);
            Ok(w.recipe.to_string())
        }
        Err(ConstructError::Certify(CertifyError::CheckFailed { check, stage, fpair })) => {
            log.checked += 1;
            log.failures.push(format!("{target} stage {stage} {fpair}: {check}"));
            Err(format!("{check} failed"))
        }
        Err(e) => Err(e.to_string()),
    }
}

const REQUIRED: [(usize, usize); 17] = [
    (7, 21),
    (8, 27),
    (13, 42),
    (14, 48),
    (12, 36),
    (15, 45),
    (16, 48),
    (15, 49),
    (15, 50),
    (17, 54),
    (17, 57),
    (19, 59),
    (23, 69),
    (24, 72),
    (27, 83),
    (35, 107),
    (13, 43),
];
const REPORT_ONLY: [(usize, usize); 3] = [(22, 68), (25, 77), (30, 92)];

fn criterion_3(planner: &mut Planner, log: &mut InvariantLog) -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut failed = Vec::new();
    for (f0, f1) in REQUIRED {
        match certify_pair(planner, FPair::new(6, f0, f1), log) {
            Ok(r) => details.push(format!("({f0}, {f1}) certified: {r}")),
            Err(e) => {
                details.push(format!("({f0}, {f1}) NOT certified: {e}"));
                failed.push((f0, f1));
            }
        }
    }
    for (f0, f1) in REPORT_ONLY {
        match certify_pair(planner, FPair::new(6, f0, f1), log) {
            Ok(r) => details.push(format!("({f0}, {f1}) report-only, certified: {r}")),
            Err(e) => details.push(format!("({f0}, {f1}) report-only, not certified: {e}")),
        }
    }
    let elapsed = start.elapsed();
    let pass = failed.is_empty() && elapsed < CERTIFY_TIME_LIMIT;
    Outcome {
        pass,
        summary: format!(
            "{}/{} required targets certified in {elapsed:?}; uncertified: {failed:?}",
            REQUIRED.len() - failed.len(),
            REQUIRED.len()
        ),
        details,
    }
}

fn criterion_4(planner: &mut Planner, log: &mut InvariantLog) -> Outcome {
    let mut details = Vec::new();
    let mut total = 0;
    let mut failed = Vec::new();
    let mut law_violations = 0;
    for (d, f0_max) in [(4, 12), (5, 13), (6, 14)] {
        for f0 in d + 1..=f0_max {
            let (lower, upper) = oracle::band(d, f0);
            for f1 in lower..=upper {
                if oracle::feasible(d, f0, f1).unwrap().status != Status::Feasible {
                    continue;
                }
                total += 1;
                let target = FPair::new(d, f0, f1);
                if let Err(e) = certify_pair(planner, target, log) {
                    if e.contains("law violation") {
                        law_violations += 1;
                    }
                    details.push(format!("{target}: {}", e.lines().next().unwrap_or_default()));
                    failed.push(target);
                }
            }
        }
    }
    Outcome {
        pass: failed.is_empty() && law_violations == 0,
        summary: format!(
            "{}/{total} feasible pairs certified, {law_violations} law violations",
            total - failed.len()
        ),
        details,
    }
}

fn random_seed(rng: &mut ChaCha8Rng, d: usize) -> Seed {
    match rng.random_range(0..4) {
        0 => Seed::Simplex { dim: d },
        1 => Seed::Cyclic {
            n: d + rng.random_range(2..=4),
            dim: d,
        },
        2 => {
            let a = rng.random_range(1..d);
            Seed::SimplexProduct { dims: vec![a, d - a] }
        }
        _ => Seed::Cube { dim: d },
    }
}

fn random_step(rng: &mut ChaCha8Rng, d: usize) -> OpStep {
    match rng.random_range(0..6) {
        0 => OpStep::PyramidOverFacet {
            select: FacetSelect::FirstSimplex,
        },
        1 | 2 => OpStep::TruncateSimpleVertex {
            select: Default::default(),
        },
        3 => OpStep::TruncateSimpleEdge {
            select: Default::default(),
        },
        4 => OpStep::PolarDual,
        _ => OpStep::ConnectedSum {
            other: Box::new(Recipe::seed_only(Seed::Cyclic { n: d + 2, dim: d })),
            select: FacetSelect::FirstSimplex,
            other_select: FacetSelect::FirstSimplex,
        },
    }
}

/// A recipe ending in dimension 4..=6, possibly lifted by one pyramid.
fn random_recipe(rng: &mut ChaCha8Rng) -> Recipe {
    let d = rng.random_range(4..=6);
    let lift = d > 4 && rng.random_bool(0.3);
    let base = if lift { d - 1 } else { d };
    let mut r = Recipe::seed_only(random_seed(rng, base));
    let k = rng.random_range(1..=3);
    for i in 0..k {
        if lift && i == k / 2 {
            r = r.then(OpStep::Pyramid);
        }
        r = r.then(random_step(rng, r.dimension));
    }
    r
}

fn criterion_5(log: &mut InvariantLog) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
    let mut details = Vec::new();
    let (mut executed, mut law_backed, mut attempts) = (0, 0, 0);
    let mut mismatches = 0;
    while law_backed < RANDOM_RECIPES && attempts < 5000 {
        attempts += 1;
        let r = random_recipe(&mut rng);
        let Ok(pred) = predict_fpair(&r) else { continue };
        let Ok(stages) = r.execute_traced() else { continue };
        executed += 1;
        for (i, s) in stages.iter().enumerate() {
            record_checks(log, &format!("{r} stage {i}"), &s.lattice);
        }
        let got = stages.last().expect("nonempty").lattice.fpair();
        if pred.recount_required {
            continue;
        }
        law_backed += 1;
        if pred.fpair != Some(got) {
            mismatches += 1;
            details.push(format!("{r}: predicted {:?}, recomputed {got}", pred.fpair));
        }
    }
    Outcome {
        pass: law_backed >= RANDOM_RECIPES && mismatches == 0,
        summary: format!(
            "{law_backed} law-backed of {executed} executed recipes, {mismatches} mismatches (tolerance 0)"
        ),
        details,
    }
}

fn criterion_6() -> Outcome {
    let rep = refute_simple_pair_19_57();
    let values: Vec<String> = rep.cases.iter().map(|c| format_rational(&c.f1)).collect();
    let pass = rep.barnette_range == [8, 9]
        && values == ["240/7", "261/7"]
        && rep.cases.iter().all(|c| !c.integral)
        && rep.refuted;
    Outcome::new(
        pass,
        format!(
            "f0 ∈ {:?}, forced f1 = {values:?}, refuted = {}",
            rep.barnette_range, rep.refuted
        ),
    )
}

fn criterion_7(log: &InvariantLog) -> Outcome {
    Outcome {
        pass: log.failures.is_empty() && log.checked > 0,
        summary: format!("{} polytopes checked, {} failures", log.checked, log.failures.len()),
        details: log.failures.clone(),
    }
}

fn criterion_8() -> Outcome {
    let mut feasible = BTreeSet::new();
    let mut region = BTreeSet::new();
    for f0 in 8..=12usize {
        let (lower, upper) = oracle::band(7, f0);
        for f1 in lower..=upper {
            let eps = 2 * f1 as i64 - 7 * f0 as i64;
            if eps > 3 * 7 - 10 {
                region.insert((f0, f1));
            }
            if oracle::feasible(7, f0, f1).unwrap().status == Status::Feasible {
                feasible.insert((f0, f1));
            }
        }
    }
    Outcome {
        pass: feasible == region && !region.is_empty(),
        summary: format!(
            "{} feasible pairs, {} in the conjectured region",
            feasible.len(),
            region.len()
        ),
        details: compare_sets(&feasible, &region),
    }
}

fn criterion_9(log: &mut InvariantLog) -> Outcome {
    let target = FPair::new(6, 14, 48);
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        let w = Planner::default().construct(target).expect("(14, 48) constructs");
        record_checks(log, "determinism bundle", &w.lattice);
        write_bundle(dir.path(), &w).unwrap();
    }
    let files = ["witness.json", "recipe.json", "certificate.json"];
    let differing: Vec<&str> = files
        .iter()
        .copied()
        .filter(|f| std::fs::read(dirs[0].path().join(f)).unwrap() != std::fs::read(dirs[1].path().join(f)).unwrap())
        .collect();
    Outcome::new(
        differing.is_empty(),
        format!("two bundles for {target}, differing files: {differing:?}"),
    )
}

fn main() {
    let mut log = InvariantLog::default();
    let mut planner = Planner::default();
    let c1 = criterion_1();
    let c2 = criterion_2();
    let c3 = criterion_3(&mut planner, &mut log);
    let c4 = criterion_4(&mut planner, &mut log);
    let c5 = criterion_5(&mut log);
    let c6 = criterion_6();
    let c8 = criterion_8();
    let c9 = criterion_9(&mut log);
    // the invariant log is complete only after every construction above
    let c7 = criterion_7(&log);
    let outcomes = [c1, c2, c3, c4, c5, c6, c7, c8, c9];

    let mut failures = 0;
    for (i, o) in outcomes.iter().enumerate() {
        println!(
            "criterion {}: {} - {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.summary
        );
        for d in &o.details {
            println!("    {d}");
        }
        failures += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        outcomes.len() - failures,
        outcomes.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
