//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero on failure.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use safereason::inference::{reachability_closure, Reasoner};
use safereason::matroid::{
    check_matroid_axioms, forbidden_set_matroid, parse_explicit, Element, ElementSet, Matroid,
    SetFamily,
};
use safereason::ontology::{parse_ontology, parse_sensitive, MinsetFamily};
use safereason::oracle::exhaustive_optima;
use safereason::reduction::{build_reduction, Slot};
use safereason::solver::{
    augmenting_path, intersect_two_exact, sanitize_weights, Method, SolveParams,
};

use common::*;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn worked_two_matroid() -> Outcome {
    let (g, m1) = parse_explicit(&read_fixture("worked_m1.matroid")).map_err(|e| e.to_string())?;
    let (_, m2) = parse_explicit(&read_fixture("worked_m2.matroid")).map_err(|e| e.to_string())?;
    let best = intersect_two_exact(&m1, &m2).map_err(|e| e.to_string())?;
    ensure(best.len() == 3, format!("cardinality {}", best.len()))?;
    let step =
        augmenting_path(&m1, &m2, &g.set(&["e2", "e4"])).ok_or("no augmentation from {e2,e4}")?;
    ensure(
        step.adds == g.set(&["e1", "e5"]) && step.removes == g.set(&["e4"]),
        format!(
            "adds {:?} removes {:?}",
            g.names_of(&step.adds),
            g.names_of(&step.removes)
        ),
    )?;
    Ok("cardinality 3; first step adds {e1,e5} removes {e4}".into())
}

fn worked_t123() -> Outcome {
    let ontology = parse_ontology(&read_fixture("t123.onto")).map_err(|e| e.to_string())?;
    let sensitive = parse_sensitive(&read_fixture("t123.sensitive")).map_err(|e| e.to_string())?;
    let reasoner = Reasoner::new(&ontology);
    let safe = |q: BTreeSet<usize>| reasoner.is_safe(&q, &sensitive).unwrap().is_safe();
    ensure(!safe(BTreeSet::from([0, 1, 2])), "full set reported safe")?;
    for pair in [[0, 1], [0, 2], [1, 2]] {
        ensure(
            safe(BTreeSet::from(pair)),
            format!("pair {pair:?} reported unsafe"),
        )?;
    }
    let per_fact = reasoner
        .support_sets(&sensitive, 10_000)
        .map_err(|e| e.to_string())?;
    let family = per_fact.values().next().ok_or("no sensitive fact")?;
    ensure(
        family.sets() == [BTreeSet::from([0, 1, 2])],
        format!("minsets {:?}", family.sets()),
    )?;
    for method in [Method::Greedy, Method::Augment, Method::Oracle] {
        let r = sanitize_weights(&[1.0; 3], family, method, &SolveParams::default())
            .map_err(|e| e.to_string())?;
        ensure(
            r.weight == 2.0,
            format!("{method} kept weight {}", r.weight),
        )?;
    }
    Ok("unsafe as a whole, every pair safe, single minset {r1,r2,r3}, sanitize weight 2".into())
}

fn closure_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for round in 0..100 {
        let ontology = random_atomic_ontology(&mut rng, 30, round % 2 == 1);
        let by_rules = Reasoner::new(&ontology).full_closure();
        let by_graph = reachability_closure(&ontology).map_err(|e| e.to_string())?;
        ensure(
            by_rules == by_graph,
            format!("instance {round} differs:\n{}", ontology.serialize()),
        )?;
    }
    Ok("100/100 instances equal".into())
}

struct RandomReduction {
    k: usize,
    m: usize,
    sources: Vec<Box<dyn Matroid>>,
    weights: Vec<f64>,
}

fn reduction_instances() -> Vec<RandomReduction> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    (0..50)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=4);
            RandomReduction {
                k,
                m,
                sources: (0..k).map(|_| random_source_matroid(&mut rng, m)).collect(),
                weights: (0..m).map(|_| rng.gen_range(1..=9) as f64).collect(),
            }
        })
        .collect()
}

/// Criteria 4 and 5 share the instances.
fn reduction_soundness_and_parity() -> (Outcome, Outcome) {
    let mut parity_ok = 0;
    let mut total = 0;
    let mut sound: Outcome = Ok(String::new());
    let instances = reduction_instances();
    for (n, inst) in instances.into_iter().enumerate() {
        let refs: Vec<&dyn Matroid> = inst.sources.iter().map(|b| b.as_ref()).collect();
        let w_star = brute_common_max(&refs, &inst.weights);
        let reduced = build_reduction(inst.sources, &inst.weights).unwrap();
        let (best, optima) = exhaustive_optima(&reduced.matroids(), reduced.weights()).unwrap();
        let expected = (inst.k * inst.m) as f64 * reduced.lift() + w_star;
        if sound.is_ok() && best != expected {
            sound = Err(format!("instance {n}: got {best}, expected {expected}"));
        }
        total += 1;
        let respects_parity = optima.iter().all(|sel| {
            (0..inst.m).all(|i| {
                let slots: Vec<Slot> = sel
                    .iter()
                    .map(|&e| reduced.locate(e))
                    .filter(|&(orig, _, _)| orig == i)
                    .map(|(_, _, slot)| slot)
                    .collect();
                slots.len() == inst.k && slots.windows(2).all(|w| w[0] == w[1])
            })
        });
        if respects_parity && !optima.is_empty() {
            parity_ok += 1;
        }
    }
    let sound = sound.map(|_| format!("{total}/{total} optima equal k*m*c + W*"));
    let parity = if parity_ok == total {
        Ok(format!(
            "{parity_ok}/{total} instances: every optimum is all-e or all-a per group"
        ))
    } else {
        Err(format!("only {parity_ok}/{total} instances respect parity"))
    };
    (sound, parity)
}

fn sanitize_sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let params = SolveParams::default();
    let mut gap_sum = 0.0;
    let mut exact = 0;
    for round in 0..100 {
        let n = rng.gen_range(4..=15);
        let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=10) as f64).collect();
        let family = random_family(&mut rng, n, 6);
        let run = |m| sanitize_weights(&weights, &family, m, &params).map_err(|e| e.to_string());
        let (g, a, o) = (
            run(Method::Greedy)?,
            run(Method::Augment)?,
            run(Method::Oracle)?,
        );
        ensure(
            g.weight <= a.weight && a.weight <= o.weight,
            format!(
                "round {round}: greedy {} augment {} oracle {}",
                g.weight, a.weight, o.weight
            ),
        )?;
        ensure(
            safe_and_maximal(&a.kept, n, &family),
            format!("round {round}: augment output not safe and maximal"),
        )?;
        gap_sum += o.weight - a.weight;
        exact += usize::from(o.weight == a.weight);
    }
    Ok(format!(
        "100/100 ordered, safe and maximal; augment matched oracle {exact}/100, mean gap to oracle {:.3}",
        gap_sum / 100.0
    ))
}

fn greedy_trap() -> Outcome {
    let family = MinsetFamily::new([BTreeSet::from([0, 1]), BTreeSet::from([0, 2])]);
    let weights = [5.0, 4.0, 4.0];
    let mut got = Vec::new();
    for (method, expected) in [
        (Method::Greedy, 5.0),
        (Method::Augment, 8.0),
        (Method::Oracle, 8.0),
    ] {
        let r = sanitize_weights(&weights, &family, method, &SolveParams::default())
            .map_err(|e| e.to_string())?;
        ensure(
            r.weight == expected,
            format!("{method} yields {}", r.weight),
        )?;
        got.push(format!("{method} {}", r.weight));
    }
    Ok(got.join(", "))
}

fn matroid_axioms() -> Outcome {
    let (_, m1) = parse_explicit(&read_fixture("worked_m1.matroid")).map_err(|e| e.to_string())?;
    let (_, m2) = parse_explicit(&read_fixture("worked_m2.matroid")).map_err(|e| e.to_string())?;
    ensure(check_matroid_axioms(&m1) == Ok(true), "M1 fails")?;
    ensure(check_matroid_axioms(&m2) == Ok(true), "M2 fails")?;

    let set = |ids: &[usize]| ids.iter().copied().map(Element).collect::<ElementSet>();
    let non_matroid = SetFamily::new(3, [set(&[]), set(&[0]), set(&[1]), set(&[2]), set(&[0, 1])]);
    ensure(
        check_matroid_axioms(&non_matroid) == Ok(false),
        "counterexample passes",
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut checked = 0;
    for _ in 0..40 {
        let ground = rng.gen_range(1..=12);
        let size = rng.gen_range(1..=ground);
        let forbidden: ElementSet = (0..size).map(Element).collect();
        let m = forbidden_set_matroid(&forbidden, ground).unwrap();
        ensure(
            check_matroid_axioms(&m) == Ok(true),
            format!("forbidden set on {ground} fails"),
        )?;
        checked += 1;
    }
    for (k, m) in [
        (1, 1),
        (1, 3),
        (1, 6),
        (2, 1),
        (2, 2),
        (2, 3),
        (3, 1),
        (3, 2),
    ] {
        for _ in 0..4 {
            let sources: Vec<Box<dyn Matroid>> =
                (0..k).map(|_| random_source_matroid(&mut rng, m)).collect();
            let inst = build_reduction(sources, &vec![1.0; m]).unwrap();
            for (j, mat) in inst.matroids().iter().enumerate() {
                ensure(
                    check_matroid_axioms(*mat) == Ok(true),
                    format!("reduction m{} for k={k} m={m} fails", j + 1),
                )?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "fixtures pass, counterexample fails, {checked} generated matroids pass"
    ))
}

/// `(arguments, expected exit code)` for every CLI fixture run.
fn cli_runs() -> Vec<(Vec<String>, i32)> {
    let f = |n: &str| fixture(n).display().to_string();
    let runs: Vec<(Vec<String>, i32)> = vec![
        (vec!["closure".into(), f("chain.onto")], 0),
        (vec!["closure".into(), f("t123.onto")], 0),
        (
            vec![
                "check".into(),
                f("t123.onto"),
                "--sensitive".into(),
                f("t123.sensitive"),
            ],
            1,
        ),
        (
            vec![
                "check".into(),
                f("t123.onto"),
                "--sensitive".into(),
                f("t123.sensitive"),
                "--subset".into(),
                "r1,r2".into(),
            ],
            0,
        ),
        (
            vec![
                "explain".into(),
                f("t123.onto"),
                "--sensitive".into(),
                f("t123.sensitive"),
            ],
            0,
        ),
        (
            vec![
                "explain".into(),
                f("trap.onto"),
                "--sensitive".into(),
                f("trap.sensitive"),
            ],
            0,
        ),
        (
            vec![
                "explain".into(),
                f("chain.onto"),
                "--sensitive".into(),
                f("chain.sensitive"),
                "--cap".into(),
                "0".into(),
            ],
            3,
        ),
        (vec!["closure".into(), f("malformed.onto")], 2),
        (vec!["check".into(), f("chain.onto")], 2),
    ];
    let mut runs = runs;
    for method in ["greedy", "augment", "oracle"] {
        runs.push((
            vec![
                "sanitize".into(),
                f("trap.onto"),
                "--sensitive".into(),
                f("trap.sensitive"),
                "--method".into(),
                method.into(),
            ],
            0,
        ));
        runs.push((
            vec![
                "sanitize".into(),
                f("trap.onto"),
                "--sensitive".into(),
                f("trap.sensitive"),
                "--minsets".into(),
                f("trap.minsets"),
                "--method".into(),
                method.into(),
            ],
            0,
        ));
        runs.push((
            vec![
                "sanitize".into(),
                f("t123.onto"),
                "--sensitive".into(),
                f("t123.sensitive"),
                "--method".into(),
                method.into(),
            ],
            0,
        ));
    }
    runs
}

fn cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_safereason");
    let runs = cli_runs();
    for (args, expected) in &runs {
        let first = Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        let second = Command::new(bin)
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        let code = first.status.code();
        ensure(
            code == Some(*expected),
            format!("{args:?}: exit {code:?}, expected {expected}"),
        )?;
        ensure(
            first.stdout == second.stdout
                && first.stderr == second.stderr
                && code == second.status.code(),
            format!("{args:?}: runs differ"),
        )?;
    }
    Ok(format!(
        "{} invocations byte-identical with documented exit codes",
        runs.len()
    ))
}

fn main() {
    let mut failures = 0;
    let mut report =
        |id: u32, name: &str, limit: Option<Duration>, start: Instant, outcome: Outcome| {
            let elapsed = start.elapsed();
            let outcome = match (outcome, limit) {
                (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
                (o, _) => o,
            };
            match outcome {
                Ok(detail) => println!("CRITERION {id} PASS {name} ({elapsed:.2?}): {detail}"),
                Err(detail) => {
                    failures += 1;
                    println!("CRITERION {id} FAIL {name} ({elapsed:.2?}): {detail}");
                }
            }
        };
    let secs = |s| Some(Duration::from_secs(s));

    let t = Instant::now();
    report(
        1,
        "worked two-matroid example",
        secs(1),
        t,
        worked_two_matroid(),
    );
    let t = Instant::now();
    report(2, "three-relation example", secs(1), t, worked_t123());
    let t = Instant::now();
    report(3, "closure equivalence", secs(10), t, closure_equivalence());
    let t = Instant::now();
    let (sound, parity) = reduction_soundness_and_parity();
    report(4, "reduction soundness", secs(60), t, sound);
    report(5, "parity enforcement", None, t, parity);
    let t = Instant::now();
    report(6, "sanitize sandwich", secs(60), t, sanitize_sandwich());
    let t = Instant::now();
    report(7, "greedy trap", secs(1), t, greedy_trap());
    let t = Instant::now();
    report(8, "matroid axioms", None, t, matroid_axioms());
    let t = Instant::now();
    report(9, "cli determinism", None, t, cli_determinism());

    if failures > 0 {
        println!("acceptance: {failures} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 9 criteria passed");
}
