//! Acceptance suite: one test per criterion, each printing a PASS or FAIL
//! line. Run with `cargo test -p tilt-forge --test acceptance -- --nocapture`.

#[path = "../../core/tests/support/strategies.rs"]
mod strategies;

use std::path::PathBuf;
use std::process::Command;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;

use tilt_forge_core::findim::{build_algebra, truncate};
use tilt_forge_core::fixtures::{final_example, silting_example};
use tilt_forge_core::homological::{detect_levels, ext_table, quadratic_dual, relation_span};
use tilt_forge_core::mutation::{
    coxeter_check, gram_as_usize, left_dual, left_mutate, levelled_mutate_left, levelled_mutate_right,
    projective_collection, reversed_level_order, right_mutate, shifted_simples_collection, EulerCollection,
};
use tilt_forge_core::presentation::{parse, serialize};
use tilt_forge_core::skewgroup::folded_quiver;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn report(n: u8, name: &str, outcome: Outcome) {
    match &outcome {
        Ok(()) => println!("criterion {n} PASS: {name}"),
        Err(e) => println!("criterion {n} FAIL: {name}: {e}"),
    }
    if let Err(e) = outcome {
        panic!("criterion {n} failed: {e}");
    }
}

fn grading(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tilt-forge"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn cli_json(args: &[&str]) -> Result<(i32, Value), String> {
    let (code, out) = cli(args)?;
    let v = serde_json::from_str(&out).map_err(|e| format!("{args:?}: {e}"))?;
    Ok((code, v))
}

fn len(v: &Value) -> usize {
    v.as_array().map_or(0, Vec::len)
}

fn counts(v: &Value) -> (usize, usize, usize) {
    (len(&v["vertices"]), len(&v["arrows"]), len(&v["relations"]))
}

fn silting_args(cmd: &'static str) -> Vec<String> {
    vec![cmd.into(), "--r".into(), "5".into(), "--weights".into(), "1,2,2".into(), "--grading".into(), grading("silting_1_5_122.grading")]
}

fn final_args(cmd: &'static str) -> Vec<String> {
    vec![cmd.into(), "--r".into(), "4".into(), "--weights".into(), "1,1,3,3".into(), "--grading".into(), grading("final_1_4_1133.grading")]
}

fn args<'a>(base: &'a [String], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().map(String::as_str).chain(extra.iter().copied()).collect()
}

fn criterion_1() -> Outcome {
    let base = silting_args("mckay");
    let (_, a) = cli_json(&args(&base, &["--format", "json"]))?;
    ensure(counts(&a) == (5, 15, 15), format!("McKay quiver {:?}", counts(&a)))?;
    let base = silting_args("nabla");
    let (_, n) = cli_json(&args(&base, &["--format", "json"]))?;
    ensure((len(&n["vertices"]), len(&n["arrows"])) == (10, 20), format!("nabla {:?}", counts(&n)))?;
    let base = silting_args("tilt");
    let (code, r) = cli_json(&args(&base, &["--route", "A", "--format", "json"]))?;
    ensure(code == 0, format!("route A exit {code}"))?;
    let p = &r["presentation"];
    ensure((len(&p["vertices"]), len(&p["arrows"])) == (8, 14), format!("route A output {:?}", counts(p)))
}

fn criterion_2() -> Outcome {
    let base = final_args("mckay");
    let (_, a) = cli_json(&args(&base, &["--format", "json"]))?;
    ensure((len(&a["vertices"]), len(&a["arrows"])) == (4, 16), format!("McKay quiver {:?}", counts(&a)))?;
    let base = final_args("nabla");
    let (_, n) = cli_json(&args(&base, &["--format", "json"]))?;
    ensure((len(&n["vertices"]), len(&n["arrows"])) == (8, 24), format!("nabla {:?}", counts(&n)))?;

    let base = final_args("tilt");
    let (code, r) = cli_json(&args(&base, &["--route", "B", "--format", "json"]))?;
    ensure(code == 0, format!("route B exit {code}"))?;
    let h = &r["hypotheses"];
    ensure(h["ell"] == 2, "ell")?;
    ensure(h["nabla"]["levelled"] == true && h["nabla"]["top_level"] == 3, "levels")?;
    ensure(h["nabla"]["koszul"]["verdict"] == "koszul", "Koszul check")?;

    let p = &r["presentation"];
    ensure((len(&p["vertices"]), len(&p["arrows"])) == (6, 14), format!("route B output {:?}", counts(p)))?;
    let mut composites: Vec<(String, usize)> = p["arrows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|a| a["composite"] == true)
        .map(|a| (a["label"].as_str().unwrap_or_default().to_string(), len(&a["representative"])))
        .collect();
    composites.sort();
    ensure(
        composites == [("x1x2".to_string(), 2), ("x3x4".to_string(), 2)],
        format!("composite arrows {composites:?}"),
    )?;

    let shapes = &r["cross_checks"]["relation_shapes"];
    ensure(shapes["vanish_in_exterior_algebra"] == true, "relations do not vanish in the exterior algebra")?;
    let plain = p["relations"].as_array().unwrap().iter().filter(|s| !s.as_str().unwrap().contains('*')).count();
    let literal = shapes["anticommutators"].as_u64().unwrap() + shapes["squares"].as_u64().unwrap();
    ensure(literal as usize == plain, format!("{literal} of {plain} quadratic relations are x_i x_j + x_j x_i"))
}

fn criterion_3() -> Outcome {
    let base = silting_args("check");
    let (_, s) = cli_json(&args(&base, &["--format", "json"]))?;
    let base = final_args("check");
    let (_, f) = cli_json(&args(&base, &["--format", "json"]))?;
    for (name, r) in [("silting", &s), ("final", &f)] {
        let h = &r["hypotheses"];
        ensure(h["sl_check"] == true && h["isolated_check"] == true, format!("{name}: sl/isolated"))?;
    }
    let h = &s["hypotheses"];
    ensure(h["e_a0_eprime_zero"] == true && h["eprime_a0_e_zero"] == true, "silting: degree-0 blocks")?;
    ensure(f["hypotheses"]["e_a0_e_is_k"] == true, "final: eA0e = k")
}

fn criterion_4() -> Outcome {
    let (g, pres) = final_example();
    let (nabla, _) = folded_quiver(&g, &pres).map_err(|e| e.to_string())?;
    let tab = build_algebra(&nabla, 16).map_err(|e| e.to_string())?;
    let lv = detect_levels(&nabla).map_err(|_| "not levelled")?;

    let dual = quadratic_dual(&nabla).map_err(|e| e.to_string())?;
    let cartan = build_algebra(&dual, 16).map_err(|e| e.to_string())?.cartan_matrix();
    let order = reversed_level_order(&lv);
    let reindexed: Vec<Vec<usize>> = order.iter().map(|&a| order.iter().map(|&b| cartan[a][b]).collect()).collect();

    let p = projective_collection(&tab, &lv).map_err(|e| e.to_string())?;
    let gram = gram_as_usize(&left_dual(&p).map_err(|e| e.to_string())?.chi()).ok_or("negative Gram entry")?;
    let ext = ext_table(&tab, 6);
    let (_, simples) = shifted_simples_collection(&tab, &lv, &ext).map_err(|e| e.to_string())?;
    ensure(reindexed == gram, "Cartan of the dual differs from the left dual Gram")?;
    ensure(gram == simples, "left dual Gram differs from the shifted simples Ext Gram")
}

fn deterministic(cases: u32) -> TestRunner {
    let config = Config {
        failure_persistence: None,
        ..Config::with_cases(cases)
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn err<T: std::fmt::Debug>(e: proptest::test_runner::TestError<T>) -> String {
    format!("{e:?}")
}

fn criterion_5() -> Outcome {
    deterministic(128)
        .run(&strategies::quadratic_presentation(), |pres| {
            let back = quadratic_dual(&quadratic_dual(&pres).unwrap()).unwrap();
            prop_assert_eq!(relation_span(&back), relation_span(&pres));
            Ok(())
        })
        .map_err(|e| format!("double dual: {}", err(e)))?;

    deterministic(128)
        .run(&(strategies::exceptional_collection(), 0usize..16), |(c, pick)| {
            if c.len() < 2 {
                return Ok(());
            }
            let i = pick % (c.len() - 1) + 1;
            let back = right_mutate(&left_mutate(&c, i).unwrap(), i - 1).unwrap();
            prop_assert_eq!(back.classes(), c.classes());
            prop_assert_eq!(back.chi(), c.chi());
            Ok(())
        })
        .map_err(|e| format!("mutation inverse: {}", err(e)))?;

    deterministic(128)
        .run(&(strategies::levelled_collection(), prop::collection::vec((any::<bool>(), 0u32..8), 1..10)), |(c, steps)| {
            let mut c: EulerCollection = c;
            for (right, pick) in steps {
                let top = c.top_level().unwrap();
                if top == 0 {
                    break;
                }
                c = if right {
                    levelled_mutate_right(&c, pick % top).unwrap()
                } else {
                    levelled_mutate_left(&c, pick % top + 1).unwrap()
                };
                prop_assert!(c.check_levelled().is_ok() && c.check_exceptional().is_ok());
            }
            Ok(())
        })
        .map_err(|e| format!("levelled invariant: {}", err(e)))?;

    deterministic(128)
        .run(&strategies::any_presentation(), |pres| {
            let text = serialize(&pres);
            prop_assert_eq!(&parse(&text).unwrap(), &pres);
            Ok(())
        })
        .map_err(|e| format!("text roundtrip: {}", err(e)))?;

    // closed loop on the fixtures: the silting nabla A, the final nabla A
    // and its dual, each away from the induced idempotent
    let (g, pres) = silting_example();
    let (silting, _) = folded_quiver(&g, &pres).map_err(|e| e.to_string())?;
    let (g, pres) = final_example();
    let (fin, _) = folded_quiver(&g, &pres).map_err(|e| e.to_string())?;
    let fin_dual = quadratic_dual(&fin).map_err(|e| e.to_string())?;
    for (name, alg, r) in [("silting", &silting, 5), ("final", &fin, 4), ("final dual", &fin_dual, 4)] {
        let tab = build_algebra(alg, 20).map_err(|e| e.to_string())?;
        let kept: Vec<usize> = (0..tab.num_vertices()).filter(|v| v % r != 0).collect();
        let corner = truncate(&tab, &kept).map_err(|e| e.to_string())?;
        let rebuilt = build_algebra(&corner, 20).map_err(|e| e.to_string())?.dimension();
        ensure(rebuilt == tab.corner_dimension(&kept), format!("{name}: closed loop {rebuilt}"))?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let kronecker = EulerCollection::from_gram(&["P_s", "P_t"], &[vec![1, 2], vec![0, 1]], Some(vec![0, 1]))
        .map_err(|e| e.to_string())?;
    ensure(coxeter_check(&kronecker).map_err(|e| e.to_string())?.holds, "Kronecker")?;

    let (g, pres) = final_example();
    let (nabla, _) = folded_quiver(&g, &pres).map_err(|e| e.to_string())?;
    let tab = build_algebra(&nabla, 16).map_err(|e| e.to_string())?;
    let lv = detect_levels(&nabla).map_err(|_| "not levelled")?;
    let p = projective_collection(&tab, &lv).map_err(|e| e.to_string())?;
    let v = coxeter_check(&p).map_err(|e| e.to_string())?;
    ensure(v.holds && v.objects == 8, format!("final example failures at {:?}", v.failures))
}

fn criterion_7() -> Outcome {
    let base = final_args("tilt");
    let (code, r) = cli_json(&args(&base, &["--e", "0,1,2,3", "--format", "json"]))?;
    ensure(code == 0 && r["presentation"].is_null(), "e = all vertices")?;
    ensure(r["route"]["message"] == "zero algebra; singularity category trivial", "e = all vertices message")?;

    let (code, r) = cli_json(&["tilt", "--r", "1", "--weights", "0,0", "--format", "json"])?;
    ensure(code == 0 && r["route"]["message"] == "zero algebra; singularity category trivial", "plane")?;

    let (code, r) = cli_json(&["tilt", "--r", "1", "--weights", "0", "--route", "A", "--format", "json"])?;
    ensure(r["hypotheses"]["ell"] == 1, "trivial group ell")?;
    ensure(code == 0 && r["route"]["message"] == "zero algebra; singularity category trivial", "trivial group")
}

#[test]
fn criterion_1_silting_example() {
    report(1, "silting example counts", criterion_1());
}

#[test]
fn criterion_2_final_example() {
    report(2, "final example counts, Koszulity and anticommutator output", criterion_2());
}

#[test]
fn criterion_3_hypotheses() {
    report(3, "hypothesis verdicts", criterion_3());
}

#[test]
fn criterion_4_triple_oracle() {
    report(4, "dual Cartan = left dual Gram = shifted simples Ext", criterion_4());
}

#[test]
fn criterion_5_properties() {
    report(5, "property suite", criterion_5());
}

#[test]
fn criterion_6_coxeter() {
    report(6, "Coxeter relation", criterion_6());
}

#[test]
fn criterion_7_degenerate_cases() {
    report(7, "smooth and trivial cases", criterion_7());
}
