//! Acceptance bundle. Run with
//! `cargo test -p engel-cli --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use engel_core::catalog::{builtin_group, builtin_lie_finite, builtin_lie_q, SMALL_GROUPS};
use engel_core::field::{Field, Rationals};
use engel_core::group::{
    direct_product, engel_automorphism_test, engel_like_set, identity_holds, parse_cycles, semidirect_product,
    Automorphism, Strategy, DEFAULT_ORDER_CAP,
};
use engel_core::lie::{engel_test, identity_check, sequence_values, EngelKind, EngelOptions, EngelOutcome, IdentityOutcome};
use engel_core::suites::{run_suite, SuiteOptions};
use engel_core::words::{check_autocorrect, check_correct, SequenceId};
use engel_core::Verdict;
use serde_json::Value;

type Outcome = Result<String, String>;

/// Criteria whose literal statement is known to be false. They still run and
/// print FAIL, but do not turn the suite red.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[(
    2,
    "the h-coordinate of w_n(e_+,e_-) satisfies h_1 = 1, h_(n+1) = -4 h_n^2, \
     so h_n = -(4^(2^(n-1) - 1)) for n >= 2; it equals (-4)^(n-1) only for n <= 2. \
     A geometric closed form would need a linear recursion, but w is quadratic in w_n. \
     Every w_n is still nonzero.",
)];

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {t:?}, limit {limit:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_list(report: &engel_core::Report) -> Vec<Value> {
    report.details["checks"].as_array().cloned().unwrap_or_default()
}

fn c1() -> Outcome {
    let start = Instant::now();
    let q = Rationals;
    let l = builtin_lie_q("sl2").map_err(|e| e.to_string())?;
    let (ep, em) = (l.basis_vector(0), l.basis_vector(1));
    let v = sequence_values(&l, &SequenceId::VLie.spec(), &ep, &em, None, 12);
    for n in 2..=12 {
        let want = l.scale(&q.from_i64((-2i64).pow(n as u32 - 1)), &ep);
        ensure(v[n - 1] == want, || format!("v_{n} = {}", l.format_vector(&v[n - 1])))?;
    }
    within(start, Duration::from_millis(100), "closed form")?;
    Ok(format!("v_12 = {} in {:?}", l.format_vector(&v[11]), start.elapsed()))
}

fn c2() -> Outcome {
    let q = Rationals;
    let l = builtin_lie_q("sl2").map_err(|e| e.to_string())?;
    let (ep, em) = (l.basis_vector(0), l.basis_vector(1));
    let w = sequence_values(&l, &SequenceId::WLie.spec(), &ep, &em, None, 8);
    let h: Vec<String> = w.iter().map(|v| q.format(&v[2])).collect();
    for n in 1..=8 {
        let want = q.from_i64((-4i64).pow(n as u32 - 1));
        ensure(w[n - 1][2] == want, || format!("h-coordinate of w_{n} is {}, expected (-4)^{} (got h = {h:?})", h[n - 1], n - 1))?;
    }
    Ok(format!("h = {h:?}"))
}

fn c3() -> Outcome {
    let start = Instant::now();
    let opts = EngelOptions::default();
    let sl2 = builtin_lie_q("sl2").map_err(|e| e.to_string())?;
    let (ep, em) = (sl2.basis_vector(0), sl2.basis_vector(1));
    for (model, n) in [("b2", 3), ("heis3", 4)] {
        let l = builtin_lie_q(model).map_err(|e| e.to_string())?;
        let (o, _) = identity_check(&l, &SequenceId::VLie.spec(), n, &opts).map_err(|e| e.to_string())?;
        ensure(o == IdentityOutcome::Holds, || format!("{model}: v_{n} is not identically zero"))?;
    }
    for n in 2..=4 {
        let (o, _) = identity_check(&sl2, &SequenceId::VLie.spec(), n, &opts).map_err(|e| e.to_string())?;
        match o {
            IdentityOutcome::Fails { x, y } if x == ep && y == em => {}
            other => return Err(format!("sl2 v_{n}: {other:?}")),
        }
    }
    within(start, Duration::from_secs(5), "symbolic identities")?;
    Ok(format!("b2 v_3 = 0, heis3 v_4 = 0, sl2 v_2..v_4 fail at (e_+, e_-); {:?}", start.elapsed()))
}

fn sampled_suite(name: &str, limit: Duration) -> Outcome {
    let start = Instant::now();
    let r = run_suite(name, &SuiteOptions::default()).map_err(|e| e.to_string())?;
    let checks = check_list(&r);
    ensure(checks.len() == 6, || format!("{} algebras checked", checks.len()))?;
    let mut agreements = 0;
    let mut undetermined = 0;
    for c in &checks {
        let d = &c["data"];
        ensure(d["samples"] == 100, || format!("{}: samples {}", c["check"], d["samples"]))?;
        let disc = d["discrepancies"].as_array().map_or(usize::MAX, Vec::len);
        ensure(disc == 0, || format!("{}: {disc} discrepancies", c["check"]))?;
        agreements += d["decided_agreements"].as_u64().unwrap_or(0);
        undetermined += d["undetermined"].as_u64().unwrap_or(0);
    }
    ensure(r.verdict == Verdict::Holds, || format!("verdict {}", r.verdict))?;
    within(start, limit, name)?;
    Ok(format!("600 samples, 0 discrepancies ({agreements} decided, {undetermined} undetermined non-members) in {:?}", start.elapsed()))
}

fn c4() -> Outcome {
    sampled_suite("thm-rad", Duration::from_secs(60))
}

fn c5() -> Outcome {
    sampled_suite("thm-cl", Duration::from_secs(60))
}

fn c6() -> Outcome {
    let j = builtin_lie_finite("jacobson", 5).map_err(|e| e.to_string())?;
    ensure(j.dim() == 7, || format!("dim {}", j.dim()))?;
    ensure(j.is_solvable(), || "jacobson:5 is not solvable".into())?;
    let x = j.parse_vector("f + e_1").map_err(|e| e.to_string())?;
    let y = j.parse_vector("e + e_2").map_err(|e| e.to_string())?;
    let v = sequence_values(&j, &SequenceId::VLie.spec(), &x, &y, None, 20);
    if let Some(n) = v.iter().position(|u| j.is_zero_vector(u)) {
        return Err(format!("v_{} = 0", n + 1));
    }
    ensure(v[1] == y, || format!("v_2 = {}", j.format_vector(&v[1])))?;
    ensure(v[2] == j.basis_vector(j.basis_index("e_3").unwrap()), || format!("v_3 = {}", j.format_vector(&v[2])))?;
    Ok("solvable, v_1..v_20 nonzero, v_2 = e + e_2, v_3 = e_3".into())
}

fn c7() -> Outcome {
    let start = Instant::now();
    let w = builtin_lie_finite("witt", 7).map_err(|e| e.to_string())?;
    ensure(w.dim() == 7, || format!("dim {}", w.dim()))?;
    ensure(w.is_perfect() && !w.is_solvable(), || "witt:7 is not perfect".into())?;
    let e5 = w.parse_vector("e_5").map_err(|e| e.to_string())?;
    let v = engel_test(&w, &e5, EngelKind::W, &EngelOptions::default()).map_err(|e| e.to_string())?;
    ensure(matches!(v.outcome, EngelOutcome::Engel { n } if n <= 2), || format!("{:?}", v.outcome))?;
    ensure(v.iterations == 823_543, || format!("{} vectors scanned", v.iterations))?;
    within(start, Duration::from_secs(120), "witt scan")?;
    Ok(format!("perfect; w_2(x, e_5) = 0 for all 823543 x in {:?}", start.elapsed()))
}

fn c8() -> Outcome {
    let start = Instant::now();
    ensure(SMALL_GROUPS.len() >= 15, || format!("only {} groups", SMALL_GROUPS.len()))?;
    for must in ["sym:4", "sym:3*sym:3", "sl2:3", "dihedral:4", "alt:5", "sym:5"] {
        ensure(SMALL_GROUPS.contains(&must), || format!("{must} missing from the slice"))?;
    }
    let e = SequenceId::EGroup.spec();
    for name in SMALL_GROUPS {
        let g = builtin_group(name).map_err(|e| e.to_string())?;
        ensure(g.order() <= 1000, || format!("{name} has order {}", g.order()))?;
        let (set, _) = engel_like_set(&g, &e).map_err(|e| e.to_string())?;
        ensure(set == g.fitting_subgroup(), || format!("{name}: Engel set differs from Fitting subgroup"))?;
    }
    within(start, Duration::from_secs(60), "baer")?;
    Ok(format!("{} groups, all equal, in {:?}", SMALL_GROUPS.len(), start.elapsed()))
}

fn c9() -> Outcome {
    let s = SequenceId::SBww.spec();
    let mut notes = Vec::new();
    for (name, order, limit) in [
        ("alt:5", 60, 60),
        ("psl2:4", 60, 60),
        ("psl2:5", 60, 60),
        ("psl2:7", 168, 60),
        ("psl3:3", 5616, 60),
        ("sz:8", 29120, 600),
    ] {
        let start = Instant::now();
        let g = builtin_group(name).map_err(|e| e.to_string())?;
        ensure(g.order() == order, || format!("|{name}| = {}", g.order()))?;
        let (r, report) = identity_holds(&g, &s, 10, Strategy::ClassReps).map_err(|e| e.to_string())?;
        ensure(r.least.is_none() && r.witness.is_some(), || format!("{name}: {r:?}"))?;
        ensure(report.witness.is_some(), || format!("{name}: no witness in report"))?;
        within(start, Duration::from_secs(limit), name)?;
        notes.push(format!("{name} {:?}", start.elapsed()));
    }
    Ok(notes.join(", "))
}

fn c10() -> Outcome {
    let s = SequenceId::SBww.spec();
    let mut notes = Vec::new();
    for (name, least) in [("sym:3", Some(3)), ("sym:4", Some(4)), ("sl2:3", Some(4)), ("dihedral:6", Some(3)), ("alt:5", None)] {
        let g = builtin_group(name).map_err(|e| e.to_string())?;
        let (r, _) = identity_holds(&g, &s, 10, Strategy::ClassReps).map_err(|e| e.to_string())?;
        ensure(r.least == least, || format!("{name}: least n {:?}, expected {least:?}", r.least))?;
        notes.push(format!("{name}={}", least.map_or("none".to_string(), |n| n.to_string())));
    }
    Ok(notes.join(" "))
}

fn c11() -> Outcome {
    let r = run_suite("conjecture-radical", &SuiteOptions::default()).map_err(|e| e.to_string())?;
    let checks = check_list(&r);
    ensure(checks.len() == 2 * SMALL_GROUPS.len(), || format!("{} containment checks", checks.len()))?;
    if let Some(bad) = checks.iter().find(|c| c["pass"] != true) {
        return Err(format!("containment fails: {}", bad["check"]));
    }
    ensure(matches!(r.verdict, Verdict::ExperimentalPass | Verdict::ExperimentalFail), || format!("verdict {}", r.verdict))?;
    let eq = r.details["experimental_equality"].as_array().cloned().unwrap_or_default();
    ensure(eq.len() == checks.len(), || "equality not reported for every case".into())?;
    let unequal: Vec<String> = eq
        .iter()
        .filter(|e| e["equal"] != true)
        .map(|e| format!("{} {} |R|={} |set|={}", e["group"].as_str().unwrap_or(""), e["seq"].as_str().unwrap_or(""), e["radical"], e["set"]))
        .collect();
    Ok(format!("containment on {} cases; {} ({} unequal: {})", checks.len(), r.verdict, unequal.len(), unequal.join("; ")))
}

fn c12() -> Outcome {
    let cap = DEFAULT_ORDER_CAP;
    let a5 = builtin_group("alt:5").map_err(|e| e.to_string())?;
    let perm = parse_cycles("(1 2)", 5).map_err(|e| e.to_string())?;
    let sigma = Automorphism::permutation_conjugation(&a5, &perm).map_err(|e| e.to_string())?;
    let hol = semidirect_product(&a5, std::slice::from_ref(&sigma), cap).map_err(|e| e.to_string())?;
    let s5 = builtin_group("sym:5").map_err(|e| e.to_string())?;
    ensure(hol.invariant() == s5.invariant(), || "holomorph does not match sym:5".into())?;
    let r = engel_automorphism_test(&a5, &sigma, &SequenceId::EGroup.spec(), cap).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::NotEngel, || format!("(1 2): {}", r.verdict))?;
    ensure(r.details["steps_outside_g"] == 0, || "step left the G factor".into())?;

    let sq = direct_product(&a5, &a5, cap).map_err(|e| e.to_string())?;
    let swap = Automorphism::swap(&sq).map_err(|e| e.to_string())?;
    let r = engel_automorphism_test(&sq, &swap, &SequenceId::WGroup.spec(), cap).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::NotEngel && r.witness.is_some(), || format!("swap: {}", r.verdict))?;
    ensure(r.details["steps_outside_g"] == 0, || "step left the G factor".into())?;
    Ok(format!("(1 2) not e-Engel; swap not w-group-Engel, witness {}", r.witness.unwrap_or(Value::Null)))
}

fn c13() -> Outcome {
    let mut notes = Vec::new();
    for id in SequenceId::GROUP {
        let spec = id.spec();
        let c = check_correct(&spec, 10).map_err(|e| format!("{id}: {e}"))?;
        let n0 = c.details["n0"].as_u64().unwrap_or(0);
        ensure((1..=2).contains(&n0), || format!("{id}: n0 = {n0}"))?;
        let a = check_autocorrect(&spec, 10).map_err(|e| e.to_string())?;
        if id == SequenceId::UBggkpp {
            let first = a.witness.as_ref().map(|w| w["n"].clone());
            ensure(a.verdict != Verdict::Holds && first == Some(1.into()), || format!("{id}: {} {first:?}", a.verdict))?;
        } else {
            ensure(a.verdict == Verdict::Holds, || format!("{id} not autocorrect"))?;
        }
        notes.push(format!("{id} n0={n0}"));
    }
    Ok(notes.join(", "))
}

fn c14() -> Outcome {
    let run = |threads: &str, suite: &str| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_engel"))
            .args(["--threads", threads, "--no-timing", "--format", "json", "verify", suite])
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || format!("{suite} exited with {:?}", out.status.code()))?;
        Ok(out.stdout)
    };
    for suite in ["thm-rad", "charp-counterexamples", "minimal-simple"] {
        let one = run("1", suite)?;
        let eight = run("8", suite)?;
        ensure(!one.is_empty() && one == eight, || format!("{suite}: reports differ"))?;
    }
    Ok("thm-rad, charp-counterexamples, minimal-simple byte-identical at 1 and 8 threads".into())
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Outcome); 14] = [
        (1, c1),
        (2, c2),
        (3, c3),
        (4, c4),
        (5, c5),
        (6, c6),
        (7, c7),
        (8, c8),
        (9, c9),
        (10, c10),
        (11, c11),
        (12, c12),
        (13, c13),
        (14, c14),
    ];
    let mut unexpected = Vec::new();
    for (id, f) in criteria {
        let known = KNOWN_UNATTAINABLE.iter().find(|(k, _)| *k == id);
        match (f(), known) {
            (Ok(msg), None) => println!("criterion {id:>2}: PASS  {msg}"),
            (Ok(msg), Some(_)) => {
                println!("criterion {id:>2}: PASS  {msg} (listed as unattainable; remove it from the list)");
                unexpected.push(id);
            }
            (Err(msg), Some((_, why))) => println!("criterion {id:>2}: FAIL  {msg}\n               known: {why}"),
            (Err(msg), None) => {
                println!("criterion {id:>2}: FAIL  {msg}");
                unexpected.push(id);
            }
        }
    }
    assert!(unexpected.is_empty(), "unexpected outcome for criteria {unexpected:?}");
}
