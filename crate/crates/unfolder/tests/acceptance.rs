//! Acceptance checks. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use unfolder::apps::{abstract_fixpoint, build_edt, coverage, AbstractSpec, DebugSession, Verdict};
use unfolder::engine::{term_lt, Interpretation};
use unfolder::{fixpoint, parse_expr, Config, Run};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same(got: BTreeSet<String>, want: BTreeSet<String>) -> Outcome {
    ensure(got == want, || {
        let missing: Vec<_> = want.difference(&got).collect();
        let extra: Vec<_> = got.difference(&want).collect();
        format!("missing {missing:?}, unexpected {extra:?}")
    })
}

fn defined(i: &Interpretation) -> BTreeSet<String> {
    i.bot_free().map(clause).collect()
}

fn first_trace(i: &Interpretation, line: &str) -> Result<String, String> {
    let f = find(i, line).ok_or_else(|| format!("no fact {line}"))?;
    f.traces.first().map(labels).ok_or_else(|| format!("{line} has no trace"))
}

fn add_listing() -> Outcome {
    let run = fixpoint(&fixture("add"), 2, &Config::default());
    same(defined(&run.interps[1]), set(&["add(Zero,b) = b"]))?;
    same(defined(&run.interps[2]), set(&["add(Zero,b) = b", "add(Suc(Zero),b) = Suc(b)"]))
}

fn filter_listing() -> Outcome {
    let run = fixpoint(&fixture("filter"), 2, &Config::default());
    let i2 = &run.interps[2];
    ensure(i2.len() == 7, || format!("{} facts", i2.len()))?;
    same(
        listing(i2),
        set(&[
            "ite(True,b,c) = b",
            "ite(False,b,c) = c",
            "filter(b,Nil) = Nil",
            "filter(b,Cons(c,Nil)) | snd(match(True,b@[c])) = Cons(c,Nil)",
            "filter(b,Cons(c,Cons(d,e))) | snd(match(True,b@[c])) = Cons(c,Bot)",
            "filter(b,Cons(c,Nil)) | snd(match(False,b@[c])) = Nil",
            "filter(b,Cons(c,Cons(d,e))) | snd(match(False,b@[c])) = Bot",
        ]),
    )
}

const SENIOR_BASE: [&str; 9] = [
    "ite(True,b,c) = b",
    "ite(False,b,c) = c",
    "map(b,Nil) = Nil",
    "senior(b) | snd(match(True,b>64)) = True",
    "senior(b) | snd(match(False,b>64)) = False",
    "map(b,Cons(c,Nil)) = Cons(b@[c],Nil)",
    "gen(b) = Cons(b,Cons(b+1,Cons(b+1+1,Bot)))",
    "map(b,Cons(c,Cons(d,Nil))) = Cons(b@[c],Cons(b@[d],Nil))",
    "map(b,Cons(c,Cons(d,Cons(e,f)))) = Cons(b@[c],Cons(b@[d],Cons(b@[e],Bot)))",
];

/// The third senior listing with comparisons deferred, one entry per line.
/// Four lines repeat another up to the order of guard conjuncts.
const SENIOR_MAIN50: [&str; 13] = [
    "main50 | snd(match(True,64>64)), snd(match(True,65>64)) = Cons(True,Cons(True,Bot))",
    "main50 | snd(match(True,64>64)), snd(match(False,65>64)) = Cons(True,Cons(False,Bot))",
    "main50 | snd(match(True,64>64)) = Cons(True,Cons(Bot,Bot))",
    "main50 | snd(match(False,64>64)), snd(match(True,65>64)) = Cons(False,Cons(True,Bot))",
    "main50 | snd(match(False,64>64)), snd(match(False,65>64)) = Cons(False,Cons(False,Bot))",
    "main50 | snd(match(False,64>64)) = Cons(False,Cons(Bot,Bot))",
    "main50 | snd(match(True,65>64)) = Cons(Bot,Cons(True,Bot))",
    "main50 | snd(match(False,65>64)) = Cons(Bot,Cons(False,Bot))",
    "main50 = Cons(Bot,Cons(Bot,Bot))",
    "main50 | snd(match(True,65>64)), snd(match(True,64>64)) = Cons(True,Cons(True,Bot))",
    "main50 | snd(match(True,65>64)), snd(match(False,64>64)) = Cons(False,Cons(True,Bot))",
    "main50 | snd(match(False,65>64)), snd(match(True,64>64)) = Cons(True,Cons(False,Bot))",
    "main50 | snd(match(False,65>64)), snd(match(False,64>64)) = Cons(False,Cons(False,Bot))",
];

/// A listing line with its guard conjuncts sorted.
fn sort_guard(line: &str) -> String {
    let Some((head, rest)) = line.split_once(" | ") else { return line.to_string() };
    let (guard, body) = rest.rsplit_once(" = ").unwrap();
    let mut conj: Vec<&str> = guard.split(", ").collect();
    conj.sort();
    format!("{head} | {} = {body}", conj.join(", "))
}

fn senior_walkthrough() -> Outcome {
    let p = fixture("senior");
    let run = fixpoint(&p, 2, &Config::default());
    let (i1, i2) = (&run.interps[1], &run.interps[2]);
    ensure(i1.len() == 5, || format!("I1 has {} facts", i1.len()))?;
    same(bot_listing(i1), set(&["senior(b) = Bot", "main50 = Bot"]))?;
    ensure(i2.len() == 9, || format!("I2 has {} facts", i2.len()))?;
    ensure(find(i2, "main50 = Cons(Bot,Bot)").is_some(), || "I2 lacks main50 = Cons(Bot,Bot)".into())?;
    for line in &SENIOR_BASE[3..5] {
        ensure(find(i2, line).is_some(), || format!("I2 lacks {line}"))?;
    }
    let deferred = fixpoint(&p, 3, &Config::deferred());
    let got: BTreeSet<String> = deferred.interps[3].facts.iter().map(|f| sort_guard(&clause(f))).collect();
    let want: BTreeSet<String> = SENIOR_BASE.iter().chain(&SENIOR_MAIN50).map(|l| sort_guard(l)).collect();
    ensure(want.len() == SENIOR_BASE.len() + SENIOR_MAIN50.len() - 4, || "listing has unexpected repeats".into())?;
    same(got, want)
}

fn laziness() -> Outcome {
    let run = fixpoint(&fixture("ones"), 5, &Config::default());
    ensure(find(&run.interps[2], "main = 1").is_some(), || "I2 lacks main = 1".into())?;
    let ones = |n: usize| run.interps[n].facts.iter().find(|f| f.name == "ones").map(|f| f.body.clone());
    for n in 1..5 {
        let (a, b) = (ones(n).ok_or("no ones fact")?, ones(n + 1).ok_or("no ones fact")?);
        ensure(term_lt(&a, &b), || format!("ones does not grow from I{n} to I{}: {a} / {b}", n + 1))?;
    }
    ensure(!run.converged, || "reported as converged".into())
}

fn equivalence_check() -> Outcome {
    let r = equivalence::check(2024, 40);
    ensure(r.checked >= 200, || format!("only {} goals checked ({} skipped)", r.checked, r.skipped))?;
    ensure(r.failures.is_empty(), || format!("{} of {} disagree: {:?}", r.failures.len(), r.checked, r.failures))
}

fn no_overlaps() -> Outcome {
    let (examined, bad) = sequences::overlaps();
    ensure(examined >= 50, || format!("only {examined} interpretations"))?;
    ensure(bad.is_empty(), || format!("overlapping facts: {bad:?}"))?;
    let unstable = sequences::unstable_cleans();
    ensure(unstable.is_empty(), || format!("clean not idempotent on {unstable:?}"))
}

fn traces() -> Outcome {
    let run = fixpoint(&fixture("traces"), 4, &Config::default());
    let i4 = &run.interps[4];
    for (line, want) in [
        ("h(b) = b+3", "H"),
        ("g(b) = b+2+3", "G,H"),
        ("f(b) = b+1+2+3", "F,G,H"),
        ("goal = 10", "Goal,F,G,H"),
        ("goal2 = 20", "Goal2,F2,F,G,H,F,G,H"),
        ("goal3 = K(6)", "Goal3,J"),
    ] {
        let got = first_trace(i4, line)?;
        ensure(got == want, || format!("{line}: <{got}>"))?;
    }
    Ok(())
}

fn debugging() -> Outcome {
    let p = fixture("addb");
    let goal = parse_expr(&p, "main24").map_err(|e| e.to_string())?;
    let edt = build_edt(&p, &goal, 8, &Config::default()).map_err(|e| e.to_string())?;
    ensure(edt.len() == 3, || format!("tree has {} nodes", edt.len()))?;
    let mut s = DebugSession::new(edt);
    for v in [Verdict::Wrong, Verdict::Wrong, Verdict::Correct] {
        let q = s.next_question().ok_or("ran out of questions")?;
        s.answer(q, v).map_err(|e| e.to_string())?;
    }
    ensure(s.blamed() == Some("A3"), || format!("blamed {:?}", s.blamed()))
}

fn rule_coverage() -> Outcome {
    let r = coverage(&fixture("rev"), 3, &Config::default(), false);
    for f in ["rev", "append"] {
        let pct = r.steps[0].per_function[f];
        ensure(pct == 50.0, || format!("{f} at I1: {pct}%"))?;
    }
    let s3 = &r.steps[2];
    ensure(s3.per_function.values().all(|p| *p == 100.0) && s3.total == 100.0, || format!("I3: {:?}", s3.per_function))?;
    let run = fixpoint(&fixture("rev"), 3, &Config::default());
    let got = first_trace(&run.interps[3], "rev(Cons(b,Cons(c,Nil))) = Cons(c,Cons(b,Nil))")?;
    ensure(got == "R2,R2,R1,A1,A2,A1", || format!("rev trace <{got}>"))?;
    let chosen: BTreeSet<&String> = r.facts.iter().filter(|f| r.test_set.contains(&f.head)).flat_map(|f| &f.rules).collect();
    ensure(chosen.len() == 4, || format!("test set {:?} covers {chosen:?}", r.test_set))
}

fn abstract_run(fx: &str) -> Result<Run, String> {
    let p = fixture(fx);
    abstract_fixpoint(&p, &AbstractSpec::from_program(&p), 6, &Config::default()).map_err(|e| e.to_string())
}

fn abstraction() -> Outcome {
    let add = abstract_run("parity")?;
    ensure(add.converged && add.steps() == 2, || format!("add# converged {} after {} steps", add.converged, add.steps()))?;
    same(
        listing(add.last()),
        set(&["add#(Even#,b) = b", "Suc_f#(Even#) = Odd#", "Suc_f#(Odd#) = Even#", "add#(Odd#,Odd#) = Even#", "add#(Odd#,Even#) = Odd#"]),
    )?;
    let addr = abstract_run("parity_acc")?;
    ensure(addr.converged, || "addr# did not converge".into())?;
    ensure(find(addr.last(), "addr#(Odd#,b) = Suc#(b)").is_some(), || "addr# lacks addr#(Odd#,b) = Suc#(b)".into())?;
    let leq = abstract_run("demand")?;
    ensure(leq.converged && leq.steps() == 2, || format!("leq# converged {} after {} steps", leq.converged, leq.steps()))?;
    same(
        listing(leq.last()),
        set(&[
            "leq#(Z#,FreeNat#) = DontCareBool#",
            "leq#(S#(FreeNat#),Z#) = DontCareBool#",
            "leq#(S#(FreeNat#),S#(FreeNat#)) = DontCareBool#",
            "z_f# = Z#",
            "s_f#(FreeNat#) = S#(FreeNat#)",
            "s_f#(Z#) = S#(FreeNat#)",
            "s_f#(S#(b)) = S#(FreeNat#)",
            "freeNat_f# = FreeNat#",
        ]),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, Option<u64>); 10] = [
        ("add listing", add_listing, Some(1)),
        ("filter listing", filter_listing, Some(1)),
        ("senior walkthrough", senior_walkthrough, Some(5)),
        ("laziness", laziness, None),
        ("equivalence", equivalence_check, Some(60)),
        ("no overlapping facts", no_overlaps, None),
        ("traces", traces, None),
        ("debugging", debugging, None),
        ("coverage", rule_coverage, None),
        ("abstract interpretation", abstraction, None),
    ];
    let mut failed = Vec::new();
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let mut outcome = check();
        let took = start.elapsed();
        if let Some(secs) = limit {
            if outcome.is_ok() && took > Duration::from_secs(secs) {
                outcome = Err(format!("took {took:.2?}, limit {secs}s"));
            }
        }
        match outcome {
            Ok(()) => println!("PASS {name} ({took:.2?})"),
            Err(e) => {
                println!("FAIL {name}: {e}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
