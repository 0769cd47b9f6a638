//! Debugging, coverage and abstract interpretation on the fixture programs.

mod common;

use common::*;
use unfolder::apps::*;
use unfolder::engine::Interpretation;
use unfolder::trace::traces_of_expr;
use unfolder::{fixpoint, parse_expr, Config, Error, Expr, Program};

fn edt(fx: &str, goal: &str) -> Edt {
    let p = fixture(fx);
    let g = parse_expr(&p, goal).unwrap();
    build_edt(&p, &g, 8, &Config::default()).unwrap()
}

fn peano(e: &Expr) -> Option<usize> {
    match e {
        Expr::Con(k, _, a) if k == "Zero" && a.is_empty() => Some(0),
        Expr::Con(k, _, a) if k == "Suc" => peano(&a[0]).map(|n| n + 1),
        _ => None,
    }
}

#[test]
fn buggy_addition_tree() {
    let t = edt("addb", "main24");
    assert_eq!(t.len(), 3);
    let rows: Vec<(String, String, String)> = t.nodes.iter().map(|n| (n.call.to_string(), n.value.to_string(), n.rule.clone())).collect();
    assert_eq!(
        rows,
        vec![
            ("main24".into(), "Suc(Suc(Suc(Zero)))".into(), "M24".into()),
            ("addb(Suc(Suc(Suc(Zero))),Suc(Zero))".into(), "Suc(Suc(Suc(Zero)))".into(), "A3".into()),
            ("addb(Suc(Zero),Suc(Zero))".into(), "Suc(Suc(Zero))".into(), "A2".into()),
        ]
    );
    assert_eq!(t.nodes[0].children, vec![1]);
    assert_eq!(t.nodes[1].children, vec![2]);
}

#[test]
fn scripted_answers_blame_the_recursive_rule() {
    let mut s = DebugSession::new(edt("addb", "main24"));
    for (n, v) in [(0, Verdict::Wrong), (1, Verdict::Wrong), (2, Verdict::Correct)] {
        assert_eq!(s.next_question(), Some(n));
        s.answer(n, v).unwrap();
    }
    assert_eq!(s.blamed(), Some("A3"));
    assert_eq!(s.next_question(), None);
}

#[test]
fn reference_oracle_blames_a_disagreeing_rule() {
    let t = edt("addb", "main24");
    let oracle = |n: &EdtNode| -> Verdict {
        let expected = match &n.call {
            Expr::Fun(f, _, a) if f == "addb" => peano(&a[0]).unwrap() + peano(&a[1]).unwrap(),
            _ => 4,
        };
        if peano(&n.value) == Some(expected) {
            Verdict::Correct
        } else {
            Verdict::Wrong
        }
    };
    let mut s = DebugSession::new(t.clone());
    while let Some(q) = s.next_question() {
        s.answer(q, oracle(&t.nodes[q])).unwrap();
    }
    assert_eq!(s.status(), &Status::Blamed("A3".into()));
}

#[test]
fn chain_of_calls() {
    let t = edt("traces", "goal");
    let rules: Vec<&str> = t.nodes.iter().map(|n| n.rule.as_str()).collect();
    assert_eq!(rules, ["Goal", "F", "G", "H"]);
    for i in 0..3 {
        assert_eq!(t.nodes[i].children, vec![i + 1]);
    }
    assert!(t.nodes.iter().all(|n| n.value == Expr::Int(10) || n.rule == "Goal"));
}

#[test]
fn shared_argument_gives_two_subtrees() {
    let t = edt("traces", "goal2");
    let f2 = t.nodes.iter().find(|n| n.rule == "F2").unwrap();
    assert_eq!(f2.children.len(), 2);
    assert_eq!(t.nodes.len(), 8);
}

#[test]
fn normal_form_goal_has_one_node() {
    let t = edt("add", "Suc(Zero)");
    assert_eq!(t.len(), 1);
    let mut s = DebugSession::new(t);
    s.answer(0, Verdict::Correct).unwrap();
    assert_eq!(s.status(), &Status::Exonerated);
}

#[test]
fn undefined_goal() {
    let p = fixture("ones");
    let g = parse_expr(&p, "first(Nil)").unwrap();
    assert_eq!(build_edt(&p, &g, 4, &Config::default()), Err(Error::GoalUndefined(4)));
}

#[test]
fn expression_traces_drop_the_goal_step() {
    let p = fixture("traces");
    let run = fixpoint(&p, 4, &Config::default());
    let g = parse_expr(&p, "f(4)").unwrap();
    let ts = traces_of_expr(run.last(), &g, &Config::default());
    assert!(ts.iter().any(|t| labels(t) == "F,G,H"), "{ts:?}");
    assert!(traces_of_expr(&Interpretation::empty(), &Expr::Int(3), &Config::default()).iter().all(|t| t.is_empty()));
}

#[test]
fn rev_coverage() {
    let r = coverage(&fixture("rev"), 3, &Config::default(), false);
    let s1 = &r.steps[0];
    assert_eq!(s1.per_function["rev"], 50.0);
    assert_eq!(s1.per_function["append"], 50.0);
    assert_eq!(r.steps[2].total, 100.0);
    assert_eq!(r.full_at, Some(2));
    assert_eq!(r.test_set, vec!["rev(Cons(b,Cons(c,Nil)))".to_string()]);
    assert!(r.uncovered.is_empty());
    assert!(r.greedy);
}

#[test]
fn coverage_can_stop_at_full_coverage() {
    let r = coverage(&fixture("rev"), 6, &Config::default(), true);
    assert_eq!(r.steps.len(), 2);
    // at I2 no single fact uses all four rules
    assert_eq!(r.test_set.len(), 2);
}

#[test]
fn coverage_is_monotone() {
    for fx in ["rev", "add", "filter", "senior", "traces", "addb"] {
        let r = coverage(&fixture(fx), 4, &Config::default(), false);
        for w in r.steps.windows(2) {
            assert!(w[0].covered.iter().all(|c| w[1].covered.contains(c)), "{fx} step {}", w[1].step);
        }
    }
}

#[test]
fn greedy_cover_is_valid() {
    for fx in ["rev", "add", "filter", "senior", "traces", "addb"] {
        let r = coverage(&fixture(fx), 4, &Config::default(), false);
        let chosen: std::collections::BTreeSet<&String> =
            r.facts.iter().filter(|f| r.test_set.contains(&f.head)).flat_map(|f| &f.rules).collect();
        let coverable: std::collections::BTreeSet<&String> = r.facts.iter().flat_map(|f| &f.rules).collect();
        assert_eq!(chosen, coverable, "{fx}");
    }
}

fn abstract_run(fx: &str) -> (Program, unfolder::Run) {
    let p = fixture(fx);
    let run = abstract_fixpoint(&p, &AbstractSpec::from_program(&p), 6, &Config::default()).unwrap();
    (p, run)
}

#[test]
fn parity_addition() {
    let (_, run) = abstract_run("parity");
    assert!(run.converged);
    assert_eq!(run.steps(), 2);
    assert_eq!(
        listing(run.last()),
        set(&["add#(Even#,b) = b", "Suc_f#(Even#) = Odd#", "Suc_f#(Odd#) = Even#", "add#(Odd#,Odd#) = Even#", "add#(Odd#,Even#) = Odd#"])
    );
}

#[test]
fn parity_addition_with_accumulator() {
    let (_, run) = abstract_run("parity_acc");
    assert!(run.converged);
    assert_eq!(
        listing(run.last()),
        set(&["addr#(Even#,b) = b", "addr#(Odd#,b) = Suc#(b)", "suc_f#(Even#) = Odd#", "suc_f#(Odd#) = Even#"])
    );
}

#[test]
fn demand_analysis() {
    let (_, run) = abstract_run("demand");
    assert!(run.converged);
    assert_eq!(run.steps(), 2);
    assert_eq!(
        listing(run.last()),
        set(&[
            "leq#(Z#,FreeNat#) = DontCareBool#",
            "leq#(S#(FreeNat#),Z#) = DontCareBool#",
            "leq#(S#(FreeNat#),S#(FreeNat#)) = DontCareBool#",
            "z_f# = Z#",
            "s_f#(FreeNat#) = S#(FreeNat#)",
            "s_f#(Z#) = S#(FreeNat#)",
            "s_f#(S#(b)) = S#(FreeNat#)",
            "freeNat_f# = FreeNat#",
        ])
    );
}

#[test]
fn abstract_fixpoints_are_stable() {
    for fx in ["parity", "parity_acc", "demand"] {
        let (p, run) = abstract_run(fx);
        let spec = AbstractSpec::from_program(&p);
        let mode = run.mode.unwrap();
        let again = unfolder::apps::abstraction::abstract_step(&p, &spec, run.last(), &Config::default(), mode).unwrap();
        assert!(again.same_facts(run.last()), "{fx}");
    }
}

#[test]
fn diverging_catamorphism_is_reported() {
    let p = unfolder::parse_program("data A# = T# | U#\nf# T# = U#\ncata\nC T# = C T#\nC U# = U#").unwrap();
    let spec = AbstractSpec::from_program(&p);
    let r = abstract_fixpoint(&p, &spec, 3, &Config::default());
    assert!(matches!(r, Err(Error::CataDiverged(_))), "{r:?}");
}
