//! Random ground goals: the small-step normal form must be one of the values
//! computed from the first interpretation that yields a ⊥-free value.

use std::fmt::Write;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use unfolder::exec::{normalize, ueval, RuleBase, Strategy};
use unfolder::{fixpoint, parse_expr, Config, Expr, Run};

use super::fixture;

pub const FUEL: usize = 10_000;
pub const MAX_STEPS: usize = 8;
pub const PROGRAMS: [&str; 7] = ["add", "addb", "rev", "senior", "traces", "lazy", "ones"];

fn peano(n: usize) -> String {
    let mut s = "Zero".to_string();
    for _ in 0..n {
        s = format!("Suc({s})");
    }
    s
}

fn int_list(rng: &mut StdRng, max_len: usize) -> String {
    let n = rng.gen_range(0..=max_len);
    let xs: Vec<String> = (0..n).map(|_| rng.gen_range(-5..10).to_string()).collect();
    format!("[{}]", xs.join(","))
}

/// One random ground goal for the named fixture, in source syntax.
pub fn goal(name: &str, rng: &mut StdRng) -> String {
    let mut out = String::new();
    match (name, rng.gen_range(0..3)) {
        ("add", 0) => write!(out, "add({},{})", peano(rng.gen_range(0..5)), peano(rng.gen_range(0..3))),
        ("add", _) => write!(out, "add(add({},{}),{})", peano(rng.gen_range(0..3)), peano(rng.gen_range(0..3)), peano(rng.gen_range(0..2))),
        ("addb", 0) => write!(out, "main24"),
        ("addb", _) => write!(out, "addb({},{})", peano(rng.gen_range(0..6)), peano(rng.gen_range(0..3))),
        ("rev", 0) => write!(out, "rev({})", int_list(rng, 3)),
        ("rev", 1) => write!(out, "append({},{})", int_list(rng, 3), int_list(rng, 2)),
        ("rev", _) => write!(out, "rev(append({},{}))", int_list(rng, 2), int_list(rng, 1)),
        ("senior", 0) => write!(out, "senior({})", rng.gen_range(55..75)),
        ("senior", 1) => write!(out, "ite({},{},{})", ["True", "False"][rng.gen_range(0..2)], rng.gen_range(0..9), rng.gen_range(0..9)),
        ("senior", _) => {
            let xs: Vec<String> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(60..70).to_string()).collect();
            write!(out, "map(senior,[{}])", xs.join(","))
        }
        ("traces", 0) => {
            let f = ["f", "g", "h"][rng.gen_range(0..3)];
            write!(out, "{f}({})", rng.gen_range(-5..20))
        }
        ("traces", 1) => write!(out, "f2(f({}),g({}))", rng.gen_range(0..9), rng.gen_range(0..9)),
        ("traces", _) => write!(out, "{}", ["goal", "goal2", "goal3", "j(5)"][rng.gen_range(0..4)]),
        ("lazy", 0) => write!(out, "main({})", rng.gen_range(-5..20)),
        ("lazy", 1) => write!(out, "first(from_n({}))", rng.gen_range(-5..20)),
        ("lazy", _) => write!(out, "app_first(from_n,{})", rng.gen_range(-5..20)),
        ("ones", 0) => write!(out, "main"),
        ("ones", _) => write!(out, "first(ones)"),
        _ => panic!("no goals for {name}"),
    }
    .unwrap();
    out
}

#[derive(Debug, Default)]
pub struct Report {
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

/// A value: free of ⊥ and of unevaluated calls.
fn is_value(e: &Expr) -> bool {
    !e.contains_bot() && !e.contains_call()
}

/// Checks `per_program` seeded goals for every program in `PROGRAMS`.
pub fn check(seed: u64, per_program: usize) -> Report {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut report = Report::default();
    for name in PROGRAMS {
        let p = fixture(name);
        let run: Run = fixpoint(&p, MAX_STEPS, &Config::default());
        let base = RuleBase::from_program(&p);
        for _ in 0..per_program {
            let text = goal(name, &mut rng);
            let e = parse_expr(&p, &text).unwrap_or_else(|err| panic!("{text}: {err}"));
            let Some((nf, _)) = normalize(&base, &e, Strategy::Outermost, FUEL) else {
                report.skipped += 1;
                continue;
            };
            report.checked += 1;
            let found = run.interps.iter().find_map(|i| {
                let r = ueval(&i.sources(), &e, FUEL);
                r.values.iter().any(is_value).then_some((i.step, r))
            });
            match found {
                Some((_, r)) if r.values.contains(&nf) => {}
                Some((n, r)) => report.failures.push(format!("{name}: {text} normalizes to {nf}, I{n} gives {:?}", r.values.iter().map(|v| v.to_string()).collect::<Vec<_>>())),
                None => report.failures.push(format!("{name}: {text} normalizes to {nf}, no interpretation up to I{MAX_STEPS} gives a value")),
            }
        }
    }
    report
}
