use std::fs;
use std::io::{self, BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use serde_json::{json, Value};
use unfolder::apps::{abstract_fixpoint, build_edt, coverage, run_goal, verify, AbstractSpec, DebugSession, Status, Verdict};
use unfolder::engine::{effective_mode, is_complete, productive_rules, run_observed, unfold_expr, Interpretation, Run};
use unfolder::exec::Strategy;
use unfolder::json::{self as ujson, with_schema};
use unfolder::syntax::{show_guard, validate};
use unfolder::trace::{show_trace, TraceStyle, GOAL};
use unfolder::{parse_expr, parse_program, CleanMode, Config, Expr, Program};
use unfolder_service::ServiceConfig;

use crate::{Cli, Command, Mode, Opts, Output, StrategyArg, DEFAULT_FUEL};

pub enum Failure {
    /// Output was closed early; nothing more to say.
    Quiet,
    Message(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            Failure::Quiet
        } else {
            Failure::Message(e.to_string())
        }
    }
}

fn fail<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Message(msg.into()))
}

type Outcome = Result<ExitCode, Failure>;

struct Ctx {
    opts: Opts,
    cfg: Config,
    out: io::StdoutLock<'static>,
}

impl Ctx {
    fn json(&self) -> bool {
        self.opts.json || self.opts.output == Output::Json
    }

    fn style(&self) -> TraceStyle {
        TraceStyle { positions: self.opts.positions, bots: self.opts.bots }
    }

    fn fuel(&self) -> usize {
        self.opts.fuel.map_or(DEFAULT_FUEL, |f| f as usize)
    }

    fn emit_json(&mut self, v: &Value) -> io::Result<()> {
        writeln!(self.out, "{}", serde_json::to_string_pretty(v).expect("JSON values print"))
    }
}

fn config(opts: &Opts) -> Config {
    let clean = match opts.clean_mode {
        Mode::Auto => CleanMode::Auto,
        Mode::Optimized => CleanMode::Optimized,
        Mode::General => CleanMode::General,
    };
    Config { defer_comparisons: opts.defer_comparisons, clean, ..Config::default() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).or_else(|e| fail(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Program, Failure> {
    parse_program(&read(path)?).or_else(|e| fail(format!("{}: {e}", path.display())))
}

fn goal(p: &Program, text: &str) -> Result<Expr, Failure> {
    parse_expr(p, text).or_else(|e| fail(format!("goal: {e}")))
}

fn mode_name(m: CleanMode) -> &'static str {
    match m {
        CleanMode::Auto => "auto",
        CleanMode::Optimized => "optimized",
        CleanMode::General => "general",
    }
}

pub fn dispatch(cli: Cli) -> Outcome {
    let cfg = config(&cli.opts);
    let mut ctx = Ctx { opts: cli.opts, cfg, out: io::stdout().lock() };
    match cli.command {
        Command::Check { file } => check(&mut ctx, &file),
        Command::Unfold { file, steps } => unfold(&mut ctx, &file, steps),
        Command::Run { goal, file, steps, verify, strategy } => run(&mut ctx, &file, &goal, steps, verify, strategy),
        Command::Trace { goal, file, steps } => trace(&mut ctx, &file, &goal, steps),
        Command::Coverage { file, steps, stop_early } => cover(&mut ctx, &file, steps, stop_early),
        Command::Abstract { file, spec, steps } => abstraction(&mut ctx, &file, spec.as_deref(), steps),
        Command::Debug { goal, file, steps } => debug(&mut ctx, &file, &goal, steps),
        Command::Serve { port, host, session_log, cors_origin } => serve(&host, port, session_log, cors_origin),
    }
}

fn check(ctx: &mut Ctx, file: &Path) -> Outcome {
    let p = load(file)?;
    let violations = validate(&p);
    let functions: Vec<Value> = p
        .function_names()
        .into_iter()
        .map(|f| json!({ "name": f, "rules": p.rules_of(&f).count(), "complete": is_complete(&p, &f) }))
        .collect();
    let (mode, unproductive) = if violations.is_empty() {
        let productive = productive_rules(&p, &ctx.cfg);
        let unproductive: Vec<String> = p.labels().into_iter().filter(|l| !productive.contains(l)).collect();
        (Some(effective_mode(&p, &ctx.cfg)), unproductive)
    } else {
        (None, Vec::new())
    };
    if ctx.json() {
        let v = with_schema(json!({
            "ok": violations.is_empty(),
            "violations": violations,
            "functions": functions,
            "unproductive": unproductive,
            "mode": mode,
        }));
        ctx.emit_json(&v)?;
    } else {
        for v in &violations {
            writeln!(ctx.out, "violation {}: {}", v.rule, v.message)?;
        }
        if violations.is_empty() {
            writeln!(ctx.out, "ok: {} rules, {} functions", p.rules.len(), functions.len())?;
            for f in &functions {
                let tag = if f["complete"] == true { "complete" } else { "incomplete" };
                writeln!(ctx.out, "  {} ({} rules, {tag})", f["name"].as_str().unwrap_or_default(), f["rules"])?;
            }
            if !unproductive.is_empty() {
                writeln!(ctx.out, "unproductive rules: {}", unproductive.join(", "))?;
            }
            if let Some(m) = mode {
                writeln!(ctx.out, "clean mode: {}", mode_name(m))?;
            }
        }
    }
    Ok(if violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn print_interp(out: &mut impl Write, i: &Interpretation, style: TraceStyle) -> io::Result<()> {
    writeln!(out, "I{}:", i.step)?;
    for f in &i.facts {
        writeln!(out, "* {}", f.display(style))?;
    }
    if !i.bot_facts.is_empty() {
        writeln!(out, "I{} bottom:", i.step)?;
        for f in &i.bot_facts {
            writeln!(out, "* {}", f.display(style))?;
        }
    }
    Ok(())
}

fn print_footer(ctx: &mut Ctx, run: &Run, interrupted: bool) -> io::Result<()> {
    if interrupted {
        writeln!(ctx.out, "% interrupted after I{}", run.steps())?;
    } else if run.converged {
        writeln!(ctx.out, "% fixpoint reached at I{}", run.steps())?;
    } else {
        writeln!(ctx.out, "% no fixpoint within {} steps", run.steps())?;
    }
    for d in &run.diagnostics {
        eprintln!("warning: {}: {}", d.kind, d.message);
    }
    Ok(())
}

/// Set by the first interrupt; a second one ends the process.
fn interrupt_flag() -> Arc<AtomicBool> {
    let flag = Arc::new(AtomicBool::new(false));
    let f = flag.clone();
    let _ = ctrlc::set_handler(move || {
        if f.swap(true, Ordering::SeqCst) {
            std::process::exit(130);
        }
    });
    flag
}

fn unfold(ctx: &mut Ctx, file: &Path, steps: usize) -> Outcome {
    let p = load(file)?;
    let cfg = ctx.cfg.for_program(&p);
    let mode = effective_mode(&p, &cfg);
    let stop = interrupt_flag();
    let json = ctx.json();
    let style = ctx.style();
    let run = if json {
        run_observed(&p, steps, &cfg, mode, |_| !stop.load(Ordering::SeqCst))
    } else {
        writeln!(ctx.out, "% clean mode: {}", mode_name(mode))?;
        print_interp(&mut ctx.out, &Interpretation::empty(), style)?;
        let mut result = Ok(());
        let run = run_observed(&p, steps, &cfg, mode, |i| {
            result = print_interp(&mut ctx.out, i, style).and_then(|_| ctx.out.flush());
            result.is_ok() && !stop.load(Ordering::SeqCst)
        });
        result?;
        run
    };
    let interrupted = stop.load(Ordering::SeqCst);
    if json {
        let mut v = ujson::run(&run);
        v["interrupted"] = json!(interrupted);
        ctx.emit_json(&v)?;
        for d in &run.diagnostics {
            eprintln!("warning: {}: {}", d.kind, d.message);
        }
    } else {
        print_footer(ctx, &run, interrupted)?;
    }
    Ok(if interrupted { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn strategy(s: StrategyArg, seed: u64) -> Strategy {
    match s {
        StrategyArg::Outermost => Strategy::Outermost,
        StrategyArg::Innermost => Strategy::Innermost,
        StrategyArg::Random => Strategy::Random(seed),
    }
}

fn run(ctx: &mut Ctx, file: &Path, goal_text: &str, steps: usize, check: bool, s: StrategyArg) -> Outcome {
    let p = load(file)?;
    let g = goal(&p, goal_text)?;
    let fuel = ctx.fuel();
    let r = run_goal(&p, &g, steps, &ctx.cfg, fuel);
    let verification = check.then(|| verify(&p, &g, &r, strategy(s, ctx.opts.seed), fuel));
    let ok = verification.as_ref().is_none_or(|v| v.agrees);
    if ctx.json() {
        let v = with_schema(json!({ "goal": g.to_string(), "result": r, "verify": verification }));
        ctx.emit_json(&v)?;
    } else {
        let shown = r.value.as_ref().map_or("Bot".to_string(), Expr::to_string);
        writeln!(ctx.out, "{shown}")?;
        match r.step {
            Some(n) => eprintln!("% computed with I{n}"),
            None => eprintln!("% no value within {steps} steps"),
        }
        if let Some(v) = &verification {
            match (&v.normal_form, v.agrees) {
                (_, true) => writeln!(ctx.out, "verify OK")?,
                (Some(nf), false) => writeln!(ctx.out, "verify FAILED: rewriting gives {nf}")?,
                (None, false) => writeln!(ctx.out, "verify FAILED: no normal form within {fuel} rewriting steps")?,
            }
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn trace(ctx: &mut Ctx, file: &Path, goal_text: &str, steps: usize) -> Outcome {
    let p = load(file)?;
    let g = goal(&p, goal_text)?;
    let r = run_goal(&p, &g, steps, &ctx.cfg, ctx.fuel());
    let cfg = ctx.cfg.for_program(&p);
    let n = r.step.unwrap_or(steps);
    let run = unfolder::fixpoint(&p, n, &cfg);
    let i = run.at(n).unwrap_or_else(|| run.last());
    let mut facts = unfold_expr(GOAL, &g, &i.sources(), &cfg);
    // partial results only matter when there is nothing better
    if facts.iter().any(|f| f.is_bot_free()) {
        facts.retain(|f| f.is_bot_free());
    }
    let style = ctx.style();
    if ctx.json() {
        let rows: Vec<Value> = facts
            .iter()
            .map(|f| json!({ "guard": show_guard(&f.guard), "value": f.body.to_string(), "traces": f.traces.iter().map(|t| t[1..].to_vec()).collect::<Vec<_>>() }))
            .collect();
        let v = with_schema(json!({ "goal": g.to_string(), "step": i.step, "results": rows }));
        ctx.emit_json(&v)?;
    } else {
        writeln!(ctx.out, "% I{}", i.step)?;
        let mut seen = std::collections::BTreeSet::new();
        for f in &facts {
            let guard = if f.guard.is_true() { String::new() } else { format!(" | {}", show_guard(&f.guard)) };
            for t in &f.traces {
                let line = format!("* {g}{guard} = {} {}", f.body, show_trace(&t[1..].to_vec(), style));
                if seen.insert(line.clone()) {
                    writeln!(ctx.out, "{line}")?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cover(ctx: &mut Ctx, file: &Path, steps: usize, stop_early: bool) -> Outcome {
    let p = load(file)?;
    let r = coverage(&p, steps, &ctx.cfg, stop_early);
    if ctx.json() {
        let v = with_schema(&r);
        ctx.emit_json(&v)?;
    } else {
        write!(ctx.out, "{}", r.table(&p))?;
        if !r.uncovered.is_empty() {
            writeln!(ctx.out, "uncovered: {}", r.uncovered.join(", "))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Program text with its `cata` section replaced by the rules in `spec`.
fn with_spec(program: &str, spec: &str) -> String {
    let is_cata = |l: &str| l.trim() == "cata";
    let own: Vec<&str> = program.lines().take_while(|l| !is_cata(l)).collect();
    let rules: Vec<&str> = spec.lines().filter(|l| !is_cata(l)).collect();
    format!("{}\ncata\n{}\n", own.join("\n"), rules.join("\n"))
}

fn abstraction(ctx: &mut Ctx, file: &Path, spec: Option<&Path>, steps: usize) -> Outcome {
    let text = read(file)?;
    let text = match spec {
        Some(s) => with_spec(&text, &read(s)?),
        None => text,
    };
    let p = parse_program(&text).or_else(|e| fail(format!("{}: {e}", file.display())))?;
    let a = AbstractSpec::from_program(&p);
    if a.rules.is_empty() {
        return fail("no catamorphism rules; add a `cata` section or pass --spec");
    }
    let run = abstract_fixpoint(&p, &a, steps, &ctx.cfg).or_else(|e| fail(e.to_string()))?;
    if ctx.json() {
        let v = ujson::run(&run);
        ctx.emit_json(&v)?;
    } else {
        let style = ctx.style();
        for i in &run.interps {
            print_interp(&mut ctx.out, i, style)?;
        }
        print_footer(ctx, &run, false)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_verdict(line: &str) -> Option<Verdict> {
    match line.trim().to_ascii_lowercase().as_str() {
        "c" | "correct" | "y" | "yes" => Some(Verdict::Correct),
        "w" | "wrong" | "n" | "no" => Some(Verdict::Wrong),
        _ => None,
    }
}

fn debug(ctx: &mut Ctx, file: &Path, goal_text: &str, steps: usize) -> Outcome {
    let p = load(file)?;
    let g = goal(&p, goal_text)?;
    let edt = build_edt(&p, &g, steps, &ctx.cfg).or_else(|e| fail(e.to_string()))?;
    write!(ctx.out, "{}", edt.render())?;
    let mut session = DebugSession::new(edt);
    let mut input = io::stdin().lock().lines();
    while let Some(q) = session.next_question() {
        let n = session.edt.nodes[q].clone();
        write!(ctx.out, "{} = {} ? [c]orrect/[w]rong: ", n.call, n.value)?;
        ctx.out.flush()?;
        let verdict = loop {
            let Some(line) = input.next().transpose()? else {
                writeln!(ctx.out)?;
                return fail("input ended before the session finished");
            };
            if line.trim() == "q" {
                return fail("session abandoned");
            }
            match parse_verdict(&line) {
                Some(v) => break v,
                None => {
                    write!(ctx.out, "answer c or w (q quits): ")?;
                    ctx.out.flush()?;
                }
            }
        };
        session.answer(q, verdict).or_else(|e| fail(e.to_string()))?;
    }
    match session.status() {
        Status::Blamed(rule) => writeln!(ctx.out, "Blamed: {rule}")?,
        _ => writeln!(ctx.out, "No error found")?,
    }
    Ok(ExitCode::SUCCESS)
}

fn serve(host: &str, port: u16, session_log: Option<PathBuf>, cors_origin: Option<String>) -> Outcome {
    let addr: SocketAddr = format!("{host}:{port}").parse().or_else(|e| fail(format!("{host}:{port}: {e}")))?;
    let cfg = ServiceConfig { session_log, cors_origin, max_steps: None };
    let rt = tokio::runtime::Runtime::new()?;
    eprintln!("listening on http://{addr}");
    rt.block_on(unfolder_service::serve(addr, &cfg))?;
    Ok(ExitCode::SUCCESS)
}
