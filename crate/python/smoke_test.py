"""Smoke test for the Python bindings.

Build and install the extension first, e.g.
    maturin build --release -m crates/unfolder-py/Cargo.toml
    pip install target/wheels/unfolder-*.whl
then run `python python/smoke_test.py` from the workspace root.
"""

import pathlib
import sys

import unfolder

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "crates" / "unfolder" / "fixtures"


def load(name, **kw):
    return unfolder.Program((FIXTURES / f"{name}.ufl").read_text(), **kw)


def check(cond, what):
    if not cond:
        print(f"FAIL {what}")
        sys.exit(1)
    print(f"ok   {what}")


def main():
    add = load("add")
    check(add.violations() == [], "add is valid")
    check(add.clean_mode() == "optimized", "add resolves to the optimized clean mode")
    run = add.fixpoint(steps=2)
    check(len(run) == 3 and run.steps == 2 and not run.converged, "two steps computed")
    check(run.listing(1) == ["add(Suc(b),c) = Suc(Bot) <R2>", "add(Zero,b) = b <R1>"], "first listing")
    check(run.facts(1)[1]["head"] == "add(Zero,b)", "facts as dicts")
    check(run.to_json()["schema"] == unfolder.SCHEMA, "json carries the schema")

    ones = load("ones")
    r = ones.run("main", verify="outermost")
    check(r["value"] == "1" and r["verification"]["agrees"], "lazy goal evaluates and verifies")

    cov = load("rev").coverage(steps=3)
    check(cov["full_at"] is not None and cov["uncovered"] == [], "rev is fully covered")
    check("total" in cov["table"], "coverage table")

    parity = load("parity").abstract_fixpoint()
    check(parity.converged, "abstract fixpoint converges")

    session = load("addb").debug("main24")
    for verdict in ["wrong", "wrong", "correct"]:
        q = session.question()
        session.answer(q["id"], verdict)
    check(session.question() is None and session.blamed == "A3", "debugging blames A3")
    check(session.status == {"state": "blamed", "rule": "A3"}, "status dict")

    try:
        unfolder.Program("f x = (")
        check(False, "parse errors raise")
    except unfolder.UnfolderError as e:
        check("parse error at 1:" in str(e), "parse errors raise")

    try:
        add.fixpoint(steps=0)
        check(False, "zero steps rejected")
    except ValueError:
        check(True, "zero steps rejected")
    print("all checks passed")


if __name__ == "__main__":
    main()
