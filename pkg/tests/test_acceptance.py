"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines on passing runs as well.
"""
import time

import pytest

from galcheck import galois, gradual, parity, signs
from galcheck import whilelang as wl
from galcheck.galois import (VARIANTS, NotLiftedFormError, best_abstraction,
                             bind, check_classical_correspondence,
                             check_correspondence, check_expansive,
                             check_optimality, check_reductive,
                             check_soundness, ia_kleisli_reading, induce,
                             lift_to_classical, lift_to_kleisli, product_gc)
from galcheck.order import (DownSet, IntWindow, KleisliFn, MonotoneFn,
                            downset_space, pure)

W4 = IntWindow(4)
W8 = IntWindow(8)
W64 = IntWindow(64)


def _report(name: str, problems: list, elapsed: float, budget: float) -> None:
    ok = not problems and elapsed <= budget
    status = "PASS" if ok else "FAIL"
    detail = ""
    if problems:
        detail = f" - {len(problems)} problems, first: {problems[0]}"
    if elapsed > budget:
        detail += f" - over time budget ({elapsed:.2f}s > {budget}s)"
    print(f"[acceptance] {name}: {status} [{elapsed:.2f}s]{detail}")
    assert ok, f"{name}: {status}{detail}"


# -- criterion 1: the parity fixture ------------------------------------------------

def test_c1_parity_fixture_window64():
    t0 = time.perf_counter()
    problems = []
    gc = parity.parity_gc(W64)
    for rep in (check_correspondence(gc), check_expansive(gc), check_reductive(gc)):
        if not rep.passed:
            problems.append((rep.law, rep.counterexamples[:2]))
    succ = parity.succ_kleisli(W64)
    fs = parity.succ_sharp_fn()
    for variant in ("mu_mu", "eta_eta"):
        rep = check_soundness(succ, fs, gc, variant, subject="succ#")
        if not rep.passed:
            problems.append((rep.law, rep.counterexamples[:2]))
    if parity.succ_sharp("even") != "odd" or parity.succ_sharp("odd") != "even":
        problems.append("succ# table wrong")
    _report("C1 parity laws + successor soundness (window 64)",
            problems, time.perf_counter() - t0, 1.0)


# -- criterion 2: the four soundness variants agree ----------------------------------

def _sign_pairs(window):
    gc = signs.sign_gc(window)
    dom = signs.sign_domain()
    fns = {
        "negate": lambda i: [-i],
        "abs": lambda i: [abs(i)],
        "succ": lambda i: [i + 1] if i + 1 in window else [],
        "halve": lambda i: [v] if (v := i // 2) in window else [],
        "mirror": lambda i: [i, -i],
    }
    pairs = []
    for name, fn in fns.items():
        f = KleisliFn.from_callable(window.domain, window.domain, fn)
        pairs.append((f"sign:{name}/best", gc, f, best_abstraction(f, gc), True))
        pairs.append((f"sign:{name}/const-zer", gc, f,
                      MonotoneFn.from_callable(dom, dom, lambda s: "zer"), False))
        pairs.append((f"sign:{name}/const-any", gc, f,
                      MonotoneFn.from_callable(dom, dom, lambda s: "any"), True))
    return pairs


def _parity_pairs(window):
    gc = parity.parity_gc(window)
    pd = parity.parity_domain()
    fns = {
        "succ": lambda i: [i + 1] if i + 1 in window else [],
        "double": lambda i: [2 * i] if 2 * i in window else [],
        "negate": lambda i: [-i],
    }
    pairs = []
    for name, fn in fns.items():
        f = KleisliFn.from_callable(window.domain, window.domain, fn)
        pairs.append((f"parity:{name}/best", gc, f, best_abstraction(f, gc), True))
        for const in ("even", "odd"):
            fs = MonotoneFn.from_callable(pd, pd, lambda p, c=const: c)
            sound = all(parity.parity(v) == const
                        for i in window.values for v in fn(i))
            pairs.append((f"parity:{name}/const-{const}", gc, f, fs, sound))
    return pairs


def test_c2_four_variant_equivalence():
    t0 = time.perf_counter()
    problems = []
    fixtures = _sign_pairs(W8) + _parity_pairs(W8)
    assert len(fixtures) >= 20
    unsound = [name for name, *_ in fixtures
               if not [f for f in fixtures if f[0] == name][0][4]]
    assert len(unsound) >= 5, unsound
    for name, gc, f, fs, expected in fixtures:
        verdicts = {v: check_soundness(f, fs, gc, v).passed for v in VARIANTS}
        if len(set(verdicts.values())) != 1:
            problems.append((name, "variants disagree", verdicts))
        elif next(iter(verdicts.values())) != expected:
            problems.append((name, "unexpected verdict"))
    _report(f"C2 four-variant agreement on {len(fixtures)} operator pairs "
            f"({len(unsound)} unsound)",
            problems, time.perf_counter() - t0, 10.0)


# -- criterion 3: the sign connection ---------------------------------------------------

def test_c3_sign_connection_exact():
    t0 = time.perf_counter()
    problems = []
    gc = signs.sign_gc(W8)
    for rep in (check_correspondence(gc), check_expansive(gc), check_reductive(gc)):
        if not rep.passed:
            problems.append((rep.law, rep.counterexamples[:2]))

    meanings = {
        "none": lambda i: False, "neg": lambda i: i < 0,
        "zer": lambda i: i == 0, "pos": lambda i: i > 0,
        "negz": lambda i: i <= 0, "nzer": lambda i: i != 0,
        "posz": lambda i: i >= 0, "any": lambda i: True,
    }
    for s, pred in meanings.items():
        want = [i for i in W8.values if pred(i)]
        if list(gc.mu(s).labels) != want:
            problems.append(("interpretation differs", s))

    hasse = {("neg", "negz"), ("neg", "nzer"), ("zer", "negz"), ("zer", "posz"),
             ("pos", "nzer"), ("pos", "posz")}
    order = ({(s, s) for s in signs.SIGNS}
             | {("none", s) for s in signs.SIGNS}
             | {(s, "any") for s in signs.SIGNS}
             | hasse)
    for a in signs.SIGNS:
        for b in signs.SIGNS:
            if signs.sign_leq(a, b) != ((a, b) in order):
                problems.append(("order differs", a, b))
    _report("C3 sign connection laws and exact tables (window 8)",
            problems, time.perf_counter() - t0, 5.0)


# -- criterion 4: arithmetic transfer tables ----------------------------------------------

def five_case_join(s1: str, s2: str) -> str:
    """The five-case addition join, evaluated verbatim on every sign pair."""
    fired = []
    if signs.sign_leq("pos", s1) or signs.sign_leq("pos", s2):
        fired.append("pos")
    if signs.sign_leq("neg", s1) or signs.sign_leq("neg", s2):
        fired.append("neg")
    if signs.sign_leq("zer", s1) and signs.sign_leq("zer", s2):
        fired.append("zer")
    if signs.sign_leq("pos", s1) and signs.sign_leq("neg", s2):
        fired.append("zer")
    if signs.sign_leq("neg", s1) and signs.sign_leq("pos", s2):
        fired.append("zer")
    acc = "none"
    for s in fired:
        acc = signs.sign_join(acc, s)
    return acc


def test_c4_transfer_tables():
    # Known-red clause: the verbatim five-case join marks additions with an
    # empty-meaning operand as signed, while the brute-force optimum (and this
    # implementation) sends them to the bottom element.  The two sub-claims
    # below cannot both hold; the optimality claim is the one kept green.
    t0 = time.perf_counter()
    problems = []
    wide = signs.wide_window(W8)
    gc = signs.sign_gc(W8)
    paired = product_gc(gc, gc)
    out_gc = signs.sign_gc(wide)

    for s1 in signs.SIGNS:
        for s2 in signs.SIGNS:
            if signs.abs_aop("+", s1, s2) != five_case_join(s1, s2):
                problems.append(("plus differs from verbatim five-case join",
                                 s1, s2, signs.abs_aop("+", s1, s2),
                                 five_case_join(s1, s2)))

    for op in ("+", "-", "*", "/"):
        f = signs.aop_kleisli(op, W8, wide)
        fs = signs.aop_sharp_fn(op)
        sound = check_soundness(f, fs, paired, "mu_mu", out_gc=out_gc)
        if not sound.passed:
            problems.append((f"{op} unsound", sound.counterexamples[:2]))
        optimal = check_optimality(f, fs, paired, out_gc=out_gc)
        if not optimal.passed:
            problems.append((f"{op} not optimal", optimal.counterexamples[:2]))
    _report("C4 arithmetic transfer tables (verbatim + optimal, window 8)",
            problems, time.perf_counter() - t0, 5.0)


# -- criterion 5: expression base cases -----------------------------------------------------

def test_c5_expression_base_cases():
    t0 = time.perf_counter()
    problems = []
    for vars in (("x",), ("x", "y")):
        gc = signs.env_gc(vars, W4)
        out_gc = signs.sign_gc(W4)
        rand = KleisliFn.from_callable(gc.concrete, W4.domain,
                                       lambda t: list(W4.values))
        lookup = KleisliFn.from_callable(gc.concrete, W4.domain, lambda t: [t[0]])
        for subject, f, sharp in (("rand", rand, lambda ss: "any"),
                                  (f"var {vars[0]}", lookup, lambda ss: ss[0])):
            best = best_abstraction(f, gc, out_gc)
            for ss in gc.abstract.elements:
                got, want = sharp(ss), best(ss)
                if "none" not in ss and got != want:
                    problems.append((subject, ss, got, want))
                if "none" in ss and not signs.sign_leq(want, got):
                    problems.append((subject, "unsound at", ss))
        # the interpreter itself reproduces the base-case tables everywhere
        for ss in gc.abstract.elements:
            env = signs.AbsEnv(tuple(sorted(vars)), ss)
            if signs.abs_aexp(wl.Rand(), env) != "any":
                problems.append(("interpreter rand", ss))
            if signs.abs_aexp(wl.Var(vars[0]), env) != env.get(vars[0]):
                problems.append(("interpreter var", ss))
    _report("C5 expression base cases match the best abstraction (<=2 vars)",
            problems, time.perf_counter() - t0, 5.0)


# -- criterion 6: whole-program soundness ------------------------------------------------------

PROGRAMS = [
    "x := 1",
    "x := 1; while x < 3 do x := x + 1",
    "x := rand",
    "x := rand; if x < 0 then y := 0 - x else y := x",
    "x := rand; y := 1 / x",
    "x := 2; y := 0; while 0 < x do (y := 2; while 0 < y do y := y - 1; x := x - 1)",
    "x := rand; while x < 0 do x := x + 1",
    "x := 7 / 2; y := 0 - x",
    "while true do skip",
    "x := rand; y := x * x; if y < 0 then z := 1 else z := y",
    "x := 0; while x < 4 do (y := rand; x := x + 1)",
    "x := 1; while 0 < x do x := x + 1",
]


def test_c6_whole_program_soundness():
    t0 = time.perf_counter()
    problems = []
    assert len(PROGRAMS) >= 10
    for src in PROGRAMS:
        prog = wl.label_program(wl.parse(src))
        result = signs.analyze(prog)
        init = wl.Env.from_dict({v: 0 for v in sorted(wl.assigned_vars(prog))})
        seen, _ = wl.reachable(wl.State(init, prog), W4, 10000)
        for st in seen:
            pp = wl.focus(st.cmd)
            abs_env = signs.eta_env(st.env, result.vars)
            target = result.final if pp is None else result.points.get(pp)
            if target is None or not abs_env.leq(target):
                problems.append((src, st.env.to_dict(), pp))
                break
    loop = signs.analyze(wl.parse("x := 1; while x < 3 do x := x + 1"))
    if loop.final.to_dict() != {"x": "pos"}:
        problems.append(("loop fixture final", loop.final.to_dict()))
    _report(f"C6 whole-program soundness on {len(PROGRAMS)} programs "
            "(fuel 10000, window 4)",
            problems, time.perf_counter() - t0, 30.0)


# -- criterion 7: metatheory round trips --------------------------------------------------------

def _constructive_fixtures():
    return [
        parity.parity_gc(W8),
        parity.parity_plus_gc(W8),
        signs.sign_gc(W8),
        signs.absbool_gc(),
        signs.env_gc(("x",), IntWindow(2)),
        gradual.gradual_gc(2),
    ]


def test_c7_metatheory():
    t0 = time.perf_counter()
    problems = []
    for gc in _constructive_fixtures():
        kgc = lift_to_kleisli(gc)
        back = induce(kgc)
        if back.eta.table != gc.eta.table or back.mu.table != gc.mu.table:
            problems.append(("induce . lift not identity", gc.name))
        again = lift_to_kleisli(back)
        if (again.kalpha.table != kgc.kalpha.table
                or again.kgamma.table != kgc.kgamma.table):
            problems.append(("lift . induce not identity", gc.name))

    sign_classical = lift_to_classical(lift_to_kleisli(signs.sign_gc(W8)))
    rep = check_classical_correspondence(sign_classical)
    if not rep.passed:
        problems.append(("classical correspondence", rep.counterexamples[:2]))

    # soundness verdicts transfer between the pointwise and downset levels
    w6 = IntWindow(6)
    for pairs in (_sign_pairs(w6), _parity_pairs(w6)):
        for name, gc, f, fs, _expected in pairs:
            kgc = lift_to_kleisli(gc)
            lifted = lift_to_classical(kgc)
            sets, _ = downset_space(gc.abstract)
            constructive = check_soundness(f, fs, gc, "eta_mu").passed
            fsk = pure(fs)
            classical = all(
                lifted.alpha(bind(bind(DownSet(gc.abstract, bits), kgc.kgamma), f))
                .subset(bind(DownSet(gc.abstract, bits), fsk))
                for bits in sets)
            if constructive != classical:
                problems.append(("verdict transfer", name))

    try:
        induce(ia_kleisli_reading(IntWindow(2).domain, parity.parity_domain()))
        problems.append("independent-attributes reading induced a pure extraction")
    except NotLiftedFormError:
        pass
    _report("C7 lifting and lowering metatheory", problems,
            time.perf_counter() - t0, 10.0)


# -- criterion 8: the gradual suite ---------------------------------------------------------------

def test_c8_gradual_suite():
    t0 = time.perf_counter()
    problems = []
    gc3 = gradual.gradual_gc(3)
    for rep in (check_correspondence(gc3), check_expansive(gc3),
                check_reductive(gc3)):
        if not rep.passed:
            problems.append((rep.law, rep.counterexamples[:2]))
    for rep in (gradual.check_consistent_subtype_witnessed(2, 3),
                gradual.check_unknown_laws(2),
                gradual.check_fully_annotated_equivalence(4, 1),
                gradual.check_dynamic_embedding(3),
                gradual.check_gradual_guarantee(4, 1)):
        if not rep.passed:
            problems.append((rep.law, rep.counterexamples[:2]))
    _report("C8 gradual typing suite", problems, time.perf_counter() - t0, 60.0)


# -- criterion 9: CLI determinism ------------------------------------------------------------------

def test_c9_cli_determinism():
    from test_cli import GOLDEN, run_cli
    t0 = time.perf_counter()
    problems = []
    cases = {
        "analyze_loop.json": ("analyze", "-e", "x := 1; while x < 3 do x := x + 1"),
        "analyze_branch.txt": ("analyze", "--format", "text", "-e",
                               "x := rand; if x < 0 then y := 0 - x else y := x"),
        "laws_parity_w8.txt": ("laws", "parity", "--window", "8"),
        "laws_sign_w8.txt": ("laws", "sign", "--window", "8"),
        "laws_parity_plus_w8.json": ("laws", "parity+", "--window", "8",
                                     "--format", "json"),
        "gtc_id.txt": ("gtc", "-e", r"(\x:?. x) true"),
        "gtc_bool.json": ("gtc", "--format", "json", "-e", "true :: Bool"),
        "tables_w8.txt": ("tables", "--window", "8"),
    }
    for name, argv in cases.items():
        argv = argv + ("--seed", "0")
        _, out1, _ = run_cli(*argv)
        _, out2, _ = run_cli(*argv)
        if out1 != out2:
            problems.append((name, "two runs differ"))
        if out1 != (GOLDEN / name).read_text():
            problems.append((name, "differs from golden file"))
    _report("C9 CLI determinism against golden files", problems,
            time.perf_counter() - t0, 30.0)
