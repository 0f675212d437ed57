import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from galcheck import signs
from galcheck import whilelang as wl
from galcheck.galois import (check_correspondence, check_expansive,
                             check_optimality, check_reductive, product_gc)
from galcheck.order import DomainError, IntWindow
from galcheck.signs import (SIGNS, AbsEnv, AbsState, abs_aexp, abs_aop,
                            abs_bexp, abs_bop, abs_cmp, abs_step, analyze,
                            eta_int, sign_contains, sign_gc, sign_join,
                            sign_leq, sign_members)

W2 = IntWindow(2)
W8 = IntWindow(8)

# The complete strict order: everything below none's row comes from the
# covering relation plus transitivity.
LEQ_PAIRS = (
    {(s, s) for s in SIGNS}
    | {("none", s) for s in SIGNS}
    | {("neg", "negz"), ("neg", "nzer"), ("neg", "any"),
       ("zer", "negz"), ("zer", "posz"), ("zer", "any"),
       ("pos", "nzer"), ("pos", "posz"), ("pos", "any"),
       ("negz", "any"), ("nzer", "any"), ("posz", "any")}
)


def test_order_matches_frozen_relation():
    for a in SIGNS:
        for b in SIGNS:
            assert sign_leq(a, b) == ((a, b) in LEQ_PAIRS), (a, b)


def test_extraction_cases():
    assert eta_int(-3) == "neg"
    assert eta_int(0) == "zer"
    assert eta_int(5) == "pos"


def test_interpretations_verbatim_on_window():
    assert sign_members("none", W2) == []
    assert sign_members("neg", W2) == [-2, -1]
    assert sign_members("zer", W2) == [0]
    assert sign_members("pos", W2) == [1, 2]
    assert sign_members("negz", W2) == [-2, -1, 0]
    assert sign_members("nzer", W2) == [-2, -1, 1, 2]
    assert sign_members("posz", W2) == [0, 1, 2]
    assert sign_members("any", W2) == [-2, -1, 0, 1, 2]


def test_connection_laws():
    gc = sign_gc(W8)
    assert check_correspondence(gc).passed
    assert check_expansive(gc).passed
    assert check_reductive(gc).passed


def test_ret_on_the_sign_lattice():
    from galcheck.order import ret
    dom = signs.sign_domain()
    assert set(ret("pos", dom).labels) == {"none", "pos"}
    assert set(ret("any", dom).labels) == set(SIGNS)


def test_pure_extraction_example():
    from galcheck.order import MonotoneFn, pure, ret
    w = IntWindow(8)
    eta = MonotoneFn.from_callable(w.domain, signs.sign_domain(), eta_int)
    assert pure(eta)(-3) == ret("neg", signs.sign_domain())


def test_kleisli_composition_of_extraction_after_successor():
    from galcheck.order import MonotoneFn, kcompose, pure, ret
    w = IntWindow(8)
    clamped_succ = MonotoneFn.from_callable(
        w.domain, w.domain, lambda i: min(i + 1, w.bound))
    eta = MonotoneFn.from_callable(w.domain, signs.sign_domain(), eta_int)
    composed = kcompose(pure(eta), pure(clamped_succ))
    assert composed(1) == ret("pos", signs.sign_domain())
    assert composed(-1) == ret("zer", signs.sign_domain())


def test_join_and_meet_match_concretization_order():
    members = {s: set(sign_members(s, W8)) for s in SIGNS}
    for a in SIGNS:
        for b in SIGNS:
            j = sign_join(a, b)
            assert members[a] | members[b] <= members[j]
            for c in SIGNS:
                if members[a] | members[b] <= members[c]:
                    assert sign_leq(j, c)
            m = signs.sign_meet(a, b)
            assert members[m] == members[a] & members[b]


# -- transfer functions ------------------------------------------------------------

ADD_SAMPLES = {
    ("pos", "pos"): "pos", ("pos", "neg"): "any", ("zer", "zer"): "zer",
    ("zer", "negz"): "negz", ("nzer", "zer"): "nzer", ("posz", "posz"): "posz",
    ("negz", "negz"): "negz", ("pos", "posz"): "pos", ("nzer", "nzer"): "any",
}


def test_addition_samples_and_strictness():
    for (s1, s2), want in ADD_SAMPLES.items():
        assert abs_aop("+", s1, s2) == want
        assert abs_aop("+", s2, s1) == want
    for s in SIGNS:
        assert abs_aop("+", "none", s) == "none"
        assert abs_aop("+", s, "none") == "none"


def test_subtraction_and_multiplication_samples():
    assert abs_aop("-", "pos", "neg") == "pos"
    assert abs_aop("-", "posz", "negz") == "posz"
    assert abs_aop("-", "zer", "pos") == "neg"
    assert abs_aop("*", "neg", "neg") == "pos"
    assert abs_aop("*", "zer", "any") == "zer"
    assert abs_aop("*", "negz", "posz") == "negz"
    assert abs_aop("*", "nzer", "nzer") == "nzer"


def test_division_samples():
    assert abs_aop("/", "pos", "zer") == "none"
    assert abs_aop("/", "pos", "none") == "none"
    assert abs_aop("/", "pos", "pos") == "posz"
    assert abs_aop("/", "neg", "pos") == "negz"
    assert abs_aop("/", "zer", "nzer") == "zer"
    assert abs_aop("/", "any", "any") == "any"


def test_transfer_soundness_exhaustive_window8():
    # every defined concrete result is covered by the abstract table
    for op in ("+", "-", "*", "/"):
        for s1 in SIGNS:
            for s2 in SIGNS:
                target = abs_aop(op, s1, s2)
                for i1 in sign_members(s1, W8):
                    for i2 in sign_members(s2, W8):
                        v = wl.denote_aop(op, i1, i2)
                        if v is not None:
                            assert sign_leq(eta_int(v), target), (op, i1, i2)


def test_transfer_optimality_window8():
    gc = sign_gc(W8)
    paired = product_gc(gc, gc)
    out_gc = sign_gc(signs.wide_window(W8))
    for op in ("+", "-", "*", "/"):
        f = signs.aop_kleisli(op, W8, signs.wide_window(W8))
        assert check_optimality(f, signs.aop_sharp_fn(op), paired,
                                out_gc=out_gc).passed, op


def test_division_not_optimal_at_window_one():
    w = IntWindow(1)
    gc = sign_gc(w)
    paired = product_gc(gc, gc)
    out_gc = sign_gc(signs.wide_window(w))
    f = signs.aop_kleisli("/", w, signs.wide_window(w))
    report = check_optimality(f, signs.aop_sharp_fn("/"), paired, out_gc=out_gc)
    assert not report.passed  # 1/2 = 0 has no witness inside the window


def test_comparison_samples():
    assert abs_cmp("<", "neg", "pos") == "tt"
    assert abs_cmp("<", "neg", "posz") == "tt"
    assert abs_cmp("<", "pos", "pos") == "any"
    assert abs_cmp("<", "pos", "negz") == "ff"
    assert abs_cmp("=", "pos", "pos") == "any"
    assert abs_cmp("=", "zer", "zer") == "tt"
    assert abs_cmp("=", "neg", "pos") == "ff"
    assert abs_cmp("<", "none", "any") == "none"


def test_boolean_op_samples():
    assert abs_bop("&&", "tt", "any") == "any"
    assert abs_bop("&&", "ff", "any") == "ff"
    assert abs_bop("||", "tt", "any") == "tt"
    assert abs_bop("||", "none", "tt") == "none"


def test_comparison_and_boolean_optimality():
    gc = sign_gc(W8)
    paired = product_gc(gc, gc)
    bool_gc = signs.absbool_gc()
    for op in ("<", "="):
        assert check_optimality(signs.cmp_kleisli(op, W8), signs.cmp_sharp_fn(op),
                                paired, out_gc=bool_gc).passed
    bool_paired = product_gc(bool_gc, bool_gc)
    for op in ("&&", "||"):
        assert check_optimality(signs.bop_kleisli(op), signs.bop_sharp_fn(op),
                                bool_paired, out_gc=bool_gc).passed


def test_absbool_connection_laws():
    gc = signs.absbool_gc()
    assert check_correspondence(gc).passed
    assert check_expansive(gc).passed
    assert check_reductive(gc).passed


# -- environments ---------------------------------------------------------------------

def test_env_extraction_and_meaning():
    gc = signs.env_gc(("x", "y"), W2)
    assert gc.eta((-1, 0)) == ("neg", "zer")
    assert gc.mu(("none", "any")).is_empty
    assert gc.concrete.size == 25 and gc.abstract.size == 64


def test_env_connection_laws_two_vars_window2():
    gc = signs.env_gc(("x", "y"), W2)
    assert check_correspondence(gc).passed
    assert check_expansive(gc).passed
    assert check_reductive(gc).passed


def test_env_law_suite_passes():
    assert all(r.passed for r in signs.env_law_suite(W2))


def test_absenv_operations():
    e1 = AbsEnv.from_dict({"x": "pos", "y": "zer"})
    e2 = AbsEnv.from_dict({"x": "any", "y": "negz"})
    assert e1.leq(e2)
    assert e1.join(e2) == AbsEnv.from_dict({"x": "any", "y": "negz"})
    assert not e2.leq(e1)
    assert AbsEnv.from_dict({"x": "none"}).is_unreachable
    with pytest.raises(DomainError):
        e1.join(AbsEnv.from_dict({"z": "any"}))


# -- abstract interpreters -------------------------------------------------------------

def test_abs_aexp_base_cases():
    env = AbsEnv.from_dict({"x": "negz"})
    assert abs_aexp(wl.Rand(), env) == "any"
    assert abs_aexp(wl.Var("x"), env) == "negz"
    assert abs_aexp(wl.Int(-7), env) == "neg"
    assert abs_aexp(wl.parse("y := x + 1").expr,
                    AbsEnv.from_dict({"x": "pos"})) == "pos"
    with pytest.raises(wl.UnboundVariableError):
        abs_aexp(wl.Var("q"), env)


def test_abs_bexp_cases():
    assert abs_bexp(wl.Bool(True), AbsEnv.from_dict({})) == "tt"
    assert abs_bexp(wl.parse("if x < 0 then skip else skip").guard,
                    AbsEnv.from_dict({"x": "neg"})) == "tt"
    assert abs_bexp(wl.parse("if x < 0 then skip else skip").guard,
                    AbsEnv.from_dict({"x": "any"})) == "any"


def test_abs_step_assign_and_loop():
    prog = wl.label_program(wl.parse("x := x + 1"))
    succs = abs_step(AbsState(AbsEnv.from_dict({"x": "pos"}), prog))
    assert [s.env.to_dict() for s in succs] == [{"x": "pos"}]

    loop = wl.label_program(wl.parse("while x < 0 do skip"))
    assert len(abs_step(AbsState(AbsEnv.from_dict({"x": "neg"}), loop))) == 1
    assert len(abs_step(AbsState(AbsEnv.from_dict({"x": "any"}), loop))) == 2


def test_abs_step_prunes_unreachable():
    prog = wl.label_program(wl.parse("x := 1 / 0"))
    assert abs_step(AbsState(AbsEnv.from_dict({"x": "any"}), prog)) == []


def test_analyze_simple_fixtures():
    assert analyze(wl.parse("x := 1")).final.to_dict() == {"x": "pos"}
    assert analyze(wl.parse("x := rand")).final.to_dict() == {"x": "any"}
    loop = analyze(wl.parse("x := 1; while x < 3 do x := x + 1"))
    assert loop.final.to_dict() == {"x": "pos"}


def test_analyze_division_by_zero_never_terminates():
    res = analyze(wl.parse("x := 1 / 0"))
    assert res.final.to_dict() == {"x": "none"}
    assert res.pruned_unreachable >= 1


def test_analyze_is_monotone_in_initial_env():
    prog = wl.parse("x := x + 1; if x < 0 then y := 0 else y := x; z := y * y")
    lo = AbsEnv.from_dict({"x": "pos", "y": "pos", "z": "zer"})
    hi = AbsEnv.from_dict({"x": "any", "y": "any", "z": "any"})
    r_lo, r_hi = analyze(prog, lo), analyze(prog, hi)
    assert r_lo.final.leq(r_hi.final)
    for p, env in r_lo.points.items():
        assert p in r_hi.points and env.leq(r_hi.points[p])


def test_analyze_point_envs_cover_loop_head():
    res = analyze(wl.parse("x := 1; while x < 3 do x := x + 1"))
    head = next(p for p, c in res.commands.items() if c.startswith("while"))
    assert res.points[head].to_dict() == {"x": "pos"}


def test_analyze_rejects_unbound_reads():
    with pytest.raises(wl.UnboundVariableError):
        analyze(wl.parse("x := y"))


# -- randomized expression soundness ---------------------------------------------------

def test_expression_soundness_seeded():
    rng = random.Random(7)
    w = IntWindow(4)
    checked = 0
    while checked < 1000:
        ae = _random_aexp(rng, 4)
        if _enum_cost(ae, w) > 20_000:
            continue
        checked += 1
        conc = {v: rng.choice(list(w.values)) for v in ("x", "y")}
        rho = wl.Env.from_dict(conc)
        signs_env = AbsEnv.from_dict({
            v: rng.choice([s for s in SIGNS if sign_contains(s, conc[v])])
            for v in conc})
        target = abs_aexp(ae, signs_env)
        for i in wl.eval_aexp(ae, rho, w):
            assert sign_leq(eta_int(i), target), (ae, conc, signs_env)


def _random_aexp(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        return rng.choice([wl.Int(rng.randint(-4, 4)), wl.Var("x"),
                           wl.Var("y"), wl.Rand()])
    op = rng.choice("+-*/")
    return wl.BinA(op, _random_aexp(rng, depth - 1), _random_aexp(rng, depth - 1))


def _enum_cost(ae, window):
    if isinstance(ae, wl.Rand):
        return 2 * window.bound + 1
    if isinstance(ae, wl.BinA):
        return _enum_cost(ae.left, window) * _enum_cost(ae.right, window)
    return 1


# -- whole-program soundness against the concrete oracle ----------------------------------

def concrete_covered_by_analysis(src, window=IntWindow(4), fuel=2000):
    prog = wl.label_program(wl.parse(src))
    result = analyze(prog)
    init = wl.Env.from_dict({v: 0 for v in sorted(wl.assigned_vars(prog))})
    seen, _ = wl.reachable(wl.State(init, prog), window, fuel)
    for st in seen:
        pp = wl.focus(st.cmd)
        abs_env = signs.eta_env(st.env, result.vars)
        target = result.final if pp is None else result.points.get(pp)
        if target is None or not abs_env.leq(target):
            return False
    return True


def test_whole_program_soundness_spot_checks():
    assert concrete_covered_by_analysis("x := 1; while x < 3 do x := x + 1")
    assert concrete_covered_by_analysis("x := rand; if x < 0 then y := 0 - x else y := x")
    assert concrete_covered_by_analysis("x := rand; y := 1 / x")


def test_analyze_program_without_variables():
    res = analyze(wl.parse("skip"))
    assert res.final.to_dict() == {}
    res2 = analyze(wl.parse("while true do skip"))
    assert res2.final.to_dict() == {}
    assert any(c.startswith("while") for c in res2.commands.values())


# random programs: every concrete reachable state stays covered

@st.composite
def _small_aexp(draw, depth=2):
    if depth == 0 or draw(st.booleans()):
        return draw(st.sampled_from(
            [wl.Int(-2), wl.Int(0), wl.Int(3), wl.Var("x"), wl.Var("y"), wl.Rand()]))
    op = draw(st.sampled_from("+-*/"))
    return wl.BinA(op, draw(_small_aexp(depth=depth - 1)),
                   draw(_small_aexp(depth=depth - 1)))


@st.composite
def _small_bexp(draw):
    kind = draw(st.integers(0, 2))
    if kind == 0:
        return wl.Bool(draw(st.booleans()))
    op = draw(st.sampled_from(["<", "="]))
    return wl.Cmp(op, draw(_small_aexp(depth=1)), draw(_small_aexp(depth=1)))


@st.composite
def _small_cexp(draw, depth=2):
    kind = draw(st.integers(0, 3 if depth else 0))
    if kind == 0:
        return wl.Assign(draw(st.sampled_from(["x", "y"])), draw(_small_aexp()))
    if kind == 1:
        return wl.Seq(draw(_small_cexp(depth=depth - 1)),
                      draw(_small_cexp(depth=depth - 1)))
    if kind == 2:
        return wl.If(draw(_small_bexp()), draw(_small_cexp(depth=depth - 1)),
                     draw(_small_cexp(depth=depth - 1)))
    return wl.While(draw(_small_bexp()), draw(_small_cexp(depth=depth - 1)))


@given(_small_cexp())
@settings(max_examples=40, deadline=None)
def test_whole_program_soundness_on_random_programs(prog):
    prog = wl.label_program(prog)
    window = IntWindow(2)
    init_abs = AbsEnv.uniform(("x", "y"))
    result = analyze(prog, init_abs)
    init = wl.Env.from_dict({"x": 1, "y": -1})
    seen, _ = wl.reachable(wl.State(init, prog), window, 25)
    for st_ in seen:
        pp = wl.focus(st_.cmd)
        abs_env = signs.eta_env(st_.env, init_abs.vars)
        target = result.final if pp is None else result.points.get(pp)
        assert target is not None and abs_env.leq(target), (prog, st_.env)
