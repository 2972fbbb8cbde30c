import itertools
import pathlib

import pytest

from combalg.algebra import (
    BudgetExceeded, FiniteAlgebra, direct_power, dumps_algebra,
    enumerate_models, is_congruence, is_isomorphic, loads_algebra,
    quotient, satisfies, save_algebra, subalgebra_generated,
)
from combalg.models import algebra_B, algebra_S7_0
from combalg.terms import COMB_SIG, parse_equation, parse_signature

DATA = pathlib.Path(__file__).parent / "data"


def _two_element(plus_table, name="m"):
    return FiniteAlgebra(name, ("p", "q"), frozenset({"plus"}),
                         {}, {}, {"plus": plus_table})


# ---------------------------------------------------------------------------
# Construction and validation

def test_validation_rejects_bad_tables():

    with pytest.raises(ValueError):
        FiniteAlgebra("m", ("p", "q"), frozenset({"plus"}), {}, {},
                      {"plus": ((0, 1),)})  # wrong row count
    with pytest.raises(ValueError):
        FiniteAlgebra("m", ("p", "q"), frozenset({"plus"}), {}, {},
                      {"plus": ((0, 2), (1, 0))})  # value out of range
    with pytest.raises(ValueError):
        FiniteAlgebra("m", ("p", "q"), frozenset({"plus"}), {}, {}, {})
    with pytest.raises(ValueError):
        FiniteAlgebra("m", ("p", "p"), frozenset({"plus"}), {}, {},
                      {"plus": ((0, 0), (0, 0))})  # duplicate names


def test_element_lookup_and_ops():
    B = algebra_B()
    assert len(B) == 5
    assert B.element_id("a") == 3
    assert B.elements[B.binop("plus", 1, 1)] == "2"
    assert B.elements[B.unop("fact", 3)] == "inf"
    assert B.elements[B.const("const0")] == "0"
    with pytest.raises(KeyError):
        B.element_id("b")


def test_reduct():
    B = algebra_B()
    R = B.reduct(parse_signature("plus-times"))
    assert R.sig == frozenset({"plus", "times"})
    assert R.elements == B.elements
    with pytest.raises(ValueError):
        R.reduct(parse_signature("pow"))


# ---------------------------------------------------------------------------
# Model checking

def test_satisfies_reports_least_witness():
    B = algebra_B()
    v = satisfies(B, parse_equation("x*x = x"))
    assert not v.ok
    assert v.witness.assignment == {1: "a"}
    assert (v.witness.lhs_value, v.witness.rhs_value) == ("inf", "a")
    assert str(v.witness) == "x1 = a; lhs = inf, rhs = a"


def test_satisfies_positive():
    B = algebra_B()
    assert satisfies(B, parse_equation("x + y = y + x")).ok
    assert satisfies(B, parse_equation("(x C 0) = 1")).ok


def test_satisfies_budget():
    B = algebra_B()
    eq = parse_equation("x1 + x2 + x3 + x4 + x5 + x6 + x7 + x8 = x1")
    with pytest.raises(BudgetExceeded):
        satisfies(B, eq, budget=1000)


def test_satisfies_jobs_agree():
    B = algebra_B()
    for text in ("x*x = x", "x + y = y + x", "(x C y) = (y C x)"):
        eq = parse_equation(text)
        a = satisfies(B, eq, jobs=1)
        b = satisfies(B, eq, jobs=2)
        assert a.ok == b.ok and a.witness == b.witness


def test_signature_mismatch():
    B = algebra_B()
    R = B.reduct(parse_signature("plus"))
    with pytest.raises(ValueError):
        satisfies(R, parse_equation("x*x = x"))


# ---------------------------------------------------------------------------
# Congruences and quotients

def test_congruence_and_quotient():
    B = algebra_B()
    part = [{"0"}, {"1", "2"}, {"a"}, {"inf"}]
    ok, _ = is_congruence(B.reduct(COMB_SIG), part)
    assert ok
    ok, violation = is_congruence(B, part)
    assert not ok
    assert violation.op == "pow"
    assert "1" in str(violation) and "inf" in str(violation)

    q = algebra_S7_0()
    assert q.elements == ("0", "1", "a", "inf")
    assert q.elements[q.binop("plus", 1, 1)] == "1"  # 1+1=2 collapses

    with pytest.raises(ValueError):
        quotient(B, part)  # not a congruence in the full signature


def test_quotient_partition_must_cover():
    B = algebra_B()
    with pytest.raises(ValueError):
        is_congruence(B, [{"0"}, {"1"}])
    with pytest.raises(ValueError):
        is_congruence(B, [{"0", "1"}, {"1", "2", "a", "inf"}])


# ---------------------------------------------------------------------------
# Powers and subalgebras

def test_direct_power_basics():
    B = algebra_B()
    P = direct_power(B, 3)
    d = P.diagonal(B.element_id("2"))
    assert P.element_name(d) == "(2,2,2)"
    s = P.binop("plus", d, d)
    assert P.element_name(s) == "(2,2,2)"  # 2+2=2 in B
    assert P.coords(P.const("const1")) == (1, 1, 1)


def test_subalgebra_generated():
    B = algebra_B()
    P = direct_power(B, 2)
    gens = [P.intern((B.element_id("a"), B.element_id("2")))]
    sub, embedding = subalgebra_generated(P, gens, name="gen")
    # closure contains constants, the generator and everything reachable
    assert "(a,2)" in sub.elements
    assert "(0,0)" in sub.elements and "(1,1)" in sub.elements
    assert len(sub) == len(embedding)
    # tables restrict correctly: spot-check one cell against the power
    i = sub.elements.index("(a,2)")
    j = sub.binop("times", i, i)
    assert sub.elements[j] == "(inf,2)"


def test_subalgebra_size_cap():
    B = algebra_B()
    P = direct_power(B, 2)
    with pytest.raises(BudgetExceeded):
        subalgebra_generated(P, [P.diagonal(3)], max_size=2)


# ---------------------------------------------------------------------------
# Isomorphism

def _permuted_B(perm):
    B = algebra_B()
    names = tuple(B.elements[p] for p in perm)
    inv = {p: i for i, p in enumerate(perm)}
    consts = {op: inv[v] for op, v in B.consts.items()}
    unops = {op: tuple(inv[B.unop(op, perm[i])] for i in range(5))
             for op in B.unops}
    binops = {op: tuple(tuple(inv[B.binop(op, perm[i], perm[j])]
                              for j in range(5)) for i in range(5))
              for op in B.binops}
    return FiniteAlgebra("Bperm", names, B.sig, consts, unops, binops)


def test_isomorphic_to_permuted_copy():
    perm = (2, 0, 4, 1, 3)
    other = _permuted_B(perm)
    ok, mapping = is_isomorphic(algebra_B(), other)
    assert ok
    # the found map must send each element to its permuted name
    assert mapping == {algebra_B().elements[p]: other.elements[i]
                       for i, p in enumerate(perm)}


def test_not_isomorphic():
    B = algebra_B()
    ok, mapping = is_isomorphic(B.reduct(COMB_SIG), algebra_S7_0())
    assert not ok and mapping is None  # sizes differ
    # same size, different structure: constant plus vs B's plus
    flat = FiniteAlgebra(
        "flat", B.elements, frozenset({"plus"}), {}, {},
        {"plus": tuple(tuple(0 for _ in range(5)) for _ in range(5))})
    ok, _ = is_isomorphic(B.reduct(frozenset({"plus"})), flat)
    assert not ok


def test_isomorphism_needs_matching_signature():
    B = algebra_B()
    with pytest.raises(ValueError):
        is_isomorphic(B, B.reduct(COMB_SIG))


# ---------------------------------------------------------------------------
# Model enumeration

def test_enumerate_models_counts():
    sig = frozenset({"plus"})
    assert sum(1 for _ in enumerate_models(2, sig, [])) == 16
    comm = [parse_equation("x + y = y + x")]
    assert sum(1 for _ in enumerate_models(2, sig, comm)) == 8


def test_enumerate_models_pins_constants():
    sig = frozenset({"plus", "const0", "const1"})
    seen = 0
    for m in enumerate_models(2, sig, [parse_equation("0 + x = x")]):
        assert m.const("const0") == 0
        assert m.const("const1") == 1
        assert m.binop("plus", 0, 0) == 0
        assert m.binop("plus", 0, 1) == 1
        seen += 1
    assert seen == 4  # free cells: (1,0) and (1,1)


def test_enumerate_models_budget():
    with pytest.raises(BudgetExceeded):
        for _ in enumerate_models(4, frozenset({"plus", "times"}), [],
                                  budget=10 ** 4):
            pass


# ---------------------------------------------------------------------------
# Serialisation

def test_round_trip_through_text():
    B = algebra_B()
    text = dumps_algebra(B)
    again = loads_algebra(text)
    assert again == B
    assert dumps_algebra(again) == text


def test_golden_file_matches(tmp_path):
    golden = (DATA / "B.alg").read_text(encoding="utf-8")
    assert dumps_algebra(algebra_B()) == golden
    assert loads_algebra(golden) == algebra_B()
    out = tmp_path / "B.alg"
    save_algebra(algebra_B(), str(out))
    assert out.read_text(encoding="utf-8") == golden


def test_loads_rejects_malformed():
    good = dumps_algebra(algebra_B())
    with pytest.raises(ValueError):
        loads_algebra(good.replace("elements 0 1 2 a inf",
                                   "elements 0 1 2 a"))
    with pytest.raises(ValueError):
        loads_algebra("algebra x\n")


def test_loads_skips_comments():
    text = "# header note\n" + dumps_algebra(algebra_B())
    assert loads_algebra(text) == algebra_B()


def test_two_element_helper_round_trip():
    m = _two_element(((0, 1), (1, 0)))
    assert loads_algebra(dumps_algebra(m)) == m
