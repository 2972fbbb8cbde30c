import pytest
from hypothesis import given, settings, strategies as st

from combalg.terms import (
    COMB_SIG, FULL_SIG, MAX_NUMERAL, OMEGA_RULES, ONE, ZERO,
    Choose, Equation, EvalBudgetError, Exp2, Fact, ParseError, Plus, Pow,
    SignatureError, Times, Var, all_rewrites, eval_nat, kind,
    omega_normalize, parse, parse_equation, parse_signature, print_term,
    sig_of, size, subterms, variables, weight,
)


# ---------------------------------------------------------------------------
# Parsing and printing

@pytest.mark.parametrize("text,canon", [
    ("x", "x1"),
    ("x1", "x1"),
    ("y", "x2"),
    ("w", "x4"),
    ("x + y*z", "x1 + x2*x3"),
    ("(x + y)*z", "(x1 + x2)*x3"),
    ("x^y^z", "x1^x2^x3"),  # ^ is right-associative
    ("(x^y)^z", "(x1^x2)^x3"),
    ("x!", "x1!"),
    ("x!!", "x1!!"),
    ("(x + y)!", "(x1 + x2)!"),
    ("exp2(x)", "exp2(x1)"),
    ("fact(x)", "x1!"),
    ("choose(x, y)", "(x1 C x2)"),
    ("(x C y)", "(x1 C x2)"),
    ("((x C y) C z)", "((x1 C x2) C x3)"),
    ("2^x", "(1 + 1)^x1"),
    ("0", "0"),
    ("1", "1"),
    ("3", "1 + 1 + 1"),
    ("x*2", "x1*(1 + 1)"),
])
def test_parse_print(text, canon):
    assert print_term(parse(text)) == canon


def test_numeral_expansion_left_nested():
    t = parse("4")
    assert t == Plus(Plus(Plus(ONE, ONE), ONE), ONE)


def test_numeral_cap():
    parse(str(MAX_NUMERAL))
    with pytest.raises(ParseError):
        parse(str(MAX_NUMERAL + 1))


@pytest.mark.parametrize("bad", [
    "", "x +", "(x", "x)", "x y", "x ** y", "x C y", "(x C )",
    "exp2(x, y)", "fact()", "q", "x1.5", "-x",
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as info:
        parse("x + + y")
    assert info.value.pos == 4


def test_signature_restriction():
    parse("x + y", sig=parse_signature("plus"))
    with pytest.raises(SignatureError):
        parse("x*y", sig=parse_signature("plus"))
    with pytest.raises(SignatureError):
        parse("2", sig=parse_signature("plus"))  # numerals need const1


def test_parse_signature_aliases():
    assert parse_signature("full") == FULL_SIG
    assert parse_signature("comb") == COMB_SIG
    assert parse_signature("plus-times") == frozenset({"plus", "times"})
    assert parse_signature("zero one plus") == frozenset(
        {"const0", "const1", "plus"})
    with pytest.raises(SignatureError):
        parse_signature("plus-minus")


def test_equation_parsing():
    eq = parse_equation("x + y = y + x")
    assert str(eq) == "x1 + x2 = x2 + x1"
    assert eq.variables() == {1, 2}
    assert parse_equation("x ≈ x").lhs == Var(1)
    with pytest.raises(ParseError):
        parse_equation("x + y")
    with pytest.raises(ParseError):
        parse_equation("x = y = z")


# ---------------------------------------------------------------------------
# Structure helpers

def test_structure_helpers():
    t = parse("(x C y)! + exp2(z)")
    assert size(t) == 7
    assert variables(t) == {1, 2, 3}
    assert kind(t) == "plus"
    assert sig_of(t) == frozenset({"plus", "choose", "fact", "exp2"})
    assert sum(1 for _ in subterms(t)) == 7


def test_deep_terms_do_not_recurse():
    # Expanded numerals nest to depth MAX_NUMERAL; every traversal in the
    # module must cope without hitting the interpreter recursion limit.
    t = parse(str(MAX_NUMERAL))
    assert size(t) == 2 * MAX_NUMERAL - 1
    assert eval_nat(t) == MAX_NUMERAL
    assert print_term(t).count("1") == MAX_NUMERAL
    assert weight(t) == MAX_NUMERAL
    assert omega_normalize(t) == t


# ---------------------------------------------------------------------------
# Evaluation

@pytest.mark.parametrize("text,asg,value", [
    ("0", {}, 0),
    ("1 + 1", {}, 2),
    ("x*y", {1: 6, 2: 7}, 42),
    ("x^y", {1: 2, 2: 10}, 1024),
    ("0^0", {}, 1),
    ("0^x", {1: 5}, 0),
    ("(5 C 2)", {}, 21),      # choose(x, y) = C(x+y, y)
    ("(x C 1)", {1: 9}, 10),
    ("(0 C x)", {1: 4}, 1),
    ("x!", {1: 5}, 120),
    ("exp2(x)", {1: 10}, 1024),
    ("exp2(0)", {}, 1),
])
def test_eval_nat(text, asg, value):
    assert eval_nat(parse(text), asg) == value


def test_eval_missing_variable():
    with pytest.raises(ValueError, match="x2"):
        eval_nat(parse("x + y"), {1: 1})


@pytest.mark.parametrize("text,asg", [
    ("x!", {1: 200_000}),            # past the factorial argument cap
    ("(x C x)", {1: 600_000}),       # past the binomial argument cap
    ("exp2(x)", {1: 3_000_000}),
    ("x^x", {1: 200_000}),
    ("exp2(exp2(exp2(x)))", {1: 5}),
])
def test_eval_budget(text, asg):
    with pytest.raises(EvalBudgetError):
        eval_nat(parse(text), asg)


def test_eval_budget_result_size():
    # Under a tight bit budget the size estimate fires before the
    # argument caps do.
    assert eval_nat(parse("x!"), {1: 2_000}, max_bits=50_000) > 0
    with pytest.raises(EvalBudgetError):
        eval_nat(parse("x!"), {1: 50_000}, max_bits=50_000)
    with pytest.raises(EvalBudgetError):
        eval_nat(parse("(x C x)"), {1: 40_000}, max_bits=50_000)


def test_eval_budget_tunable():
    big = eval_nat(parse("exp2(x)"), {1: 2_500_000}, max_bits=3_000_000)
    assert big.bit_length() == 2_500_001


def test_weight():
    assert weight(parse("x")) == 3
    assert weight(parse("x + 1")) == 4
    assert weight(parse("x*y")) == 9
    assert weight(parse("(x C y)")) == 20  # C(6, 3)
    assert weight(parse("0")) == 0
    with pytest.raises(ValueError):
        weight(parse("x^y"))


# ---------------------------------------------------------------------------
# Rewriting

RULE_PINS = [
    ("1*x", "x1"),
    ("x*1", "x1"),
    ("(x C 0)", "1"),
    ("(0 C x)", "1"),
    ("0 + x", "x1"),
    ("x + 0", "x1"),
    ("0*x", "0"),
    ("x*0", "0"),
    ("0!", "1"),
    ("1!", "1"),
    ("exp2(0)", "1"),
    ("exp2(1)", "1 + 1"),
    ("(1 + 1)!", "1 + 1"),
]


@pytest.mark.parametrize("redex,normal", RULE_PINS)
def test_rule_pins(redex, normal):
    assert print_term(omega_normalize(parse(redex))) == normal


def test_omega_rule_count():
    assert len(OMEGA_RULES) == 13
    assert len({str(r) for r in OMEGA_RULES}) == 13


def test_normalize_nested():
    assert print_term(omega_normalize(parse("1*(x + 0) + 0!*0"))) == "x1"
    assert print_term(omega_normalize(parse("((0 C y) C 0)"))) == "1"


def test_normalize_rejects_pow():
    with pytest.raises(ValueError):
        omega_normalize(parse("x^y"))


def _comb_terms(max_nodes):
    from combalg.models import enumerate_terms
    return enumerate_terms(max_nodes, 2, COMB_SIG)


def test_rewriting_is_locally_confluent_empirically():
    # Any single step followed by full normalisation lands on the same
    # normal form as normalising directly.
    for t in _comb_terms(5):
        nf = omega_normalize(t)
        for r in all_rewrites(t):
            assert omega_normalize(r) == nf, print_term(t)


def test_rewriting_preserves_weight():
    for t in _comb_terms(5):
        try:
            w = weight(t)
        except EvalBudgetError:
            continue  # factorial towers overflow honestly
        assert weight(omega_normalize(t)) == w, print_term(t)


# ---------------------------------------------------------------------------
# Properties

_LEAVES = st.sampled_from([ZERO, ONE, Var(1), Var(2), Var(3)])


def _extend(children):
    return (
        st.builds(Plus, children, children)
        | st.builds(Times, children, children)
        | st.builds(Pow, children, children)
        | st.builds(Choose, children, children)
        | st.builds(Fact, children)
        | st.builds(Exp2, children)
    )


TERMS = st.recursive(_LEAVES, _extend, max_leaves=12)


@given(TERMS)
@settings(max_examples=200)
def test_print_parse_round_trip(t):
    assert parse(print_term(t)) == t


@given(TERMS)
@settings(max_examples=100)
def test_normalize_idempotent(t):
    if "pow" in sig_of(t):
        return
    nf = omega_normalize(t)
    assert omega_normalize(nf) == nf


@given(TERMS, st.integers(0, 5), st.integers(0, 5), st.integers(0, 5))
@settings(max_examples=100)
def test_normalize_preserves_value(t, a, b, c):
    if "pow" in sig_of(t):
        return
    asg = {1: a, 2: b, 3: c}
    try:
        v = eval_nat(t, asg)
    except EvalBudgetError:
        return
    assert eval_nat(omega_normalize(t), asg) == v
