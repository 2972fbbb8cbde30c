"""Built-in finite models and the companion oracles.

The centrepiece is a five-element algebra over {0, 1, 2, a, inf} that
interprets the whole signature and satisfies a striking share of the
arithmetic identities that hold over the naturals: 0 and 1 behave as
themselves, 2 absorbs every larger finite value, ``a`` tracks "one copy of
a growing quantity" and ``inf`` everything beyond.  Two derived models are
bundled, a four-element {+, *, ^, 1}-subalgebra generated by ``a`` and a
four-element quotient of the pow-free reduct that merges 1 with 2.

The module also houses the naturals-side oracle (`valid_on_nat`), a
classifier that sorts one-variable term functions into the five matching
behaviour classes, and a sweep that cross-checks the classifier story:
small term pairs that agree on sampled naturals should be identities of
the five-element algebra.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from .algebra import FiniteAlgebra, subalgebra_generated, quotient, satisfies
from .terms import (
    COMB_SIG, DEFAULT_MAX_BITS, FULL_SIG, MAX_CHOOSE_ARG, MAX_FACT_ARG,
    EvalBudgetError, Equation, Term, Var, Zero, One, Plus, Times, Pow,
    Choose, Fact, Exp2, eval_nat, print_term, variables,
)

__all__ = [
    "algebra_B", "algebra_B_minus", "algebra_S7_0", "NatVerdict",
    "valid_on_nat", "BlockClass", "classify_block", "SweepReport",
    "prop1_sweep", "enumerate_terms",
]

_E = ("0", "1", "2", "a", "inf")


def algebra_B() -> FiniteAlgebra:
    """The five-element algebra over {0, 1, 2, a, inf}, full signature.

    Rows and columns run in element order 0, 1, 2, a, inf; for ``pow`` the
    row is the base.  Handy identities of this model: ``x! = x*x`` except
    at 0, ``x C y = x + y + 1`` unless a side is 0, and ``exp2(x) = 1 + x``
    holds cell for cell.
    """
    i = {name: k for k, name in enumerate(_E)}

    def rows(*data: str) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(i[tok] for tok in row.split()) for row in data)

    plus = rows("0 1 2 a inf",
                "1 2 2 inf inf",
                "2 2 2 inf inf",
                "a inf inf a inf",
                "inf inf inf inf inf")
    times = rows("0 0 0 0 0",
                 "0 1 2 a inf",
                 "0 2 2 a inf",
                 "0 a a inf inf",
                 "0 inf inf inf inf")
    pow_ = rows("1 0 0 0 0",
                "1 1 1 1 1",
                "1 2 2 inf inf",
                "1 a inf inf inf",
                "1 inf inf inf inf")
    choose = rows("1 1 1 1 1",
                  "1 2 2 inf inf",
                  "1 2 2 inf inf",
                  "1 inf inf inf inf",
                  "1 inf inf inf inf")
    fact = tuple(i[tok] for tok in "1 1 2 inf inf".split())
    exp2 = tuple(i[tok] for tok in "1 2 2 inf inf".split())
    return FiniteAlgebra(
        "B", _E, FULL_SIG,
        consts={"const0": i["0"], "const1": i["1"]},
        unops={"fact": fact, "exp2": exp2},
        binops={"plus": plus, "times": times, "pow": pow_, "choose": choose})


def algebra_B_minus() -> FiniteAlgebra:
    """{1, 2, a, inf}: the {+, *, ^, 1}-subalgebra generated by ``a``."""
    base = algebra_B().reduct(
        frozenset({"plus", "times", "pow", "const1"}), name="B-restr")
    sub, _ = subalgebra_generated(
        base, [base.element_id("a")], name="Bminus")
    return sub


def algebra_S7_0() -> FiniteAlgebra:
    """Four-element quotient of the pow-free reduct merging 1 with 2.

    The merge respects every pow-free operation but not ``^`` itself
    (1 and 2 act differently as bases), which is why the reduct is taken
    first.  Blocks are named by least member: 0, 1, a, inf.
    """
    base = algebra_B().reduct(COMB_SIG, name="B-comb")
    return quotient(base, [{"0"}, {"1", "2"}, {"a"}, {"inf"}], name="S7_0")


# ---------------------------------------------------------------------------
# Validity over the naturals


@dataclass(frozen=True)
class NatVerdict:
    """Sampling verdict: valid on every checked point, or refuted.

    ``witness`` is the first refuting assignment in scan order together
    with both values.  ``checked`` counts evaluated points; ``skipped``
    counts sampled points abandoned because evaluation hit its size
    budget (possible only for random points, never the exhaustive floor).
    """

    ok: bool
    witness: tuple[dict[int, int], int, int] | None = None
    checked: int = 0
    skipped: int = 0

    def __bool__(self) -> bool:
        return self.ok


def valid_on_nat(eq: Equation, exhaustive_max: int = 6, trials: int = 20,
                 random_max: int = 2 ** 16, seed: int = 2025) -> NatVerdict:
    """Check ``eq`` over naturals: exhaustive small floor plus random spikes.

    The floor runs all assignments with values in [0, exhaustive_max] in
    lexicographic order, so the reported witness is the least one; the
    spikes draw ``trials`` assignments with values up to ``random_max``
    from a seeded generator, so runs are reproducible.  Floor points must
    evaluate within budget (a budget hit there propagates); random points
    that overrun the budget are skipped and counted.
    """
    vars_sorted = sorted(eq.variables())
    checked = skipped = 0
    for values in itertools.product(
            range(exhaustive_max + 1), repeat=len(vars_sorted)):
        asg = dict(zip(vars_sorted, values))
        lv = eval_nat(eq.lhs, asg)
        rv = eval_nat(eq.rhs, asg)
        checked += 1
        if lv != rv:
            return NatVerdict(False, (asg, lv, rv), checked, skipped)
    rng = random.Random(seed)
    for _ in range(trials):
        asg = {v: rng.randint(0, random_max) for v in vars_sorted}
        try:
            lv = eval_nat(eq.lhs, asg)
            rv = eval_nat(eq.rhs, asg)
        except EvalBudgetError:
            skipped += 1
            continue
        checked += 1
        if lv != rv:
            return NatVerdict(False, (asg, lv, rv), checked, skipped)
    return NatVerdict(True, None, checked, skipped)


# ---------------------------------------------------------------------------
# Behaviour classes of one-variable term functions
#
# The five-element model's elements shadow five families of functions of
# one natural variable: the constants 0 and 1, the constants >= 2, the
# homogeneous linear maps n*x, and everything that eventually outgrows
# every n*x or carries a constant offset.  classify_block() places a term
# function into one of those families, or reports Anomalous for functions
# that fit none (the signature can produce such: 0^x is 1 at 0 and 0
# beyond, which is neither constant nor linear).
#
# Method: a symbolic "tail form", exact for all x >= 8, computed
# structurally; tails are Const(c), Lin(n) for n*x with n >= 1,
# Aff(n, b) for n*x + b with n, b >= 1, or Super for nondecreasing
# functions that are at least 2x on [8, inf) and outgrow every linear
# map.  Aff and Super tails already pin the class; Const and Lin tails
# are confirmed against exact evaluation at x = 0..7.


@dataclass(frozen=True)
class BlockClass:
    """Classification result; ``block`` is one of B0, B1, B2, Ba, Binf,
    Anomalous.  For Ba the slope ``n`` is included."""

    block: str
    slope: int | None = None

    def __str__(self) -> str:
        if self.block == "Ba":
            return f"Ba(slope {self.slope})"
        return self.block


_X0 = 8


@dataclass(frozen=True)
class _Const:
    c: int


@dataclass(frozen=True)
class _Lin:
    n: int


@dataclass(frozen=True)
class _Aff:
    n: int
    b: int


@dataclass(frozen=True)
class _Super:
    pass


_SUPER = _Super()


def _tail_plus(f, g):
    if isinstance(f, _Super) or isinstance(g, _Super):
        return _SUPER
    if isinstance(f, _Const) and f.c == 0:
        return g
    if isinstance(g, _Const) and g.c == 0:
        return f
    if isinstance(f, _Const) and isinstance(g, _Const):
        return _Const(f.c + g.c)
    if isinstance(f, _Const):
        f, g = g, f
    # now f is Lin or Aff, g is Const(>=1), Lin, or Aff
    if isinstance(g, _Const):
        if isinstance(f, _Lin):
            return _Aff(f.n, g.c)
        return _Aff(f.n, f.b + g.c)
    fn, fb = (f.n, 0) if isinstance(f, _Lin) else (f.n, f.b)
    gn, gb = (g.n, 0) if isinstance(g, _Lin) else (g.n, g.b)
    return _Lin(fn + gn) if fb + gb == 0 else _Aff(fn + gn, fb + gb)


def _tail_times(f, g):
    if isinstance(f, _Const) and f.c == 0:
        return _Const(0)
    if isinstance(g, _Const) and g.c == 0:
        return _Const(0)
    if isinstance(f, _Const) and f.c == 1:
        return g
    if isinstance(g, _Const) and g.c == 1:
        return f
    if isinstance(f, _Const) and isinstance(g, _Const):
        return _Const(f.c * g.c)
    if isinstance(g, _Const):
        f, g = g, f
    if isinstance(f, _Const):  # c >= 2 times a growing shape
        if isinstance(g, _Lin):
            return _Lin(f.c * g.n)
        if isinstance(g, _Aff):
            return _Aff(f.c * g.n, f.c * g.b)
        return _SUPER
    # both sides grow at least linearly: the product is superlinear
    return _SUPER


def _tail_pow(f, g):
    if isinstance(g, _Const):
        if g.c == 0:
            return _Const(1)  # x^0 == 1 including 0^0
        if isinstance(f, _Const):
            if f.c > 1 and f.c.bit_length() * g.c > DEFAULT_MAX_BITS:
                raise EvalBudgetError("constant power too large")
            return _Const(f.c ** g.c)
        if g.c == 1:
            return f
        return _SUPER  # (linear or better) ** (constant >= 2)
    # exponent grows without bound past X0
    if isinstance(f, _Const):
        if f.c == 0:
            return _Const(0)
        if f.c == 1:
            return _Const(1)
        return _SUPER
    return _SUPER


def _tail_choose(f, g):
    if isinstance(g, _Const) and g.c == 0:
        return _Const(1)
    if isinstance(f, _Const) and f.c == 0:
        return _Const(1)
    if isinstance(f, _Const) and isinstance(g, _Const):
        if f.c + g.c > MAX_CHOOSE_ARG:
            raise EvalBudgetError("constant binomial too large")
        return _Const(math.comb(f.c + g.c, g.c))
    if isinstance(g, _Const) and g.c == 1:
        return _tail_plus(f, _Const(1))
    if isinstance(f, _Const) and f.c == 1:
        return _tail_plus(g, _Const(1))
    # one side >= constant 2, the other grows, or both grow: the binomial
    # is at least quadratic in the growing side
    return _SUPER


def _tail_fact(f):
    if isinstance(f, _Const):
        if f.c > MAX_FACT_ARG:
            raise EvalBudgetError("constant factorial too large")
        return _Const(math.factorial(f.c))
    return _SUPER


def _tail_exp2(f):
    if isinstance(f, _Const):
        if f.c > DEFAULT_MAX_BITS:
            raise EvalBudgetError("constant exp2 too large")
        return _Const(1 << f.c)
    return _SUPER


def _tail(t: Term):
    c = type(t)
    if c is Var:
        return _Lin(1)
    if c is Zero:
        return _Const(0)
    if c is One:
        return _Const(1)
    if c is Plus:
        return _tail_plus(_tail(t.l), _tail(t.r))
    if c is Times:
        return _tail_times(_tail(t.l), _tail(t.r))
    if c is Pow:
        return _tail_pow(_tail(t.l), _tail(t.r))
    if c is Choose:
        return _tail_choose(_tail(t.l), _tail(t.r))
    if c is Fact:
        return _tail_fact(_tail(t.arg))
    return _tail_exp2(_tail(t.arg))


def classify_block(t: Term) -> BlockClass:
    """Behaviour class of a term in at most one variable.

    Terms in zero variables classify by value.  Anomalous means the
    function is eventually constant or eventually homogeneous-linear but
    disagrees with that shape on [0, 8), so it matches none of the five
    families.  Raises ``ValueError`` on two or more variables and
    :class:`~combalg.terms.EvalBudgetError` when confirming evaluations
    blow the size budget.
    """
    vs = variables(t)
    if len(vs) > 1:
        raise ValueError("classification needs at most one variable")
    var = next(iter(vs), 1)
    tail = _tail(t)
    if isinstance(tail, (_Aff, _Super)):
        return BlockClass("Binf")
    prefix = [eval_nat(t, {var: x}) for x in range(_X0)]
    if isinstance(tail, _Const):
        if all(v == tail.c for v in prefix):
            if tail.c == 0:
                return BlockClass("B0")
            if tail.c == 1:
                return BlockClass("B1")
            return BlockClass("B2")
        return BlockClass("Anomalous")
    if all(v == tail.n * x for x, v in enumerate(prefix)):
        return BlockClass("Ba", tail.n)
    return BlockClass("Anomalous")


# ---------------------------------------------------------------------------
# Term enumeration and the agreement sweep

def enumerate_terms(max_nodes: int, var_count: int,
                    sig: frozenset[str] = FULL_SIG) -> list[Term]:
    """All terms with at most ``max_nodes`` nodes over the first
    ``var_count`` variables, smallest first; deterministic order."""
    atoms: list[Term] = []
    if "const0" in sig:
        atoms.append(Zero())
    if "const1" in sig:
        atoms.append(One())
    atoms.extend(Var(i + 1) for i in range(var_count))
    by_size: dict[int, list[Term]] = {1: atoms}
    unary = [c for c, op in ((Fact, "fact"), (Exp2, "exp2")) if op in sig]
    binary = [c for c, op in ((Plus, "plus"), (Times, "times"),
                              (Pow, "pow"), (Choose, "choose")) if op in sig]
    for n in range(2, max_nodes + 1):
        layer: list[Term] = []
        for ctor in unary:
            layer.extend(ctor(t) for t in by_size[n - 1])
        for ctor in binary:
            for k in range(1, n - 1):
                layer.extend(ctor(l, r)
                             for l in by_size[k]
                             for r in by_size[n - 1 - k])
        by_size[n] = layer
    out: list[Term] = []
    for n in range(1, max_nodes + 1):
        out.extend(by_size[n])
    return out


@dataclass
class SweepReport:
    """Outcome of :func:`prop1_sweep`.

    ``disagreements`` lists pairs that agree on the sample yet are refuted
    by the five-element model, each with the refuting witness string; an
    empty list is the expected outcome.  The remaining fields describe
    coverage: how many terms were enumerated, how many were dropped
    because the exhaustive sample floor did not evaluate within budget,
    and how many certified-agreeing pairs were checked.
    """

    max_nodes: int
    terms: int = 0
    dropped_terms: int = 0
    pairs_checked: int = 0
    disagreements: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def prop1_sweep(max_nodes: int = 4, var_count: int = 1,
                random_points: int = 4, seed: int = 2025) -> SweepReport:
    """Cross-check: sampled agreement over naturals implies agreement in
    the five-element model.

    All one-variable terms up to ``max_nodes`` nodes are fingerprinted on
    x = 0..6 plus seeded random points; terms whose floor does not
    evaluate within budget are dropped (and counted).  Random points that
    overrun the budget record a sentinel, so only terms with identical
    evaluation behaviour share a fingerprint.  Every pair sharing a
    fingerprint is then checked exhaustively in the model; refuted pairs
    are returned as disagreements.
    """
    if var_count != 1:
        raise ValueError("the sweep is defined for one variable")
    report = SweepReport(max_nodes)
    terms = enumerate_terms(max_nodes, 1)
    report.terms = len(terms)
    rng = random.Random(seed)
    points = list(range(7)) + [rng.randint(7, 2 ** 16)
                               for _ in range(random_points)]
    buckets: dict[tuple, list[Term]] = {}
    for t in terms:
        fp: list[object] = []
        ok = True
        for k, x in enumerate(points):
            try:
                fp.append(eval_nat(t, {1: x}))
            except EvalBudgetError:
                if k < 7:  # the floor must evaluate
                    ok = False
                    break
                fp.append("skip")
        if not ok:
            report.dropped_terms += 1
            continue
        buckets.setdefault(tuple(fp), []).append(t)
    model = algebra_B()
    for group in buckets.values():
        for s, t in itertools.combinations(group, 2):
            report.pairs_checked += 1
            verdict = satisfies(model, Equation(s, t))
            if not verdict.ok:
                report.disagreements.append(
                    (print_term(s), print_term(t), str(verdict.witness)))
    return report
