"""Finite truncations of the term algebra modulo unit/zero rewriting.

The rewriting system in :mod:`combalg.terms` preserves both value and
weight, and every irreducible pow-free term that avoids binomials with a
bare 1 argument decomposes into strictly lighter irreducibles of the same
kind.  That gives a finite universe: all such "counted" normal forms in m
variables of weight at most K.  Padding the universe with one sink element
for everything heavier (or outside the counted fragment) yields a finite
algebra that still satisfies all 13 rewrite rules read as equations, so a
single evaluation in it can refute derivability of an equation from those
rules.

The companion bound ``b_K(m) + 1`` caps the truncation size, which turns
"is e a consequence of a finite valid equation set?" into a finite (if
astronomically large) model search; :func:`decide_entailment` runs the
small end of that search honestly and reports how far certainty would be.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import (
    BudgetExceeded, FiniteAlgebra, Verdict, Witness, enumerate_models,
    satisfies,
)
from .models import valid_on_nat
from .terms import (
    COMB_SIG, OMEGA_RULES, Equation, Term, Var, Zero, One, Plus, Times,
    Choose, Fact, Exp2, ZERO, ONE, children, eval_alg, omega_normalize,
    print_term, subterms, variables, weight,
)

__all__ = [
    "b_value", "bound_B", "bound_text", "is_counted",
    "enumerate_normal_forms", "count_normal_forms", "TOP_NAME",
    "build_truncated", "TruncationError", "TruncationRefutation",
    "refute_via_truncation", "Entailment", "decide_entailment",
]

TOP_NAME = "TOP"
_DIGIT_CAP_BITS = 10 ** 7


# ---------------------------------------------------------------------------
# The size bound

def b_value(k: int, m: int) -> int:
    """Size cap for weight-k counted normal forms in m variables.

    b_1 = 2, b_2 = 3, b_3 = 5 + m, and b_{k+1} = 3*b_k + 3*b_k^2 beyond.
    Values square in length per step; past roughly 10^7 bits the exact
    integer is refused with :class:`BudgetExceeded`.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if m < 0:
        raise ValueError("m must be nonnegative")
    if k == 1:
        return 2
    if k == 2:
        return 3
    b = 5 + m
    for step in range(k - 3):
        if b.bit_length() > _DIGIT_CAP_BITS:
            raise BudgetExceeded(
                f"b_{step + 3}({m}) already exceeds the digit cap",
                b.bit_length())
        b = 3 * b + 3 * b * b
    return b


def _weight_cap(eq: Equation) -> int:
    return max(weight(eq.lhs), weight(eq.rhs), 3)


def bound_B(eq: Equation) -> int:
    """Model size past which exhaustive search decides derivability of
    ``eq`` from the rewrite rules: ``b_K(m) + 1`` for K the larger side
    weight (at least 3) and m the number of variables."""
    return b_value(_weight_cap(eq), len(eq.variables())) + 1


def bound_text(eq: Equation) -> str:
    """The bound as a decimal string, or a symbolic description when the
    exact integer is past the digit cap."""
    k = _weight_cap(eq)
    m = len(eq.variables())
    try:
        return str(b_value(k, m) + 1)
    except BudgetExceeded:
        return f"b_{k}({m}) + 1 (too large to materialise)"


# ---------------------------------------------------------------------------
# Counted normal forms

def is_counted(t: Term) -> bool:
    """Pow-free, irreducible, and free of ``1 C s`` / ``s C 1`` subterms.

    The one-sided binomial rules leave ``1 C s`` irreducible, yet ``s + 1``
    always matches it over the naturals, and factorial keeps such terms at
    weight 2 forever; excluding them is what makes the weight-bounded
    universe finite.  Composing counted forms can only produce the banned
    shape at the root, where the truncation maps it to the sink.
    """
    for s in subterms(t):
        if type(s) is Choose and (s.l == ONE or s.r == ONE):
            return False
    return t == omega_normalize(t)


def enumerate_normal_forms(m: int, k_max: int,
                           max_count: int = 100_000
                           ) -> dict[int, list[Term]]:
    """Counted normal forms in variables x1..xm, grouped by weight.

    Weight-w composites decompose into strictly lighter counted parts, so
    one ascending pass is complete: weight 0 holds only 0, weight 1 only
    1, weight 2 only 1 + 1, weight 3 adds the two sums of three 1s and
    the variables, and higher weights follow by combination.
    """
    if m < 0 or k_max < 0:
        raise ValueError("m and k_max must be nonnegative")
    by_w: dict[int, list[Term]] = {}
    total = 0
    for w in range(k_max + 1):
        layer: list[Term] = []
        if w == 0:
            layer.append(ZERO)
        elif w == 1:
            layer.append(ONE)
        else:
            for w1 in range(1, w):
                for s in by_w.get(w1,()):
                    for t in by_w.get(w - w1, ()):
                        layer.append(Plus(s, t))
            for w1 in range(2, w + 1):
                if w % w1 == 0 and w // w1 >= 2:
                    for s in by_w.get(w1, ()):
                        for t in by_w.get(w // w1, ()):
                            layer.append(Times(s, t))
            for w1 in range(2, w + 1):
                for w2 in range(2, w + 1):
                    if w1 + w2 > w:
                        break  # C(w1+w2, w2) >= w1+w2 > w already
                    if math.comb(w1 + w2, w2) == w:
                        for s in by_w.get(w1, ()):
                            for t in by_w.get(w2, ()):
                                layer.append(Choose(s, t))
            for w1 in range(3, w + 1):
                if math.factorial(w1) == w:
                    layer.extend(Fact(s) for s in by_w.get(w1, ()))
                if math.factorial(w1) > w:
                    break
            if w >= 4 and w.bit_count() == 1:
                w1 = w.bit_length() - 1
                if w1 >= 2:
                    layer.extend(Exp2(s) for s in by_w.get(w1, ()))
            if w == 3:
                layer.extend(Var(i) for i in range(1, m + 1))
        total += len(layer)
        if total > max_count:
            raise BudgetExceeded(
                f"more than {max_count} normal forms up to weight {w}",
                total)
        by_w[w] = layer
    return by_w


def count_normal_forms(m: int, k_max: int) -> int:
    """Number of counted normal forms of weight at most ``k_max``."""
    return sum(len(v) for v in enumerate_normal_forms(m, k_max).values())


# ---------------------------------------------------------------------------
# The truncated algebra

def _compact(t: Term) -> str:
    return print_term(t).replace(" ", "")


def build_truncated(m: int, K: int,
                    max_count: int = 5000) -> FiniteAlgebra:
    """Finite pow-free algebra on the counted normal forms of weight <= K
    plus one sink named ``TOP``.

    Operations compose representatives and renormalise; results that stay
    counted and inside the weight cap name their class, everything else
    falls to the sink.  Sink arithmetic mirrors what rewriting can still
    recover: adding the sink is absorbing, multiplying it by the 0 class
    gives 0, multiplying by the 1 class stays sunk, and a binomial against
    the 0 class collapses to 1.  All 13 rewrite rules hold as equations.
    """
    if K < 3:
        raise ValueError("the truncation needs K >= 3")
    by_w = enumerate_normal_forms(m, K, max_count=max_count)
    terms: list[Term] = []
    for w in range(K + 1):
        terms.extend(sorted(by_w.get(w, ()), key=_compact))
    names = tuple(_compact(t) for t in terms) + (TOP_NAME,)
    index = {t: i for i, t in enumerate(terms)}
    top = len(terms)
    id_zero = index[ZERO]
    id_one = index[ONE]

    def classify(t: Term) -> int:
        nf = omega_normalize(t)
        got = index.get(nf)
        if got is not None:
            return got
        # Either weight > K or a banned binomial shape at the root.
        return top

    def binop_cell(op: str, a: int, b: int) -> int:
        if a == top or b == top:
            if op == "plus":
                return top
            if op == "times":
                if a == id_zero or b == id_zero:
                    return id_zero
                return top
            # choose against the 0 class collapses by the one-sided rules
            if a == id_zero or b == id_zero:
                return id_one
            return top
        ctor = {"plus": Plus, "times": Times, "choose": Choose}[op]
        return classify(ctor(terms[a], terms[b]))

    def unop_cell(op: str, a: int) -> int:
        if a == top:
            return top
        ctor = {"fact": Fact, "exp2": Exp2}[op]
        return classify(ctor(terms[a]))

    n = top + 1
    binops = {op: tuple(tuple(binop_cell(op, a, b) for b in range(n))
                        for a in range(n))
              for op in ("choose", "plus", "times")}
    unops = {op: tuple(unop_cell(op, a) for a in range(n))
             for op in ("exp2", "fact")}
    return FiniteAlgebra(
        f"trunc(m={m},K={K})", names, COMB_SIG,
        consts={"const0": id_zero, "const1": id_one},
        unops=unops, binops=binops)


# ---------------------------------------------------------------------------
# Refutation by truncation


class TruncationError(RuntimeError):
    """The truncation identifies both sides (they meet in the sink), so it
    neither derives nor separates the equation."""


@dataclass(frozen=True)
class TruncationRefutation:
    """A finite model of all 13 rewrite rules in which the equation fails.

    ``witness`` sends each variable to its own class; re-evaluating both
    sides in ``model`` reproduces the recorded values.  ``bound`` is the
    decimal (or symbolic) value of the search bound the model size sits
    under.
    """

    model: FiniteAlgebra
    witness: Witness
    m: int
    K: int
    bound: str


def refute_via_truncation(eq: Equation) -> TruncationRefutation | None:
    """Decide derivability of ``eq`` from the 13 rewrite rules.

    Returns ``None`` when both sides share a normal form (derivable).
    Otherwise builds the truncated algebra at the weights of ``eq`` and
    evaluates both sides at the generic assignment; distinct values give
    a checked refutation.  If the sides collide in the sink the method is
    inconclusive and :class:`TruncationError` is raised.
    """
    if "pow" in eq.signature():
        raise ValueError("^ is outside the rewriting fragment")
    if omega_normalize(eq.lhs) == omega_normalize(eq.rhs):
        return None
    orig_vars = sorted(eq.variables())
    canon = {v: i + 1 for i, v in enumerate(orig_vars)}
    m = len(orig_vars)
    K = _weight_cap(eq)
    alg = build_truncated(m, K)
    asg = {v: alg.element_id(_compact(Var(canon[v]))) for v in orig_vars}
    lv = eval_alg(eq.lhs, alg, asg)
    rv = eval_alg(eq.rhs, alg, asg)
    if lv == rv:
        raise TruncationError(
            f"both sides of {eq} evaluate to {alg.elements[lv]} in the "
            f"truncation; the counted fragment cannot separate them")
    witness = Witness({v: alg.elements[asg[v]] for v in orig_vars},
                      alg.elements[lv], alg.elements[rv])
    return TruncationRefutation(alg, witness, m, K, bound_text(eq))


# ---------------------------------------------------------------------------
# Entailment from a finite set of valid equations


@dataclass(frozen=True)
class Entailment:
    """Outcome of :func:`decide_entailment`.

    ``status`` is ``entailed``, ``not-entailed`` or ``inconclusive``.
    For ``not-entailed`` the refuting model and its witness are included;
    for ``inconclusive`` the bound text says how far the search would
    have to go.
    """

    status: str
    reason: str
    model: FiniteAlgebra | None = None
    witness: Witness | None = None
    searched_to: int = 0
    bound: str = ""


def decide_entailment(sigma: Iterable[Equation], eq: Equation,
                      max_size: int = 3,
                      budget: int = 10 ** 8) -> Entailment:
    """Does every model of ``sigma`` plus the 13 rewrite rules satisfy
    ``eq``?  Decided by exhaustive model search up to ``max_size``.

    Every member of ``sigma`` must itself hold over the naturals (checked
    by sampling; a refuted premise raises ``ValueError``), which keeps
    the question aligned with the intended semantics.  A shared normal
    form settles entailment immediately.  Otherwise models over the
    ambient signature of the input are enumerated, constrained by
    ``sigma`` and by the rewrite rules expressible in that signature;
    the first countermodel settles the matter negatively.  Exhausting
    ``max_size`` below the bound is reported as inconclusive.
    """
    sigma = list(sigma)
    for s in sigma:
        if "pow" in s.signature():
            raise ValueError(f"premise {s} uses ^, outside the fragment")
        v = valid_on_nat(s)
        if not v.ok:
            asg, lv, rv = v.witness
            raise ValueError(
                f"premise {s} fails over the naturals at {asg}: "
                f"{lv} != {rv}")
    if "pow" in eq.signature():
        raise ValueError(f"{eq} uses ^, outside the fragment")
    if omega_normalize(eq.lhs) == omega_normalize(eq.rhs):
        return Entailment("entailed", "both sides share a normal form")
    ambient = eq.signature()
    for s in sigma:
        ambient |= s.signature()
    constraints = sigma + [r for r in OMEGA_RULES
                           if r.signature() <= ambient]
    for n in range(1, max_size + 1):
        for model in enumerate_models(n, ambient, constraints,
                                      budget=budget):
            verdict = satisfies(model, eq, budget=budget)
            if not verdict.ok:
                return Entailment(
                    "not-entailed",
                    f"countermodel with {n} elements",
                    model=model, witness=verdict.witness,
                    searched_to=n, bound=bound_text(eq))
    bound = bound_text(eq)
    try:
        exact = bound_B(eq)
    except BudgetExceeded:
        exact = None
    if exact is not None and max_size >= exact:
        return Entailment("entailed",
                          f"no countermodel up to the bound {bound}",
                          searched_to=max_size, bound=bound)
    return Entailment(
        "inconclusive",
        f"no countermodel up to size {max_size}; "
        f"certainty needs size {bound}",
        searched_to=max_size, bound=bound)
