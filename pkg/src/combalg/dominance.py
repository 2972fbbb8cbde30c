"""Eventual dominance of one-variable terms, decided through ordinals.

Within the fragment built from one variable, +, and a single "box"
operation (factorial or exp2), eventual growth order is a well-order:
translating x to 1, + to the natural (Hessenberg) sum and the box to
omega-exponentiation maps each term to an ordinal below epsilon_0 in
Cantor normal form, and larger ordinal means faster eventual growth.

The module provides the CNF arithmetic, the translation both ways, the
comparison, and two independent consistency probes: a syntactic
homeomorphic tree embedding (which forces pointwise dominance in this
fragment, every operation being monotone and at least its arguments on
values >= 1) and a numeric probe at geometrically spaced points.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .terms import (
    EvalBudgetError, Term, Var, Plus, Times, Pow, Fact, Exp2,
    ONE, children, eval_nat, kind, rebuild, variables,
)

__all__ = [
    "OrdinalCNF", "ORD_ZERO", "ORD_ONE", "OMEGA", "ordinal_from_int",
    "omega_pow", "ordinal_nat_sum", "ordinal_cmp", "pretty_ordinal",
    "FragmentError", "to_ordinal", "from_ordinal", "compare",
    "reduce_term", "is_reduced", "tree_embed", "ProbeResult",
    "numeric_probe", "BOXES",
]

BOXES = ("fact", "exp2")


@dataclass(frozen=True)
class OrdinalCNF:
    """Cantor normal form: sum of omega^exponent * coeff parts with
    strictly decreasing exponents and positive coefficients."""

    parts: tuple[tuple["OrdinalCNF", int], ...] = ()

    def __post_init__(self):
        for (e1, c1), (e2, _) in zip(self.parts, self.parts[1:]):
            if ordinal_cmp(e1, e2) <= 0:
                raise ValueError("exponents must strictly decrease")
        if any(c < 1 for _, c in self.parts):
            raise ValueError("coefficients must be positive")

    def is_zero(self) -> bool:
        return not self.parts

    def __str__(self) -> str:
        return pretty_ordinal(self)


ORD_ZERO = OrdinalCNF()
ORD_ONE = OrdinalCNF(((ORD_ZERO, 1),))
OMEGA = OrdinalCNF(((ORD_ONE, 1),))


def ordinal_from_int(n: int) -> OrdinalCNF:
    if n < 0:
        raise ValueError("ordinals here are nonnegative")
    return ORD_ZERO if n == 0 else OrdinalCNF(((ORD_ZERO, n),))


def omega_pow(e: OrdinalCNF, coeff: int = 1) -> OrdinalCNF:
    return OrdinalCNF(((e, coeff),))


def ordinal_cmp(a: OrdinalCNF, b: OrdinalCNF) -> int:
    """-1, 0 or 1; CNF compares lexicographically by (exponent, coeff)."""
    for (e1, c1), (e2, c2) in zip(a.parts, b.parts):
        s = ordinal_cmp(e1, e2)
        if s:
            return s
        if c1 != c2:
            return -1 if c1 < c2 else 1
    if len(a.parts) != len(b.parts):
        return -1 if len(a.parts) < len(b.parts) else 1
    return 0


def ordinal_nat_sum(a: OrdinalCNF, b: OrdinalCNF) -> OrdinalCNF:
    """Hessenberg sum: merge parts, adding coefficients on equal
    exponents; commutative and cancellative, unlike ordinary ordinal
    addition."""
    acc: list[tuple[OrdinalCNF, int]] = list(a.parts)
    for e, c in b.parts:
        for i, (e2, c2) in enumerate(acc):
            if ordinal_cmp(e, e2) == 0:
                acc[i] = (e2, c2 + c)
                break
        else:
            acc.append((e, c))
    acc.sort(key=functools.cmp_to_key(
        lambda p, q: ordinal_cmp(p[0], q[0])), reverse=True)
    return OrdinalCNF(tuple(acc))


def pretty_ordinal(a: OrdinalCNF) -> str:
    if a.is_zero():
        return "0"
    pieces = []
    for e, c in a.parts:
        if e.is_zero():
            pieces.append(str(c))
            continue
        if ordinal_cmp(e, ORD_ONE) == 0:
            base = "ω"
        else:
            inner = pretty_ordinal(e)
            base = f"ω^{inner}" if inner.isalnum() or inner == "ω" \
                else f"ω^({inner})"
        pieces.append(base if c == 1 else f"{base}*{c}")
    return " + ".join(pieces)


# ---------------------------------------------------------------------------
# Terms of the fragment


class FragmentError(ValueError):
    """Term outside the one-variable {+, box} fragment."""


def _box_type(box: str):
    if box == "fact":
        return Fact
    if box == "exp2":
        return Exp2
    raise ValueError(f"box must be one of {BOXES}")


def to_ordinal(t: Term, box: str) -> OrdinalCNF:
    """Translate a fragment term: x to 1, + to the natural sum, the box
    to omega-exponentiation.  Raises :class:`FragmentError` on anything
    else (constants included)."""
    bt = _box_type(box)
    if len(variables(t)) > 1:
        raise FragmentError("the fragment is one-variable")

    def walk(s: Term) -> OrdinalCNF:
        c = type(s)
        if c is Var:
            return ORD_ONE
        if c is Plus:
            return ordinal_nat_sum(walk(s.l), walk(s.r))
        if c is bt:
            return omega_pow(walk(s.arg))
        raise FragmentError(
            f"node {kind(s)} is outside the {{x, +, {box}}} fragment")

    return walk(t)


def from_ordinal(a: OrdinalCNF, box: str, var: int = 1) -> Term:
    """Canonical fragment term for a positive ordinal: parts in CNF
    order, each part as coeff copies of box(term of exponent), with
    exponent 0 giving the bare variable; the sum is left-nested."""
    bt = _box_type(box)
    if a.is_zero():
        raise ValueError("no fragment term has ordinal 0")
    pieces: list[Term] = []
    for e, c in a.parts:
        piece = Var(var) if e.is_zero() else bt(from_ordinal(e, box, var))
        pieces.extend([piece] * c)
    t = pieces[0]
    for p in pieces[1:]:
        t = Plus(t, p)
    return t


def compare(s: Term, t: Term, box: str) -> str:
    """``less``, ``equal`` or ``greater``: eventual growth order of the
    two fragment terms, decided by comparing their ordinals."""
    c = ordinal_cmp(to_ordinal(s, box), to_ordinal(t, box))
    return ("less", "equal", "greater")[c + 1]


# ---------------------------------------------------------------------------
# Reduced terms and the syntactic embedding

def _reduce_root(t: Term) -> Term | None:
    c = type(t)
    if c is Pow and t.l == ONE:
        return ONE
    if c is Times:
        if t.l == ONE:
            return t.r
        if t.r == ONE:
            return t.l
    if c is Fact and t.arg == ONE:
        return ONE
    return None


def reduce_term(t: Term) -> Term:
    """Innermost fixpoint of 1^s -> 1, 1*s -> s, s*1 -> s, 1! -> 1.

    Removes the shapes whose growth is degenerate, so that the syntactic
    embedding below is growth-faithful."""
    done: dict[int, Term] = {}
    stack: list[tuple[Term, bool]] = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if not expanded:
            stack.append((node, True))
            for ch in children(node):
                stack.append((ch, False))
            continue
        kids = tuple(done[id(ch)] for ch in children(node))
        cur = rebuild(node, kids) if kids else node
        while (step := _reduce_root(cur)) is not None:
            cur = step
        done[id(node)] = cur
    return done[id(t)]


def is_reduced(t: Term) -> bool:
    return t == reduce_term(t)


_COMMUTATIVE = {"plus", "times", "choose"}


def _label(t: Term) -> tuple:
    return ("var", t.index) if type(t) is Var else (kind(t),)


def _indexed(t: Term) -> tuple[list[tuple], list[tuple[int, ...]]]:
    """Postorder labels and child index lists; the root comes last."""
    labels: list[tuple] = []
    kids: list[tuple[int, ...]] = []
    stack: list[tuple[Term, object, list[int]]] = [(t, iter(children(t)), [])]
    while stack:
        node, it, acc = stack[-1]
        child = next(it, None)
        if child is None:
            labels.append(_label(node))
            kids.append(tuple(acc))
            stack.pop()
            if stack:
                stack[-1][2].append(len(labels) - 1)
        else:
            stack.append((child, iter(children(child)), []))
    return labels, kids


def tree_embed(s: Term, t: Term) -> bool:
    """Homeomorphic embedding: map ``s`` into ``t`` preserving labels,
    sending children into disjoint child subtrees (order-blind for the
    commutative operations, ordered for ^).

    On reduced one-variable terms over {+, *, !, exp2} an embedding
    forces s(x) <= t(x) for every x >= 1: each of these operations is
    monotone and bounds its arguments from below on values >= 1.
    """
    sl, sk = _indexed(s)
    tl, tk = _indexed(t)
    # children precede parents in postorder, so every cell only needs
    # rows and columns already filled
    table = [[False] * len(tl) for _ in sl]
    for ti, (tlab, tch) in enumerate(zip(tl, tk)):
        for si, row in enumerate(table):
            ok = False
            for c in tch:
                if row[c]:
                    ok = True
                    break
            if not ok and sl[si] == tlab:
                sch = sk[si]
                if not sch:
                    ok = True
                elif len(sch) == 1:
                    ok = table[sch[0]][tch[0]]
                else:
                    a, b = sch
                    ok = table[a][tch[0]] and table[b][tch[1]]
                    if not ok and tlab[0] in _COMMUTATIVE:
                        ok = table[a][tch[1]] and table[b][tch[0]]
            row[ti] = ok
    return table[-1][-1]


# ---------------------------------------------------------------------------
# Numeric probing


@dataclass(frozen=True)
class ProbeResult:
    """Signs of s - t at x = 1, 2, 4, ...; the verdict reads the trailing
    run of constant sign (strict verdicts need a run of three).

    ``crossover`` is the first probe point of that final run for a strict
    verdict.  ``truncated`` records that evaluation hit its size budget
    before the point limit, so the verdict only speaks for the sampled
    range.
    """

    verdict: str
    crossover: int | None
    points: tuple[tuple[int, int], ...]  # (x, sign of s - t)
    truncated: bool


def numeric_probe(s: Term, t: Term, max_points: int = 20,
                  max_bits: int = 200_000) -> ProbeResult:
    """Compare exact values at geometric points; see :class:`ProbeResult`.

    Every variable in either term receives the same probe value.  Raises
    :class:`~combalg.terms.EvalBudgetError` only when not a single point
    evaluates within budget.
    """
    vs = variables(s) | variables(t)
    pts: list[tuple[int, int]] = []
    truncated = False
    x = 1
    for _ in range(max_points):
        asg = {v: x for v in vs}
        try:
            sv = eval_nat(s, asg, max_bits=max_bits)
            tv = eval_nat(t, asg, max_bits=max_bits)
        except EvalBudgetError:
            truncated = True
            break
        pts.append((x, 0 if sv == tv else (-1 if sv < tv else 1)))
        x *= 2
    if not pts:
        raise EvalBudgetError("probe budget exhausted before any point")
    run_sign = pts[-1][1]
    run_start = len(pts) - 1
    while run_start > 0 and pts[run_start - 1][1] == run_sign:
        run_start -= 1
    run_len = len(pts) - run_start
    if run_sign == 0:
        verdict, crossover = "tied", None
    elif run_len >= 3:
        verdict = "less" if run_sign < 0 else "greater"
        crossover = pts[run_start][0]
    else:
        verdict, crossover = "tied", None
    return ProbeResult(verdict, crossover, tuple(pts), truncated)
