"""Finite semirings carved out of a 3-uniform hypergraph, the equations
they detect, and the two checks tying everything together.

For a hypergraph H of girth at least 5 with no isolated vertices,
``build_sh`` makes a finite {+, *} structure from formal products of at
most three distinct generators: one generator per vertex, one class per
mergeable vertex pair inside an edge, a single element standing for every
product realising an edge, and an absorbing infinity.  Addition is
idempotent on equal elements and infinite otherwise; any product that
leaves the allowed shapes is infinite.  ``build_bh`` completes this with
numeral elements 0, 1, 2 and interprets the whole signature.

``tau_law`` writes down the one equation whose failure in the five-element
model detects a colouring of H; ``check_lemma2`` verifies that detection
both ways, and ``check_lemma3`` replays the finite construction that
identifies the quotient of a power of the five-element model with the
built B_H, the engine behind the unbounded-axiom-count argument.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .algebra import (
    BudgetExceeded, FiniteAlgebra, Witness, direct_power, is_congruence,
    is_isomorphic, quotient, satisfies, subalgebra_generated,
)
from .hypergraphs import Hypergraph, all_homs, find_hom, girth
from .models import algebra_B
from .terms import FULL_SIG, Equation, Term, Var, Times, Plus, eval_alg

__all__ = [
    "build_sh", "build_bh", "tau_law", "Lemma2Report", "check_lemma2",
    "Lemma3Report", "check_lemma3", "HOM_COUNT_CAP",
]

HOM_COUNT_CAP = 8


def _require_sparse(h: Hypergraph) -> None:
    g = girth(h)
    if g is not None and g < 5:
        raise ValueError(
            f"construction needs girth at least 5, found a {g}-cycle")
    iso = h.isolated_vertices()
    if iso:
        raise ValueError(f"construction forbids isolated vertices: {iso}")


class _PairClasses:
    """Vertex pairs inside edges, merged when a common third vertex
    completes both pairs to edges."""

    def __init__(self, h: Hypergraph):
        self.edge_set = {frozenset(e) for e in h.edges}
        pairs = sorted(
            {tuple(sorted(p)) for e in h.edges for p in combinations(e, 2)})
        self._parent = {p: p for p in pairs}
        for p1, p2 in combinations(pairs, 2):
            for w in range(h.n):
                if w in p1 or w in p2:
                    continue
                if (frozenset(p1) | {w}) in self.edge_set and \
                        (frozenset(p2) | {w}) in self.edge_set:
                    self._union(p1, p2)
                    break
        self.members: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for p in pairs:
            self.members.setdefault(self._find(p), []).append(p)

    def _find(self, p):
        while self._parent[p] != p:
            self._parent[p] = self._parent[self._parent[p]]
            p = self._parent[p]
        return p

    def _union(self, p, q):
        rp, rq = self._find(p), self._find(q)
        if rp != rq:
            # keep the lexicographically least pair as the root
            lo, hi = sorted((rp, rq))
            self._parent[hi] = lo

    def class_of(self, u: int, v: int) -> tuple[int, int] | None:
        p = tuple(sorted((u, v)))
        if p not in self._parent:
            return None
        return self._find(p)


def _sh_elements(h: Hypergraph, pc: _PairClasses) -> list[tuple]:
    els: list[tuple] = [("inf",)]
    els.extend(("gen", v) for v in range(h.n))
    els.extend(("pair", root) for root in sorted(pc.members))
    els.append(("triple",))
    return els


def _sh_name(desc: tuple) -> str:
    if desc == ("inf",):
        return "inf"
    if desc == ("triple",):
        return "t"
    if desc[0] == "gen":
        return f"a{desc[1]}"
    u, v = desc[1]
    return f"p{u}_{v}"


def _sh_times(pc: _PairClasses, x: tuple, y: tuple) -> tuple:
    """Product of two formal generator products; falls to inf whenever the
    combined multiset repeats a generator or realises no edge shape."""
    if x == ("inf",) or y == ("inf",):
        return ("inf",)
    if x == ("triple",) or y == ("triple",):
        return ("inf",)  # at least four generators
    if x[0] == "pair" and y[0] == "pair":
        return ("inf",)
    if x[0] == "gen" and y[0] == "gen":
        u, v = x[1], y[1]
        if u == v:
            return ("inf",)
        root = pc.class_of(u, v)
        return ("pair", root) if root is not None else ("inf",)
    # one generator against one pair class
    gen, pair = (x, y) if x[0] == "gen" else (y, x)
    u = gen[1]
    outcomes = set()
    for p in pc.members[pair[1]]:
        if u in p:
            outcomes.add(("inf",))
        elif (frozenset(p) | {u}) in pc.edge_set:
            outcomes.add(("triple",))
        else:
            outcomes.add(("inf",))
    if len(outcomes) != 1:
        raise AssertionError(
            f"pair class {pair[1]} gives conflicting products with "
            f"generator {u}: {sorted(outcomes)}")
    return outcomes.pop()


def build_sh(h: Hypergraph, name: str | None = None) -> FiniteAlgebra:
    """The {+, *} structure on generators of ``h``; see the module
    docstring.  Requires girth at least 5 and no isolated vertices.

    Laws visible in every instance: x + x = x, distinct sums are inf,
    and x*x = inf for every element including inf itself.
    """
    _require_sparse(h)
    pc = _PairClasses(h)
    els = _sh_elements(h, pc)
    idx = {d: i for i, d in enumerate(els)}
    n = len(els)
    plus = tuple(tuple(i if i == j else idx[("inf",)] for j in range(n))
                 for i in range(n))
    times = tuple(tuple(idx[_sh_times(pc, els[i], els[j])]
                        for j in range(n))
                  for i in range(n))
    return FiniteAlgebra(
        name or "S_H", tuple(_sh_name(d) for d in els),
        frozenset({"plus", "times"}),
        consts={}, unops={}, binops={"plus": plus, "times": times})


def build_bh(h: Hypergraph, name: str | None = None) -> FiniteAlgebra:
    """S_H extended by numerals 0, 1, 2 and lifted to the full signature.

    The numeral block reproduces the five-element model's tables with
    every S_H element playing the role of a growing value; the remaining
    operations are definable and are filled in from the definitions:
    x C y = x + y + 1 unless a side is 0, x! = x*x unless x = 0, and
    exp2(x) = 1 + x.
    """
    sh = build_sh(h, name="carrier")
    nums = ("0", "1", "2")
    names = nums + sh.elements
    n = len(names)
    inf = 3 + sh.element_id("inf")

    def sh_id(i: int) -> int:
        return i - 3

    def plus_cell(i: int, j: int) -> int:
        if i > j:
            return plus_cell(j, i)
        if i == 0:
            return j
        if i <= 2 and j <= 2:
            return min(i + j, 2)
        if i <= 2:  # numeral 1 or 2 against an S_H element
            return inf
        return 3 + sh.binop("plus", sh_id(i), sh_id(j))

    def times_cell(i: int, j: int) -> int:
        if i > j:
            return times_cell(j, i)
        if i == 0:
            return 0
        if i == 1:
            return j
        if i == 2:
            return 2 if j == 2 else j
        return 3 + sh.binop("times", sh_id(i), sh_id(j))

    plus = tuple(tuple(plus_cell(i, j) for j in range(n)) for i in range(n))
    times = tuple(tuple(times_cell(i, j) for j in range(n))
                  for i in range(n))

    def pow_cell(i: int, j: int) -> int:
        if j == 0:
            return 1
        if i == 0:
            return 0
        if i == 1:
            return 1
        if j == 1:
            return i
        if i == 2:
            return 2 if j == 2 else inf
        return inf  # growing base, exponent at least 2 or growing

    pow_ = tuple(tuple(pow_cell(i, j) for j in range(n)) for i in range(n))
    choose = tuple(tuple(
        1 if 0 in (i, j) else plus[plus[i][j]][1] for j in range(n))
        for i in range(n))
    fact = tuple(1 if i == 0 else times[i][i] for i in range(n))
    exp2 = tuple(plus[1][i] for i in range(n))
    return FiniteAlgebra(
        name or f"B_H({n})", names, FULL_SIG,
        consts={"const0": 0, "const1": 1},
        unops={"fact": fact, "exp2": exp2},
        binops={"plus": plus, "times": times, "pow": pow_,
                "choose": choose})


# ---------------------------------------------------------------------------
# The detecting equation

def tau_law(h: Hypergraph) -> Equation:
    """Edge sum = edge sum + all-vertex product, vertex v as x(v+1).

    Edges contribute left-nested triple products in sorted edge order;
    the right side appends the left-nested product over all vertices.
    The five-element model satisfies this equation exactly when ``h`` has
    no colouring.
    """
    if h.n == 0 or not h.edges:
        raise ValueError("the law needs at least one edge")

    def product(vs) -> Term:
        t: Term = Var(vs[0] + 1)
        for v in vs[1:]:
            t = Times(t, Var(v + 1))
        return t

    edges = sorted(h.edges)
    lhs: Term = product(edges[0])
    for e in edges[1:]:
        lhs = Plus(lhs, product(e))
    rhs = Plus(lhs, product(list(h.vertices())))
    return Equation(lhs, rhs)


@dataclass
class Lemma2Report:
    """Both sides of the detection equivalence, checked independently.

    ``satisfied`` is the exhaustive model check of the edge-sum law;
    ``hom`` is a colouring or None; ``agree`` records the biconditional
    (satisfied exactly when no colouring exists).  When a colouring
    exists, ``hom_assignment_refutes`` tells whether reading it as a
    model assignment (a as a, 1 as 1) already falsifies the law; the
    model checker's own witness is independent of that and is always
    validated.
    """

    name: str
    satisfied: bool
    witness: Witness | None
    hom: dict[int, str] | None
    agree: bool
    hom_assignment_refutes: bool | None


def check_lemma2(h: Hypergraph, name: str = "H",
                 budget: int = 10 ** 9) -> Lemma2Report:
    law = tau_law(h)
    model = algebra_B()
    verdict = satisfies(model, law, budget=budget)
    hom = find_hom(h)
    agree = verdict.ok == (hom is None)
    hom_refutes = None
    if hom is not None:
        asg = {v + 1: model.element_id(hom[v]) for v in h.vertices()}
        hom_refutes = (eval_alg(law.lhs, model, asg)
                       != eval_alg(law.rhs, model, asg))
    return Lemma2Report(name, verdict.ok, verdict.witness, hom, agree,
                        hom_refutes)


# ---------------------------------------------------------------------------
# The power-quotient construction


@dataclass
class Lemma3Report:
    """Trace of the construction: colouring count, closure size inside
    the power, size of the ideal of tuples touching inf, congruence and
    isomorphism verdicts, and the element map when found."""

    name: str
    hom_count: int
    closure_size: int
    ideal_size: int
    quotient_size: int
    target_size: int
    congruence_ok: bool
    isomorphic: bool
    mapping: dict[str, str] | None
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.congruence_ok and self.isomorphic
                and not self.violations)


def check_lemma3(h: Hypergraph, name: str = "H") -> Lemma3Report:
    """Rebuild B_H inside a power of the five-element model.

    Takes the subalgebra of B^(colourings) generated by the per-vertex
    profile tuples (a where the colouring marks the vertex, 2 elsewhere)
    together with the constant tuples of 2 and inf, collapses the ideal
    of tuples with an inf coordinate to a point, and matches the quotient
    against ``build_bh(h)`` by isomorphism search.  Structural sanity of
    the closure is asserted along the way: a 0 or 1 coordinate occurs
    only in the corresponding constant tuple.
    """
    _require_sparse(h)
    homs = all_homs(h)
    if not homs:
        raise ValueError("the construction needs at least one colouring")
    if len(homs) > HOM_COUNT_CAP:
        raise BudgetExceeded(
            f"{len(homs)} colourings exceed the power cap", len(homs))
    base = algebra_B()
    power = direct_power(base, len(homs))
    id_a, id_1, id_2 = (base.element_id(x) for x in ("a", "1", "2"))
    id_0, id_inf = base.element_id("0"), base.element_id("inf")
    gens = [power.diagonal(id_2), power.diagonal(id_inf)]
    for v in h.vertices():
        gens.append(power.intern(tuple(
            id_a if phi[v] == "a" else id_2 for phi in homs)))
    closure, carrier_ids = subalgebra_generated(
        power, gens, name=f"C({name})")

    violations: list[str] = []
    ideal: list[str] = []
    for new_id, pid in enumerate(carrier_ids):
        coords = power.coords(pid)
        label = closure.elements[new_id]
        if id_0 in coords and any(c != id_0 for c in coords):
            violations.append(f"{label} mixes 0 with other coordinates")
        if id_1 in coords and any(c != id_1 for c in coords):
            violations.append(f"{label} mixes 1 with other coordinates")
        if id_inf in coords:
            ideal.append(label)

    partition: list[set[str]] = [set(ideal)]
    partition.extend({e} for e in closure.elements if e not in set(ideal))
    cong_ok, viol = is_congruence(closure, partition)
    if not cong_ok:
        violations.append(f"ideal collapse is not a congruence: {viol}")
        return Lemma3Report(name, len(homs), len(closure), len(ideal),
                            0, 0, False, False, None, violations)
    q = quotient(closure, partition, name=f"C({name})/ideal")
    target = build_bh(h, name=f"B_H({name})")
    iso, mapping = is_isomorphic(q, target)
    return Lemma3Report(name, len(homs), len(closure), len(ideal),
                        len(q), len(target), True, iso, mapping,
                        violations)
