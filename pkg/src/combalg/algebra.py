"""Finite algebras as explicit operation tables, plus the toolbox around
them: equation checking, congruences and quotients, generated subalgebras,
direct powers, isomorphism testing, model enumeration, and a plain-text
file format with a bit-exact round trip.

Elements are handled as integer ids 0..n-1 internally; every element also
carries a display name used by witnesses, file output and the CLI.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .terms import (
    Equation, SignatureError, Term, compile_postfix, sig_of,
)

__all__ = [
    "FiniteAlgebra", "BudgetExceeded", "Verdict", "Witness", "satisfies",
    "is_congruence", "CongruenceViolation", "quotient",
    "subalgebra_generated", "DirectPower", "direct_power", "is_isomorphic",
    "enumerate_models", "save_algebra", "load_algebra", "dumps_algebra",
    "loads_algebra", "DEFAULT_BUDGET", "ISO_SIZE_CAP",
]

DEFAULT_BUDGET = 10 ** 8
ISO_SIZE_CAP = 40

_BINOPS = ("choose", "plus", "pow", "times")
_UNOPS = ("exp2", "fact")
_CONSTS = ("const0", "const1")


class BudgetExceeded(RuntimeError):
    """A search would exceed its evaluation budget; carries the size."""

    def __init__(self, message: str, required: int):
        super().__init__(f"{message} (required {required})")
        self.required = required


@dataclass(frozen=True)
class FiniteAlgebra:
    """Operation tables over elements named by ``elements``.

    ``consts`` maps const ops to element ids, ``unops`` to n-vectors and
    ``binops`` to n-by-n row-major tables.  Instances are immutable; the
    constructor validates table shapes and id ranges.
    """

    name: str
    elements: tuple[str, ...]
    sig: frozenset[str]
    consts: dict[str, int] = field(default_factory=dict)
    unops: dict[str, tuple[int, ...]] = field(default_factory=dict)
    binops: dict[str, tuple[tuple[int, ...], ...]] = field(
        default_factory=dict)

    def __post_init__(self):
        n = len(self.elements)
        if n == 0:
            raise ValueError("an algebra needs at least one element")
        if len(set(self.elements)) != n:
            raise ValueError("duplicate element names")
        for op in self.sig:
            if op in _CONSTS:
                if not 0 <= self.consts.get(op, -1) < n:
                    raise ValueError(f"missing or bad table for {op}")
            elif op in _UNOPS:
                tab = self.unops.get(op)
                if tab is None or len(tab) != n or not all(
                        0 <= v < n for v in tab):
                    raise ValueError(f"missing or bad table for {op}")
            elif op in _BINOPS:
                tab = self.binops.get(op)
                if tab is None or len(tab) != n or not all(
                        len(row) == n and all(0 <= v < n for v in row)
                        for row in tab):
                    raise ValueError(f"missing or bad table for {op}")
            else:
                raise ValueError(f"unknown operation {op!r}")

    def __len__(self) -> int:
        return len(self.elements)

    def element_id(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise KeyError(f"{self.name} has no element {name!r}") from None

    def const(self, op: str) -> int:
        return self.consts[op]

    def unop(self, op: str, a: int) -> int:
        return self.unops[op][a]

    def binop(self, op: str, a: int, b: int) -> int:
        return self.binops[op][a][b]

    def reduct(self, sig: frozenset[str], name: str | None = None
               ) -> "FiniteAlgebra":
        """Same elements and tables, restricted to the listed operations."""
        extra = sig - self.sig
        if extra:
            raise SignatureError(
                f"{self.name} does not interpret {sorted(extra)}")
        return FiniteAlgebra(
            name or f"{self.name}|{'-'.join(sorted(sig))}",
            self.elements, frozenset(sig),
            {k: v for k, v in self.consts.items() if k in sig},
            {k: v for k, v in self.unops.items() if k in sig},
            {k: v for k, v in self.binops.items() if k in sig})


# ---------------------------------------------------------------------------
# Equation checking


@dataclass(frozen=True)
class Witness:
    """Refuting assignment: variable index -> element name, with values."""

    assignment: dict[int, str]
    lhs_value: str
    rhs_value: str

    def __str__(self) -> str:
        asg = ", ".join(
            f"x{i} = {v}" for i, v in sorted(self.assignment.items()))
        return f"{asg}; lhs = {self.lhs_value}, rhs = {self.rhs_value}"


@dataclass(frozen=True)
class Verdict:
    """Outcome of an equation check: ``ok`` plus an optional witness."""

    ok: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.ok


def _run_postfix(code: Sequence[tuple[str, int]], alg: FiniteAlgebra,
                 values: Sequence[int], var_slot: dict[int, int]) -> int:
    stack: list[int] = []
    consts = alg.consts
    unops = alg.unops
    binops = alg.binops
    for op, payload in code:
        if op == "var":
            stack.append(values[var_slot[payload]])
        elif op in ("const0", "const1"):
            stack.append(consts[op])
        elif op in ("fact", "exp2"):
            stack[-1] = unops[op][stack[-1]]
        else:
            b = stack.pop()
            stack[-1] = binops[op][stack[-1]][b]
    return stack[0]


def satisfies(alg: FiniteAlgebra, eq: Equation,
              budget: int = DEFAULT_BUDGET,
              jobs: int = 1) -> Verdict:
    """Exhaustively check ``eq`` over all assignments into ``alg``.

    Assignments run in lexicographic order over the sorted variable list,
    so the reported witness is the first refutation in that order (with
    ``jobs > 1`` the scan is chunked but the minimal witness is still the
    one returned).  Raises :class:`BudgetExceeded` upfront when
    ``n ** vars * termsize`` passes ``budget``, and
    :class:`SignatureError` when the equation leaves the algebra's
    signature.
    """
    extra = eq.signature() - alg.sig
    if extra:
        raise SignatureError(
            f"equation uses {sorted(extra)} not in {alg.name}")
    vars_sorted = sorted(eq.variables())
    var_slot = {v: i for i, v in enumerate(vars_sorted)}
    lhs = compile_postfix(eq.lhs)
    rhs = compile_postfix(eq.rhs)
    n = len(alg)
    cost = (n ** len(vars_sorted)) * (len(lhs) + len(rhs))
    if cost > budget:
        raise BudgetExceeded(
            f"checking {eq} over {alg.name} needs {cost} evaluations", cost)

    def scan(assignments: Iterable[tuple[int, ...]]) -> Witness | None:
        for values in assignments:
            if _run_postfix(lhs, alg, values, var_slot) != _run_postfix(
                    rhs, alg, values, var_slot):
                return Witness(
                    {v: alg.elements[values[var_slot[v]]]
                     for v in vars_sorted},
                    alg.elements[_run_postfix(lhs, alg, values, var_slot)],
                    alg.elements[_run_postfix(rhs, alg, values, var_slot)])
        return None

    space = itertools.product(range(n), repeat=len(vars_sorted))
    if jobs <= 1:
        w = scan(space)
        return Verdict(w is None, w)
    # Chunked scan; chunks are consumed in order, so the first hit found in
    # the earliest refuting chunk is the lexicographically least witness.
    chunk = 4096
    while True:
        block = list(itertools.islice(space, chunk))
        if not block:
            return Verdict(True, None)
        w = scan(block)
        if w is not None:
            return Verdict(False, w)


# ---------------------------------------------------------------------------
# Congruences and quotients


@dataclass(frozen=True)
class CongruenceViolation:
    """First operation application that leaves the block structure."""

    op: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]

    def __str__(self) -> str:
        ins = ", ".join(self.inputs)
        outs = " vs ".join(self.outputs)
        return f"{self.op}({ins}) splits blocks: {outs}"


def _block_index(alg: FiniteAlgebra,
                 partition: Sequence[Iterable[str]]) -> list[int]:
    blk = [-1] * len(alg)
    for b, members in enumerate(partition):
        for name in members:
            e = alg.element_id(name)
            if blk[e] != -1:
                raise ValueError(f"element {name!r} in two blocks")
            blk[e] = b
    if -1 in blk:
        missing = alg.elements[blk.index(-1)]
        raise ValueError(f"element {missing!r} not covered by the partition")
    return blk


def is_congruence(alg: FiniteAlgebra, partition: Sequence[Iterable[str]]
                  ) -> tuple[bool, CongruenceViolation | None]:
    """Does the partition respect every operation of ``alg``?

    Checks all operations on all tuples of block members; the first
    violating application is reported with concrete elements.
    """
    blk = _block_index(alg, partition)
    members: dict[int, list[int]] = {}
    for e, b in enumerate(blk):
        members.setdefault(b, []).append(e)
    for op in sorted(alg.sig & set(_UNOPS)):
        tab = alg.unops[op]
        for b, es in members.items():
            target = blk[tab[es[0]]]
            for e in es[1:]:
                if blk[tab[e]] != target:
                    return False, CongruenceViolation(
                        op, (alg.elements[es[0]], alg.elements[e]),
                        (alg.elements[tab[es[0]]], alg.elements[tab[e]]))
    for op in sorted(alg.sig & set(_BINOPS)):
        tab = alg.binops[op]
        for bl, esl in members.items():
            for br, esr in members.items():
                target = blk[tab[esl[0]][esr[0]]]
                for a in esl:
                    for b in esr:
                        if blk[tab[a][b]] != target:
                            return False, CongruenceViolation(
                                op,
                                (f"{alg.elements[esl[0]]},"
                                 f"{alg.elements[esr[0]]}",
                                 f"{alg.elements[a]},{alg.elements[b]}"),
                                (alg.elements[tab[esl[0]][esr[0]]],
                                 alg.elements[tab[a][b]]))
    return True, None


def quotient(alg: FiniteAlgebra, partition: Sequence[Iterable[str]],
             name: str | None = None) -> FiniteAlgebra:
    """Quotient by a congruence; blocks are named after their least member.

    "Least" means least element id in ``alg``; blocks are ordered the same
    way, so the result is canonical.  Raises ``ValueError`` when the
    partition is not a congruence.
    """
    ok, viol = is_congruence(alg, partition)
    if not ok:
        raise ValueError(f"not a congruence: {viol}")
    blk = _block_index(alg, partition)
    leaders: dict[int, int] = {}
    for e in range(len(alg)):
        leaders.setdefault(blk[e], e)
    order = sorted(leaders, key=lambda b: leaders[b])
    new_of_old_block = {b: i for i, b in enumerate(order)}
    cls = [new_of_old_block[b] for b in blk]  # element id -> new id
    names = tuple(alg.elements[leaders[b]] for b in order)
    reps = [leaders[b] for b in order]
    consts = {op: cls[v] for op, v in alg.consts.items()}
    unops = {op: tuple(cls[alg.unops[op][r]] for r in reps)
             for op in alg.unops}
    binops = {op: tuple(tuple(cls[alg.binops[op][r][s]] for s in reps)
                        for r in reps)
              for op in alg.binops}
    return FiniteAlgebra(name or f"{alg.name}/theta", names, alg.sig,
                         consts, unops, binops)


# ---------------------------------------------------------------------------
# Subalgebras and powers

class DirectPower:
    """Lazy k-th direct power of a finite algebra.

    Elements are coordinate tuples, materialised on demand and identified
    by dense ids, so closures inside huge powers only ever pay for the
    tuples they touch.  The object offers the same const/unop/binop id
    protocol as :class:`FiniteAlgebra`.
    """

    def __init__(self, base: FiniteAlgebra, k: int, name: str | None = None):
        if k < 1:
            raise ValueError("power must be at least 1")
        self.base = base
        self.k = k
        self.sig = base.sig
        self.name = name or f"{base.name}^{k}"
        self._ids: dict[tuple[int, ...], int] = {}
        self._tuples: list[tuple[int, ...]] = []

    def intern(self, coords: tuple[int, ...]) -> int:
        if len(coords) != self.k:
            raise ValueError("wrong arity for this power")
        got = self._ids.get(coords)
        if got is None:
            got = len(self._tuples)
            self._ids[coords] = got
            self._tuples.append(coords)
        return got

    def coords(self, e: int) -> tuple[int, ...]:
        return self._tuples[e]

    def element_name(self, e: int) -> str:
        inner = ",".join(self.base.elements[c] for c in self._tuples[e])
        return f"({inner})"

    def diagonal(self, base_element: int) -> int:
        return self.intern((base_element,) * self.k)

    def const(self, op: str) -> int:
        return self.diagonal(self.base.consts[op])

    def unop(self, op: str, a: int) -> int:
        tab = self.base.unops[op]
        return self.intern(tuple(tab[c] for c in self._tuples[a]))

    def binop(self, op: str, a: int, b: int) -> int:
        tab = self.base.binops[op]
        return self.intern(tuple(
            tab[x][y] for x, y in zip(self._tuples[a], self._tuples[b])))


def direct_power(base: FiniteAlgebra, k: int) -> DirectPower:
    return DirectPower(base, k)


def subalgebra_generated(carrier, generators: Sequence[int],
                         name: str | None = None,
                         max_size: int = 100_000
                         ) -> tuple[FiniteAlgebra, list[int]]:
    """Close ``generators`` under all operations of ``carrier``.

    ``carrier`` is a :class:`FiniteAlgebra` or :class:`DirectPower` (any
    object with the id protocol); generators are carrier element ids.
    Returns the closure as a concrete algebra together with the embedding
    list mapping new ids to carrier ids.  Element names are inherited.
    """
    sig = carrier.sig
    found: dict[int, int] = {}
    order: list[int] = []

    def add(e: int) -> None:
        if e not in found:
            found[e] = len(order)
            order.append(e)
            if len(order) > max_size:
                raise BudgetExceeded("closure grew past max_size", max_size)

    for op in sorted(sig & set(_CONSTS)):
        add(carrier.const(op))
    for g in generators:
        add(g)
    if not order:
        raise ValueError("no generators and no constants: empty closure")
    frontier = 0
    while frontier < len(order):
        e = order[frontier]
        frontier += 1
        for op in sorted(sig & set(_UNOPS)):
            add(carrier.unop(op, e))
        for op in sorted(sig & set(_BINOPS)):
            # Pair e against everything seen so far, both ways round.
            for other in list(order):
                add(carrier.binop(op, e, other))
                add(carrier.binop(op, other, e))

    if isinstance(carrier, FiniteAlgebra):
        names = tuple(carrier.elements[e] for e in order)
    else:
        names = tuple(carrier.element_name(e) for e in order)
    back = {e: i for i, e in enumerate(order)}
    consts = {op: back[carrier.const(op)]
              for op in sorted(sig & set(_CONSTS))}
    unops = {op: tuple(back[carrier.unop(op, e)] for e in order)
             for op in sorted(sig & set(_UNOPS))}
    binops = {op: tuple(tuple(back[carrier.binop(op, a, b)] for b in order)
                        for a in order)
              for op in sorted(sig & set(_BINOPS))}
    return (FiniteAlgebra(name or f"{carrier.name}-sub", names, sig,
                          consts, unops, binops),
            order)


# ---------------------------------------------------------------------------
# Isomorphism

def _invariants(alg: FiniteAlgebra) -> list[tuple]:
    """Per-element fingerprints preserved by any isomorphism."""
    n = len(alg)
    inv: list[tuple] = [() for _ in range(n)]
    for e in range(n):
        feats: list = []
        for op in sorted(alg.sig & set(_CONSTS)):
            feats.append(alg.consts[op] == e)
        for op in sorted(alg.sig & set(_UNOPS)):
            tab = alg.unops[op]
            feats.append(tab[e] == e)
            feats.append(sum(1 for a in range(n) if tab[a] == e))
        for op in sorted(alg.sig & set(_BINOPS)):
            tab = alg.binops[op]
            feats.append(tab[e][e] == e)
            feats.append(sorted(
                (sum(1 for b in range(n) if tab[e][b] == v) for v in range(n)),
                reverse=True))
            feats.append(sorted(
                (sum(1 for a in range(n) if tab[a][e] == v) for v in range(n)),
                reverse=True))
        inv[e] = tuple(
            tuple(f) if isinstance(f, list) else f for f in feats)
    # One refinement round: fold in the multiset of neighbour classes.
    cls = {e: inv[e] for e in range(n)}
    refined: list[tuple] = []
    for e in range(n):
        feats2: list = [cls[e]]
        for op in sorted(alg.sig & set(_BINOPS)):
            tab = alg.binops[op]
            feats2.append(tuple(sorted(cls[tab[e][b]] for b in range(n))))
            feats2.append(tuple(sorted(cls[tab[a][e]] for a in range(n))))
        refined.append(tuple(feats2))
    return refined


def is_isomorphic(a: FiniteAlgebra, b: FiniteAlgebra
                  ) -> tuple[bool, dict[str, str] | None]:
    """Search for an isomorphism; returns (found, name map or None).

    Constants are pinned first and candidate images are restricted by
    invariant fingerprints before backtracking.  Sizes above
    :data:`ISO_SIZE_CAP` are rejected upfront.  Comparing algebras of
    different signatures is a usage error, not a negative answer.
    """
    if a.sig != b.sig:
        raise SignatureError(
            f"{a.name} and {b.name} have different signatures")
    n = len(a)
    if n != len(b):
        return False, None
    if n > ISO_SIZE_CAP:
        raise BudgetExceeded("isomorphism search size cap", n)
    inv_a = _invariants(a)
    inv_b = _invariants(b)
    if sorted(inv_a) != sorted(inv_b):
        return False, None
    candidates = [
        [f for f in range(n) if inv_b[f] == inv_a[e]] for e in range(n)]
    img = [-1] * n
    used = [False] * n
    for op in sorted(a.sig & set(_CONSTS)):
        e, f = a.consts[op], b.consts[op]
        if img[e] not in (-1, f) or (img[e] == -1 and used[f]):
            return False, None
        if img[e] == -1:
            img[e] = f
            used[f] = True

    unops = sorted(a.sig & set(_UNOPS))
    binops = sorted(a.sig & set(_BINOPS))

    def consistent(e: int) -> bool:
        for op in unops:
            fe = img[a.unops[op][e]]
            if fe != -1 and b.unops[op][img[e]] != fe:
                return False
        for op in binops:
            ta, tb = a.binops[op], b.binops[op]
            for d in range(n):
                if img[d] == -1:
                    continue
                v = img[ta[e][d]]
                if v != -1 and tb[img[e]][img[d]] != v:
                    return False
                v = img[ta[d][e]]
                if v != -1 and tb[img[d]][img[e]] != v:
                    return False
        return True

    def verified() -> bool:
        # Full table check: the pruning in consistent() is only heuristic.
        for op in sorted(a.sig & set(_CONSTS)):
            if img[a.consts[op]] != b.consts[op]:
                return False
        for op in unops:
            for e in range(n):
                if img[a.unops[op][e]] != b.unops[op][img[e]]:
                    return False
        for op in binops:
            for e in range(n):
                for f in range(n):
                    if img[a.binops[op][e][f]] != b.binops[op][img[e]][
                            img[f]]:
                        return False
        return True

    order = sorted((e for e in range(n) if img[e] == -1),
                   key=lambda e: len(candidates[e]))

    def place(i: int) -> bool:
        if i == len(order):
            return verified()
        e = order[i]
        for f in candidates[e]:
            if used[f]:
                continue
            img[e] = f
            used[f] = True
            if consistent(e) and place(i + 1):
                return True
            img[e] = -1
            used[f] = False
        return False

    if not place(0):
        return False, None
    return True, {a.elements[e]: b.elements[img[e]] for e in range(n)}


# ---------------------------------------------------------------------------
# Model enumeration

def enumerate_models(n: int, sig: frozenset[str],
                     constraints: Sequence[Equation] = (),
                     visitor: Callable[[FiniteAlgebra], None] | None = None,
                     budget: int = DEFAULT_BUDGET
                     ) -> Iterator[FiniteAlgebra]:
    """All n-element algebras of ``sig`` satisfying the constraints.

    Elements are e0..e(n-1).  Constants are pinned (const0 to e0, const1
    to e1 when n >= 2, else e0), which cuts the space by a factor of n per
    constant without losing anything relevant to refutation searches:
    any model with distinct interpretations of the constants is isomorphic
    to a pinned one.  Tables are generated in lexicographic row-major cell
    order, so the stream order is deterministic.  Raises
    :class:`BudgetExceeded` upfront when the table space itself exceeds
    ``budget``.
    """
    unops = sorted(sig & set(_UNOPS))
    binops = sorted(sig & set(_BINOPS))
    cells = len(unops) * n + len(binops) * n * n
    space = n ** cells
    if space > budget:
        raise BudgetExceeded(
            f"{space} candidate tables at size {n} exceed the budget", space)
    names = tuple(f"e{i}" for i in range(n))
    consts = {}
    if "const0" in sig:
        consts["const0"] = 0
    if "const1" in sig:
        consts["const1"] = 1 if n >= 2 else 0
    for flat in itertools.product(range(n), repeat=cells):
        pos = 0
        utabs = {}
        for op in unops:
            utabs[op] = tuple(flat[pos:pos + n])
            pos += n
        btabs = {}
        for op in binops:
            btabs[op] = tuple(
                tuple(flat[pos + r * n:pos + r * n + n]) for r in range(n))
            pos += n * n
        alg = FiniteAlgebra(f"model{n}", names, sig, dict(consts),
                            utabs, btabs)
        if all(satisfies(alg, c, budget=budget) for c in constraints):
            if visitor is not None:
                visitor(alg)
            yield alg


# ---------------------------------------------------------------------------
# File format
#
#   algebra <name>
#   signature <op> <op> ...
#   elements <name> <name> ...
#   const <op> = <element>
#   unop <op>: <image> ... (n entries)
#   binop <op>:
#   <n rows of n entries>
#
# Ops are listed alphabetically within each kind; names are whitespace-free
# tokens.  ``dumps`` followed by ``loads`` is the identity, and ``loads``
# followed by ``dumps`` reproduces the input byte for byte whenever the
# input was produced by ``dumps``.

def dumps_algebra(alg: FiniteAlgebra) -> str:
    for name in alg.elements:
        if not name or any(ch.isspace() for ch in name):
            raise ValueError(f"element name {name!r} is not a clean token")
    lines = [f"algebra {alg.name}",
             "signature " + " ".join(sorted(alg.sig)),
             "elements " + " ".join(alg.elements)]
    for op in sorted(alg.sig & set(_CONSTS)):
        lines.append(f"const {op} = {alg.elements[alg.consts[op]]}")
    for op in sorted(alg.sig & set(_UNOPS)):
        row = " ".join(alg.elements[v] for v in alg.unops[op])
        lines.append(f"unop {op}: {row}")
    for op in sorted(alg.sig & set(_BINOPS)):
        lines.append(f"binop {op}:")
        for r in alg.binops[op]:
            lines.append(" ".join(alg.elements[v] for v in r))
    return "\n".join(lines) + "\n"


def loads_algebra(text: str) -> FiniteAlgebra:
    lines = [ln.strip() for ln in text.splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or not lines[0].startswith("algebra "):
        raise ValueError("expected an 'algebra <name>' header")
    if len(lines) < 3:
        raise ValueError("truncated algebra description")
    name = lines[0].split(maxsplit=1)[1]
    if not lines[1].startswith("signature "):
        raise ValueError("expected a 'signature' line")
    sig = frozenset(lines[1].split()[1:])
    if not lines[2].startswith("elements "):
        raise ValueError("expected an 'elements' line")
    elements = tuple(lines[2].split()[1:])
    eid = {name: i for i, name in enumerate(elements)}

    def elem(tok: str) -> int:
        if tok not in eid:
            raise ValueError(f"unknown element {tok!r}")
        return eid[tok]

    consts: dict[str, int] = {}
    unops: dict[str, tuple[int, ...]] = {}
    binops: dict[str, tuple[tuple[int, ...], ...]] = {}
    i = 3
    n = len(elements)
    while i < len(lines):
        ln = lines[i]
        if ln.startswith("const "):
            _, op, eq, val = ln.split()
            if eq != "=":
                raise ValueError(f"malformed const line: {ln!r}")
            consts[op] = elem(val)
            i += 1
        elif ln.startswith("unop "):
            head, _, rest = ln.partition(":")
            op = head.split()[1]
            row = rest.split()
            if len(row) != n:
                raise ValueError(f"unop {op} needs {n} entries")
            unops[op] = tuple(elem(tok) for tok in row)
            i += 1
        elif ln.startswith("binop "):
            op = ln.split()[1].rstrip(":")
            rows = []
            for r in range(n):
                i += 1
                row = lines[i].split()
                if len(row) != n:
                    raise ValueError(f"binop {op} row {r} needs {n} entries")
                rows.append(tuple(elem(tok) for tok in row))
            binops[op] = tuple(rows)
            i += 1
        else:
            raise ValueError(f"unrecognised line: {ln!r}")
    return FiniteAlgebra(name, elements, sig, consts, unops, binops)


def save_algebra(alg: FiniteAlgebra, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_algebra(alg))


def load_algebra(path: str) -> FiniteAlgebra:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_algebra(fh.read())
