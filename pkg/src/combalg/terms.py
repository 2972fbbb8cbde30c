"""Terms over the arithmetic signature {+, *, ^, C, !, exp2, 0, 1}.

This module is the shared currency of the package: immutable term trees,
a small concrete syntax with parser and printer, exact evaluation over the
naturals, evaluation in finite operation-table algebras, the weight measure
used by the truncation machinery, and the oriented unit/zero rewriting
system that every other component leans on.

Conventions baked in throughout:

* ``x ^ 0 == 1`` for every ``x``, including ``0 ^ 0 == 1``.
* ``x C y`` is the total binomial operation ``comb(x + y, y)``.
* ``exp2(x) == 2 ** x`` and ``x!`` is the ordinary factorial.

All evaluation is exact big-integer arithmetic.  To stay responsive on
adversarial inputs (factorial towers and the like) evaluation enforces
explicit size budgets and raises :class:`EvalBudgetError` instead of
stalling; the budgets are generous enough that every documented check in
this package runs far below them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Mapping

__all__ = [
    "Term", "Var", "Zero", "One", "Plus", "Times", "Pow", "Choose", "Fact",
    "Exp2", "ZERO", "ONE", "Equation", "ParseError", "SignatureError",
    "EvalBudgetError", "FULL_SIG", "COMB_SIG", "SIG_ALIASES", "parse",
    "parse_equation", "print_term", "parse_signature", "eval_nat",
    "eval_alg", "weight", "omega_normalize", "all_rewrites", "OMEGA_RULES",
    "kind", "children", "rebuild", "subterms", "size", "variables",
    "sig_of", "compile_postfix", "MAX_FACT_ARG", "MAX_CHOOSE_ARG",
    "DEFAULT_MAX_BITS", "MAX_NUMERAL",
]


# ---------------------------------------------------------------------------
# Term representation


class _Structural:
    """Iterative structural equality, hash and repr.

    Dataclass-generated comparisons recurse through the tree; expanded
    numerals nest thousands deep, so every structural operation here runs
    on an explicit stack instead.
    """

    __slots__ = ()

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, _Structural):
            return NotImplemented
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            c = a.__class__
            if c is not b.__class__:
                return False
            if c is Var:
                if a.index != b.index:
                    return False
            elif c is Zero or c is One:
                continue
            elif c is Fact or c is Exp2:
                stack.append((a.arg, b.arg))
            else:
                stack.append((a.l, b.l))
                stack.append((a.r, b.r))
        return True

    def __hash__(self):
        done: dict[int, int] = {}
        stack: list[tuple["Term", bool]] = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if id(node) in done:
                continue
            c = node.__class__
            if c is Var:
                done[id(node)] = hash(("var", node.index))
            elif c is Zero:
                done[id(node)] = hash("zero")
            elif c is One:
                done[id(node)] = hash("one")
            elif expanded:
                kids = children(node)
                done[id(node)] = hash(
                    (kind(node),) + tuple(done[id(k)] for k in kids))
            else:
                stack.append((node, True))
                stack.extend((k, False) for k in children(node))
        return done[id(self)]

    def __repr__(self):
        return f"{self.__class__.__name__}<{print_term(self)}>"


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Var(_Structural):
    """Variable with 1-based index; ``x``, ``y``, ``z``, ``w`` alias x1..x4."""

    index: int


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Zero(_Structural):
    pass


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class One(_Structural):
    pass


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Plus(_Structural):
    l: "Term"
    r: "Term"


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Times(_Structural):
    l: "Term"
    r: "Term"


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Pow(_Structural):
    l: "Term"  # base
    r: "Term"  # exponent


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Choose(_Structural):
    l: "Term"
    r: "Term"


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Fact(_Structural):
    arg: "Term"


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Exp2(_Structural):
    arg: "Term"


Term = Var | Zero | One | Plus | Times | Pow | Choose | Fact | Exp2

ZERO = Zero()
ONE = One()

_BINARY = {Plus: "plus", Times: "times", Pow: "pow", Choose: "choose"}
_UNARY = {Fact: "fact", Exp2: "exp2"}
_BY_NAME = {
    "plus": Plus, "times": Times, "pow": Pow, "choose": Choose,
    "fact": Fact, "exp2": Exp2,
}

FULL_SIG = frozenset(
    {"plus", "times", "pow", "choose", "fact", "exp2", "const0", "const1"})
COMB_SIG = FULL_SIG - {"pow"}

# Named signature shorthand accepted wherever an op list is accepted.
SIG_ALIASES = {"full": FULL_SIG, "comb": COMB_SIG}

_OP_TOKENS = {
    "plus", "times", "pow", "choose", "fact", "exp2", "const0", "const1",
    "zero", "one",
}


def parse_signature(text: str) -> frozenset[str]:
    """Parse a dash- or space-separated op list, honouring SIG_ALIASES.

    ``zero`` and ``one`` are accepted as synonyms for ``const0``/``const1``.
    """
    text = text.strip()
    if text in SIG_ALIASES:
        return SIG_ALIASES[text]
    ops: set[str] = set()
    for tok in text.replace("-", " ").split():
        if tok in SIG_ALIASES:
            ops |= SIG_ALIASES[tok]
        elif tok in _OP_TOKENS:
            ops.add({"zero": "const0", "one": "const1"}.get(tok, tok))
        else:
            raise SignatureError(f"unknown operation token {tok!r}")
    if not ops:
        raise SignatureError("empty signature")
    return frozenset(ops)


def kind(t: Term) -> str:
    """Operation name of the root node; variables are ``var``."""
    c = type(t)
    if c in _BINARY:
        return _BINARY[c]
    if c in _UNARY:
        return _UNARY[c]
    if c is Var:
        return "var"
    return "const0" if c is Zero else "const1"


def children(t: Term) -> tuple[Term, ...]:
    c = type(t)
    if c in _BINARY:
        return (t.l, t.r)
    if c in _UNARY:
        return (t.arg,)
    return ()


def rebuild(t: Term, kids: tuple[Term, ...]) -> Term:
    """Copy of ``t`` with its children replaced (same arity required)."""
    c = type(t)
    if c in _BINARY:
        return c(kids[0], kids[1])
    if c in _UNARY:
        return c(kids[0])
    return t


def subterms(t: Term) -> Iterator[Term]:
    """All subterms of ``t`` in postorder, each occurrence once per position."""
    out: list[Term] = []
    stack: list[tuple[Term, bool]] = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            out.append(node)
        else:
            stack.append((node, True))
            for c in reversed(children(node)):
                stack.append((c, False))
    return iter(out)


def size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def variables(t: Term) -> set[int]:
    return {s.index for s in subterms(t) if type(s) is Var}


def sig_of(t: Term) -> frozenset[str]:
    """Smallest signature the term lives in (variables contribute nothing)."""
    return frozenset(kind(s) for s in subterms(t) if type(s) is not Var)


# ---------------------------------------------------------------------------
# Concrete syntax

# Precedence levels for printing: + < * < ^ < postfix ! < atoms.
_P_PLUS, _P_TIMES, _P_POW, _P_FACT, _P_ATOM = 1, 2, 3, 4, 5

MAX_NUMERAL = 9999


class ParseError(ValueError):
    """Syntax error, carrying the 0-based offset where parsing failed."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


class SignatureError(ValueError):
    """Operation used outside the declared signature, or a bad op list."""


_VAR_ALIASES = {"x": 1, "y": 2, "z": 3, "w": 4}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks: list[tuple[str, str, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha() and ch.islower():
            j = i
            while j < n and (text[j].islower() or text[j].isdigit()):
                j += 1
            toks.append(("name", text[i:j], i))
            i = j
            continue
        if ch in "+*^!(),C":
            toks.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(("end", "", n))
    return toks


class _Parser:
    """Recursive descent for the grammar:

    sum    := prod ("+" prod)*
    prod   := pow ("*" pow)*
    pow    := post ("^" pow)?
    post   := atom ("!")*
    atom   := "0" | "1" | numeral | var | "exp2" "(" sum ")"
            | "fact" "(" sum ")" | "choose" "(" sum "," sum ")"
            | "(" sum ")" | "(" sum "C" sum ")"

    Numerals k >= 2 expand to left-nested sums of 1.  The infix binomial
    form is always written parenthesised, and the parser accepts it in any
    atom position.
    """

    def __init__(self, toks: list[tuple[str, str, int]]):
        self.toks = toks
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, k: str) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        if tok[0] != k:
            raise ParseError(f"expected {k!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def sum(self) -> Term:
        t = self.prod()
        while self.peek()[0] == "+":
            self.take("+")
            t = Plus(t, self.prod())
        return t

    def prod(self) -> Term:
        t = self.pow()
        while self.peek()[0] == "*":
            self.take("*")
            t = Times(t, self.pow())
        return t

    def pow(self) -> Term:
        t = self.post()
        if self.peek()[0] == "^":
            self.take("^")
            return Pow(t, self.pow())
        return t

    def post(self) -> Term:
        t = self.atom()
        while self.peek()[0] == "!":
            self.take("!")
            t = Fact(t)
        return t

    def atom(self) -> Term:
        k, v, pos = self.peek()
        if k == "num":
            self.take("num")
            return _numeral(int(v), pos)
        if k == "name":
            self.take("name")
            if v == "exp2":
                self.take("(")
                t = self.sum()
                self.take(")")
                return Exp2(t)
            if v == "fact":
                self.take("(")
                t = self.sum()
                self.take(")")
                return Fact(t)
            if v == "choose":
                self.take("(")
                l = self.sum()
                self.take(",")
                r = self.sum()
                self.take(")")
                return Choose(l, r)
            return _variable(v, pos)
        if k == "(":
            self.take("(")
            l = self.sum()
            if self.peek()[0] == "C":
                self.take("C")
                r = self.sum()
                self.take(")")
                return Choose(l, r)
            self.take(")")
            return l
        raise ParseError(f"expected a term, found {v!r}", pos)


def _numeral(k: int, pos: int) -> Term:
    if k > MAX_NUMERAL:
        raise ParseError(f"numeral {k} exceeds the cap of {MAX_NUMERAL}", pos)
    if k == 0:
        return ZERO
    t: Term = ONE
    for _ in range(k - 1):
        t = Plus(t, ONE)
    return t


def _variable(name: str, pos: int) -> Term:
    if name in _VAR_ALIASES:
        return Var(_VAR_ALIASES[name])
    if name[0] == "x" and name[1:].isdigit():
        idx = int(name[1:])
        if idx >= 1:
            return Var(idx)
    raise ParseError(f"unknown name {name!r}", pos)


def parse(text: str, sig: frozenset[str] | None = None) -> Term:
    """Parse ``text`` to a term; with ``sig`` given, enforce the signature."""
    p = _Parser(_tokenize(text))
    t = p.sum()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    if sig is not None:
        extra = sig_of(t) - sig
        if extra:
            raise SignatureError(
                f"operations {sorted(extra)} outside signature {sorted(sig)}")
    return t


def print_term(t: Term) -> str:
    """Render ``t``; ``parse(print_term(t))`` is structurally ``t``."""
    # Iterative postorder so very deep sums (expanded numerals) print fine.
    done: dict[int, str] = {}
    stack: list[tuple[Term, bool]] = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if not expanded:
            stack.append((node, True))
            for c in children(node):
                stack.append((c, False))
            continue
        done[id(node)] = _render(node, done)
    return done[id(t)]


def _wrap(s: str, prec: int, least: int) -> str:
    return f"({s})" if prec < least else s


def _render(node: Term, done: dict[int, str]) -> str:
    c = type(node)
    if c is Var:
        return f"x{node.index}"
    if c is Zero:
        return "0"
    if c is One:
        return "1"
    if c is Plus:
        l = _wrap(done[id(node.l)], _prec(node.l), _P_PLUS)
        r = _wrap(done[id(node.r)], _prec(node.r), _P_TIMES)
        return f"{l} + {r}"
    if c is Times:
        l = _wrap(done[id(node.l)], _prec(node.l), _P_TIMES)
        r = _wrap(done[id(node.r)], _prec(node.r), _P_POW)
        return f"{l}*{r}"
    if c is Pow:
        l = _wrap(done[id(node.l)], _prec(node.l), _P_FACT)
        r = _wrap(done[id(node.r)], _prec(node.r), _P_POW)
        return f"{l}^{r}"
    if c is Fact:
        return _wrap(done[id(node.arg)], _prec(node.arg), _P_FACT) + "!"
    if c is Exp2:
        return f"exp2({done[id(node.arg)]})"
    return f"({done[id(node.l)]} C {done[id(node.r)]})"


def _prec(node: Term) -> int:
    c = type(node)
    if c is Plus:
        return _P_PLUS
    if c is Times:
        return _P_TIMES
    if c is Pow:
        return _P_POW
    if c is Fact:
        return _P_FACT
    return _P_ATOM


# ---------------------------------------------------------------------------
# Equations


@dataclass(frozen=True, slots=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{print_term(self.lhs)} = {print_term(self.rhs)}"

    def variables(self) -> set[int]:
        return variables(self.lhs) | variables(self.rhs)

    def signature(self) -> frozenset[str]:
        return sig_of(self.lhs) | sig_of(self.rhs)


def parse_equation(text: str, sig: frozenset[str] | None = None) -> Equation:
    """Parse ``lhs = rhs`` (a Unicode almost-equals separator also works)."""
    norm = text.replace("≈", "=")
    if norm.count("=") != 1:
        raise ParseError("an equation needs exactly one '='", norm.find("="))
    l, r = norm.split("=")
    return Equation(parse(l, sig), parse(r, sig))


# ---------------------------------------------------------------------------
# Evaluation over the naturals

MAX_FACT_ARG = 100_000
MAX_CHOOSE_ARG = 1_000_000
DEFAULT_MAX_BITS = 2_000_000


class EvalBudgetError(ArithmeticError):
    """An intermediate value would exceed the evaluation size budget."""


def compile_postfix(t: Term) -> list[tuple[str, int]]:
    """Flatten to postfix ``(opcode, payload)`` pairs for stack evaluation.

    Opcodes are the signature op names plus ``var``; the payload is the
    variable index for ``var`` and 0 otherwise.
    """
    return [(kind(s), s.index if type(s) is Var else 0) for s in subterms(t)]


def _apply_nat(op: str, stack: list[int], max_bits: int) -> None:
    if op == "plus":
        b = stack.pop()
        stack[-1] = stack[-1] + b
    elif op == "times":
        b = stack.pop()
        a = stack[-1]
        if a.bit_length() + b.bit_length() > max_bits:
            raise EvalBudgetError("product too large")
        stack[-1] = a * b
    elif op == "pow":
        e = stack.pop()
        a = stack[-1]
        if e == 0:
            stack[-1] = 1  # includes 0^0 == 1
        elif a <= 1:
            stack[-1] = a
        else:
            if a.bit_length() * e > max_bits:
                raise EvalBudgetError("power too large")
            stack[-1] = a ** e
    elif op == "choose":
        b = stack.pop()
        a = stack[-1]
        # C(a+b, b) < 2^(a+b), so a+b also bounds the result bits.
        if a + b > MAX_CHOOSE_ARG or a + b > max_bits:
            raise EvalBudgetError("binomial argument too large")
        stack[-1] = math.comb(a + b, b)
    elif op == "fact":
        a = stack[-1]
        if a > MAX_FACT_ARG:
            raise EvalBudgetError("factorial argument too large")
        if a > 2 and int(a * math.log2(a / 2)) > max_bits:
            # Stirling underestimate of log2(a!); cheap and safe.
            raise EvalBudgetError("factorial too large")
        stack[-1] = math.factorial(a)
    else:  # exp2
        a = stack[-1]
        if a > max_bits:
            raise EvalBudgetError("exp2 argument too large")
        stack[-1] = 1 << a


def eval_nat(t: Term, assignment: Mapping[int, int] | None = None,
             max_bits: int | None = None) -> int:
    """Exact value of ``t`` under an index-to-natural assignment.

    ``max_bits`` bounds the bit length any intermediate value may reach
    (default :data:`DEFAULT_MAX_BITS`); factorial and binomial arguments
    have fixed caps of their own.  Exceeding a cap raises
    :class:`EvalBudgetError`.
    """
    bits = DEFAULT_MAX_BITS if max_bits is None else max_bits
    asg = assignment or {}
    stack: list[int] = []
    for op, payload in compile_postfix(t):
        if op == "var":
            if payload not in asg:
                raise ValueError(f"no value assigned to x{payload}")
            v = asg[payload]
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"x{payload} must be a natural, got {v!r}")
            stack.append(v)
        elif op == "const0":
            stack.append(0)
        elif op == "const1":
            stack.append(1)
        else:
            _apply_nat(op, stack, bits)
    return stack[0]


def eval_alg(t: Term, algebra, assignment: Mapping[int, int]) -> int:
    """Value of ``t`` in an operation-table algebra (element id out).

    ``algebra`` is any object with ``sig``, ``const(op)``, ``unop(op, a)``
    and ``binop(op, a, b)``; assignments map variable indices to element
    ids.  Raises :class:`SignatureError` when the term uses an operation
    the algebra does not interpret.
    """
    extra = sig_of(t) - algebra.sig
    if extra:
        raise SignatureError(
            f"term uses {sorted(extra)} not interpreted by {algebra.name}")
    stack: list[int] = []
    for op, payload in compile_postfix(t):
        if op == "var":
            if payload not in assignment:
                raise ValueError(f"no value assigned to x{payload}")
            stack.append(assignment[payload])
        elif op in ("const0", "const1"):
            stack.append(algebra.const(op))
        elif op in ("fact", "exp2"):
            stack[-1] = algebra.unop(op, stack[-1])
        else:
            b = stack.pop()
            stack[-1] = algebra.binop(op, stack[-1], b)
    return stack[0]


# ---------------------------------------------------------------------------
# Weight

def weight(t: Term) -> int:
    """Numeric measure: evaluate with every variable set to 3.

    Defined exactly for pow-free terms; the measure is a homomorphism for
    the remaining operations, so it is invariant under the rewriting below.
    """
    if "pow" in sig_of(t):
        raise ValueError("weight is undefined for terms containing ^")
    return eval_nat(t, _AllThrees(), max_bits=DEFAULT_MAX_BITS)


class _AllThrees:
    def __contains__(self, idx: int) -> bool:
        return True

    def __getitem__(self, idx: int) -> int:
        return 3

    def __bool__(self) -> bool:
        return True


# ---------------------------------------------------------------------------
# Oriented unit/zero rewriting

def _root_step(t: Term) -> Term | None:
    """One rewrite at the root, or None when no rule matches there."""
    c = type(t)
    if c is Times:
        if t.l == ONE:
            return t.r
        if t.r == ONE:
            return t.l
        if t.l == ZERO or t.r == ZERO:
            return ZERO
    elif c is Plus:
        if t.l == ZERO:
            return t.r
        if t.r == ZERO:
            return t.l
    elif c is Choose:
        if t.l == ZERO or t.r == ZERO:
            return ONE
    elif c is Fact:
        if t.arg == ZERO or t.arg == ONE:
            return ONE
        if t.arg == Plus(ONE, ONE):
            return Plus(ONE, ONE)
    elif c is Exp2:
        if t.arg == ZERO:
            return ONE
        if t.arg == ONE:
            return Plus(ONE, ONE)
    return None


def omega_normalize(t: Term) -> Term:
    """Innermost normal form under the 13 oriented unit/zero rules.

    Children are normalised first, then the root is rewritten to a fixed
    point.  The result is irreducible, evaluates identically to ``t`` under
    every assignment, and has the same weight.  Terms containing ``^`` are
    rejected.
    """
    if "pow" in sig_of(t):
        raise ValueError("the rewriting system does not cover ^")
    done: dict[int, Term] = {}
    stack: list[tuple[Term, bool]] = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if not expanded:
            stack.append((node, True))
            for c in children(node):
                stack.append((c, False))
            continue
        kids = tuple(done[id(c)] for c in children(node))
        cur = rebuild(node, kids) if kids else node
        while (step := _root_step(cur)) is not None:
            cur = step
        done[id(node)] = cur
    return done[id(t)]


def all_rewrites(t: Term) -> list[Term]:
    """Every term reachable from ``t`` by one rewrite at any position."""
    out: list[Term] = []
    root = _root_step(t)
    if root is not None:
        out.append(root)
    kids = children(t)
    for i, c in enumerate(kids):
        for c2 in all_rewrites(c):
            new = list(kids)
            new[i] = c2
            out.append(rebuild(t, tuple(new)))
    return out


def _rules() -> list[Equation]:
    x = Var(1)
    two = Plus(ONE, ONE)
    return [
        Equation(Times(ONE, x), x),
        Equation(Times(x, ONE), x),
        Equation(Choose(x, ZERO), ONE),
        Equation(Choose(ZERO, x), ONE),
        Equation(Plus(ZERO, x), x),
        Equation(Plus(x, ZERO), x),
        Equation(Times(ZERO, x), ZERO),
        Equation(Times(x, ZERO), ZERO),
        Equation(Fact(ZERO), ONE),
        Equation(Fact(ONE), ONE),
        Equation(Exp2(ZERO), ONE),
        Equation(Exp2(ONE), two),
        Equation(Fact(two), two),
    ]


#: The 13 rewrite rules read as equations, in orientation order.
OMEGA_RULES: tuple[Equation, ...] = tuple(_rules())
