"""A fixed 20-identity axiom suite for the pow-free signature.

Groups: the ten commutative-semiring laws, three laws tying exp2 to
doubling, two factorial recursion laws, four binomial laws, and one mixed
law connecting factorials with the binomial operation.  Every identity
holds over the naturals; the suite runner checks them against the
naturals oracle or exhaustively against any finite algebra.

Beyond the fixed suite the module generates telescoping multinomial
identities for 3 to 6 variables (products of nested binomials that are
invariant under permuting the variables) and two derived laws that follow
from the suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import FiniteAlgebra, Verdict, satisfies
from .models import NatVerdict, valid_on_nat
from .terms import Equation, Term, Var, Plus, Times, Choose, parse_equation

__all__ = [
    "Axiom", "axioms", "axiom_groups", "derived_laws", "multinomial_law",
    "run_suite", "SuiteResult",
]


@dataclass(frozen=True)
class Axiom:
    id: str
    group: str
    equation: Equation

    def __str__(self) -> str:
        return f"{self.id}: {self.equation}"


_RAW: tuple[tuple[str, str, str], ...] = (
    ("add_assoc", "semiring", "(x + y) + z = x + (y + z)"),
    ("add_comm", "semiring", "x + y = y + x"),
    ("add_zero_left", "semiring", "0 + x = x"),
    ("add_zero_right", "semiring", "x + 0 = x"),
    ("mul_assoc", "semiring", "(x*y)*z = x*(y*z)"),
    ("mul_comm", "semiring", "x*y = y*x"),
    ("mul_one_left", "semiring", "1*x = x"),
    ("mul_one_right", "semiring", "x*1 = x"),
    ("mul_zero", "semiring", "0*x = 0"),
    ("distrib", "semiring", "x*(y + z) = x*y + x*z"),
    ("exp2_zero", "exp2", "exp2(0) = 1"),
    ("exp2_one", "exp2", "exp2(1) = 1 + 1"),
    ("exp2_add", "exp2", "exp2(x + y) = exp2(x)*exp2(y)"),
    ("fact_zero", "factorial", "0! = 1"),
    ("fact_succ", "factorial", "(x + 1)! = (x + 1)*x!"),
    ("choose_zero", "binomial", "(x C 0) = 1"),
    ("choose_one", "binomial", "(x C 1) = x + 1"),
    ("pascal", "binomial",
     "((x + 1) C y) + (x C (y + 1)) = ((x + 1) C (y + 1))"),
    ("trinomial", "binomial",
     "((x + y) C z)*(x C y) = ((z + x) C y)*(z C x)"),
    ("mixed_fact_choose", "mixed", "x!*y!*(x C y) = (x + y)!"),
)


def axioms() -> tuple[Axiom, ...]:
    """The suite, ordered by axiom id."""
    out = tuple(
        Axiom(aid, group, parse_equation(eq)) for aid, group, eq in _RAW)
    return tuple(sorted(out, key=lambda a: a.id))


def axiom_groups() -> dict[str, tuple[Axiom, ...]]:
    groups: dict[str, list[Axiom]] = {}
    for a in axioms():
        groups.setdefault(a.group, []).append(a)
    return {g: tuple(v) for g, v in groups.items()}


def derived_laws() -> tuple[Axiom, ...]:
    """Two consequences of the suite, useful as independent spot checks:
    symmetry of the binomial operation, and the exchange law that grows a
    selection by one against growing its complement."""
    return (
        Axiom("choose_comm", "derived", parse_equation("(x C y) = (y C x)")),
        Axiom("committee_chair", "derived", parse_equation(
            "(y + 1)*(x C (y + 1)) = (x + y + 1)*(x C y)")),
    )


def multinomial_law(n: int, perm: Sequence[int]) -> Equation:
    """Telescoping product identity on ``n`` variables, 3 <= n <= 6.

    The left side is the left-nested product of the factors
    ``(x1 + ... + x(k-1)) C xk`` for k = n down to 2; the right side is
    the same shape with variable indices renamed by ``perm`` (a
    permutation of 1..n, ``perm[i-1]`` is the image of i).  Both sides
    count the same multinomial coefficient, whatever the permutation.
    """
    if not 3 <= n <= 6:
        raise ValueError("supported variable counts are 3 to 6")
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"perm must permute 1..{n}")

    def side(index: Sequence[int]) -> Term:
        def factor(k: int) -> Term:
            s: Term = Var(index[0])
            for i in index[1:k - 1]:
                s = Plus(s, Var(i))
            return Choose(s, Var(index[k - 1]))

        t: Term = factor(n)
        for k in range(n - 1, 1, -1):
            t = Times(t, factor(k))
        return t

    return Equation(side(list(range(1, n + 1))), side(list(perm)))


@dataclass(frozen=True)
class SuiteResult:
    axiom: Axiom
    ok: bool
    detail: str

    def __str__(self) -> str:
        mark = "ok " if self.ok else "FAIL"
        return f"{mark} {self.axiom.id}: {self.detail}"


def run_suite(model: FiniteAlgebra | str,
              group: str | None = None,
              trials: int = 20) -> list[SuiteResult]:
    """Run the suite against a finite algebra, or against the naturals
    oracle when ``model`` is the string ``"nat"``.  Results come back in
    id order.  Finite checks are exhaustive.

    ``trials`` is forwarded to the naturals oracle as its random-spike
    count; 0 keeps just the exhaustive floor, which is cheap even for
    the factorial axioms."""
    selected: Iterable[Axiom] = axioms()
    if group is not None:
        table = axiom_groups()
        if group not in table:
            raise ValueError(
                f"unknown group {group!r}; have {sorted(table)}")
        selected = table[group]
    results: list[SuiteResult] = []
    for a in selected:
        if model == "nat":
            v: NatVerdict = valid_on_nat(a.equation, trials=trials)
            detail = (f"valid on sample ({v.checked} points)" if v.ok
                      else f"refuted at {v.witness[0]}: "
                           f"{v.witness[1]} != {v.witness[2]}")
            results.append(SuiteResult(a, v.ok, detail))
        else:
            verdict: Verdict = satisfies(model, a.equation)
            detail = ("satisfied exhaustively" if verdict.ok
                      else f"refuted: {verdict.witness}")
            results.append(SuiteResult(a, verdict.ok, detail))
    return results
