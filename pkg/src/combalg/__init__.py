"""Executable finite-model and growth-order toolkit for a combinatorial
term algebra over +, *, ^, binomial choice, factorial and exp2.

The package splits into a term core (parsing, exact evaluation,
rewriting), finite-algebra machinery (model checking, congruences,
powers, isomorphism, model enumeration), the concrete five-element
model family, an identity suite, a truncated-normal-form decision
procedure with its entailment search, hypergraph colouring, the
hypergraph edge algebras, and ordinal-backed growth comparison.
"""

from .terms import (
    Var, Zero, One, Plus, Times, Pow, Choose, Fact, Exp2, ZERO, ONE,
    Term, Equation, FULL_SIG, COMB_SIG, parse, parse_equation,
    parse_signature, print_term, size, subterms, variables, sig_of,
    eval_nat, eval_alg, weight, omega_normalize, all_rewrites,
    OMEGA_RULES, ParseError, SignatureError, EvalBudgetError,
)
from .algebra import (
    FiniteAlgebra, Witness, Verdict, BudgetExceeded, satisfies,
    is_congruence, quotient, direct_power, subalgebra_generated,
    is_isomorphic, enumerate_models, dumps_algebra, loads_algebra,
    save_algebra, load_algebra,
)
from .models import (
    algebra_B, algebra_B_minus, algebra_S7_0, NatVerdict, valid_on_nat,
    BlockClass, classify_block, enumerate_terms, SweepReport, prop1_sweep,
)
from .axioms import (
    Axiom, axioms, axiom_groups, derived_laws, multinomial_law,
    SuiteResult, run_suite,
)
from .free_quotient import (
    b_value, bound_B, bound_text, is_counted, enumerate_normal_forms,
    count_normal_forms, build_truncated, TruncationError,
    TruncationRefutation, refute_via_truncation, Entailment,
    decide_entailment,
)
from .hypergraphs import (
    Hypergraph, make_hypergraph, parse_hypergraph, dumps_hypergraph,
    load_hypergraph, girth, check_hom, find_hom, all_homs,
    is_robustly_satisfiable, corpus, corpus_names, TEMPLATE_VALUES,
)
from .hsemiring import (
    build_sh, build_bh, tau_law, Lemma2Report, check_lemma2,
    Lemma3Report, check_lemma3,
)
from .dominance import (
    OrdinalCNF, ORD_ZERO, ORD_ONE, OMEGA, ordinal_from_int, omega_pow,
    ordinal_nat_sum, ordinal_cmp, pretty_ordinal, FragmentError,
    to_ordinal, from_ordinal, compare, reduce_term, is_reduced,
    tree_embed, ProbeResult, numeric_probe,
)

__version__ = "0.1.0"
