"""End-to-end checks, one test per shipping criterion.

Each test prints a single C## PASS line (visible with -s) carrying its
measurements, or a C## FAIL line before the assertion that explains it.
Every test also enforces its own wall-clock budget.
"""

import random
import time
from collections import defaultdict
from contextlib import contextmanager

from combalg.algebra import (
    direct_power, is_congruence, is_isomorphic, quotient,
    satisfies, subalgebra_generated,
)
from combalg.axioms import axioms, run_suite
from combalg.dominance import (
    compare, is_reduced, numeric_probe, pretty_ordinal, to_ordinal,
    tree_embed,
)
from combalg.free_quotient import (
    b_value, count_normal_forms, decide_entailment, refute_via_truncation,
)
from combalg.hsemiring import build_bh, check_lemma2, check_lemma3
from combalg.hypergraphs import all_homs, corpus, corpus_names
from combalg.models import (
    algebra_B, algebra_S7_0, classify_block, enumerate_terms, prop1_sweep,
)
from combalg.terms import (
    COMB_SIG, Equation, EvalBudgetError, OMEGA_RULES, Choose, Exp2, Fact,
    One, Plus, Times, Var, Zero, eval_alg, eval_nat, kind, parse,
    parse_equation, subterms, variables,
)


@contextmanager
def criterion(tag, limit_s):
    started = time.perf_counter()
    info = {"note": ""}
    try:
        yield info
    except BaseException:
        print(f"{tag} FAIL ({(time.perf_counter() - started) * 1000:.1f}ms)")
        raise
    elapsed = time.perf_counter() - started
    if elapsed >= limit_s:
        print(f"{tag} FAIL: took {elapsed:.3f}s, budget {limit_s}s")
        raise AssertionError(
            f"{tag} exceeded its {limit_s}s budget: {elapsed:.3f}s")
    note = f" | {info['note']}" if info["note"] else ""
    print(f"{tag} PASS{note} ({elapsed * 1000:.1f}ms)")


# ---------------------------------------------------------------------------
# C1: the five-element model matches its reference tables cell for cell

ELS = ("0", "1", "2", "a", "inf")

GOLDEN_CONSTS = {"const0": "0", "const1": "1"}

GOLDEN_UNOPS = {
    "exp2": ("1", "2", "2", "inf", "inf"),
    "fact": ("1", "1", "2", "inf", "inf"),
}

GOLDEN_BINOPS = {
    "plus": {
        "0": ("0", "1", "2", "a", "inf"),
        "1": ("1", "2", "2", "inf", "inf"),
        "2": ("2", "2", "2", "inf", "inf"),
        "a": ("a", "inf", "inf", "a", "inf"),
        "inf": ("inf", "inf", "inf", "inf", "inf"),
    },
    "times": {
        "0": ("0", "0", "0", "0", "0"),
        "1": ("0", "1", "2", "a", "inf"),
        "2": ("0", "2", "2", "a", "inf"),
        "a": ("0", "a", "a", "inf", "inf"),
        "inf": ("0", "inf", "inf", "inf", "inf"),
    },
    "pow": {
        "0": ("1", "0", "0", "0", "0"),
        "1": ("1", "1", "1", "1", "1"),
        "2": ("1", "2", "2", "inf", "inf"),
        "a": ("1", "a", "inf", "inf", "inf"),
        "inf": ("1", "inf", "inf", "inf", "inf"),
    },
    "choose": {
        "0": ("1", "1", "1", "1", "1"),
        "1": ("1", "2", "2", "inf", "inf"),
        "2": ("1", "2", "2", "inf", "inf"),
        "a": ("1", "inf", "inf", "inf", "inf"),
        "inf": ("1", "inf", "inf", "inf", "inf"),
    },
}


def test_c01_golden_tables():
    with criterion("C01 golden tables", 0.001) as info:
        b = algebra_B()
        assert b.elements == ELS
        cells = 0
        for c, name in GOLDEN_CONSTS.items():
            assert b.elements[b.consts[c]] == name
            cells += 1
        for op, row in GOLDEN_UNOPS.items():
            for i, expected in enumerate(row):
                assert b.elements[b.unop(op, i)] == expected, (op, i)
                cells += 1
        for op, rows in GOLDEN_BINOPS.items():
            for i, x in enumerate(ELS):
                for j, expected in enumerate(rows[x]):
                    assert b.elements[b.binop(op, i, j)] == expected, \
                        (op, x, ELS[j])
                    cells += 1
        assert cells == 2 + 10 + 100
        info["note"] = f"{cells} cells"


# ---------------------------------------------------------------------------
# C2: the identity suite holds over the naturals and in the model

def test_c02_axiom_suite():
    with criterion("C02 axiom suite", 1.0) as info:
        on_nat = run_suite("nat", trials=0)
        in_b = run_suite(algebra_B())
        assert len(on_nat) == len(in_b) == 20
        assert all(r.ok for r in on_nat), [r.axiom.id for r in on_nat
                                           if not r.ok]
        assert all(r.ok for r in in_b), [r.axiom.id for r in in_b
                                         if not r.ok]
        info["note"] = "20 identities, exhaustive floor + finite model"


# ---------------------------------------------------------------------------
# C3: normal form counts meet the size recurrence

def test_c03_normal_form_counts():
    with criterion("C03 normal form counts", 1.0) as info:
        assert count_normal_forms(1, 3) == 6
        assert b_value(3, 1) == 6
        checked = 0
        for m in (0, 1, 2):
            for k in range(1, 7):
                assert count_normal_forms(m, k) <= b_value(k, m), (m, k)
                checked += 1
        info["note"] = f"count(1,3)=6=b_3(1); {checked} (m,k) bounds"


# ---------------------------------------------------------------------------
# C4: commutativity of + is separated by a small checked model

def test_c04_refute_commutativity():
    with criterion("C04 refute x+y=y+x", 10.0) as info:
        eq = parse_equation("x + y = y + x")
        ref = refute_via_truncation(eq)
        assert ref is not None
        model = ref.model
        for rule in OMEGA_RULES:
            assert satisfies(model, rule).ok, str(rule)
        ids = {i: model.element_id(n)
               for i, n in ref.witness.assignment.items()}
        lv = eval_alg(eq.lhs, model, ids)
        rv = eval_alg(eq.rhs, model, ids)
        assert lv != rv
        assert model.elements[lv] == ref.witness.lhs_value
        assert model.elements[rv] == ref.witness.rhs_value
        assert len(model) <= 200
        assert ref.bound == str(b_value(6, 2) + 1) == "21765108457"
        assert len(model) <= b_value(6, 2) + 1
        info["note"] = (f"{len(model)} elements, all 13 rules exhaustive, "
                        f"bound {ref.bound}")


# ---------------------------------------------------------------------------
# C5: zero laws do not entail commutativity

def test_c05_entailment_demo():
    with criterion("C05 entailment search", 30.0) as info:
        sigma = [parse_equation("0 + x = x"), parse_equation("x + 0 = x")]
        eq = parse_equation("x + y = y + x")
        out = decide_entailment(sigma, eq, max_size=3)
        assert out.status == "not-entailed"
        model = out.model
        assert len(model) == 3
        for premise in sigma:
            assert satisfies(model, premise).ok
        ids = {i: model.element_id(n)
               for i, n in out.witness.assignment.items()}
        assert eval_alg(eq.lhs, model, ids) != eval_alg(eq.rhs, model, ids)
        info["note"] = f"countermodel {model.name}, witness {out.witness}"


# ---------------------------------------------------------------------------
# C6: the detection equation tracks colouring existence on the corpus

def test_c06_detection_vs_colouring():
    with criterion("C06 detection equivalence", 60.0) as info:
        reports = {name: check_lemma2(corpus(name), name)
                   for name in corpus_names()}
        assert all(r.agree for r in reports.values()), [
            n for n, r in reports.items() if not r.agree]
        assert reports["K5_3"].satisfied and reports["K5_3"].hom is None
        assert reports["fano"].satisfied and reports["fano"].hom is None
        for name in ("edge1", "path2"):
            assert not reports[name].satisfied
            assert reports[name].hom is not None
        info["note"] = f"{len(reports)} hypergraphs agree"


# ---------------------------------------------------------------------------
# C7: the edge algebra is recovered inside a power of the model

def _replay_power_quotient(name):
    h = corpus(name)
    homs = all_homs(h)
    base = algebra_B()
    power = direct_power(base, len(homs))
    id_a, id_2 = base.element_id("a"), base.element_id("2")
    id_inf = base.element_id("inf")
    gens = [power.diagonal(id_2), power.diagonal(id_inf)]
    for v in h.vertices():
        gens.append(power.intern(tuple(
            id_a if phi[v] == "a" else id_2 for phi in homs)))
    closure, carrier_ids = subalgebra_generated(
        power, gens, name=f"C({name})")
    ideal = {closure.elements[new_id]
             for new_id, pid in enumerate(carrier_ids)
             if id_inf in power.coords(pid)}
    partition = [set(ideal)]
    partition.extend({e} for e in closure.elements if e not in ideal)
    return h, closure, ideal, partition


def _validate_mapping(q, target, mapping):
    """Count every constant, unary and binary cell the map preserves."""
    assert sorted(mapping) == sorted(q.elements)
    assert sorted(mapping.values()) == sorted(target.elements)
    to_t = {q.element_id(k): target.element_id(v)
            for k, v in mapping.items()}
    cells = 0
    for c in q.sig:
        if c in ("const0", "const1"):
            assert to_t[q.consts[c]] == target.consts[c]
            cells += 1
    n = len(q)
    for op in sorted(q.unops):
        for x in range(n):
            assert to_t[q.unop(op, x)] == target.unop(op, to_t[x])
            cells += 1
    for op in sorted(q.binops):
        for x in range(n):
            for y in range(n):
                assert to_t[q.binop(op, x, y)] \
                    == target.binop(op, to_t[x], to_t[y])
                cells += 1
    return cells


def test_c07_power_quotient_reconstruction():
    with criterion("C07 power quotient", 120.0) as info:
        notes = []
        for name, closure_size in (("edge1", 29), ("path2", 125)):
            h, closure, ideal, partition = _replay_power_quotient(name)
            assert len(closure) == closure_size
            cong_ok, viol = is_congruence(closure, partition)
            assert cong_ok, str(viol)
            q = quotient(closure, partition, name=f"C({name})/ideal")
            target = build_bh(h, name=f"B_H({name})")
            iso, mapping = is_isomorphic(q, target)
            assert iso
            cells = _validate_mapping(q, target, mapping)
            report = check_lemma3(h, name)
            assert (report.closure_size, report.ideal_size,
                    report.quotient_size) \
                == (len(closure), len(ideal), len(q))
            assert report.ok
            notes.append(f"{name}: {len(q)} elements, {cells} cells")
        info["note"] = "; ".join(notes)


# ---------------------------------------------------------------------------
# C8: merging 1 with 2 is a congruence without ^, and transfers identities

def _random_comb_term(rng, depth):
    leaves = [Var(1), Var(2), Zero(), One()]
    if depth == 0:
        return rng.choice(leaves)
    op = rng.choice(["plus", "times", "choose", "fact", "exp2", "leaf"])
    if op == "leaf":
        return rng.choice(leaves)
    if op == "fact":
        return Fact(_random_comb_term(rng, depth - 1))
    if op == "exp2":
        return Exp2(_random_comb_term(rng, depth - 1))
    ctor = {"plus": Plus, "times": Times, "choose": Choose}[op]
    return ctor(_random_comb_term(rng, depth - 1),
                _random_comb_term(rng, depth - 1))


def test_c08_merge_quotient():
    with criterion("C08 quotient S7_0", 1.0) as info:
        b = algebra_B()
        partition = [{"0"}, {"1", "2"}, {"a"}, {"inf"}]
        comb = b.reduct(COMB_SIG, name="B-comb")
        ok, viol = is_congruence(comb, partition)
        assert ok and viol is None
        full_ok, full_viol = is_congruence(b, partition)
        assert not full_ok
        assert str(full_viol) == "pow(1,a, 2,a) splits blocks: 1 vs inf"
        s7 = algebra_S7_0()
        assert s7 == quotient(comb, partition, name="S7_0")
        assert s7.elements == ("0", "1", "a", "inf")
        transferred = 0
        for axiom in axioms():
            if satisfies(comb, axiom.equation).ok:
                assert satisfies(s7, axiom.equation).ok, axiom.id
                transferred += 1
        rng = random.Random(2025)
        sampled = 0
        for _ in range(50):
            eq = Equation(_random_comb_term(rng, 2),
                          _random_comb_term(rng, 2))
            if satisfies(comb, eq).ok:
                assert satisfies(s7, eq).ok, str(eq)
                sampled += 1
        info["note"] = (f"violation pinned; {transferred} suite + "
                        f"{sampled}/50 sampled identities transfer")


# ---------------------------------------------------------------------------
# C9: growth order machinery agrees with itself and with numbers

ORDINAL_FIXTURES = [
    ("x", "1"),
    ("x!", "ω"),
    ("(x!)!", "ω^ω"),
    ("x! + x + x", "ω + 2"),
    ("x! + x!", "ω*2"),
    ("((x!)!)! + (x!)! + x! + x", "ω^(ω^ω) + ω^ω + ω + 1"),
]

_EMBED_SIG = frozenset({"plus", "times", "fact", "exp2", "const1"})
_LABELS = ("var", "plus", "times", "fact", "exp2", "const1")


def _count_vector(t):
    counts = defaultdict(int)
    for s in subterms(t):
        counts[kind(s)] += 1
    return tuple(counts[l] for l in _LABELS)


def _random_fragment(rng, max_summands, max_depth):
    def tower(depth):
        t = Var(1)
        for _ in range(depth):
            t = Fact(t)
        return t

    t = tower(rng.randint(0, max_depth))
    for _ in range(rng.randint(1, max_summands) - 1):
        t = Plus(t, tower(rng.randint(0, max_depth)))
    return t


def _verdict_from_signs(signs):
    # mirrors the probe: trailing constant-sign run, strict needs three
    run_sign = signs[-1]
    run_start = len(signs) - 1
    while run_start > 0 and signs[run_start - 1] == run_sign:
        run_start -= 1
    if run_sign == 0 or len(signs) - run_start < 3:
        return "tied"
    return "less" if run_sign < 0 else "greater"


def test_c09_growth_order():
    with criterion("C09 growth order", 120.0) as info:
        for text, expected in ORDINAL_FIXTURES:
            assert pretty_ordinal(to_ordinal(parse(text), "fact")) \
                == expected

        rng = random.Random(2025)
        flip = {"less": "greater", "greater": "less", "equal": "equal"}
        for _ in range(500):
            a, b, c = (_random_fragment(rng, 4, 3) for _ in range(3))
            assert compare(b, a, "fact") == flip[compare(a, b, "fact")]
            if compare(a, b, "fact") != "greater" \
                    and compare(b, c, "fact") != "greater":
                assert compare(a, c, "fact") != "greater"

        informative = 0
        for _ in range(200):
            s, t = _random_fragment(rng, 3, 2), _random_fragment(rng, 3, 2)
            r = numeric_probe(s, t)
            if r.truncated and r.verdict == "tied":
                continue  # too few points to carry evidence either way
            informative += 1
            expected = {"equal": "tied", "less": "less",
                        "greater": "greater"}[compare(s, t, "fact")]
            assert r.verdict == expected, (s, t)
        assert informative >= 100

        terms = [t for t in enumerate_terms(7, 1, _EMBED_SIG)
                 if is_reduced(t)]
        assert len(terms) == 4026
        buckets = defaultdict(list)
        for t in terms:
            buckets[_count_vector(t)].append(t)
        seqs = {}
        for t in terms:
            vals, x = [], 1
            for _ in range(20):
                try:
                    vals.append(eval_nat(t, {1: x}, max_bits=200_000))
                except EvalBudgetError:
                    vals.append(None)
                x *= 2
            seqs[t] = vals
        vecs = sorted(buckets)
        embedded_pairs = []
        no_shared_points = 0
        for vt in vecs:
            for vs in vecs:
                # label counts are monotone under embedding, so bucket
                # pairs outside this order cannot contain embeddings
                if not all(a <= b for a, b in zip(vs, vt)):
                    continue
                for t in buckets[vt]:
                    ts = seqs[t]
                    for s in buckets[vs]:
                        if not tree_embed(s, t):
                            continue
                        signs = []
                        for sv, tv in zip(seqs[s], ts):
                            if sv is None or tv is None:
                                break
                            signs.append(
                                0 if sv == tv else (-1 if sv < tv else 1))
                        if not signs:
                            no_shared_points += 1
                            continue
                        assert all(sig <= 0 for sig in signs), (s, t)
                        assert _verdict_from_signs(signs) \
                            in ("less", "tied"), (s, t)
                        embedded_pairs.append((s, t))
        assert len(embedded_pairs) + no_shared_points == 89373
        assert no_shared_points == 2216

        for s, t in rng.sample(embedded_pairs, 50):
            r = numeric_probe(s, t)
            assert r.verdict in ("less", "tied"), (s, t)
        non_pairs = []
        for _ in range(200):
            s, t = rng.choice(terms), rng.choice(terms)
            vs, vt = _count_vector(s), _count_vector(t)
            if not all(a <= b for a, b in zip(vs, vt)):
                non_pairs.append((s, t))
        for s, t in non_pairs[:50]:
            assert not tree_embed(s, t), (s, t)

        info["note"] = (f"{len(terms)} reduced terms, "
                        f"{len(embedded_pairs) + no_shared_points} "
                        f"embeddings, {len(embedded_pairs)} dominated "
                        f"pointwise, {no_shared_points} beyond the "
                        f"evaluation budget, {informative} probe checks")


# ---------------------------------------------------------------------------
# C10: sampled agreement with the model never lies on small terms

def test_c10_agreement_sweep():
    with criterion("C10 agreement sweep", 300.0) as info:
        report = prop1_sweep(max_nodes=4)
        assert report.terms == 297
        assert report.dropped_terms == 8
        assert report.pairs_checked == 5684
        assert report.disagreements == []
        assert report.ok
        assert classify_block(parse("0 ^ x")).block == "Anomalous"
        info["note"] = (f"{report.terms} terms, {report.pairs_checked} "
                        f"pairs, 0 disagreements")
