"""Acceptance suite: one test per criterion, one pass line each.

Every criterion is exact (set equality, boolean equivalence, or exact
arithmetic); the three long-running ones also assert their stated time
targets. Run with ``pytest -s tests/test_acceptance.py`` to see the
per-criterion lines.
"""

import itertools
import random
import time

import rewb.expr as E
from rewb import alpha_rename, classify, free_vars, member, member_any, to_unf
from rewb.automata import automaton_size
from rewb.evaluate import (
    connected,
    eval_flat,
    eval_oracle,
    eval_stratified,
    oracle_bound,
    witness_path,
)
from rewb.gadgets import (
    Pos,
    WqsatInstance,
    brute_formula,
    brute_wqsat,
    eval_expr,
    exists_compose,
    forall_compose,
    formula_graph,
    sat_reduction,
    wqsat_reduction,
)
from rewb.pcp import MUTATION_KINDS, PcpInstance, pcp_delta, pcp_encode, pcp_mutate
from rewb.randgen import random_expr, random_graph, random_valuation, random_word
from rewb.syntax import parse_expr, parse_graph, parse_word, print_expr, print_graph, print_word
from rewb.witness import mismatch_samples, r_expr, u_word

from oracles import derivation_levels, nnf_formulas


def _report(number, label, started, target=None):
    elapsed = time.time() - started
    print(f"criterion {number:2d} PASS ({elapsed:6.2f}s): {label}")
    if target is not None:
        assert elapsed < target, f"criterion {number} exceeded its {target}s target"


def test_criterion_01_engine_agreement():
    started = time.time()
    rng = random.Random(2026)
    for case in range(200):
        e = random_expr(rng, 8, max_e_level=2)
        g = random_graph(rng, max_nodes=5, max_edges=10)
        val = random_valuation(rng, sorted(free_vars(e)), sorted(g.data_values()))
        flat = eval_flat(e, g, val)
        assert eval_stratified(e, g, val) == flat, (case, print_expr(e))
        assert eval_oracle(e, g, val) == flat, (case, print_expr(e))
    _report(1, "three engines agree on 200 random instances", started, target=60)


def test_criterion_02_hierarchy_witnesses():
    started = time.time()
    for i in (1, 2, 3):
        for n in (2, 3):
            assert member(r_expr(i), u_word(i, n), {})
            for sample in mismatch_samples(i, n, 50, seed=i * 10 + n):
                assert not member_any(r_expr(i), sample), (i, n)
    _report(2, "u words accepted, 50 mismatch samples per (i, n) rejected", started, target=30)


def test_criterion_03_formula_evaluation_schema():
    started = time.time()
    atoms = ["pr1", "pr2"]
    query = eval_expr(2)
    values = atoms + ["star"]
    for phi in nnf_formulas(atoms, 2):
        g = formula_graph(phi, atoms)
        for combo in itertools.product(values, repeat=2):
            val = dict(zip(("x_1", "x_2"), combo))
            expected = brute_formula(phi, set(atoms) & set(combo))
            assert connected(query, g, val, g.source, g.sink) == expected, (phi, combo)

    rng = random.Random(36)
    atoms3 = ["pr1", "pr2", "pr3"]
    pool = nnf_formulas(atoms3, 2)
    query3 = eval_expr(3)
    values3 = atoms3 + ["star"]
    for phi in rng.sample(pool, 100):
        g = formula_graph(phi, atoms3)
        for combo in itertools.product(values3, repeat=3):
            val = dict(zip(("x_1", "x_2", "x_3"), combo))
            expected = brute_formula(phi, set(atoms3) & set(combo))
            assert connected(query3, g, val, g.source, g.sink) == expected, (phi, combo)
    _report(3, "schema connectivity matches direct evaluation (exhaustive + random)", started)


def _truth_table_sat(phi, atoms):
    return any(
        brute_formula(phi, set(chosen))
        for r in range(len(atoms) + 1)
        for chosen in itertools.combinations(atoms, r)
    )


def test_criterion_04_satisfiability_reduction():
    started = time.time()
    for count in (1, 2, 3):
        atoms = [f"pr{j}" for j in range(1, count + 1)]
        for phi in nnf_formulas(atoms, 2):
            out = sat_reduction(phi, atoms)
            got = connected(out.expr, out.graph, {}, out.graph.source, out.graph.sink)
            assert got == _truth_table_sat(phi, atoms), phi
    _report(4, "reduction connectivity equals truth-table satisfiability (<= 3 atoms)", started)


def test_criterion_05_quantifier_compositions():
    started = time.time()
    rng = random.Random(41)

    # single existential / universal blocks against explicit enumeration
    for count in (1, 2, 3):
        atoms = [f"pr{j}" for j in range(1, count + 1)]
        formulas = nnf_formulas(atoms, 1)
        sample = formulas if len(formulas) <= 40 else rng.sample(formulas, 40)
        for k in (1, 2):
            if k > count:
                continue
            for phi in sample:
                inner = formula_graph(phi, atoms)
                choices = list(itertools.combinations(atoms, k))
                ex = exists_compose(k, atoms, inner, eval_expr(k))
                got = connected(ex.expr, ex.graph, {}, ex.graph.source, ex.graph.sink)
                assert got == any(brute_formula(phi, set(c)) for c in choices), (phi, k, "E")
                fa = forall_compose(k, atoms, inner, eval_expr(k))
                got = connected(fa.expr, fa.graph, {}, fa.graph.source, fa.graph.sink)
                assert got == all(brute_formula(phi, set(c)) for c in choices), (phi, k, "A")

    # alternating instances against the brute quantifier expansion
    checked = 0
    for size1, size2 in ((2, 2), (3, 2), (2, 3)):
        block1 = tuple(f"pr{j}" for j in range(1, size1 + 1))
        block2 = tuple(f"qr{j}" for j in range(1, size2 + 1))
        pool = nnf_formulas(list(block1 + block2), 1)
        for k1, k2 in itertools.product((1, 2), repeat=2):
            for phi in rng.sample(pool, 6):
                inst = WqsatInstance(phi, (block1, block2), (k1, k2))
                out = wqsat_reduction(inst)
                got = connected(out.expr, out.graph, {}, out.graph.source, out.graph.sink)
                assert got == brute_wqsat(inst), (phi, k1, k2)
                checked += 1
    assert checked == 72
    _report(5, "exists/forall/alternating compositions match brute oracles", started)


def test_criterion_06_short_witness_bound():
    started = time.time()
    rng = random.Random(47)
    for case in range(100):
        e = random_expr(rng, 8, max_e_level=2)
        g = random_graph(rng, max_nodes=5, max_edges=10)
        val = random_valuation(rng, sorted(free_vars(e)), sorted(g.data_values()))
        bound = oracle_bound(e, g)
        for u, v in eval_flat(e, g, val):
            path = witness_path(e, g, val, u, v)
            assert path is not None and len(path) <= bound, (case, u, v)
    _report(6, "every reachable pair has a witness within (k^2 n)^i", started)


def test_criterion_07_level_classifier():
    started = time.time()
    for i in range(1, 6):
        assert classify(r_expr(i)).as_tuple() == (i, i + 1)
    atoms = ["pr1", "pr2", "pr3"]
    for k in (1, 2, 3):
        inner = formula_graph(Pos("pr1"), atoms)
        out = forall_compose(k, atoms, inner, eval_expr(k))
        assert classify(out.expr).f_level == k

    # exhaustive agreement with the derivation search on every expression
    # of size <= 6 over two letters, two variables and atomic conditions;
    # the search is memoized per shape, which it never looks beyond
    leaves = [E.EPS, E.Atom("a"), E.Atom("b")] + [
        E.Test(letter, cond)
        for letter in ("a", "b")
        for cond in (E.Eq("x"), E.Neq("x"), E.Eq("y"), E.Neq("y"))
    ]
    by_size = {1: leaves}
    for size in range(2, 7):
        bucket = []
        for body in by_size[size - 1]:
            bucket.append(E.Star(body))
            for letter in ("a", "b"):
                for var in ("x", "y"):
                    bucket.append(E.Bind(letter, var, body))
        for left_size in range(1, size - 1):
            for left in by_size[left_size]:
                for right in by_size[size - 1 - left_size]:
                    bucket.append(E.Union(left, right))
                    bucket.append(E.Concat(left, right))
        by_size[size] = bucket

    def shape(e):
        if isinstance(e, (E.Eps, E.Atom, E.Test)):
            return 0
        if isinstance(e, E.Star):
            return ("s", shape(e.body))
        if isinstance(e, E.Bind):
            return ("b", shape(e.body))
        tag = "u" if isinstance(e, E.Union) else "c"
        return (tag, shape(e.left), shape(e.right))

    oracle_by_shape = {}
    total = 0
    for size in range(1, 7):
        for e in by_size[size]:
            key = shape(e)
            if key not in oracle_by_shape:
                oracle_by_shape[key] = derivation_levels(e)
            assert classify(e).as_tuple() == oracle_by_shape[key], print_expr(e)
            total += 1
    assert total == 662486
    _report(7, f"classifier exact on witnesses and on all {total} size-<=6 expressions", started)


def test_criterion_08_union_normal_form():
    started = time.time()
    rng = random.Random(53)
    for case in range(50):
        e = random_expr(rng, 8)
        parts = to_unf(e)
        bound = automaton_size(alpha_rename(e))
        for part in parts:
            assert automaton_size(alpha_rename(part)) <= bound, case
        val = random_valuation(rng, sorted(free_vars(e)), ("1", "2", "3"))
        for _ in range(100):
            w = random_word(rng, 8)
            assert member(e, w, val) == any(member(p, w, val) for p in parts), case
    _report(8, "union normal form preserves membership within the size bound", started)


def test_criterion_09_pcp_delta():
    started = time.time()
    solvable = PcpInstance((("ab", "a"), ("c", "bc")))
    delta = pcp_delta(solvable, 1)
    encoding = pcp_encode(solvable, [1, 2], 1)
    assert not member_any(delta, encoding)
    for kind in MUTATION_KINDS:
        assert member_any(delta, pcp_mutate(encoding, kind, seed=3)), kind

    unsolvable = PcpInstance((("a", "aa"),))
    delta_u = pcp_delta(unsolvable, 1)
    rng = random.Random(59)
    for sample in range(10):
        seq = [rng.randint(1, 1) for _ in range(rng.randint(1, 4))]
        shaped = pcp_encode(unsolvable, seq, 1, allow_nonsolution=True)
        assert member_any(delta_u, shaped), (sample, seq)
    _report(9, "non-solution expression separates encodings from violations", started, target=120)


def test_criterion_10_syntax_fuzz():
    started = time.time()
    rng = random.Random(61)
    for _ in range(1000):
        e = random_expr(rng, 20)
        assert parse_expr(print_expr(e)) == e
    for _ in range(1000):
        w = random_word(rng, 30)
        assert parse_word(print_word(w)) == w
    for _ in range(1000):
        g = random_graph(rng, max_nodes=8, max_edges=20)
        parsed = parse_graph(print_graph(g))
        assert parsed.nodes == g.nodes and parsed.edges == g.edges
    _report(10, "1000 round-trips each for expressions, words and graphs", started)
