"""Membership of data words and evaluation of data path queries.

Three engines compute the same node-pair relation and cross-check each
other:

* ``eval_flat``: forward closure over configurations (node, automaton
  state, register valuation) of the flattened register NFA. Register
  values only ever come from the graph or the starting valuation, so the
  configuration space is finite and the closure is sound and complete.

* ``eval_stratified``: the per-level scheme. Uniteration-free expressions
  walk their acyclic hierarchical automaton, choosing a graph edge at each
  binder and recursing into lower-level blocks; properly F-shaped
  expressions evaluate each maximal E-level block on all node pairs, add
  the results as meta-edges and run a classical product reachability over
  them. Results are memoized per (block, valuation restricted to its free
  variables).

* ``eval_oracle``: bounded-length path search. Semantically this
  enumerates every data path up to ``max_len`` edges and keeps the pairs
  whose label sequence is accepted; the implementation walks paths
  breadth-first while merging prefixes that reach the same node with the
  same set of live automaton configurations, which returns exactly the
  enumeration's answer without its blowup. The default bound is
  (k^2 * n)^i where k is the largest automaton size among sub-expressions,
  n the node count and i the expression's E-level; the number of explored
  prefix classes is capped by a configurable budget.

Expressions with free variables are evaluated under an explicit valuation
covering them ("compatible"); the ``*_any`` variants close them off by
enumerating input data values plus one shared fresh value, which suffices
because conditions only compare a variable against the current letter's
value, never variables against each other.

The empty word is in the language of every epsilon-accepting expression,
so such queries put (v, v) in the result for every node v.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from . import expr as E
from .automata import BindRead, automaton_size, hier_automaton, register_nfa
from .data import DataGraph, DataWord, fresh_value, word_values
from .errors import BudgetError, CompatibilityError, ValidationError

DEFAULT_ORACLE_BUDGET = 500_000


def _vkey(val):
    return tuple(sorted(val.items()))


def _check_compatible(e, val):
    missing = E.free_vars(e) - set(val)
    if missing:
        raise CompatibilityError(
            f"valuation does not cover free variables: {', '.join(sorted(missing))}"
        )


@lru_cache(maxsize=256)
def _compiled(e):
    return register_nfa(E.alpha_rename(e))


# ---------------------------------------------------------------------------
# Word membership


def member(e: E.Rewb, w: DataWord, val=None) -> bool:
    """Is ``w`` in the language of ``e`` under the compatible valuation?"""
    val = dict(val or {})
    _check_compatible(e, val)
    nfa = _compiled(e)
    configs = {(0, _vkey(val)): val}
    for letter, d in w:
        nxt = {}
        for (q, vk), v in configs.items():
            for guard, store, q2 in nfa.moves(q, letter):
                if guard is None or E.satisfies(guard, d, v):
                    if store is None:
                        nxt.setdefault((q2, vk), v)
                    else:
                        v2 = {**v, store: d}
                        nxt.setdefault((q2, _vkey(v2)), v2)
        if not nxt:
            return False
        configs = nxt
    return any(q in nfa.finals for q, _ in configs)


def _closing_valuations(free, values):
    """All valuations of ``free`` into ``values`` plus one shared fresh value."""
    free = sorted(free)
    pool = sorted(values)
    pool.append(fresh_value(values))
    for combo in itertools.product(pool, repeat=len(free)):
        yield dict(zip(free, combo))


def member_any(e: E.Rewb, w: DataWord) -> bool:
    """Is ``w`` in the language of ``e`` under some compatible valuation?"""
    for val in _closing_valuations(E.free_vars(e), word_values(w)):
        if member(e, w, val):
            return True
    return False


# ---------------------------------------------------------------------------
# Flat configuration-reachability engine


def _reach(nfa, adj, val, start, target=None):
    """Nodes reachable from ``start`` through an accepted data path.

    With ``target`` set, stops early once the target is known reachable.
    """
    key0 = (start, 0, _vkey(val))
    seen = {key0: val}
    frontier = [key0]
    hits = set()
    if 0 in nfa.finals:
        hits.add(start)
        if target is not None and start == target:
            return hits
    while frontier:
        nxt = []
        for key in frontier:
            node, q, vk = key
            v = seen[key]
            for _, letter, d, dst in adj[node]:
                for guard, store, q2 in nfa.moves(q, letter):
                    if guard is not None and not E.satisfies(guard, d, v):
                        continue
                    if store is None:
                        k2 = (dst, q2, vk)
                        v2 = v
                    else:
                        v2 = {**v, store: d}
                        k2 = (dst, q2, _vkey(v2))
                    if k2 not in seen:
                        seen[k2] = v2
                        nxt.append(k2)
                        if q2 in nfa.finals:
                            hits.add(dst)
                            if target is not None and dst == target:
                                return hits
        frontier = nxt
    return hits


def eval_flat(e: E.Rewb, g: DataGraph, val=None) -> set:
    """All pairs (u, v) connected by a data path in the language of ``e``."""
    val = dict(val or {})
    _check_compatible(e, val)
    nfa = _compiled(e)
    adj = g.out_edges()
    pairs = set()
    for u in g.nodes:
        for v in _reach(nfa, adj, val, u):
            pairs.add((u, v))
    return pairs


def _check_nodes(g, *nodes):
    for node in nodes:
        if node not in g.nodes:
            raise ValidationError(f"unknown node: {node!r}")


def connected(e: E.Rewb, g: DataGraph, val, u, v) -> bool:
    """Is there a data path from u to v in the language of ``e``?"""
    val = dict(val or {})
    _check_compatible(e, val)
    _check_nodes(g, u, v)
    nfa = _compiled(e)
    adj = g.out_edges()
    return v in _reach(nfa, adj, val, u, target=v)


def eval_any(e: E.Rewb, g: DataGraph) -> set:
    """Union of eval_flat over all closing valuations of the free variables."""
    pairs = set()
    for val in _closing_valuations(E.free_vars(e), g.data_values()):
        pairs |= eval_flat(e, g, val)
    return pairs


def witness_path(e: E.Rewb, g: DataGraph, val, u, v):
    """One shortest witness path from u to v, or None.

    The returned edge list's label sequence is accepted by ``e`` under
    ``val``. Breadth-first over configurations, so no shorter witness
    exists.
    """
    val = dict(val or {})
    _check_compatible(e, val)
    _check_nodes(g, u, v)
    nfa = _compiled(e)
    adj = g.out_edges()

    key0 = (u, 0, _vkey(val))
    seen = {key0: val}
    parent = {key0: None}
    frontier = [key0]
    if 0 in nfa.finals and u == v:
        return []
    while frontier:
        nxt = []
        for key in frontier:
            node, q, vk = key
            vcur = seen[key]
            for edge in adj[node]:
                _, letter, d, dst = edge
                for guard, store, q2 in nfa.moves(q, letter):
                    if guard is not None and not E.satisfies(guard, d, vcur):
                        continue
                    if store is None:
                        k2 = (dst, q2, vk)
                        v2 = vcur
                    else:
                        v2 = {**vcur, store: d}
                        k2 = (dst, q2, _vkey(v2))
                    if k2 in seen:
                        continue
                    seen[k2] = v2
                    parent[k2] = (key, edge)
                    if q2 in nfa.finals and dst == v:
                        path = []
                        cur = k2
                        while parent[cur] is not None:
                            cur, used = parent[cur]
                            path.append(used)
                        path.reverse()
                        return path
                    nxt.append(k2)
        frontier = nxt
    return None


# ---------------------------------------------------------------------------
# Stratified engine


def eval_stratified(e: E.Rewb, g: DataGraph, val=None) -> set:
    """Per-level evaluation; same result set as eval_flat."""
    val = dict(val or {})
    _check_compatible(e, val)
    renamed = E.alpha_rename(e)
    adj = g.out_edges()
    memo = {}
    return _strat(renamed, g, adj, {v: val[v] for v in E.free_vars(renamed)}, memo)


def _strat(e, g, adj, val, memo):
    key = (e, _vkey(val))
    if key in memo:
        return memo[key]
    level = E.classify(e)
    if level.f_level == 0:
        pairs = _strat_level0(e, g, adj, val)
    elif level.e_level == level.f_level:
        pairs = _strat_eshape(e, g, adj, val, memo)
    else:
        pairs = _strat_fshape(e, g, adj, val, memo)
    memo[key] = pairs
    return pairs


def _strat_level0(e, g, adj, val):
    """Classical product reachability; guards only consult ``val``."""
    nfa = register_nfa(e)
    pairs = set()
    for u in g.nodes:
        seen = {(u, 0)}
        frontier = [(u, 0)]
        if 0 in nfa.finals:
            pairs.add((u, u))
        while frontier:
            nxt = []
            for node, q in frontier:
                for _, letter, d, dst in adj[node]:
                    for guard, _store, q2 in nfa.moves(q, letter):
                        if guard is not None and not E.satisfies(guard, d, val):
                            continue
                        if (dst, q2) not in seen:
                            seen.add((dst, q2))
                            nxt.append((dst, q2))
                            if q2 in nfa.finals:
                                pairs.add((u, dst))
            frontier = nxt
    return pairs


def _restricted(val, e):
    return {v: val[v] for v in E.free_vars(e)}


def _strat_fshape(e, g, adj, val, memo):
    """Evaluate each maximal E-level block, then product reachability
    over the block results used as meta-edges."""
    aut = hier_automaton(e)
    block_edges = {}
    moves = {}
    for src, label, dst in aut.sorted_transitions():
        block = label.expr
        if block not in block_edges:
            result = _strat(block, g, adj, _restricted(val, block), memo)
            succ = {}
            for a, b in result:
                succ.setdefault(a, []).append(b)
            block_edges[block] = succ
        moves.setdefault(src, []).append((block, dst))

    pairs = set()
    for u in g.nodes:
        seen = {(u, 0)}
        frontier = [(u, 0)]
        if 0 in aut.finals:
            pairs.add((u, u))
        while frontier:
            nxt = []
            for node, q in frontier:
                for block, q2 in moves.get(q, ()):
                    for dst in block_edges[block].get(node, ()):
                        if (dst, q2) not in seen:
                            seen.add((dst, q2))
                            nxt.append((dst, q2))
                            if q2 in aut.finals:
                                pairs.add((u, dst))
            frontier = nxt
    return pairs


def _strat_eshape(e, g, adj, val, memo):
    """Walk the acyclic automaton, binding graph edge values at BindRead
    transitions and recursing into lower-F blocks at SubExpr transitions."""
    aut = hier_automaton(e)
    moves = {}
    for src, label, dst in aut.sorted_transitions():
        moves.setdefault(src, []).append((label, dst))

    pairs = set()
    for u in g.nodes:
        key0 = (u, 0, _vkey(val))
        seen = {key0: val}
        frontier = [key0]
        if 0 in aut.finals:
            pairs.add((u, u))
        while frontier:
            nxt = []
            for key in frontier:
                node, q, vk = key
                vcur = seen[key]
                for label, q2 in moves.get(q, ()):
                    if isinstance(label, BindRead):
                        for _, letter, d, dst in adj[node]:
                            if letter != label.letter:
                                continue
                            v2 = {**vcur, label.var: d}
                            k2 = (dst, q2, _vkey(v2))
                            if k2 not in seen:
                                seen[k2] = v2
                                nxt.append(k2)
                                if q2 in aut.finals:
                                    pairs.add((u, dst))
                    else:
                        block = label.expr
                        result = _strat(block, g, adj, _restricted(vcur, block), memo)
                        for a, b in result:
                            if a != node:
                                continue
                            k2 = (b, q2, vk)
                            if k2 not in seen:
                                seen[k2] = vcur
                                nxt.append(k2)
                                if q2 in aut.finals:
                                    pairs.add((u, b))
            frontier = nxt
    return pairs


# ---------------------------------------------------------------------------
# Bounded path-enumeration engine


def oracle_bound(e: E.Rewb, g: DataGraph) -> int:
    """The default path-length bound (k^2 * n)^i for ``e`` on ``g``."""
    renamed = E.alpha_rename(e)
    k = max(automaton_size(sub) for sub in E.subexpressions(renamed))
    n = len(g.nodes)
    i = E.classify(e).e_level
    return (k * k * n) ** i


def eval_oracle(
    e: E.Rewb,
    g: DataGraph,
    val=None,
    max_len: int | None = None,
    budget: int | None = None,
) -> set:
    """Pairs connected by an accepted data path of at most ``max_len`` edges.

    Equivalent to enumerating every data path up to the bound and testing
    its label sequence with ``member``; prefixes that reach the same node
    with the same live configuration set are merged, so the search stops
    as soon as no new (node, configuration set) class appears. ``budget``
    caps the number of explored classes; exceeding it raises BudgetError
    rather than returning a truncated result.
    """
    val = dict(val or {})
    _check_compatible(e, val)
    if max_len is None:
        max_len = oracle_bound(e, g)
    if budget is None:
        budget = DEFAULT_ORACLE_BUDGET
    nfa = _compiled(e)
    adj = g.out_edges()
    explored = 0
    pairs = set()
    for u in g.nodes:
        cs0 = frozenset(((0, _vkey(val)),))
        vals0 = {_vkey(val): val}
        seen = {(u, cs0)}
        if any(q in nfa.finals for q, _ in cs0):
            pairs.add((u, u))
        frontier = [(u, cs0, vals0)]
        depth = 0
        while frontier and depth < max_len:
            depth += 1
            nxt = []
            for node, cs, vals in frontier:
                for _, letter, d, dst in adj[node]:
                    out = set()
                    outvals = {}
                    for q, vk in cs:
                        v = vals[vk]
                        for guard, store, q2 in nfa.moves(q, letter):
                            if guard is not None and not E.satisfies(guard, d, v):
                                continue
                            if store is None:
                                out.add((q2, vk))
                                outvals[vk] = v
                            else:
                                v2 = {**v, store: d}
                                vk2 = _vkey(v2)
                                out.add((q2, vk2))
                                outvals[vk2] = v2
                    if not out:
                        continue
                    cs2 = frozenset(out)
                    if (dst, cs2) in seen:
                        continue
                    seen.add((dst, cs2))
                    explored += 1
                    if explored > budget:
                        raise BudgetError(
                            f"path enumeration exceeded the budget of {budget} classes"
                        )
                    if any(q in nfa.finals for q, _ in cs2):
                        pairs.add((u, dst))
                    nxt.append((dst, cs2, outvals))
            frontier = nxt
    return pairs


def sorted_pairs(pairs) -> list:
    return sorted(pairs)
