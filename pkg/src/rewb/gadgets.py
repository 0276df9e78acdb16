"""Reduction gadgets from Boolean satisfiability to query evaluation.

The schema encodes a negation-normal-form formula as a series-parallel
data graph whose per-literal chains carry the polarity and the atom as
data values, and a fixed query that remembers the true atoms in variables
x_1..x_k: a positive literal's chain can only be crossed when the atom is
among the variable values, a negative one only when it is not. One shared
reserved value ``star`` plays the role of "any other value"; no condition
ever tests it against an atom value positively, so sharing is safe.

On top of the schema:

* ``sat_reduction`` prefixes a chain of parallel (atom / star) edge pairs
  and binds one variable per atom, making source-sink connectivity
  equivalent to satisfiability.
* ``exists_compose`` prefixes a chain carrying every atom once and binds k
  variables along it, realizing "some injective choice of k atoms".
* ``forall_compose`` wraps the graph k times in a loop structure that
  forces the enclosed part to be traversed once per atom value, realizing
  "every injective choice"; non-injective valuations escape through
  dedicated skip edges.
* ``wqsat_reduction`` alternates the two, right to left, with per-block
  fresh letters, reducing weighted quantified satisfiability.

Brute-force oracles (``brute_formula``, ``brute_wqsat``) evaluate the same
questions directly and back the equivalence tests.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from . import expr as E
from .data import DataGraph, graph
from .errors import SourceError, ValidationError

STAR_VALUE = "star"

_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


# ---------------------------------------------------------------------------
# Negation normal form formulas


@dataclass(frozen=True)
class Pos:
    atom: str


@dataclass(frozen=True)
class Neg:
    atom: str


@dataclass(frozen=True)
class FAnd:
    items: tuple

    def __post_init__(self):
        if not self.items:
            raise ValidationError("conjunction needs at least one item")


@dataclass(frozen=True)
class FOr:
    items: tuple

    def __post_init__(self):
        if not self.items:
            raise ValidationError("disjunction needs at least one item")


NnfFormula = Pos | Neg | FAnd | FOr


def atoms_of(phi: NnfFormula) -> set:
    if isinstance(phi, (Pos, Neg)):
        return {phi.atom}
    out = set()
    for item in phi.items:
        out |= atoms_of(item)
    return out


def brute_formula(phi: NnfFormula, assignment) -> bool:
    """Direct NNF evaluation; ``assignment`` is the set of true atoms."""
    if isinstance(phi, Pos):
        return phi.atom in assignment
    if isinstance(phi, Neg):
        return phi.atom not in assignment
    if isinstance(phi, FAnd):
        return all(brute_formula(item, assignment) for item in phi.items)
    return any(brute_formula(item, assignment) for item in phi.items)


def parse_nnf(text: str) -> NnfFormula:
    """Small NNF syntax: atoms, '&', '|', '!' on atoms, parentheses."""
    tokens = re.findall(r"[A-Za-z_][A-Za-z0-9_]*|[()&|!]|\S", text)
    pos = 0

    def error(msg):
        return SourceError(msg, 1, 1)

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def disjunction():
        items = [conjunction()]
        while peek() == "|":
            take()
            items.append(conjunction())
        return items[0] if len(items) == 1 else FOr(tuple(items))

    def conjunction():
        items = [literal()]
        while peek() == "&":
            take()
            items.append(literal())
        return items[0] if len(items) == 1 else FAnd(tuple(items))

    def literal():
        tok = peek()
        if tok is None:
            raise error("unexpected end of formula")
        if tok == "(":
            take()
            out = disjunction()
            if peek() != ")":
                raise error("missing ')'")
            take()
            return out
        if tok == "!":
            take()
            atom = take() if peek() else None
            if atom is None or not _ATOM_RE.match(atom):
                raise error("'!' must be followed by an atom")
            return Neg(atom)
        if _ATOM_RE.match(tok):
            return Pos(take())
        raise error(f"unexpected token {tok!r}")

    out = disjunction()
    if pos != len(tokens):
        raise error(f"trailing input at token {tokens[pos]!r}")
    return out


# ---------------------------------------------------------------------------
# Weighted quantified satisfiability instances


@dataclass(frozen=True)
class WqsatInstance:
    """Blocks alternate quantifiers starting with an existential one."""

    formula: NnfFormula
    blocks: tuple  # of tuples of atoms
    weights: tuple  # of ints

    def __post_init__(self):
        if not self.blocks or len(self.blocks) != len(self.weights):
            raise ValidationError("blocks and weights must be nonempty and aligned")
        seen = set()
        for block, weight in zip(self.blocks, self.weights):
            if not block:
                raise ValidationError("empty quantifier block")
            if weight < 1 or weight > len(block):
                raise ValidationError(f"weight {weight} out of range for block {block}")
            if seen & set(block):
                raise ValidationError("blocks must be disjoint")
            seen |= set(block)
        stray = atoms_of(self.formula) - seen
        if stray:
            raise ValidationError(f"atoms outside every block: {sorted(stray)}")

    def quantifier(self, index) -> str:
        """'exists' for blocks 0, 2, ...; 'forall' for the rest."""
        return "exists" if index % 2 == 0 else "forall"


def brute_wqsat(inst: WqsatInstance) -> bool:
    """Recursive expansion over all weight-k subsets of each block."""

    def recurse(index, chosen):
        if index == len(inst.blocks):
            return brute_formula(inst.formula, chosen)
        subsets = itertools.combinations(inst.blocks[index], inst.weights[index])
        if inst.quantifier(index) == "exists":
            return any(recurse(index + 1, chosen | set(s)) for s in subsets)
        return all(recurse(index + 1, chosen | set(s)) for s in subsets)

    return recurse(0, set())


# ---------------------------------------------------------------------------
# Gadget outputs and helpers


@dataclass(frozen=True)
class GadgetOutput:
    graph: DataGraph
    expr: E.Rewb
    free: tuple

    def manifest(self) -> str:
        free = " ".join(self.free) if self.free else "-"
        return f"source {self.graph.source} / sink {self.graph.sink} / free-vars {free}"


def _output(g, expr):
    return GadgetOutput(g, expr, tuple(sorted(E.free_vars(expr))))


def union_all(parts) -> E.Rewb:
    """Balanced union fold (keeps trees shallow for very wide sums)."""
    parts = list(parts)
    if not parts:
        raise ValidationError("union of nothing")
    while len(parts) > 1:
        parts = [
            E.Union(parts[k], parts[k + 1]) if k + 1 < len(parts) else parts[k]
            for k in range(0, len(parts), 2)
        ]
    return parts[0]


def concat_all(parts) -> E.Rewb:
    parts = list(parts)
    if not parts:
        raise ValidationError("concatenation of nothing")
    out = parts[0]
    for p in parts[1:]:
        out = E.Concat(out, p)
    return out


def _fresh_nodes(used, base, count):
    out = []
    index = 0
    while len(out) < count:
        candidate = f"{base}{index}"
        index += 1
        if candidate not in used:
            out.append(candidate)
            used.add(candidate)
    return out


def _check_atoms(atoms):
    if not atoms:
        raise ValidationError("need at least one propositional atom")
    if len(set(atoms)) != len(atoms):
        raise ValidationError("duplicate atoms")
    for atom in atoms:
        if not _ATOM_RE.match(atom) or atom == STAR_VALUE:
            raise ValidationError(f"invalid atom name: {atom!r}")


def _gadget_letters(g, e):
    return g.letters() | E.letters_in(e)


# ---------------------------------------------------------------------------
# Formula evaluation schema


def formula_graph(phi: NnfFormula, atoms) -> DataGraph:
    """The series-parallel graph of an NNF formula, with the two-edge
    polarity prefix fused in front; source and sink are set."""
    atoms = list(atoms)
    _check_atoms(atoms)
    stray = atoms_of(phi) - set(atoms)
    if stray:
        raise ValidationError(f"formula uses atoms outside the given set: {sorted(stray)}")

    counter = itertools.count()
    edges = []

    def fresh():
        return f"g{next(counter)}"

    def build(node, src, snk):
        if isinstance(node, (Pos, Neg)):
            polarity = "po" if isinstance(node, Pos) else "ne"
            n1, n2, n3 = fresh(), fresh(), fresh()
            edges.append((src, "b", STAR_VALUE, n1))
            edges.append((n1, "pn", polarity, n2))
            edges.append((n2, "pa", node.atom, n3))
            edges.append((n3, "e", STAR_VALUE, snk))
        elif isinstance(node, FAnd):
            points = [src] + [fresh() for _ in node.items[:-1]] + [snk]
            for item, a, b in zip(node.items, points, points[1:]):
                build(item, a, b)
        else:
            for item in node.items:
                build(item, src, snk)

    head, mid, formula_src, formula_snk = "s0", "s1", fresh(), fresh()
    edges.append((head, "a", "po", mid))
    edges.append((mid, "a", "ne", formula_src))
    build(phi, formula_src, formula_snk)
    return graph(edges, source=head, sink=formula_snk)


def eval_expr(k: int) -> E.Rewb:
    """The fixed formula-evaluation query over variables x_1..x_k."""
    if k < 1:
        raise ValidationError("eval expression needs k >= 1")
    variables = [f"x_{j}" for j in range(1, k + 1)]
    some = E.or_all([E.Eq(v) for v in variables])
    none = E.and_all([E.Neq(v) for v in variables])
    positive = E.Concat(E.Test("pn", E.Eq("x_po")), E.Test("pa", some))
    negative = E.Concat(E.Test("pn", E.Eq("x_ne")), E.Test("pa", none))
    block = E.Concat(E.Concat(E.Atom("b"), E.Union(positive, negative)), E.Atom("e"))
    return E.Bind("a", "x_po", E.Bind("a", "x_ne", E.Star(block)))


def sat_reduction(phi: NnfFormula, atoms) -> GadgetOutput:
    """Source-sink connectivity holds iff ``phi`` is satisfiable."""
    atoms = list(atoms)
    base = formula_graph(phi, atoms)
    used = set(base.nodes)
    chain = _fresh_nodes(used, "c", len(atoms)) + [base.source]
    edges = set(base.edges)
    for atom, a, b in zip(atoms, chain, chain[1:]):
        edges.add((a, "a", atom, b))
        edges.add((a, "a", STAR_VALUE, b))
    expr = eval_expr(len(atoms))
    for j in range(len(atoms), 0, -1):
        expr = E.Bind("a", f"x_{j}", expr)
    g = graph(edges, source=chain[0], sink=base.sink)
    return _output(g, expr)


# ---------------------------------------------------------------------------
# Existential composition


def exists_compose(k: int, atoms, g: DataGraph, e: E.Rewb, *, letter: str = "a1",
                   variables=None, trusted: bool = False) -> GadgetOutput:
    """Connectivity holds iff some injective valuation of the variables
    into the atoms connects the inner graph under ``e``."""
    atoms = list(atoms)
    _check_atoms(atoms)
    if k < 1:
        raise ValidationError("existential composition needs k >= 1")
    if g.source is None or g.sink is None:
        raise ValidationError("inner graph needs source and sink")
    if letter in _gadget_letters(g, e):
        raise ValidationError(f"letter {letter!r} already used by the inner gadget")
    variables = list(variables) if variables is not None else [f"x_{j}" for j in range(1, k + 1)]
    if len(variables) != k:
        raise ValidationError("need exactly k variables")
    bound = set(E.binder_vars(e))
    if bound & set(variables):
        raise ValidationError("composition variables must not be bound inside the expression")
    if not trusted and not E.indistinguishable_sampled(e, variables, trials=200, seed=0):
        raise ValidationError(
            "variables failed the sampled indistinguishability check; "
            "pass trusted=True to override"
        )

    used = set(g.nodes)
    chain = _fresh_nodes(used, "q", len(atoms)) + [g.source]
    edges = set(g.edges)
    for atom, a, b in zip(atoms, chain, chain[1:]):
        edges.add((a, letter, atom, b))

    walk = E.Star(E.Atom(letter))
    expr = E.Concat(walk, e)
    for var in reversed(variables):
        expr = E.Concat(walk, E.Bind(letter, var, expr))
    out = graph(edges, source=chain[0], sink=g.sink)
    return _output(out, expr)


# ---------------------------------------------------------------------------
# Universal composition


def forall_compose(k: int, atoms, g: DataGraph, e: E.Rewb, *, skip_letter: str = "skip",
                   layer_letters=None, variables=None) -> GadgetOutput:
    """Connectivity holds iff every injective valuation of the variables
    into the atoms connects the inner graph under ``e``."""
    atoms = list(atoms)
    _check_atoms(atoms)
    if k < 1:
        raise ValidationError("universal composition needs k >= 1")
    if g.source is None or g.sink is None:
        raise ValidationError("inner graph needs source and sink")
    variables = list(variables) if variables is not None else [f"x_{j}" for j in range(1, k + 1)]
    if len(variables) != k:
        raise ValidationError("need exactly k variables")
    if layer_letters is None:
        layer_letters = [(f"a{i}", f"b{i}", f"c{i}") for i in range(1, k + 1)]
    if len(layer_letters) != k:
        raise ValidationError("need one (a, b, c) letter triple per layer")
    taken = _gadget_letters(g, e)
    introduced = [skip_letter] + [l for triple in layer_letters for l in triple]
    if len(set(introduced)) != len(introduced):
        raise ValidationError("layer letters must be pairwise distinct")
    clash = taken & set(introduced)
    if clash:
        raise ValidationError(f"letters already used by the inner gadget: {sorted(clash)}")
    bound = set(E.binder_vars(e))
    if bound & set(variables):
        raise ValidationError("composition variables must not be bound inside the expression")

    used = set(g.nodes)
    edges = set(g.edges)
    source, sink = g.source, g.sink
    for atom in atoms:
        edges.add((source, skip_letter, atom, sink))

    expr = e
    pairs = [
        E.Test(skip_letter, E.And(E.Eq(a), E.Eq(b)))
        for a, b in itertools.combinations(variables, 2)
    ]
    if pairs:
        expr = union_all([expr] + pairs)

    for (a_l, b_l, c_l), var in zip(layer_letters, variables):
        entries = _fresh_nodes(used, f"{a_l}in", len(atoms))
        exits = _fresh_nodes(used, f"{a_l}out", len(atoms))
        (new_source,) = _fresh_nodes(used, f"{b_l}src", 1)
        (new_sink,) = _fresh_nodes(used, f"{c_l}snk", 1)
        edges.add((new_source, b_l, STAR_VALUE, entries[0]))
        for atom, entry, exit_ in zip(atoms, entries, exits):
            edges.add((entry, a_l, atom, source))
            edges.add((sink, a_l, atom, exit_))
        for exit_, entry in zip(exits, entries[1:]):
            edges.add((exit_, c_l, STAR_VALUE, entry))
        edges.add((exits[-1], c_l, STAR_VALUE, new_sink))
        source, sink = new_source, new_sink

        inner = E.Bind(a_l, var, E.Concat(expr, E.Test(a_l, E.Eq(var))))
        expr = E.Concat(E.Atom(b_l), E.Star(E.Concat(inner, E.Atom(c_l))))

    out = graph(edges, source=source, sink=sink)
    return _output(out, expr)


# ---------------------------------------------------------------------------
# Alternating composition


def wqsat_reduction(inst: WqsatInstance) -> GadgetOutput:
    """Connectivity holds iff the weighted quantified instance is true.

    Compositions associate to the right: the formula gadget sits
    innermost, blocks are wrapped from the last to the first, each with
    its own fresh letters. Block j quantifies the variables
    x_{offset+1}..x_{offset+k_j} of the shared evaluation query.
    """
    total = sum(inst.weights)
    all_atoms = [atom for block in inst.blocks for atom in block]
    current = _output(formula_graph(inst.formula, all_atoms), eval_expr(total))

    offsets = list(itertools.accumulate((0,) + inst.weights))
    for index in range(len(inst.blocks) - 1, -1, -1):
        block = list(inst.blocks[index])
        weight = inst.weights[index]
        variables = [f"x_{j}" for j in range(offsets[index] + 1, offsets[index] + weight + 1)]
        tag = index + 1
        if inst.quantifier(index) == "exists":
            current = exists_compose(
                weight, block, current.graph, current.expr,
                letter=f"a{tag}", variables=variables,
            )
        else:
            current = forall_compose(
                weight, block, current.graph, current.expr,
                skip_letter=f"skip{tag}",
                layer_letters=[(f"a{tag}_{i}", f"b{tag}_{i}", f"c{tag}_{i}") for i in range(1, weight + 1)],
                variables=variables,
            )
    return current
