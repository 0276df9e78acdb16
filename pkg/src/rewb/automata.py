"""Compilation of expressions to automata.

Two views are built, both by the position (Glushkov) construction, so the
state count is always "letter occurrences + 1" for the flattened view and
"meta-letter occurrences + 1" for the hierarchical view, with no epsilon
transitions.

* ``hier_automaton`` keeps the expression's own level visible: a
  binding-free expression gets Read transitions over its letter
  occurrences; an expression whose minimal E-level equals its F-level gets
  BindRead transitions for binders plus SubExpr transitions over its
  maximal lower-F blocks (and is acyclic, since stars only occur inside
  those blocks); an expression that is properly F-shaped gets SubExpr
  transitions over its maximal E-level blocks.

* ``register_nfa`` flattens everything to guarded single-letter
  transitions with store actions: a binder contributes its head letter
  with a store, a conditioned letter contributes its guard. Acceptance is
  defined over configurations (state, valuation); the language equals the
  expression's language for every compatible starting valuation.

Both constructions require the input to be well-named (binder names
pairwise distinct and disjoint from the free variables); ``alpha_rename``
produces such a form.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import expr as E
from .errors import ValidationError


@dataclass(frozen=True, slots=True)
class SubExpr:
    expr: E.Rewb


@dataclass(frozen=True, slots=True)
class BindRead:
    letter: str
    var: str


@dataclass(frozen=True, slots=True)
class Read:
    letter: str
    cond: object = None


MetaLabel = SubExpr | BindRead | Read


@dataclass(frozen=True)
class HierAutomaton:
    states: frozenset
    initials: frozenset
    finals: frozenset
    transitions: frozenset  # of (state, MetaLabel, state)

    def sorted_transitions(self):
        return sorted(self.transitions, key=_transition_key)


def _transition_key(t):
    src, label, dst = t
    return (src, dst, type(label).__name__, repr(label))


class RegisterNfa:
    """Position automaton over letter occurrences with guards and stores.

    State 0 is initial; occurrence ``i`` is state ``i + 1``. Transitions
    are (src, letter, guard, store, dst) with ``guard`` a Condition or
    None (always true) and ``store`` a variable or None.
    """

    def __init__(self, n_states, finals, transitions):
        self.states = frozenset(range(n_states))
        self.initial = 0
        self.finals = frozenset(finals)
        self.transitions = frozenset(transitions)
        index = {}
        for src, letter, guard, store, dst in sorted(transitions, key=_nfa_key):
            index.setdefault((src, letter), []).append((guard, store, dst))
        self._index = index

    def moves(self, state, letter):
        return self._index.get((state, letter), ())


def _nfa_key(t):
    src, letter, guard, store, dst = t
    return (src, letter, dst, repr(guard), repr(store))


def _require_well_named(e):
    if not E.is_well_named(e):
        raise ValidationError(
            "expression is not alpha-renamed: binder names must be pairwise "
            "distinct and disjoint from the free variables"
        )


# Linearized regex over occurrences: ('eps',) | ('occ', i) | ('alt', a, b)
# | ('cat', a, b) | ('star', a).


def _positions(lin, n_occ):
    follow = {i: set() for i in range(n_occ)}

    def go(t):
        kind = t[0]
        if kind == "eps":
            return True, frozenset(), frozenset()
        if kind == "occ":
            s = frozenset((t[1],))
            return False, s, s
        if kind == "alt":
            n1, f1, l1 = go(t[1])
            n2, f2, l2 = go(t[2])
            return n1 or n2, f1 | f2, l1 | l2
        if kind == "cat":
            n1, f1, l1 = go(t[1])
            n2, f2, l2 = go(t[2])
            for p in l1:
                follow[p] |= f2
            first = f1 | f2 if n1 else f1
            last = l2 | l1 if n2 else l2
            return n1 and n2, first, last
        n1, f1, l1 = go(t[1])
        for p in l1:
            follow[p] |= f1
        return True, f1, l1

    nullable, first, last = go(lin)
    return nullable, first, last, follow


def register_nfa(e: E.Rewb) -> RegisterNfa:
    """Flatten ``e`` to a guarded NFA; requires ``e`` well-named."""
    _require_well_named(e)
    occurrences = []

    def lin(node):
        if isinstance(node, E.Eps):
            return ("eps",)
        if isinstance(node, E.Atom):
            occurrences.append((node.letter, None, None))
            return ("occ", len(occurrences) - 1)
        if isinstance(node, E.Test):
            occurrences.append((node.letter, node.cond, None))
            return ("occ", len(occurrences) - 1)
        if isinstance(node, E.Union):
            return ("alt", lin(node.left), lin(node.right))
        if isinstance(node, E.Concat):
            return ("cat", lin(node.left), lin(node.right))
        if isinstance(node, E.Star):
            return ("star", lin(node.body))
        occurrences.append((node.letter, None, node.var))
        head = ("occ", len(occurrences) - 1)
        return ("cat", head, lin(node.body))

    tree = lin(e)
    nullable, first, last, follow = _positions(tree, len(occurrences))

    transitions = set()
    for q in first:
        letter, guard, store = occurrences[q]
        transitions.add((0, letter, guard, store, q + 1))
    for p, succs in follow.items():
        for q in succs:
            letter, guard, store = occurrences[q]
            transitions.add((p + 1, letter, guard, store, q + 1))
    finals = {q + 1 for q in last}
    if nullable:
        finals.add(0)
    return RegisterNfa(len(occurrences) + 1, finals, transitions)


def hier_automaton(e: E.Rewb) -> HierAutomaton:
    """The generalized automaton at the expression's own level."""
    _require_well_named(e)
    level = E.classify(e)
    occurrences = []

    def occ(label):
        occurrences.append(label)
        return ("occ", len(occurrences) - 1)

    if level.f_level == 0:

        def lin(node):
            if isinstance(node, E.Eps):
                return ("eps",)
            if isinstance(node, E.Atom):
                return occ(Read(node.letter, None))
            if isinstance(node, E.Test):
                return occ(Read(node.letter, node.cond))
            if isinstance(node, E.Union):
                return ("alt", lin(node.left), lin(node.right))
            if isinstance(node, E.Concat):
                return ("cat", lin(node.left), lin(node.right))
            if isinstance(node, E.Star):
                return ("star", lin(node.body))
            raise AssertionError("binder in a level-0 expression")

    elif level.e_level == level.f_level:
        block_cut = level.f_level - 1

        def lin(node):
            if E.classify(node).f_level <= block_cut:
                return occ(SubExpr(node))
            if isinstance(node, E.Bind):
                head = occ(BindRead(node.letter, node.var))
                return ("cat", head, lin(node.body))
            if isinstance(node, E.Union):
                return ("alt", lin(node.left), lin(node.right))
            if isinstance(node, E.Concat):
                return ("cat", lin(node.left), lin(node.right))
            raise AssertionError("star outside a lower-F block in an E-shaped expression")

    else:
        block_cut = level.f_level

        def lin(node):
            if E.classify(node).e_level <= block_cut:
                return occ(SubExpr(node))
            if isinstance(node, E.Union):
                return ("alt", lin(node.left), lin(node.right))
            if isinstance(node, E.Concat):
                return ("cat", lin(node.left), lin(node.right))
            if isinstance(node, E.Star):
                return ("star", lin(node.body))
            raise AssertionError("binder above the E-level blocks of an F-shaped expression")

    tree = lin(e)
    nullable, first, last, follow = _positions(tree, len(occurrences))

    transitions = set()
    for q in first:
        transitions.add((0, occurrences[q], q + 1))
    for p, succs in follow.items():
        for q in succs:
            transitions.add((p + 1, occurrences[q], q + 1))
    finals = {q + 1 for q in last}
    if nullable:
        finals.add(0)
    return HierAutomaton(
        frozenset(range(len(occurrences) + 1)),
        frozenset((0,)),
        frozenset(finals),
        frozenset(transitions),
    )


def automaton_size(e: E.Rewb) -> int:
    """Number of states of the hierarchical automaton of ``e``."""
    return len(hier_automaton(e).states)


def dump_automaton(e: E.Rewb) -> str:
    """Debug listing of the hierarchical automaton, one transition per line."""
    from .syntax import print_cond, print_expr

    aut = hier_automaton(e)
    lines = [
        f"states {len(aut.states)}",
        "initial " + " ".join(str(q) for q in sorted(aut.initials)),
        "final " + " ".join(str(q) for q in sorted(aut.finals)),
    ]
    for src, label, dst in aut.sorted_transitions():
        if isinstance(label, Read):
            cond = f"[{print_cond(label.cond)}]" if label.cond is not None else ""
            text = f"read {label.letter}{cond}"
        elif isinstance(label, BindRead):
            text = f"bind {label.letter}@{label.var}"
        else:
            text = f"subexpr {print_expr(label.expr)}"
        lines.append(f"{src} -> {dst} {text}")
    return "\n".join(lines) + "\n"
