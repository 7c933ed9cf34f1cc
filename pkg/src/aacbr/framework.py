"""Attack-graph mining and extension semantics.

A casebase is mined into a directed attack graph whose nodes are the
default case, the stored cases and (optionally) one unlabelled new case.
A labelled argument attacks another when they disagree on the outcome,
the attacker is at least as specific, and no argument with the
attacker's outcome sits strictly between the two (the attack is as
concise as possible). The new case attacks exactly the arguments that
are irrelevant to it (not at most its characterisation) and is never
attacked itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .core import Casebase, Characterisation, NewCase, geq, gt

KIND_DEFAULT = "default"
KIND_NEW = "new_case"
KIND_PAST = "past_case"


class TooLarge(ValueError):
    """The graph exceeds the size guard of a brute-force operation."""


@dataclass(frozen=True)
class Argument:
    """A node of the attack graph. New cases carry ``outcome=None``."""

    kind: str
    id: str
    characterisation: Characterisation
    outcome: str | None


@dataclass(frozen=True)
class ArgGraph:
    """An attack graph; ``arguments`` is kept sorted by (kind, id)."""

    arguments: tuple[Argument, ...]
    attacks: frozenset[tuple[Argument, Argument]]

    def labelled(self) -> tuple[Argument, ...]:
        return tuple(a for a in self.arguments if a.kind != KIND_NEW)

    def default_argument(self) -> Argument:
        for a in self.arguments:
            if a.kind == KIND_DEFAULT:
                return a
        raise ValueError("graph has no default argument")

    def new_case_argument(self) -> Argument | None:
        for a in self.arguments:
            if a.kind == KIND_NEW:
                return a
        return None

    def attackers_by_target(self) -> dict[Argument, set[Argument]]:
        attackers: dict[Argument, set[Argument]] = {a: set() for a in self.arguments}
        for src, dst in self.attacks:
            attackers[dst].add(src)
        return attackers


@dataclass(frozen=True)
class Extension:
    """A set of accepted arguments plus the iteration strata that built it."""

    members: frozenset[Argument]
    strata: tuple[frozenset[Argument], ...]


def _sorted_args(args: list[Argument]) -> tuple[Argument, ...]:
    return tuple(sorted(args, key=lambda a: (a.kind, a.id)))


def _labelled_attacks(args: tuple[Argument, ...]) -> frozenset[tuple[Argument, Argument]]:
    """Mine the attacks among labelled arguments only."""
    attacks = set()
    for a in args:
        for b in args:
            if a.outcome == b.outcome:
                continue
            if not geq(a.characterisation, b.characterisation):
                continue
            blocked = any(
                g.outcome == a.outcome
                and gt(a.characterisation, g.characterisation)
                and gt(g.characterisation, b.characterisation)
                for g in args
            )
            if not blocked:
                attacks.add((a, b))
    return frozenset(attacks)


@lru_cache(maxsize=4096)
def _mine_labelled(cb: Casebase) -> ArgGraph:
    args = [
        Argument(
            KIND_DEFAULT,
            cb.default_case.id,
            cb.default_case.characterisation,
            cb.default_case.outcome,
        )
    ]
    args += [
        Argument(KIND_PAST, c.id, c.characterisation, c.outcome) for c in cb.cases
    ]
    ordered = _sorted_args(args)
    return ArgGraph(arguments=ordered, attacks=_labelled_attacks(ordered))


def mine_af(cb: Casebase, newcase: NewCase | None = None) -> ArgGraph:
    """Mine the attack graph of ``cb``, optionally with one new case.

    Restricting the result to labelled arguments always equals mining
    the casebase alone.
    """
    labelled = _mine_labelled(cb)
    if newcase is None:
        return labelled
    return with_probe(labelled, newcase)


def with_probe(g: ArgGraph, newcase: NewCase) -> ArgGraph:
    """Extend a labelled graph with one unlabelled case and its attacks."""
    if g.new_case_argument() is not None:
        raise ValueError("graph already contains a new case")
    probe = Argument(KIND_NEW, newcase.id, newcase.characterisation, None)
    attacks = set(g.attacks)
    for b in g.arguments:
        if not geq(newcase.characterisation, b.characterisation):
            attacks.add((probe, b))
    return ArgGraph(
        arguments=_sorted_args(list(g.arguments) + [probe]),
        attacks=frozenset(attacks),
    )


def grounded_extension(g: ArgGraph) -> Extension:
    """The least fixed point of defence, with its strata.

    Stratum 0 holds the unattacked arguments; each following stratum
    holds everything the previous one defends. Strata grow monotonically
    and the fixed point is reached within ``len(arguments)`` rounds.
    """
    args = g.arguments
    index = {a: i for i, a in enumerate(args)}
    attackers = [0] * len(args)
    targets = [0] * len(args)
    for src, dst in g.attacks:
        attackers[index[dst]] |= 1 << index[src]
        targets[index[src]] |= 1 << index[dst]

    current = 0
    for i in range(len(args)):
        if attackers[i] == 0:
            current |= 1 << i
    strata = [current]
    while True:
        hit = 0
        probe_mask = current
        while probe_mask:
            low = probe_mask & -probe_mask
            hit |= targets[low.bit_length() - 1]
            probe_mask ^= low
        nxt = 0
        for i in range(len(args)):
            if attackers[i] & ~hit == 0:
                nxt |= 1 << i
        if nxt == current:
            break
        strata.append(nxt)
        current = nxt

    def unpack(mask: int) -> frozenset[Argument]:
        return frozenset(a for i, a in enumerate(args) if mask >> i & 1)

    return Extension(members=unpack(current), strata=tuple(unpack(m) for m in strata))


def is_acyclic(g: ArgGraph) -> bool:
    """Depth-first search for a directed cycle along the attacks."""
    out: dict[Argument, list[Argument]] = {a: [] for a in g.arguments}
    for src, dst in g.attacks:
        out[src].append(dst)
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {a: WHITE for a in g.arguments}
    for root in g.arguments:
        if colour[root] != WHITE:
            continue
        stack: list[tuple[Argument, int]] = [(root, 0)]
        colour[root] = GREY
        while stack:
            node, i = stack.pop()
            if i < len(out[node]):
                stack.append((node, i + 1))
                child = out[node][i]
                if colour[child] == GREY:
                    return False
                if colour[child] == WHITE:
                    colour[child] = GREY
                    stack.append((child, 0))
            else:
                colour[node] = BLACK
    return True


def stable_extensions_bruteforce(g: ArgGraph) -> list[frozenset[Argument]]:
    """Enumerate every conflict-free set that attacks all outsiders.

    Guarded to at most 20 arguments; raises :class:`TooLarge` beyond
    that. Intended as an oracle for small graphs, where a well-founded
    graph has exactly one stable extension, the grounded one.
    """
    args = g.arguments
    n = len(args)
    if n > 20:
        raise TooLarge(f"{n} arguments exceed the brute-force guard of 20")
    index = {a: i for i, a in enumerate(args)}
    targets = [0] * n
    for src, dst in g.attacks:
        targets[index[src]] |= 1 << index[dst]

    found: list[frozenset[Argument]] = []
    full = (1 << n) - 1
    for subset in range(1 << n):
        hit = 0
        rest = subset
        while rest:
            low = rest & -rest
            hit |= targets[low.bit_length() - 1]
            rest ^= low
        if hit & subset:
            continue  # not conflict-free
        if hit | subset == full:
            found.append(frozenset(a for i, a in enumerate(args) if subset >> i & 1))
    return found
