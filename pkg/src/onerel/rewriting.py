"""Budgeted Knuth-Bendix completion under the shortlex order.

Letters are ordered a < a^-1 < b < b^-1 < ...  Every rule produced is an
equality in the group, so reduction is sound for proving equalities even
when completion stops early; only a confluent system also proves
inequalities (distinct normal forms).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .presentation import Presentation

Letters = tuple[int, ...]


def letter_key(c: int) -> tuple[int, int]:
    return (abs(c), 1 if c < 0 else 0)


def shortlex(w: Sequence[int]) -> tuple:
    return (len(w), tuple(letter_key(c) for c in w))


class RewritingSystem:
    def __init__(self, rules: dict[Letters, Letters] | None = None, confluent: bool = False):
        self.rules: dict[Letters, Letters] = dict(rules or {})
        self.confluent = confluent
        self._lengths: list[int] = []
        self._reindex()

    def _reindex(self):
        self._lengths = sorted({len(lhs) for lhs in self.rules})

    def __len__(self):
        return len(self.rules)

    def reduce(self, w: Iterable[int]) -> Letters:
        rules, lengths = self.rules, self._lengths
        todo = list(w)[::-1]
        out: list[int] = []
        while todo:
            out.append(todo.pop())
            for L in lengths:
                if L > len(out):
                    break
                rhs = rules.get(tuple(out[-L:]))
                if rhs is not None:
                    del out[-L:]
                    todo.extend(reversed(rhs))
                    break
        return tuple(out)

    def add(self, lhs: Letters, rhs: Letters):
        self.rules[lhs] = rhs
        self._reindex()

    def remove(self, lhs: Letters):
        del self.rules[lhs]
        self._reindex()


def _contains(big: Letters, small: Letters) -> bool:
    n, m = len(big), len(small)
    return any(big[i:i + m] == small for i in range(n - m + 1))


def _overlaps(l1: Letters, r1: Letters, l2: Letters, r2: Letters):
    """Critical pairs from a proper suffix of l1 equal to a proper prefix of l2."""
    for k in range(1, min(len(l1), len(l2))):
        if l1[-k:] == l2[:k]:
            yield r1 + l2[k:], l1[:-k] + r2


@dataclass
class CompletionBudget:
    max_rules: int = 150
    max_rule_length: int = 24
    max_rounds: int = 200


def knuth_bendix(P: Presentation, budget: CompletionBudget | None = None) -> RewritingSystem:
    budget = budget or CompletionBudget()
    system = RewritingSystem()
    pending: list[tuple[Letters, Letters]] = []
    for g in range(1, P.rank + 1):
        pending.append(((g, -g), ()))
        pending.append(((-g, g), ()))
    for r in P.relators:
        pending.append((tuple(r), ()))
    checked: set[tuple[Letters, Letters]] = set()

    def absorb() -> bool:
        while pending:
            u, v = pending.pop()
            u, v = system.reduce(u), system.reduce(v)
            if u == v:
                continue
            lhs, rhs = (u, v) if shortlex(u) > shortlex(v) else (v, u)
            if len(lhs) > budget.max_rule_length or len(system) >= budget.max_rules:
                return False
            # interreduce: rules whose left side contains the new one are retired
            for l2 in [l for l in system.rules if _contains(l, lhs)]:
                pending.append((l2, system.rules[l2]))
                system.remove(l2)
            system.add(lhs, rhs)
            for l2, r2 in list(system.rules.items()):
                nr = system.reduce(r2)
                if nr != r2:
                    system.rules[l2] = nr
        return True

    for _ in range(budget.max_rounds):
        if not absorb():
            break
        items = list(system.rules.items())
        found = False
        for l1, r1 in items:
            for l2, r2 in items:
                if (l1, l2) in checked:
                    continue
                checked.add((l1, l2))
                for u, v in _overlaps(l1, r1, l2, r2):
                    if system.reduce(u) != system.reduce(v):
                        pending.append((u, v))
                        found = True
        if not found and not pending:
            system.confluent = True
            return system
    # stopped early: the rules are still valid equalities
    system.confluent = False
    return system
