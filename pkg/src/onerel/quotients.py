"""Small permutation representations, found by bounded coset-table search.

A complete coset table in which every relator closes at every coset is a
homomorphism to a symmetric group, so distinct images prove that two words
are distinct in the group.  Each table is re-verified before it is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .presentation import Presentation


@dataclass(frozen=True)
class PermRep:
    degree: int
    # images[g][p] = p * generator g, for g = 0..n-1
    images: tuple[tuple[int, ...], ...]
    inverses: tuple[tuple[int, ...], ...]

    def act(self, p: int, w: Sequence[int]) -> int:
        for c in w:
            p = self.images[c - 1][p] if c > 0 else self.inverses[-c - 1][p]
        return p

    def perm(self, w: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.act(p, w) for p in range(self.degree))

    def compose(self, perm: tuple[int, ...], c: int) -> tuple[int, ...]:
        table = self.images[c - 1] if c > 0 else self.inverses[-c - 1]
        return tuple(table[p] for p in perm)

    def respects(self, P: Presentation) -> bool:
        return all(self.act(p, r) == p for r in P.relators for p in range(self.degree))


class _Table:
    def __init__(self, ngens: int, limit: int):
        self.n = ngens
        self.limit = limit
        self.rows: list[dict[int, int]] = [dict()]

    def copy(self):
        t = _Table(self.n, self.limit)
        t.rows = [dict(r) for r in self.rows]
        return t

    def define(self, p: int, c: int, q: int) -> bool:
        a, b = self.rows[p].get(c), self.rows[q].get(-c)
        if (a is not None and a != q) or (b is not None and b != p):
            return False
        self.rows[p][c] = q
        self.rows[q][-c] = p
        return True

    def scan(self, relators: Sequence[tuple[int, ...]]) -> bool:
        """Deduce forced entries; False on a contradiction."""
        changed = True
        while changed:
            changed = False
            for p in range(len(self.rows)):
                for r in relators:
                    i, f = 0, p
                    while i < len(r) and r[i] in self.rows[f]:
                        f = self.rows[f][r[i]]
                        i += 1
                    if i == len(r):
                        if f != p:
                            return False
                        continue
                    j, b = len(r), p
                    while j > i and -r[j - 1] in self.rows[b]:
                        b = self.rows[b][-r[j - 1]]
                        j -= 1
                    if j == i:
                        if f != b:
                            return False
                    elif j == i + 1:
                        if not self.define(f, r[i], b):
                            return False
                        changed = True
        return True

    def first_gap(self):
        letters = [c for g in range(1, self.n + 1) for c in (g, -g)]
        for p, row in enumerate(self.rows):
            for c in letters:
                if c not in row:
                    return p, c
        return None

    def to_rep(self) -> PermRep:
        images = tuple(tuple(row[g] for row in self.rows) for g in range(1, self.n + 1))
        inverses = tuple(tuple(row[-g] for row in self.rows) for g in range(1, self.n + 1))
        return PermRep(len(self.rows), images, inverses)


def permutation_reps(P: Presentation, max_degree: int = 6, max_reps: int = 24,
                     max_nodes: int = 20000) -> list[PermRep]:
    """Transitive permutation representations of degree 2..max_degree.

    Depth-first over coset tables; stops after ``max_reps`` distinct actions
    or ``max_nodes`` search nodes.
    """
    rels = [tuple(r) for r in P.relators if r]
    found: list[PermRep] = []
    seen: set = set()
    nodes = 0
    if P.rank == 0:
        return found

    def walk(t: _Table):
        nonlocal nodes
        if len(found) >= max_reps or nodes >= max_nodes:
            return
        nodes += 1
        if not t.scan(rels):
            return
        gap = t.first_gap()
        if gap is None:
            rep = t.to_rep()
            if rep.degree > 1 and rep.respects(P):
                key = (rep.degree, rep.images)
                if key not in seen:
                    seen.add(key)
                    found.append(rep)
            return
        p, c = gap
        for q in range(len(t.rows)):
            if -c not in t.rows[q]:
                u = t.copy()
                if u.define(p, c, q):
                    walk(u)
        if len(t.rows) < t.limit:
            u = t.copy()
            u.rows.append({})
            u.define(p, c, len(u.rows) - 1)
            walk(u)

    for degree in range(2, max_degree + 1):
        walk(_Table(P.rank, degree))
        if len(found) >= max_reps or nodes >= max_nodes:
            break
    return found
