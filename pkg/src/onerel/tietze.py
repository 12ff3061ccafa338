"""Budgeted Tietze simplification.

Moves: free/cyclic reduction of relators, removal of trivial or duplicate
relators, and elimination of a generator occurring exactly once in some
relator (solve for it and substitute everywhere).
"""

from __future__ import annotations

from dataclasses import dataclass

from .presentation import Presentation
from .words import Word, canonical_cyclic, cyclic_reduce, gen_of, occurrences, substitute

DEFAULT_BUDGET = 1000


@dataclass(frozen=True)
class Simplified:
    presentation: Presentation
    # original generator index -> word over the simplified alphabet
    images: dict[int, Word]
    # simplified generator index -> original generator index
    kept: tuple[int, ...]
    steps: int
    exhausted: bool

    @property
    def is_free(self) -> bool:
        return not self.presentation.relators

    @property
    def is_trivial_group(self) -> bool:
        return self.is_free and self.presentation.rank == 0


def _cyclic_key(r: Word) -> Word:
    return min(canonical_cyclic(r), canonical_cyclic(r.inverse()))


def simplify(P: Presentation, budget: int = DEFAULT_BUDGET) -> Simplified:
    n = P.rank
    images: dict[int, Word] = {g: Word([g + 1]) for g in range(n)}
    alive = set(range(n))
    rels: list[Word] = [r for r in P.relators]
    steps = 0
    exhausted = False

    def tidy(rs):
        out, seen = [], set()
        for r in rs:
            core, _ = cyclic_reduce(r)
            if not core:
                continue
            key = _cyclic_key(core)
            if key in seen:
                continue
            seen.add(key)
            out.append(core)
        return out

    while True:
        tidied = tidy(rels)
        if len(tidied) != len(rels) or any(a != b for a, b in zip(tidied, rels)):
            steps += 1
        rels = tidied
        if steps > budget:
            exhausted = True
            break
        best = None
        for k, r in enumerate(rels):
            if best is not None and len(r) >= len(rels[best[0]]):
                continue
            once = [g for g in sorted(r.generators()) if occurrences(r, g) == 1]
            if once:
                # prefer the generator touching the fewest other relators
                g = min(once, key=lambda x: (sum(1 for s in rels if occurrences(s, x)), x))
                best = (k, g)
        if best is None:
            break
        k, g = best
        r = rels.pop(k)
        i = next(i for i, c in enumerate(r) if gen_of(c) == g)
        rest = Word(tuple(r[i + 1:]) + tuple(r[:i]))
        # r ~ x^e * rest, so x^e = rest^-1
        value = rest.inverse() if r[i] > 0 else rest
        sub = {g: value}
        rels = [substitute(s, sub) for s in rels]
        images = {h: substitute(w, sub) for h, w in images.items()}
        alive.discard(g)
        steps += 1
        if steps > budget:
            exhausted = True
            break

    kept = tuple(sorted(alive))
    renum = {old: new for new, old in enumerate(kept)}
    recode = {old: Word([new + 1]) for old, new in renum.items()}

    def rename(w: Word) -> Word:
        return substitute(w, recode)

    names = tuple(P.generators[g] for g in kept)
    out = Presentation(names, tuple(rename(r) for r in rels))
    return Simplified(out, {h: rename(w) for h, w in images.items()}, kept, steps, exhausted)
