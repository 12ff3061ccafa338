from __future__ import annotations

import random

import sympy
from hypothesis import strategies as st

from onerel.complex import (
    CWComplex2,
    EdgeSite,
    FaceSite,
    TreeSet,
    full_subcomplex,
    internal_collapse,
    internal_expansion,
)
from onerel.presentation import Presentation, parse_presentation
from onerel.words import Word, cyclic_reduce


def pres(text: str) -> Presentation:
    return parse_presentation(text)


def letters(ngens: int):
    return st.sampled_from([c for g in range(1, ngens + 1) for c in (g, -g)])


def raw_words(ngens: int = 2, max_size: int = 12):
    return st.lists(letters(ngens), max_size=max_size)


def reduced_words(ngens: int = 2, max_size: int = 12):
    return raw_words(ngens, max_size).map(Word)


def random_cyclic_word(rng: random.Random, ngens: int, length: int) -> Word:
    """Cyclically reduced word of exactly ``length`` letters."""
    while True:
        out: list[int] = []
        while len(out) < length:
            c = rng.choice([1, -1]) * rng.randint(1, ngens)
            if out and out[-1] == -c:
                continue
            out.append(c)
        if length < 2 or out[0] != -out[-1]:
            return Word(out)


def random_one_relator(rng: random.Random, ngens: int, max_len: int) -> Presentation:
    names = "abcdefgh"[:ngens]
    w = random_cyclic_word(rng, ngens, rng.randint(1, max_len))
    core, _ = cyclic_reduce(w)
    return Presentation(tuple(names), (core,))


def grid(w: int, h: int):
    """Square grid complex: w*h vertices, every unit square filled."""
    def vid(x, y):
        return y * w + x

    V = {vid(x, y) for x in range(w) for y in range(h)}
    E: dict = {}
    horiz, vert = {}, {}
    for y in range(h):
        for x in range(w - 1):
            k = len(E) + 1
            E[k] = (vid(x, y), vid(x + 1, y))
            horiz[x, y] = k
    for y in range(h - 1):
        for x in range(w):
            k = len(E) + 1
            E[k] = (vid(x, y), vid(x, y + 1))
            vert[x, y] = k
    F = {}
    for y in range(h - 1):
        for x in range(w - 1):
            F[len(F) + 1] = (horiz[x, y], vert[x + 1, y], -horiz[x, y + 1], -vert[x, y])
    return CWComplex2(V, E, F)


def random_move(C, rng: random.Random):
    """One random elementary collapse or expansion; returns the new complex."""
    collapses = []
    for f, bd in C.faces.items():
        for x in {abs(c) for c in bd}:
            if sum(1 for c in bd if abs(c) == x) == 1:
                collapses.append((f, x, 2))
    for e, (t, hd) in C.edges.items():
        if t != hd:
            collapses.append((e, t, 1))
            collapses.append((e, hd, 1))
    if collapses and rng.random() < 0.5:
        e, d, dim = rng.choice(collapses)
        return internal_collapse(C, e, d, dim)
    if rng.random() < 0.5 or not C.edges:
        v = rng.choice(sorted(C.vertices))
        ends = [(e, side) for e, (t, hd) in C.edges.items()
                for side, end in (("tail", t), ("head", hd)) if end == v]
        moved = {x for x in ends if rng.random() < 0.5}
        return internal_expansion(C, EdgeSite(v, moved))[0]
    # random edge path of length 1..3 from a random start
    x = rng.choice(sorted(C.edges)) * rng.choice((1, -1))
    path = [x]
    for _ in range(rng.randint(0, 2)):
        here = C.end(path[-1])
        nxt = [s * e for e, (t, hd) in C.edges.items() for s in (1, -1)
               if (t if s > 0 else hd) == here and s * e != -path[-1]]
        if not nxt:
            break
        path.append(rng.choice(nxt))
    reroute = []
    k = len(path)
    for f, bd in C.faces.items():
        n = len(bd)
        if k > n:
            continue
        for p in range(n):
            if all(bd[(p + j) % n] == path[j] for j in range(k)):
                reroute.append((f, p))
                break
    reroute = [r for r in reroute if rng.random() < 0.5]
    return internal_expansion(C, FaceSite(tuple(path), tuple(reroute)))[0]


def oracle_betti(C) -> tuple[int, int, int]:
    # independent incidence matrices, ranks over Q by sympy
    vs, es, fs = sorted(C.vertices), sorted(C.edges), sorted(C.faces)
    d1 = sympy.zeros(len(es), len(vs))
    for i, e in enumerate(es):
        t, h = C.edges[e]
        d1[i, vs.index(h)] += 1
        d1[i, vs.index(t)] -= 1
    d2 = sympy.zeros(len(fs), len(es))
    for i, f in enumerate(fs):
        for x in C.faces[f]:
            d2[i, es.index(abs(x))] += 1 if x > 0 else -1
    r1 = d1.rank() if es and vs else 0
    r2 = d2.rank() if fs and es else 0
    return len(vs) - r1, len(es) - r1 - r2, len(fs) - r2


def u_fixture():
    """3x3 grid; C1 is the U of the left, top and right sides, T the bottom row."""
    K = grid(3, 3)
    C1 = full_subcomplex(K, {0, 3, 6, 7, 8, 5, 2})
    C2 = K.whole()
    T = full_subcomplex(K, {0, 1, 2})
    return K, [C1, C2], TreeSet((T,))


def gap_fixture():
    """As the U fixture, but the middle bottom vertex is in no member."""
    K = grid(3, 3)
    C1 = full_subcomplex(K, {0, 3, 6, 7, 8, 5, 2})
    C2 = full_subcomplex(K, {0, 3, 6, 7, 8, 5, 2, 4})
    T = full_subcomplex(K, {0, 1, 2})
    return K, [C1, C2], TreeSet((T,))
