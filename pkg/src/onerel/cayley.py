"""Bounded word problem and finite balls in Cayley graphs and complexes.

Equality answers are three-valued.  ``Yes`` comes from a rewriting chain,
Dehn reduction, or an explicit relator-insertion sequence; ``No`` from
distinct abelian images, a confluent rewriting system, or Dehn's algorithm
under C'(1/6).  Anything else is ``Unknown``, and balls keep such
candidates apart instead of guessing.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx

from .complex import CWComplex2
from .errors import SubsetCoversRelator
from .presentation import Abelianization, Presentation
from .quotients import PermRep, permutation_reps
from .rewriting import CompletionBudget, RewritingSystem, knuth_bendix, letter_key
from .verdict import Verdict
from .words import Word, cyclic_reduce, free_reduce

ABELIAN = "abelian-filter"
SEARCH = "relator-insertion-search"
DEHN = "dehn-small-cancellation"
REWRITE = "knuth-bendix"
QUOTIENT = "finite-quotient-filter"
ALL_METHODS = frozenset({ABELIAN, SEARCH, DEHN, REWRITE, QUOTIENT})

DEFAULT_STATES = 10 ** 6


@dataclass(frozen=True)
class OracleBudget:
    """Limits for equality queries.

    ``max_length`` bounds intermediate words in the insertion search; when
    None it defaults to ``4*|R| + 2*|query|``.  ``max_states`` bounds the
    words visited per query.
    """

    max_length: int | None = None
    max_states: int = DEFAULT_STATES
    methods: frozenset = ALL_METHODS
    completion: CompletionBudget = field(default_factory=CompletionBudget)

    def __post_init__(self):
        object.__setattr__(self, "methods", frozenset(self.methods))
        if self.max_states < 1 or (self.max_length is not None and self.max_length < 1):
            raise ValueError("budgets must be positive")
        unknown = self.methods - ALL_METHODS
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")

    def length_for(self, P: Presentation, query_length: int) -> int:
        longest = max((len(r) for r in P.relators), default=0)
        if self.max_length is not None:
            return max(self.max_length, longest)
        return 4 * longest + 2 * query_length


@dataclass(frozen=True)
class EqualityResult:
    verdict: Verdict
    method: str
    # for the insertion search: (word, position, inserted relator) steps
    certificate: tuple = ()


def symmetrized(relators: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    """All cyclic permutations of the cyclically reduced relators and their inverses."""
    out = []
    for r in relators:
        core, _ = cyclic_reduce(Word(r))
        if not core:
            continue
        for w in (tuple(core), tuple(-c for c in reversed(core))):
            for i in range(len(w)):
                out.append(w[i:] + w[:i])
    return out


def _pieces_ok(P: Presentation, lam: Fraction) -> bool:
    sym = symmetrized(P.relators)
    if not sym:
        return True
    # positions are distinct even when the words agree, so proper powers fail
    for i, r1 in enumerate(sym):
        for r2 in sym[i + 1:]:
            k = 0
            while k < min(len(r1), len(r2)) and r1[k] == r2[k]:
                k += 1
            if k >= lam * min(len(r1), len(r2)):
                return False
    return True


def smallcancel_check(P: Presentation, lam: Fraction | float | str = Fraction(1, 6)) -> bool:
    """True iff every piece is shorter than ``lam`` times its relator."""
    return _pieces_ok(P, Fraction(lam))


def dehn_reduce(w: Sequence[int], sym: Sequence[tuple[int, ...]]) -> tuple[int, ...]:
    """Replace more than half of a relator by the inverse of the rest, until stuck."""
    w = tuple(free_reduce(w))
    halves = {}
    for r in sym:
        n = len(r)
        for k in range(n // 2 + 1, n + 1):
            u, v = r[:k], r[k:]
            halves.setdefault(u, tuple(-c for c in reversed(v)))
    lengths = sorted({len(u) for u in halves}, reverse=True)
    changed = True
    while changed and w:
        changed = False
        for L in lengths:
            for i in range(len(w) - L + 1):
                rep = halves.get(w[i:i + L])
                if rep is not None:
                    w = tuple(free_reduce(w[:i] + rep + w[i + L:]))
                    changed = True
                    break
            if changed:
                break
    return w


def _cyc(w: Sequence[int]) -> tuple[int, ...]:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i > 1 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return tuple(w[i:j])


def insertion_search(P: Presentation, w: Sequence[int], max_length: int, max_states: int):
    """Best-first search for a proof that ``w`` is trivial.

    States are cyclically reduced words; a move inserts a cyclic conjugate of
    a relator or its inverse anywhere.  Returns the step list or None.
    """
    sym = sorted(set(symmetrized(P.relators)))
    start = _cyc(w)
    if not start:
        return ()
    parent = {start: None}
    heap = [(len(start), 0, start)]
    tick = 0
    while heap:
        _, _, cur = heapq.heappop(heap)
        for i in range(len(cur) + 1):
            for r in sym:
                nxt = _cyc(cur[:i] + r + cur[i:])
                if len(nxt) > max_length or nxt in parent:
                    continue
                parent[nxt] = (cur, i, r)
                if not nxt:
                    steps = []
                    node = nxt
                    while parent[node] is not None:
                        prev, pos, rel = parent[node]
                        steps.append((prev, pos, rel))
                        node = prev
                    return tuple(reversed(steps))
                if len(parent) >= max_states:
                    return None
                tick += 1
                heapq.heappush(heap, (len(nxt), tick, nxt))
    return None


def verify_certificate(P: Presentation, w: Sequence[int], steps) -> bool:
    """Replay an insertion certificate: each step must be a legal move ending at 1."""
    sym = set(symmetrized(P.relators))
    cur = _cyc(w)
    for prev, pos, rel in steps:
        if prev != cur or rel not in sym:
            return False
        cur = _cyc(cur[:pos] + rel + cur[pos:])
    return cur == ()


class WordOracle:
    """Caches per-presentation data for repeated equality queries."""

    def __init__(self, P: Presentation, budget: OracleBudget | None = None):
        self.P = P
        self.budget = budget or OracleBudget()
        m = self.budget.methods
        self.ab = Abelianization(P) if ABELIAN in m else None
        self.sym = symmetrized(P.relators)
        self.dehn = DEHN in m and smallcancel_check(P, Fraction(1, 6))
        self.rws: RewritingSystem | None = None
        if REWRITE in m:
            self.rws = knuth_bendix(P, self.budget.completion)
        self.reps: list[PermRep] = []
        if QUOTIENT in m and not self.decides:
            self.reps = permutation_reps(P)

    @property
    def decides(self) -> bool:
        """True when every query gets a certified Yes/No."""
        return self.dehn or (self.rws is not None and self.rws.confluent)

    def normal_form(self, w: Sequence[int]) -> tuple[int, ...] | None:
        if self.rws is not None and self.rws.confluent:
            return self.rws.reduce(w)
        return None

    def signature(self, w: Sequence[int]) -> tuple:
        """Invariant of the group element: abelian image and permutation images."""
        ab = self.ab.image(w) if self.ab is not None else ()
        return (ab,) + tuple(rep.perm(w) for rep in self.reps)

    def key(self, w: Sequence[int]) -> tuple[int, ...]:
        """A word equal to ``w`` in the group (a normal form if one is available)."""
        if self.rws is not None:
            return self.rws.reduce(w)
        return tuple(free_reduce(w))

    def trivial(self, w: Sequence[int]) -> EqualityResult:
        w = tuple(free_reduce(w))
        if not w:
            return EqualityResult(Verdict.YES, "free-reduction")
        if self.ab is not None and not self.ab.is_trivial(w):
            return EqualityResult(Verdict.NO, ABELIAN)
        for rep in self.reps:
            if any(rep.act(p, w) != p for p in range(rep.degree)):
                return EqualityResult(Verdict.NO, QUOTIENT)
        if self.rws is not None:
            red = self.rws.reduce(w)
            if not red:
                return EqualityResult(Verdict.YES, REWRITE)
            if self.rws.confluent:
                return EqualityResult(Verdict.NO, REWRITE)
        if self.dehn:
            red = dehn_reduce(w, self.sym)
            return EqualityResult(Verdict.of(not red), DEHN)
        if SEARCH in self.budget.methods:
            limit = self.budget.length_for(self.P, len(w))
            steps = insertion_search(self.P, w, limit, self.budget.max_states)
            if steps is not None:
                return EqualityResult(Verdict.YES, SEARCH, steps)
        return EqualityResult(Verdict.UNKNOWN, "budget-exhausted")

    def equal(self, w1: Sequence[int], w2: Sequence[int]) -> EqualityResult:
        return self.trivial(tuple(w1) + tuple(-c for c in reversed(w2)))


def equal_in_group(P: Presentation, w1: Sequence[int], w2: Sequence[int],
                   budget: OracleBudget | None = None) -> Verdict:
    return WordOracle(P, budget).equal(w1, w2).verdict


# -- balls -------------------------------------------------------------------

@dataclass(frozen=True)
class Ball:
    presentation: Presentation
    radius: int
    # shortlex representatives; the index is the vertex id, 0 is the identity
    vertices: tuple[tuple[int, ...], ...]
    # (tail, head, generator index)
    edges: tuple[tuple[int, int, int], ...]
    complete: bool
    unresolved: int
    stabilized: bool

    def distance(self, v: int) -> int:
        return len(self.vertices[v])

    def sphere(self, k: int) -> list[int]:
        return [v for v, w in enumerate(self.vertices) if len(w) == k]

    def graph(self, generators: Iterable[int] | None = None) -> nx.MultiGraph:
        keep = None if generators is None else set(generators)
        g = nx.MultiGraph()
        g.add_nodes_from(range(len(self.vertices)))
        for k, (t, h, x) in enumerate(self.edges):
            if keep is None or x in keep:
                g.add_edge(t, h, key=k, gen=x)
        return g

    def label(self, v: int) -> str:
        return self.presentation.format(self.vertices[v])

    def to_json(self) -> dict:
        names = self.presentation.generators
        return {
            "presentation": str(self.presentation),
            "radius": self.radius,
            "vertices": [self.label(v) for v in range(len(self.vertices))],
            "edges": [{"tail": t, "head": h, "generator": names[x]} for t, h, x in self.edges],
            "complete": self.complete,
            "unresolved": self.unresolved,
            "stabilized": self.stabilized,
        }

    def to_dot(self) -> str:
        palette = ["red", "blue", "darkgreen", "orange", "purple", "brown", "cyan", "magenta"]
        names = self.presentation.generators
        lines = ["digraph ball {"]
        for v in range(len(self.vertices)):
            lines.append(f'  v{v} [label="{self.label(v)}"];')
        for t, h, x in self.edges:
            lines.append(f'  v{t} -> v{h} [label="{names[x]}", color={palette[x % len(palette)]}];')
        lines.append("}")
        return "\n".join(lines)


def _letters(n: int) -> list[int]:
    return sorted([g for g in range(1, n + 1)] + [-g for g in range(1, n + 1)], key=letter_key)


def cayley_ball(P: Presentation, r: int, budget: OracleBudget | None = None,
                oracle: WordOracle | None = None) -> Ball:
    """Breadth-first ball of radius ``r`` around the identity, vertices in shortlex order."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    oracle = oracle or WordOracle(P, budget)
    letters = _letters(P.rank)
    reps: list[tuple[int, ...]] = [()]
    by_key: dict[tuple[int, ...], int] = {oracle.key(()): 0}
    buckets: dict[tuple, list[int]] = {}
    bucket_of = oracle.signature
    buckets[bucket_of(())] = [0]
    # step[(v, letter)] = neighbour vertex
    step: dict[tuple[int, int], int] = {}
    unresolved = 0
    layer = [0]
    stabilized = False
    for k in range(1, r + 2):
        new_layer = []
        for v in layer:
            wv = reps[v]
            for c in letters:
                if wv and wv[-1] == -c:
                    continue
                if (v, c) in step:
                    continue
                cand = wv + (c,)
                key = oracle.key(cand)
                hit = by_key.get(key)
                undecided = False
                if hit is None and oracle.normal_form(()) is None:
                    for u in buckets.get(bucket_of(cand), []):
                        res = oracle.equal(cand, reps[u])
                        if res.verdict is Verdict.YES:
                            hit = u
                            break
                        if res.verdict is Verdict.UNKNOWN:
                            undecided = True
                    if hit is None and undecided:
                        unresolved += 1
                if hit is None and k <= r:
                    hit = len(reps)
                    reps.append(cand)
                    by_key[key] = hit
                    buckets.setdefault(bucket_of(cand), []).append(hit)
                    new_layer.append(hit)
                elif hit is not None:
                    by_key.setdefault(key, hit)
                if hit is not None:
                    step[(v, c)] = hit
                    step[(hit, -c)] = v
        if k <= r:
            if not new_layer:
                stabilized = unresolved == 0
                break
            layer = new_layer
        elif not new_layer and unresolved == 0:
            # every neighbour of the outer sphere is already inside
            stabilized = all((v, c) in step for v in layer for c in letters)
    edges = sorted({(v, u, c - 1) for (v, c), u in step.items() if c > 0})
    return Ball(P, r, tuple(reps), tuple(edges), unresolved == 0, unresolved, stabilized)


def complex_ball(P: Presentation, r: int, budget: OracleBudget | None = None,
                 lifts: bool = False, ball: Ball | None = None) -> tuple[CWComplex2, Ball]:
    """Ball of the Cayley complex: the Cayley ball plus every relator disk inside it.

    With ``lifts=False`` one face is attached per distinct boundary cycle;
    with ``lifts=True`` one per disk lift, so a cycle of a relator ``Q^s``
    carries ``s`` faces.
    """
    ball = ball or cayley_ball(P, r, budget)
    edge_id = {}
    edges = {}
    for k, (t, h, x) in enumerate(ball.edges, start=1):
        edges[k] = (t, h)
        edge_id[(t, x)] = k
    out_of = {}
    for (t, h, x), k in zip(ball.edges, range(1, len(ball.edges) + 1)):
        out_of[(t, x + 1)] = (h, k)
        out_of[(h, -(x + 1))] = (t, -k)
    faces = {}
    seen = set()
    for rel in P.relators:
        rel = tuple(rel)
        if not rel:
            continue
        for g in range(len(ball.vertices)):
            loop, v = [], g
            for c in rel:
                nxt = out_of.get((v, c))
                if nxt is None:
                    loop = None
                    break
                v, x = nxt
                loop.append(x)
            if loop is None or v != g:
                continue
            loop = tuple(loop)
            key = min(loop[i:] + loop[:i] for i in range(len(loop)))
            if not lifts and (rel, key) in seen:
                continue
            seen.add((rel, key))
            faces[len(faces) + 1] = loop
    return CWComplex2(range(len(ball.vertices)), edges, faces), ball


class ProbeStatus(str, enum.Enum):
    FOREST = "ForestConfirmed"
    CYCLE = "CycleFound"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ProbeResult:
    status: ProbeStatus
    subset: tuple[str, ...]
    radius: int
    vertices: int
    edges: int
    components: int
    witness: tuple = ()

    def to_json(self) -> dict:
        return {"status": self.status.value, "subset": list(self.subset), "radius": self.radius,
                "vertices": self.vertices, "edges": self.edges, "components": self.components,
                "witness": [list(e) for e in self.witness]}


def _subset_indices(P: Presentation, subset) -> list[int]:
    out = []
    for s in subset:
        out.append(P.index(s) if isinstance(s, str) else int(s))
    return sorted(set(out))


def freiheitssatz_probe(P: Presentation, subset, r: int, budget: OracleBudget | None = None,
                        ball: Ball | None = None) -> ProbeResult:
    """Check that edges labelled by ``subset`` form a forest inside the ball.

    Every merge in the ball is certified, so a cycle found here would be a
    genuine relation among the subset; a forest is only conclusive when the
    ball is complete.
    """
    idx = _subset_indices(P, subset)
    used = set()
    for rel in P.relators:
        used |= Word(rel).generators()
    if used and used <= set(idx):
        raise SubsetCoversRelator("subset must omit a generator occurring in the relator")
    ball = ball or cayley_ball(P, r, budget)
    g = ball.graph(idx)
    sub = g.edge_subgraph(list(g.edges(keys=True))).copy() if g.number_of_edges() else nx.MultiGraph()
    sub.add_nodes_from(g.nodes)
    ncomp = nx.number_connected_components(sub)
    names = tuple(P.generators[i] for i in idx)
    if sub.number_of_edges() > sub.number_of_nodes() - ncomp:
        cycle = nx.find_cycle(sub)
        witness = tuple((t, h, sub.edges[t, h, k]["gen"]) for t, h, k in cycle)
        return ProbeResult(ProbeStatus.CYCLE, names, r, sub.number_of_nodes(),
                           sub.number_of_edges(), ncomp, witness)
    status = ProbeStatus.FOREST if ball.complete else ProbeStatus.UNKNOWN
    return ProbeResult(status, names, r, sub.number_of_nodes(), sub.number_of_edges(), ncomp)


# -- ends --------------------------------------------------------------------

class EndsClass(str, enum.Enum):
    ZERO = "Zero"
    ONE = "One"
    TWO = "Two"
    MANY = "Many"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EndsEstimate:
    classification: EndsClass
    # (inner radius, outer radius, components meeting the outer sphere)
    evidence: tuple[tuple[int, int, int], ...]
    note: str
    complete: bool = True

    def to_json(self) -> dict:
        return {"classification": self.classification.value,
                "evidence": [{"r_inner": a, "r_outer": b, "components": c}
                             for a, b, c in self.evidence],
                "complete": self.complete, "note": self.note}


def annulus_components(ball: Ball, r_inner: int, r_outer: int) -> int:
    """Components of ``r_inner <= d <= r_outer`` that reach distance ``r_outer``."""
    keep = [v for v, w in enumerate(ball.vertices) if r_inner <= len(w) <= r_outer]
    g = ball.graph().subgraph(keep)
    return sum(1 for comp in nx.connected_components(g)
               if any(len(ball.vertices[v]) == r_outer for v in comp))


READINGS = 3


def count_ends(P: Presentation, r_inner: int, r_outer: int,
               budget: OracleBudget | None = None) -> EndsEstimate:
    """Estimate the number of ends from annulus components.

    The annulus width ``r_outer - r_inner`` is kept fixed while the inner
    radius takes three consecutive values, so the ball has radius
    ``r_outer + 2``.
    """
    if r_inner < 1 or r_outer <= r_inner:
        raise ValueError("need 1 <= r_inner < r_outer")
    width = r_outer - r_inner
    R = r_outer + READINGS - 1
    ball = cayley_ball(P, R, budget)
    if ball.stabilized:
        return EndsEstimate(EndsClass.ZERO, (), f"ball stabilized with {len(ball.vertices)} elements")
    evidence = tuple((a, a + width, annulus_components(ball, a, a + width))
                     for a in range(r_inner, r_inner + READINGS))
    counts = [c for _, _, c in evidence]
    if not ball.complete:
        return EndsEstimate(EndsClass.INCONCLUSIVE, evidence,
                            f"{ball.unresolved} undecided equality queries", complete=False)
    if all(c == 1 for c in counts):
        cls = EndsClass.ONE
    elif all(c == 2 for c in counts):
        cls = EndsClass.TWO
    elif all(a < b for a, b in zip(counts, counts[1:])):
        cls = EndsClass.MANY
    else:
        cls = EndsClass.INCONCLUSIVE
    return EndsEstimate(cls, evidence, "finite-radius evidence only")
