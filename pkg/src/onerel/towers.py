"""Towers of groups from filtrations of finite complexes.

A tower is a sequence ``G0 <- G1 <- G2 <- ...``; ``bonds[i]`` maps stage
``i+1`` into stage ``i``.  Complement stages are fundamental groups of the
closure of the cells outside a filtration member, simplified by Tietze
moves; bonds come from inclusion, conjugated along a path joining the two
base points inside the larger complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import intmat
from .cayley import OracleBudget, WordOracle, complex_ball
from .complex import CWComplex2, SpanningTree, Subcomplex, check_filtration, complement, full_subcomplex
from .errors import DisconnectedComplement, RayInsideFiltration
from .presentation import Presentation, abelian_invariants
from .rewriting import shortlex
from .tietze import DEFAULT_BUDGET, Simplified, simplify
from .verdict import Verdict
from .words import Word, exponent_vector, free_reduce, substitute


@dataclass(frozen=True)
class GroupHom:
    source: Presentation
    target: Presentation
    # images[k] is the image of source generator k
    images: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(Word(w) for w in self.images))
        if len(self.images) != self.source.rank:
            raise ValueError("one image per source generator is required")
        for w in self.images:
            if any(abs(c) > self.target.rank for c in w):
                raise ValueError("image outside the target alphabet")

    def __call__(self, w: Sequence[int]) -> Word:
        return substitute(w, dict(enumerate(self.images)))

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self o inner``."""
        return GroupHom(inner.source, self.target, tuple(self(w) for w in inner.images))

    def verify(self, budget: OracleBudget | None = None) -> Verdict:
        """Yes if every source relator maps to a certified-trivial word."""
        oracle = WordOracle(self.target, budget)
        verdicts = [oracle.trivial(self(r)).verdict for r in self.source.relators]
        if any(v is Verdict.NO for v in verdicts):
            return Verdict.NO
        return Verdict.YES if all(v is Verdict.YES for v in verdicts) else Verdict.UNKNOWN

    def abelian_matrix(self) -> list[list[int]]:
        return [exponent_vector(w, self.target.rank) for w in self.images]

    def to_json(self) -> dict:
        return {self.source.generators[k]: self.target.format(w) for k, w in enumerate(self.images)}


@dataclass(frozen=True)
class Stage:
    """Bookkeeping for one complement stage of a pro-fundamental tower."""

    subcomplex: Subcomplex
    base: int
    tree: SpanningTree
    raw: Presentation
    simplified: Simplified


@dataclass(frozen=True)
class Tower:
    groups: tuple[Presentation, ...]
    bonds: tuple[GroupHom, ...]
    base_ray: tuple[int, ...] = ()
    stages: tuple[Stage, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if len(self.bonds) != max(len(self.groups) - 1, 0):
            raise ValueError("a tower with n groups needs n-1 bonds")
        for i, h in enumerate(self.bonds):
            if h.source != self.groups[i + 1] or h.target != self.groups[i]:
                raise ValueError(f"bond {i} does not map stage {i + 1} to stage {i}")

    def to_json(self) -> dict:
        return {"stages": [{"group": str(G), "rank": G.rank, "relators": len(G.relators),
                            "base": self.base_ray[i] if i < len(self.base_ray) else None}
                           for i, G in enumerate(self.groups)],
                "bonds": [h.to_json() for h in self.bonds]}


def _edge_path(X: CWComplex2, u: int, v: int) -> list[int]:
    """Shortest signed edge path from ``u`` to ``v`` (ties broken by edge id)."""
    inc: dict[int, list[int]] = {w: [] for w in X.vertices}
    for e, (t, h) in X.edges.items():
        inc[t].append(e)
        inc[h].append(-e)
    prev: dict[int, int | None] = {u: None}
    frontier = [u]
    while frontier and v not in prev:
        nxt = []
        for w in frontier:
            for x in sorted(inc[w], key=lambda s: (abs(s), s < 0)):
                y = X.end(x)
                if y not in prev:
                    prev[y] = x
                    nxt.append(y)
        frontier = nxt
    if v not in prev:
        raise DisconnectedComplement(f"no path from {u} to {v} in the complement")
    path = []
    while v != u:
        x = prev[v]
        path.append(x)
        v = X.start(x)
    return path[::-1]


def _inverse_path(path: Sequence[int]) -> list[int]:
    return [-x for x in reversed(path)]


def _stage(ball: CWComplex2, S: Subcomplex, base: int, budget: int) -> Stage:
    comp = complement(ball, S)
    if not comp.vertices:
        raise DisconnectedComplement("complement is empty")
    if base in S.vertices:
        raise RayInsideFiltration(f"base vertex {base} lies in the filtration member")
    if base not in comp.vertices:
        raise RayInsideFiltration(f"base vertex {base} is not in the complement")
    parts = comp.components(ball)
    if len(parts) != 1:
        groups = []
        for part in parts:
            X = part.as_complex(ball)
            groups.append(simplify(SpanningTree(X, min(X.vertices)).presentation(), budget).presentation)
        raise DisconnectedComplement(f"complement has {len(parts)} components", groups)
    X = comp.as_complex(ball)
    tree = SpanningTree(X, base)
    raw = tree.presentation()
    return Stage(comp, base, tree, raw, simplify(raw, budget))


def _loop_of(stage: Stage, k: int) -> list[int]:
    """Edge loop at the stage base for raw generator ``k``."""
    t = stage.tree
    e = t.generators[k]
    tail, head = t.C.edges[e]
    return t.path_to(tail) + [e] + _inverse_path(t.path_to(head))


def inclusion_hom(ball: CWComplex2, inner: Stage, outer: Stage) -> GroupHom:
    """Hom from the smaller complement ``inner`` into the larger ``outer``.

    Loops at the inner base are conjugated by a path from the outer base.
    """
    X = outer.tree.C
    conj = _edge_path(X, outer.base, inner.base)
    images = []
    for g in inner.simplified.kept:
        loop = conj + _loop_of(inner, g) + _inverse_path(conj)
        raw_word = outer.tree.path_word(loop)
        images.append(substitute(raw_word, outer.simplified.images))
    return GroupHom(inner.simplified.presentation, outer.simplified.presentation, tuple(images))


def pro_pi1(ball: CWComplex2, filtration: Sequence[Subcomplex], base_ray: Sequence[int],
            budget: int = DEFAULT_BUDGET) -> Tower:
    """Tower of fundamental groups of the complements of a filtration."""
    if len(base_ray) != len(filtration):
        raise ValueError("need one base vertex per filtration member")
    check_filtration(ball, filtration)
    stages = [_stage(ball, S, b, budget) for S, b in zip(filtration, base_ray)]
    bonds = tuple(inclusion_hom(ball, stages[i + 1], stages[i]) for i in range(len(stages) - 1))
    return Tower(tuple(s.simplified.presentation for s in stages), bonds, tuple(base_ray),
                 tuple(stages))


# -- surjectivity ------------------------------------------------------------

class FoldedGraph:
    """Stallings folding of the subgroup generated by some free-group words."""

    def __init__(self, words: Sequence[Sequence[int]]):
        self.parent = [0]
        self.adj: list[dict[int, int]] = [{}]
        pending = []
        for w in words:
            w = list(free_reduce(w))
            if not w:
                continue
            prev = 0
            for i, c in enumerate(w):
                if i == len(w) - 1:
                    nxt = 0
                else:
                    nxt = self._new()
                pending.append((prev, c, nxt))
                prev = nxt
        while pending:
            u, c, v = pending.pop()
            u, v = self.find(u), self.find(v)
            t = self.adj[u].get(c)
            if t is not None:
                self._merge(self.find(t), v, pending)
                continue
            s = self.adj[v].get(-c)
            if s is not None and self.find(s) != u:
                # fold at v, then retry the edge against the merged vertex
                self._merge(self.find(s), u, pending)
                pending.append((u, c, v))
                continue
            self.adj[u][c] = v
            self.adj[v][-c] = u

    def _new(self) -> int:
        self.parent.append(len(self.parent))
        self.adj.append({})
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def _merge(self, a: int, b: int, pending):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if b == 0:
            a, b = b, a
        self.parent[b] = a
        for c, z in self.adj[b].items():
            pending.append((a, c, z))
        self.adj[b] = {}

    def accepts(self, w: Sequence[int]) -> bool:
        v = self.find(0)
        for c in free_reduce(w):
            nxt = self.adj[v].get(c)
            if nxt is None:
                return False
            v = self.find(nxt)
        return v == self.find(0)


def abelian_cokernel(h: GroupHom) -> tuple[int, tuple[int, ...]]:
    """Free rank and torsion of ``H1(target) / image``."""
    n = h.target.rank
    rows = [exponent_vector(r, n) for r in h.target.relators] + h.abelian_matrix()
    diag = intmat.smith_diagonal(rows, n)
    return n - len(diag), tuple(d for d in diag if d > 1)


def bond_surjective(h: GroupHom, budget: OracleBudget | None = None) -> Verdict:
    free_rank, torsion = abelian_cokernel(h)
    if free_rank or torsion:
        return Verdict.NO
    targets = [Word([g]) for g in range(1, h.target.rank + 1)]
    if not h.target.relators:
        folded = FoldedGraph(h.images)
        return Verdict.of(all(folded.accepts(x) for x in targets))
    # bounded search over products of images, compared by rewriting keys
    budget = budget or OracleBudget()
    oracle = WordOracle(h.target, budget)
    wanted = {oracle.key(x): x for x in targets}
    gens = [w for w in h.images if w] + [w.inverse() for w in h.images if w]
    seen = {oracle.key(())}
    frontier = [Word()]
    states = 0
    while frontier and wanted and states < budget.max_states:
        nxt = []
        for u in frontier:
            for g in gens:
                w = u * g
                k = oracle.key(w)
                states += 1
                if k in seen:
                    continue
                seen.add(k)
                wanted.pop(k, None)
                nxt.append(w)
        frontier = nxt
    if not wanted:
        return Verdict.YES
    # a leftover generator may still be in the image; try certified equality
    for k, x in list(wanted.items()):
        for u in list(frontier)[:64]:
            if oracle.equal(u, x).verdict is Verdict.YES:
                wanted.pop(k)
                break
    return Verdict.YES if not wanted else Verdict.UNKNOWN


def projection_evidence(h: GroupHom) -> Verdict:
    """Abelianized bond is onto ``Z^rank`` with unit invariant factors."""
    if h.target.relators:
        return Verdict.UNKNOWN
    diag = intmat.smith_diagonal(h.abelian_matrix(), h.target.rank)
    return Verdict.of(len(diag) == h.target.rank and all(d == 1 for d in diag))


# -- telescopic recognition --------------------------------------------------

@dataclass(frozen=True)
class StageRecord:
    free: Verdict
    rank: int | None
    # bond from this stage to the previous one (None for stage 0)
    bond_surjective: Verdict | None = None
    projection: Verdict | None = None

    def to_json(self) -> dict:
        return {"free": self.free.value, "rank": self.rank,
                "bond_surjective": self.bond_surjective.value if self.bond_surjective else None,
                "projection": self.projection.value if self.projection else None}


@dataclass(frozen=True)
class TowerVerdict:
    stages: tuple[StageRecord, ...]
    telescopic_evidence: Verdict
    notes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"stages": [s.to_json() for s in self.stages],
                "telescopic_evidence": self.telescopic_evidence.value,
                "notes": list(self.notes)}


def free_verdict(G: Presentation, budget: int = DEFAULT_BUDGET) -> tuple[Verdict, int | None]:
    S = simplify(G, budget)
    if S.is_free:
        return Verdict.YES, S.presentation.rank
    if abelian_invariants(G).torsion:
        return Verdict.NO, None
    return Verdict.UNKNOWN, None


def telescopic_check(T: Tower, budget: OracleBudget | None = None,
                     tietze_budget: int = DEFAULT_BUDGET) -> TowerVerdict:
    if len(T.groups) < 2:
        raise ValueError("a tower needs at least two stages")
    records = []
    notes = ["verdicts hold at tested stages only"]
    for i, G in enumerate(T.groups):
        free, rank = free_verdict(G, tietze_budget)
        if i == 0:
            records.append(StageRecord(free, rank))
            continue
        h = T.bonds[i - 1]
        records.append(StageRecord(free, rank, bond_surjective(h, budget), projection_evidence(h)))
    verdicts = []
    for i, rec in enumerate(records):
        verdicts.append(rec.free)
        if i:
            verdicts += [rec.bond_surjective, rec.projection]
    ranks = [rec.rank for rec in records]
    if all(r is not None for r in ranks):
        if any(b < a for a, b in zip(ranks, ranks[1:])):
            notes.append("ranks decrease along the tower")
            verdicts.append(Verdict.NO)
    if any(v is Verdict.NO for v in verdicts):
        overall = Verdict.NO
    elif all(v is Verdict.YES for v in verdicts):
        overall = Verdict.YES
    else:
        overall = Verdict.UNKNOWN
    return TowerVerdict(tuple(records), overall, tuple(notes))


# -- semistability -----------------------------------------------------------

@dataclass(frozen=True)
class ChainReport:
    """One chain of nested complement components, outermost stage last."""

    bases: tuple[int, ...]
    groups: tuple[str, ...]
    ranks: tuple[int | None, ...]
    free: tuple[Verdict, ...]
    bonds: tuple[Verdict, ...]

    @property
    def semistable_evidence(self) -> Verdict:
        if any(v is Verdict.NO for v in self.bonds):
            return Verdict.NO
        return Verdict.YES if all(v is Verdict.YES for v in self.bonds) else Verdict.UNKNOWN

    def to_json(self) -> dict:
        return {"bases": list(self.bases), "groups": list(self.groups), "ranks": list(self.ranks),
                "free": [v.value for v in self.free], "bonds": [v.value for v in self.bonds],
                "semistable_evidence": self.semistable_evidence.value}


@dataclass(frozen=True)
class SemistabilityReport:
    presentation: Presentation
    radii: tuple[int, ...]
    ball_radius: int
    complete: bool
    components: tuple[int, ...]
    chains: tuple[ChainReport, ...]

    def to_json(self) -> dict:
        return {"presentation": str(self.presentation), "radii": list(self.radii),
                "ball_radius": self.ball_radius, "complete": self.complete,
                "components_per_stage": list(self.components),
                "chains": [c.to_json() for c in self.chains],
                "note": "verdicts hold at tested stages only"}


def ray_bases(ball_words: Sequence[tuple[int, ...]], radii: Sequence[int], which: str = "max") -> list[int]:
    """Base vertices along a geodesic ray ending at the shortlex-max (or -min) outer vertex."""
    index = {w: v for v, w in enumerate(ball_words)}
    far = max(len(w) for w in ball_words)
    outer = [w for w in ball_words if len(w) == far]
    pick = max(outer, key=shortlex) if which == "max" else min(outer, key=shortlex)
    out = []
    for r in radii:
        if r + 1 > len(pick):
            raise RayInsideFiltration(f"ray too short for radius {r}")
        out.append(index[pick[:r + 1]])
    return out


def ball_filtration(C: CWComplex2, words: Sequence[tuple[int, ...]], radii: Sequence[int]) -> list[Subcomplex]:
    return [full_subcomplex(C, [v for v, w in enumerate(words) if len(w) <= r]) for r in radii]


def semistability_report(P: Presentation, radii: Sequence[int], budget: OracleBudget | None = None,
                         tietze_budget: int = DEFAULT_BUDGET) -> SemistabilityReport:
    radii = tuple(radii)
    if not radii or any(b <= a for a, b in zip(radii, radii[1:])) or radii[0] < 0:
        raise ValueError("radii must be increasing and nonnegative")
    R = radii[-1] + 2
    C, ball = complex_ball(P, R, budget)
    filtration = ball_filtration(C, ball.vertices, radii)
    # components of each complement, with a base at distance r+1
    per_stage: list[list[Subcomplex]] = []
    for S in filtration:
        comp = complement(C, S)
        per_stage.append(comp.components(C) if comp.vertices else [])

    def base_of(K: Subcomplex, r: int) -> int:
        cands = [v for v in K.vertices if len(ball.vertices[v]) == r + 1]
        return min(cands, key=lambda v: shortlex(ball.vertices[v]))

    stage_cache: dict[tuple[int, int], Stage] = {}

    def stage(i: int, k: int) -> Stage:
        if (i, k) not in stage_cache:
            K = per_stage[i][k]
            X = K.as_complex(C)
            base = base_of(K, radii[i])
            tree = SpanningTree(X, base)
            raw = tree.presentation()
            stage_cache[(i, k)] = Stage(K, base, tree, raw, simplify(raw, tietze_budget))
        return stage_cache[(i, k)]

    def parent(i: int, k: int) -> int:
        v = next(iter(per_stage[i][k].vertices))
        return next(j for j, K in enumerate(per_stage[i - 1]) if v in K.vertices)

    chains = []
    last = len(radii) - 1
    # every component of the last stage gives a chain; earlier dead ends give shorter chains
    ends = [(last, k) for k in range(len(per_stage[last]))]
    for i in range(last):
        hit = {parent(i + 1, k) for k in range(len(per_stage[i + 1]))}
        ends += [(i, k) for k in range(len(per_stage[i])) if k not in hit]
    for i, k in sorted(ends):
        path = [(i, k)]
        while path[0][0] > 0:
            j, m = path[0]
            path.insert(0, (j - 1, parent(j, m)))
        stages = [stage(j, m) for j, m in path]
        bonds = []
        for a, b in zip(stages, stages[1:]):
            h = inclusion_hom(C, b, a)
            bonds.append(bond_surjective(h, budget))
        frees = [free_verdict(s.simplified.presentation, tietze_budget) for s in stages]
        chains.append(ChainReport(tuple(s.base for s in stages),
                                  tuple(str(s.simplified.presentation) for s in stages),
                                  tuple(r for _, r in frees), tuple(v for v, _ in frees),
                                  tuple(bonds)))
    return SemistabilityReport(P, radii, R, ball.complete,
                               tuple(len(c) for c in per_stage), tuple(chains))
