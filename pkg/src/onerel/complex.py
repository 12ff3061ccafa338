"""Finite 2-dimensional CW-complexes stored combinatorially.

Edges carry ids starting at 1 so a face boundary is a cyclic sequence of
signed edge ids: ``+e`` runs tail to head, ``-e`` head to tail.  Faces may
have an empty boundary (a sphere pinched to a point); this only arises
from collapses and keeps homology bookkeeping honest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import networkx as nx

from . import intmat
from .errors import (
    Disconnected,
    InvalidComplex,
    InvalidFiltration,
    InvalidSite,
    NotATree,
    NotFreeFace,
)
from .presentation import Presentation, abelian_invariants
from .tietze import DEFAULT_BUDGET, simplify
from .verdict import Verdict
from .words import Word


class CWComplex2:
    """Immutable finite 2-complex.

    ``edges`` maps id -> (tail, head); ``faces`` maps id -> boundary tuple.
    """

    __slots__ = ("vertices", "edges", "faces")

    def __init__(self, vertices: Iterable[int], edges: Mapping[int, tuple[int, int]],
                 faces: Mapping[int, Sequence[int]]):
        object.__setattr__(self, "vertices", frozenset(vertices))
        object.__setattr__(self, "edges", {int(k): (int(t), int(h)) for k, (t, h) in sorted(edges.items())})
        object.__setattr__(self, "faces", {int(k): tuple(int(x) for x in b) for k, b in sorted(faces.items())})
        self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("CWComplex2 is immutable")

    def _validate(self):
        for e, (t, h) in self.edges.items():
            if e < 1:
                raise InvalidComplex(f"edge ids start at 1, got {e}")
            if t not in self.vertices or h not in self.vertices:
                raise InvalidComplex(f"edge {e} has an endpoint outside the vertex set")
        for f, bd in self.faces.items():
            for x in bd:
                if x == 0 or abs(x) not in self.edges:
                    raise InvalidComplex(f"face {f} uses unknown edge {x}")
            for a, b in zip(bd, bd[1:] + bd[:1]):
                if self.end(a) != self.start(b):
                    raise InvalidComplex(f"boundary of face {f} is not a closed edge loop")

    def start(self, x: int) -> int:
        t, h = self.edges[abs(x)]
        return t if x > 0 else h

    def end(self, x: int) -> int:
        t, h = self.edges[abs(x)]
        return h if x > 0 else t

    def __eq__(self, other):
        return (isinstance(other, CWComplex2) and self.vertices == other.vertices
                and self.edges == other.edges and self.faces == other.faces)

    __hash__ = None

    def __repr__(self):
        return f"CWComplex2(V={len(self.vertices)}, E={len(self.edges)}, F={len(self.faces)})"

    def counts(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.faces)

    def graph(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for e, (t, h) in self.edges.items():
            g.add_edge(t, h, key=e)
        return g

    def is_connected(self) -> bool:
        return len(self.vertices) > 0 and nx.is_connected(self.graph())

    def next_vertex(self) -> int:
        return max(self.vertices, default=-1) + 1

    def next_edge(self) -> int:
        return max(self.edges, default=0) + 1

    def next_face(self) -> int:
        return max(self.faces, default=0) + 1

    def whole(self) -> "Subcomplex":
        return Subcomplex(self.vertices, self.edges, self.faces)

    def to_json(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "edges": [{"id": e, "tail": t, "head": h} for e, (t, h) in self.edges.items()],
            "faces": [{"id": f, "boundary": list(b)} for f, b in self.faces.items()],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "CWComplex2":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["vertices"],
                   {d["id"]: (d["tail"], d["head"]) for d in data["edges"]},
                   {d["id"]: d["boundary"] for d in data["faces"]})

    def to_dot(self, labels: Mapping[int, str] | None = None) -> str:
        lines = ["digraph complex {"]
        for v in sorted(self.vertices):
            lines.append(f"  v{v};")
        for e, (t, h) in self.edges.items():
            lab = labels.get(e, f"e{e}") if labels else f"e{e}"
            lines.append(f'  v{t} -> v{h} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Subcomplex:
    vertices: frozenset = field(default_factory=frozenset)
    edges: frozenset = field(default_factory=frozenset)
    faces: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for name in ("vertices", "edges", "faces"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    def __le__(self, other: "Subcomplex") -> bool:
        return (self.vertices <= other.vertices and self.edges <= other.edges
                and self.faces <= other.faces)

    def __or__(self, other: "Subcomplex") -> "Subcomplex":
        return Subcomplex(self.vertices | other.vertices, self.edges | other.edges,
                          self.faces | other.faces)

    def __and__(self, other: "Subcomplex") -> "Subcomplex":
        return Subcomplex(self.vertices & other.vertices, self.edges & other.edges,
                          self.faces & other.faces)

    def is_empty(self) -> bool:
        return not (self.vertices or self.edges or self.faces)

    def check(self, C: CWComplex2) -> None:
        """Raise InvalidFiltration unless this is a subcomplex of ``C``."""
        if not (self.vertices <= C.vertices and self.edges <= C.edges.keys()
                and self.faces <= C.faces.keys()):
            raise InvalidFiltration("cells outside the parent complex")
        for e in self.edges:
            if not set(C.edges[e]) <= self.vertices:
                raise InvalidFiltration(f"edge {e} present without its endpoints")
        for f in self.faces:
            if any(abs(x) not in self.edges for x in C.faces[f]):
                raise InvalidFiltration(f"face {f} present without its boundary edges")

    def as_complex(self, C: CWComplex2) -> CWComplex2:
        return CWComplex2(self.vertices, {e: C.edges[e] for e in self.edges},
                          {f: C.faces[f] for f in self.faces})

    def components(self, C: CWComplex2) -> list["Subcomplex"]:
        """Connected components, each closed under boundary."""
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for e in self.edges:
            g.add_edge(*C.edges[e], key=e)
        out = []
        for comp in sorted(nx.connected_components(g), key=min):
            es = {e for e in self.edges if C.edges[e][0] in comp}
            fs = {f for f in self.faces
                  if C.faces[f] and C.start(C.faces[f][0]) in comp}
            out.append(Subcomplex(comp, es, fs))
        return out

    def to_json(self) -> dict:
        return {"vertices": sorted(self.vertices), "edges": sorted(self.edges),
                "faces": sorted(self.faces)}


def closure(C: CWComplex2, vertices=(), edges=(), faces=()) -> Subcomplex:
    vs, es, fs = set(vertices), set(edges), set(faces)
    for f in fs:
        es.update(abs(x) for x in C.faces[f])
    for e in es:
        vs.update(C.edges[e])
    return Subcomplex(vs, es, fs)


def full_subcomplex(C: CWComplex2, vertices: Iterable[int]) -> Subcomplex:
    """Largest subcomplex whose vertex set is ``vertices``."""
    vs = frozenset(vertices)
    es = {e for e, (t, h) in C.edges.items() if t in vs and h in vs}
    # faces with empty boundary have no position, so they are left out
    fs = {f for f, b in C.faces.items() if b and all(abs(x) in es for x in b)}
    return Subcomplex(vs, es, fs)


def complement(C: CWComplex2, S: Subcomplex) -> Subcomplex:
    """Closure of the cells of ``C`` not in ``S`` (the complement of the interior)."""
    return closure(C, C.vertices - S.vertices, C.edges.keys() - S.edges,
                   C.faces.keys() - S.faces)


@dataclass(frozen=True)
class TreeSet:
    trees: tuple[Subcomplex, ...]

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(self.trees))

    def __iter__(self):
        return iter(self.trees)

    def __len__(self):
        return len(self.trees)

    def check(self, C: CWComplex2) -> None:
        for k, T in enumerate(self.trees):
            if T.faces:
                raise NotATree(f"tree {k} contains 2-cells")
            try:
                T.check(C)
            except InvalidFiltration as exc:
                raise NotATree(f"tree {k}: {exc}") from None
            if not T.vertices or len(T.edges) != len(T.vertices) - 1 \
                    or len(T.components(C)) != 1:
                raise NotATree(f"tree {k} is not a nonempty connected acyclic graph")


# -- constructions -----------------------------------------------------------

def standard_complex(P: Presentation) -> CWComplex2:
    """One vertex, a loop per generator (edge id = index + 1), a face per relator."""
    edges = {g + 1: (0, 0) for g in range(P.rank)}
    faces = {}
    for k, r in enumerate(P.relators):
        faces[k + 1] = tuple(Word(r))
    return CWComplex2({0}, edges, faces)


def euler_characteristic(C: CWComplex2) -> int:
    v, e, f = C.counts()
    return v - e + f


def boundary_matrices(C: CWComplex2) -> tuple[list[list[int]], list[list[int]]]:
    """Incidence matrices: rows of d1 are edges over vertices, rows of d2 faces over edges."""
    vidx = {v: i for i, v in enumerate(sorted(C.vertices))}
    eidx = {e: i for i, e in enumerate(C.edges)}
    d1 = []
    for e, (t, h) in C.edges.items():
        row = [0] * len(vidx)
        row[vidx[h]] += 1
        row[vidx[t]] -= 1
        d1.append(row)
    d2 = []
    for b in C.faces.values():
        row = [0] * len(eidx)
        for x in b:
            row[eidx[abs(x)]] += 1 if x > 0 else -1
        d2.append(row)
    return d1, d2


@dataclass(frozen=True)
class Homology:
    betti: tuple[int, int, int]
    torsion: tuple[int, ...]


def homology(C: CWComplex2) -> Homology:
    d1, d2 = boundary_matrices(C)
    nv, ne, nf = C.counts()
    r1 = intmat.rank(d1, nv)
    diag2 = intmat.smith_diagonal(d2, ne)
    r2 = len(diag2)
    return Homology((nv - r1, ne - r1 - r2, nf - r2), tuple(d for d in diag2 if d > 1))


class SpanningTree:
    """Breadth-first spanning tree of a connected complex, rooted at ``base``.

    Non-tree edges, in id order, become the generators ``e<id>``.
    """

    def __init__(self, C: CWComplex2, base: int):
        if base not in C.vertices:
            raise InvalidSite(f"base vertex {base} not in complex")
        self.C = C
        self.base = base
        # parent[v] = signed edge arriving at v from its parent
        self.parent: dict[int, int] = {}
        self.depth = {base: 0}
        inc: dict[int, list[int]] = {v: [] for v in C.vertices}
        for e, (t, h) in C.edges.items():
            inc[t].append(e)
            inc[h].append(-e)
        frontier = [base]
        while frontier:
            nxt = []
            for v in frontier:
                for x in inc[v]:
                    w = C.end(x)
                    if w not in self.depth:
                        self.depth[w] = self.depth[v] + 1
                        self.parent[w] = x
                        nxt.append(w)
            frontier = nxt
        if len(self.depth) != len(C.vertices):
            raise Disconnected("complex is not connected")
        tree_edges = {abs(x) for x in self.parent.values()}
        self.generators = [e for e in C.edges if e not in tree_edges]
        self.index = {e: k for k, e in enumerate(self.generators)}

    def names(self) -> tuple[str, ...]:
        return tuple(f"e{e}" for e in self.generators)

    def path_word(self, path: Iterable[int]) -> Word:
        """Word spelled by a signed edge path (tree edges read as 1)."""
        out = []
        for x in path:
            k = self.index.get(abs(x))
            if k is not None:
                out.append(k + 1 if x > 0 else -(k + 1))
        return Word(out)

    def path_to(self, v: int) -> list[int]:
        """Tree path from the base to ``v`` as signed edges."""
        out = []
        while v != self.base:
            x = self.parent[v]
            out.append(x)
            v = self.C.start(x)
        return out[::-1]

    def presentation(self) -> Presentation:
        rels = []
        for b in self.C.faces.values():
            w = self.path_word(b)
            if w:
                rels.append(w)
        return Presentation(self.names(), tuple(rels))


def fundamental_presentation(C: CWComplex2, base: int | None = None) -> Presentation:
    if not C.vertices:
        raise Disconnected("empty complex")
    base = min(C.vertices) if base is None else base
    return SpanningTree(C, base).presentation()


def is_simply_connected_bounded(C: CWComplex2, budget: int = DEFAULT_BUDGET) -> Verdict:
    P = fundamental_presentation(C)
    if not abelian_invariants(P).is_trivial():
        return Verdict.NO
    if simplify(P, budget).is_trivial_group:
        return Verdict.YES
    return Verdict.UNKNOWN


# -- elementary internal collapses and expansions ---------------------------

def _replace_letter(bd: Sequence[int], d: int, image: Sequence[int]) -> tuple[int, ...]:
    inv = tuple(-x for x in reversed(image))
    out: list[int] = []
    for x in bd:
        if x == d:
            out.extend(image)
        elif x == -d:
            out.extend(inv)
        else:
            out.append(x)
    return tuple(out)


def internal_collapse(C: CWComplex2, e: int, d: int, dim: int = 2) -> CWComplex2:
    """Collapse cell ``e`` through its free face ``d``.

    ``dim=2``: ``e`` is a face and ``d`` an edge occurring exactly once in its
    boundary; other faces crossing ``d`` are rerouted around ``e``.
    ``dim=1``: ``e`` is an edge and ``d`` one of its two distinct endpoints;
    edges at ``d`` slide to the other endpoint and faces drop ``e``.
    """
    if dim == 2:
        if e not in C.faces or d not in C.edges:
            raise NotFreeFace(f"no face {e} or edge {d}")
        bd = C.faces[e]
        hits = [i for i, x in enumerate(bd) if abs(x) == d]
        if len(hits) != 1:
            raise NotFreeFace(f"edge {d} occurs {len(hits)} times in face {e}")
        i = hits[0]
        rot = bd[i:] + bd[:i]
        rest = rot[1:]
        # rot = d^eps . rest is a loop, so d^eps = rest^-1
        image = tuple(-x for x in reversed(rest)) if rot[0] > 0 else rest
        faces = {f: _replace_letter(b, d, image) for f, b in C.faces.items() if f != e}
        edges = {k: v for k, v in C.edges.items() if k != d}
        return CWComplex2(C.vertices, edges, faces)
    if dim == 1:
        if e not in C.edges or d not in C.vertices:
            raise NotFreeFace(f"no edge {e} or vertex {d}")
        t, h = C.edges[e]
        if t == h or d not in (t, h):
            raise NotFreeFace(f"vertex {d} is not a free face of edge {e}")
        other = h if d == t else t
        edges = {}
        for k, (a, b) in C.edges.items():
            if k == e:
                continue
            edges[k] = (other if a == d else a, other if b == d else b)
        faces = {f: tuple(x for x in b if abs(x) != e) for f, b in C.faces.items()}
        return CWComplex2(C.vertices - {d}, edges, faces)
    raise NotFreeFace(f"unsupported dimension {dim}")


@dataclass(frozen=True)
class EdgeSite:
    """Split ``vertex`` by a new edge ``vertex -> new``.

    ``moved`` lists edge ends ``(edge_id, "tail"|"head")`` at ``vertex`` that
    are re-attached at the new vertex.
    """

    vertex: int
    moved: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "moved", frozenset((int(e), str(s)) for e, s in self.moved))


@dataclass(frozen=True)
class FaceSite:
    """Attach a new edge ``d`` parallel to ``path`` and a new face ``path . d^-1``.

    ``reroute`` lists ``(face_id, position)`` pairs: occurrences of ``path``
    in a face boundary (starting at that cyclic index, read forward) which
    are replaced by ``d``.  ``path`` must be a nonempty edge path.
    """

    path: tuple[int, ...]
    reroute: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))
        object.__setattr__(self, "reroute", tuple(tuple(p) for p in self.reroute))


@dataclass(frozen=True)
class CellPair:
    """The cells created by an expansion, in the argument order of internal_collapse."""

    e: int
    d: int
    dim: int


def _split_vertex(C: CWComplex2, site: EdgeSite) -> tuple[CWComplex2, CellPair]:
    v = site.vertex
    if v not in C.vertices:
        raise InvalidSite(f"vertex {v} not in complex")
    for e, side in site.moved:
        if e not in C.edges or side not in ("tail", "head"):
            raise InvalidSite(f"bad edge end {(e, side)}")
        if C.edges[e][0 if side == "tail" else 1] != v:
            raise InvalidSite(f"end {(e, side)} is not at vertex {v}")
    nv, x = C.next_vertex(), C.next_edge()
    moved = site.moved
    edges = {}
    for e, (t, h) in C.edges.items():
        edges[e] = (nv if (e, "tail") in moved else t, nv if (e, "head") in moved else h)
    edges[x] = (v, nv)

    def arrives(s):
        return (abs(s), "head" if s > 0 else "tail")

    def departs(s):
        return (abs(s), "tail" if s > 0 else "head")

    faces = {}
    for f, bd in C.faces.items():
        out = []
        n = len(bd)
        for i, a in enumerate(bd):
            out.append(a)
            b = bd[(i + 1) % n]
            if C.end(a) != v:
                continue
            ma, mb = arrives(a) in moved, departs(b) in moved
            if ma and not mb:
                out.append(-x)
            elif mb and not ma:
                out.append(x)
        faces[f] = tuple(out)
    return CWComplex2(C.vertices | {nv}, edges, faces), CellPair(x, nv, 1)


def _attach_face(C: CWComplex2, site: FaceSite) -> tuple[CWComplex2, CellPair]:
    path = site.path
    if not path:
        raise InvalidSite("empty path")
    for x in path:
        if x == 0 or abs(x) not in C.edges:
            raise InvalidSite(f"unknown edge {x} in path")
    for a, b in zip(path, path[1:]):
        if C.end(a) != C.start(b):
            raise InvalidSite("path is not connected")
    d, f_new = C.next_edge(), C.next_face()
    edges = dict(C.edges)
    edges[d] = (C.start(path[0]), C.end(path[-1]))
    faces = dict(C.faces)
    by_face: dict[int, list[int]] = {}
    for f, pos in site.reroute:
        by_face.setdefault(f, []).append(pos)
    k = len(path)
    for f, positions in by_face.items():
        if f not in C.faces:
            raise InvalidSite(f"unknown face {f}")
        bd = C.faces[f]
        n = len(bd)
        if k > n:
            raise InvalidSite(f"path longer than boundary of face {f}")
        covered: set[int] = set()
        for p in positions:
            span = {(p + j) % n for j in range(k)}
            if any(bd[(p + j) % n] != path[j] for j in range(k)) or span & covered:
                raise InvalidSite(f"path does not occur at position {p} of face {f}")
            covered |= span
        # keep the boundary's base point unless an occurrence wraps around it
        wraps = any(p + k > n for p in positions)
        start = min(positions) if wraps else 0
        starts = {(p - start) % n for p in positions}
        rot = bd[start:] + bd[:start]
        out, i = [], 0
        while i < n:
            if i in starts:
                out.append(d)
                i += k
            else:
                out.append(rot[i])
                i += 1
        faces[f] = tuple(out)
    faces[f_new] = tuple(path) + (-d,)
    return CWComplex2(C.vertices, edges, faces), CellPair(f_new, d, 2)


def internal_expansion(C: CWComplex2, site: EdgeSite | FaceSite) -> tuple[CWComplex2, CellPair]:
    """Inverse of internal_collapse; returns the new complex and the created pair."""
    if isinstance(site, EdgeSite):
        return _split_vertex(C, site)
    if isinstance(site, FaceSite):
        return _attach_face(C, site)
    raise InvalidSite(f"unknown site {site!r}")


# -- rerouting filtrations around trees -------------------------------------

def _tree_hull(C: CWComplex2, T: Subcomplex, keep: set[int]) -> tuple[set[int], set[int]]:
    """Smallest subtree of ``T`` containing the vertex set ``keep``."""
    vs, es = set(T.vertices), set(T.edges)
    if not keep:
        return set(), set()
    changed = True
    while changed:
        changed = False
        deg = {v: 0 for v in vs}
        for e in es:
            for v in C.edges[e]:
                deg[v] += 1
        for v in list(vs):
            if v not in keep and deg[v] <= 1:
                vs.discard(v)
                es -= {e for e in es if v in C.edges[e]}
                changed = True
    return vs, es


@dataclass(frozen=True)
class RerouteResult:
    complex: CWComplex2
    filtration: tuple[Subcomplex, ...]
    trees: TreeSet
    # members of the input filtration each output member was grown from
    source_index: tuple[int, ...]
    moves: tuple[tuple[str, int], ...]

    def __iter__(self):
        return iter((self.complex, self.filtration, self.trees))


def check_filtration(C: CWComplex2, filtration: Sequence[Subcomplex]) -> None:
    for k, S in enumerate(filtration):
        S.check(C)
        if k and not filtration[k - 1] <= S:
            raise InvalidFiltration(f"member {k - 1} is not contained in member {k}")


def intersection_components(C: CWComplex2, S: Subcomplex, T: Subcomplex) -> int:
    return len((S & T).components(C))


def reroute_trees(C: CWComplex2, filtration: Sequence[Subcomplex],
                  trees: TreeSet | Sequence[Subcomplex]) -> RerouteResult:
    """Make every filtration member meet every tree in a connected subtree (or not at all).

    Trees must be pairwise edge-disjoint.  Offending tree edges get a bridge
    (a parallel edge plus a bigon face) carrying the member's faces, then
    offending tree vertices are split so the tree leaves the member.
    """
    trees = trees if isinstance(trees, TreeSet) else TreeSet(tuple(trees))
    check_filtration(C, filtration)
    trees.check(C)
    used: set[int] = set()
    for T in trees:
        if used & T.edges:
            raise NotATree("trees must be edge-disjoint")
        used |= T.edges

    V, E, F = set(C.vertices), dict(C.edges), dict(C.faces)
    members = [[set(S.vertices), set(S.edges), set(S.faces)] for S in filtration]
    tv = [set(T.vertices) for T in trees]
    te = [set(T.edges) for T in trees]
    out: list[tuple[frozenset, frozenset, frozenset]] = []
    src: list[int] = []
    moves: list[tuple[str, int]] = []
    prev = None
    n = 0
    N = len(members)

    def current() -> CWComplex2:
        return CWComplex2(V, E, F)

    while n < N:
        X = current()
        base = members[n]
        hulls = {}
        for i in range(len(tv)):
            meet = base[0] & tv[i]
            if meet:
                hulls[i] = _tree_hull(X, Subcomplex(tv[i], te[i]), meet)
        target = next((m for m in range(n, N)
                       if all(hv <= members[m][0] and he <= members[m][1]
                              for hv, he in hulls.values())), None)
        use_hull = target is not None
        if target is None:
            target = n
        M = members[target]
        gamma_edges: list[tuple[int, int]] = []
        gamma_verts: list[tuple[int, int]] = []
        for i in range(len(tv)):
            meet = Subcomplex(M[0] & tv[i], M[1] & te[i])
            if not meet.vertices:
                continue
            comps = meet.components(X)
            if len(comps) == 1:
                continue
            if use_hull and i in hulls:
                pin = min(hulls[i][0])
            elif prev is not None and prev[0] & tv[i]:
                pin = min(prev[0] & tv[i])
            else:
                pin = min(meet.vertices)
            for comp in comps:
                if pin in comp.vertices:
                    continue
                gamma_edges += [(i, e) for e in sorted(comp.edges)]
                gamma_verts += [(i, v) for v in sorted(comp.vertices)]
        # bridges over offending edges
        for i, d in gamma_edges:
            t, h = E[d]
            dd = max(E) + 1
            E[dd] = (t, h)
            b = max(F, default=0) + 1
            F[b] = (d, -dd)
            for f in M[2]:
                if any(abs(x) == d for x in F[f]):
                    F[f] = _replace_letter(F[f], d, (dd,))
            M[1].discard(d)
            M[1].add(dd)
            for later in members[target + 1:]:
                later[1].add(dd)
                later[2].add(b)
            moves.append(("bridge", d))
        # split offending vertices off the member
        for i, w in gamma_verts:
            X = current()
            moved = frozenset((e, side) for e in te[i]
                              for side, end in zip(("tail", "head"), E[e]) if end == w)
            Y, pair = _split_vertex(X, EdgeSite(w, moved))
            V, E, F = set(Y.vertices), dict(Y.edges), dict(Y.faces)
            tv[i].discard(w)
            tv[i].add(pair.d)
            for later in members[target + 1:]:
                later[0].add(pair.d)
                later[1].add(pair.e)
            moves.append(("split", w))
        snap = (frozenset(M[0]), frozenset(M[1]), frozenset(M[2]))
        out.append(snap)
        src.append(target)
        prev = snap
        n = target + 1

    Y = current()
    new_filtration = tuple(Subcomplex(*s) for s in out)
    new_trees = TreeSet(tuple(Subcomplex(tv[i], te[i]) for i in range(len(tv))))
    return RerouteResult(Y, new_filtration, new_trees, tuple(src), tuple(moves))
