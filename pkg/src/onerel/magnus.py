"""Magnus rewriting for one-relator presentations.

Every node of a hierarchy is one of three kinds:

* ``Base``  -- the primitive root has length one, ``R = x^(+-s)``;
* ``Case1`` -- some generator ``x0`` of the root ``Q`` has exponent sum zero;
  the relator is rewritten over subscripted conjugates ``y@k = x0^k y x0^-k``;
* ``Case2`` -- no generator of ``Q`` has exponent sum zero; substituting
  ``x0 -> A^q`` and ``x1 -> B A^-p`` produces a relator in which ``A`` does.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

from .errors import DepthLimitExceeded, NonzeroExponentSum, TrivialRelator, ZeroExponentSum
from .presentation import NormalizedRelator, Presentation, normalize_relator
from .words import (
    Word,
    cyclic_reduce,
    exponent_sum,
    format_word,
    gen_of,
    occurrences,
    substitute,
)


@dataclass(frozen=True)
class Base:
    generator: int
    s: int
    sign: int = 1

    kind = "Base"


@dataclass(frozen=True)
class Case1:
    generator: int

    kind = "Case1"


@dataclass(frozen=True)
class Case2:
    x0: int
    x1: int
    p: int
    q: int

    kind = "Case2"


CaseTag = Union[Base, Case1, Case2]


def _occurring(Q: Word) -> list[int]:
    return sorted(Q.generators())


def classify_case(P: Presentation, pivot: int | None = None) -> CaseTag:
    """Decide which rewriting applies to the (normalized) relator of ``P``.

    Ties are broken by least alphabet index unless ``pivot`` names the
    generator to use as ``x0``.
    """
    nr = normalize_relator(P)
    return _classify(nr, pivot)


def _classify(nr: NormalizedRelator, pivot: int | None = None) -> CaseTag:
    Q = nr.root
    if len(Q) == 1:
        return Base(gen_of(Q[0]), nr.s, 1 if Q[0] > 0 else -1)
    gens = _occurring(Q)
    if pivot is not None and pivot not in gens:
        raise ValueError(f"pivot generator {pivot} does not occur in the relator")
    zero = [g for g in gens if exponent_sum(Q, g) == 0]
    if zero:
        return Case1(pivot if pivot in zero else zero[0])
    if pivot is not None:
        x0 = pivot
        x1 = next(g for g in gens if g != x0)
    else:
        x0, x1 = _case2_pair(Q, gens)
    return Case2(x0, x1, exponent_sum(Q, x0), exponent_sum(Q, x1))


def _case2_pair(Q: Word, gens: list[int]) -> tuple[int, int]:
    # Repeated x0: the Case 2 + Case 1 pair removes >= 2 letters.  Otherwise
    # every generator occurs once and an adjacent pair ``x1 x0^e`` or
    # ``x0^e x1^-1`` makes A cancel outright.  Either way depth <= len(Q).
    repeated = [g for g in gens if occurrences(Q, g) >= 2]
    if repeated:
        x0 = repeated[0]
        return x0, next(g for g in gens if g != x0)
    n = len(Q)
    for x0 in gens:
        i = next(k for k, c in enumerate(Q) if gen_of(c) == x0)
        before, after = Q[(i - 1) % n], Q[(i + 1) % n]
        if before > 0:
            return x0, gen_of(before)
        if after < 0:
            return x0, gen_of(after)
    raise AssertionError("some adjacent pair always qualifies")


# ---------------------------------------------------------------------------
# Case 1


@dataclass(frozen=True)
class Case1Result:
    """Rewriting of ``Q`` over subscripted generators ``y@k``.

    ``subscripted_alphabet`` lists every pair ``(y, k)`` with ``y != x0`` and
    ``k`` in the interval, ordered by ``(y, k)``; ``rewritten`` is coded over it.
    """

    x0: int
    subscripted_alphabet: tuple[tuple[int, int], ...]
    names: tuple[str, ...]
    rewritten: Word
    interval: tuple[int, int]
    s: int
    source_rank: int

    @property
    def occurring(self) -> list[tuple[int, int]]:
        return [self.subscripted_alphabet[g] for g in sorted(self.rewritten.generators())]

    def child(self) -> Presentation:
        return Presentation(self.names, (self.rewritten ** self.s,))


def rewrite_case1(P: Presentation, x0: int) -> Case1Result:
    """Lift the relator root to the cyclic cover defined by ``x0``.

    The first letter of ``Q`` sits at level 0; an ``x0^(+-1)`` moves the level,
    any other letter ``y^e`` read at level ``t`` becomes ``(y@t)^e``.
    """
    nr = normalize_relator(P)
    Q = nr.root
    if exponent_sum(Q, x0) != 0:
        raise NonzeroExponentSum(
            f"generator {P.generators[x0]} has exponent sum {exponent_sum(Q, x0)} in the root")
    t = 0
    lifted: list[tuple[int, int, int]] = []
    for c in Q:
        g = gen_of(c)
        if g == x0:
            t += 1 if c > 0 else -1
        else:
            lifted.append((g, t, 1 if c > 0 else -1))
    levels = [k for _, k, _ in lifted] or [0]
    u, v = min(levels), max(levels)
    others = [g for g in range(P.rank) if g != x0]
    alphabet = tuple((g, k) for g in others for k in range(u, v + 1))
    pos = {pair: i for i, pair in enumerate(alphabet)}
    rewritten = Word([sign * (pos[(g, k)] + 1) for g, k, sign in lifted])
    names = tuple(f"{P.generators[g]}@{k}" for g, k in alphabet)
    return Case1Result(x0, alphabet, names, rewritten, (u, v), nr.s, P.rank)


def expand_case1(r: Case1Result, x0: int | None = None) -> Word:
    """Project a Case 1 rewriting back down: ``y@k -> x0^k y x0^-k``."""
    x0 = r.x0 if x0 is None else x0
    a = x0 + 1
    images = {}
    for i, (g, k) in enumerate(r.subscripted_alphabet):
        conj = [a if k > 0 else -a] * abs(k)
        images[i] = Word(conj + [g + 1] + [-c for c in reversed(conj)])
    return substitute(r.rewritten, images)


# ---------------------------------------------------------------------------
# Case 2


def _fresh(base: str, taken: Sequence[str]) -> str:
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


@dataclass(frozen=True)
class Case2Result:
    """Substitutions ``x0 -> A^q`` then ``x1 -> B A^-p``.

    ``A`` takes the alphabet slot of ``x0`` and ``B`` the slot of ``x1``, so
    ``q_prime`` and ``q_double_prime`` share the index space of the source.
    """

    x0: int
    x1: int
    p: int
    q: int
    new_alphabet: tuple[str, ...]
    q_prime: Word
    q_double_prime: Word
    conjugator: Word
    s: int

    @property
    def A(self) -> int:
        return self.x0

    @property
    def B(self) -> int:
        return self.x1

    @property
    def substitution_1(self) -> dict[int, Word]:
        return {self.x0: Word([self.A + 1]) ** self.q}

    @property
    def substitution_2(self) -> dict[int, Word]:
        return {self.x1: Word([self.B + 1]) * Word([self.A + 1]) ** (-self.p)}

    def transport(self, w: Sequence[int]) -> Word:
        """Image of a source word under both substitutions (no injectivity claimed)."""
        return substitute(substitute(w, self.substitution_1), self.substitution_2)

    def deleted_a_length(self) -> int:
        return len(self.q_double_prime) - occurrences(self.q_double_prime, self.A)

    def child(self) -> Presentation:
        return Presentation(self.new_alphabet, (self.q_double_prime ** self.s,))


def rewrite_case2(P: Presentation, x0: int, x1: int) -> Case2Result:
    nr = normalize_relator(P)
    Q = nr.root
    p, q = exponent_sum(Q, x0), exponent_sum(Q, x1)
    if p == 0 or q == 0:
        raise ZeroExponentSum(f"exponent sums p={p}, q={q}; Case 1 applies")
    if x0 == x1:
        raise ValueError("x0 and x1 must differ")
    names = list(P.generators)
    rest = [n for i, n in enumerate(names) if i not in (x0, x1)]
    names[x0] = _fresh("A", rest)
    names[x1] = _fresh("B", rest + [names[x0]])
    A, B = x0 + 1, x1 + 1
    q1 = substitute(Q, {x0: Word([A]) ** q})
    q2_raw = substitute(q1, {x1: Word([B]) * Word([A]) ** (-p)})
    core, conj = cyclic_reduce(q2_raw)
    return Case2Result(x0, x1, p, q, tuple(names), q1, core, conj, nr.s)


# ---------------------------------------------------------------------------
# Hierarchy


@dataclass
class MagnusNode:
    presentation: Presentation
    relator: NormalizedRelator
    tag: CaseTag
    result: Case1Result | Case2Result | None = None
    children: list["MagnusNode"] = field(default_factory=list)
    depth: int = 0

    @property
    def measure(self) -> int:
        """Length that the rewriting strictly decreases below ``len(root)``."""
        if isinstance(self.result, Case1Result):
            return len(self.result.rewritten)
        if isinstance(self.result, Case2Result):
            return self.result.deleted_a_length()
        return len(self.relator.root)

    @property
    def free_factors(self) -> tuple[str, ...]:
        """Generators of the child alphabet absent from the child relator."""
        if not self.children:
            return ()
        child = self.children[0].presentation
        used = child.relators[0].generators()
        return tuple(n for i, n in enumerate(child.generators) if i not in used)

    def walk(self) -> Iterator["MagnusNode"]:
        yield self
        for c in self.children:
            yield from c.walk()

    def to_json(self) -> dict:
        P = self.presentation
        out: dict = {
            "case": self.tag.kind,
            "presentation": str(P),
            "relator": P.format(P.relators[0]),
            "root": P.format(self.relator.root),
            "s": self.relator.s,
            "depth": self.depth,
            "substitutions": {},
            "children": [c.to_json() for c in self.children],
        }
        if isinstance(self.tag, Base):
            out["generator"] = P.generators[self.tag.generator]
        elif isinstance(self.result, Case1Result):
            r = self.result
            out["generator"] = P.generators[r.x0]
            out["interval"] = list(r.interval)
            out["rewritten"] = format_word(r.rewritten, r.names)
            a = P.generators[r.x0]
            out["substitutions"] = {
                name: _conj_text(a, P.generators[g], k)
                for name, (g, k) in zip(r.names, r.subscripted_alphabet)
            }
            out["free_factors"] = list(self.free_factors)
        elif isinstance(self.result, Case2Result):
            r = self.result
            new = r.new_alphabet
            out.update(x0=P.generators[r.x0], x1=P.generators[r.x1], p=r.p, q=r.q,
                       q_prime=format_word(r.q_prime, new),
                       q_double_prime=format_word(r.q_double_prime, new))
            out["substitutions"] = {
                P.generators[r.x0]: format_word(r.substitution_1[r.x0], new),
                P.generators[r.x1]: format_word(r.substitution_2[r.x1], new),
            }
        return out


def _conj_text(a: str, y: str, k: int) -> str:
    if k == 0:
        return y
    return f"{a}^{k} {y} {a}^{-k}"


@dataclass
class MagnusHierarchy:
    root: MagnusNode

    @property
    def depth(self) -> int:
        """Number of rewriting steps on the longest root-to-leaf path."""
        return max(n.depth for n in self.root.walk())

    def nodes(self) -> list[MagnusNode]:
        return list(self.root.walk())

    def leaves(self) -> list[MagnusNode]:
        return [n for n in self.root.walk() if not n.children]

    def to_json(self) -> dict:
        return {"depth": self.depth, "root": self.root.to_json()}

    def to_dot(self) -> str:
        lines = ["digraph magnus {", "  node [shape=box, fontname=monospace];"]
        for i, n in enumerate(self.root.walk()):
            n._dot_id = i  # type: ignore[attr-defined]
        for n in self.root.walk():
            P = n.presentation
            label = f"{n.tag.kind}\\n{P.format(n.relator.root)}"
            if n.relator.s > 1:
                label += f"  (s={n.relator.s})"
            lines.append(f'  n{n._dot_id} [label="{label}"];')
            for c in n.children:
                lines.append(f"  n{n._dot_id} -> n{c._dot_id};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _expand(node: MagnusNode, depth_limit: int, root_holder: list) -> None:
    if isinstance(node.tag, Base):
        return
    if node.depth >= depth_limit:
        raise DepthLimitExceeded(
            f"hierarchy deeper than {depth_limit}", partial=MagnusHierarchy(root_holder[0]))
    P = node.presentation
    if isinstance(node.tag, Case1):
        res: Case1Result | Case2Result = rewrite_case1(P, node.tag.generator)
    else:
        res = rewrite_case2(P, node.tag.x0, node.tag.x1)
    node.result = res
    child_P = res.child()
    nr = normalize_relator(child_P)
    child = MagnusNode(child_P, nr, _classify(nr), depth=node.depth + 1)
    node.children.append(child)
    _expand(child, depth_limit, root_holder)


def build_hierarchy(P: Presentation, depth_limit: int = 64,
                    pivot: int | None = None) -> MagnusHierarchy:
    """Run the rewriting recursion down to Base leaves.

    ``pivot`` overrides the generator choice at the root only.
    """
    if depth_limit < 1:
        raise ValueError("depth_limit must be positive")
    nr = normalize_relator(P)
    if not nr.core:
        raise TrivialRelator("trivial relator")
    root = MagnusNode(P, nr, _classify(nr, pivot))
    _expand(root, depth_limit, [root])
    return MagnusHierarchy(root)
