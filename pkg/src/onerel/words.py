"""Free-group words over a finite alphabet.

A letter is a non-zero integer: generator ``i`` (0-based) is ``i + 1`` and its
inverse is ``-(i + 1)``.  Display names live in the owning presentation, so the
same machinery serves every alphabet the Magnus recursion invents.
"""

from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import EmptyWord, UnknownGenerator


class Generator(NamedTuple):
    id: int
    name: str


def letter(gen: int, sign: int = 1) -> int:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return sign * (gen + 1)


def gen_of(code: int) -> int:
    return abs(code) - 1


def sign_of(code: int) -> int:
    return 1 if code > 0 else -1


def _reduce(letters: Iterable[int]) -> list[int]:
    out: list[int] = []
    for c in letters:
        if c == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -c:
            out.pop()
        else:
            out.append(c)
    return out


class Word(tuple):
    """A freely reduced word; construction performs the reduction.

    >>> Word([1, 2, -2, 1])
    Word(1, 1)
    >>> Word([1, -1])
    Word()
    """

    __slots__ = ()

    def __new__(cls, letters: Iterable[int] = ()):
        return tuple.__new__(cls, _reduce(letters))

    @classmethod
    def trusted(cls, letters: Iterable[int]) -> "Word":
        # caller guarantees the letters are already freely reduced
        return tuple.__new__(cls, letters)

    def __repr__(self) -> str:
        return f"Word({', '.join(map(str, self))})"

    def __mul__(self, other):
        if not isinstance(other, tuple):
            return NotImplemented
        return Word(tuple.__add__(self, other))

    def __rmul__(self, other):
        if not isinstance(other, tuple):
            return NotImplemented
        return Word(tuple.__add__(tuple(other), self))

    def inverse(self) -> "Word":
        return Word.trusted(-c for c in reversed(self))

    __invert__ = inverse

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0 or not self:
            return Word()
        core, conj = cyclic_reduce(self)
        body = tuple(core) * n
        return Word(tuple(conj) + body + tuple(conj.inverse()))

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word.trusted(tuple.__getitem__(self, item))
        return tuple.__getitem__(self, item)

    def generators(self) -> set[int]:
        return {gen_of(c) for c in self}


IDENTITY = Word()


def free_reduce(raw: Iterable[int]) -> Word:
    """Freely reduce a sequence of letters (single-pass stack cancellation)."""
    return Word(raw)


def is_cyclically_reduced(w: Sequence[int]) -> bool:
    return len(w) < 2 or w[0] != -w[-1]


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``w == conjugator * core * conjugator**-1``.

    The core is cyclically reduced.  Peels matching end letters one pair at a
    time, so ``conjugator`` is the longest such prefix.
    """
    w = Word(w)
    n = len(w)
    i = 0
    while 2 * i + 1 < n and w[i] == -w[n - 1 - i]:
        i += 1
    return Word.trusted(w[i:n - i]), Word.trusted(w[:i])


def exponent_sum(w: Iterable[int], g: int) -> int:
    target = g + 1
    return sum(1 if c == target else -1 if c == -target else 0 for c in w)


def exponent_vector(w: Iterable[int], n: int) -> list[int]:
    vec = [0] * n
    for c in w:
        vec[abs(c) - 1] += 1 if c > 0 else -1
    return vec


def occurrences(w: Iterable[int], g: int) -> int:
    """Number of letters ``g`` or ``g^-1`` in ``w``."""
    return sum(1 for c in w if abs(c) == g + 1)


def primitive_root(w: Word) -> tuple[Word, int]:
    """Split ``w`` as ``q**s`` (literal concatenation) with ``s`` maximal.

    Scans divisor lengths in increasing order; the first period found is the
    primitive one.
    """
    n = len(w)
    if n == 0:
        raise EmptyWord("the empty word has no primitive root")
    for d in range(1, n + 1):
        if n % d == 0 and all(w[i] == w[i % d] for i in range(d, n)):
            return Word.trusted(w[:d]), n // d
    raise AssertionError("unreachable")


def substitute(w: Iterable[int], images: Mapping[int, Sequence[int]],
               target_size: int | None = None) -> Word:
    """Apply the homomorphism ``gen -> images[gen]`` (identity on unmapped generators).

    ``target_size`` is the size of the target alphabet; when given, every letter
    produced must lie inside it.
    """
    out: list[int] = []
    for c in w:
        g = abs(c) - 1
        img = images.get(g)
        if img is None:
            piece: Sequence[int] = (c,)
        elif c > 0:
            piece = img
        else:
            piece = [-x for x in reversed(img)]
        if target_size is not None:
            for x in piece:
                if not 0 < abs(x) <= target_size:
                    raise UnknownGenerator(
                        f"letter {x} is outside the target alphabet of size {target_size}")
        out.extend(piece)
    return Word(out)


def rotations(w: Sequence[int]) -> list[Word]:
    return [Word.trusted(tuple(w[i:]) + tuple(w[:i])) for i in range(max(len(w), 1))]


def cyclic_equal(u: Sequence[int], v: Sequence[int]) -> bool:
    """True when ``u`` and ``v`` are cyclic rotations of one another."""
    if len(u) != len(v):
        return False
    if not u:
        return True
    doubled = tuple(v) + tuple(v)
    u = tuple(u)
    n = len(u)
    return any(doubled[i:i + n] == u for i in range(n))


def canonical_cyclic(w: Sequence[int]) -> Word:
    """Least rotation (as a tuple) of a cyclically reduced word."""
    if not w:
        return Word()
    return min(rotations(w))


def shortlex_key(w: Sequence[int]) -> tuple:
    """Shortlex key: length first, then letters ordered a < a^-1 < b < b^-1 < ..."""
    return (len(w), tuple(2 * (abs(c) - 1) + (c < 0) for c in w))


def format_word(w: Sequence[int], names: Sequence[str]) -> str:
    """Render ``w`` with run-length powers, e.g. ``a^2 b^-3``; the identity is ``1``."""
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        name = names[abs(w[i]) - 1]
        exp = (j - i) * (1 if w[i] > 0 else -1)
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return " ".join(parts)
