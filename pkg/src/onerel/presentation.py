"""Finite presentations: parsing, printing, relator normalization, abelianization."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import intmat
from .errors import (
    DuplicateGenerator,
    NotOneRelator,
    PresentationSyntaxError,
    TrivialRelator,
    UnknownGeneratorInRelator,
)
from .words import (
    Generator,
    Word,
    cyclic_reduce,
    exponent_vector,
    format_word,
    primitive_root,
)

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(?:@-?[0-9]+)*")


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(Word(r) for r in self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise DuplicateGenerator(f"duplicate generator in {self.generators}")
        n = len(self.generators)
        for r in self.relators:
            for c in r:
                if abs(c) > n:
                    raise UnknownGeneratorInRelator(f"letter {c} outside alphabet of size {n}")

    @property
    def one_relator(self) -> bool:
        return len(self.relators) == 1

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def alphabet(self) -> list[Generator]:
        return [Generator(i, name) for i, name in enumerate(self.generators)]

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise UnknownGeneratorInRelator(f"no generator named {name!r}") from None

    def word(self, text: str) -> Word:
        """Parse a word over this presentation's alphabet."""
        return parse_word(text, self.generators)

    def format(self, w: Sequence[int]) -> str:
        return format_word(w, self.generators)

    def __str__(self) -> str:
        gens = ", ".join(self.generators)
        rels = ", ".join(self.format(r) for r in self.relators)
        return f"< {gens} ; {rels} >" if rels else f"< {gens} ; >"

    def to_json(self) -> dict:
        return {"generators": list(self.generators),
                "relators": [self.format(r) for r in self.relators]}

    @classmethod
    def from_json(cls, data: dict | str) -> "Presentation":
        if isinstance(data, str):
            data = json.loads(data)
        gens = tuple(data["generators"])
        for g in gens:
            if not NAME_RE.fullmatch(g):
                raise PresentationSyntaxError(f"bad generator name {g!r}", 0)
        probe = cls(gens)
        return cls(gens, tuple(probe.word(r) for r in data.get("relators", [])))


class _Parser:
    def __init__(self, text: str, names: Sequence[str] = ()):
        self.text = text
        self.i = 0
        self.index = {n: k for k, n in enumerate(names)}
        # longest match first, so "b@-1" wins over "b"
        self.names = sorted(names, key=len, reverse=True)

    def fail(self, msg: str, at: int | None = None):
        at = self.i if at is None else at
        raise PresentationSyntaxError(msg, len(self.text[:at].encode()))

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.i += 1

    def identifier(self) -> str:
        self.skip()
        m = NAME_RE.match(self.text, self.i)
        if not m:
            self.fail("expected a generator name")
        self.i = m.end()
        return m.group()

    def integer(self) -> int:
        self.skip()
        m = re.compile(r"[+-]?\s*[0-9]+").match(self.text, self.i)
        if not m:
            self.fail("expected an integer exponent")
        self.i = m.end()
        return int(m.group().replace(" ", ""))

    def atom(self) -> Word:
        ch = self.peek()
        if ch == "(":
            self.i += 1
            w = self.word(stop=(")",))
            self.expect(")")
            return w
        if ch == "[":
            self.i += 1
            u = self.word(stop=(",",))
            self.expect(",")
            v = self.word(stop=("]",))
            self.expect("]")
            return u.inverse() * v.inverse() * u * v
        if ch == "1" and not NAME_RE.match(self.text, self.i):
            self.i += 1
            return Word()
        for name in self.names:
            if self.text.startswith(name, self.i):
                self.i += len(name)
                return Word([self.index[name] + 1])
        m = NAME_RE.match(self.text, self.i)
        if m:
            raise UnknownGeneratorInRelator(
                f"unknown generator {m.group()!r} at offset {len(self.text[:self.i].encode())}")
        self.fail(f"unexpected character {ch!r}" if ch else "unexpected end of input")

    def word(self, stop: Iterable[str]) -> Word:
        stop = tuple(stop) + (">", "")
        out: list[int] = []
        while self.peek() not in stop:
            a = self.atom()
            if self.peek() == "^":
                self.i += 1
                a = a ** self.integer()
            out.extend(a)
        return Word(out)


def parse_presentation(text: str) -> Presentation:
    """Parse ``< a, b ; a^2, b^3 >`` (``|`` may replace ``;``).

    Words are juxtapositions of generator names with optional integer powers;
    parentheses group and ``[u, v]`` is the commutator ``u^-1 v^-1 u v``.
    """
    p = _Parser(text)
    p.expect("<")
    names: list[str] = []
    if p.peek() not in (";", "|"):
        while True:
            p.skip()
            at = p.i
            name = p.identifier()
            if name in names:
                raise DuplicateGenerator(f"generator {name!r} declared twice (offset {at})")
            names.append(name)
            if p.peek() == ",":
                p.i += 1
                continue
            break
    if p.peek() not in (";", "|"):
        p.fail("expected ';' or '|'")
    p.i += 1
    wp = _Parser(text, names)
    wp.i = p.i
    relators: list[Word] = []
    if wp.peek() != ">":
        while True:
            relators.append(wp.word(stop=(",",)))
            if wp.peek() == ",":
                wp.i += 1
                continue
            break
    wp.expect(">")
    wp.skip()
    if wp.i != len(text):
        wp.fail("trailing characters after '>'")
    return Presentation(tuple(names), tuple(relators))


def parse_word(text: str, names: Sequence[str]) -> Word:
    p = _Parser(text, names)
    w = p.word(stop=())
    p.skip()
    if p.i != len(text):
        p.fail("trailing characters")
    return w


@dataclass(frozen=True)
class NormalizedRelator:
    core: Word
    root: Word
    s: int
    conjugator: Word = field(default_factory=Word)


def normalize_word(r: Word) -> NormalizedRelator:
    r = Word(r)
    if not r:
        raise TrivialRelator("relator reduces to the empty word")
    core, conj = cyclic_reduce(r)
    root, s = primitive_root(core)
    return NormalizedRelator(core, root, s, conj)


def normalize_relator(P: Presentation) -> NormalizedRelator:
    if not P.one_relator:
        raise NotOneRelator(f"expected one relator, got {len(P.relators)}")
    return normalize_word(P.relators[0])


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def relation_matrix(P: Presentation) -> list[list[int]]:
    return [exponent_vector(r, P.rank) for r in P.relators]


def abelian_invariants(P: Presentation) -> AbelianInvariants:
    diag = intmat.smith_diagonal(relation_matrix(P), P.rank)
    return AbelianInvariants(P.rank - len(diag), tuple(d for d in diag if d > 1))


class Abelianization:
    """Canonical images of words in ``Z^n / (relator lattice)``."""

    def __init__(self, P: Presentation):
        self.n = P.rank
        self.basis = intmat.hermite_basis(relation_matrix(P), self.n)

    def image(self, w: Iterable[int]) -> tuple[int, ...]:
        return intmat.reduce_mod_lattice(exponent_vector(w, self.n), self.basis)

    def is_trivial(self, w: Iterable[int]) -> bool:
        return not any(self.image(w))
