"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class OneRelError(Exception):
    """Base class for every error raised by this package."""


# words
class EmptyWord(OneRelError, ValueError):
    pass


class UnknownGenerator(OneRelError, ValueError):
    pass


# presentations
class PresentationSyntaxError(OneRelError, ValueError):
    """Raised by the presentation parser; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class DuplicateGenerator(OneRelError, ValueError):
    pass


class UnknownGeneratorInRelator(OneRelError, ValueError):
    pass


class NotOneRelator(OneRelError, ValueError):
    pass


class TrivialRelator(OneRelError, ValueError):
    pass


# magnus
class NonzeroExponentSum(OneRelError, ValueError):
    pass


class ZeroExponentSum(OneRelError, ValueError):
    pass


class DepthLimitExceeded(OneRelError, RuntimeError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


# complexes
class InvalidComplex(OneRelError, ValueError):
    pass


class Disconnected(OneRelError, ValueError):
    pass


class NotFreeFace(OneRelError, ValueError):
    pass


class InvalidSite(OneRelError, ValueError):
    pass


class InvalidFiltration(OneRelError, ValueError):
    pass


class NotATree(OneRelError, ValueError):
    pass


# cayley
class SubsetCoversRelator(OneRelError, ValueError):
    pass


# towers
class RayInsideFiltration(OneRelError, ValueError):
    pass


class DisconnectedComplement(OneRelError, ValueError):
    """The complement of a filtration member is not connected (or is empty).

    ``components`` holds one fundamental-group presentation per component.
    """

    def __init__(self, message: str, components=()):
        super().__init__(message)
        self.components = list(components)
