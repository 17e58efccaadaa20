"""Photon configurations over 1-based mode labels.

An :class:`InputPattern` is a set of occupied source ports; an
:class:`OutputPattern` is a multiset of detector ports and may contain
collisions. Both are stored as ascending tuples so that equal configurations
hash and compare equal, and Python's tuple ordering is the lexicographic
order used for every enumerated support.
"""

from __future__ import annotations

import bisect
import functools
import itertools
import math
from collections import Counter
from typing import Iterable, Sequence


def _canonical(ports: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted(int(p) for p in ports))
    if out and out[0] < 1:
        raise ValueError(f"mode labels are 1-based, got {out}")
    return out


@functools.total_ordering
class OutputPattern:
    """Ascending multiset of output ports."""

    __slots__ = ("ports",)

    def __init__(self, ports: Iterable[int]):
        object.__setattr__(self, "ports", _canonical(getattr(ports, "ports", ports)))

    def __setattr__(self, name, value):
        raise AttributeError("patterns are immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, OutputPattern):
            return NotImplemented
        return self.ports == other.ports

    def __lt__(self, other) -> bool:
        if not isinstance(other, OutputPattern):
            return NotImplemented
        return self.ports < other.ports

    def __hash__(self) -> int:
        return hash(self.ports)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self.ports)})"

    def __len__(self) -> int:
        return len(self.ports)

    def __iter__(self):
        return iter(self.ports)

    def multiplicity(self, mode: int) -> int:
        return self.ports.count(mode)

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.ports))

    def is_collision_free(self) -> bool:
        return all(a < b for a, b in zip(self.ports, self.ports[1:]))

    def factorial_weight(self) -> int:
        """Product of the factorials of the mode multiplicities."""
        return math.prod(math.factorial(c) for c in Counter(self.ports).values())

    def check_modes(self, m: int) -> None:
        if self.ports and self.ports[-1] > m:
            raise ValueError(f"pattern {self} uses a port above m={m}")

    def __str__(self) -> str:
        return format_pattern(self)


class InputPattern(OutputPattern):
    """Ascending set of input ports; repeats are rejected."""

    __slots__ = ()

    def __init__(self, ports: Iterable[int]):
        super().__init__(ports)
        if not self.is_collision_free():
            raise ValueError(f"input pattern has repeated ports: {self.ports}")


def format_pattern(pattern: OutputPattern | Sequence[int]) -> str:
    """Render as ``{1,2,5}``."""
    return "{" + ",".join(str(p) for p in getattr(pattern, "ports", pattern)) + "}"


def parse_pattern(text: str) -> OutputPattern:
    """Parse the ``{1,2,5}`` text form; the ports must already be ascending."""
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"not a pattern: {text!r}")
    inner = body[1:-1].strip()
    ports = [int(tok) for tok in inner.split(",")] if inner else []
    if ports != sorted(ports):
        raise ValueError(f"pattern ports must be ascending: {text!r}")
    return OutputPattern(ports)


def enumerate_no_collision(m: int, n: int) -> list[InputPattern]:
    """All ``C(m, n)`` n-subsets of ``{1..m}`` in lexicographic order."""
    if not 1 <= n <= m:
        raise ValueError(f"need 1 <= n <= m, got n={n}, m={m}")
    return [InputPattern(c) for c in itertools.combinations(range(1, m + 1), n)]


def enumerate_multisets(m: int, n: int) -> list[OutputPattern]:
    """All ``C(m+n-1, n)`` n-multisets of ``{1..m}`` in lexicographic order."""
    if m < 1 or n < 0:
        raise ValueError(f"need m >= 1 and n >= 0, got m={m}, n={n}")
    return [OutputPattern(c) for c in itertools.combinations_with_replacement(range(1, m + 1), n)]


def lost_port_completions(detected: OutputPattern, m: int, k: int) -> list[OutputPattern]:
    """Every multiset formed by adding ``k`` ports (repetition allowed) to ``detected``.

    Distinct choices of the added ports always give distinct completions, so
    the list has ``C(m+k-1, k)`` entries, sorted lexicographically.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    detected = OutputPattern(detected)
    detected.check_modes(m)
    if k == 0:
        return [detected]
    out = [OutputPattern(detected.ports + extra) for extra in itertools.combinations_with_replacement(range(1, m + 1), k)]
    out.sort()
    return out


class PatternIndex:
    """Bidirectional map between an ordered support and positions in it."""

    def __init__(self, patterns: Sequence[OutputPattern]):
        self.patterns = list(patterns)
        if any(a >= b for a, b in zip(self.patterns, self.patterns[1:])):
            raise ValueError("support must be strictly increasing")
        self._pos = {p.ports: i for i, p in enumerate(self.patterns)}

    def __len__(self) -> int:
        return len(self.patterns)

    def index(self, pattern: OutputPattern | Sequence[int]) -> int:
        key = _canonical(getattr(pattern, "ports", pattern))
        try:
            return self._pos[key]
        except KeyError:
            raise KeyError(f"{format_pattern(key)} is not in the support") from None

    def __getitem__(self, i: int) -> OutputPattern:
        return self.patterns[i]

    def __contains__(self, pattern) -> bool:
        return _canonical(getattr(pattern, "ports", pattern)) in self._pos

    def bisect(self, pattern: OutputPattern) -> int:
        return bisect.bisect_left(self.patterns, OutputPattern(pattern))
