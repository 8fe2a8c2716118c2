"""Permutations on 0-based points, cycle-notation parsing, and closure.

Cycle notation in files and messages is 1-based, matching the usual
convention for permutation group data; in-memory points are 0-based.
"""
from __future__ import annotations

import re

from .errors import CycleNotationError, OrderLimitExceeded

__all__ = [
    "Permutation",
    "parse_cycles",
    "format_cycles",
    "close_generators",
]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """A bijection of {0, ..., degree-1}, stored as a tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection: {images!r}")
        self.images = images

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (self * other)(x) = self(other(x)): apply other first.
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        o = other.images
        s = self.images
        return Permutation(s[o[x]] for x in range(len(s)))

    def __call__(self, point: int) -> int:
        return self.images[point]

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, img in enumerate(self.images):
            inv[img] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == img for i, img in enumerate(self.images))

    def extended(self, degree: int) -> "Permutation":
        """The same permutation acting on a larger point set."""
        if degree < self.degree:
            raise ValueError("cannot shrink a permutation")
        return Permutation(self.images + tuple(range(self.degree, degree)))

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r})"


def parse_cycles(text: str, degree: int | None = None) -> Permutation:
    """Parse 1-based cycle notation like ``(1,2,3)(4,5)``.

    Whitespace between or inside cycles is ignored.  ``()`` denotes the
    identity.  The degree defaults to the largest point mentioned.
    """
    stripped = text.strip()
    if not stripped:
        raise CycleNotationError("empty permutation text")
    body = _CYCLE_RE.sub("", stripped)
    if body.strip():
        raise CycleNotationError(f"stray text outside cycles in {text!r}")
    cycles: list[list[int]] = []
    top = 0
    for match in _CYCLE_RE.finditer(stripped):
        inner = match.group(1).strip()
        if not inner:
            continue
        points = []
        for tok in re.split(r"[,\s]+", inner):
            if not tok:
                continue
            try:
                p = int(tok)
            except ValueError:
                raise CycleNotationError(f"bad point {tok!r} in {text!r}") from None
            if p < 1:
                raise CycleNotationError(f"points are 1-based, got {p} in {text!r}")
            points.append(p - 1)
        if len(set(points)) != len(points):
            raise CycleNotationError(f"repeated point inside a cycle in {text!r}")
        cycles.append(points)
        top = max(top, max(points) + 1)
    if degree is not None:
        if degree < top:
            raise CycleNotationError(f"degree {degree} too small for {text!r}")
        top = degree
    images = list(range(top))
    seen: set[int] = set()
    for cyc in cycles:
        for p in cyc:
            if p in seen:
                raise CycleNotationError(f"point {p + 1} appears in two cycles in {text!r}")
            seen.add(p)
        for i, p in enumerate(cyc):
            images[p] = cyc[(i + 1) % len(cyc)]
    return Permutation(images)


def format_cycles(perm: Permutation) -> str:
    """Render in 1-based cycle notation; the identity renders as ``()``."""
    seen = [False] * perm.degree
    parts = []
    for start in range(perm.degree):
        if seen[start] or perm.images[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        nxt = perm.images[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = perm.images[nxt]
        parts.append("(" + ",".join(str(p + 1) for p in cyc) + ")")
    return "".join(parts) if parts else "()"


def close_generators(
    generators: list[Permutation], max_order: int | None = 10000
) -> list[Permutation]:
    """All elements of the group generated by ``generators``.

    Ordering is deterministic: breadth-first from the identity, and within
    each new layer elements are sorted lexicographically by image tuple, so
    element numbering never depends on generator order.
    """
    if not generators:
        raise ValueError("need at least one generator")
    degree = max(g.degree for g in generators)
    gens = sorted({g.extended(degree) for g in generators})
    identity = Permutation.identity(degree)
    elements: list[Permutation] = [identity]
    seen: set[tuple[int, ...]] = {identity.images}
    layer = [identity]
    while layer:
        found: set[Permutation] = set()
        for x in layer:
            for g in gens:
                y = x * g
                if y.images not in seen:
                    seen.add(y.images)
                    found.add(y)
        layer = sorted(found)
        elements.extend(layer)
        if max_order is not None and len(elements) > max_order:
            raise OrderLimitExceeded(
                f"closure exceeded {max_order} elements; raise the limit to build this group"
            )
    return elements
