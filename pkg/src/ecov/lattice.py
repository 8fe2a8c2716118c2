"""Subgroup enumeration and lattice annotations.

Subgroups are stored as bitmasks over element indices plus sorted member
tuples.  The full lattice is found by cyclic extension: every subgroup is
some chain of one-generator extensions of the trivial subgroup, and only
the least element of each coset needs to be tried as the new generator.
Normal-subgroup and conjugacy machinery that does not need the full
lattice (normal closures, class-closure enumeration) lives here too, so
decision rules can run on groups too large to enumerate fully.
"""
from __future__ import annotations

import weakref
from dataclasses import dataclass, field

from .errors import LatticeLimitExceeded
from .groups import GroupTable

__all__ = [
    "FULL_LATTICE_LIMIT",
    "Subgroup",
    "SubgroupLattice",
    "generated_subgroup",
    "enumerate_subgroups",
    "get_lattice",
    "subgroups_of_order",
    "maximal_subgroups",
    "normal_subgroups",
    "conjugacy_classes_of_subgroups",
    "is_normal",
    "element_conjugacy_classes",
    "normal_closure",
    "normal_subgroups_direct",
    "lattice_to_json",
]

FULL_LATTICE_LIMIT = 1500


class Subgroup:
    """A subgroup as a bitmask plus its sorted members."""

    __slots__ = ("mask", "order", "members", "generators")

    def __init__(self, mask: int, members: tuple[int, ...], generators: tuple[int, ...]):
        self.mask = mask
        self.order = len(members)
        self.members = members
        self.generators = generators

    @classmethod
    def from_members(cls, members, generators=()) -> "Subgroup":
        mem = tuple(sorted(members))
        mask = 0
        for m in mem:
            mask |= 1 << m
        return cls(mask, mem, tuple(generators))

    def contains(self, other: "Subgroup") -> bool:
        return self.mask & other.mask == other.mask

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, members={self.members[:6]}{'...' if self.order > 6 else ''})"


def _closure_members(
    rows: list[list[int]], seed, gens: tuple[int, ...], n: int, early_full: bool = True
) -> set[int] | None:
    """Close a seed set under right multiplication by the generators.

    Returns None when the closure is certainly the whole group: a partial
    closure larger than n/2 forces the final subgroup to be everything.
    """
    members = set(seed)
    members.add(0)
    half = n // 2
    queue = list(members)
    while queue:
        x = queue.pop()
        row = rows[x]
        for g in gens:
            y = row[g]
            if y not in members:
                members.add(y)
                queue.append(y)
        if early_full and len(members) > half:
            return None
    return members


def generated_subgroup(G: GroupTable, generators) -> Subgroup:
    """The subgroup generated by the given element indices."""
    gens = tuple(sorted({int(g) for g in generators} - {0}))
    if not gens:
        return Subgroup.from_members((0,), ())
    members = _closure_members(G.rows, gens, gens, G.order)
    if members is None:
        return Subgroup.from_members(range(G.order), G.generators)
    return Subgroup.from_members(members, gens)


def _conjugation_maps(G: GroupTable) -> list[list[int]]:
    """For each group generator g, the map x -> g x g^-1."""
    rows = G.rows
    maps = []
    for g in G.generators:
        ginv = G.inverse[g]
        grow = rows[g]
        maps.append([rows[grow[x]][ginv] for x in range(G.order)])
    return maps


@dataclass(eq=False)
class SubgroupLattice:
    """Every subgroup of a group, with lazily computed annotations."""

    group: GroupTable
    subgroups: tuple[Subgroup, ...]
    _by_mask: dict = field(default_factory=dict, repr=False)
    _maximal: tuple[bool, ...] | None = field(default=None, repr=False)
    _normal: tuple[bool, ...] | None = field(default=None, repr=False)
    _classes: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)
    _class_of: tuple[int, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        self._by_mask = {s.mask: i for i, s in enumerate(self.subgroups)}

    def index_of(self, mask: int) -> int:
        return self._by_mask[mask]

    def of_order(self, d: int) -> list[Subgroup]:
        return [s for s in self.subgroups if s.order == d]

    @property
    def maximal_flags(self) -> tuple[bool, ...]:
        if self._maximal is None:
            n = self.group.order
            subs = self.subgroups
            flags = []
            for i, H in enumerate(subs):
                if H.order == n:
                    flags.append(False)
                    continue
                maximal = True
                for K in subs:
                    if (
                        K.order > H.order
                        and K.order < n
                        and K.order % H.order == 0
                        and K.mask & H.mask == H.mask
                    ):
                        maximal = False
                        break
                flags.append(maximal)
            self._maximal = tuple(flags)
        return self._maximal

    @property
    def normal_flags(self) -> tuple[bool, ...]:
        if self._normal is None:
            maps = _conjugation_maps(self.group)
            flags = []
            for H in self.subgroups:
                mask = H.mask
                ok = True
                for cmap in maps:
                    conj = 0
                    for x in H.members:
                        conj |= 1 << cmap[x]
                    if conj != mask:
                        ok = False
                        break
                flags.append(ok)
            self._normal = tuple(flags)
        return self._normal

    def _compute_classes(self) -> None:
        maps = _conjugation_maps(self.group)
        class_of = [-1] * len(self.subgroups)
        classes: list[tuple[int, ...]] = []
        for start, H in enumerate(self.subgroups):
            if class_of[start] != -1:
                continue
            cid = len(classes)
            orbit = [start]
            class_of[start] = cid
            frontier = [H]
            while frontier:
                S = frontier.pop()
                for cmap in maps:
                    conj = 0
                    for x in S.members:
                        conj |= 1 << cmap[x]
                    j = self._by_mask[conj]
                    if class_of[j] == -1:
                        class_of[j] = cid
                        orbit.append(j)
                        frontier.append(self.subgroups[j])
            classes.append(tuple(sorted(orbit)))
        self._classes = tuple(classes)
        self._class_of = tuple(class_of)

    @property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        if self._classes is None:
            self._compute_classes()
        return self._classes

    @property
    def class_of(self) -> tuple[int, ...]:
        if self._class_of is None:
            self._compute_classes()
        return self._class_of

    def __len__(self) -> int:
        return len(self.subgroups)


def enumerate_subgroups(G: GroupTable, limit: int = FULL_LATTICE_LIMIT) -> SubgroupLattice:
    """All subgroups of G by cyclic extension with coset-minimum pruning."""
    n = G.order
    if n > limit:
        raise LatticeLimitExceeded(
            f"group order {n} exceeds the lattice limit {limit}; raise --lattice-limit to force"
        )
    rows = G.rows
    trivial = Subgroup.from_members((0,), ())
    seen: dict[int, Subgroup] = {trivial.mask: trivial}
    worklist: list[Subgroup] = [trivial]
    full_mask = (1 << n) - 1
    while worklist:
        H = worklist.pop()
        covered = H.mask
        minima = []
        for g in range(1, n):
            if (covered >> g) & 1:
                continue
            minima.append(g)
            for h in H.members:
                covered |= 1 << rows[h][g]
        for g in minima:
            gens = H.generators + (g,)
            members = _closure_members(rows, H.members + (g,), gens, n)
            if members is None:
                K = Subgroup(full_mask, tuple(range(n)), G.generators or gens)
            else:
                K = Subgroup.from_members(members, gens)
            if K.mask not in seen:
                seen[K.mask] = K
                if K.order < n:
                    worklist.append(K)
    if full_mask not in seen:
        seen[full_mask] = Subgroup(full_mask, tuple(range(n)), G.generators)
    subs = tuple(sorted(seen.values(), key=lambda s: (s.order, s.members)))
    return SubgroupLattice(G, subs)


_LATTICE_CACHE: "weakref.WeakKeyDictionary[GroupTable, SubgroupLattice]" = weakref.WeakKeyDictionary()


def get_lattice(G: GroupTable, limit: int = FULL_LATTICE_LIMIT) -> SubgroupLattice:
    """Cached full lattice of G."""
    L = _LATTICE_CACHE.get(G)
    if L is None:
        L = enumerate_subgroups(G, limit)
        _LATTICE_CACHE[G] = L
    return L


def subgroups_of_order(L: SubgroupLattice, d: int) -> list[Subgroup]:
    """All subgroups of one order, in canonical (member-tuple) order."""
    return L.of_order(d)


def maximal_subgroups(L: SubgroupLattice) -> list[Subgroup]:
    """Proper subgroups contained in no larger proper subgroup."""
    flags = L.maximal_flags
    return [s for s, f in zip(L.subgroups, flags) if f]


def normal_subgroups(L: SubgroupLattice) -> list[Subgroup]:
    """Subgroups stable under conjugation (trivial and full included)."""
    flags = L.normal_flags
    return [s for s, f in zip(L.subgroups, flags) if f]


def conjugacy_classes_of_subgroups(L: SubgroupLattice) -> list[list[Subgroup]]:
    """Orbits of subgroups under conjugation by the whole group."""
    return [[L.subgroups[i] for i in cls] for cls in L.classes]


def is_normal(G: GroupTable, sub: Subgroup) -> bool:
    """Whether conjugation by every group generator preserves the subgroup."""
    for cmap in _conjugation_maps(G):
        conj = 0
        for x in sub.members:
            conj |= 1 << cmap[x]
        if conj != sub.mask:
            return False
    return True


def element_conjugacy_classes(G: GroupTable) -> list[tuple[int, ...]]:
    """Conjugacy classes of elements, sorted by least member."""
    maps = _conjugation_maps(G)
    n = G.order
    assigned = [False] * n
    classes = []
    for start in range(n):
        if assigned[start]:
            continue
        orbit = {start}
        assigned[start] = True
        queue = [start]
        while queue:
            x = queue.pop()
            for cmap in maps:
                y = cmap[x]
                if not assigned[y]:
                    assigned[y] = True
                    orbit.add(y)
                    queue.append(y)
        classes.append(tuple(sorted(orbit)))
    return classes


def normal_closure(G: GroupTable, elements) -> Subgroup:
    """Least normal subgroup containing the given elements."""
    maps = _conjugation_maps(G)
    rows = G.rows
    n = G.order
    seed = {int(x) for x in elements} | {0}
    stable = set(seed)
    queue = list(seed)
    while queue:
        x = queue.pop()
        for cmap in maps:
            y = cmap[x]
            if y not in stable:
                stable.add(y)
                queue.append(y)
    # stable is conjugation-closed, so the subgroup it generates is normal.
    members = _closure_members(rows, stable, tuple(sorted(stable - {0})), n)
    if members is None:
        return Subgroup(((1 << n) - 1), tuple(range(n)), G.generators)
    return Subgroup.from_members(members, tuple(sorted(seed - {0})))


def normal_subgroups_direct(G: GroupTable) -> list[Subgroup]:
    """All normal subgroups without enumerating the full lattice.

    Works by closing under element conjugacy classes: every normal subgroup
    is a chain of extensions of smaller normal subgroups by whole classes,
    and a subgroup generated by a conjugation-stable set is normal.
    """
    n = G.order
    rows = G.rows
    classes = element_conjugacy_classes(G)
    trivial = Subgroup.from_members((0,), ())
    seen: dict[int, Subgroup] = {trivial.mask: trivial}
    worklist = [trivial]
    full_mask = (1 << n) - 1
    while worklist:
        N = worklist.pop()
        if N.order == n:
            continue
        for cls in classes:
            if (N.mask >> cls[0]) & 1:
                continue
            seed = set(N.members) | set(cls)
            gens = tuple(sorted(seed - {0}))
            members = _closure_members(rows, seed, gens, n)
            if members is None:
                K = Subgroup(full_mask, tuple(range(n)), G.generators)
            else:
                K = Subgroup.from_members(members, gens)
            if K.mask not in seen:
                seen[K.mask] = K
                worklist.append(K)
    if full_mask not in seen:
        seen[full_mask] = Subgroup(full_mask, tuple(range(n)), G.generators)
    return sorted(seen.values(), key=lambda s: (s.order, s.members))


def lattice_to_json(L: SubgroupLattice) -> list[dict]:
    """Annotation export: order, members, maximality, normality, class id."""
    maximal = L.maximal_flags
    normal = L.normal_flags
    class_of = L.class_of
    return [
        {
            "order": s.order,
            "members": list(s.members),
            "maximal": maximal[i],
            "normal": normal[i],
            "class": class_of[i],
        }
        for i, s in enumerate(L.subgroups)
    ]
