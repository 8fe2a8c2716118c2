"""Structural predicates feeding the covering decision rules.

Everything here works directly on multiplication tables.  Nilpotency uses
the upper central series (iterated center quotients).  The elementary
abelian quotient helpers expose, for a prime p, the largest exponent-p
abelian quotient together with its index-p subgroup pullbacks; those give
covering certificates for p-groups and nilpotent groups without touching
the full subgroup lattice.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedForOne
from .groups import GroupTable, exponent, quotient
from .lattice import Subgroup, SubgroupLattice, normal_closure, normal_subgroups_direct

__all__ = [
    "StructureReport",
    "structure_report",
    "factorize",
    "is_cyclic",
    "is_abelian",
    "p_group_prime",
    "is_p_group",
    "is_nilpotent",
    "is_simple",
    "is_square_free_distinct_primes",
    "smallest_prime_divisor",
    "has_klein_quotient",
    "center_members",
    "elementary_abelian_quotient",
    "index_p_subgroups",
]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as {prime: multiplicity}."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def smallest_prime_divisor(n: int) -> int:
    """Least prime factor; undefined for n = 1."""
    if n < 2:
        raise UndefinedForOne(f"no prime divisor for n={n}")
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def is_square_free_distinct_primes(n: int) -> bool:
    """True iff no prime divides n twice (vacuously true for 1)."""
    return all(m == 1 for m in factorize(n).values()) if n > 1 else True


def is_cyclic(G: GroupTable) -> bool:
    """True iff some element has full order."""
    return G.order == 1 or max(G.element_orders()) == G.order


def is_abelian(G: GroupTable) -> bool:
    T = G.table
    return bool((T == T.T).all())


def p_group_prime(G: GroupTable) -> int | None:
    """The prime p when |G| is a nontrivial p-power, else None."""
    fac = factorize(G.order)
    if len(fac) == 1:
        return next(iter(fac))
    return None


def is_p_group(G: GroupTable) -> bool:
    return p_group_prime(G) is not None


def center_members(G: GroupTable) -> tuple[int, ...]:
    """Indices commuting with everything."""
    T = G.table
    out = [x for x in range(G.order) if np.array_equal(T[x], T[:, x])]
    return tuple(out)


def is_nilpotent(G: GroupTable) -> bool:
    """Upper central series: keep quotienting by the center until stable."""
    current = G
    while True:
        z = center_members(current)
        if len(z) == current.order:
            return True
        if len(z) == 1:
            return False
        current, _ = quotient(current, z)


def is_simple(G: GroupTable, L: SubgroupLattice | None = None) -> bool:
    """Exactly two normal subgroups (lattice flags or a class-closure scan)."""
    if G.order == 1:
        return False
    if L is not None:
        return sum(L.normal_flags) == 2
    return len(normal_subgroups_direct(G)) == 2


def has_klein_quotient(G: GroupTable, L: SubgroupLattice) -> Subgroup | None:
    """A normal subgroup of index 4 with non-cyclic quotient, if any.

    The quotient is the Klein four-group exactly when every square lands in
    the subgroup, which avoids building the quotient table.
    """
    n = G.order
    if n % 4:
        return None
    rows = G.rows
    normal = L.normal_flags
    for i, H in enumerate(L.subgroups):
        if H.order * 4 != n or not normal[i]:
            continue
        mask = H.mask
        if all((mask >> rows[g][g]) & 1 for g in range(n)):
            return H
    return None


@dataclass(frozen=True)
class StructureReport:
    """Summary of the structural predicates for one group."""

    order: int
    exponent: int
    is_cyclic: bool
    is_abelian: bool
    is_p_group: bool
    p: int | None
    is_nilpotent: bool
    is_simple: bool
    order_is_square_free: bool
    smallest_prime_divisor: int | None
    center_order: int

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "exponent": self.exponent,
            "is_cyclic": self.is_cyclic,
            "is_abelian": self.is_abelian,
            "is_p_group": self.is_p_group,
            "p": self.p,
            "is_nilpotent": self.is_nilpotent,
            "is_simple": self.is_simple,
            "order_is_square_free": self.order_is_square_free,
            "smallest_prime_divisor": self.smallest_prime_divisor,
            "center_order": self.center_order,
        }


def structure_report(G: GroupTable, L: SubgroupLattice | None = None) -> StructureReport:
    cyc = is_cyclic(G)
    ab = cyc or is_abelian(G)
    p = p_group_prime(G)
    nil = ab or (p is not None) or is_nilpotent(G)
    return StructureReport(
        order=G.order,
        exponent=exponent(G),
        is_cyclic=cyc,
        is_abelian=ab,
        is_p_group=p is not None,
        p=p,
        is_nilpotent=nil,
        is_simple=is_simple(G, L),
        order_is_square_free=is_square_free_distinct_primes(G.order),
        smallest_prime_divisor=None if G.order == 1 else smallest_prime_divisor(G.order),
        center_order=len(center_members(G)),
    )


# ---------------------------------------------------------------------------
# Elementary abelian quotients (lattice-free index-p subgroup machinery)


def elementary_abelian_quotient(G: GroupTable, p: int) -> tuple[int, Subgroup]:
    """Rank k and kernel N of the largest exponent-p abelian quotient.

    N is the normal closure of all generator commutators and p-th powers
    of generators; the quotient G/N is then abelian of exponent dividing p,
    and any normal subgroup with such a quotient contains N.
    """
    rows = G.rows
    inv = G.inverse
    gens = G.generators
    seed: set[int] = set()
    for a in gens:
        for b in gens:
            seed.add(rows[rows[rows[a][b]][inv[a]]][inv[b]])
        x = a
        for _ in range(p - 1):
            x = rows[x][a]
        seed.add(x)
    N = normal_closure(G, seed)
    index = G.order // N.order
    k = 0
    while index % p == 0:
        index //= p
        k += 1
    if index != 1:  # pragma: no cover - impossible by construction
        raise AssertionError("elementary quotient index is not a p-power")
    return k, N


def index_p_subgroups(G: GroupTable, p: int) -> list[tuple[int, ...]]:
    """Member tuples of ALL index-p subgroups, via the elementary quotient.

    Every index-p subgroup is normal with cyclic order-p quotient, hence
    contains the kernel N of the maximal exponent-p abelian quotient; the
    index-p subgroups are exactly the preimages of the hyperplanes of G/N.
    """
    k, N = elementary_abelian_quotient(G, p)
    if k == 0:
        return []
    Q, proj = quotient(G, N.members)
    # Coordinates of Q over GF(p): grow a basis greedily.
    coords: dict[int, tuple[int, ...]] = {0: ()}
    basis: list[int] = []
    qrows = Q.rows
    for q in range(1, Q.order):
        if q in coords:
            continue
        dim = len(basis)
        basis.append(q)
        spanned = list(coords.items())
        for x, vx in spanned:
            y = x
            for j in range(1, p):
                y = qrows[y][q]
                coords[y] = vx + tuple(0 for _ in range(dim - len(vx))) + (j,)
    kk = len(basis)
    full_coords = {q: v + (0,) * (kk - len(v)) for q, v in coords.items()}
    # Nonzero functionals up to scalar: first nonzero coefficient is 1.
    functionals = []
    for lead in range(kk):
        tail = kk - lead - 1
        count = p**tail
        for t in range(count):
            c = []
            tt = t
            for _ in range(tail):
                c.append(tt % p)
                tt //= p
            functionals.append((0,) * lead + (1,) + tuple(c))
    out = []
    for phi in functionals:
        kernel = {
            q for q, v in full_coords.items() if sum(a * b for a, b in zip(phi, v)) % p == 0
        }
        members = tuple(x for x in range(G.order) if proj[x] in kernel)
        out.append(members)
    return sorted(out)
