"""Finite groups as verified Cayley tables.

Every group is a table over element indices 0..n-1 with the identity at
index 0.  Families are built by formula (cyclic, dihedral, dicyclic,
elementary abelian, products, quotients) or by closing permutation
generators (symmetric, alternating, PSL(2,q), Mathieu, user files).
Permutation-built groups number their elements breadth-first from the
identity with a lexicographic tie-break inside each layer, so identical
specs always produce identical tables.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import (
    BadPrimePower,
    ConstructionError,
    InvalidAction,
    InvalidRawTable,
    MalformedParameter,
    NotHomomorphism,
    NotNormal,
    OrderLimitExceeded,
    SpecError,
    UnknownFamily,
)
from .perms import Permutation, close_generators, parse_cycles

__all__ = [
    "MAX_ORDER",
    "GroupSpec",
    "ConstructionMeta",
    "GroupTable",
    "TableReport",
    "parse_group_spec",
    "build_group",
    "verify_table",
    "element_order",
    "exponent",
    "direct_product",
    "semidirect_product",
    "quotient",
]

MAX_ORDER = 10000

# Exhaustive associativity checking is cubic; above this order we fall back
# to Light's test against a generating set (or seeded random triples).
_EXHAUSTIVE_ASSOC_LIMIT = 512
_RANDOM_TRIPLES = 1_000_000


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


# ---------------------------------------------------------------------------
# Specs


@dataclass(frozen=True)
class GroupSpec:
    """Parsed form of the group mini-language; round-trips through text()."""

    family: str
    params: tuple[int, ...] = ()
    children: tuple["GroupSpec", ...] = ()
    path: str | None = None

    def text(self) -> str:
        f, p = self.family, self.params
        if f == "cyclic":
            return f"C{p[0]}"
        if f == "dihedral":
            return f"D{p[0]}"
        if f == "dicyclic":
            return f"Dic{p[0]}"
        if f == "symmetric":
            return f"S{p[0]}"
        if f == "alternating":
            return f"A{p[0]}"
        if f == "elementary":
            return f"E({p[0]},{p[1]})"
        if f == "psl2":
            return f"PSL(2,{p[0]})"
        if f == "mathieu":
            return f"M{p[0]}"
        if f == "w":
            return "W"
        if f == "product":
            return "x".join(c.text() for c in self.children)
        if f in ("cayley", "perm"):
            return f"{f}:{self.path}"
        raise UnknownFamily(f"unknown family {f!r}")  # pragma: no cover


_TOKEN_PATTERNS: tuple[tuple[re.Pattern, str], ...] = (
    (re.compile(r"^C(\d+)$"), "cyclic"),
    (re.compile(r"^D(\d+)$"), "dihedral"),
    (re.compile(r"^DIC(\d+)$"), "dicyclic"),
    (re.compile(r"^S(\d+)$"), "symmetric"),
    (re.compile(r"^A(\d+)$"), "alternating"),
    (re.compile(r"^E\((\d+),(\d+)\)$"), "elementary"),
    (re.compile(r"^PSL\(2,(\d+)\)$"), "psl2"),
    (re.compile(r"^M(11|12)$"), "mathieu"),
)


def _parse_token(token: str) -> GroupSpec:
    squeezed = re.sub(r"\s+", "", token).upper()
    if not squeezed:
        raise SpecError("empty group spec token")
    if squeezed == "Q8":
        return GroupSpec("dicyclic", (2,))
    if squeezed == "W":
        return GroupSpec("w")
    for pattern, family in _TOKEN_PATTERNS:
        m = pattern.match(squeezed)
        if not m:
            continue
        params = tuple(int(x) for x in m.groups())
        if family == "cyclic" and params[0] < 1:
            raise MalformedParameter("C<n> needs n >= 1")
        if family == "dihedral":
            if params[0] < 2 or params[0] % 2:
                raise MalformedParameter(f"D<m> is the dihedral group of order m; m must be even, got {params[0]}")
        if family == "dicyclic" and params[0] < 1:
            raise MalformedParameter("Dic<n> needs n >= 1")
        if family in ("symmetric", "alternating") and params[0] < 1:
            raise MalformedParameter(f"{family} degree must be >= 1")
        if family == "elementary":
            p, k = params
            if not _is_prime(p):
                raise MalformedParameter(f"E(p,k) needs prime p, got {p}")
            if k < 1:
                raise MalformedParameter("E(p,k) needs k >= 1")
        if family == "psl2":
            from .gf import MAX_Q, factor_prime_power

            if factor_prime_power(params[0]) is None or params[0] > MAX_Q:
                raise BadPrimePower(f"PSL(2,q) needs a prime power q in 2..{MAX_Q}, got {params[0]}")
        return GroupSpec(family, params)
    raise UnknownFamily(f"unrecognized group spec {token!r}")


def parse_group_spec(text: str) -> GroupSpec:
    """Parse the group mini-language (case-insensitive family names).

    Families: C<n>, D<m> (dihedral of order m, m even), Dic<n> (order 4n),
    Q8, S<n>, A<n>, E(p,k), PSL(2,q), M11, M12, W, direct products joined
    with 'x', plus file-backed specs 'cayley:<path>' and 'perm:<path>'.
    """
    stripped = text.strip()
    if not stripped:
        raise SpecError("empty group spec")
    lowered = stripped.lower()
    for prefix in ("cayley:", "perm:"):
        if lowered.startswith(prefix):
            path = stripped[len(prefix):].strip()
            if not path:
                raise MalformedParameter(f"{prefix} spec needs a file path")
            return GroupSpec(prefix[:-1], path=path)
    tokens = re.split(r"[xX]", stripped)
    if any(not tok.strip() for tok in tokens):
        raise UnknownFamily(f"unrecognized group spec {text!r}")
    parts = tuple(_parse_token(tok) for tok in tokens)
    if len(parts) == 1:
        return parts[0]
    return GroupSpec("product", children=parts)


def spec_order(spec: GroupSpec) -> int | None:
    """Predicted order, or None for file-backed specs."""
    f, p = spec.family, spec.params
    if f == "cyclic":
        return p[0]
    if f == "dihedral":
        return p[0]
    if f == "dicyclic":
        return 4 * p[0]
    if f == "symmetric":
        return math.factorial(p[0])
    if f == "alternating":
        return max(1, math.factorial(p[0]) // 2)
    if f == "elementary":
        return p[0] ** p[1]
    if f == "psl2":
        q = p[0]
        return q * (q * q - 1) // math.gcd(2, q - 1)
    if f == "mathieu":
        return {11: 7920, 12: 95040}[p[0]]
    if f == "w":
        return 20
    if f == "product":
        total = 1
        for child in spec.children:
            sub = spec_order(child)
            if sub is None:
                return None
            total *= sub
        return total
    return None


# ---------------------------------------------------------------------------
# Group tables


@dataclass(frozen=True, eq=False)
class ConstructionMeta:
    """How a table was built; decision rules read this for meta shortcuts."""

    kind: str
    name: str
    params: tuple = ()
    children: tuple["GroupTable", ...] = ()
    action: tuple | None = None


class GroupTable:
    """Immutable multiplication table with identity at index 0."""

    __slots__ = (
        "order",
        "table",
        "inverse",
        "meta",
        "generators",
        "_rows",
        "_orders",
        "_exponent",
        "__weakref__",
    )

    def __init__(self, table: np.ndarray, meta: ConstructionMeta, generators: tuple[int, ...]):
        self.order = int(table.shape[0])
        table.setflags(write=False)
        self.table = table
        inv = np.argmax(table == 0, axis=1)
        self.inverse = tuple(int(x) for x in inv)
        self.meta = meta
        self.generators = tuple(int(g) for g in generators)
        self._rows: list[list[int]] | None = None
        self._orders: list[int] | None = None
        self._exponent: int | None = None

    @property
    def rows(self) -> list[list[int]]:
        """Plain nested lists; much faster than the array for scalar loops."""
        if self._rows is None:
            self._rows = self.table.tolist()
        return self._rows

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conjugate(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        rows = self.rows
        return rows[rows[g][x]][self.inverse[g]]

    def element_orders(self) -> list[int]:
        if self._orders is None:
            rows = self.rows
            orders = [1] * self.order
            for g in range(1, self.order):
                x, k = g, 1
                while x != 0:
                    x = rows[x][g]
                    k += 1
                orders[g] = k
            self._orders = orders
        return self._orders

    def __repr__(self) -> str:
        return f"GroupTable({self.meta.name!r}, order={self.order})"


def element_order(G: GroupTable, g: int) -> int:
    """Least k >= 1 with g^k = identity."""
    if not 0 <= g < G.order:
        raise ValueError(f"element index {g} out of range")
    return G.element_orders()[g]


def exponent(G: GroupTable) -> int:
    """lcm of all element orders."""
    if G._exponent is None:
        e = 1
        for k in set(G.element_orders()):
            e = math.lcm(e, k)
        G._exponent = e
    return G._exponent


# ---------------------------------------------------------------------------
# Table verification


@dataclass(frozen=True)
class TableReport:
    """Outcome of verify_table; ok or the first violation found."""

    ok: bool
    code: str | None = None
    witness: tuple | None = None
    method: str = ""

    def __bool__(self) -> bool:  # pragma: no cover
        return self.ok


def _closure_from(rows: list[list[int]], gens: tuple[int, ...], n: int) -> set[int]:
    members = {0}
    stack = [0]
    for g in gens:
        if g not in members:
            members.add(g)
            stack.append(g)
    while stack:
        x = stack.pop()
        row = rows[x]
        for g in gens:
            y = row[g]
            if y not in members:
                members.add(y)
                stack.append(y)
    return members


def verify_table(
    table, generators: tuple[int, ...] | None = None, seed: int = 0
) -> TableReport:
    """Check that a square index table is a group table with identity 0.

    Associativity is checked exhaustively up to order 512.  Above that a
    generating set enables Light's associativity test; without one, one
    million seeded random triples are checked.
    """
    T = np.asarray(table)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        return TableReport(False, "MalformedTable", (T.shape,))
    n = int(T.shape[0])
    if n == 0:
        return TableReport(False, "MalformedTable", ((0, 0),))
    if T.min() < 0 or T.max() >= n:
        return TableReport(False, "MalformedTable", (int(T.min()), int(T.max())))
    idx = np.arange(n)
    if not (np.array_equal(T[0], idx) and np.array_equal(T[:, 0], idx)):
        return TableReport(False, "NoIdentity", (0,))
    sorted_rows = np.sort(T, axis=1)
    if not np.array_equal(sorted_rows, np.broadcast_to(idx, (n, n))):
        bad = int(np.argwhere(~(np.sort(T, axis=1) == idx).all(axis=1))[0][0])
        return TableReport(False, "NotLatinSquare", ("row", bad))
    sorted_cols = np.sort(T, axis=0)
    if not np.array_equal(sorted_cols, np.broadcast_to(idx[:, None], (n, n))):
        bad = int(np.argwhere(~(np.sort(T, axis=0) == idx[:, None]).all(axis=0))[0][0])
        return TableReport(False, "NotLatinSquare", ("column", bad))
    right_inv = np.argmax(T == 0, axis=1)
    two_sided = T[right_inv, idx] == 0
    if not two_sided.all():
        return TableReport(False, "NoInverse", (int(np.argwhere(~two_sided)[0][0]),))

    if n <= _EXHAUSTIVE_ASSOC_LIMIT:
        for a in range(n):
            lhs = T[T[a], :]
            rhs = T[a, T]
            if not np.array_equal(lhs, rhs):
                b, c = (int(v) for v in np.argwhere(lhs != rhs)[0])
                return TableReport(False, "NotAssociative", (a, b, c))
        return TableReport(True, method="exhaustive")

    rows = T.tolist()
    if generators and _closure_from(rows, tuple(generators), n) == set(range(n)):
        step = max(1, 4_000_000 // n)
        for g in generators:
            col_g = T[:, g]
            row_g = T[g, :]
            for start in range(0, n, step):
                stop = min(n, start + step)
                lhs = T[col_g[start:stop], :]
                rhs = T[start:stop, :][:, row_g]
                if not np.array_equal(lhs, rhs):
                    a_off, b = (int(v) for v in np.argwhere(lhs != rhs)[0])
                    return TableReport(False, "NotAssociative", (start + a_off, int(g), b))
        return TableReport(True, method="light")

    rng = np.random.default_rng(seed)
    remaining = _RANDOM_TRIPLES
    while remaining > 0:
        batch = min(remaining, 250_000)
        a = rng.integers(0, n, size=batch)
        b = rng.integers(0, n, size=batch)
        c = rng.integers(0, n, size=batch)
        lhs = T[T[a, b], c]
        rhs = T[a, T[b, c]]
        if not np.array_equal(lhs, rhs):
            i = int(np.argwhere(lhs != rhs)[0][0])
            return TableReport(False, "NotAssociative", (int(a[i]), int(b[i]), int(c[i])))
        remaining -= batch
    return TableReport(True, method="randomized")


def _index_dtype(n: int):
    return np.int16 if n <= np.iinfo(np.int16).max else np.int32


def _make_group(
    table: np.ndarray, meta: ConstructionMeta, generators: tuple[int, ...]
) -> GroupTable:
    table = np.ascontiguousarray(table, dtype=_index_dtype(table.shape[0]))
    report = verify_table(table, generators=generators)
    if not report.ok:  # pragma: no cover - builders are unit-tested
        raise ConstructionError(
            f"internal error: built table for {meta.name} fails verification: "
            f"{report.code} {report.witness}"
        )
    return GroupTable(table, meta, generators)


def _greedy_generators(rows: list[list[int]], n: int) -> tuple[int, ...]:
    gens: list[int] = []
    members = {0}
    while len(members) < n:
        g = min(x for x in range(n) if x not in members)
        gens.append(g)
        members = _closure_from(rows, tuple(gens), n)
    return tuple(gens)


# ---------------------------------------------------------------------------
# Family builders


def _cyclic_table(n: int) -> np.ndarray:
    idx = np.arange(n, dtype=_index_dtype(n))
    return (idx[:, None] + idx[None, :]) % n


def _build_cyclic(n: int, name: str | None = None) -> GroupTable:
    meta = ConstructionMeta("cyclic", name or f"C{n}", (n,))
    gens = (1,) if n > 1 else ()
    return _make_group(_cyclic_table(n), meta, gens)


def _build_dihedral(order: int) -> GroupTable:
    # Elements r^i s^e indexed i + n*e where order = 2n.
    n = order // 2
    idx = np.arange(order)
    i, e = idx % n, idx // n
    sign = 1 - 2 * e
    rot = (i[:, None] + sign[:, None] * i[None, :]) % n
    flip = e[:, None] ^ e[None, :]
    table = rot + n * flip
    meta = ConstructionMeta("dihedral", f"D{order}", (n,))
    gens = (1, n) if n >= 2 else (1,)
    return _make_group(table, meta, gens)


def _build_dicyclic(n: int) -> GroupTable:
    # Presentation a^(2n)=1, b^2=a^n, b^-1 a b = a^-1; elements a^i b^e
    # indexed i + 2n*e.
    m = 2 * n
    idx = np.arange(4 * n)
    i, e = idx % m, idx // m
    sign = 1 - 2 * e
    both = e[:, None] & e[None, :]
    rot = (i[:, None] + sign[:, None] * i[None, :] + n * both) % m
    flip = e[:, None] ^ e[None, :]
    table = rot + m * flip
    name = "Q8" if n == 2 else f"Dic{n}"
    meta = ConstructionMeta("dicyclic", name, (n,))
    return _make_group(table, meta, (1, m))


def _build_elementary(p: int, k: int) -> GroupTable:
    n = p**k
    weights = p ** np.arange(k, dtype=np.int64)
    digits = (np.arange(n)[:, None] // weights[None, :]) % p
    dtype = _index_dtype(n)
    table = np.empty((n, n), dtype=dtype)
    for v in range(n):
        table[v] = (((digits[v][None, :] + digits) % p) * weights[None, :]).sum(axis=1)
    meta = ConstructionMeta("elementary", f"E({p},{k})", (p, k))
    gens = tuple(int(p**i) for i in range(k))
    return _make_group(table, meta, gens)


def _close_and_tabulate(
    generators: list[Permutation],
    kind: str,
    name: str,
    params: tuple = (),
    max_order: int | None = MAX_ORDER,
) -> GroupTable:
    degree = max(g.degree for g in generators)
    gens = sorted({g.extended(degree) for g in generators if not g.extended(degree).is_identity()})
    identity = Permutation.identity(degree)
    if not gens:
        table = _cyclic_table(1)
        return _make_group(table, ConstructionMeta(kind, name, params), ())
    elements: list[Permutation] = [identity]
    parents: list[tuple[int, int]] = [(-1, -1)]
    index_of: dict[tuple[int, ...], int] = {identity.images: 0}
    layer = [0]
    while layer:
        found: dict[tuple[int, ...], tuple[Permutation, int, int]] = {}
        for xi in layer:
            x = elements[xi]
            for gi, g in enumerate(gens):
                y = x * g
                if y.images not in index_of and y.images not in found:
                    found[y.images] = (y, xi, gi)
        layer = []
        for images in sorted(found):
            perm, xi, gi = found[images]
            index_of[images] = len(elements)
            layer.append(len(elements))
            elements.append(perm)
            parents.append((xi, gi))
        if max_order is not None and len(elements) > max_order:
            raise OrderLimitExceeded(
                f"{name}: closure exceeded the order limit {max_order}"
            )
    n = len(elements)
    dtype = _index_dtype(n)
    rmul = []
    for g in gens:
        rmul.append(np.fromiter((index_of[(elements[k] * g).images] for k in range(n)), dtype=dtype, count=n))
    table = np.empty((n, n), dtype=dtype)
    table[:, 0] = np.arange(n, dtype=dtype)
    for e in range(1, n):
        xi, gi = parents[e]
        table[:, e] = rmul[gi][table[:, xi]]
    gen_indices = tuple(index_of[g.images] for g in gens)
    meta = ConstructionMeta(kind, name, params)
    return _make_group(table, meta, gen_indices)


def _build_symmetric(n: int) -> GroupTable:
    if n <= 1:
        return _build_trivial(f"S{n}", "symmetric", (n,))
    gens = [Permutation([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(Permutation(list(range(1, n)) + [0]))
    return _close_and_tabulate(gens, "symmetric", f"S{n}", (n,), max_order=None)


def _build_alternating(n: int) -> GroupTable:
    if n <= 2:
        return _build_trivial(f"A{n}", "alternating", (n,))
    three_cycle = Permutation([1, 2, 0] + list(range(3, n)))
    gens = [three_cycle]
    if n > 3:
        if n % 2:
            gens.append(Permutation(list(range(1, n)) + [0]))
        else:
            gens.append(Permutation([0] + list(range(2, n)) + [1]))
    return _close_and_tabulate(gens, "alternating", f"A{n}", (n,), max_order=None)


def _build_trivial(name: str, kind: str, params: tuple = ()) -> GroupTable:
    return _make_group(_cyclic_table(1), ConstructionMeta(kind, name, params), ())


def _build_psl2(q: int) -> GroupTable:
    from .gf import small_field

    F = small_field(q)
    infinity = q

    def moebius(a: int, b: int, c: int, d: int) -> Permutation:
        images = []
        for x in range(q):
            den = F.add[F.mul[c][x]][d]
            num = F.add[F.mul[a][x]][b]
            images.append(infinity if den == 0 else F.div(num, den))
        images.append(infinity if c == 0 else F.div(a, c))
        return Permutation(images)

    gens = []
    for i in range(F.k):
        basis = pow(F.p, i)  # the field element t^i
        gens.append(moebius(1, basis, 0, 1))
    gens.append(moebius(0, F.neg[1], 1, 0))
    G = _close_and_tabulate(gens, "psl2", f"PSL(2,{q})", (q,), max_order=None)
    expected = q * (q * q - 1) // math.gcd(2, q - 1)
    if G.order != expected:  # pragma: no cover
        raise ConstructionError(f"PSL(2,{q}) closure has order {G.order}, expected {expected}")
    return G


def _load_permutation_file(path: str) -> list[Permutation]:
    with open(path, encoding="utf-8") as fh:
        lines = [line.strip() for line in fh]
    texts = [line for line in lines if line and not line.startswith("#")]
    if not texts:
        raise SpecError(f"no generators found in {path}")
    perms = [parse_cycles(text) for text in texts]
    degree = max(p.degree for p in perms)
    return [p.extended(degree) for p in perms]


def _build_mathieu(n: int, max_order: int | None) -> GroupTable:
    data = resources.files("ecov").joinpath("data").joinpath(f"m{n}_generators.txt")
    with resources.as_file(data) as path:
        gens = _load_permutation_file(str(path))
    return _close_and_tabulate(gens, "mathieu", f"M{n}", (n,), max_order=max_order)


def _build_cayley_file(path: str, spec_text: str) -> GroupTable:
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read Cayley table file {path}: {exc}") from None
    if not isinstance(payload, dict) or "order" not in payload or "table" not in payload:
        raise SpecError(f"{path}: expected an object with 'order' and 'table'")
    n = payload["order"]
    rows = payload["table"]
    if not isinstance(n, int) or not isinstance(rows, list) or len(rows) != n:
        raise SpecError(f"{path}: table shape does not match order {n}")
    try:
        table = np.array(rows, dtype=np.int64)
    except ValueError:
        raise SpecError(f"{path}: ragged or non-integer table") from None
    report = verify_table(table)
    if not report.ok:
        raise InvalidRawTable(report.code, report.witness)
    table = table.astype(_index_dtype(n))
    gens = _greedy_generators(table.tolist(), n) if n > 1 else ()
    meta = ConstructionMeta("cayley", spec_text, (n,))
    return GroupTable(np.ascontiguousarray(table), meta, gens)


def direct_product(A: GroupTable, B: GroupTable) -> GroupTable:
    """Componentwise product; (a, b) is indexed a*|B| + b."""
    nA, nB = A.order, B.order
    n = nA * nB
    if n > MAX_ORDER:
        raise OrderLimitExceeded(f"product order {n} exceeds {MAX_ORDER}")
    dtype = _index_dtype(n)
    TA = A.table.astype(dtype)
    TB = B.table.astype(dtype)
    table = np.empty((n, n), dtype=dtype)
    for a1 in range(nA):
        block = TA[a1][None, :, None] * nB + TB[:, None, :]
        table[a1 * nB:(a1 + 1) * nB, :] = block.reshape(nB, n)
    name = f"{A.meta.name}x{B.meta.name}"
    meta = ConstructionMeta("product", name, (), (A, B))
    gens = tuple(g * nB for g in A.generators) + tuple(B.generators)
    return _make_group(table, meta, gens)


def _as_action(K: GroupTable, H: GroupTable, action) -> tuple[tuple[int, ...], ...]:
    phi = []
    for k in range(K.order):
        try:
            images = tuple(int(x) for x in action[k])
        except (KeyError, IndexError, TypeError):
            raise InvalidAction(f"action missing an automorphism for K element {k}") from None
        if sorted(images) != list(range(H.order)):
            raise InvalidAction(f"action of K element {k} is not a bijection of H")
        phi.append(images)
    return tuple(phi)


def semidirect_product(H: GroupTable, K: GroupTable, action) -> GroupTable:
    """H : K with multiplication (h1,k1)(h2,k2) = (h1 * phi_k1(h2), k1 k2).

    ``action`` maps each K index to a permutation of H indices; every part
    must be an automorphism of H and the whole map a homomorphism from K.
    """
    phi = _as_action(K, H, action)
    TH, TK = H.rows, K.rows
    for k, images in enumerate(phi):
        for a in range(H.order):
            row = TH[a]
            ia = images[a]
            for b in range(H.order):
                if images[row[b]] != TH[ia][images[b]]:
                    raise InvalidAction(f"action of K element {k} is not an automorphism of H")
    for k1 in range(K.order):
        p1 = phi[k1]
        for k2 in range(K.order):
            p2 = phi[k2]
            composed = tuple(p1[p2[h]] for h in range(H.order))
            if phi[TK[k1][k2]] != composed:
                raise NotHomomorphism(f"action is not a homomorphism at the pair ({k1}, {k2})")
    nH, nK = H.order, K.order
    n = nH * nK
    if n > MAX_ORDER:
        raise OrderLimitExceeded(f"semidirect order {n} exceeds {MAX_ORDER}")
    dtype = _index_dtype(n)
    THa = H.table.astype(dtype)
    TKa = K.table.astype(dtype)
    table = np.empty((n, n), dtype=dtype)
    for k1 in range(nK):
        twist = THa[:, np.asarray(phi[k1], dtype=dtype)]
        block = twist[:, :, None] * nK + TKa[k1][None, None, :]
        table[k1::nK, :] = block.reshape(nH, n)
    name = f"{H.meta.name}:{K.meta.name}"
    meta = ConstructionMeta("semidirect", name, (), (H, K), action=phi)
    gens = tuple(h * nK for h in H.generators) + tuple(K.generators)
    return _make_group(table, meta, gens)


def _build_w() -> GroupTable:
    """The order-20 group C5 : C4 with the generator of C4 squaring C5."""
    H = _build_cyclic(5)
    K = _build_cyclic(4)
    action = []
    for k in range(4):
        mult = pow(2, k, 5)
        action.append(tuple((mult * h) % 5 for h in range(5)))
    G = semidirect_product(H, K, action)
    meta = ConstructionMeta("w", "W", (), G.meta.children, action=G.meta.action)
    return GroupTable(G.table, meta, G.generators)


def quotient(G: GroupTable, members) -> tuple[GroupTable, tuple[int, ...]]:
    """Quotient of G by a normal subgroup given as its member indices.

    Returns the quotient table and the projection map; cosets are numbered
    by their least member, so the image of the identity coset is 0.
    """
    if hasattr(members, "members"):
        members = members.members
    mem = sorted({int(x) for x in members})
    if not mem or mem[0] != 0:
        raise NotNormal("subgroup must contain the identity")
    rows = G.rows
    mset = set(mem)
    for a in mem:
        row = rows[a]
        for b in mem:
            if row[b] not in mset:
                raise NotNormal(f"member set is not closed: {a}*{b} escapes")
    for g in G.generators:
        ginv = G.inverse[g]
        for x in mem:
            if rows[rows[g][x]][ginv] not in mset:
                raise NotNormal(f"subgroup is not normal: conjugation by {g} moves {x} out")
    n = G.order
    proj = [-1] * n
    reps: list[int] = []
    for g in range(n):
        if proj[g] != -1:
            continue
        c = len(reps)
        reps.append(g)
        row_lookup = rows
        for h in mem:
            proj[row_lookup[h][g]] = c
    proj_arr = np.asarray(proj)
    reps_arr = np.asarray(reps)
    qtable = proj_arr[np.asarray(G.table)[np.ix_(reps_arr, reps_arr)]]
    gens = tuple(sorted({proj[g] for g in G.generators} - {0}))
    meta = ConstructionMeta("quotient", f"{G.meta.name}/N{len(mem)}", (len(mem),))
    Q = _make_group(qtable.astype(_index_dtype(len(reps))), meta, gens)
    return Q, tuple(proj)


def build_group(spec: GroupSpec | str, max_order: int = MAX_ORDER) -> GroupTable:
    """Build the verified table for a spec (object or mini-language text)."""
    if isinstance(spec, str):
        spec = parse_group_spec(spec)
    predicted = spec_order(spec)
    if predicted is not None and predicted > max_order:
        raise OrderLimitExceeded(
            f"{spec.text()} has order {predicted}, above the limit {max_order}"
        )
    f = spec.family
    if f == "cyclic":
        return _build_cyclic(spec.params[0])
    if f == "dihedral":
        return _build_dihedral(spec.params[0])
    if f == "dicyclic":
        return _build_dicyclic(spec.params[0])
    if f == "symmetric":
        return _build_symmetric(spec.params[0])
    if f == "alternating":
        return _build_alternating(spec.params[0])
    if f == "elementary":
        return _build_elementary(*spec.params)
    if f == "psl2":
        return _build_psl2(spec.params[0])
    if f == "mathieu":
        return _build_mathieu(spec.params[0], max_order)
    if f == "w":
        return _build_w()
    if f == "product":
        built = build_group(spec.children[0], max_order)
        for child in spec.children[1:]:
            built = direct_product(built, build_group(child, max_order))
        if len(spec.children) > 2:
            meta = ConstructionMeta("product", spec.text(), (), built.meta.children)
            built = GroupTable(built.table, meta, built.generators)
        return built
    if f == "cayley":
        G = _build_cayley_file(spec.path, spec.text())
        if G.order > max_order:
            raise OrderLimitExceeded(f"table order {G.order} exceeds {max_order}")
        return G
    if f == "perm":
        gens = _load_permutation_file(spec.path)
        return _close_and_tabulate(gens, "perm", spec.text(), (), max_order=max_order)
    raise UnknownFamily(f"cannot build family {f!r}")  # pragma: no cover
