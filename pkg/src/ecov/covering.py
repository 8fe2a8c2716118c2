"""Equal-covering decisions, covering invariants, and certificate checks.

A covering is a family of proper subgroups whose union is the whole group;
an equal covering additionally has all members of one order.  decide()
answers "does an equal covering exist" by a ladder of structural rules
(cheapest first) with an exhaustive divisor-by-divisor union test as the
fallback; every Yes is returned with a certificate that is re-verified
before leaving the engine.  sigma/epsilon/rho compute the minimum sizes of
coverings, equal coverings, and partitions by branch-and-bound searches
whose witnesses are verified the same way.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

from .analysis import (
    elementary_abelian_quotient,
    factorize,
    index_p_subgroups,
    is_cyclic,
    is_nilpotent,
    is_simple,
    is_square_free_distinct_primes,
    p_group_prime,
    smallest_prime_divisor,
)
from .errors import (
    HintFileError,
    InconclusiveHints,
    RulesInconclusive,
    SearchBudgetExceeded,
    SpecError,
)
from .groups import GroupTable, exponent, quotient
from .lattice import (
    FULL_LATTICE_LIMIT,
    SubgroupLattice,
    get_lattice,
    maximal_subgroups,
    normal_subgroups_direct,
    subgroups_of_order,
)

__all__ = [
    "INFINITY",
    "PARTITION_SEARCH_LIMIT",
    "CITATIONS",
    "Certificate",
    "CertificateReport",
    "Decision",
    "SigmaResult",
    "verify_certificate",
    "equal_covering_exhaustive",
    "decide",
    "decide_with_hints",
    "load_hints",
    "sigma",
    "epsilon",
    "rho",
    "equal_partition_exists",
    "qualifying_divisors",
]

INFINITY = math.inf
PARTITION_SEARCH_LIMIT = 200
_SEARCH_NODE_BUDGET = 2_000_000

CERTIFICATE_MODES = (
    "Covering",
    "EqualCovering",
    "Partition",
    "EqualPartition",
    "StrictSPartition",
    "SemiPartition",
)

# One-line mathematical justification for every rule tag.
CITATIONS = {
    "RuleT1_Cyclic": "a group is covered by proper subgroups iff it is non-cyclic (Scorza)",
    "RuleT20_SquareFree": "a group of square-free order has no equal covering",
    "RuleC1_Exponent": "the exponent divides the common member order, so some proper divisor of |G| must be a multiple of exp(G)",
    "RuleT16_Dihedral": "the dihedral group of order 2n has an equal covering iff n is even; the rotation subgroup and the two half-turn subgroups cover",
    "RuleT17_PGroup": "every non-cyclic finite p-group is covered by its maximal subgroups, all of index p",
    "RuleT19_Nilpotent": "every non-cyclic nilpotent group has an equal covering by index-p subgroups for a prime p of quotient rank >= 2",
    "RuleT18_DirectFactor": "an equal covering of a direct factor lifts to the product by crossing every member with the other factor",
    "RuleC3_Semidirect": "an equal covering of the complement factor pulls back through the semidirect projection",
    "RuleT21_Quotient": "an equal covering of a quotient pulls back to an equal covering along the projection",
    "RuleP2_SimpleHalfExp": "a non-cyclic simple group whose exponent is half its order has no equal covering",
    "Exhaustive": "divisor-by-divisor test: the union of all order-d subgroups covers iff some equal covering of order d exists",
    "HintC1": "the exponent divides none of the (externally sourced) maximal subgroup orders",
}

# Citation variant for the hint path when divisibility alone cannot conclude
# but the hint file records a negative external union computation.
_HINT_UNION_CITATION = (
    "the hint file records an external check that the subgroups of "
    "exponent-multiple order do not cover the group"
)


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    out += [n // d for d in reversed(out) if d * d != n]
    return out


def qualifying_divisors(n: int, e: int) -> list[int]:
    """Proper divisors of n that are multiples of the exponent e, ascending."""
    return [d for d in _divisors(n) if d < n and d % e == 0]


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class Certificate:
    """A covering-flavored family of subgroups, listed by member indices."""

    mode: str
    members: tuple[tuple[int, ...], ...]
    s_members: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.mode not in CERTIFICATE_MODES:
            raise SpecError(f"unknown certificate mode {self.mode!r}")

    def common_order(self) -> int | None:
        orders = {len(m) for m in self.members}
        return next(iter(orders)) if len(orders) == 1 else None

    def to_json(self, group: str) -> dict:
        doc = {
            "mode": self.mode,
            "group": group,
            "members": [list(m) for m in self.members],
        }
        if self.s_members is not None:
            doc["s"] = list(self.s_members)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Certificate":
        if not isinstance(doc, dict) or "mode" not in doc or "members" not in doc:
            raise SpecError("certificate JSON needs 'mode' and 'members'")
        mode = doc["mode"]
        if mode not in CERTIFICATE_MODES:
            raise SpecError(f"unknown certificate mode {mode!r}")
        members = tuple(tuple(int(x) for x in m) for m in doc["members"])
        s = doc.get("s")
        s_members = tuple(int(x) for x in s) if s is not None else None
        return cls(mode, members, s_members)


@dataclass(frozen=True)
class CertificateReport:
    """ok, or the first violation with its code and witness indices."""

    ok: bool
    code: str | None = None
    detail: tuple = ()

    def __bool__(self) -> bool:  # pragma: no cover
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return f"{self.code}{self.detail}"


def _is_subgroup(G: GroupTable, members: tuple[int, ...]) -> bool:
    mset = set(members)
    if 0 not in mset or len(mset) != len(members):
        return False
    rows = G.rows
    for a in members:
        row = rows[a]
        for b in members:
            if row[b] not in mset:
                return False
    return True


def _mask(members) -> int:
    m = 0
    for x in members:
        m |= 1 << x
    return m


def verify_certificate(G: GroupTable, cert: Certificate) -> CertificateReport:
    """Check a certificate against its mode's definition.

    Violations, in check order: NotASubgroup(i), NotProper(i),
    UnionIncomplete(element), UnequalOrders(i, j),
    BadPairwiseIntersection(i, j), BadTripleIntersection(i, j, k).
    """
    n = G.order
    members = cert.members
    if not members:
        return CertificateReport(False, "UnionIncomplete", (0,))
    for i, mem in enumerate(members):
        if not mem or any(not 0 <= x < n for x in mem):
            return CertificateReport(False, "NotASubgroup", (i,))
        if not _is_subgroup(G, mem):
            return CertificateReport(False, "NotASubgroup", (i,))
        if len(mem) >= n:
            return CertificateReport(False, "NotProper", (i,))
    union = 0
    for mem in members:
        union |= _mask(mem)
    if union != (1 << n) - 1:
        missing = next(x for x in range(n) if not (union >> x) & 1)
        return CertificateReport(False, "UnionIncomplete", (missing,))
    if cert.mode in ("EqualCovering", "EqualPartition"):
        base = len(members[0])
        for i, mem in enumerate(members):
            if len(mem) != base:
                return CertificateReport(False, "UnequalOrders", (0, i))
    masks = [_mask(mem) for mem in members]
    if cert.mode in ("Partition", "EqualPartition"):
        for i in range(len(masks)):
            for j in range(i + 1, len(masks)):
                if masks[i] & masks[j] != 1:
                    return CertificateReport(False, "BadPairwiseIntersection", (i, j))
    if cert.mode == "StrictSPartition":
        s = cert.s_members if cert.s_members is not None else (0,)
        if not _is_subgroup(G, tuple(sorted(set(s)))):
            return CertificateReport(False, "NotASubgroup", (-1,))
        smask = _mask(s)
        for i in range(len(masks)):
            for j in range(i + 1, len(masks)):
                if masks[i] & masks[j] != smask:
                    return CertificateReport(False, "BadPairwiseIntersection", (i, j))
    if cert.mode == "SemiPartition":
        for i in range(len(masks)):
            for j in range(i + 1, len(masks)):
                pair = masks[i] & masks[j]
                if pair == 1:
                    continue
                for k in range(j + 1, len(masks)):
                    if pair & masks[k] != 1:
                        return CertificateReport(False, "BadTripleIntersection", (i, j, k))
    return CertificateReport(True)


# ---------------------------------------------------------------------------
# Decisions


@dataclass(frozen=True)
class Decision:
    """Outcome of an equal-covering decision with its justification."""

    status: str  # "Yes" | "No"
    method: str
    citation: str
    certificate: Certificate | None = None
    elapsed: float = 0.0

    @property
    def has_covering_at_all(self) -> bool:
        """False only for the cyclic case, which has no covering of any kind."""
        return self.method != "RuleT1_Cyclic"


def _decision(status: str, method: str, certificate: Certificate | None, t0: float) -> Decision:
    return Decision(status, method, CITATIONS[method], certificate, time.perf_counter() - t0)


def equal_covering_exhaustive(
    G: GroupTable, L: SubgroupLattice | None = None, lattice_limit: int = FULL_LATTICE_LIMIT
) -> Decision:
    """Divisor-by-divisor union test over the full lattice.

    For each proper divisor d of |G| that the exponent divides, the union
    of ALL order-d subgroups covers G iff some equal covering with member
    order d exists (any such covering only grows by adding the rest).
    """
    t0 = time.perf_counter()
    n = G.order
    full = (1 << n) - 1
    for d in qualifying_divisors(n, exponent(G)):
        if L is None:
            L = get_lattice(G, lattice_limit)
        fams = subgroups_of_order(L, d)
        union = 0
        for s in fams:
            union |= s.mask
        if union == full:
            cert = Certificate("EqualCovering", tuple(s.members for s in fams))
            return _decision("Yes", "Exhaustive", cert, t0)
    return _decision("No", "Exhaustive", None, t0)


def _dihedral_certificate(G: GroupTable) -> Certificate:
    """{rotations, even half + even reflections, even half + odd reflections}."""
    half = G.order // 2
    rot = tuple(range(half))
    evens = tuple(range(0, half, 2))
    m2 = tuple(sorted(evens + tuple(half + i for i in range(0, half, 2))))
    m3 = tuple(sorted(evens + tuple(half + i for i in range(1, half, 2))))
    return Certificate("EqualCovering", (rot, m2, m3))


def _preimage_certificate(cert: Certificate, proj, n: int) -> Certificate:
    members = []
    for mem in cert.members:
        target = set(mem)
        members.append(tuple(x for x in range(n) if proj[x] in target))
    return Certificate("EqualCovering", tuple(members))


def _table_key(G: GroupTable) -> tuple:
    return (G.order, G.table.tobytes())


def _verify_yes(G: GroupTable, cert: Certificate, method: str) -> None:
    report = verify_certificate(G, cert)
    if not report.ok:  # pragma: no cover - soundness guard
        raise AssertionError(
            f"internal soundness failure: {method} produced an invalid certificate: {report.describe()}"
        )


def decide(
    G: GroupTable,
    mode: str = "auto",
    lattice_limit: int = FULL_LATTICE_LIMIT,
    _depth: int = 0,
    _memo: dict | None = None,
) -> Decision:
    """Does G have an equal covering?

    mode "auto" runs the rule ladder with exhaustive fallback, "rules"
    raises RulesInconclusive instead of falling back, and "exhaustive"
    skips the rules entirely.  Cyclic groups report No with method
    RuleT1_Cyclic, meaning no covering of any kind exists.
    """
    if mode not in ("auto", "rules", "exhaustive"):
        raise SpecError(f"unknown decide mode {mode!r}")
    t0 = time.perf_counter()
    memo = _memo if _memo is not None else {}

    if mode == "exhaustive":
        return equal_covering_exhaustive(G, lattice_limit=lattice_limit)

    result = _rules_ladder(G, lattice_limit, _depth, memo, t0)
    if result is not None:
        return result
    if mode == "rules":
        raise RulesInconclusive(
            f"no structural rule settles {G.meta.name}; exhaustive search disabled"
        )
    return equal_covering_exhaustive(G, lattice_limit=lattice_limit)


def _decide_memo(G: GroupTable, lattice_limit: int, depth: int, memo: dict) -> Decision:
    key = _table_key(G)
    hit = memo.get(key)
    if hit is not None:
        return hit
    result = decide(G, "auto", lattice_limit, depth, memo)
    memo[key] = result
    return result


def _rules_ladder(
    G: GroupTable, lattice_limit: int, depth: int, memo: dict, t0: float
) -> Decision | None:
    n = G.order

    # (1) cyclic groups have no covering at all
    if is_cyclic(G):
        return _decision("No", "RuleT1_Cyclic", None, t0)

    # (2) square-free order
    if is_square_free_distinct_primes(n):
        return _decision("No", "RuleT20_SquareFree", None, t0)

    # (3) exponent rule at divisor level
    e = exponent(G)
    if not qualifying_divisors(n, e):
        return _decision("No", "RuleC1_Exponent", None, t0)

    # (4) dihedral metadata
    if G.meta.kind == "dihedral":
        half = G.meta.params[0]
        if half % 2 == 0:
            cert = _dihedral_certificate(G)
            _verify_yes(G, cert, "RuleT16_Dihedral")
            return _decision("Yes", "RuleT16_Dihedral", cert, t0)
        return _decision("No", "RuleT16_Dihedral", None, t0)

    # (5) non-cyclic p-group: all maximal subgroups
    p = p_group_prime(G)
    if p is not None:
        members = index_p_subgroups(G, p)
        cert = Certificate("EqualCovering", tuple(members))
        _verify_yes(G, cert, "RuleT17_PGroup")
        return _decision("Yes", "RuleT17_PGroup", cert, t0)

    # (6) non-cyclic nilpotent: index-p family at a rank >= 2 prime
    if is_nilpotent(G):
        for q in sorted(factorize(n)):
            rank, _ = elementary_abelian_quotient(G, q)
            if rank >= 2:
                members = index_p_subgroups(G, q)
                cert = Certificate("EqualCovering", tuple(members))
                _verify_yes(G, cert, "RuleT19_Nilpotent")
                return _decision("Yes", "RuleT19_Nilpotent", cert, t0)

    # (7) construction metadata: direct factors and semidirect complements
    if depth < 3 and G.meta.kind == "product" and len(G.meta.children) == 2:
        A, B = G.meta.children
        for first, other, flip in ((A, B, False), (B, A, True)):
            sub = _decide_memo(first, lattice_limit, depth + 1, memo)
            if sub.status == "Yes" and sub.certificate is not None:
                nB = B.order
                members = []
                for mem in sub.certificate.members:
                    if not flip:
                        lifted = tuple(sorted(a * nB + b for a in mem for b in range(nB)))
                    else:
                        lifted = tuple(sorted(a * nB + b for a in range(A.order) for b in mem))
                    members.append(lifted)
                cert = Certificate("EqualCovering", tuple(members))
                _verify_yes(G, cert, "RuleT18_DirectFactor")
                return _decision("Yes", "RuleT18_DirectFactor", cert, t0)
    if depth < 3 and G.meta.kind in ("semidirect", "w") and len(G.meta.children) == 2:
        H, K = G.meta.children
        sub = _decide_memo(K, lattice_limit, depth + 1, memo)
        if sub.status == "Yes" and sub.certificate is not None:
            nK = K.order
            proj = [idx % nK for idx in range(n)]
            cert = _preimage_certificate(sub.certificate, proj, n)
            _verify_yes(G, cert, "RuleC3_Semidirect")
            return _decision("Yes", "RuleC3_Semidirect", cert, t0)

    # (8) pull back along a quotient with an equal covering
    normals = normal_subgroups_direct(G)
    if depth < 3:
        for N in sorted(normals, key=lambda s: (-s.order, s.members)):
            if N.order in (1, n):
                continue
            Q, proj = quotient(G, N.members)
            if is_cyclic(Q):
                continue
            sub = _decide_memo(Q, lattice_limit, depth + 1, memo)
            if sub.status == "Yes" and sub.certificate is not None:
                cert = _preimage_certificate(sub.certificate, proj, n)
                _verify_yes(G, cert, "RuleT21_Quotient")
                return _decision("Yes", "RuleT21_Quotient", cert, t0)

    # (9) simple with exponent |G|/2
    if len(normals) == 2 and 2 * e == n:
        return _decision("No", "RuleP2_SimpleHalfExp", None, t0)

    return None


# ---------------------------------------------------------------------------
# Hints (externally sourced maximal subgroup orders)


def load_hints(path: str) -> dict:
    """Load and validate a hint file for one large group."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise HintFileError(f"cannot read hint file {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise HintFileError(f"{path}: hint file must be a JSON object")
    for key, typ in (("name", str), ("order", int), ("exponent", int), ("maximal_orders", list)):
        if key not in doc or not isinstance(doc[key], typ):
            raise HintFileError(f"{path}: missing or mistyped field {key!r}")
    order, expo = doc["order"], doc["exponent"]
    if order < 2 or expo < 1 or order % expo:
        raise HintFileError(f"{path}: exponent {expo} must divide the order {order}")
    for m in doc["maximal_orders"]:
        if not isinstance(m, int) or m < 1 or m >= order or order % m:
            raise HintFileError(f"{path}: maximal order {m!r} is not a proper divisor of {order}")
    if not doc["maximal_orders"]:
        raise HintFileError(f"{path}: maximal_orders must be non-empty")
    for opt in ("exponent_multiple_union_covers", "simple"):
        flag = doc.get(opt)
        if flag is not None and not isinstance(flag, bool):
            raise HintFileError(f"{path}: {opt} must be a boolean")
    return doc


def decide_with_hints(
    name: str,
    order: int,
    exponent: int,
    maximal_orders: list[int],
    exponent_multiple_union_covers: bool | None = None,
) -> Decision:
    """No-only decision from trusted maximal subgroup orders.

    Every equal covering consists of subgroups lying inside maximal ones of
    the same-or-larger order divisible by the exponent; when the exponent
    divides no maximal order, no equal covering can exist.  A hint file may
    also record the outcome of an external union computation for the
    remaining candidate orders; only a negative outcome is usable.  This
    path never proves Yes.
    """
    t0 = time.perf_counter()
    if order < 2 or exponent < 1 or order % exponent or not maximal_orders:
        raise HintFileError(f"inconsistent hint data for {name}")
    if all(m % exponent for m in maximal_orders):
        return _decision("No", "HintC1", None, t0)
    if exponent_multiple_union_covers is False:
        return Decision("No", "HintC1", _HINT_UNION_CITATION, None, time.perf_counter() - t0)
    raise InconclusiveHints(
        f"{name}: some maximal subgroup order is a multiple of the exponent; "
        "the divisibility rule cannot conclude and this path never proves Yes"
    )


# ---------------------------------------------------------------------------
# Branch-and-bound searches


class _Budget:
    __slots__ = ("nodes", "limit")

    def __init__(self, limit: int):
        self.nodes = 0
        self.limit = limit

    def tick(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise SearchBudgetExceeded(
                f"search exceeded {self.limit} nodes; the instance is beyond desk scale"
            )


def _greedy_cover(masks: list[int], target: int) -> list[int] | None:
    chosen = []
    covered = 0
    while covered & target != target:
        best_i, best_gain = -1, 0
        for i, m in enumerate(masks):
            gain = (m & target & ~covered).bit_count()
            if gain > best_gain:
                best_i, best_gain = i, gain
        if best_i < 0:
            return None
        chosen.append(best_i)
        covered |= masks[best_i]
    return chosen


def _min_set_cover(
    masks: list[int],
    target: int,
    stop_at: int,
    budget: _Budget,
    upper: int | None = None,
) -> tuple[int, tuple[int, ...]] | None:
    """Exact minimum cover of target by the given masks, or None if impossible.

    stop_at is a proven lower bound: a solution of that size ends the search.
    """
    greedy = _greedy_cover(masks, target)
    if greedy is None:
        return None
    best = len(greedy)
    best_sets: tuple[int, ...] = tuple(greedy)
    if upper is not None and upper < best:
        best = upper + 1  # only look for strictly better than the cap
        best_sets = ()
    if best <= stop_at:
        return best, best_sets
    max_gain = max(m.bit_count() for m in masks)
    element_sets: dict[int, list[int]] = {}
    for x in range(target.bit_length()):
        if (target >> x) & 1:
            element_sets[x] = [i for i, m in enumerate(masks) if (m >> x) & 1]

    def dfs(covered: int, chosen: list[int]):
        nonlocal best, best_sets
        budget.tick()
        remaining = target & ~covered
        if remaining == 0:
            if len(chosen) < best:
                best = len(chosen)
                best_sets = tuple(chosen)
            return
        if len(chosen) + (remaining.bit_count() + max_gain - 1) // max_gain >= best:
            return
        if best <= stop_at:
            return
        # branch on the uncovered element with the fewest candidate sets
        pick, pick_cands = -1, None
        for x, cands in element_sets.items():
            if not (remaining >> x) & 1:
                continue
            live = [i for i in cands if i not in chosen]
            if pick_cands is None or len(live) < len(pick_cands):
                pick, pick_cands = x, live
                if len(live) <= 1:
                    break
        if not pick_cands:
            return
        pick_cands.sort(key=lambda i: -(masks[i] & remaining).bit_count())
        for i in pick_cands:
            chosen.append(i)
            dfs(covered | masks[i], chosen)
            chosen.pop()
            if best <= stop_at:
                return

    dfs(0, [])
    if not best_sets and upper is not None and best == upper + 1:
        return None
    return best, best_sets


@dataclass(frozen=True)
class SigmaResult:
    """Minimum covering size with its witness and the bounds that led there."""

    value: int | float
    witness: Certificate | None
    bounds_log: tuple = ()


def sigma(
    G: GroupTable, L: SubgroupLattice | None = None, lattice_limit: int = FULL_LATTICE_LIMIT
) -> SigmaResult:
    """Minimum number of proper subgroups covering G; Infinity iff cyclic.

    The search runs over maximal subgroups only: any covering stays a
    covering of the same size after enlarging each member to a maximal
    subgroup above it, so the minimum is attained there.
    """
    if is_cyclic(G):
        return SigmaResult(INFINITY, None, ((INFINITY, "cyclic groups have no covering"),))
    if L is None:
        L = get_lattice(G, lattice_limit)
    n = G.order
    p = smallest_prime_divisor(n)
    lower = max(3, p + 1)
    log = [
        (3, "no group is the union of two proper subgroups"),
        (p + 1, f"no union of {p} or fewer proper subgroups covers (least prime {p})"),
    ]
    maximals = maximal_subgroups(L)
    masks = [s.mask for s in maximals]
    target = ((1 << n) - 1) & ~1  # identity is inside every subgroup
    found = _min_set_cover(masks, target, lower, _Budget(_SEARCH_NODE_BUDGET))
    if found is None:  # pragma: no cover - non-cyclic groups are always coverable
        raise AssertionError("maximal subgroups fail to cover a non-cyclic group")
    value, chosen = found
    members = tuple(sorted(maximals[i].members for i in chosen))
    witness = Certificate("Covering", members)
    _verify_yes(G, witness, "sigma")
    log.append((value, "exact branch-and-bound over maximal subgroups"))
    return SigmaResult(value, witness, tuple(log))


def epsilon(
    G: GroupTable, L: SubgroupLattice | None = None, lattice_limit: int = FULL_LATTICE_LIMIT
) -> tuple[int | float, Certificate | None]:
    """Minimum size of an equal covering; Infinity when none exists."""
    if is_cyclic(G):
        return INFINITY, None
    if L is None:
        L = get_lattice(G, lattice_limit)
    n = G.order
    full = (1 << n) - 1
    p = smallest_prime_divisor(n)
    stop_at = max(3, p + 1)
    budget = _Budget(_SEARCH_NODE_BUDGET)
    best: int | float = INFINITY
    best_members: tuple | None = None
    for d in qualifying_divisors(n, exponent(G)):
        fams = subgroups_of_order(L, d)
        union = 0
        for s in fams:
            union |= s.mask
        if union != full:
            continue
        cap = None if best is INFINITY else int(best) - 1
        found = _min_set_cover([s.mask for s in fams], full & ~1, stop_at, budget, upper=cap)
        if found is None:
            continue
        value, chosen = found
        if value < best:
            best = value
            best_members = tuple(sorted(fams[i].members for i in chosen))
        if best <= stop_at:
            break
    if best_members is None:
        return INFINITY, None
    witness = Certificate("EqualCovering", best_members)
    _verify_yes(G, witness, "epsilon")
    return best, witness


def _min_exact_cover(
    masks: list[int], target: int, budget: _Budget
) -> tuple[int, tuple[int, ...]] | None:
    """Minimum number of pairwise-disjoint masks exactly covering target."""
    best: int | None = None
    best_sets: tuple[int, ...] = ()
    sizes = [m.bit_count() for m in masks]
    max_size = max(sizes, default=0)
    element_sets: dict[int, list[int]] = {}
    for x in range(target.bit_length()):
        if (target >> x) & 1:
            element_sets[x] = [i for i, m in enumerate(masks) if (m >> x) & 1]

    def dfs(covered: int, chosen: list[int]):
        nonlocal best, best_sets
        budget.tick()
        remaining = target & ~covered
        if remaining == 0:
            if best is None or len(chosen) < best:
                best = len(chosen)
                best_sets = tuple(chosen)
            return
        if best is not None and len(chosen) + (remaining.bit_count() + max_size - 1) // max_size >= best:
            return
        x = (remaining & -remaining).bit_length() - 1  # least uncovered element
        for i in element_sets[x]:
            if masks[i] & covered:
                continue
            chosen.append(i)
            dfs(covered | masks[i], chosen)
            chosen.pop()

    dfs(0, [])
    if best is None:
        return None
    return best, best_sets


def rho(
    G: GroupTable, L: SubgroupLattice | None = None, lattice_limit: int = FULL_LATTICE_LIMIT
) -> tuple[int | float, Certificate | None]:
    """Minimum partition size (pairwise-trivial intersections); Infinity if none.

    A partition tiles the non-identity elements exactly, so this is an
    exact-cover search over all proper nontrivial subgroups.
    """
    if is_cyclic(G):
        return INFINITY, None
    n = G.order
    if n > PARTITION_SEARCH_LIMIT:
        raise SearchBudgetExceeded(
            f"partition search is limited to order {PARTITION_SEARCH_LIMIT}, got {n}"
        )
    if L is None:
        L = get_lattice(G, lattice_limit)
    blocks = [s for s in L.subgroups if 1 < s.order < n]
    masks = [s.mask & ~1 for s in blocks]
    target = ((1 << n) - 1) & ~1
    found = _min_exact_cover(masks, target, _Budget(_SEARCH_NODE_BUDGET))
    if found is None:
        return INFINITY, None
    value, chosen = found
    witness = Certificate("Partition", tuple(sorted(blocks[i].members for i in chosen)))
    _verify_yes(G, witness, "rho")
    return value, witness


def equal_partition_exists(
    G: GroupTable, L: SubgroupLattice | None = None, lattice_limit: int = FULL_LATTICE_LIMIT
) -> tuple[bool, Certificate | None]:
    """Is there a partition whose members all share one order?

    Candidate orders d must be proper divisors with exp(G) | d (a partition
    is a covering) and (d-1) | (|G|-1) (the blocks tile the non-identity
    elements).  For prime d, distinct subgroups automatically intersect
    trivially, so existence reduces to the union test.
    """
    if is_cyclic(G):
        return False, None
    n = G.order
    if n > PARTITION_SEARCH_LIMIT:
        raise SearchBudgetExceeded(
            f"partition search is limited to order {PARTITION_SEARCH_LIMIT}, got {n}"
        )
    if L is None:
        L = get_lattice(G, lattice_limit)
    full = (1 << n) - 1
    for d in qualifying_divisors(n, exponent(G)):
        if (n - 1) % (d - 1):
            continue
        fams = subgroups_of_order(L, d)
        if not fams:
            continue
        union = 0
        for s in fams:
            union |= s.mask
        if union != full:
            continue
        if _is_prime(d):
            cert = Certificate("EqualPartition", tuple(s.members for s in fams))
            _verify_yes(G, cert, "equal_partition_exists")
            return True, cert
        masks = [s.mask & ~1 for s in fams]
        found = _min_exact_cover(masks, full & ~1, _Budget(_SEARCH_NODE_BUDGET))
        if found is not None:
            _, chosen = found
            cert = Certificate("EqualPartition", tuple(sorted(fams[i].members for i in chosen)))
            _verify_yes(G, cert, "equal_partition_exists")
            return True, cert
    return False, None


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True
