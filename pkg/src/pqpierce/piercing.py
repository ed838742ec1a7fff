"""(p,q)-property checks and exact piercing numbers.

The piercing number equals the minimum number of parts in a partition
of the family into intersecting subfamilies: the sets served by one
piercing point always form an intersecting subfamily, and conversely
each part's joint-LP witness serves as a piercing point. Everything
here therefore reduces to one memoized intersection oracle.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

from .errors import EmptySetError, MalformedInputError
from .hypergraph import Hypergraph, hypergraph
from .rational import Point, point_json
from .sets import Family, HRep, contains_point, intersect_nonempty, is_bounded, is_empty


class IntersectionOracle:
    """Memoized joint-intersection queries on one family.

    Results propagate through the subset order: an intersecting index
    set certifies all its subsets, an empty one condemns all supersets.
    Only LP-computed results seed those closures, so the scan stays
    short. Thread-safe; LP calls run outside the lock.
    """

    def __init__(self, fam: Family):
        self.fam = fam
        self._memo: dict[frozenset, bool] = {}
        self._points: dict[frozenset, Point] = {}
        self._true_seeds: list[frozenset] = []
        self._false_seeds: list[frozenset] = []
        self._lock = threading.Lock()

    def _lookup(self, key: frozenset) -> Optional[bool]:
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        for seed in self._true_seeds:
            if key <= seed:
                self._memo[key] = True
                self._points[key] = self._points[seed]
                return True
        for seed in self._false_seeds:
            if seed <= key:
                self._memo[key] = False
                return False
        return None

    def intersecting(self, indices: Iterable[int]) -> bool:
        key = frozenset(indices)
        if not key:
            raise MalformedInputError("empty index set")
        with self._lock:
            cached = self._lookup(key)
        if cached is not None:
            return cached
        ok, witness = intersect_nonempty(self.fam, sorted(key))
        with self._lock:
            self._memo[key] = ok
            if ok:
                self._points[key] = witness
                self._true_seeds.append(key)
            else:
                self._false_seeds.append(key)
        return ok

    def witness(self, indices: Iterable[int]) -> Optional[Point]:
        key = frozenset(indices)
        if not self.intersecting(key):
            return None
        with self._lock:
            return self._points[key]

    @property
    def lp_results(self) -> int:
        with self._lock:
            return len(self._true_seeds) + len(self._false_seeds)


@dataclass(frozen=True)
class PqReport:
    p: int
    q: int
    holds: bool
    violating_tuple: Optional[tuple[int, ...]]
    checked_tuples: int


def pq_property_scan(
    n: int, p: int, q: int, query: Callable[[tuple[int, ...]], bool]
) -> tuple[bool, Optional[tuple[int, ...]], int]:
    """Core of every (p,q) check: among any p of n indices, do some q
    satisfy the query? Returns (holds, lex-first violation, tuples seen)."""
    if not (1 <= q <= p):
        raise MalformedInputError("need p >= q >= 1")
    if p > n:
        raise MalformedInputError(f"p = {p} exceeds family size {n}")
    checked = 0
    for tup in combinations(range(n), p):
        checked += 1
        if not any(query(sub) for sub in combinations(tup, q)):
            return False, tup, checked
    return True, None, checked


def has_pq_property(
    fam: Family, p: int, q: int, oracle: Optional[IntersectionOracle] = None
) -> PqReport:
    """Exhaustive (p,q)-property verification with a memoized oracle."""
    oracle = oracle or IntersectionOracle(fam)
    holds, violating, checked = pq_property_scan(
        len(fam), p, q, oracle.intersecting
    )
    return PqReport(p, q, holds, violating, checked)


def pq_report_to_json(r: PqReport) -> dict:
    return {
        "p": r.p,
        "q": r.q,
        "holds": r.holds,
        "violating_tuple": None if r.violating_tuple is None else list(r.violating_tuple),
        "checked_tuples": r.checked_tuples,
    }


# ---------------------------------------------------------------------------
# partitions into intersecting parts

def partition_search(
    n: int,
    parts: int,
    compatible: Callable[[frozenset], bool],
) -> Optional[list[int]]:
    """Assign indices 0..n-1 to at most `parts` classes, each class
    passing `compatible`. First feasible assignment in lexicographic
    branch order (classes tried in creation order, new class last)."""
    assignment = [-1] * n
    classes: list[frozenset] = []

    def extend(i: int) -> bool:
        if i == n:
            return True
        for c, members in enumerate(classes):
            grown = members | {i}
            if compatible(grown):
                classes[c] = grown
                assignment[i] = c
                if extend(i + 1):
                    return True
                classes[c] = members
        if len(classes) < parts:
            single = frozenset({i})
            if compatible(single):
                classes.append(single)
                assignment[i] = len(classes) - 1
                if extend(i + 1):
                    return True
                classes.pop()
        assignment[i] = -1
        return False

    if extend(0):
        return assignment
    return None


def min_partition(
    n: int, compatible: Callable[[frozenset], bool]
) -> list[list[int]]:
    """Minimum partition of 0..n-1 into classes passing `compatible`
    (assumed true on singletons and closed under subsets)."""
    for parts in range(1, n + 1):
        assignment = partition_search(n, parts, compatible)
        if assignment is not None:
            out: list[list[int]] = [[] for _ in range(max(assignment) + 1)]
            for i, c in enumerate(assignment):
                out[c].append(i)
            return out
    raise MalformedInputError("an index is incompatible even on its own")


@dataclass
class PiercingSolution:
    points: tuple[Point, ...]
    assignment: dict[int, int]
    optimal: bool


def _verify_solution(fam: Family, sol: PiercingSolution) -> None:
    for i, pi in sol.assignment.items():
        if not contains_point(fam.sets[i], sol.points[pi]):
            raise AssertionError(
                f"{fam.sets[i].label} does not contain its assigned point"
            )


def piercing_number(fam: Family, limit: Optional[int] = None) -> PiercingSolution:
    """Exact piercing number as a minimum intersecting partition.

    With `limit` set and the true number above it, falls back to a
    greedy first-fit partition and marks the result non-optimal.
    """
    for s in fam.sets:
        if isinstance(s.rep, HRep) and is_empty(s):
            raise EmptySetError(f"cannot pierce empty set {s.label!r}")
    oracle = IntersectionOracle(fam)
    n = len(fam)
    cap = n if limit is None else min(limit, n)
    for parts in range(1, cap + 1):
        assignment = partition_search(n, parts, oracle.intersecting)
        if assignment is not None:
            return _solution_from_assignment(fam, oracle, assignment, optimal=True)
    # greedy fallback: first part whose join stays intersecting
    classes: list[frozenset] = []
    assignment = [-1] * n
    for i in range(n):
        for c, members in enumerate(classes):
            if oracle.intersecting(members | {i}):
                classes[c] = members | {i}
                assignment[i] = c
                break
        else:
            classes.append(frozenset({i}))
            assignment[i] = len(classes) - 1
    return _solution_from_assignment(fam, oracle, assignment, optimal=False)


def _solution_from_assignment(
    fam: Family, oracle: IntersectionOracle, assignment: Sequence[int], optimal: bool
) -> PiercingSolution:
    part_count = max(assignment) + 1
    points = []
    for c in range(part_count):
        members = [i for i, a in enumerate(assignment) if a == c]
        w = oracle.witness(members)
        if w is None:
            raise AssertionError("partition class lost its witness")
        points.append(w)
    sol = PiercingSolution(
        tuple(points), {i: a for i, a in enumerate(assignment)}, optimal
    )
    _verify_solution(fam, sol)
    return sol


def piercing_to_json(sol: PiercingSolution) -> dict:
    return {
        "points": [point_json(p) for p in sol.points],
        "assignment": {str(i): sol.assignment[i] for i in sorted(sol.assignment)},
        "optimal": sol.optimal,
    }


# ---------------------------------------------------------------------------
# derived structures

def build_GF(fam: Family, d: int, oracle: Optional[IntersectionOracle] = None) -> Hypergraph:
    """The (d+1)-uniform hypergraph whose edges are the (d+1)-subsets
    of the family with empty intersection."""
    if fam.dim != d:
        raise MalformedInputError(f"family dimension {fam.dim} != d = {d}")
    oracle = oracle or IntersectionOracle(fam)
    edges = [
        tup
        for tup in combinations(range(len(fam)), d + 1)
        if not oracle.intersecting(tup)
    ]
    return hypergraph(len(fam), edges, arity=d + 1)


def is_m_free(
    fam: Family,
    indices: Iterable[int],
    m: int,
    oracle: Optional[IntersectionOracle] = None,
) -> bool:
    """All indexed members compact and no m+1 of them intersecting."""
    if m < 1:
        raise MalformedInputError("need m >= 1")
    idx = sorted(set(indices))
    members = fam.select(idx)
    for s in members:
        if isinstance(s.rep, HRep) and is_empty(s):
            continue  # empty members are vacuously compact
        if not is_bounded(s):
            return False
    if len(idx) <= m:
        return True
    oracle = oracle or IntersectionOracle(fam)
    return not any(
        oracle.intersecting(sub) for sub in combinations(idx, m + 1)
    )


