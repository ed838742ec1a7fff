"""Finite hypergraphs with exact transversal (vertex cover) numbers.

Edges are canonicalized to sorted tuples, with the edge list sorted by
(size, lexicographic order); the branch-and-bound always expands the
first uncovered edge in that order, so returned covers are deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .bounds import catalog_lookup
from .errors import CatalogError, MalformedInputError, SearchLimitError


@dataclass(frozen=True)
class Hypergraph:
    n: int
    edges: tuple[tuple[int, ...], ...]
    arity: Optional[int] = None

    def __post_init__(self):
        if self.n < 0:
            raise MalformedInputError("vertex count must be >= 0")
        seen = set()
        for e in self.edges:
            if not e:
                raise MalformedInputError("empty edge")
            if list(e) != sorted(set(e)):
                raise MalformedInputError(f"edge {e} is not sorted and distinct")
            if e[0] < 0 or e[-1] >= self.n:
                raise MalformedInputError(f"edge {e} out of vertex range")
            if e in seen:
                raise MalformedInputError(f"duplicate edge {e}")
            seen.add(e)
            if self.arity is not None and len(e) != self.arity:
                raise MalformedInputError(
                    f"edge {e} has size {len(e)}, expected arity {self.arity}"
                )


def hypergraph(
    n: int, edges: Iterable[Iterable[int]], arity: Optional[int] = None
) -> Hypergraph:
    """Canonicalizing constructor: sorts vertices within edges, dedupes,
    sorts the edge list by (size, lex). Derives arity when uniform."""
    canon = sorted({tuple(sorted(set(e))) for e in edges}, key=lambda e: (len(e), e))
    if arity is None and canon and len({len(e) for e in canon}) == 1:
        arity = len(canon[0])
    return Hypergraph(n, tuple(canon), arity)


def _cover_dfs(edges, budget: int, chosen: set) -> Optional[set]:
    uncovered = next((e for e in edges if not chosen.intersection(e)), None)
    if uncovered is None:
        return set(chosen)
    if budget == 0:
        return None
    for v in uncovered:
        chosen.add(v)
        found = _cover_dfs(edges, budget - 1, chosen)
        chosen.discard(v)
        if found is not None:
            return found
    return None


def transversal_number(
    h: Hypergraph, limit: Optional[int] = None
) -> tuple[int, tuple[int, ...]]:
    """Exact minimum transversal via iterative deepening.

    Returns (beta, cover). With `limit` set, raises SearchLimitError
    instead of searching past covers of that size.
    """
    if not h.edges:
        return 0, ()
    cap = h.n if limit is None else min(limit, h.n)
    for k in range(1, cap + 1):
        cover = _cover_dfs(h.edges, k, set())
        if cover is not None:
            return k, tuple(sorted(cover))
    if limit is not None and limit < h.n:
        raise SearchLimitError(f"transversal number exceeds limit {limit}")
    raise MalformedInputError("unsatisfiable hypergraph")  # unreachable: edges are nonempty


def induced_edges(h: Hypergraph, vertices: Iterable[int]) -> tuple[tuple[int, ...], ...]:
    vs = set(vertices)
    return tuple(e for e in h.edges if vs.issuperset(e))


def verify_eg_equivalence(
    h: Hypergraph, k: int, eta_value: int
) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Local-to-global transversal law on one hypergraph.

    Compares beta(h) <= k against "every induced subgraph on
    min(eta_value, n) vertices has beta <= k" (induced transversal
    numbers are monotone in the vertex set, so the largest size
    suffices). eta_value must match the exact catalog entry for
    (arity, k+1). Returns (consistent, counterwitness).
    """
    if h.arity is None:
        raise MalformedInputError("uniform hypergraph required")
    if k < 0:
        raise MalformedInputError("k must be >= 0")
    entry = catalog_lookup("eta", (h.arity, k + 1))
    if entry is None or entry.kind != "exact":
        raise CatalogError(f"no exact eta({h.arity},{k + 1}) catalog entry")
    if entry.value != eta_value:
        raise CatalogError(
            f"eta({h.arity},{k + 1}) = {entry.value} in catalog, got {eta_value}"
        )

    global_ok = _beta_at_most(h.edges, k)
    size = min(eta_value, h.n)
    local_witness = None
    for vs in combinations(range(h.n), size):
        if not _beta_at_most(induced_edges(h, vs), k):
            local_witness = vs
            break
    local_ok = local_witness is None
    if global_ok == local_ok:
        return True, None
    if local_witness is not None:
        return False, local_witness
    return False, tuple(range(h.n))


def _beta_at_most(edges, k: int) -> bool:
    if not edges:
        return True
    return _cover_dfs(edges, k, set()) is not None


def hypergraph_to_json(h: Hypergraph) -> dict:
    return {"n": h.n, "edges": [list(e) for e in h.edges]}


def hypergraph_from_json(obj) -> Hypergraph:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise MalformedInputError("hypergraph needs n and edges")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise MalformedInputError("n must be a nonnegative integer")
    edges = obj["edges"]
    if not isinstance(edges, list):
        raise MalformedInputError("edges must be a list")
    for e in edges:
        if not isinstance(e, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in e
        ):
            raise MalformedInputError(f"edge {e} must be a list of integers")
    return hypergraph(n, edges)
