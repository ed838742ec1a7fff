"""Convex polyhedral sets in two exact representations, plus the
geometric primitives built on the rational LP engine.

H-representation: a finite intersection of closed halfspaces
    {x : normal . x <= offset}.
V-representation: conv(points) + cone(rays); always closed and, since
points must be nonempty, always a nonempty set.

Intersections of V-represented members are never materialized: every
query about them (membership, joint intersection, projected shadows,
minimal heights) is a single LP assembled from coefficient blocks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import EmptySetError, MalformedInputError
from .lp import LE, EQ, Constraint, LinearSystem, lp_feasible, lp_minimize
from .rational import (
    Matrix,
    Point,
    RatLike,
    dot,
    is_zero,
    mat_vec,
    point,
    point_json,
    rat,
    rat_str,
    vec_mat,
)


@dataclass(frozen=True)
class Halfspace:
    """{x : normal . x <= offset}. A zero normal is only legal when the
    constraint is vacuous (offset >= 0)."""

    normal: Point
    offset: Fraction

    def __post_init__(self):
        if is_zero(self.normal) and self.offset < 0:
            raise MalformedInputError("zero normal with negative offset")


def halfspace(normal: Iterable[RatLike], offset: RatLike) -> Halfspace:
    return Halfspace(point(normal), rat(offset))


@dataclass(frozen=True)
class HRep:
    halfspaces: tuple[Halfspace, ...]


@dataclass(frozen=True)
class VRep:
    points: tuple[Point, ...]
    rays: tuple[Point, ...] = ()

    def __post_init__(self):
        if not self.points:
            raise MalformedInputError("V-representation needs at least one point")
        for r in self.rays:
            if is_zero(r):
                raise MalformedInputError("zero ray in V-representation")


Rep = Union[HRep, VRep]


@dataclass(frozen=True)
class ConvexSet:
    label: str
    dim: int
    rep: Rep
    cone: bool = False  # marks recession cones returned by recession_cone()

    def __post_init__(self):
        if not isinstance(self.label, str) or not self.label:
            raise MalformedInputError("set label must be a nonempty string")
        if self.dim < 1:
            raise MalformedInputError("dimension must be >= 1")
        if isinstance(self.rep, VRep):
            for p in self.rep.points + self.rep.rays:
                if len(p) != self.dim:
                    raise MalformedInputError(
                        f"{self.label}: generator arity != dim {self.dim}"
                    )
        else:
            for h in self.rep.halfspaces:
                if len(h.normal) != self.dim:
                    raise MalformedInputError(
                        f"{self.label}: halfspace arity != dim {self.dim}"
                    )

    @property
    def is_vrep(self) -> bool:
        return isinstance(self.rep, VRep)


def vrep_set(
    label: str,
    points: Iterable[Iterable[RatLike]],
    rays: Iterable[Iterable[RatLike]] = (),
    cone: bool = False,
) -> ConvexSet:
    pts = tuple(point(p) for p in points)
    rds = tuple(point(r) for r in rays)
    if not pts:
        raise MalformedInputError("V-representation needs at least one point")
    return ConvexSet(label, len(pts[0]), VRep(pts, rds), cone)


def hrep_set(
    label: str,
    halfspaces: Iterable[tuple[Iterable[RatLike], RatLike]],
    dim: Optional[int] = None,
    cone: bool = False,
) -> ConvexSet:
    hs = tuple(Halfspace(point(n), rat(b)) for n, b in halfspaces)
    if dim is None:
        if not hs:
            raise MalformedInputError("dimension required for empty H-rep")
        dim = len(hs[0].normal)
    return ConvexSet(label, dim, HRep(hs), cone)


@dataclass(frozen=True)
class Family:
    """A finite ordered family of convex sets in a shared ambient space."""

    dim: int
    sets: tuple[ConvexSet, ...]

    def __post_init__(self):
        labels = set()
        for s in self.sets:
            if s.dim != self.dim:
                raise MalformedInputError(
                    f"{s.label}: dim {s.dim} != family dim {self.dim}"
                )
            if s.label in labels:
                raise MalformedInputError(f"duplicate label {s.label!r}")
            labels.add(s.label)

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.sets)

    def index_of(self, label: str) -> int:
        for i, s in enumerate(self.sets):
            if s.label == label:
                return i
        raise MalformedInputError(f"no set labeled {label!r}")

    def select(self, indices: Iterable[int]) -> tuple[ConvexSet, ...]:
        out = []
        for i in indices:
            if not 0 <= i < len(self.sets):
                raise MalformedInputError(f"set index {i} out of range")
            out.append(self.sets[i])
        return tuple(out)

    def subfamily(self, indices: Iterable[int]) -> "Family":
        return Family(self.dim, self.select(indices))


def family(sets: Sequence[ConvexSet]) -> Family:
    if not sets:
        raise MalformedInputError("empty family")
    return Family(sets[0].dim, tuple(sets))


# ---------------------------------------------------------------------------
# LP assembly
#
# Coordinates passed to _member_rows are (var_index, constant) pairs: the
# i-th ambient coordinate equals x[var] + constant, with var possibly None
# for a fully pinned coordinate. This one helper covers membership, joint
# intersection, lifted projections, and minimal-height queries.

Coord = tuple[Optional[int], Fraction]


class _SysBuilder:
    def __init__(self):
        self.nvars = 0
        self.nonneg: set[int] = set()
        self.rows: list[tuple[str, dict[int, Fraction], Fraction]] = []

    def var(self, nonneg: bool = False) -> int:
        i = self.nvars
        self.nvars += 1
        if nonneg:
            self.nonneg.add(i)
        return i

    def vars(self, k: int, nonneg: bool = False) -> list[int]:
        return [self.var(nonneg) for _ in range(k)]

    def add(self, relation: str, terms: dict[int, Fraction], rhs: Fraction):
        self.rows.append((relation, terms, rhs))

    def system(self) -> LinearSystem:
        cons = []
        for relation, terms, rhs in self.rows:
            coeffs = [Fraction(0)] * self.nvars
            for j, a in terms.items():
                coeffs[j] = coeffs[j] + a
            cons.append(Constraint(tuple(coeffs), relation, rhs))
        return LinearSystem(self.nvars, tuple(cons), frozenset(self.nonneg))


def _member_rows(b: _SysBuilder, s: ConvexSet, coords: Sequence[Coord]) -> None:
    if isinstance(s.rep, HRep):
        for h in s.rep.halfspaces:
            terms: dict[int, Fraction] = {}
            rhs = h.offset
            for i, n_i in enumerate(h.normal):
                if n_i == 0:
                    continue
                var, const = coords[i]
                rhs -= n_i * const
                if var is not None:
                    terms[var] = terms.get(var, Fraction(0)) + n_i
            b.add(LE, terms, rhs)
        return
    lam = b.vars(len(s.rep.points), nonneg=True)
    mu = b.vars(len(s.rep.rays), nonneg=True)
    for i in range(s.dim):
        terms = {}
        for k, p in enumerate(s.rep.points):
            if p[i]:
                terms[lam[k]] = p[i]
        for k, r in enumerate(s.rep.rays):
            if r[i]:
                terms[mu[k]] = r[i]
        var, const = coords[i]
        if var is not None:
            terms[var] = terms.get(var, Fraction(0)) - Fraction(1)
        b.add(EQ, terms, const)
    b.add(EQ, {j: Fraction(1) for j in lam}, Fraction(1))


def _free_coords(b: _SysBuilder, d: int) -> tuple[list[int], list[Coord]]:
    xs = b.vars(d)
    return xs, [(x, Fraction(0)) for x in xs]


# ---------------------------------------------------------------------------
# primitives

def contains_point(s: ConvexSet, x: Sequence[RatLike]) -> bool:
    """Exact membership. Direct evaluation for H-reps, one LP for V-reps."""
    xp = point(x)
    if len(xp) != s.dim:
        raise MalformedInputError(f"point arity {len(xp)} != dim {s.dim}")
    if isinstance(s.rep, HRep):
        return all(dot(h.normal, xp) <= h.offset for h in s.rep.halfspaces)
    b = _SysBuilder()
    _member_rows(b, s, [(None, c) for c in xp])
    ok, _ = lp_feasible(b.system())
    return ok


def is_empty(s: ConvexSet) -> bool:
    if isinstance(s.rep, VRep):
        return False
    b = _SysBuilder()
    _, coords = _free_coords(b, s.dim)
    _member_rows(b, s, coords)
    ok, _ = lp_feasible(b.system())
    return not ok


def some_point(s: ConvexSet) -> Point:
    """A point of the set: the first generator of a V-rep, an LP witness
    for an H-rep. Raises EmptySetError when there is none."""
    if isinstance(s.rep, VRep):
        return s.rep.points[0]
    b = _SysBuilder()
    xs, coords = _free_coords(b, s.dim)
    _member_rows(b, s, coords)
    ok, sol = lp_feasible(b.system())
    if not ok:
        raise EmptySetError(f"set {s.label!r} is empty")
    return tuple(sol[j] for j in xs)


def intersect_nonempty(
    fam: Family, indices: Iterable[int]
) -> tuple[bool, Optional[Point]]:
    """Joint intersection of the indexed members via a single LP.

    The witness returned on success is re-checked against every indexed
    member with contains_point before being handed out.
    """
    idx = list(indices)
    if not idx:
        raise MalformedInputError("empty index list")
    members = fam.select(idx)
    b = _SysBuilder()
    xs, coords = _free_coords(b, fam.dim)
    for s in members:
        _member_rows(b, s, coords)
    ok, sol = lp_feasible(b.system())
    if not ok:
        return False, None
    witness = tuple(sol[j] for j in xs)
    for s in members:
        if not contains_point(s, witness):
            raise AssertionError(
                f"joint LP witness escaped {s.label}; solver invariant broken"
            )
    return True, witness


def recession_cone(s: ConvexSet) -> ConvexSet:
    """The set's recession cone, marked cone=True.

    H-rep: same normals with offsets zeroed (requires nonemptiness,
    checked by LP). V-rep: the cone generated by the rays.
    """
    if isinstance(s.rep, VRep):
        origin = (Fraction(0),) * s.dim
        return ConvexSet(f"rc({s.label})", s.dim, VRep((origin,), s.rep.rays), True)
    if is_empty(s):
        raise EmptySetError(f"recession cone of empty set {s.label!r}")
    hs = tuple(
        Halfspace(h.normal, Fraction(0))
        for h in s.rep.halfspaces
        if not is_zero(h.normal)
    )
    return ConvexSet(f"rc({s.label})", s.dim, HRep(hs), True)


def direction_in_recession_cone(s: ConvexSet, v: Sequence[RatLike]) -> bool:
    """Does the set recede along v (exactly)?"""
    vp = point(v)
    if len(vp) != s.dim:
        raise MalformedInputError("direction arity mismatch")
    if is_zero(vp):
        return True
    if isinstance(s.rep, HRep):
        return all(dot(h.normal, vp) <= 0 for h in s.rep.halfspaces)
    b = _SysBuilder()
    mu = b.vars(len(s.rep.rays), nonneg=True)
    for i in range(s.dim):
        terms = {mu[k]: r[i] for k, r in enumerate(s.rep.rays) if r[i]}
        b.add(EQ, terms, vp[i])
    ok, _ = lp_feasible(b.system())
    return ok


def _cone_member_rows(b: _SysBuilder, s: ConvexSet, vcoords: Sequence[Coord]) -> None:
    """Constrain the vcoords vector to lie in s's recession cone."""
    if isinstance(s.rep, HRep):
        cone = ConvexSet(s.label, s.dim, HRep(tuple(
            Halfspace(h.normal, Fraction(0))
            for h in s.rep.halfspaces if not is_zero(h.normal)
        )), True)
        _member_rows(b, cone, vcoords)
        return
    mu = b.vars(len(s.rep.rays), nonneg=True)
    for i in range(s.dim):
        terms: dict[int, Fraction] = {}
        for k, r in enumerate(s.rep.rays):
            if r[i]:
                terms[mu[k]] = r[i]
        var, const = vcoords[i]
        if var is not None:
            terms[var] = terms.get(var, Fraction(0)) - Fraction(1)
        b.add(EQ, terms, const)


def common_recession_direction(fam: Family) -> Optional[Point]:
    """Some nonzero v in every member's recession cone, or None.

    Probes the 2*dim signed coordinate functionals in ascending
    coordinate order, positive sign first; each probe is one LP, so the
    answer and the returned v are deterministic.
    """
    for axis in range(fam.dim):
        for sign in (1, -1):
            b = _SysBuilder()
            vs, vcoords = _free_coords(b, fam.dim)
            for s in fam.sets:
                _cone_member_rows(b, s, vcoords)
            b.add(EQ, {vs[axis]: Fraction(1)}, Fraction(sign))
            ok, sol = lp_feasible(b.system())
            if ok:
                return tuple(sol[j] for j in vs)
    return None


def is_bounded(s: ConvexSet) -> bool:
    """True iff the set's recession cone is {0}. H-rep callers must pass
    a nonempty set (the cone probes are meaningless otherwise)."""
    if isinstance(s.rep, VRep):
        return not s.rep.rays
    for axis in range(s.dim):
        for sign in (1, -1):
            b = _SysBuilder()
            vs, vcoords = _free_coords(b, s.dim)
            _cone_member_rows(b, s, vcoords)
            b.add(EQ, {vs[axis]: Fraction(1)}, Fraction(sign))
            ok, _ = lp_feasible(b.system())
            if ok:
                return False
    return True


# ---------------------------------------------------------------------------
# projection

def _canonical_row(coeffs: tuple[Fraction, ...], off: Fraction):
    lead = next((a for a in coeffs if a != 0), None)
    if lead is None:
        return None  # vacuous or infeasible, caller inspects offset
    scale = Fraction(1) / abs(lead)
    return tuple(a * scale for a in coeffs), off * scale


def _empty_hrep(dim: int) -> HRep:
    e1 = tuple(Fraction(1 if i == 0 else 0) for i in range(dim))
    neg = tuple(-c for c in e1)
    return HRep((Halfspace(e1, Fraction(-1)), Halfspace(neg, Fraction(0))))


def project_drop_last(s: ConvexSet) -> ConvexSet:
    """Orthogonal projection forgetting the last coordinate.

    V-rep: generator-wise (the image of conv+cone is conv+cone of the
    images). H-rep: one step of Fourier-Motzkin elimination with
    structural deduplication after canonical rescaling; no LP-based
    redundancy pruning here.
    """
    if s.dim < 2:
        raise MalformedInputError("cannot project a 1-dimensional ambient space")
    d = s.dim
    label = f"proj({s.label})"
    if isinstance(s.rep, VRep):
        pts: list[Point] = []
        for p in s.rep.points:
            q = p[: d - 1]
            if q not in pts:
                pts.append(q)
        rays: list[Point] = []
        for r in s.rep.rays:
            q = r[: d - 1]
            if not is_zero(q) and q not in rays:
                rays.append(q)
        return ConvexSet(label, d - 1, VRep(tuple(pts), tuple(rays)), s.cone)

    keep: list[tuple[tuple[Fraction, ...], Fraction]] = []
    pos: list[tuple[tuple[Fraction, ...], Fraction, Fraction]] = []
    neg: list[tuple[tuple[Fraction, ...], Fraction, Fraction]] = []
    for h in s.rep.halfspaces:
        c = h.normal[d - 1]
        head = h.normal[: d - 1]
        if c == 0:
            keep.append((head, h.offset))
        elif c > 0:
            pos.append((head, h.offset, c))
        else:
            neg.append((head, h.offset, c))
    derived = list(keep)
    for np_, bp, cp in pos:
        for nn, bn, cn in neg:
            coeffs = tuple((-cn) * a + cp * b for a, b in zip(np_, nn))
            derived.append((coeffs, (-cn) * bp + cp * bn))

    seen = set()
    rows: list[Halfspace] = []
    for coeffs, off in derived:
        canon = _canonical_row(coeffs, off)
        if canon is None:
            if off < 0:  # 0 <= negative: the projection is empty
                return ConvexSet(label, d - 1, _empty_hrep(d - 1), s.cone)
            continue
        if canon not in seen:
            seen.add(canon)
            rows.append(Halfspace(*canon))
    return ConvexSet(label, d - 1, HRep(tuple(rows)), s.cone)


def convex_hull_union(fam: Family, indices: Iterable[int]) -> ConvexSet:
    """conv of the union of V-represented members: concatenate generators."""
    members = fam.select(list(indices))
    if not members:
        raise MalformedInputError("empty index list")
    pts: list[Point] = []
    rays: list[Point] = []
    for s in members:
        if not isinstance(s.rep, VRep):
            raise MalformedInputError(
                f"convex_hull_union needs V-representations; {s.label} is H-rep"
            )
        for p in s.rep.points:
            if p not in pts:
                pts.append(p)
        for r in s.rep.rays:
            if r not in rays:
                rays.append(r)
    label = "hull(" + ",".join(s.label for s in members) + ")"
    return ConvexSet(label, members[0].dim, VRep(tuple(pts), tuple(rays)))


# ---------------------------------------------------------------------------
# lifted projections (shadows of box-truncated members)

def _require_compact_box(box: ConvexSet) -> None:
    if not isinstance(box.rep, VRep) or box.rep.rays:
        raise MalformedInputError("box must be a compact V-representation")


def lifted_projection_witness(
    sets: Sequence[ConvexSet], box: ConvexSet
) -> tuple[bool, Optional[Point]]:
    """Common point of the last-coordinate shadows of {A ∩ box : A in sets}.

    One LP: a shared x in R^(d-1) plus an independent height t_j per
    member, with (x, t_j) constrained into A_j and into the box.
    Returns (nonempty, shared x or None).
    """
    _require_compact_box(box)
    if not sets:
        raise MalformedInputError("no sets given")
    d = box.dim
    for s in sets:
        if s.dim != d:
            raise MalformedInputError("dimension mismatch with box")
    if d < 2:
        raise MalformedInputError("need ambient dimension >= 2")
    b = _SysBuilder()
    xs = b.vars(d - 1)
    for s in sets:
        t = b.var()
        coords: list[Coord] = [(x, Fraction(0)) for x in xs]
        coords.append((t, Fraction(0)))
        _member_rows(b, s, coords)
        _member_rows(b, box, coords)
    ok, sol = lp_feasible(b.system())
    if not ok:
        return False, None
    return True, tuple(sol[j] for j in xs)


def lifted_projection_intersect(
    fam: Family, indices: Iterable[int], box: ConvexSet
) -> bool:
    ok, _ = lifted_projection_witness(fam.select(list(indices)), box)
    return ok


def min_height_in_box(
    s: ConvexSet, box: ConvexSet, x: Sequence[RatLike]
) -> Optional[Fraction]:
    """Least t with (x, t) in s ∩ box, or None when that slice is empty.

    The box is compact, so the minimum exists whenever the slice is
    nonempty; one small LP with t as the only interesting variable.
    """
    _require_compact_box(box)
    xp = point(x)
    if len(xp) != s.dim - 1:
        raise MalformedInputError("base point arity must be dim-1")
    b = _SysBuilder()
    t = b.var()
    coords: list[Coord] = [(None, c) for c in xp]
    coords.append((t, Fraction(0)))
    _member_rows(b, s, coords)
    _member_rows(b, box, coords)
    objective = [Fraction(0)] * b.nvars
    objective[t] = Fraction(1)
    status, _, val = lp_minimize(b.system(), objective)
    if status == "infeasible":
        return None
    if status == "unbounded":  # impossible with a compact box
        raise AssertionError("unbounded height inside a compact box")
    return val


# ---------------------------------------------------------------------------
# exact linear coordinate changes

def change_coordinates(s: ConvexSet, forward: Matrix, inverse: Matrix) -> ConvexSet:
    """Apply y = forward . x to the set (inverse must be forward^-1).

    V-reps map generator-wise through `forward`; H-rep normals pull back
    through `inverse` (n . x <= b becomes (n . inverse) . y <= b).
    """
    if isinstance(s.rep, VRep):
        rep: Rep = VRep(
            tuple(mat_vec(forward, p) for p in s.rep.points),
            tuple(mat_vec(forward, r) for r in s.rep.rays),
        )
    else:
        rep = HRep(tuple(
            Halfspace(vec_mat(h.normal, inverse), h.offset)
            for h in s.rep.halfspaces
        ))
    return ConvexSet(s.label, s.dim, rep, s.cone)


def change_coordinates_family(fam: Family, forward: Matrix, inverse: Matrix) -> Family:
    return Family(fam.dim, tuple(
        change_coordinates(s, forward, inverse) for s in fam.sets
    ))


# ---------------------------------------------------------------------------
# JSON

def set_to_json(s: ConvexSet) -> dict:
    out: dict = {"label": s.label, "dim": s.dim}
    if isinstance(s.rep, VRep):
        out["vrep"] = {
            "points": [point_json(p) for p in s.rep.points],
            "rays": [point_json(r) for r in s.rep.rays],
        }
    else:
        out["hrep"] = [
            {"normal": point_json(h.normal), "offset": rat_str(h.offset)}
            for h in s.rep.halfspaces
        ]
    return out


def set_from_json(obj) -> ConvexSet:
    if not isinstance(obj, dict):
        raise MalformedInputError("set must be a JSON object")
    try:
        label = obj["label"]
        dim = obj["dim"]
    except KeyError as exc:
        raise MalformedInputError(f"set missing key {exc}") from exc
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise MalformedInputError("dim must be an integer")
    has_v = "vrep" in obj
    has_h = "hrep" in obj
    if has_v == has_h:
        raise MalformedInputError("set needs exactly one of vrep/hrep")
    if has_v:
        v = obj["vrep"]
        if not isinstance(v, dict) or "points" not in v:
            raise MalformedInputError("vrep needs a points list")
        pts = [point(p) for p in v["points"]]
        rays = [point(r) for r in v.get("rays", [])]
        return ConvexSet(label, dim, VRep(tuple(pts), tuple(rays)))
    hs = []
    for h in obj["hrep"]:
        if not isinstance(h, dict) or "normal" not in h or "offset" not in h:
            raise MalformedInputError("halfspace needs normal and offset")
        hs.append(Halfspace(point(h["normal"]), rat(h["offset"])))
    return ConvexSet(label, dim, HRep(tuple(hs)))


def family_to_json(fam: Family) -> dict:
    return {"dimension": fam.dim, "sets": [set_to_json(s) for s in fam.sets]}


def family_from_json(obj) -> Family:
    if not isinstance(obj, dict) or "dimension" not in obj or "sets" not in obj:
        raise MalformedInputError("family needs dimension and sets")
    dim = obj["dimension"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise MalformedInputError("dimension must be an integer")
    sets = tuple(set_from_json(s) for s in obj["sets"])
    return Family(dim, sets)
