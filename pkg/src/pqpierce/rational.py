"""Exact rational scalars, points, and matrices.

Everything in this package computes over Python Fractions: arbitrary
precision, automatically normalized, no floating point anywhere. Points
are plain tuples of Fractions so they hash, compare, and serialize
without ceremony.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import MalformedInputError

Point = tuple[Fraction, ...]
Matrix = tuple[Point, ...]

RatLike = Union[int, str, Fraction]

_RAT_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def rat(value: RatLike) -> Fraction:
    """Parse one exact rational: an int, a Fraction, or 'p' / 'p/q' text.

    Floats are rejected outright (nothing in this package tolerates
    rounding), as is a zero denominator.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise MalformedInputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RAT_RE.match(text):
            raise MalformedInputError(f"not a rational literal: {value!r}")
        if "/" in text:
            num, den = text.split("/")
            if int(den) == 0:
                raise MalformedInputError(f"zero denominator: {value!r}")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    raise MalformedInputError(f"not a rational: {value!r}")


def rat_str(value: Fraction) -> Union[int, str]:
    """Serialize a Fraction: bare int when integral, 'p/q' text otherwise."""
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def point(values: Iterable[RatLike]) -> Point:
    return tuple(rat(v) for v in values)


def point_json(p: Point) -> list:
    return [rat_str(c) for c in p]


def zeros(dim: int) -> Point:
    return (Fraction(0),) * dim


def unit(dim: int, axis: int) -> Point:
    if not 0 <= axis < dim:
        raise MalformedInputError(f"axis {axis} out of range for dim {dim}")
    return tuple(Fraction(1 if i == axis else 0) for i in range(dim))


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise MalformedInputError(f"dimension mismatch: {len(u)} vs {len(v)}")
    total = Fraction(0)
    for a, b in zip(u, v):
        total += a * b
    return total


def vadd(u: Point, v: Point) -> Point:
    if len(u) != len(v):
        raise MalformedInputError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Point, v: Point) -> Point:
    if len(u) != len(v):
        raise MalformedInputError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return tuple(a - b for a, b in zip(u, v))


def vscale(c: Fraction, u: Point) -> Point:
    return tuple(c * a for a in u)


def is_zero(u: Point) -> bool:
    return all(a == 0 for a in u)


def matrix(rows: Iterable[Iterable[RatLike]]) -> Matrix:
    out = tuple(point(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise MalformedInputError("ragged matrix")
    return out


def mat_vec(m: Matrix, x: Point) -> Point:
    """m @ x for a row-major matrix."""
    return tuple(dot(row, x) for row in m)


def vec_mat(x: Point, m: Matrix) -> Point:
    """x @ m (row vector times row-major matrix)."""
    if len(m) != len(x):
        raise MalformedInputError("dimension mismatch in vec_mat")
    cols = len(m[0]) if m else 0
    return tuple(
        sum((x[i] * m[i][j] for i in range(len(x))), Fraction(0))
        for j in range(cols)
    )


def transpose(m: Matrix) -> Matrix:
    if not m:
        return ()
    return tuple(tuple(m[i][j] for i in range(len(m))) for j in range(len(m[0])))
