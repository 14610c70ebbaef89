"""Finite-support sequence vectors and the bounded operators acting on them.

Every vector here is a truncated element of a sequence space: a sorted map
from positive indices to nonzero reals. Operators come in three flavours
(diagonal, functional, dense matrix) and share one `apply`/`operator_norm`
surface so the witness constructions never branch on the variant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import (
    IndexOutOfTruncation,
    PowerIterationStall,
    QualityNotMet,
    ZeroOperator,
)

DEFAULT_DIM = 4096
DEFAULT_SEED = 0
DEFAULT_MAX_ITER = 100_000

INF = math.inf


class SeqVector:
    """Immutable finite-support real sequence indexed from 1.

    Stored entries are never exactly zero, so two vectors are equal iff their
    entry maps are equal.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[int, float] | Iterable[tuple[int, float]] = ()):
        if isinstance(entries, SeqVector):
            entries = entries._entries
        items = entries.items() if isinstance(entries, Mapping) else entries
        clean = {}
        for i, v in items:
            i = int(i)
            if i < 1:
                raise ValueError(f"indices start at 1, got {i}")
            v = float(v)
            if not math.isfinite(v):
                raise ValueError(f"non-finite entry at index {i}")
            if v != 0.0:
                clean[i] = v
        self._entries = dict(sorted(clean.items()))

    @classmethod
    def basis(cls, n: int, scale: float = 1.0) -> SeqVector:
        return cls({n: scale})

    @classmethod
    def from_array(cls, values, start: int = 1) -> SeqVector:
        return cls((start + i, v) for i, v in enumerate(np.asarray(values, dtype=float)))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._entries)

    @property
    def max_index(self) -> int:
        return next(reversed(self._entries)) if self._entries else 0

    def items(self):
        return self._entries.items()

    def values(self):
        return self._entries.values()

    def __getitem__(self, i: int) -> float:
        return self._entries.get(i, 0.0)

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SeqVector):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    def __repr__(self) -> str:
        return f"SeqVector({self._entries!r})"

    def __add__(self, other: SeqVector) -> SeqVector:
        out = dict(self._entries)
        for i, v in other._entries.items():
            out[i] = out.get(i, 0.0) + v
        return SeqVector(out)

    def __neg__(self) -> SeqVector:
        return SeqVector({i: -v for i, v in self._entries.items()})

    def __sub__(self, other: SeqVector) -> SeqVector:
        return self + (-other)

    def __mul__(self, c: float) -> SeqVector:
        c = float(c)
        return SeqVector({i: c * v for i, v in self._entries.items()})

    __rmul__ = __mul__

    def __truediv__(self, c: float) -> SeqVector:
        return SeqVector({i: v / c for i, v in self._entries.items()})

    def dense(self, indices: Iterable[int]) -> np.ndarray:
        return np.array([self[i] for i in indices], dtype=float)

    def to_json(self) -> dict[str, float]:
        # repr-based float rendering in json round-trips binary64 exactly
        return {str(i): v for i, v in self._entries.items()}

    @classmethod
    def from_json(cls, obj: Mapping[str, float]) -> SeqVector:
        if not isinstance(obj, Mapping):
            raise ValueError("SeqVector JSON must be an object")
        return cls((int(k), float(v)) for k, v in obj.items())


def _l2(values: Iterable[float]) -> float:
    vals = [abs(v) for v in values]
    if not vals:
        return 0.0
    m = max(vals)
    if m == 0.0:
        return 0.0
    # power-of-two rescaling is exact, so the result stays monotone in each |v|
    e = math.frexp(m)[1]
    s = math.fsum(math.ldexp(v, -e) ** 2 for v in vals)
    return math.ldexp(math.sqrt(s), e)


def euclidean_norm(values: Iterable[float]) -> float:
    """Overflow-safe 2-norm of a plain iterable of reals."""
    return _l2(values)


def norm(v: SeqVector, p: Union[int, float] = 2) -> float:
    if p == 2:
        return _l2(v.values())
    if p == 1:
        return math.fsum(abs(x) for x in v.values())
    if p == INF:
        return max((abs(x) for x in v.values()), default=0.0)
    raise ValueError(f"p must be 1, 2 or inf, got {p!r}")


def inner(v: SeqVector, w: SeqVector) -> float:
    if len(w) < len(v):
        v, w = w, v
    return math.fsum(x * w[i] for i, x in v.items() if i in w._entries)


@dataclass(frozen=True)
class Diagonal:
    coeffs: SeqVector


@dataclass(frozen=True)
class Functional:
    rep: SeqVector


@dataclass(frozen=True)
class Matrix:
    """Dense operator on the first `dim` coordinates; row i gives output index i."""

    rows: tuple[SeqVector, ...]
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        for r in self.rows:
            if r.max_index > self.dim:
                raise IndexOutOfTruncation(r.max_index, self.dim)

    @classmethod
    def from_array(cls, a, dim: int | None = None) -> Matrix:
        a = np.atleast_2d(np.asarray(a, dtype=float))
        return cls(tuple(SeqVector.from_array(row) for row in a), dim or a.shape[1])

    def columns(self) -> list[int]:
        cols = set()
        for r in self.rows:
            cols.update(r.support)
        return sorted(cols)

    def dense(self, cols: list[int] | None = None) -> np.ndarray:
        cols = self.columns() if cols is None else cols
        return np.array([r.dense(cols) for r in self.rows], dtype=float).reshape(
            len(self.rows), len(cols)
        )


Operator = Union[Diagonal, Functional, Matrix]


@dataclass(frozen=True)
class NormResult:
    value: float
    method: str  # exact-diagonal | exact-functional | power-iteration
    residual: float = 0.0


def apply(T: Operator, v: SeqVector) -> SeqVector:
    if isinstance(T, Diagonal):
        return SeqVector({i: c * v[i] for i, c in T.coeffs.items() if i in v._entries})
    if isinstance(T, Functional):
        return SeqVector({1: inner(T.rep, v)})
    if isinstance(T, Matrix):
        if v.max_index > T.dim:
            raise IndexOutOfTruncation(v.max_index, T.dim)
        return SeqVector((i + 1, inner(row, v)) for i, row in enumerate(T.rows))
    raise TypeError(f"not an operator: {T!r}")


def _power_iteration(T: Matrix, tol: float, seed: int, max_iter: int):
    """Top singular pair of T via power iteration on the Gram matrix.

    Returns (sigma, right singular vector as SeqVector, final movement).
    """
    cols = T.columns()
    if not cols:
        return 0.0, SeqVector(), 0.0
    a = T.dense(cols)
    scale = float(np.max(np.abs(a)))
    if scale == 0.0:
        return 0.0, SeqVector(), 0.0
    # iterate on the rescaled matrix so the Gram product cannot overflow
    a = a / scale
    g = a.T @ a
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(len(cols))
    v /= np.linalg.norm(v)
    movement = INF
    for it in range(1, max_iter + 1):
        w = g @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # start landed in the kernel; restart from a fresh direction
            v = rng.standard_normal(len(cols))
            v /= np.linalg.norm(v)
            continue
        w /= nw
        movement = float(np.linalg.norm(w - v))
        v = w
        if movement < tol:
            break
    else:
        raise PowerIterationStall(movement, max_iter)
    sigma = float(np.linalg.norm(a @ v)) * scale
    return sigma, SeqVector(zip(cols, v)), movement


def operator_norm(
    T: Operator,
    tol: float = 1e-10,
    *,
    seed: int = DEFAULT_SEED,
    max_iter: int = DEFAULT_MAX_ITER,
) -> NormResult:
    if tol <= 0:
        raise ValueError("tol must be positive")
    if isinstance(T, Diagonal):
        return NormResult(norm(T.coeffs, INF), "exact-diagonal")
    if isinstance(T, Functional):
        # the sup over the unit ball is attained at rep/|rep|
        return NormResult(norm(T.rep, 2), "exact-functional")
    if isinstance(T, Matrix):
        sigma, _, movement = _power_iteration(T, tol, seed, max_iter)
        return NormResult(sigma, "power-iteration", movement)
    raise TypeError(f"not an operator: {T!r}")


def near_maximizer(
    T: Operator,
    quality: float = 0.5,
    tol: float = 1e-10,
    *,
    seed: int = DEFAULT_SEED,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SeqVector:
    """Unit vector x with |Tx| >= quality * |T|_op."""
    if not 0.0 < quality <= 1.0:
        raise ValueError("quality must lie in (0, 1]")
    if isinstance(T, Diagonal):
        op = norm(T.coeffs, INF)
        if op == 0.0:
            raise ZeroOperator("diagonal operator has no nonzero coefficient")
        i = next(i for i, c in T.coeffs.items() if abs(c) == op)
        return SeqVector.basis(i)
    if isinstance(T, Functional):
        op = norm(T.rep, 2)
        if op == 0.0:
            raise ZeroOperator("functional has zero representer")
        return T.rep / op
    if isinstance(T, Matrix):
        sigma, v, _ = _power_iteration(T, tol, seed, max_iter)
        if sigma == 0.0:
            raise ZeroOperator("matrix operator is zero")
        v = v / norm(v, 2)
        achieved = norm(apply(T, v), 2)
        if achieved < quality * sigma:
            raise QualityNotMet(achieved, quality * sigma)
        return v
    raise TypeError(f"not an operator: {T!r}")


def scale_operator(T: Operator, c: float) -> Operator:
    if isinstance(T, Diagonal):
        return Diagonal(T.coeffs * c)
    if isinstance(T, Functional):
        return Functional(T.rep * c)
    return Matrix(tuple(r * c for r in T.rows), T.dim)


def compose_functional(u: SeqVector, T: Matrix) -> Functional:
    """The functional x -> <u, Tx>, i.e. u^T T, as a representer."""
    acc: dict[int, float] = {}
    for i, row in enumerate(T.rows, start=1):
        ui = u[i]
        if ui == 0.0:
            continue
        for j, a in row.items():
            acc[j] = acc.get(j, 0.0) + ui * a
    return Functional(SeqVector(acc))


def operator_to_json(T: Operator) -> dict:
    if isinstance(T, Diagonal):
        return {"kind": "diagonal", "coeffs": T.coeffs.to_json()}
    if isinstance(T, Functional):
        return {"kind": "functional", "rep": T.rep.to_json()}
    return {"kind": "matrix", "dim": T.dim, "rows": [r.to_json() for r in T.rows]}


def operator_from_json(obj: Mapping) -> Operator:
    kind = obj.get("kind")
    if kind == "diagonal":
        return Diagonal(SeqVector.from_json(obj["coeffs"]))
    if kind == "functional":
        return Functional(SeqVector.from_json(obj["rep"]))
    if kind == "matrix":
        return Matrix(tuple(SeqVector.from_json(r) for r in obj["rows"]), int(obj["dim"]))
    raise ValueError(f"unknown operator kind {kind!r}")
