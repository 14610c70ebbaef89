"""Continuous functionals that witness unboundedness of a set in l2.

A sampled set S is turned into the functional family {<s, .> : s in S} on the
dual space; the gliding-hump point built for that family is the representer y
of a functional whose values |<s_{n_k}, y>| climb without bound along a
subsequence. Also here: the coordinate-projection bound for finite samples in
R^d and the explicit diagonal-set construction with representer 1/k.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .certificate import Certificate, Claim, digest
from .core import DEFAULT_SEED, Functional, SeqVector, euclidean_norm, inner, norm
from .errors import SampleExhausted
from .hump import COMPLETENESS_NOTE, FamilySpec, build_witness, hump_claims, weight

BASEL = math.pi**2 / 6.0


@dataclass(frozen=True)
class SetSample:
    elements: tuple[SeqVector, ...]
    norms: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        els = tuple(self.elements)
        if not els:
            raise ValueError("set sample must be nonempty")
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "norms", tuple(norm(s, 2) for s in els))

    def __len__(self) -> int:
        return len(self.elements)

    def to_json(self) -> dict:
        return {"elements": [s.to_json() for s in self.elements]}

    @classmethod
    def from_json(cls, obj: dict) -> SetSample:
        return cls(tuple(SeqVector.from_json(s) for s in obj["elements"]))

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> SetSample:
        """The set {x_n e_n}."""
        return cls(tuple(SeqVector.basis(n, x) for n, x in enumerate(values, start=1)))


@dataclass(frozen=True)
class DualWitness:
    rep: SeqVector
    subsequence: tuple[int, ...]
    values: tuple[float, ...]
    norms: tuple[float, ...]

    @property
    def rep_norm(self) -> float:
        return norm(self.rep, 2)

    def to_json(self) -> dict:
        return {
            "rep": self.rep.to_json(),
            "subsequence": list(self.subsequence),
            "values": list(self.values),
            "norms": list(self.norms),
        }

    @classmethod
    def from_json(cls, obj: dict) -> DualWitness:
        return cls(
            SeqVector.from_json(obj["rep"]),
            tuple(int(i) for i in obj["subsequence"]),
            tuple(float(v) for v in obj["values"]),
            tuple(float(v) for v in obj["norms"]),
        )


def _monotone_claims(label: str, seq: Sequence[float]) -> list[Claim]:
    return [
        Claim(f"k={k}: {label} strictly increase", seq[k], ">", seq[k - 1], 0.0)
        for k in range(1, len(seq))
    ]


def dual_claims(sample: SetSample, w: DualWitness) -> list[Claim]:
    claims = []
    values = [abs(inner(sample.elements[i - 1], w.rep)) for i in w.subsequence]
    norms = [norm(sample.elements[i - 1], 2) for i in w.subsequence]
    for k, (v, s, sv, sn) in enumerate(zip(values, norms, w.values, w.norms), start=1):
        claims += [
            Claim(f"k={k}: stored value reproduces |<s, y>|", abs(sv - v), "<=", 1e-9 * v, 0.0),
            Claim(f"k={k}: stored norm reproduces |s|", abs(sn - s), "<=", 1e-9 * s, 0.0),
        ]
    claims += _monotone_claims("values |<s_(n_k), y>|", values)
    claims += _monotone_claims("norms |s_(n_k)|", norms)
    claims.append(Claim("representer norm is finite", w.rep_norm, "<=", sys.float_info.max, 0.0))
    return claims


def dual_witness(
    sample: SetSample,
    depth: int = 2,
    tol: float = 1e-10,
    *,
    seed: int = DEFAULT_SEED,
) -> tuple[DualWitness, Certificate]:
    """Functional on l2 whose values grow along a subsequence of the sample.

    The sample's elements act on l2 (identified with its dual) through the
    inner product, and |<s, .>|_op = |s|, so the hump construction on that
    family lands its point directly on the representer.
    """
    family = FamilySpec(tuple(Functional(s) for s in sample.elements))
    hw, _ = build_witness(family, depth, tol, seed=seed)
    w = DualWitness(
        rep=hw.point,
        subsequence=hw.selected,
        values=tuple(r.image_norm for r in hw.ledger),
        norms=tuple(r.op_norm for r in hw.ledger),
    )
    claims = dual_claims(sample, w)
    for k, (v, s) in enumerate(zip(w.values, w.norms), start=1):
        claims.append(Claim(f"k={k}: value >= 1/6 4^-k |s_(n_k)|", v, ">=", weight(k) * s / 6.0))
    claims += hump_claims(family, hw, tol, seed=seed)
    cert = Certificate(
        "dual",
        tuple(claims),
        digest({"sample": sample.to_json(), "depth": depth}),
        (COMPLETENESS_NOTE,),
    )
    return w, cert


def diagonal_dual_witness(x_values: Sequence[float], count: int) -> DualWitness:
    """Picks n_1 < n_2 < ... with |x_{n_k}| >= k^2 and |x_{n_k}|/k strictly
    increasing, and puts weight 1/k at index n_k.

    The functional <., y> then takes the value |x_{n_k}|/k >= k on x_{n_k} e_{n_k},
    while |y|^2 <= sum 1/k^2.
    """
    if count < 1:
        raise ValueError("count must be positive")
    xs = [abs(float(x)) for x in x_values]
    for a, b in zip(xs, xs[1:]):
        if not b > a:
            raise ValueError("values must be strictly increasing in absolute value")
    picks: list[int] = []
    values: list[float] = []
    n = 0
    for k in range(1, count + 1):
        prev = values[-1] if values else -math.inf
        while n < len(xs) and not (xs[n] >= k * k and xs[n] / k > prev):
            n += 1
        if n == len(xs):
            raise SampleExhausted(k)
        picks.append(n + 1)
        values.append(xs[n] / k)
        n += 1
    rep = SeqVector({i: 1.0 / k for k, i in enumerate(picks, start=1)})
    return DualWitness(rep, tuple(picks), tuple(values), tuple(xs[i - 1] for i in picks))


def diagonal_certificate(x_values: Sequence[float], w: DualWitness) -> Certificate:
    sample = SetSample.diagonal(x_values)
    claims = dual_claims(sample, w)
    claims += [
        Claim(f"k={k}: value >= k", v, ">=", float(k), 0.0)
        for k, v in enumerate(w.values, start=1)
    ]
    claims.append(Claim("|y|^2 <= pi^2/6", w.rep_norm**2, "<=", BASEL))
    return Certificate(
        "dual",
        tuple(claims),
        digest({"diagonal": [float(x) for x in x_values], "count": len(w.subsequence)}),
    )


@dataclass(frozen=True)
class CoordinateBound:
    index: int
    bounds: tuple[float, ...]
    norm_bound: float


def coordinate_unbounded_direction(points: Sequence[Sequence[float]]) -> CoordinateBound:
    """Largest coordinate projection of a finite sample in R^d.

    M_i = max |p_i| over the sample; the returned 1-based index maximizes M_i
    (smallest on ties) and sqrt(sum M_i^2) dominates every sampled norm.
    """
    pts = [tuple(float(c) for c in p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    d = len(pts[0])
    if d < 1 or any(len(p) != d for p in pts):
        raise ValueError("points must share a positive dimension")
    bounds = tuple(max(abs(p[i]) for p in pts) for i in range(d))
    top = max(bounds)
    index = bounds.index(top) + 1
    return CoordinateBound(index, bounds, euclidean_norm(bounds))
