"""Series at the boundary between convergence and divergence.

- `accelerate_convergent`: multipliers y_n -> oo that keep sum x_n y_n finite
  (y_n = 1/sqrt(r_{n-1}), telescoping against the remainders).
- `decelerate_divergent`: multipliers y_n -> 0 that keep sum x_n y_n divergent
  (y_n = 1/s_n against the partial sums).
- `q3_divergence_certificate`: finitary limit comparison with the harmonic
  series, showing a sequence with n*y_n^2 bounded below is not square-summable.

Long scans run in numpy chunks and are pinned down exactly with math.fsum at
the crossing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import polygamma

from .certificate import Certificate, Claim, digest, holds
from .errors import HorizonExceeded, HypothesisViolated, NotConvergent

DEFAULT_BUDGET = 10**8
PROGRESS_EVERY = 10**6
CHUNK = 1 << 16
HYPOTHESIS_RTOL = 1e-9

ProgressFn = Optional[Callable[[dict], None]]


@dataclass(frozen=True)
class SeriesSpec:
    """Positive-term series x_1, x_2, ...: a named generator or an explicit list.

    Explicit lists are treated as the whole series (zero beyond the end).
    """

    name: str
    param: float = 1.0
    terms: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.name == "list":
            if not self.terms:
                raise ValueError("explicit series needs at least one term")
            ts = tuple(float(t) for t in self.terms)
            if any(not (t > 0 and math.isfinite(t)) for t in ts):
                raise ValueError("series terms must be strictly positive")
            object.__setattr__(self, "terms", ts)
        elif self.name not in GENERATORS:
            raise ValueError(f"unknown series generator {self.name!r}")
        elif self.name in ("geometric", "constant") and not self.param > 0:
            raise ValueError(f"{self.name} parameter must be positive")

    @classmethod
    def explicit(cls, terms: Sequence[float]) -> SeriesSpec:
        return cls("list", terms=tuple(terms))

    @classmethod
    def parse(cls, text: str) -> SeriesSpec:
        """'geometric:0.5', 'constant', 'constant:2', 'one-over-n', ..."""
        name, _, arg = text.partition(":")
        if name not in GENERATORS:
            raise ValueError(f"unknown series generator {name!r}")
        if arg:
            return cls(name, float(arg))
        if name == "geometric":
            raise ValueError("geometric needs a ratio, e.g. geometric:0.5")
        return cls(name)

    @property
    def length(self) -> Optional[int]:
        return len(self.terms) if self.terms is not None else None

    @property
    def convergent(self) -> bool:
        if self.name == "list":
            return True
        if self.name == "geometric":
            return self.param < 1.0
        return self.name == "one-over-n-squared"

    def label(self) -> str:
        if self.name == "list":
            return f"list[{len(self.terms)}]"
        if self.name in ("geometric", "constant"):
            return f"{self.name}:{self.param!r}"
        return self.name

    def to_json(self):
        if self.name == "list":
            return {"terms": list(self.terms)}
        return {"generator": self.name, "param": self.param}

    def term_array(self, start: int, stop: int) -> np.ndarray:
        """x_n for start <= n < stop (1-based), truncated at the end of a list."""
        if self.terms is not None:
            return np.array(self.terms[start - 1 : stop - 1], dtype=float)
        n = np.arange(start, stop, dtype=float)
        return GENERATORS[self.name](n, self.param)

    def remainders(self, upto: int) -> np.ndarray:
        """r_0, ..., r_upto with r_n = sum_{k>n} x_k."""
        if not self.convergent:
            raise NotConvergent(f"{self.label()} has no finite remainders")
        if self.terms is not None:
            t = np.array(self.terms, dtype=float)
            tail = np.concatenate([np.cumsum(t[::-1])[::-1], [0.0]])
            out = np.zeros(upto + 1)
            m = min(upto + 1, len(tail))
            out[:m] = tail[:m]
            return out
        n = np.arange(0, upto + 1, dtype=float)
        if self.name == "geometric":
            r = self.param
            return r ** (n + 1) / (1.0 - r)
        return polygamma(1, n + 1)


GENERATORS: dict[str, Callable[[np.ndarray, float], np.ndarray]] = {
    "geometric": lambda n, r: r**n,
    "constant": lambda n, c: np.full_like(n, c),
    "one-over-n": lambda n, _: 1.0 / n,
    "one-over-sqrt-n": lambda n, _: 1.0 / np.sqrt(n),
    "one-over-n-squared": lambda n, _: 1.0 / (n * n),
}


@dataclass(frozen=True)
class AccelerationResult:
    y: np.ndarray
    weighted: np.ndarray  # x_n y_n
    partial_sums: np.ndarray
    telescoped: np.ndarray  # 2 (sqrt r_0 - sqrt r_n)
    bound: float  # 2 sqrt r_0
    certificate: Certificate


def accelerate_convergent(x: SeriesSpec, horizon: int) -> AccelerationResult:
    """y_n = 1/sqrt(r_{n-1}) grows without bound yet sum x_n y_n <= 2 sqrt(r_0)."""
    if horizon < 1:
        raise ValueError("horizon must be positive")
    if x.length is not None and horizon > x.length:
        raise ValueError(f"horizon {horizon} exceeds the {x.length} listed terms")
    r = x.remainders(horizon)
    if not r[horizon - 1] > 0:
        raise ValueError(f"remainder r_{horizon - 1} underflows; lower the horizon")
    xs = x.term_array(1, horizon + 1)
    root = np.sqrt(r)
    y = 1.0 / root[:-1]
    weighted = xs * y
    partial = np.cumsum(weighted)
    telescoped = 2.0 * (root[0] - root[1:])
    bound = 2.0 * float(root[0])
    step = 2.0 * (root[:-1] - root[1:])

    claims = [
        Claim("max_n x_n y_n / (2(sqrt r_(n-1) - sqrt r_n)) <= 1",
              float(np.max(weighted / step)), "<=", 1.0),
        Claim("every transformed partial sum <= 2 sqrt(r_0)", float(np.max(partial)), "<=", bound),
        Claim(f"partial sum at N={horizon} <= 2(sqrt r_0 - sqrt r_N)",
              math.fsum(weighted), "<=", float(telescoped[-1])),
    ]
    if horizon > 1:
        claims.append(Claim("min_n (y_(n+1) - y_n) > 0 (y increases)",
                            float(np.min(np.diff(y))), ">", 0.0, 0.0))
    claims.append(Claim(f"y_N / y_1 at N={horizon}", float(y[-1] / y[0]), ">=", 1.0, 0.0))
    cert = Certificate(
        "series-convergence",
        tuple(claims),
        digest({"series": x.to_json(), "horizon": horizon}),
    )
    return AccelerationResult(y, weighted, partial, telescoped, bound, cert)


@dataclass(frozen=True)
class DivergenceCertificate:
    """Finite proof that a partial sum of a divergent series passes `target`."""

    target: float
    index: int
    partial_sum: float
    previous_partial_sum: float
    comparison_constant: Optional[float] = None
    threshold: Optional[int] = None
    min_ratio: Optional[float] = None  # min of n*y_n^2/c over scanned n >= threshold
    label: str = ""

    @property
    def passed(self) -> bool:
        return self.to_certificate().passed

    def claims(self) -> list[Claim]:
        out = [
            Claim(f"partial sum at N={self.index} >= target", self.partial_sum, ">=", self.target, 0.0),
        ]
        first = self.threshold or 1
        if self.index > first:
            out.append(Claim(f"partial sum at N-1={self.index - 1} < target (N is minimal)",
                             self.previous_partial_sum, "<", self.target, 0.0))
        if self.min_ratio is not None:
            out.append(Claim(f"y_n^2 >= c/n for {first} <= n <= {self.index} (c={self.comparison_constant!r})",
                             self.min_ratio, ">=", 1.0, HYPOTHESIS_RTOL))
        return out

    def to_certificate(self) -> Certificate:
        return Certificate("series-divergence", tuple(self.claims()), digest(self.inputs()))

    def inputs(self) -> dict:
        return {
            "label": self.label,
            "target": self.target,
            "c": self.comparison_constant,
            "n0": self.threshold,
        }

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "index": self.index,
            "partial_sum": self.partial_sum,
            "previous_partial_sum": self.previous_partial_sum,
            "comparison_constant": self.comparison_constant,
            "threshold": self.threshold,
            "min_ratio": self.min_ratio,
            "label": self.label,
        }


def _scan(
    terms: Callable[[int, int], np.ndarray],
    target: float,
    first: int,
    budget: int,
    progress: ProgressFn,
    check: Optional[Callable[[np.ndarray, np.ndarray], Optional[int]]] = None,
    length: Optional[int] = None,
) -> int:
    """Smallest N >= first with sum_{n<=N} terms >= target (chunked float pass).

    `terms(a, b)` returns the summands for a <= n < b. `check(n, t)` may return
    the first offending n in a chunk; it is raised only if it comes at or
    before the crossing.
    """
    acc = 0.0
    start = 1
    next_report = PROGRESS_EVERY
    limit = budget if length is None else min(budget, length)
    while start <= limit:
        stop = min(start + CHUNK, limit + 1)
        t = terms(start, stop)
        n = np.arange(start, stop)
        csum = acc + np.cumsum(t)
        hit = np.nonzero((csum >= target) & (n >= first))[0]
        crossing = int(n[hit[0]]) if hit.size else None
        if check is not None:
            bad = check(n, t)
            if bad is not None and (crossing is None or bad <= crossing):
                raise HypothesisViolated(bad)
        if crossing is not None:
            return crossing
        acc = float(csum[-1])
        start = stop
        if progress is not None and start - 1 >= next_report:
            progress({"terms": start - 1, "partial_sum": acc, "target": target})
            next_report += PROGRESS_EVERY
    raise HorizonExceeded(limit, progress=acc)


def _pin(terms: Callable[[int, int], np.ndarray], target: float, N: int, first: int):
    """Adjust N so that fsum(1..N) >= target > fsum(1..N-1) with exact sums."""
    t = terms(1, N + 2)
    s = lambda m: math.fsum(t[:m]) if m > 0 else 0.0
    while N > first and s(N - 1) >= target:
        N -= 1
    while s(N) < target and N < len(t):
        N += 1
    return N, s(N), s(N - 1)


@dataclass(frozen=True)
class DecelerationResult:
    y: np.ndarray
    certificate: DivergenceCertificate


def decelerate_divergent(
    x: SeriesSpec,
    target: float,
    budget: int = DEFAULT_BUDGET,
    progress: ProgressFn = None,
) -> DecelerationResult:
    """y_n = 1/s_n -> 0 while sum x_n y_n passes `target`."""
    if x.convergent and x.terms is None:
        raise ValueError(f"{x.label()} converges; nothing to decelerate")

    def weighted(a: int, b: int) -> np.ndarray:
        # partial sums are recomputed from 1 so every chunk sees the same s_n
        xs = x.term_array(1, b)
        s = np.cumsum(xs)
        return (xs / s)[a - 1 :]

    cache: dict[int, np.ndarray] = {}

    def chunk(a: int, b: int) -> np.ndarray:
        if x.name == "constant":
            return 1.0 / np.arange(a, b, dtype=float)
        if x.name == "geometric":
            r = x.param
            n = np.arange(a, b, dtype=float)
            return r**n / _geometric_partial(r, n)
        # carry the running partial sum between chunks
        xs = x.term_array(a, b)
        s0 = cache.get(a, 0.0)
        s = s0 + np.cumsum(xs)
        cache[b] = float(s[-1]) if s.size else s0
        return xs / s

    N = 1 if target <= 0 else _scan(chunk, target, 1, budget, progress, length=x.length)
    N, part, prev = _pin(weighted, target, N, 1)
    xs = x.term_array(1, N + 1)
    y = 1.0 / np.cumsum(xs)
    return DecelerationResult(y, DivergenceCertificate(target, N, part, prev, label=x.label()))


def _geometric_partial(r: float, n: np.ndarray) -> np.ndarray:
    if r == 1.0:
        return n
    return r * (r**n - 1.0) / (r - 1.0)


Y_ORACLES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "one-over-sqrt-n": lambda n: 1.0 / np.sqrt(n),
    "one-over-n": lambda n: 1.0 / n,
    "sqrt-log-over-n": lambda n: np.sqrt(np.log(n + 1.0) / n),
}


def y_oracle(spec: str) -> Callable[[np.ndarray], np.ndarray]:
    """Named term oracle; 'power:a' gives y_n = n**-a."""
    name, _, arg = spec.partition(":")
    if name == "power":
        a = float(arg)
        return lambda n: n ** (-a)
    if name not in Y_ORACLES:
        raise ValueError(f"unknown y oracle {spec!r}")
    return Y_ORACLES[name]


def q3_divergence_certificate(
    y: Callable[[np.ndarray], np.ndarray] | str,
    c: float,
    n0: int,
    target: float,
    budget: int = DEFAULT_BUDGET,
    progress: ProgressFn = None,
) -> DivergenceCertificate:
    """Certify sum_{n<=N} y_n^2 >= target, checking y_n^2 >= c/n for n0 <= n <= N.

    Under that pointwise bound the squares dominate a multiple of the harmonic
    series, so no finite bar holds them; the scan exhibits the crossing for
    this particular bar.
    """
    if not c > 0:
        raise ValueError("comparison constant must be positive")
    if n0 < 1:
        raise ValueError("threshold index starts at 1")
    label = y if isinstance(y, str) else getattr(y, "__name__", "oracle")
    fn = y_oracle(y) if isinstance(y, str) else y

    def squares(a: int, b: int) -> np.ndarray:
        return np.asarray(fn(np.arange(a, b, dtype=float)), dtype=float) ** 2

    def check(n: np.ndarray, t: np.ndarray) -> Optional[int]:
        mask = n >= n0
        ratio = n[mask] * t[mask] / c
        bad = np.nonzero(ratio < 1.0 - HYPOTHESIS_RTOL)[0]
        return int(n[mask][bad[0]]) if bad.size else None

    N = _scan(squares, target, n0, budget, progress, check)
    N, part, prev = _pin(squares, target, N, n0)
    n = np.arange(n0, N + 1, dtype=float)
    ratios = n * squares(n0, N + 1) / c
    min_ratio = float(np.min(ratios))
    if not holds(min_ratio, ">=", 1.0, HYPOTHESIS_RTOL):
        raise HypothesisViolated(int(n[np.argmin(ratios)]))
    return DivergenceCertificate(target, N, part, prev, float(c), int(n0), min_ratio, label)


def recompute_partial_sum(terms: Sequence[float] | np.ndarray, N: int) -> float:
    return math.fsum(np.asarray(terms, dtype=float)[:N])


def slower_divergent_sequence(x: Sequence[float]) -> list[float]:
    """sqrt(x_n): still unbounded when x is, but y_n / x_n -> 0."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs <= 0):
        raise ValueError("sequence must be positive")
    return np.sqrt(xs).tolist()


def boundary_experiment(
    x: Callable[[np.ndarray], np.ndarray],
    y: Callable[[np.ndarray], np.ndarray],
    p: float,
    horizon: int,
    checkpoints: int = 8,
) -> list[dict]:
    """Track sum_{n<=m} |y_n|^p and x_m y_m at log-spaced m; no verdict."""
    n = np.arange(1, horizon + 1, dtype=float)
    yp = np.abs(y(n)) ** p
    psum = np.cumsum(yp)
    prod = x(n) * y(n)
    marks = np.unique(np.geomspace(1, horizon, checkpoints).astype(int))
    return [
        {"m": int(m), "lp_partial": float(psum[m - 1]), "x_times_y": float(prod[m - 1])}
        for m in marks
    ]
