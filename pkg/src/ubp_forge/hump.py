"""Gliding-hump construction for a non-uniformly-bounded operator family.

Given a finite ordered sample of operators, pick a subsequence whose norms
grow by at least 4**(2n+1) at step n, take a half-maximizer x_n for each, and
glue them into one point x = sum sigma(k) 4**-k x_k with signs chosen one at a
time. The images |T_n x| then increase strictly and stay above
(1/6) 4**-n |T_n|_op. `verify_witness` re-derives all of it from scratch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .certificate import Certificate, Claim, digest
from .core import (
    DEFAULT_SEED,
    Operator,
    SeqVector,
    apply,
    near_maximizer,
    norm,
    operator_from_json,
    operator_norm,
    operator_to_json,
)
from .errors import FamilyUniformlyBounded, InternalInvariantViolation, OverflowDetected

DEFAULT_DEPTH = 6
QUALITY = 0.5

COMPLETENESS_NOTE = (
    "finite depth: the point is an exact finite sum, so no completeness "
    "argument is needed for the series defining it"
)


def growth_factor(n: int) -> float:
    """Required ratio |T_{n+1}| / |T_n| at chain position n (1-based)."""
    return 4.0 ** (2 * n + 1)


def weight(k: int) -> float:
    return math.ldexp(1.0, -2 * k)  # 4**-k, exact


@dataclass(frozen=True)
class FamilySpec:
    operators: tuple[Operator, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        ops = tuple(self.operators)
        if not ops:
            raise ValueError("operator family must be nonempty")
        labels = tuple(self.labels) or tuple(f"T{i}" for i in range(1, len(ops) + 1))
        if len(labels) != len(ops):
            raise ValueError("one label per operator")
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.operators)

    def __getitem__(self, i: int) -> Operator:
        """1-based access, matching the indices reported in witnesses."""
        return self.operators[i - 1]

    def to_json(self) -> dict:
        return {
            "operators": [operator_to_json(T) for T in self.operators],
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, obj: dict) -> FamilySpec:
        ops = tuple(operator_from_json(o) for o in obj["operators"])
        return cls(ops, tuple(obj.get("labels", ())))


@dataclass(frozen=True)
class LedgerRow:
    position: int
    family_index: int
    op_norm: float
    image_norm: float
    lower_bound: float

    def to_json(self) -> dict:
        return {
            "n": self.position,
            "index": self.family_index,
            "op_norm": self.op_norm,
            "image_norm": self.image_norm,
            "lower_bound": self.lower_bound,
        }

    @classmethod
    def from_json(cls, obj: dict) -> LedgerRow:
        return cls(int(obj["n"]), int(obj["index"]), float(obj["op_norm"]),
                   float(obj["image_norm"]), float(obj["lower_bound"]))


@dataclass(frozen=True)
class HumpWitness:
    selected: tuple[int, ...]
    signs: tuple[int, ...]
    maximizers: tuple[SeqVector, ...]
    point: SeqVector
    ledger: tuple[LedgerRow, ...]

    @property
    def depth(self) -> int:
        return len(self.selected)

    def to_json(self) -> dict:
        return {
            "selected": list(self.selected),
            "signs": list(self.signs),
            "maximizers": [x.to_json() for x in self.maximizers],
            "point": self.point.to_json(),
            "ledger": [r.to_json() for r in self.ledger],
        }

    @classmethod
    def from_json(cls, obj: dict) -> HumpWitness:
        return cls(
            tuple(int(i) for i in obj["selected"]),
            tuple(int(s) for s in obj["signs"]),
            tuple(SeqVector.from_json(x) for x in obj["maximizers"]),
            SeqVector.from_json(obj["point"]),
            tuple(LedgerRow.from_json(r) for r in obj["ledger"]),
        )


def family_norms(family: FamilySpec, tol: float = 1e-10, seed: int = DEFAULT_SEED) -> list[float]:
    norms = []
    for i, T in enumerate(family.operators, start=1):
        v = operator_norm(T, tol, seed=seed).value
        if not math.isfinite(v):
            raise OverflowDetected(f"operator {i} has non-finite norm")
        norms.append(v)
    return norms


def _chain(norms: Sequence[float], depth: int) -> list[int]:
    chain: list[int] = []
    for i, nrm in enumerate(norms, start=1):
        if nrm == 0.0:
            continue
        if not chain or nrm >= growth_factor(len(chain)) * norms[chain[-1] - 1]:
            chain.append(i)
            if len(chain) == depth:
                break
    return chain


def select_subsequence(
    family: FamilySpec, depth: int, tol: float = 1e-10, *, seed: int = DEFAULT_SEED
) -> list[int]:
    """Earliest greedy chain i_1 < i_2 < ... of 1-based family indices.

    Raises FamilyUniformlyBounded with the length reached when the sample
    holds no chain of the requested depth.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    chain = _chain(family_norms(family, tol, seed), depth)
    if len(chain) < depth:
        raise FamilyUniformlyBounded(len(chain), depth)
    return chain


def choose_sign(prefix: SeqVector, new_term: SeqVector) -> int:
    """Sign s with |prefix + s*new_term| >= |new_term|; +1 on ties."""
    target = norm(new_term, 2)
    if norm(prefix + new_term, 2) >= target:
        return 1
    if norm(prefix - new_term, 2) >= target:
        return -1
    raise InternalInvariantViolation("neither sign keeps the partial sum above the new term")


def _signed_sum(terms: Sequence[SeqVector], signs: Sequence[int], start: int = 1) -> SeqVector:
    acc = SeqVector()
    for k, (t, s) in enumerate(zip(terms, signs), start=start):
        acc = acc + t * (s * weight(k))
    return acc


def build_witness(
    family: FamilySpec,
    depth: int = DEFAULT_DEPTH,
    tol: float = 1e-10,
    *,
    seed: int = DEFAULT_SEED,
) -> tuple[HumpWitness, Certificate]:
    if depth < 2:
        raise ValueError("depth must be at least 2 for the monotonicity claims")
    norms = family_norms(family, tol, seed)
    chain = _chain(norms, depth)
    if len(chain) < depth:
        raise FamilyUniformlyBounded(len(chain), depth)
    ops = [family[i] for i in chain]
    xs = [near_maximizer(T, QUALITY, tol, seed=seed) for T in ops]

    signs: list[int] = []
    for n, T in enumerate(ops, start=1):
        images = [apply(T, x) for x in xs[:n]]
        prefix = _signed_sum(images[:-1], signs)
        signs.append(choose_sign(prefix, images[-1] * weight(n)))

    point = _signed_sum(xs, signs)
    ledger = []
    for n, (i, T) in enumerate(zip(chain, ops), start=1):
        op = norms[i - 1]
        lower = op * weight(n) / 6.0
        row = LedgerRow(n, i, op, norm(apply(T, point), 2), lower)
        if not all(math.isfinite(v) for v in (row.op_norm, row.image_norm, row.lower_bound)):
            raise OverflowDetected(f"non-finite ledger entry at n={n}")
        ledger.append(row)

    witness = HumpWitness(tuple(chain), tuple(signs), tuple(xs), point, tuple(ledger))
    return witness, verify_witness(family, witness, tol, seed=seed)


def hump_claims(
    family: FamilySpec,
    w: HumpWitness,
    tol: float = 1e-10,
    *,
    seed: int = DEFAULT_SEED,
) -> list[Claim]:
    """Every inequality of the construction, recomputed without reusing w's numbers."""
    N = w.depth
    claims = [
        Claim("signs, maximizers and ledger each have one entry per chain position",
              float(min(len(w.signs), len(w.maximizers), len(w.ledger))), ">=", float(N), 0.0),
        Claim("signs, maximizers and ledger have no extra entries",
              float(max(len(w.signs), len(w.maximizers), len(w.ledger))), "<=", float(N), 0.0),
    ]
    N = min(N, len(w.signs), len(w.maximizers), len(w.ledger))
    ops = [family[i] for i in w.selected[:N]]
    op = [operator_norm(T, tol, seed=seed).value for T in ops]
    xs = w.maximizers
    Tx = [norm(apply(T, w.point), 2) for T in ops]

    for n in range(1, N):
        claims.append(Claim(f"n={n}: chain indices increase", w.selected[n], ">", w.selected[n - 1], 0.0))

    for k in range(1, N + 1):
        T, x = ops[k - 1], xs[k - 1]
        claims.append(Claim(f"k={k}: maximizer is a unit vector", abs(norm(x, 2) - 1.0), "<=", 1e-9, 0.0))
        claims.append(Claim(f"k={k}: |T_k x_k| >= 1/2 |T_k|_op", norm(apply(T, x), 2), ">=", QUALITY * op[k - 1]))

    recomputed = _signed_sum(xs[:N], w.signs[:N])
    claims.append(Claim("point equals sum of sigma(k) 4^-k x_k", norm(w.point - recomputed, 2), "<=", 1e-12, 0.0))
    claims.append(Claim("|x| <= 1/3", norm(w.point, 2), "<=", 1.0 / 3.0, 0.0))

    for n in range(1, N + 1):
        T = ops[n - 1]
        images = [apply(T, x) for x in xs[:N]]
        head = norm(_signed_sum(images[:n], w.signs[:n]), 2)
        tail = norm(_signed_sum(images[n:], w.signs[n:N], start=n + 1), 2)
        opn = op[n - 1]
        claims += [
            Claim(f"n={n}: sign recursion |sum_(k<=n) sigma(k)4^-k T_n x_k| >= 4^-n |T_n x_n|",
                  head, ">=", weight(n) * norm(images[n - 1], 2)),
            Claim(f"n={n}: head >= 1/2 4^-n |T_n|_op", head, ">=", 0.5 * weight(n) * opn),
            Claim(f"n={n}: tail <= 1/3 4^-n |T_n|_op", tail, "<=", weight(n) * opn / 3.0),
            Claim(f"n={n}: |T_n x| >= 1/6 4^-n |T_n|_op", Tx[n - 1], ">=", weight(n) * opn / 6.0),
        ]
        row = w.ledger[n - 1]
        claims += [
            Claim(f"n={n}: ledger index matches selection", row.family_index, "<=", w.selected[n - 1], 0.0),
            Claim(f"n={n}: ledger index matches selection (reverse)", row.family_index, ">=", w.selected[n - 1], 0.0),
            Claim(f"n={n}: ledger |T_n|_op reproduces", abs(row.op_norm - opn), "<=", 1e-9 * opn, 0.0),
            Claim(f"n={n}: ledger |T_n x| reproduces", abs(row.image_norm - Tx[n - 1]), "<=", 1e-9 * Tx[n - 1], 0.0),
            Claim(f"n={n}: ledger lower bound reproduces",
                  abs(row.lower_bound - weight(n) * opn / 6.0), "<=", 1e-9 * weight(n) * opn / 6.0, 0.0),
        ]

    for n in range(1, N):
        a, b = op[n - 1], op[n]
        claims += [
            Claim(f"n={n}: |T_(n+1)|_op >= 4^(2n+1) |T_n|_op", b, ">=", growth_factor(n) * a, 0.0),
            Claim(f"n={n}: 1/6 4^-(n+1) |T_(n+1)|_op >= 1/6 4^n |T_n|_op",
                  weight(n + 1) * b / 6.0, ">=", a / (6.0 * weight(n))),
            Claim(f"n={n}: 1/6 4^n |T_n|_op > 1/3 |T_n|_op", a / (6.0 * weight(n)), ">", a / 3.0, 0.0),
            Claim(f"n={n}: 1/3 |T_n|_op >= |T_n x|", a / 3.0, ">=", Tx[n - 1]),
            Claim(f"n={n}: |T_(n+1) x| > |T_n x|", Tx[n], ">", Tx[n - 1], 0.0),
            Claim(f"n={n}: |T_(n+1)|_op > |T_n|_op", b, ">", a, 0.0),
        ]
    return claims


def verify_witness(
    family: FamilySpec,
    w: HumpWitness,
    tol: float = 1e-10,
    *,
    seed: int = DEFAULT_SEED,
) -> Certificate:
    claims = hump_claims(family, w, tol, seed=seed)
    return Certificate(
        "hump",
        tuple(claims),
        digest({"family": family.to_json(), "depth": w.depth}),
        (COMPLETENESS_NOTE,),
    )
