"""Self-contained certificates: numeric claims whose verdicts can be recomputed
from the stored numbers alone."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

KINDS = ("hump", "dual", "series-convergence", "series-divergence")
RELATIONS = ("<=", ">=", "<", ">")

# binary64 rounding budget for non-strict claims
DEFAULT_RTOL = 1e-9

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a_64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def digest(obj) -> str:
    """Stable 64-bit FNV-1a digest of the canonical JSON form of `obj`."""
    return f"{fnv1a_64(canonical_json(obj).encode('utf-8')):016x}"


def holds(lhs: float, relation: str, rhs: float, rtol: float = 0.0) -> bool:
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        return False
    slack = rtol * max(abs(lhs), abs(rhs))
    if relation == "<=":
        return lhs <= rhs + slack
    if relation == ">=":
        return lhs >= rhs - slack
    # strict relations carry no slack
    if relation == "<":
        return lhs < rhs
    if relation == ">":
        return lhs > rhs
    raise ValueError(f"unknown relation {relation!r}")


@dataclass(frozen=True)
class Claim:
    description: str
    lhs: float
    relation: str
    rhs: float
    rtol: float = DEFAULT_RTOL
    passed: bool = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "lhs", float(self.lhs))
        object.__setattr__(self, "rhs", float(self.rhs))
        if self.passed is None:
            object.__setattr__(self, "passed", self.recheck())

    def recheck(self) -> bool:
        return holds(self.lhs, self.relation, self.rhs, self.rtol)

    def to_json(self) -> dict:
        return {
            "description": self.description,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "relation": self.relation,
            "rtol": self.rtol,
            "pass": self.passed,
        }

    @classmethod
    def from_json(cls, obj: dict) -> Claim:
        return cls(
            obj["description"],
            _unnum(obj["lhs"]),
            obj["relation"],
            _unnum(obj["rhs"]),
            float(obj.get("rtol", 0.0)),
            bool(obj["pass"]),
        )


def _num(x: float):
    # JSON has no inf/nan; keep them as strings so the document stays valid
    return x if math.isfinite(x) else repr(x)


def _unnum(x) -> float:
    return float(x)


@dataclass(frozen=True)
class Certificate:
    kind: str
    claims: tuple[Claim, ...]
    inputs_digest: str
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")
        object.__setattr__(self, "claims", tuple(self.claims))
        object.__setattr__(self, "notes", tuple(self.notes))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def failures(self) -> list[Claim]:
        return [c for c in self.claims if not c.passed]

    def recheck(self) -> bool:
        """True iff every stored verdict matches a recomputation from lhs/rhs."""
        return all(c.passed == c.recheck() for c in self.claims)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "claims": [c.to_json() for c in self.claims],
            "inputs_digest": self.inputs_digest,
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> Certificate:
        return cls(
            obj["kind"],
            tuple(Claim.from_json(c) for c in obj["claims"]),
            obj["inputs_digest"],
            tuple(obj.get("notes", ())),
        )
