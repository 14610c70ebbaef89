"""Family generators shared by the hump, dual and acceptance tests."""

import numpy as np

from ubp_forge.core import Functional, Matrix, SeqVector
from ubp_forge.hump import FamilySpec, growth_factor


def chain_norms(rng, depth, slack=(1.0, 3.0)):
    a = [float(rng.uniform(0.5, 2.0))]
    for n in range(1, depth):
        a.append(a[-1] * growth_factor(n) * float(rng.uniform(*slack)))
    return a


def disjoint_family(rng, depth=6, block=3, fillers=True):
    """Functionals on disjoint coordinate blocks with chain-growing norms,
    optionally interleaved with small operators the selection must skip."""
    ops = []
    start = 1
    for a in chain_norms(rng, depth):
        if fillers and ops:
            v = rng.standard_normal(block)
            ops.append(Functional(SeqVector.from_array(0.1 * v / np.linalg.norm(v), start)))
            start += block
        v = rng.standard_normal(block)
        ops.append(Functional(SeqVector.from_array(a * v / np.linalg.norm(v), start)))
        start += block
    return FamilySpec(tuple(ops))


def rank1_family(rng, depth=6, dim=5):
    u = rng.standard_normal(dim)
    v = rng.standard_normal(dim)
    base = np.outer(u, v) / (np.linalg.norm(u) * np.linalg.norm(v))
    return FamilySpec(tuple(Matrix.from_array(c * base) for c in chain_norms(rng, depth)))


def dense_family(rng, depth=4, dim=4):
    ops = []
    for c in chain_norms(rng, depth, slack=(1.5, 3.0)):
        a = rng.standard_normal((dim, dim))
        ops.append(Matrix.from_array(c * a / np.linalg.norm(a, 2)))
    return FamilySpec(tuple(ops))


def overlapping_pair():
    """T_1 = <e_1, .>, T_2 = <(-10, 100), .>: the second sign is forced to -1."""
    return FamilySpec((
        Functional(SeqVector({1: 1.0})),
        Functional(SeqVector({1: -10.0, 2: 100.0})),
    ))
