"""Shared builders and independent reference oracles for the test suite.

The reference evaluators here are deliberately naive (grids, vertex
enumeration, literal shape checking) so they stay independent of the
library's closed-form implementations.
"""

from __future__ import annotations

import itertools
import random
import re
from fractions import Fraction
from typing import List, Tuple

import pytest

from iqlin import (
    ClassicIQSystem,
    GeneralizedIQSystem,
    Interval,
    IntervalMatrix,
    IntervalVector,
    PointVector,
    Quantifier,
    QuantifierPrefix,
    matrix_param,
    rat,
    rhs_param,
)


def ivl(lo, hi=None) -> Interval:
    return Interval(lo, lo if hi is None else hi)


def imat(rows) -> IntervalMatrix:
    return IntervalMatrix([[cell if isinstance(cell, Interval) else ivl(*cell) for cell in row] for row in rows])


def ivec(entries) -> IntervalVector:
    return IntervalVector([e if isinstance(e, Interval) else ivl(*e) for e in entries])


def pvec(*values) -> PointVector:
    return PointVector(values)


def gen_1x1(a_fa=(0, 0), a_ex=(0, 0), b_fa=(0, 0), b_ex=(0, 0), blocks=None) -> GeneralizedIQSystem:
    """One-block 1x1 system from scalar pairs (convenience for worked examples)."""
    if blocks is None:
        blocks = [(a_fa, a_ex, b_fa, b_ex)]
    return GeneralizedIQSystem(
        a_forall=[imat([[blk[0]]]) for blk in blocks],
        a_exists=[imat([[blk[1]]]) for blk in blocks],
        b_forall=[ivec([blk[2]]) for blk in blocks],
        b_exists=[ivec([blk[3]]) for blk in blocks],
    )


# The order-sensitivity pair used across the suite: an existential rhs
# [-1, 1] committed outside an adversarial matrix [1, 2] versus the
# same data with the quantifiers in plain forall-exists order.
def outer_exists_system() -> GeneralizedIQSystem:
    return gen_1x1(blocks=[((1, 2), (0, 0), (0, 0), (0, 0)),
                           ((0, 0), (0, 0), (0, 0), (-1, 1))])


def inner_exists_system() -> GeneralizedIQSystem:
    return gen_1x1(a_fa=(1, 2), b_ex=(-1, 1))


def random_prefix(rng: random.Random, m: int, n: int) -> QuantifierPrefix:
    params = [matrix_param(i, j) for i in range(1, m + 1) for j in range(1, n + 1)]
    params += [rhs_param(i) for i in range(1, m + 1)]
    rng.shuffle(params)
    return QuantifierPrefix(
        m, n, [(p, rng.choice((Quantifier.FORALL, Quantifier.EXISTS))) for p in params]
    )


def random_interval(rng: random.Random, magnitude: int = 6, max_den: int = 4,
                    zero_prob: float = 0.0, point_prob: float = 0.15,
                    avoid_zero: bool = False) -> Interval:
    if not avoid_zero and rng.random() < zero_prob:
        return Interval.zero()
    while True:
        a = Fraction(rng.randint(-magnitude, magnitude), rng.randint(1, max_den))
        if rng.random() < point_prob:
            out = Interval(a, a)
        else:
            b = Fraction(rng.randint(-magnitude, magnitude), rng.randint(1, max_den))
            out = Interval(min(a, b), max(a, b))
        if not (avoid_zero and out.is_zero()):
            return out


def random_classic(rng: random.Random, m: int, n: int, zero_prob: float = 0.0,
                   avoid_zero: bool = False) -> ClassicIQSystem:
    A = IntervalMatrix([
        [random_interval(rng, zero_prob=zero_prob, avoid_zero=avoid_zero) for _ in range(n)]
        for _ in range(m)
    ])
    b = IntervalVector([
        random_interval(rng, zero_prob=zero_prob, avoid_zero=avoid_zero) for _ in range(m)
    ])
    return ClassicIQSystem(A, b, random_prefix(rng, m, n))


# ---------------------------------------------------------------------------
# Independent reference oracles
# ---------------------------------------------------------------------------


def brute_valid_cut_sets(word: str) -> List[Tuple[int, ...]]:
    """All block splits of an outermost-first quantifier word that satisfy
    the AE-block shape rules, as innermost-first cumulative cut tuples.

    Literal restatement of the rules: middle blocks read A+E+ outside
    in; the innermost block may instead be all-A, the outermost all-E;
    a lone block may be any A*E*.
    """
    mu = len(word)
    results = []
    for mask in range(2 ** (mu - 1)) if mu > 1 else [0]:
        # Segment the word outermost-first at the marked gaps.
        segments = []
        start = 0
        for gap in range(mu - 1):
            if mask & (1 << gap):
                segments.append(word[start:gap + 1])
                start = gap + 1
        segments.append(word[start:])
        kappa = len(segments)
        ok = True
        for idx, seg in enumerate(segments):  # idx 0 is the outermost segment
            s = kappa - idx  # block number, innermost = 1
            proper = re.fullmatch(r"A+E+", seg) is not None
            if kappa == 1:
                ok = re.fullmatch(r"A*E*", seg) is not None and len(seg) > 0
            elif s == 1:
                ok = proper or re.fullmatch(r"A+", seg) is not None
            elif s == kappa:
                ok = proper or re.fullmatch(r"E+", seg) is not None
            else:
                ok = proper
            if not ok:
                break
        if ok:
            cuts = [0]
            for seg in reversed(segments):
                cuts.append(cuts[-1] + len(seg))
            results.append(tuple(cuts))
    return results


def interval_grid(a: Interval, step: Fraction) -> List[Fraction]:
    lo = Fraction(int(a.lo.numerator), int(a.lo.denominator))
    hi = Fraction(int(a.hi.numerator), int(a.hi.denominator))
    out = []
    v = lo
    while v <= hi:
        out.append(v)
        v += step
    return out


def brute_vertex_image(A: IntervalMatrix, x: PointVector) -> List[Tuple[Fraction, Fraction]]:
    """Componentwise min/max of V x over all vertex matrices V of A."""
    m, n = A.shape
    bounds = []
    for i in range(m):
        choices = [(A.entry(i, j).lo, A.entry(i, j).hi) for j in range(n)]
        values = []
        for combo in itertools.product(*choices):
            values.append(sum((c * x[j] for j, c in enumerate(combo)), rat(0)))
        bounds.append((min(values), max(values)))
    return bounds


@pytest.fixture
def rng() -> random.Random:
    return random.Random(987654321)
