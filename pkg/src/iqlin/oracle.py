"""Brute-force oracles for the quantified membership formula.

These evaluators decide membership by searching the quantified game
directly, without the closed-form characterizations in ``charac`` (and
in particular without the interval shift-witness rule those rest on), so the
two can validate each other on desk-scale instances.

Structure exploited by both oracles
-----------------------------------
Every scalar parameter occurs in exactly one equation row, so the
quantified conjunction of rows splits into independent per-row games:
quantifiers over a variable distribute across conjuncts that do not
mention it.  Each row game is an alternating sequence of moves, blocks
outermost first, universal entries before existential ones inside a
block; a move adds coeff * value to the row residual (coeff is x_j for
a matrix entry, -1 for a rhs entry) and the innermost test is residual
== 0, exact over rationals.

Why universal players may be restricted to box vertices
--------------------------------------------------------
With existential moves ranging over full boxes, the set of values of
any single variable that keep the rest of the game winnable is convex:
the innermost equation is affine, existential steps project the
winning set (projection preserves convexity), and vertex-restricted
universal steps intersect finitely many convex sets.  A convex set
contains its box whenever it contains both endpoints, so checking the
vertices is exact.  Discretizing existential moves to a finite grid
only weakens that player, hence a win of the gridded game still
certifies membership.  For refutation the universal player plays
vertices only (legal choices in the real game) against an existential
player strengthened by deferral: existential values stay intervals,
each existential step narrows its interval to the values that remain
single-handedly feasible against every vertex assignment of the
remaining universal moves, and the leaf asks for interval feasibility.
Losing even that relaxed game certifies non-membership.  For one-block
systems the relaxed game is exact (all existential moves come after
all universal ones), so the verdict is never Unknown there.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

from .ivcore import Interval, IntervalMatrix, IntervalVector, PointVector, Rational, rat
from .prefix import GeneralizedIQSystem, Quantifier

_ZERO = rat(0)
_MINUS_ONE = rat(-1)


class Outcome(Enum):
    MEMBER_CERTIFIED = "member-certified"
    NOT_MEMBER_CERTIFIED = "not-member-certified"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class OracleVerdict:
    outcome: Outcome
    evaluations: int

    def __str__(self) -> str:
        return f"{self.outcome.value} ({self.evaluations} leaf checks)"


class NodeCapExceeded(RuntimeError):
    """Raised when an oracle would exceed its leaf-evaluation budget."""


class _Budget:
    __slots__ = ("spent", "cap")

    def __init__(self, cap: int) -> None:
        self.spent = 0
        self.cap = cap

    def spend(self) -> None:
        self.spent += 1
        if self.spent > self.cap:
            raise NodeCapExceeded(f"leaf evaluation budget of {self.cap} exceeded")


def _point(gen: GeneralizedIQSystem, x) -> PointVector:
    pv = x if isinstance(x, PointVector) else PointVector(x)
    if len(pv) != gen.shape[1]:
        raise ValueError(f"point has length {len(pv)}, system expects {gen.shape[1]}")
    return pv


def _hull_term(coeff: Rational, box: Interval) -> Tuple[Rational, Rational]:
    a = coeff * box.lo
    b = coeff * box.hi
    return (a, b) if a <= b else (b, a)


# ---------------------------------------------------------------------------
# One-block vertex oracle
# ---------------------------------------------------------------------------


def vertex_oracle_k1(gen: GeneralizedIQSystem, x, max_forall: int = 20) -> OracleVerdict:
    """Decide one-block membership by enumerating universal box vertices.

    For each vertex assignment of the universal entries the residual
    A' x - b' is a concrete rational vector, and the existential side
    {b'' - A'' x} is, rowwise, the interval spanned by its own vertex
    values (each entry appears once, so per-row extremes add up).  The
    verdict is exact: the residual is affine in every universal entry,
    so a violated row is always witnessed at a vertex.

    Raises NodeCapExceeded when more than ``max_forall`` universal
    entries would need branching (2**max_forall vertices).
    """
    if gen.kappa != 1:
        raise ValueError("vertex oracle handles one-block systems only")
    pv = _point(gen, x)
    m, n = gen.shape
    af, ae, bf, be = gen.block(1)
    branch_count = sum(
        1
        for i in range(m)
        for j in range(n)
        if not af.entry(i, j).is_point() and pv[j] != _ZERO
    ) + sum(1 for i in range(m) if not bf[i].is_point())
    if branch_count > max_forall:
        raise NodeCapExceeded(
            f"{branch_count} universal entries need branching, cap is {max_forall}"
        )
    evaluations = 0
    member = True
    for i in range(m):
        env_lo = be[i].lo
        env_hi = be[i].hi
        for j in range(n):
            lo, hi = _hull_term(pv[j], ae.entry(i, j))
            env_lo -= hi
            env_hi -= lo
        base = _ZERO
        branching: List[Tuple[Rational, Rational]] = []
        if bf[i].is_point():
            base -= bf[i].lo
        else:
            branching.append((-bf[i].lo, -bf[i].hi))
        for j in range(n):
            box = af.entry(i, j)
            xj = pv[j]
            if xj == _ZERO:
                continue
            if box.is_point():
                base += xj * box.lo
            else:
                branching.append((xj * box.lo, xj * box.hi))
        row_ok = True
        for choice in itertools.product(*branching):
            evaluations += 1
            residual = base
            for term in choice:
                residual += term
            if not (env_lo <= residual <= env_hi):
                row_ok = False
                break
        if not row_ok:
            member = False
            break
    outcome = Outcome.MEMBER_CERTIFIED if member else Outcome.NOT_MEMBER_CERTIFIED
    return OracleVerdict(outcome, evaluations)


# ---------------------------------------------------------------------------
# Alternating game oracle
# ---------------------------------------------------------------------------


@dataclass
class _Move:
    quant: Quantifier
    coeff: Rational
    box: Interval


def _row_game(gen: GeneralizedIQSystem, pv: PointVector, i: int) -> Tuple[Rational, List[_Move]]:
    """Base residual and branching moves of row i, outermost move first.

    Moves whose contribution is forced (zero coefficient or a point
    box) fold into the base residual; this is exact for both players.
    """
    n = gen.shape[1]
    base = _ZERO
    moves: List[_Move] = []

    def add(quant: Quantifier, coeff: Rational, box: Interval) -> None:
        nonlocal base
        if coeff == _ZERO:
            return
        if box.is_point():
            base += coeff * box.lo
        else:
            moves.append(_Move(quant, coeff, box))

    for s in range(gen.kappa, 0, -1):
        af, ae, bf, be = gen.block(s)
        for j in range(n):
            add(Quantifier.FORALL, pv[j], af.entry(i, j))
        add(Quantifier.FORALL, _MINUS_ONE, bf[i])
        for j in range(n):
            add(Quantifier.EXISTS, pv[j], ae.entry(i, j))
        add(Quantifier.EXISTS, _MINUS_ONE, be[i])
    return base, moves


def _grid(box: Interval, points: int) -> List[Rational]:
    """Uniform grid on the box including both endpoints."""
    step = box.wid() / (points - 1)
    return [box.lo + step * k for k in range(points)]


def _gridded_row_win(moves: List[_Move], idx: int, acc: Rational, grid: int, budget: _Budget) -> bool:
    if idx == len(moves):
        budget.spend()
        return acc == _ZERO
    move = moves[idx]
    if move.quant is Quantifier.FORALL:
        for v in (move.box.lo, move.box.hi):
            if not _gridded_row_win(moves, idx + 1, acc + move.coeff * v, grid, budget):
                return False
        return True
    for v in _grid(move.box, grid):
        if _gridded_row_win(moves, idx + 1, acc + move.coeff * v, grid, budget):
            return True
    return False


def _relaxed_row_survives(moves: List[_Move], idx: int, acc: Rational,
                          boxes: List[Optional[Interval]], budget: _Budget) -> bool:
    """Refutation pass: universal vertices against deferred existentials.

    ``boxes`` holds the current (possibly narrowed) interval of every
    existential move.  Returns False only when no committed existential
    choices could have survived, so a False here refutes membership.
    """
    if idx == len(moves):
        budget.spend()
        lo = acc
        hi = acc
        for move, box in zip(moves, boxes):
            if move.quant is Quantifier.EXISTS:
                a, b = _hull_term(move.coeff, box)
                lo += a
                hi += b
        return lo <= _ZERO <= hi
    move = moves[idx]
    if move.quant is Quantifier.FORALL:
        for v in (move.box.lo, move.box.hi):
            if not _relaxed_row_survives(moves, idx + 1, acc + move.coeff * v, boxes, budget):
                return False
        return True
    # Existential step: intersect, over every vertex assignment of the
    # remaining universal moves, the interval of single values that keep
    # this row feasible (other existentials relaxed to their boxes).
    hull_lo = _ZERO
    hull_hi = _ZERO
    for t, (other, box) in enumerate(zip(moves, boxes)):
        if t != idx and other.quant is Quantifier.EXISTS:
            a, b = _hull_term(other.coeff, box)
            hull_lo += a
            hull_hi += b
    tail_forall = [moves[t] for t in range(idx + 1, len(moves)) if moves[t].quant is Quantifier.FORALL]
    feasible: Optional[Interval] = boxes[idx]
    k = move.coeff
    for choice in itertools.product(*[(mv.box.lo, mv.box.hi) for mv in tail_forall]):
        budget.spend()
        c = acc
        for mv, v in zip(tail_forall, choice):
            c += mv.coeff * v
        # Need k*v in [-c - hull_hi, -c - hull_lo].
        lo = -c - hull_hi
        hi = -c - hull_lo
        if k > _ZERO:
            window = Interval(lo / k, hi / k)
        else:
            window = Interval(hi / k, lo / k)
        feasible = feasible.intersect(window)
        if feasible is None:
            return False
    prev = boxes[idx]
    boxes[idx] = feasible
    try:
        return _relaxed_row_survives(moves, idx + 1, acc, boxes, budget)
    finally:
        boxes[idx] = prev


def game_oracle(gen: GeneralizedIQSystem, x, grid: int = 5, node_cap: int = 10 ** 6) -> OracleVerdict:
    """Search the alternating game; see the module docstring for semantics.

    Returns MEMBER_CERTIFIED when the gridded game is won,
    NOT_MEMBER_CERTIFIED when the vertex-universal refutation pass
    wins, UNKNOWN otherwise (possible only for two or more blocks).
    Raises NodeCapExceeded beyond ``node_cap`` leaf evaluations.
    """
    if grid < 2:
        raise ValueError("existential grid needs at least the two endpoints")
    pv = _point(gen, x)
    m = gen.shape[0]
    budget = _Budget(node_cap)
    rows = [_row_game(gen, pv, i) for i in range(m)]

    refuted = False
    for base, moves in rows:
        boxes: List[Optional[Interval]] = [mv.box if mv.quant is Quantifier.EXISTS else None for mv in moves]
        if not _relaxed_row_survives(moves, 0, base, boxes, budget):
            refuted = True
            break
    if refuted:
        return OracleVerdict(Outcome.NOT_MEMBER_CERTIFIED, budget.spent)
    if gen.kappa == 1:
        # One-block deferral is exact, so surviving it already certifies.
        return OracleVerdict(Outcome.MEMBER_CERTIFIED, budget.spent)

    won = True
    for base, moves in rows:
        if not _gridded_row_win(moves, 0, base, grid, budget):
            won = False
            break
    if won:
        return OracleVerdict(Outcome.MEMBER_CERTIFIED, budget.spent)
    return OracleVerdict(Outcome.UNKNOWN, budget.spent)


# ---------------------------------------------------------------------------
# Seeded instance generation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InstanceSpec:
    """Shape and randomness parameters for generated block systems."""

    m: int
    n: int
    kappa: int
    magnitude: int = 8
    zero_prob: float = 0.5
    seed: int = 0
    max_denominator: int = 4

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1 or self.kappa < 1:
            raise ValueError("dimensions and block count must be positive")
        if self.magnitude < 1 or self.max_denominator < 1:
            raise ValueError("magnitude and denominator bounds must be positive")
        if not (0.0 <= self.zero_prob <= 1.0):
            raise ValueError("zero-slot probability must lie in [0, 1]")


def _random_rational(rng: random.Random, magnitude: int, max_denominator: int) -> Rational:
    return Rational(rng.randint(-magnitude, magnitude)) / rng.randint(1, max_denominator)


def _random_interval(rng: random.Random, spec: InstanceSpec) -> Interval:
    if rng.random() < spec.zero_prob:
        return Interval.zero()
    a = _random_rational(rng, spec.magnitude, spec.max_denominator)
    b = _random_rational(rng, spec.magnitude, spec.max_denominator)
    return Interval(min(a, b), max(a, b))


def random_instance(spec: InstanceSpec) -> GeneralizedIQSystem:
    """Deterministic-by-seed random block system.

    Slots are drawn block by block (innermost first), forall matrix,
    exists matrix, forall rhs, exists rhs, each row-major; every slot
    is the zero point with probability ``zero_prob`` and otherwise an
    interval with rational endpoints of bounded numerator and
    denominator.
    """
    rng = random.Random(spec.seed)
    a_forall = []
    a_exists = []
    b_forall = []
    b_exists = []
    for _ in range(spec.kappa):
        a_forall.append(IntervalMatrix(
            [[_random_interval(rng, spec) for _ in range(spec.n)] for _ in range(spec.m)]
        ))
        a_exists.append(IntervalMatrix(
            [[_random_interval(rng, spec) for _ in range(spec.n)] for _ in range(spec.m)]
        ))
        b_forall.append(IntervalVector([_random_interval(rng, spec) for _ in range(spec.m)]))
        b_exists.append(IntervalVector([_random_interval(rng, spec) for _ in range(spec.m)]))
    return GeneralizedIQSystem(a_forall, a_exists, b_forall, b_exists)


def random_point(n: int, rng: random.Random, magnitude: int = 8, max_denominator: int = 4) -> PointVector:
    """Random rational point, drawn from the caller's stream."""
    return PointVector(_random_rational(rng, magnitude, max_denominator) for _ in range(n))
