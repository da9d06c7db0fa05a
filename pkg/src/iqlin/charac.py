"""Quantifier-free membership tests for interval-quantifier linear systems.

A point x belongs to the solution set of a block system
(``GeneralizedIQSystem``, block 1 innermost) exactly when two families
of conditions hold, and this module implements both equivalent forms:

interval form (``member_intervalform``)
    sum_s (A'_s x - b'_s)  is included in  sum_s (b''_s - A''_s x), and
    for every proper prefix of inner blocks l = 1..kappa-1 the
    componentwise width of the left partial sum stays below the width
    of the right partial sum.

midpoint-radius form (``member_absform``)
    with Dl_s = rad A'_s |x| + rad b'_s and Dr_s likewise for the
    exists side,   | sum_s (mid A'_s + mid A''_s) x - sum_s (mid b'_s +
    mid b''_s) | + sum_s Dl_s <= sum_s Dr_s,   plus the same prefix-sum
    ordering Dl <= Dr over inner blocks.  Cost is O(kappa * m * n)
    rational operations per point.

For one-block (kappa = 1) systems these reduce to the classical Shary
inclusion and Rohn midpoint-radius characterizations of AE-solution
sets (``member_shary`` / ``member_rohn``), with the united, tolerable
and controllable solution sets as the familiar special cases.

The constructive conversions are here too: an absolute-value inequality
system |Cx - c| <= D|x| + d is realized as an AE system
(``prop1_construct``), a one-block pair system reduces to it
(``corollary1_construct``), and a kappa-block system flattens into a
stacked (kappa*m)-row AE system with identical solution set
(``prop2_flatten``).

Failure diagnostics are deterministic: verdicts report the first
violated condition, checking prefix-sum levels in ascending order and
then rows in ascending order (both 1-based).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .ivcore import (
    Interval,
    IntervalMatrix,
    IntervalVector,
    PointVector,
    Rational,
    RationalLike,
    rat,
    rational_matrix,
    rational_vector,
)
from .prefix import GeneralizedIQSystem, Quantifier

_ZERO = rat(0)


class ConditionKind(Enum):
    """Which membership condition a failed verdict violated."""

    INCLUSION = "inclusion"          # interval-form inclusion, indexed by row
    WIDTH_ORDER = "width-order"      # interval-form width prefix sums, indexed by level
    CENTER_BOUND = "center-bound"    # midpoint-radius center bound, indexed by row
    RADIUS_ORDER = "radius-order"    # midpoint-radius prefix sums, indexed by level
    SHARY_INCLUSION = "shary-inclusion"  # one-block inclusion, indexed by row
    ROHN_BOUND = "rohn-bound"        # one-block midpoint-radius bound, indexed by row
    ABS_INEQ = "abs-ineq"            # direct |Cx - c| <= D|x| + d, indexed by row


@dataclass(frozen=True)
class Violation:
    kind: ConditionKind
    index: int  # 1-based row or prefix level

    def __str__(self) -> str:
        what = "level" if self.kind in (ConditionKind.WIDTH_ORDER, ConditionKind.RADIUS_ORDER) else "row"
        return f"{self.kind.value} {what} {self.index}"


@dataclass(frozen=True)
class MembershipVerdict:
    """Boolean membership plus, on failure, the first violated condition."""

    member: bool
    violated: Optional[Violation] = None

    def __post_init__(self) -> None:
        if self.member and self.violated is not None:
            raise ValueError("a member verdict cannot carry a violation")
        if not self.member and self.violated is None:
            raise ValueError("a non-member verdict must name the violated condition")

    def __bool__(self) -> bool:
        return self.member


_MEMBER = MembershipVerdict(True)

PointLike = Union[PointVector, Sequence[RationalLike]]


def _point(x: PointLike, n: int) -> PointVector:
    pv = x if isinstance(x, PointVector) else PointVector(x)
    if len(pv) != n:
        raise ValueError(f"point has length {len(pv)}, system expects {n}")
    return pv


def member_intervalform(gen: GeneralizedIQSystem, x: PointLike) -> MembershipVerdict:
    """Membership via interval inclusion plus width prefix ordering."""
    m, n = gen.shape
    pv = _point(x, n)
    kappa = gen.kappa
    left = [gen.a_forall[s] @ pv - gen.b_forall[s] for s in range(kappa)]
    right = [gen.b_exists[s] - gen.a_exists[s] @ pv for s in range(kappa)]
    # Width prefix sums over inner blocks, levels 1..kappa-1.
    lw = [_ZERO] * m
    rw = [_ZERO] * m
    for level in range(1, kappa):
        lw = [acc + ivl.wid() for acc, ivl in zip(lw, left[level - 1])]
        rw = [acc + ivl.wid() for acc, ivl in zip(rw, right[level - 1])]
        if any(a > b for a, b in zip(lw, rw)):
            return MembershipVerdict(False, Violation(ConditionKind.WIDTH_ORDER, level))
    lsum = left[0]
    for vec in left[1:]:
        lsum = lsum + vec
    rsum = right[0]
    for vec in right[1:]:
        rsum = rsum + vec
    for i in range(m):
        if not lsum[i].subset_of(rsum[i]):
            return MembershipVerdict(False, Violation(ConditionKind.INCLUSION, i + 1))
    return _MEMBER


def _block_spreads(gen: GeneralizedIQSystem, absx: Sequence[Rational]) -> Tuple[list, list]:
    """Per block s and row i: rad A'_s |x| + rad b'_s and its exists-side twin."""
    m, n = gen.shape
    left = []
    right = []
    for s in range(gen.kappa):
        af, ae, bf, be = gen.a_forall[s], gen.a_exists[s], gen.b_forall[s], gen.b_exists[s]
        lrow = []
        rrow = []
        for i in range(m):
            accl = bf[i].rad()
            accr = be[i].rad()
            fa_row = af.rows[i]
            ex_row = ae.rows[i]
            for j in range(n):
                aj = absx[j]
                if aj:
                    accl += fa_row[j].rad() * aj
                    accr += ex_row[j].rad() * aj
            lrow.append(accl)
            rrow.append(accr)
        left.append(lrow)
        right.append(rrow)
    return left, right


def _center_residual(gen: GeneralizedIQSystem, pv: PointVector) -> list:
    """Row vector  sum_s (mid A'_s + mid A''_s) x - sum_s (mid b'_s + mid b''_s)."""
    m, n = gen.shape
    out = []
    for i in range(m):
        acc = _ZERO
        for s in range(gen.kappa):
            fa_row = gen.a_forall[s].rows[i]
            ex_row = gen.a_exists[s].rows[i]
            for j in range(n):
                xj = pv[j]
                if xj:
                    acc += (fa_row[j].mid() + ex_row[j].mid()) * xj
            acc -= gen.b_forall[s][i].mid() + gen.b_exists[s][i].mid()
        out.append(acc)
    return out


def _radius_order_violation(left: list, right: list, m: int, kappa: int) -> Optional[Violation]:
    lacc = [_ZERO] * m
    racc = [_ZERO] * m
    for level in range(1, kappa):
        lacc = [a + b for a, b in zip(lacc, left[level - 1])]
        racc = [a + b for a, b in zip(racc, right[level - 1])]
        if any(a > b for a, b in zip(lacc, racc)):
            return Violation(ConditionKind.RADIUS_ORDER, level)
    return None


def member_absform(gen: GeneralizedIQSystem, x: PointLike) -> MembershipVerdict:
    """Membership via the midpoint-radius inequalities (absolute-value form)."""
    m, n = gen.shape
    pv = _point(x, n)
    absx = [abs(v) for v in pv]
    left, right = _block_spreads(gen, absx)
    bad = _radius_order_violation(left, right, m, gen.kappa)
    if bad is not None:
        return MembershipVerdict(False, bad)
    center = _center_residual(gen, pv)
    ltot = [sum(col, _ZERO) for col in zip(*left)]
    rtot = [sum(col, _ZERO) for col in zip(*right)]
    for i in range(m):
        if abs(center[i]) + ltot[i] > rtot[i]:
            return MembershipVerdict(False, Violation(ConditionKind.CENTER_BOUND, i + 1))
    return _MEMBER


def member_absform_twosided(gen: GeneralizedIQSystem, x: PointLike) -> MembershipVerdict:
    """Sandwich variant of the center bound: -(R-L) <= center <= R-L.

    Rowwise equivalent to ``member_absform``; both are kept and tested
    against each other because they exercise different arithmetic.
    """
    m, n = gen.shape
    pv = _point(x, n)
    absx = [abs(v) for v in pv]
    left, right = _block_spreads(gen, absx)
    bad = _radius_order_violation(left, right, m, gen.kappa)
    if bad is not None:
        return MembershipVerdict(False, bad)
    center = _center_residual(gen, pv)
    ltot = [sum(col, _ZERO) for col in zip(*left)]
    rtot = [sum(col, _ZERO) for col in zip(*right)]
    for i in range(m):
        slack = rtot[i] - ltot[i]
        if not (-slack <= center[i] <= slack):
            return MembershipVerdict(False, Violation(ConditionKind.CENTER_BOUND, i + 1))
    return _MEMBER


# ---------------------------------------------------------------------------
# One-block (AE) characterizations
# ---------------------------------------------------------------------------


def member_shary_blocks(
    a_fa: IntervalMatrix,
    a_ex: IntervalMatrix,
    b_fa: IntervalVector,
    b_ex: IntervalVector,
    x: PointLike,
) -> MembershipVerdict:
    """Shary inclusion for a one-block pair system: A' x - b'  inside  b'' - A'' x."""
    m, n = a_fa.shape
    pv = _point(x, n)
    lhs = a_fa @ pv - b_fa
    rhs = b_ex - a_ex @ pv
    for i in range(m):
        if not lhs[i].subset_of(rhs[i]):
            return MembershipVerdict(False, Violation(ConditionKind.SHARY_INCLUSION, i + 1))
    return _MEMBER


def member_rohn_blocks(
    a_fa: IntervalMatrix,
    a_ex: IntervalMatrix,
    b_fa: IntervalVector,
    b_ex: IntervalVector,
    x: PointLike,
) -> MembershipVerdict:
    """Rohn midpoint-radius bound for a one-block pair system.

    | (mid A' + mid A'') x - (mid b' + mid b'') |
        <= (rad A'' - rad A') |x| + rad b'' - rad b'   componentwise.
    """
    m, n = a_fa.shape
    pv = _point(x, n)
    for i in range(m):
        center = -(b_fa[i].mid() + b_ex[i].mid())
        slack = b_ex[i].rad() - b_fa[i].rad()
        fa_row = a_fa.rows[i]
        ex_row = a_ex.rows[i]
        for j in range(n):
            xj = pv[j]
            center += (fa_row[j].mid() + ex_row[j].mid()) * xj
            slack += (ex_row[j].rad() - fa_row[j].rad()) * abs(xj)
        if abs(center) > slack:
            return MembershipVerdict(False, Violation(ConditionKind.ROHN_BOUND, i + 1))
    return _MEMBER


@dataclass(frozen=True)
class AESystem:
    """An interval system with one quantifier per parameter, all-foralls-outside.

    ``alpha`` assigns a quantifier to each matrix entry, ``beta`` to
    each rhs entry.  The induced forall/exists split substitutes the
    zero point [0, 0] for entries bound by the other quantifier.
    """

    A: IntervalMatrix
    b: IntervalVector
    alpha: tuple  # tuple[tuple[Quantifier, ...], ...], shape m x n
    beta: tuple   # tuple[Quantifier, ...], length m

    def __init__(self, A: IntervalMatrix, b: IntervalVector,
                 alpha: Iterable[Sequence[Quantifier]], beta: Iterable[Quantifier]) -> None:
        m, n = A.shape
        alpha_t = tuple(tuple(row) for row in alpha)
        beta_t = tuple(beta)
        if len(b) != m:
            raise ValueError("rhs length must match matrix row count")
        if len(alpha_t) != m or any(len(row) != n for row in alpha_t):
            raise ValueError("alpha must have the matrix shape")
        if len(beta_t) != m:
            raise ValueError("beta must have the rhs length")
        for row in alpha_t:
            for q in row:
                if not isinstance(q, Quantifier):
                    raise TypeError("alpha entries must be Quantifier")
        for q in beta_t:
            if not isinstance(q, Quantifier):
                raise TypeError("beta entries must be Quantifier")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "alpha", alpha_t)
        object.__setattr__(self, "beta", beta_t)

    @classmethod
    def uniform(cls, A: IntervalMatrix, b: IntervalVector,
                matrix_quant: Quantifier, rhs_quant: Quantifier) -> "AESystem":
        m, n = A.shape
        return cls(A, b, [[matrix_quant] * n for _ in range(m)], [rhs_quant] * m)

    @property
    def shape(self) -> tuple:
        return self.A.shape

    def split(self) -> tuple:
        """(A_forall, A_exists, b_forall, b_exists) with zero points in the off slots."""
        m, n = self.A.shape
        zero = Interval.zero()
        fa = [[zero] * n for _ in range(m)]
        ex = [[zero] * n for _ in range(m)]
        for i in range(m):
            for j in range(n):
                if self.alpha[i][j] is Quantifier.FORALL:
                    fa[i][j] = self.A.entry(i, j)
                else:
                    ex[i][j] = self.A.entry(i, j)
        bfa = [zero] * m
        bex = [zero] * m
        for i in range(m):
            if self.beta[i] is Quantifier.FORALL:
                bfa[i] = self.b[i]
            else:
                bex[i] = self.b[i]
        return (IntervalMatrix(fa), IntervalMatrix(ex), IntervalVector(bfa), IntervalVector(bex))

    def as_generalized(self) -> GeneralizedIQSystem:
        fa, ex, bfa, bex = self.split()
        return GeneralizedIQSystem((fa,), (ex,), (bfa,), (bex,))


def member_shary(ae: AESystem, x: PointLike) -> MembershipVerdict:
    return member_shary_blocks(*ae.split(), x)


def member_rohn(ae: AESystem, x: PointLike) -> MembershipVerdict:
    return member_rohn_blocks(*ae.split(), x)


def member_united(A: IntervalMatrix, b: IntervalVector, x: PointLike) -> MembershipVerdict:
    """Some matrix in A and some rhs in b solve exactly at x."""
    return member_rohn(AESystem.uniform(A, b, Quantifier.EXISTS, Quantifier.EXISTS), x)


def member_tolerable(A: IntervalMatrix, b: IntervalVector, x: PointLike) -> MembershipVerdict:
    """Every matrix in A lands Ax inside b (for a suitable rhs per matrix)."""
    return member_rohn(AESystem.uniform(A, b, Quantifier.FORALL, Quantifier.EXISTS), x)


def member_controllable(A: IntervalMatrix, b: IntervalVector, x: PointLike) -> MembershipVerdict:
    """Every rhs in b is reached by some matrix in A at x."""
    return member_rohn(AESystem.uniform(A, b, Quantifier.EXISTS, Quantifier.FORALL), x)


# ---------------------------------------------------------------------------
# Absolute-value inequality systems and the constructive conversions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbsIneqSystem:
    """The inequality system |Cx - c| <= D|x| + d with rational data."""

    C: tuple
    D: tuple
    c: tuple
    d: tuple

    def __init__(self, C, D, c, d) -> None:
        C_t = rational_matrix(C)
        D_t = rational_matrix(D)
        c_t = rational_vector(c)
        d_t = rational_vector(d)
        m = len(C_t)
        n = len(C_t[0])
        if len(D_t) != m or len(D_t[0]) != n or len(c_t) != m or len(d_t) != m:
            raise ValueError("abs-inequality system blocks must share one shape")
        object.__setattr__(self, "C", C_t)
        object.__setattr__(self, "D", D_t)
        object.__setattr__(self, "c", c_t)
        object.__setattr__(self, "d", d_t)

    @property
    def shape(self) -> tuple:
        return (len(self.C), len(self.C[0]))


def member_absineq(sys: AbsIneqSystem, x: PointLike) -> MembershipVerdict:
    """Direct rowwise evaluation of |Cx - c| <= D|x| + d."""
    m, n = sys.shape
    pv = _point(x, n)
    for i in range(m):
        lhs = -sys.c[i]
        rhs = sys.d[i]
        for j in range(n):
            lhs += sys.C[i][j] * pv[j]
            rhs += sys.D[i][j] * abs(pv[j])
        if abs(lhs) > rhs:
            return MembershipVerdict(False, Violation(ConditionKind.ABS_INEQ, i + 1))
    return _MEMBER


def prop1_construct(sys: AbsIneqSystem) -> AESystem:
    """Realize |Cx - c| <= D|x| + d as an AE system with identical solution set.

    The interval data is the center-radius box [C - |D|, C + |D|],
    [c - |d|, c + |d|]; an entry is existential when its D (resp. d)
    coefficient is >= 0 and universal when negative, so the split radii
    recover the positive and negative parts of D and d.
    """
    m, n = sys.shape
    rows = []
    alpha = []
    for i in range(m):
        row = []
        arow = []
        for j in range(n):
            spread = abs(sys.D[i][j])
            row.append(Interval(sys.C[i][j] - spread, sys.C[i][j] + spread))
            arow.append(Quantifier.EXISTS if sys.D[i][j] >= _ZERO else Quantifier.FORALL)
        rows.append(row)
        alpha.append(arow)
    bvec = []
    beta = []
    for i in range(m):
        spread = abs(sys.d[i])
        bvec.append(Interval(sys.c[i] - spread, sys.c[i] + spread))
        beta.append(Quantifier.EXISTS if sys.d[i] >= _ZERO else Quantifier.FORALL)
    return AESystem(IntervalMatrix(rows), IntervalVector(bvec), alpha, beta)


def corollary1_construct(
    a_fa: IntervalMatrix,
    a_ex: IntervalMatrix,
    b_fa: IntervalVector,
    b_ex: IntervalVector,
) -> AESystem:
    """AE system equivalent to a one-block pair system.

    Plugs C = mid A' + mid A'', D = rad A'' - rad A', c = mid b' +
    mid b'', d = rad b'' - rad b' into ``prop1_construct``.
    """
    m, n = a_fa.shape
    if a_ex.shape != (m, n) or len(b_fa) != m or len(b_ex) != m:
        raise ValueError("pair system blocks must share one shape")
    C = [
        [a_fa.entry(i, j).mid() + a_ex.entry(i, j).mid() for j in range(n)]
        for i in range(m)
    ]
    D = [
        [a_ex.entry(i, j).rad() - a_fa.entry(i, j).rad() for j in range(n)]
        for i in range(m)
    ]
    c = [b_fa[i].mid() + b_ex[i].mid() for i in range(m)]
    d = [b_ex[i].rad() - b_fa[i].rad() for i in range(m)]
    return prop1_construct(AbsIneqSystem(C, D, c, d))


def prop2_flatten(gen: GeneralizedIQSystem) -> AESystem:
    """Flatten a kappa-block system into a (kappa*m)-row AE system.

    The first kappa-1 row groups encode the radius prefix-sum
    inequalities (zero centers), the last group the full center bound;
    ``prop1_construct`` then turns the stacked |Cx - c| <= D|x| + d
    into quantified interval data.  Membership in the result matches
    ``member_absform`` on the input for every point.
    """
    m, n = gen.shape
    kappa = gen.kappa
    C: List[list] = []
    D: List[list] = []
    c: List[Rational] = []
    d: List[Rational] = []
    # Prefix sums of rad A'' - rad A' and rad b'' - rad b' over inner blocks.
    dmat = [[_ZERO] * n for _ in range(m)]
    dvec = [_ZERO] * m
    for level in range(1, kappa + 1):
        af, ae, bf, be = gen.block(level)
        for i in range(m):
            for j in range(n):
                dmat[i][j] += ae.entry(i, j).rad() - af.entry(i, j).rad()
            dvec[i] += be[i].rad() - bf[i].rad()
        if level < kappa:
            for i in range(m):
                C.append([_ZERO] * n)
                D.append(list(dmat[i]))
                c.append(_ZERO)
                d.append(dvec[i])
    for i in range(m):
        crow = [_ZERO] * n
        ci = _ZERO
        for s in range(kappa):
            af, ae, bf, be = gen.block(s + 1)
            for j in range(n):
                crow[j] += af.entry(i, j).mid() + ae.entry(i, j).mid()
            ci += bf[i].mid() + be[i].mid()
        C.append(crow)
        D.append(list(dmat[i]))
        c.append(ci)
        d.append(dvec[i])
    return prop1_construct(AbsIneqSystem(C, D, c, d))


# ---------------------------------------------------------------------------
# Batched midpoint-radius evaluation
# ---------------------------------------------------------------------------


def _as_int(value: Rational) -> int:
    if value.denominator != 1:
        raise ValueError("value is not integral after scaling")
    return int(value.numerator)


_KERNEL = None
_KERNEL_FAILED = False


def _compiled_kernel():
    """Jit-compile the per-point integer decision loop on first use.

    The loop evaluates every condition unconditionally (no early exit),
    so its cost per point is the fixed multiply-add count stated in
    ``member_batch`` regardless of verdict distribution.  Returns None
    when numba is unavailable; callers then use the numpy fallback.
    """
    global _KERNEL, _KERNEL_FAILED
    if _KERNEL is not None or _KERNEL_FAILED:
        return _KERNEL
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _KERNEL_FAILED = True
        return None

    @numba.njit(cache=True)
    def kernel(aug_t, left, right, slack, center, out):  # pragma: no cover - compiled
        width, count = aug_t.shape
        level_rows = left.shape[0]
        m = slack.shape[0]
        tile = 8192
        acc_l = np.empty(tile, np.int64)
        acc_r = np.empty(tile, np.int64)
        # Every (row, j) pass reads one input stream and performs two
        # multiply-adds per point (absolute values are formed in
        # registers), so the per-pass cost is uniform across row kinds.
        for start in range(0, count, tile):
            k = min(tile, count - start)
            for i in range(k):
                out[start + i] = True
            for r in range(level_rows):
                for j in range(width):
                    cl = left[r, j]
                    cr = right[r, j]
                    row = aug_t[j]
                    if j == 0:
                        for i in range(k):
                            a = row[start + i]
                            if a < 0:
                                a = -a
                            acc_l[i] = cl * a
                            acc_r[i] = cr * a
                    else:
                        for i in range(k):
                            a = row[start + i]
                            if a < 0:
                                a = -a
                            acc_l[i] += cl * a
                            acc_r[i] += cr * a
                for i in range(k):
                    out[start + i] &= acc_l[i] <= acc_r[i]
            for r in range(m):
                for j in range(width):
                    cs = slack[r, j]
                    cc = center[r, j]
                    row = aug_t[j]
                    if j == 0:
                        for i in range(k):
                            a = row[start + i]
                            aa = a if a >= 0 else -a
                            acc_l[i] = cs * aa
                            acc_r[i] = cc * a
                    else:
                        for i in range(k):
                            a = row[start + i]
                            aa = a if a >= 0 else -a
                            acc_l[i] += cs * aa
                            acc_r[i] += cc * a
                for i in range(k):
                    c = acc_r[i]
                    if c < 0:
                        c = -c
                    out[start + i] &= c <= acc_l[i]
        return out

    _KERNEL = kernel
    return _KERNEL


class AbsFormEvaluator:
    """Amortized midpoint-radius membership for many points of one system.

    The evaluator precomputes, for each of the kappa-1 ordering levels,
    the prefix-summed radius rows of both quantifier sides, plus the
    full radius-slack row (exists minus forall) and the summed center
    row; everything is cleared to int64 by one common denominator.  A
    batch of encoded points is then decided in exact integer
    arithmetic, 2 * kappa * m * (n+1) multiply-adds per point.  When
    the conservative overflow bound fails, evaluation falls back to the
    per-point rational path, so verdicts always equal
    ``member_absform``.
    """

    def __init__(self, gen: GeneralizedIQSystem) -> None:
        self.gen = gen
        m, n = gen.shape
        kappa = gen.kappa
        self._m, self._n, self._kappa = m, n, kappa
        # Prefix-summed augmented rows [radius matrix | radius rhs] for the
        # kappa-1 ordering levels, kept as separate forall/exists sides.
        left_rows: List[List[Rational]] = []
        right_rows: List[List[Rational]] = []
        acc_l = [[_ZERO] * (n + 1) for _ in range(m)]
        acc_r = [[_ZERO] * (n + 1) for _ in range(m)]
        for s in range(kappa):
            af, ae, bf, be = gen.block(s + 1)
            rad_f = af.rad()
            rad_e = ae.rad()
            for i in range(m):
                for j in range(n):
                    acc_l[i][j] += rad_f[i][j]
                    acc_r[i][j] += rad_e[i][j]
                acc_l[i][n] += bf[i].rad()
                acc_r[i][n] += be[i].rad()
            if s < kappa - 1:
                left_rows.extend([list(row) for row in acc_l])
                right_rows.extend([list(row) for row in acc_r])
        # Decisive rows: full radius slack (exists minus forall) and center.
        slack_rows = [
            [acc_r[i][j] - acc_l[i][j] for j in range(n + 1)] for i in range(m)
        ]
        center_rows = [[_ZERO] * (n + 1) for _ in range(m)]
        for s in range(kappa):
            af, ae, bf, be = gen.block(s + 1)
            mid_f = af.mid()
            mid_e = ae.mid()
            for i in range(m):
                for j in range(n):
                    center_rows[i][j] += mid_f[i][j] + mid_e[i][j]
                center_rows[i][n] -= bf[i].mid() + be[i].mid()
        scale = 1
        for rows in (left_rows, right_rows, slack_rows, center_rows):
            for row in rows:
                for value in row:
                    scale = math.lcm(scale, int(value.denominator))
        self._scale = scale

        def scaled(rows: Sequence[Sequence[Rational]]) -> np.ndarray:
            arr = np.array(
                [[_as_int(v * scale) for v in row] for row in rows], dtype=np.int64
            )
            return arr.reshape((len(rows), n + 1))

        self._left = scaled(left_rows)      # ((kappa-1)*m, n+1)
        self._right = scaled(right_rows)    # ((kappa-1)*m, n+1)
        self._slack = scaled(slack_rows)    # (m, n+1)
        self._center = scaled(center_rows)  # (m, n+1)
        coeff_max = 1
        for arr in (self._left, self._right, self._slack, self._center):
            if arr.size:
                coeff_max = max(coeff_max, int(np.abs(arr).max()))
        self._coeff_max = coeff_max

    # Tile width of the numpy fallback (keeps per-tile products cache resident).
    _TILE = 2048

    def member(self, x: PointLike) -> bool:
        return self.member_many([x])[0]

    def encode_points(self, points: Sequence[PointLike]) -> Optional[np.ndarray]:
        """Clear point denominators into an int64 array for ``member_batch``.

        Each point becomes the column (x * lx, lx) with lx the positive
        lcm of its denominators, which leaves every membership
        inequality unchanged.  Returns None when the conservative
        overflow bound rules out exact int64 evaluation.
        """
        pvs = [_point(x, self._n) for x in points]
        n = self._n
        num = np.empty((n + 1, len(pvs)), dtype=object)
        max_abs_x = 0
        for k, pv in enumerate(pvs):
            lx = 1
            for v in pv:
                lx = math.lcm(lx, int(v.denominator))
            num[n, k] = lx
            for j, v in enumerate(pv):
                scaled = int(v.numerator) * (lx // int(v.denominator))
                num[j, k] = scaled
                if -scaled > max_abs_x or scaled > max_abs_x:
                    max_abs_x = abs(scaled)
            if lx > max_abs_x:
                max_abs_x = lx
        # Each accumulated row value is at most coeff * (n+1) * max|entry| in
        # magnitude; factor 2 leaves headroom for the comparisons.
        bound = 2 * self._coeff_max * (n + 1) * max_abs_x
        if bound >= 2 ** 62:
            return None
        return num.astype(np.int64)

    def member_many(self, points: Sequence[PointLike]) -> List[bool]:
        encoded = self.encode_points(points)
        if encoded is None:
            return [member_absform(self.gen, _point(x, self._n)).member for x in points]
        return [bool(v) for v in self.member_batch(encoded)]

    def member_batch(self, aug: np.ndarray) -> np.ndarray:
        """Exact int64 membership kernel for an encoded batch.

        Returns a boolean array, one verdict per point column.  Exactly
        2 * kappa * m * (n+1) integer multiply-adds per point; the
        caller has already certified (via ``encode_points``) that no
        intermediate can overflow, so 64-bit wraparound cannot occur.
        """
        kernel = _compiled_kernel()
        out = np.empty(aug.shape[1], dtype=np.bool_)
        if kernel is not None:
            kernel(aug, self._left, self._right, self._slack, self._center, out)
            return out
        return self._member_batch_numpy(aug, out)

    def _member_batch_numpy(self, aug: np.ndarray, out: np.ndarray) -> np.ndarray:
        """Vectorized fallback used when no jit compiler is available.

        Tiled so per-tile products stay cache resident; identical
        verdicts to the compiled kernel.
        """
        count = aug.shape[1]
        tile = self._TILE
        for start in range(0, count, tile):
            stop = min(start + tile, count)
            chunk = aug[:, start:stop]
            absx = np.abs(chunk)
            slack = self._slack @ absx
            center = self._center @ chunk
            ok = (np.abs(center) <= slack).all(axis=0)
            if self._kappa > 1:
                ok &= (self._left @ absx <= self._right @ absx).all(axis=0)
            out[start:stop] = ok
        return out
