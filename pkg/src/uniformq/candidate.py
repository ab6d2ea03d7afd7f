"""Dual adjacency matrix candidates: synthesis and exact verification.

Relative to a base vertex, a diagonal matrix A* with mutually distinct
level values theta*_0..theta*_eps is a dual adjacency matrix candidate
when

    A^3 A* - A* A^3 + (beta+1)(A A* A^2 - A^2 A* A)
        = gamma (A^2 A* - A* A^2) + rho (A A* - A* A)

for some scalars beta, gamma, rho; on bipartite graphs gamma is forced
to 0.  Candidates are synthesised from a uniform structure by a
six-step procedure: a level-independent beta from the parameter ratios,
a theta* ladder from the F-ratios, distinctness, a beta/F compatibility
identity, constancy of f with rho = f (beta + 2), and emission.

Verification is double-tracked: the matrix route evaluates the relation
exactly, and an independent entrywise oracle recomputes each commutator
entry from brute-force walk enumeration, never from matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from .graphs import BaseContext, Graph
from .linalg import ExactMatrix, int_matmul_flat
from .scalars import QuadExt, exact_sqrt, scalar_to_json
from .uniform import UniformParams


@dataclass(frozen=True)
class DualCandidate:
    theta_star: tuple
    beta: Fraction
    gamma: Fraction
    rho: Fraction

    def to_json(self, verified: Optional[bool] = None,
                rejected_step: Optional[int] = None) -> dict:
        return {
            "theta_star": [scalar_to_json(t) for t in self.theta_star],
            "beta": scalar_to_json(self.beta),
            "gamma": scalar_to_json(self.gamma),
            "rho": scalar_to_json(self.rho),
            "verified": verified,
            "rejected_step": rejected_step,
        }


def dual_diagonal(ctx: BaseContext, theta_star: Sequence) -> ExactMatrix:
    """Diagonal matrix with (y,y)-entry theta*_{dist(x,y)}."""
    eps = ctx.eccentricity
    if len(theta_star) != eps + 1:
        raise ValueError(
            f"need {eps + 1} level values, got {len(theta_star)}"
        )
    if len(set(theta_star)) != eps + 1:
        raise ValueError("level values must be mutually distinct")
    return ExactMatrix.diagonal([theta_star[d] for d in ctx.dist])


@dataclass
class TridiagReport:
    holds: bool
    residual_support: list[tuple[int, int]]  # (z, y) pairs, row-major
    residual_values: Optional[list] = None

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "residual_support": [list(p) for p in self.residual_support],
        }


def _diagonal_values(astar: ExactMatrix) -> list:
    n = astar.rows
    for i in range(n):
        for j in range(n):
            if i != j and astar.entries[i * n + j] != 0:
                raise ValueError("dual adjacency candidate must be diagonal")
    return [astar.entries[i * n + i] for i in range(n)]


def verify_tridiagonal(a: ExactMatrix, astar: ExactMatrix, beta, gamma, rho,
                       collect_all: bool = False) -> TridiagReport:
    """Exactly evaluate the cubic commutator relation.

    The residual matrix is

        A^3 A* - A* A^3 + (beta+1)(A A* A^2 - A^2 A* A)
            - gamma (A^2 A* - A* A^2) - rho (A A* - A* A);

    the relation holds iff it vanishes.  With collect_all=False the scan
    stops at the first nonzero entry in row-major order.
    """
    if not a.is_square() or a.rows != astar.rows or a.cols != astar.cols:
        raise ValueError("matrices must be square of matching dimensions")
    n = a.rows
    beta, gamma, rho = Fraction(beta), Fraction(gamma), Fraction(rho)
    diag = _diagonal_values(astar)

    ints = a.int_entries()
    d_den = 1
    if ints is not None:
        for v in diag:
            if isinstance(v, QuadExt):
                ints = None
                break
            d_den = lcm(d_den, Fraction(v).denominator)

    if ints is not None:
        d_int = [int(Fraction(v) * d_den) for v in diag]
        a2 = int_matmul_flat(ints, ints, n, n, n)
        a3 = int_matmul_flat(a2, ints, n, n, n)
        da2 = _row_scale(a2, d_int, n)
        a2d = _col_scale(a2, d_int, n)
        t1 = int_matmul_flat(ints, da2, n, n, n)
        t2 = int_matmul_flat(a2d, ints, n, n, n)
        c3 = [x - y for x, y in zip(_col_scale(a3, d_int, n),
                                    _row_scale(a3, d_int, n))]
        cmix = [x - y for x, y in zip(t1, t2)]
        c2 = [x - y for x, y in zip(a2d, da2)]
        c1 = [x - y for x, y in zip(_col_scale(ints, d_int, n),
                                    _row_scale(ints, d_int, n))]
    else:
        a2m = a * a
        a3m = a2m * a
        c3 = ((a3m * astar) - (astar * a3m)).entries
        cmix = ((a * (astar * a2m)) - ((a2m * astar) * a)).entries
        c2 = ((a2m * astar) - (astar * a2m)).entries
        c1 = ((a * astar) - (astar * a)).entries

    bp1 = beta + 1
    support = []
    values = [] if collect_all else None
    for idx in range(n * n):
        r = c3[idx] + bp1 * cmix[idx] - gamma * c2[idx] - rho * c1[idx]
        if r != 0:
            support.append((idx // n, idx % n))
            if collect_all:
                values.append(r / d_den if d_den != 1 else r)
            else:
                return TridiagReport(False, support, None)
    return TridiagReport(not support, support, values)


def _row_scale(flat: list, d: list, n: int) -> list:
    out = []
    for i in range(n):
        di = d[i]
        out.extend(di * v if di != 1 else v for v in flat[i * n:(i + 1) * n])
    return out


def _col_scale(flat: list, d: list, n: int) -> list:
    out = []
    for i in range(n):
        row = flat[i * n:(i + 1) * n]
        out.extend(v * dj if dj != 1 else v for v, dj in zip(row, d))
    return out


def entrywise_oracle(g: Graph, ctx: BaseContext, theta_star: Sequence,
                     y: int, z: int) -> tuple:
    """(z,y)-entries of the four commutators, from walk enumeration only.

    Returns the entries of A^3 A* - A* A^3, A A* A^2 - A^2 A* A,
    A^2 A* - A* A^2 and A A* - A* A, each computed by brute-force walk
    counting (never via matrix products).
    """
    if not (0 <= y < g.n and 0 <= z < g.n):
        raise ValueError("vertex out of range")
    th = [Fraction(t) for t in theta_star]
    dist = ctx.dist
    ty, tz = th[dist[y]], th[dist[z]]

    gamma3 = 0
    mix = Fraction(0)
    for v in g.adj[y]:
        tv = th[dist[v]]
        for w in g.adj[v]:
            if z in g.adj[w]:
                gamma3 += 1
                mix += th[dist[w]] - tv
    gamma2 = sum(1 for v in g.adj[y] if z in g.adj[v])
    first = gamma3 * (ty - tz)
    third = gamma2 * (ty - tz)
    fourth = (ty - tz) if z in g.adj[y] else Fraction(0)
    return (first, mix, third, fourth)


# -- synthesis from a uniform structure ---------------------------------------


def uniform_ratio(params: UniformParams, i: int) -> Fraction:
    """F(i) = -(e+_i - 1)/(e-_{i+1} - 1), defined for 1 <= i <= eps-1."""
    if not (1 <= i <= params.eps - 1):
        raise ValueError(f"F({i}) undefined for eps = {params.eps}")
    den = params.em(i + 1) - 1
    if den == 0:
        raise ZeroDivisionError(f"e-_{i + 1} = 1 makes F({i}) undefined")
    return -(params.ep(i) - 1) / den


@dataclass
class BetaResult:
    consistent: bool
    beta: Optional[Fraction] = None
    level: Optional[int] = None
    reason: Optional[str] = None


def beta_from_structure(params: UniformParams) -> BetaResult:
    """Level-independent beta from beta + 1 = (e-_{i+1}-1)(e+_i-1) /
    (1 - e+_i e-_{i+1}), for 1 <= i <= eps-1.

    All failures are structured returns carrying the offending level.
    """
    if params.eps < 3:
        raise ValueError("candidate synthesis requires eccentricity >= 3")
    beta = None
    for i in range(1, params.eps):
        em, ep = params.em(i + 1), params.ep(i)
        if em == 1:
            return BetaResult(False, None, i + 1, f"e-_{i + 1} = 1")
        if ep == 1:
            return BetaResult(False, None, i, f"e+_{i} = 1")
        if ep * em == 1:
            return BetaResult(False, None, i, f"e+_{i} e-_{i + 1} = 1")
        val = (em - 1) * (ep - 1) / (1 - ep * em) - 1
        if beta is None:
            beta = val
        elif val != beta:
            return BetaResult(
                False, None, i,
                f"beta differs between levels: {beta} vs {val}",
            )
    if beta in (-2, -1):
        return BetaResult(False, None, None, f"beta = {beta} is excluded")
    return BetaResult(True, beta)


def theta_from_structure(params: UniformParams, theta0, theta1) -> tuple:
    """theta*_{i+1} = theta*_1 + (theta*_1 - theta*_0) *
    sum_{j=1}^{i} (-1)^j prod_{k=1}^{j} F(k).

    Distinctness of the output is not guaranteed; callers check it.
    """
    theta0, theta1 = Fraction(theta0), Fraction(theta1)
    if theta0 == theta1:
        raise ValueError("need theta*_0 != theta*_1")
    eps = params.eps
    theta = [theta0, theta1]
    total = Fraction(0)
    prod = Fraction(1)
    for i in range(1, eps):
        prod *= -uniform_ratio(params, i)
        total += prod
        theta.append(theta1 + (theta1 - theta0) * total)
    return tuple(theta)


@dataclass
class Eq7aResult:
    ok: bool
    level: Optional[int] = None


def check_eq7a(params: UniformParams, beta) -> Eq7aResult:
    """Check 1 + F(i-1) F(i) = -beta F(i-1) for 2 <= i <= eps-1."""
    beta = Fraction(beta)
    for i in range(2, params.eps):
        fim1 = uniform_ratio(params, i - 1)
        fi = uniform_ratio(params, i)
        if 1 + fim1 * fi != -beta * fim1:
            return Eq7aResult(False, i)
    return Eq7aResult(True)


@dataclass
class SearchResult:
    candidate: Optional[DualCandidate]
    rejected_step: Optional[int] = None
    reason: Optional[str] = None

    @property
    def accepted(self) -> bool:
        return self.candidate is not None

    def to_json(self) -> dict:
        if self.candidate is not None:
            return self.candidate.to_json(rejected_step=None)
        return {
            "theta_star": None,
            "beta": None,
            "gamma": None,
            "rho": None,
            "verified": None,
            "rejected_step": self.rejected_step,
            "reason": self.reason,
        }


def candidate_search(params: UniformParams, theta0=Fraction(-1),
                     theta1=Fraction(0)) -> SearchResult:
    """Six-step candidate synthesis from a uniform structure.

    1. a level-independent beta outside {-2, -1} exists;
    2. build the theta* ladder from (theta*_0, theta*_1);
    3. the theta* values are mutually distinct;
    4. the compatibility identity 1 + F(i-1)F(i) = -beta F(i-1) holds;
    5. the f_i are constant, setting rho = f (beta + 2);
    6. emit the candidate (gamma = 0 in the bipartite setting).

    Rejections carry the failing step; they are results, not errors.
    """
    if params.eps < 3:
        raise ValueError("candidate synthesis requires eccentricity >= 3")
    theta0, theta1 = Fraction(theta0), Fraction(theta1)
    if theta0 == theta1:
        raise ValueError("need theta*_0 != theta*_1")

    step1 = beta_from_structure(params)
    if not step1.consistent:
        return SearchResult(None, 1, step1.reason)
    beta = step1.beta

    theta = theta_from_structure(params, theta0, theta1)

    if len(set(theta)) != len(theta):
        return SearchResult(None, 3, "theta* values are not distinct")

    step4 = check_eq7a(params, beta)
    if not step4.ok:
        return SearchResult(
            None, 4, f"compatibility identity fails at level {step4.level}"
        )

    fs = {params.fi(i) for i in range(1, params.eps + 1)}
    if len(fs) != 1:
        return SearchResult(None, 5, "f_i is not constant across levels")
    rho = fs.pop() * (beta + 2)
    return SearchResult(DualCandidate(theta, beta, Fraction(0), rho))


def closed_form_theta(beta, f1, i: int) -> Fraction:
    """theta*_i under the normalisation theta*_0 = -1, theta*_1 = 0.

    Uses the arithmetic-progression form at beta = 2 and the geometric
    two-root form otherwise (roots (beta +- sqrt(beta^2-4))/2, evaluated
    in the quadratic extension and collapsing to a rational).  When the
    roots are not real quadratic (beta^2 < 4, or the double root at
    beta = -2) the equivalent constant-recursive evaluation
    P(i) = beta P(i-1) - P(i-2), P(0) = 1, P(1) = -F(1),
    theta*_i = sum_{j<i} P(j) is used directly.
    """
    if i < 0:
        raise ValueError("need i >= 0")
    beta, f1 = Fraction(beta), Fraction(f1)
    if i == 0:
        return Fraction(-1)
    if i == 1:
        return Fraction(0)
    if beta == 2:
        return Fraction(i - 1) * (2 - (1 + f1) * i) / 2
    disc = beta * beta - 4
    if disc <= 0:
        return _theta_by_recurrence(beta, f1, i)
    s = exact_sqrt(disc)
    rp = (beta + s) / 2
    rm = (beta - s) / 2
    out = (1 + rp * f1) / ((beta - 2) * (1 + rp)) * (1 - rp ** (i - 1)) \
        + (1 + rm * f1) / ((beta - 2) * (1 + rm)) * (1 - rm ** (i - 1))
    if isinstance(out, QuadExt):
        raise ArithmeticError("theta* closed form failed to collapse to Q")
    return Fraction(out)


def _theta_by_recurrence(beta: Fraction, f1: Fraction, i: int) -> Fraction:
    """theta*_i = P(1) + ... + P(i-1) with P(0) = 1, P(1) = -F(1) and
    P(j) = beta P(j-1) - P(j-2)."""
    p_prev, p_cur = Fraction(1), -f1
    total = Fraction(0)
    for _ in range(1, i):
        total += p_cur
        p_prev, p_cur = p_cur, beta * p_cur - p_prev
    return total
