"""Uniform structures on bipartite graphs and thin module decomposition.

A uniform structure relative to a base vertex is a triple of per-level
scalars (e-_i, e+_i, f_i) such that the operator identity

    e-_i R L^2 + L R L + e+_i L^2 R = f_i L

holds on the i-th subconstituent for every level 1 <= i <= eps, with the
conventions e-_1 = 0 and e+_eps = 0.  The scalars assemble into the
tridiagonal parameter matrix U (unit diagonal, subdiagonal e-, super-
diagonal e+) whose contiguous principal blocks must all be nonsingular.

When the identity holds, the standard module splits into thin
irreducible modules; each module is a chain w_r, ..., w_{r+d} with
L w_r = 0, L w_{r+i} = w_{r+i-1} and R w_{r+i-1} = x_{r+i} w_{r+i},
where the x-scalars solve the linear system U(r,d) x = (f_{r+1}, ...,
f_{r+d}) over the corresponding principal block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .graphs import LFRSplit
from .linalg import (
    ExactMatrix,
    Inconsistent,
    UniqueSolution,
    normalize_vector,
    nullspace,
    rank,
    solve_linear,
)
from .scalars import rational_power, scalar_to_json


@dataclass(frozen=True)
class UniformParams:
    """Per-level scalars, stored 1-based: position k holds level k+1.

    e_minus covers levels 1..eps with e_minus[0] = 0 by convention;
    e_plus covers levels 1..eps with e_plus[eps-1] = 0 by convention;
    f covers levels 1..eps.
    """

    e_minus: tuple
    e_plus: tuple
    f: tuple

    def __post_init__(self):
        eps = len(self.f)
        if len(self.e_minus) != eps or len(self.e_plus) != eps:
            raise ValueError("parameter arrays must all have length eps")
        if eps < 1:
            raise ValueError("need eps >= 1")
        if self.e_minus[0] != 0:
            raise ValueError("convention e-_1 = 0 violated")
        if self.e_plus[eps - 1] != 0:
            raise ValueError("convention e+_eps = 0 violated")

    @property
    def eps(self) -> int:
        return len(self.f)

    def em(self, i: int) -> Fraction:
        return Fraction(self.e_minus[i - 1])

    def ep(self, i: int) -> Fraction:
        return Fraction(self.e_plus[i - 1])

    def fi(self, i: int) -> Fraction:
        return Fraction(self.f[i - 1])

    @staticmethod
    def constant(eps: int, em, ep, f) -> "UniformParams":
        """Level-independent parameters (conventions fill the edge slots)."""
        em, ep, f = Fraction(em), Fraction(ep), Fraction(f)
        return UniformParams(
            (Fraction(0),) + (em,) * (eps - 1),
            (ep,) * (eps - 1) + (Fraction(0),),
            (f,) * eps,
        )

    def to_json(self) -> dict:
        return {
            "e_minus": [scalar_to_json(x) for x in self.e_minus],
            "e_plus": [scalar_to_json(x) for x in self.e_plus],
            "f": [scalar_to_json(x) for x in self.f],
        }

    @staticmethod
    def from_json(data: dict) -> "UniformParams":
        return UniformParams(
            tuple(Fraction(x) for x in data["e_minus"]),
            tuple(Fraction(x) for x in data["e_plus"]),
            tuple(Fraction(x) for x in data["f"]),
        )


def parameter_matrix(params: UniformParams) -> ExactMatrix:
    """The eps x eps tridiagonal matrix U (unit diagonal)."""
    eps = params.eps
    m = ExactMatrix.zeros(eps, eps)
    for i in range(1, eps + 1):
        m.entries[(i - 1) * eps + (i - 1)] = Fraction(1)
        if i >= 2:
            m.entries[(i - 1) * eps + (i - 2)] = params.em(i)
        if i <= eps - 1:
            m.entries[(i - 1) * eps + i] = params.ep(i)
    return m


@dataclass
class ParamValidation:
    ok: bool
    reason: Optional[str] = None
    consequence_holds: Optional[bool] = None  # e-_{i+1} e+_i != 1 throughout


def validate_parameter_matrix(params: UniformParams) -> ParamValidation:
    """Check the parameter matrix conditions exactly.

    (i) unit diagonal is structural; (ii) for each 2 <= i <= eps at
    least one of e-_i, e+_{i-1} is nonzero; (iii) every contiguous
    principal block is nonsingular (checked via the tridiagonal
    determinant recurrence).  Also reports whether the derived
    consequence e-_{i+1} e+_i != 1 holds.
    """
    eps = params.eps
    for i in range(2, eps + 1):
        if params.em(i) == 0 and params.ep(i - 1) == 0:
            return ParamValidation(
                False, f"e-_{i} and e+_{i - 1} both vanish", None
            )
    for s in range(1, eps + 1):
        prev2, prev1 = Fraction(1), Fraction(1)  # det of empty and 1x1 block
        for t in range(s + 1, eps + 1):
            d = prev1 - params.ep(t - 1) * params.em(t) * prev2
            if d == 0:
                return ParamValidation(
                    False, f"principal block ({s}..{t}) is singular", None
                )
            prev2, prev1 = prev1, d
    consequence = all(
        params.em(i + 1) * params.ep(i) != 1 for i in range(1, eps)
    )
    return ParamValidation(True, None, consequence)


# -- the operator identity -----------------------------------------------------


def _require_bipartite(split: LFRSplit) -> None:
    if not split.is_bipartite():
        raise ValueError("uniform structures require a bipartite graph (F = 0)")


def _level_operator_columns(split: LFRSplit, y: int):
    """For basis vector e_y: columns of RL^2, LRL, L^2R and L."""
    n = split.graph.n
    v = [0] * n
    v[y] = 1
    lv = split.apply_lowering(v)
    rl2 = split.apply_raising(split.apply_lowering(lv))
    lrl = split.apply_lowering(split.apply_raising(lv))
    l2r = split.apply_lowering(split.apply_lowering(split.apply_raising(v)))
    return rl2, lrl, l2r, lv


@dataclass
class UniformCheck:
    passed: bool
    level: Optional[int] = None
    witness: Optional[int] = None  # basis vertex whose column fails
    residual: Optional[list] = None


def verify_uniform(split: LFRSplit, params: UniformParams) -> UniformCheck:
    """Check the identity on every standard basis vector of every level.

    Linearity makes the standard basis sufficient.
    """
    _require_bipartite(split)
    ctx = split.ctx
    if params.eps != ctx.eccentricity:
        raise ValueError(
            f"parameter length {params.eps} != eccentricity {ctx.eccentricity}"
        )
    for i in range(1, ctx.eccentricity + 1):
        em, ep, f = params.em(i), params.ep(i), params.fi(i)
        for y in ctx.levels[i]:
            rl2, lrl, l2r, lv = _level_operator_columns(split, y)
            residual = [
                em * a + b + ep * c - f * d
                for a, b, c, d in zip(rl2, lrl, l2r, lv)
            ]
            if any(x != 0 for x in residual):
                return UniformCheck(False, i, y, residual)
    return UniformCheck(True)


@dataclass
class LevelFit:
    level: int
    solution: object  # UniqueSolution | AffineSolution | Inconsistent
    canonical: Optional[tuple]  # (e-, e+, f) with free coordinates zeroed
    equations: ExactMatrix = field(repr=False, default=None)
    rhs: list = field(repr=False, default=None)

    def is_consistent(self) -> bool:
        return not isinstance(self.solution, Inconsistent)

    def contains(self, em, ep, f) -> bool:
        """Exact membership of a triple in this level's solution set."""
        if not self.is_consistent():
            return False
        x = [Fraction(em), Fraction(ep), Fraction(f)]
        return self.equations.apply(x) == self.rhs


@dataclass
class UniformFit:
    levels: list[LevelFit]
    feasible: bool
    canonical: Optional[UniformParams]

    def contains_params(self, params: UniformParams) -> bool:
        """Every level's solution set contains the given per-level triple."""
        return all(
            fit.contains(params.em(i), params.ep(i), params.fi(i))
            for i, fit in enumerate(self.levels, start=1)
        )


def fit_uniform(split: LFRSplit) -> UniformFit:
    """Exact affine solution set of (e-_i, e+_i, f_i) per level.

    The conventions pin the e-_1 and e+_eps coordinates to zero.  An
    empty set at any level means no uniform structure exists.  The
    canonical representative zeroes the free coordinates of the reduced
    system.
    """
    _require_bipartite(split)
    ctx = split.ctx
    eps = ctx.eccentricity
    fits: list[LevelFit] = []
    feasible = True
    for i in range(1, eps + 1):
        rows: list[list] = []
        rhs: list = []
        for y in ctx.levels[i]:
            rl2, lrl, l2r, lv = _level_operator_columns(split, y)
            for z in range(split.graph.n):
                if rl2[z] or lrl[z] or l2r[z] or lv[z]:
                    rows.append([rl2[z], l2r[z], -lv[z]])
                    rhs.append(Fraction(-lrl[z]))
        if i == 1:
            rows.append([1, 0, 0])
            rhs.append(Fraction(0))
        if i == eps:
            rows.append([0, 1, 0])
            rhs.append(Fraction(0))
        eqs = ExactMatrix.from_rows(rows) if rows else ExactMatrix.zeros(0, 3)
        sol = solve_linear(eqs, rhs)
        if isinstance(sol, Inconsistent):
            canonical = None
            feasible = False
        elif isinstance(sol, UniqueSolution):
            canonical = tuple(sol.x)
        else:
            canonical = tuple(sol.particular)
        fits.append(LevelFit(i, sol, canonical, eqs, rhs))
    params = None
    if feasible:
        params = UniformParams(
            tuple(fit.canonical[0] for fit in fits),
            tuple(fit.canonical[1] for fit in fits),
            tuple(fit.canonical[2] for fit in fits),
        )
    return UniformFit(fits, feasible, params)


def fit_uniform_constant(split: LFRSplit) -> Optional[UniformParams]:
    """Fit a level-independent triple (e-, e+, f) across all levels.

    The conventions e-_1 = 0 and e+_eps = 0 enforce themselves: the
    coefficient of e- vanishes identically on level 1 (L^2 annihilates
    it) and that of e+ on level eps.  Returns None when no constant
    uniform structure exists; with free coordinates remaining, they are
    zeroed as in the per-level fit.
    """
    _require_bipartite(split)
    ctx = split.ctx
    eps = ctx.eccentricity
    rows: list[list] = []
    rhs: list = []
    for i in range(1, eps + 1):
        for y in ctx.levels[i]:
            rl2, lrl, l2r, lv = _level_operator_columns(split, y)
            for z in range(split.graph.n):
                if rl2[z] or lrl[z] or l2r[z] or lv[z]:
                    rows.append([rl2[z], l2r[z], -lv[z]])
                    rhs.append(Fraction(-lrl[z]))
    sol = solve_linear(ExactMatrix.from_rows(rows), rhs)
    if isinstance(sol, Inconsistent):
        return None
    triple = sol.x if isinstance(sol, UniqueSolution) else sol.particular
    return UniformParams.constant(eps, triple[0], triple[1], triple[2])


# -- x-scalars ------------------------------------------------------------------


def solve_x_scalars(params: UniformParams, r: int, d: int) -> list[Fraction]:
    """Solve U(r,d) x = (f_{r+1}, ..., f_{r+d}) over the principal block
    with rows and columns r+1..r+d."""
    if not (r >= 0 and d >= 1 and r + d <= params.eps):
        raise ValueError(f"invalid (r, d) = ({r}, {d}) for eps = {params.eps}")
    u = parameter_matrix(params)
    block = ExactMatrix.from_rows(
        [[u[(i, j)] for j in range(r, r + d)] for i in range(r, r + d)]
    )
    rhs = [params.fi(r + i) for i in range(1, d + 1)]
    sol = solve_linear(block, rhs)
    if not isinstance(sol, UniqueSolution):
        raise ArithmeticError(
            f"U({r},{d}) is singular; parameter matrix is invalid"
        )
    return [Fraction(x) for x in sol.x]


def closed_form_x(b, e, D: int, d: int, i: int) -> Fraction:
    """x_{r+i} = -b^(D+e) (b^(i-d-1) - 1)(b^i - 1)/(b - 1)^2.

    Independent of the endpoint r.  Requires b^(D+e) rational.
    """
    if not (1 <= i <= d):
        raise ValueError(f"need 1 <= i <= d, got i={i}, d={d}")
    b = Fraction(b)
    power = rational_power(b, Fraction(e) + D)
    if not isinstance(power, (int, Fraction)):
        raise ValueError(f"b^(D+e) = {b}^({D}+{e}) is irrational")
    return Fraction(
        -power * (b ** (i - d - 1) - 1) * (b ** i - 1) / (b - 1) ** 2
    )


# -- thin module decomposition ---------------------------------------------------


@dataclass
class TModule:
    endpoint: int
    diameter: int
    basis: list[list]  # w_r .. w_{r+d}, full-length coordinate vectors
    x_scalars: list[Fraction]  # x_{r+1} .. x_{r+d}


@dataclass
class Decomposition:
    modules: list[TModule]
    vertex_count: int
    certified_direct_sum: bool

    def multiplicities(self) -> dict[tuple[int, int], int]:
        table: dict[tuple[int, int], int] = {}
        for m in self.modules:
            key = (m.endpoint, m.diameter)
            table[key] = table.get(key, 0) + 1
        return table

    def to_json(self) -> list:
        mult = self.multiplicities()
        out = []
        for (r, d) in sorted(mult):
            x = None
            for m in self.modules:
                if (m.endpoint, m.diameter) == (r, d):
                    x = [str(v) for v in m.x_scalars]
                    break
            out.append(
                {"r": r, "d": d, "x": x, "multiplicity": mult[(r, d)]}
            )
        return out


def module_rep_matrix(module: TModule) -> ExactMatrix:
    """Tridiagonal action of A on the module chain basis: superdiagonal
    ones, subdiagonal x-scalars."""
    d = module.diameter
    m = ExactMatrix.zeros(d + 1, d + 1)
    for i in range(d):
        m.entries[i * (d + 1) + i + 1] = 1
        m.entries[(i + 1) * (d + 1) + i] = module.x_scalars[i]
    return m


def _kernel_of_lowering(split: LFRSplit, r: int) -> list[list]:
    """Basis of ker L restricted to level r, as full-length vectors."""
    ctx = split.ctx
    level = ctx.levels[r]
    if r == 0:
        v = [Fraction(0)] * split.graph.n
        v[ctx.base] = Fraction(1)
        return [v]
    upper = ctx.levels[r - 1]
    pos = {z: k for k, z in enumerate(upper)}
    rows = [[0] * len(level) for _ in upper]
    for col, y in enumerate(level):
        for z in split.down[y]:
            rows[pos[z]][col] = 1
    block = ExactMatrix.from_rows(rows) if upper else ExactMatrix.zeros(0, len(level))
    basis_small = nullspace(block)
    out = []
    for small in basis_small:
        v = [Fraction(0)] * split.graph.n
        for val, y in zip(small, level):
            v[y] = val
        out.append(v)
    return out


def _coords_matrix(vectors: list[list], support: Sequence[int]) -> ExactMatrix:
    return ExactMatrix.from_rows(
        [[v[idx] for v in vectors] for idx in support]
    )


def decompose_modules(split: LFRSplit, params: UniformParams,
                      certify: bool = True) -> Decomposition:
    """Split the standard module into thin irreducible module chains.

    For each endpoint r, generators of ker L on level r are filtered by
    the exact length of their raising chain (longest chains first), so
    each generator has a well-defined diameter; chains are normalised
    with the solved x-scalars and every chain relation is re-verified
    exactly.  With certify=True the stacked bases are certified to be a
    direct sum by a full-rank check.
    """
    check = verify_uniform(split, params)
    if not check.passed:
        raise ValueError(
            f"uniform verification failed at level {check.level}; "
            "decomposition requires a uniform structure"
        )
    ctx = split.ctx
    eps = ctx.eccentricity
    n = split.graph.n
    modules: list[TModule] = []
    for r in range(eps + 1):
        kernel = _kernel_of_lowering(split, r)
        k = len(kernel)
        if k == 0:
            continue
        max_d = eps - r
        # R-power chains of the kernel basis, in full coordinates, and
        # their lowerings (for the chain conditions below)
        powers = [kernel]
        for _ in range(max_d + 1):
            powers.append([split.apply_raising(v) for v in powers[-1]])
        lowered = [None] + [
            [split.apply_lowering(v) for v in powers[i]]
            for i in range(1, max_d + 1)
        ]
        # S_d = vectors (in kernel coordinates) whose R-chain dies by d
        coord_bases: dict[int, list[list]] = {}
        dims: dict[int, int] = {-1: 0}
        for d in range(max_d + 1):
            if d == max_d:
                basis = [
                    [Fraction(1) if i == j else Fraction(0) for i in range(k)]
                    for j in range(k)
                ]
            else:
                target = ctx.levels[r + d + 1]
                mat = _coords_matrix(powers[d + 1], target)
                basis = nullspace(mat)
            coord_bases[d] = basis
            dims[d] = len(basis)
        # Valid diameter-d generators satisfy, beyond R^(d+1) v = 0, the
        # chain conditions L R^i v = x_{r+i} R^(i-1) v (1 <= i <= d); a
        # bare complement of S_{d-1} in S_d could mix diameters and
        # break the chain normalisation.
        for d in range(max_d, -1, -1):
            want = dims[d] - dims[d - 1]
            if want <= 0:
                continue
            gen_space = _generator_space(
                split, params, r, d, k, powers, lowered, coord_bases[d]
            )
            lower = coord_bases[d - 1] if d > 0 else []
            chosen = _complement_basis(gen_space, lower, want)
            for coords in chosen:
                gen = [Fraction(0)] * n
                for c, v in zip(coords, kernel):
                    if c:
                        for idx, val in enumerate(v):
                            if val:
                                gen[idx] += c * val
                modules.append(_build_chain(split, params, r, d, gen))
    modules.sort(key=lambda m: (m.endpoint, -m.diameter))
    total = sum(m.diameter + 1 for m in modules)
    if total != n:
        raise ArithmeticError(
            f"module dimensions sum to {total}, expected {n}"
        )
    certified = False
    if certify:
        cols = []
        for m in modules:
            cols.extend(normalize_vector(v) for v in m.basis)
        stacked = ExactMatrix.from_rows(cols)  # rows = basis vectors
        if rank(stacked) != n:
            raise ArithmeticError("module bases do not form a direct sum")
        certified = True
    return Decomposition(modules, n, certified)


def _generator_space(split: LFRSplit, params: UniformParams, r: int, d: int,
                     k: int, powers, lowered, s_d_basis: list[list]) -> list[list]:
    """Kernel-coordinate basis of the diameter-d generator space.

    Cuts S_d down by the linear chain conditions
    L R^i v = x_{r+i} R^(i-1) v for 1 <= i <= d.  The space still covers
    S_d modulo S_{d-1}: pure diameter-d generators satisfy every
    condition.
    """
    if d == 0:
        return s_d_basis
    ctx = split.ctx
    x = solve_x_scalars(params, r, d)
    rows: list[list] = []
    # R^(d+1) v = 0
    if r + d + 1 <= ctx.eccentricity:
        for idx in ctx.levels[r + d + 1]:
            rows.append([powers[d + 1][j][idx] for j in range(k)])
    # L R^i v - x_{r+i} R^(i-1) v = 0, supported on level r+i-1
    for i in range(1, d + 1):
        xi = x[i - 1]
        for idx in ctx.levels[r + i - 1]:
            rows.append([
                lowered[i][j][idx] - xi * powers[i - 1][j][idx]
                for j in range(k)
            ])
    if not rows:
        return s_d_basis
    return nullspace(ExactMatrix.from_rows(rows))


def _complement_basis(space: list[list], lower: list[list], want: int) -> list[list]:
    """Vectors of `space` extending `lower` to a basis, reduced greedily."""
    k = len(space[0]) if space else 0
    pivots: list[tuple[int, list]] = []

    def insert(vec) -> bool:
        v = list(vec)
        for pi, pv in pivots:
            f = v[pi] / pv[pi] if pv[pi] != 1 else v[pi]
            if f:
                v = [a - f * b for a, b in zip(v, pv)]
        lead = next((i for i, x in enumerate(v) if x != 0), None)
        if lead is None:
            return False
        pivots.append((lead, v))
        return True

    for vec in lower:
        insert(vec)
    chosen = []
    for vec in space:
        if insert(vec):
            chosen.append(vec)
            if len(chosen) == want:
                break
    if len(chosen) != want:
        raise ArithmeticError("chain filtration is inconsistent")
    return chosen


def _build_chain(split: LFRSplit, params: UniformParams, r: int, d: int,
                 gen: list) -> TModule:
    ctx = split.ctx
    if d == 0:
        _assert_chain(split, ctx, r, [gen], [])
        return TModule(r, 0, [gen], [])
    x = solve_x_scalars(params, r, d)
    if any(v == 0 for v in x):
        raise ArithmeticError(
            f"x-scalar vanishes mid-chain for (r, d) = ({r}, {d})"
        )
    basis = [gen]
    for i in range(1, d + 1):
        nxt = split.apply_raising(basis[-1])
        inv = x[i - 1]
        basis.append([Fraction(v) / inv for v in nxt])
    _assert_chain(split, ctx, r, basis, x)
    return TModule(r, d, basis, x)


def _assert_chain(split: LFRSplit, ctx, r: int, basis: list, x: list) -> None:
    """Re-verify every chain relation; failures signal internal bugs."""
    d = len(basis) - 1
    for i, w in enumerate(basis):
        for idx, val in enumerate(w):
            if val != 0 and ctx.dist[idx] != r + i:
                raise ArithmeticError("chain vector leaves its level")
    if any(v != 0 for v in split.apply_lowering(basis[0])):
        raise ArithmeticError("chain generator is not in ker L")
    for i in range(1, d + 1):
        lw = split.apply_lowering(basis[i])
        if lw != basis[i - 1]:
            raise ArithmeticError("lowering does not step down the chain")
    if any(v != 0 for v in split.apply_raising(basis[d])):
        raise ArithmeticError("raising does not vanish at the chain top")
    # chain-derived x-scalars: L R w_{r+i-1} = x_{r+i} w_{r+i-1}
    for i in range(1, d + 1):
        w = basis[i - 1]
        u = split.apply_lowering(split.apply_raising(w))
        lead = next(idx for idx, v in enumerate(w) if v != 0)
        ratio = Fraction(u[lead]) / Fraction(w[lead])
        if ratio != x[i - 1]:
            raise ArithmeticError(
                "chain-derived x-scalar disagrees with the linear system"
            )
        if any(uv != ratio * wv for uv, wv in zip(u, w)):
            raise ArithmeticError("L R is not scalar on the chain vector")
