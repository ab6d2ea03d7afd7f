"""Graph family generators: dual polar graphs, hypercubes, Hamming graphs.

Dual polar graphs are built from scratch over prime fields: vertices
are the maximal totally isotropic subspaces of a form space over F_p,
adjacent when they intersect in codimension 1.  Two families are
generated here:

* C_D(p): dimension 2D, symplectic form with Gram pairs <e_i, f_i> = 1;
* B_D(p): dimension 2D+1 (odd p), quadratic form x_0^2 + sum x_i x_{D+i}.

Each family is distance-regular with intersection numbers

    b_i = p^(i+e) (p^(D-i) - 1)/(p - 1),
    c_i = (p^i - 1)/(p - 1),
    a_i = (p^e - 1)(p^i - 1)/(p - 1),

with e = 1 for both generated families; ``verify_intersection_numbers``
re-derives these observationally from the graph and accepts rational e
so the formulas of the Hermitean families remain evaluable even though
no generator produces those graphs.

Subspaces are canonicalised by reduced row echelon form, so enumeration
order cannot affect the vertex set, and vertices are emitted in sorted
canonical order for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .graphs import Graph, bfs_context
from .linalg import _is_prime
from .scalars import Scalar, rational_power

SIZE_CAP = 5000


class SizeCapError(ValueError):
    """Requested instance exceeds the desk-scale vertex cap."""


@dataclass(frozen=True)
class FormSpec:
    family: str  # "C" (symplectic) or "B" (odd-dimensional quadratic)
    D: int
    p: int

    def __post_init__(self):
        if self.family not in ("C", "B"):
            raise ValueError(f"unsupported family {self.family!r}")
        if self.D < 2:
            raise ValueError("need diameter D >= 2")
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime (prime fields only)")
        if self.family == "B" and self.p == 2:
            raise ValueError("family B requires an odd prime")

    @property
    def e(self) -> int:
        return 1

    @property
    def dim(self) -> int:
        return 2 * self.D if self.family == "C" else 2 * self.D + 1

    def vertex_count(self) -> int:
        out = 1
        for i in range(1, self.D + 1):
            out *= self.p ** i + 1
        return out

    def degree(self) -> int:
        return self.p * (self.p ** self.D - 1) // (self.p - 1)


# -- F_p subspace helpers -----------------------------------------------------


def _rref_mod(rows: Sequence[Sequence[int]], p: int) -> tuple[tuple[int, ...], ...]:
    """Canonical reduced row echelon form over F_p (zero rows dropped)."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, nrows) if mat[i][col] % p), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][col], p - 2, p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][col] % p:
                f = mat[i][col] % p
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[r])]
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in mat[:r])


def _rank_mod_small(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(_rref_mod(rows, p))


def _reduce_against(v: list[int], basis, p: int) -> list[int]:
    """Reduce v against RREF basis rows (pivot = first nonzero, coeff 1)."""
    v = [x % p for x in v]
    for row in basis:
        lead = next(i for i, x in enumerate(row) if x)
        f = v[lead]
        if f:
            v = [(a - f * b) % p for a, b in zip(v, row)]
    return v


def _span_mod(basis: Sequence[Sequence[int]], p: int, dim: int):
    """Iterate all vectors in the span of the given rows."""
    if not basis:
        yield tuple([0] * dim)
        return
    for coeffs in product(range(p), repeat=len(basis)):
        v = [0] * dim
        for c, row in zip(coeffs, basis):
            if c:
                for i, x in enumerate(row):
                    v[i] = (v[i] + c * x) % p
        yield tuple(v)


class _FormSpace:
    def __init__(self, spec: FormSpec):
        self.spec = spec
        self.p = spec.p
        self.D = spec.D
        self.dim = spec.dim

    def bilinear(self, u, v) -> int:
        p, D = self.p, self.D
        if self.spec.family == "C":
            acc = 0
            for i in range(D):
                acc += u[i] * v[D + i] - u[D + i] * v[i]
            return acc % p
        # polarisation of Q(x) = x_0^2 + sum x_i x_{D+i}
        acc = 2 * u[0] * v[0]
        for i in range(1, D + 1):
            acc += u[i] * v[D + i] + u[D + i] * v[i]
        return acc % p

    def quadratic(self, v) -> Optional[int]:
        if self.spec.family == "C":
            return None
        acc = v[0] * v[0]
        for i in range(1, self.D + 1):
            acc += v[i] * v[self.D + i]
        return acc % self.p

    def is_isotropic_vector(self, v) -> bool:
        q = self.quadratic(v)
        return q is None or q == 0

    def perp_basis(self, basis) -> list[list[int]]:
        """Basis of the common radical {v : B(v, row) = 0 for all rows}."""
        if not basis:
            return [[1 if i == j else 0 for i in range(self.dim)]
                    for j in range(self.dim)]
        # rows of the constraint matrix: v -> B(row, v) as a linear form
        cons = []
        p, D = self.p, self.D
        for u in basis:
            if self.spec.family == "C":
                form = [0] * self.dim
                for i in range(D):
                    form[D + i] = u[i] % p
                    form[i] = (-u[D + i]) % p
            else:
                form = [0] * self.dim
                form[0] = (2 * u[0]) % p
                for i in range(1, D + 1):
                    form[D + i] = u[i] % p
                    form[i] = u[D + i] % p
            cons.append(form)
        return [list(v) for v in _nullspace_mod(cons, p)]


def _nullspace_mod(rows: Sequence[Sequence[int]], p: int) -> list[tuple[int, ...]]:
    ncols = len(rows[0])
    rref = _rref_mod(rows, p)
    pivots = [next(i for i, x in enumerate(row) if x) for row in rref]
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [0] * ncols
        v[free] = 1
        for row, piv in zip(rref, pivots):
            v[piv] = (-row[free]) % p
        basis.append(tuple(v))
    return basis


def _enumerate_maximal_isotropic(space: _FormSpace) -> list[tuple[tuple[int, ...], ...]]:
    """All maximal totally isotropic subspaces, as canonical RREF tuples.

    Extends isotropic flags one dimension at a time inside the common
    perp space, canonicalising after every extension so each partial
    subspace is visited once.
    """
    p, D, dim = space.p, space.D, space.dim
    seen: list[set] = [set() for _ in range(D + 1)]
    results: list = []

    def extend(basis) -> None:
        k = len(basis)
        if k == D:
            results.append(basis)
            return
        perp = space.perp_basis(basis)
        for v in _span_mod(perp, p, dim):
            if not any(v):
                continue
            if not space.is_isotropic_vector(v):
                continue
            if not any(_reduce_against(list(v), basis, p)):
                continue  # already inside the subspace
            new = _rref_mod(list(basis) + [list(v)], p)
            if new in seen[k + 1]:
                continue
            seen[k + 1].add(new)
            extend(new)

    extend(())
    return sorted(results)


def dual_polar(spec: FormSpec) -> tuple[Graph, list]:
    """Dual polar graph of the given form space, plus subspace labels.

    Vertices are maximal totally isotropic subspaces in sorted canonical
    order; adjacency is intersection in dimension D - 1.
    """
    expected = spec.vertex_count()
    if expected > SIZE_CAP:
        raise SizeCapError(
            f"{spec.family}_{spec.D}({spec.p}) has {expected} vertices "
            f"(cap {SIZE_CAP})"
        )
    space = _FormSpace(spec)
    subspaces = _enumerate_maximal_isotropic(space)
    if len(subspaces) != expected:
        raise ArithmeticError(
            f"enumerated {len(subspaces)} maximal isotropic subspaces, "
            f"expected {expected}"
        )
    # post-construction recheck: every subspace totally isotropic
    for rows in subspaces:
        for i, u in enumerate(rows):
            if not space.is_isotropic_vector(u):
                raise ArithmeticError("non-isotropic basis vector")
            for v in rows[i:]:
                if space.bilinear(u, v) != 0:
                    raise ArithmeticError("subspace is not totally isotropic")
    n = len(subspaces)
    D = spec.D
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            stacked = list(subspaces[i]) + list(subspaces[j])
            # dim(U /\ W) = 2D - rank(U u W); adjacency means D - 1
            if _rank_mod_small(stacked, spec.p) == D + 1:
                edges.append((i, j))
    g = Graph.from_edges(n, edges)
    labels = [[list(row) for row in rows] for rows in subspaces]
    return g, labels


def hamming(D: int, n: int) -> tuple[Graph, list]:
    """Hamming graph H(D, n): length-D words over n symbols, adjacency at
    Hamming distance 1."""
    if D < 2 or n < 2:
        raise ValueError("need D >= 2 and n >= 2")
    if n ** D > SIZE_CAP:
        raise SizeCapError(f"H({D},{n}) has {n ** D} vertices (cap {SIZE_CAP})")
    words = list(product(range(n), repeat=D))
    index = {w: i for i, w in enumerate(words)}
    edges = []
    for i, w in enumerate(words):
        for pos in range(D):
            for s in range(w[pos] + 1, n):
                w2 = w[:pos] + (s,) + w[pos + 1:]
                edges.append((i, index[w2]))
    g = Graph.from_edges(len(words), sorted(edges))
    return g, [list(w) for w in words]


def hypercube(D: int) -> tuple[Graph, list]:
    return hamming(D, 2)


# -- distance-regularity and intersection numbers -----------------------------


@dataclass
class IntersectionReport:
    is_distance_regular: bool
    diameter: Optional[int]
    observed_c: Optional[tuple]
    observed_a: Optional[tuple]
    observed_b: Optional[tuple]
    expected_c: Optional[tuple] = None
    expected_a: Optional[tuple] = None
    expected_b: Optional[tuple] = None
    matches_expected: Optional[bool] = None
    failure: Optional[str] = None

    def to_json(self) -> dict:
        def fmt(arr):
            return None if arr is None else [str(x) for x in arr]

        return {
            "is_distance_regular": self.is_distance_regular,
            "diameter": self.diameter,
            "observed": {
                "c": fmt(self.observed_c),
                "a": fmt(self.observed_a),
                "b": fmt(self.observed_b),
            },
            "expected": {
                "c": fmt(self.expected_c),
                "a": fmt(self.expected_a),
                "b": fmt(self.expected_b),
            },
            "matches_expected": self.matches_expected,
            "failure": self.failure,
        }


def expected_intersection_numbers(b, e, D: int) -> tuple[tuple, tuple, tuple]:
    """(c, a, b) arrays indexed 0..D from the dual polar closed forms.

    Accepts rational e; values may land in a quadratic extension when
    b**e is irrational (in which case they cannot match an actual
    graph's integer counts, and comparisons report that faithfully).
    """
    b = Fraction(b)
    e = Fraction(e)
    be: Scalar = rational_power(b, e)
    cs: list[Scalar] = [Fraction(0)]
    as_: list[Scalar] = [Fraction(0)]
    bs: list[Scalar] = []
    for i in range(1, D + 1):
        cs.append((b ** i - 1) / (b - 1))
        as_.append((be - 1) * (b ** i - 1) / (b - 1))
    for i in range(0, D):
        bs.append(be * b ** i * (b ** (D - i) - 1) / (b - 1))
    bs.append(Fraction(0))
    return tuple(cs), tuple(as_), tuple(bs)


def verify_intersection_numbers(g: Graph, b=None, e=None, D: Optional[int] = None
                                ) -> IntersectionReport:
    """Observational distance-regularity check, with optional comparison
    against the dual polar closed-form intersection numbers.

    Never raises on mathematical failure; the report carries it.
    """
    diam = None
    c_obs: dict[int, int] = {}
    a_obs: dict[int, int] = {}
    b_obs: dict[int, int] = {}

    for v in range(g.n):
        ctx = bfs_context(g, v)
        if diam is None:
            diam = ctx.eccentricity
        elif ctx.eccentricity != diam:
            return IntersectionReport(
                False, None, None, None, None,
                failure=f"eccentricity differs between vertices 0 and {v}",
            )
        dist = ctx.dist
        for y in range(g.n):
            i = dist[y]
            nc = na = nb = 0
            for w in g.adj[y]:
                dw = dist[w]
                if dw == i - 1:
                    nc += 1
                elif dw == i:
                    na += 1
                else:
                    nb += 1
            for store, val in ((c_obs, nc), (a_obs, na), (b_obs, nb)):
                if i not in store:
                    store[i] = val
                elif store[i] != val:
                    return IntersectionReport(
                        False, diam, None, None, None,
                        failure=(
                            f"parameter at distance {i} is not constant "
                            f"(base {v}, vertex {y})"
                        ),
                    )

    observed_c = tuple(c_obs[i] for i in range(diam + 1))
    observed_a = tuple(a_obs[i] for i in range(diam + 1))
    observed_b = tuple(b_obs[i] for i in range(diam + 1))
    report = IntersectionReport(True, diam, observed_c, observed_a, observed_b)
    if b is not None and e is not None and D is not None:
        exp_c, exp_a, exp_b = expected_intersection_numbers(b, e, D)
        report.expected_c = exp_c
        report.expected_a = exp_a
        report.expected_b = exp_b
        report.matches_expected = (
            diam == D
            and all(observed_c[i] == exp_c[i] for i in range(D + 1))
            and all(observed_a[i] == exp_a[i] for i in range(D + 1))
            and all(observed_b[i] == exp_b[i] for i in range(D + 1))
        )
    return report
