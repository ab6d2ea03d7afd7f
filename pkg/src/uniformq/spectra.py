"""Exact spectra over Q(sqrt(m)), orthogonal-polynomial charpolys and
Q-polynomial ordering certification.

The adjacency spectrum of the instances treated here lives in a single
real quadratic extension: the closed form for the full bipartite graph
of a dual polar graph with parameters (b, e, D) is

    theta_i = b^((D+e)/2)/(b-1) * (b^((D-i)/2) - b^((i-D)/2)),
    0 <= i <= 2D,

strictly decreasing, antisymmetric about theta_D = 0.  Each thin module
of endpoint r and diameter d contributes the sub-multiset at indices
i = D - d + 2j, and the characteristic polynomial of its tridiagonal
representation matrix is generated by the three-term recurrence
h_{i+1} = t h_i - x_{r+i} h_{i-1}, a rescaled normalized dual
b-Krawtchouk polynomial.

``spectrum_exact`` is fully general for symmetric 0/1 matrices whose
squared spectrum is rational: it takes the exact characteristic
polynomial of A^2, extracts the rational roots of its squarefree part,
and splits the +-sqrt pairs by exact rank computations (modular ranks
with a sum-of-nullities certificate, falling back to fraction-free
elimination; conjugate irrational pairs always share multiplicity since
the field automorphism sqrt(m) -> -sqrt(m) maps one eigenspace onto the
other).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import _kernels
from .linalg import (
    ExactMatrix,
    charpoly_int,
    column_space_basis,
    int_matmul_flat,
    normalize_vector,
    nullspace,
    rank,
)
from .poly import Poly, poly_gcd
from .scalars import (
    QuadExt,
    Scalar,
    is_rational,
    quad,
    rational_power,
    scalar_sort_key,
    squarefree_decompose,
)


# -- closed forms --------------------------------------------------------------


def closed_form_spectrum(b: int, e, D: int) -> list[Scalar]:
    """theta_0 > ... > theta_{2D} for the (b, e, D) full bipartite dual
    polar instance; ValueError when the values leave Q(sqrt(m))."""
    if b < 2:
        raise ValueError("need b >= 2")
    e = Fraction(e)
    kappa = rational_power(b, (D + e) / 2) / (b - 1)
    out = []
    for i in range(2 * D + 1):
        term = rational_power(b, Fraction(D - i, 2)) \
            - rational_power(b, Fraction(i - D, 2))
        out.append(kappa * term)
    return out


def module_eigenvalues(b: int, e, D: int, d: int) -> list[Scalar]:
    """Eigenvalues of the (r, d) module representation matrix: d+1
    pairwise distinct values, the spectrum at indices D - d + 2j."""
    if d < 0:
        raise ValueError("need d >= 0")
    e = Fraction(e)
    kappa = rational_power(b, (D + e) / 2) / (b - 1)
    out = []
    for j in range(d + 1):
        term = rational_power(b, Fraction(d - 2 * j, 2)) \
            - rational_power(b, Fraction(2 * j - d, 2))
        out.append(kappa * term)
    return out


def krawtchouk_charpoly(x_scalars: Sequence) -> list[Poly]:
    """h_0, ..., h_{d+1} from h_{i+1} = t h_i - x_{r+i} h_{i-1},
    h_0 = 1, h_1 = t; h_{d+1} is the charpoly of the module matrix."""
    x = [Fraction(v) for v in x_scalars]
    t = Poly.x()
    hs = [Poly([1]), t]
    for xi in x:
        hs.append(t * hs[-1] - xi * hs[-2])
    return hs


@dataclass
class KratResult:
    ok: bool
    fail_index: Optional[int] = None


def verify_krat_scaling(b: int, e, D: int, d: int,
                        x_scalars: Sequence) -> KratResult:
    """Check h_i(t) = kappa^i H_i(t / kappa) coefficient-wise, where
    kappa = b^((D+e+d)/2)/(b-1) and the H_i are generated by
    t H_i = H_{i+1} - b^(-d) (1 - b^i)(1 - b^(i-d-1)) H_{i-1},
    H_0 = 1, H_1 = t (the normalized dual b-Krawtchouk recurrence).
    """
    if len(x_scalars) != d:
        raise ValueError(f"need d = {d} x-scalars, got {len(x_scalars)}")
    e = Fraction(e)
    kappa = rational_power(b, (D + e + d) / 2) / (b - 1)
    inv_kappa = 1 / kappa
    hs = krawtchouk_charpoly(x_scalars)
    t = Poly.x()
    capital = [Poly([1]), t]
    bq = Fraction(b)
    for i in range(1, d + 1):
        coef = bq ** (-d) * (1 - bq ** i) * (1 - bq ** (i - d - 1))
        capital.append(t * capital[-1] + coef * capital[-2])
    scale: Scalar = Fraction(1)
    for i in range(d + 2):
        rescaled = scale * capital[i].scale_arg(inv_kappa)
        if rescaled != hs[i]:
            return KratResult(False, i)
        scale = scale * kappa
    return KratResult(True)


# -- exact spectra --------------------------------------------------------------


@dataclass
class Spectrum:
    eigenvalues: list[tuple[Scalar, int]]  # (value, multiplicity), descending
    radicand: int  # 1 when the spectrum is rational

    @property
    def vertex_count(self) -> int:
        return sum(m for _, m in self.eigenvalues)

    def values(self) -> list[Scalar]:
        return [v for v, _ in self.eigenvalues]

    def multiplicity(self, value) -> int:
        for v, m in self.eigenvalues:
            if v == value:
                return m
        return 0

    def to_json(self) -> dict:
        eig = []
        for v, m in self.eigenvalues:
            if isinstance(v, QuadExt):
                val = {"a": str(v.a), "c": str(v.c), "m": v.m}
            else:
                val = {"a": str(Fraction(v)), "c": "0", "m": self.radicand}
            eig.append({"value": val, "multiplicity": m})
        return {"radicand": self.radicand, "eigenvalues": eig}


def _validate_symmetric01(a: ExactMatrix) -> list[int]:
    ints = a.int_entries()
    if ints is None or not a.is_square():
        raise ValueError("need a square 0/1 integer matrix")
    n = a.rows
    for i in range(n):
        for j in range(n):
            v = ints[i * n + j]
            if v not in (0, 1):
                raise ValueError("entries must be 0 or 1")
            if v != ints[j * n + i]:
                raise ValueError("matrix must be symmetric")
    return ints


def _factor_divisors(n: int) -> list[int]:
    """All positive divisors of n > 0 (trial division)."""
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    divs = [1]
    for p, k in factors.items():
        divs = [dv * p ** j for dv in divs for j in range(k + 1)]
    return sorted(divs)


def _integer_roots_squarefree(q: Poly) -> list[int]:
    """All integer roots of a monic squarefree integer polynomial; raises
    when the polynomial does not split over the integers."""
    coeffs = []
    for c in q.coeffs:
        f = Fraction(c)
        if f.denominator != 1:
            raise ArithmeticError("squarefree part is not integral")
        coeffs.append(f.numerator)
    poly = Poly(coeffs)
    roots = []
    if poly[0] == 0:
        roots.append(0)
        poly = poly // Poly([0, 1])
    if poly.degree > 0:
        const = int(poly[0])
        for dv in _factor_divisors(abs(const)):
            for cand in (dv, -dv):
                if poly(cand) == 0:
                    roots.append(cand)
                    poly = poly // Poly([-cand, 1])
                    if poly.degree == 0:
                        break
            if poly.degree == 0:
                break
    if poly.degree > 0:
        raise ValueError(
            "squared spectrum is not rational; this lies outside the "
            "supported scalar fields"
        )
    return roots


def _root_multiplicity(cp: Poly, root: int) -> int:
    count = 0
    current = cp
    lin = Poly([-root, 1])
    while not current.is_zero() and current(root) == 0:
        current = current // lin
        count += 1
    return count


def _sqrt_mod(m: int, p: int) -> Optional[int]:
    """Square root of m mod a prime p with p % 4 == 3, else None."""
    m %= p
    if m == 0:
        return 0
    if pow(m, (p - 1) // 2, p) != 1:
        return None
    w = pow(m, (p + 1) // 4, p)
    return w if w * w % p == m else None


def _certified_nullities(ints: list[int], n: int,
                         thetas: list[tuple[int, int, int]]) -> Optional[list[int]]:
    """Exact eigenspace dimensions for theta = s * sqrt(m) (integer s, m).

    Modular ranks give nullity_p >= true nullity for each theta; since A
    is diagonalizable with exactly these eigenvalues the true nullities
    sum to n, so equality of the modular sum with n certifies every
    value.  Returns None when no suitable prime certifies (callers fall
    back to exact elimination).
    """
    radicands = {m for _, m, _ in thetas if m != 1}
    attempts = 0
    for p in _prime_stream_filtered():
        if attempts >= 6:
            return None
        roots = {}
        ok = True
        for m in radicands:
            w = _sqrt_mod(m, p)
            if w is None:
                ok = False
                break
            roots[m] = w
        if not ok:
            continue
        attempts += 1
        nullities = []
        for s, m, _ in thetas:
            shift = (s * roots.get(m, 1)) % p if m != 1 else s % p
            flat = list(ints)
            for i in range(n):
                flat[i * n + i] = (flat[i * n + i] - shift) % p
            nullities.append(n - _kernels.rank_mod(flat, n, n, p))
        if sum(nullities) == n:
            return nullities
    return None


def _prime_stream_filtered():
    bits = _kernels.PRIME_BITS
    x = 2 ** bits - 1
    from .linalg import _is_prime

    while x > 2:
        if x % 4 == 3 and _is_prime(x):
            yield x
        x -= 2


def spectrum_exact(a: ExactMatrix, bipartite: bool = False,
                   radicand_hint: Optional[int] = None) -> Spectrum:
    """Exact spectrum of a symmetric 0/1 matrix.

    Method: exact characteristic polynomial of A^2, rational root
    extraction of the squared spectrum, then sign split of each +-sqrt
    pair by exact rank computations of A - theta I over Q(sqrt(m)).
    Raises ValueError when the squared spectrum is not rational or the
    values need more than one radicand.
    """
    ints = _validate_symmetric01(a)
    n = a.rows
    sq = int_matmul_flat(ints, ints, n, n, n)
    cp = charpoly_int(sq, n)
    squarefree = cp // poly_gcd(cp, cp.derivative())
    mus = sorted(_integer_roots_squarefree(squarefree), reverse=True)
    mults = {mu: _root_multiplicity(cp, mu) for mu in mus}
    if sum(mults.values()) != n:
        raise ArithmeticError("squared-spectrum multiplicities do not sum to n")

    radicand = 1
    groups = []  # (s, m, mu) with theta = s sqrt(m), mu = theta^2
    for mu in mus:
        if mu < 0:
            raise ArithmeticError("A^2 has a negative eigenvalue")
        if mu == 0:
            continue
        s, m = squarefree_decompose(mu)
        if m != 1:
            if radicand == 1:
                radicand = m
            elif radicand != m:
                raise ValueError(
                    f"spectrum needs two radicands ({radicand}, {m}); "
                    "outside the single-extension scope"
                )
        groups.append((s, m, mu))
    if radicand_hint is not None and radicand != 1 and radicand_hint != radicand:
        raise ValueError(
            f"radicand hint {radicand_hint} conflicts with computed {radicand}"
        )

    thetas: list[tuple[int, int, int]] = []  # (s, m, mu) incl. negatives
    for s, m, mu in groups:
        thetas.append((s, m, mu))
        thetas.append((-s, m, mu))
    if 0 in mults:
        thetas.append((0, 1, 0))

    nullities = _certified_nullities(ints, n, thetas)
    if nullities is None:
        nullities = []
        for s, m, _ in thetas:
            if m == 1:
                shifted = ExactMatrix(
                    n, n,
                    [v - s * (1 if i % (n + 1) == 0 else 0)
                     for i, v in enumerate(ints)],
                )
                nullities.append(n - rank(shifted))
            else:
                theta = quad(0, s, m)
                entries: list = list(ints)
                for i in range(n):
                    entries[i * n + i] = entries[i * n + i] - theta
                nullities.append(n - rank(ExactMatrix(n, n, entries)))
        if sum(nullities) != n:
            raise ArithmeticError("eigenspace dimensions do not sum to n")

    by_theta = {}
    for (s, m, mu), nullity in zip(thetas, nullities):
        value: Scalar = Fraction(s) if m == 1 else quad(0, s, m)
        by_theta[(s, m)] = (value, nullity, mu)

    # cross-checks: pair sums match charpoly multiplicities; conjugate
    # irrational pairs split evenly (field automorphism), bipartite
    # spectra are antisymmetric
    for s, m, mu in groups:
        plus, minus = by_theta[(s, m)][1], by_theta[(-s, m)][1]
        if plus + minus != mults[mu]:
            raise ArithmeticError("sign split disagrees with A^2 multiplicity")
        if m != 1 and plus != minus:
            raise ArithmeticError("conjugate eigenvalues must share multiplicity")
        if bipartite and plus != minus:
            raise ArithmeticError("bipartite spectrum must be antisymmetric")
    if (0, 1) in by_theta:
        if by_theta[(0, 1)][1] != mults[0]:
            raise ArithmeticError("kernel dimension mismatch")

    pairs = sorted(
        ((v, nl) for v, nl, _ in by_theta.values()),
        key=lambda t: scalar_sort_key(t[0]),
        reverse=True,
    )
    return Spectrum([(v, m) for v, m in pairs if m > 0], radicand)


# -- eigenspace bases -----------------------------------------------------------


@dataclass
class EigenDecomposition:
    values: list  # eigenvalues, descending
    multiplicities: list[int]
    bases: list[list[list]]  # per eigenvalue: list of coordinate vectors
    radicand: int

    @property
    def dimension(self) -> int:
        return sum(self.multiplicities)

    def group_slices(self) -> list[tuple[int, int]]:
        out = []
        start = 0
        for m in self.multiplicities:
            out.append((start, start + m))
            start += m
        return out


def _assert_eigenvector(a: ExactMatrix, v: list, value) -> None:
    av = a.apply(v)
    for x, y in zip(av, v):
        if x != value * y:
            raise ArithmeticError("claimed eigenvector fails A v = theta v")


def eigenspace_bases(a: ExactMatrix, spectrum: Spectrum) -> EigenDecomposition:
    """Per-eigenvalue bases of the kernels of A - theta I over Q(sqrt(m)).

    Dimensions must match the spectrum's multiplicities.  For integer
    matrices with a complete spectrum the bases are extracted from
    spectral projector columns (polynomials in A^2 evaluated by integer
    products); small or exotic inputs use direct kernel elimination.
    Every returned vector is re-verified to satisfy A v = theta v.
    """
    n = a.rows
    if spectrum.vertex_count != n:
        raise ValueError("spectrum multiplicities do not sum to the dimension")
    ints = a.int_entries()
    if ints is not None and n > 60:
        decomp = _eigenspaces_by_projectors(a, ints, spectrum)
    else:
        decomp = _eigenspaces_direct(a, spectrum)
    for value, mult, basis in zip(decomp.values, decomp.multiplicities,
                                  decomp.bases):
        if len(basis) != mult:
            raise ArithmeticError(
                f"eigenspace of {value} has dimension {len(basis)}, "
                f"expected {mult} (wrong spectrum?)"
            )
        for v in basis:
            _assert_eigenvector(a, v, value)
    return decomp


def _eigenspaces_direct(a: ExactMatrix, spectrum: Spectrum) -> EigenDecomposition:
    n = a.rows
    values, mults, bases = [], [], []
    for value, mult in spectrum.eigenvalues:
        entries: list = list(a.entries)
        for i in range(n):
            entries[i * n + i] = entries[i * n + i] - value
        basis = [normalize_vector(v)
                 for v in nullspace(ExactMatrix(n, n, entries))]
        values.append(value)
        mults.append(mult)
        bases.append(basis)
    return EigenDecomposition(values, mults, bases, spectrum.radicand)


def _eigenspaces_by_projectors(a: ExactMatrix, ints: list[int],
                               spectrum: Spectrum) -> EigenDecomposition:
    """Eigenspaces from spectral projectors of A^2.

    For each distinct mu of A^2, prod_{nu != mu} (A^2 - nu) has column
    space exactly ker(A^2 - mu); applying A + theta with theta^2 = mu
    maps it onto ker(A - theta I).  All products are integer, so the
    kernels carry the bulk of the work.
    """
    n = a.rows
    sq = int_matmul_flat(ints, ints, n, n, n)
    mus = []
    for value, _ in spectrum.eigenvalues:
        mu = value * value
        mu_int = int(Fraction(mu)) if not isinstance(mu, QuadExt) else None
        if mu_int is None:
            raise ArithmeticError("projector route needs rational theta^2")
        if mu_int not in mus:
            mus.append(mu_int)

    projectors: dict[int, list[int]] = {}
    for mu in mus:
        prod = None
        for nu in mus:
            if nu == mu:
                continue
            factor = list(sq)
            for i in range(n):
                factor[i * n + i] -= nu
            prod = factor if prod is None else int_matmul_flat(
                prod, factor, n, n, n
            )
        if prod is None:  # single distinct mu: A^2 = mu I
            prod = [1 if i % (n + 1) == 0 else 0 for i in range(n * n)]
        projectors[mu] = prod

    values, mults, bases = [], [], []
    for value, mult in spectrum.eigenvalues:
        mu = int(Fraction(value * value))
        proj = projectors[mu]
        if value == 0:
            cols = [[Fraction(proj[i * n + j]) for i in range(n)]
                    for j in range(n)]
        else:
            ap = int_matmul_flat(ints, proj, n, n, n)
            cols = []
            for j in range(n):
                col = []
                for i in range(n):
                    col.append(ap[i * n + j] + value * proj[i * n + j])
                cols.append(col)
        basis = column_space_basis(cols, expected_rank=mult)
        values.append(value)
        mults.append(mult)
        bases.append(basis)
    return EigenDecomposition(values, mults, bases, spectrum.radicand)


# -- dual idempotent pattern and Q-polynomial orderings -------------------------


def idempotent_pattern(decomp: EigenDecomposition,
                       astar: ExactMatrix) -> list[list[bool]]:
    """P[i][j] = (E_i A* E_j != 0) over the eigenspace decomposition.

    Decided from the blocks of B^T A* B where B stacks the eigenspace
    bases: for a symmetric A the eigenspaces are orthogonal, so the
    spectral projector satisfies E_i A* E_j = 0 exactly when
    U_i^T A* U_j = 0.  Never materialises the idempotents.
    """
    if sum(decomp.multiplicities) != astar.rows:
        raise ValueError("decomposition does not span the space")
    n = astar.rows
    diag = [astar.entries[i * n + i] for i in range(n)]
    if any(astar.entries[i * n + j] != 0
           for i in range(n) for j in range(n) if i != j):
        raise ValueError("A* must be diagonal")

    allvecs = [v for basis in decomp.bases for v in basis]
    if all(is_rational(d) for d in diag) and all(
        all(is_rational(x) or isinstance(x, QuadExt) for x in v)
        for v in allvecs
    ):
        gram_a, gram_c = _gram_blocks(allvecs, diag, decomp.radicand, n)
        slices = decomp.group_slices()
        k = len(slices)
        pattern = [[False] * k for _ in range(k)]
        for gi, (r0, r1) in enumerate(slices):
            for gj, (c0, c1) in enumerate(slices):
                nz = any(
                    gram_a[r * len(allvecs) + c] != 0
                    or gram_c[r * len(allvecs) + c] != 0
                    for r in range(r0, r1)
                    for c in range(c0, c1)
                )
                pattern[gi][gj] = nz
        return pattern
    raise ValueError("unsupported scalar types in decomposition")


def _gram_blocks(vectors: list[list], diag: list, radicand: int, n: int):
    """B^T diag B with B = [vectors], split as rational + sqrt(m) parts.

    Everything reduces to four integer matrix products after clearing
    the (positive) denominator of the diagonal, which cannot change
    zero-ness of any entry.
    """
    from math import lcm

    den = 1
    for d in diag:
        den = lcm(den, Fraction(d).denominator)
    d_int = [int(Fraction(d) * den) for d in diag]

    k = len(vectors)
    b1 = [0] * (n * k)
    b2 = [0] * (n * k)
    any_quad = False
    for j, vec in enumerate(vectors):
        for i, x in enumerate(vec):
            if isinstance(x, QuadExt):
                any_quad = True
                b1[i * k + j] = int(x.a)
                b2[i * k + j] = int(x.c)
            else:
                b1[i * k + j] = int(x)
    b1t = [b1[i * k + j] for j in range(k) for i in range(n)]  # k x n
    db1 = _diag_rows(d_int, b1, n, k)
    gram_a = int_matmul_flat(b1t, db1, k, n, k)
    if not any_quad:
        return gram_a, [0] * (k * k)
    b2t = [b2[i * k + j] for j in range(k) for i in range(n)]
    db2 = _diag_rows(d_int, b2, n, k)
    t11 = gram_a
    t22 = int_matmul_flat(b2t, db2, k, n, k)
    t12 = int_matmul_flat(b1t, db2, k, n, k)
    t21 = int_matmul_flat(b2t, db1, k, n, k)
    gram_a = [x + radicand * y for x, y in zip(t11, t22)]
    gram_c = [x + y for x, y in zip(t12, t21)]
    return gram_a, gram_c


def _diag_rows(d: list[int], flat: list[int], n: int, k: int) -> list[int]:
    out = []
    for i in range(n):
        di = d[i]
        out.extend(di * v if di != 1 else v for v in flat[i * k:(i + 1) * k])
    return out


@dataclass
class OrderingReport:
    ordering: list[int]
    tridiagonal: bool
    violation: Optional[tuple[int, int]]

    def to_json(self) -> dict:
        return {
            "ordering": list(self.ordering),
            "tridiagonal": self.tridiagonal,
            "violation": list(self.violation) if self.violation else None,
        }


def check_q_ordering(decomp: EigenDecomposition, astar: ExactMatrix,
                     ordering: Sequence[int],
                     pattern: Optional[list[list[bool]]] = None) -> OrderingReport:
    """Does A* act tridiagonally on the eigenspaces in this ordering?

    True iff every nonzero block of the idempotent pattern joins
    eigenvalues adjacent in the ordering; the first violating pair in
    row-major order is reported otherwise.
    """
    k = len(decomp.values)
    if sorted(ordering) != list(range(k)):
        raise ValueError("ordering must be a permutation of the eigenvalue indices")
    if pattern is None:
        pattern = idempotent_pattern(decomp, astar)
    pos = [0] * k
    for position, idx in enumerate(ordering):
        pos[idx] = position
    for i in range(k):
        for j in range(k):
            if pattern[i][j] and abs(pos[i] - pos[j]) > 1:
                return OrderingReport(list(ordering), False, (i, j))
    return OrderingReport(list(ordering), True, None)


def natural_ordering(decomp: EigenDecomposition) -> list[int]:
    return list(range(len(decomp.values)))


def even_odd_ordering(decomp: EigenDecomposition) -> list[int]:
    """E_0 < E_2 < ... < E_2D < E_1 < E_3 < ... (even indices first)."""
    k = len(decomp.values)
    return list(range(0, k, 2)) + list(range(1, k, 2))


def odd_even_ordering(decomp: EigenDecomposition) -> list[int]:
    """E_1 < E_3 < ... < E_2D-1 < E_0 < E_2 < ... (odd indices first)."""
    k = len(decomp.values)
    return list(range(1, k, 2)) + list(range(0, k, 2))
