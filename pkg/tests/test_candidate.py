import random
from fractions import Fraction

import pytest

from uniformq.candidate import (
    beta_from_structure,
    candidate_search,
    check_eq7a,
    closed_form_theta,
    dual_diagonal,
    entrywise_oracle,
    theta_from_structure,
    uniform_ratio,
    verify_tridiagonal,
)
from uniformq.graphs import bfs_context, lfr_split
from uniformq.linalg import ExactMatrix
from uniformq.uniform import UniformParams, fit_uniform

from conftest import random_connected_graph


# -- dual_diagonal ---------------------------------------------------------------


def test_dual_diagonal_cycle(cycle6):
    ctx = bfs_context(cycle6, 0)
    m = dual_diagonal(ctx, (0, 1, 2, 3))
    assert [m[(i, i)] for i in range(6)] == [0, 1, 2, 3, 2, 1]


def test_dual_diagonal_shift(cycle6):
    ctx = bfs_context(cycle6, 0)
    base = dual_diagonal(ctx, (0, 1, 2, 3))
    shifted = dual_diagonal(ctx, (5, 6, 7, 8))
    assert shifted == base + ExactMatrix.identity(6).scale(5)


def test_dual_diagonal_errors(cycle6):
    ctx = bfs_context(cycle6, 0)
    with pytest.raises(ValueError):
        dual_diagonal(ctx, (0, 1, 2))  # wrong length
    with pytest.raises(ValueError):
        dual_diagonal(ctx, (0, 1, 1, 3))  # repeat


# -- verify_tridiagonal ------------------------------------------------------------


def test_verify_tridiagonal_c32(c32_fb, c32_ctx):
    a = c32_fb.adjacency_matrix()
    astar = dual_diagonal(c32_ctx, (-1, 0, Fraction(1, 2), Fraction(3, 4)))
    rep = verify_tridiagonal(a, astar, Fraction(5, 2), 0, 36)
    assert rep.holds
    assert rep.residual_support == []


def test_verify_tridiagonal_negative_control(c32_fb, c32_ctx):
    a = c32_fb.adjacency_matrix()
    astar = dual_diagonal(c32_ctx, (-1, 0, Fraction(1, 2), Fraction(3, 4)))
    rep = verify_tridiagonal(a, astar, Fraction(5, 2), 0, 37)
    assert not rep.holds
    assert len(rep.residual_support) >= 1
    full = verify_tridiagonal(a, astar, Fraction(5, 2), 0, 37, collect_all=True)
    assert len(full.residual_support) == len(full.residual_values)
    assert all(v != 0 for v in full.residual_values)


def test_gamma_vanishes_on_bipartite(c32_fb, c32_ctx):
    # if the relation holds with gamma = 0 it must fail for gamma != 0
    a = c32_fb.adjacency_matrix()
    astar = dual_diagonal(c32_ctx, (-1, 0, Fraction(1, 2), Fraction(3, 4)))
    for gamma in (1, Fraction(-1, 3)):
        assert not verify_tridiagonal(a, astar, Fraction(5, 2), gamma, 36).holds


def test_identity_astar_commutes(cycle6):
    a = cycle6.adjacency_matrix()
    astar = ExactMatrix.identity(6)
    rep = verify_tridiagonal(a, astar, 7, 0, 0)
    assert rep.holds  # all commutators vanish


def test_verify_tridiagonal_dimension_mismatch(cycle6):
    with pytest.raises(ValueError):
        verify_tridiagonal(
            cycle6.adjacency_matrix(), ExactMatrix.identity(5), 0, 0, 0
        )


# -- entrywise oracle ---------------------------------------------------------------


def test_oracle_parity_zero(c32_fb, c32_ctx):
    # distance-2 pairs in a bipartite graph admit no length-3 walks
    theta = (-1, 0, Fraction(1, 2), Fraction(3, 4))
    y = c32_ctx.levels[1][0]
    z = c32_ctx.levels[1][1]
    first, _, _, _ = entrywise_oracle(c32_fb, c32_ctx, theta, y, z)
    assert first == 0


def test_oracle_cycle_example(cycle6):
    ctx = bfs_context(cycle6, 0)
    theta = (0, 1, 2, 3)
    first, mix, third, fourth = entrywise_oracle(cycle6, ctx, theta, 1, 0)
    assert first == 3 * (theta[1] - theta[0])
    assert fourth == theta[1] - theta[0]


def test_oracle_matches_matrix_products(cycle6):
    rng = random.Random(31)
    for g in [cycle6, random_connected_graph(rng, 8),
              random_connected_graph(rng, 12)]:
        ctx = bfs_context(g, 0)
        theta = tuple(
            k + Fraction(1, k + 2) for k in range(ctx.eccentricity + 1)
        )
        a = g.adjacency_matrix()
        astar = dual_diagonal(ctx, theta)
        a2 = a * a
        a3 = a2 * a
        mats = [
            a3 * astar - astar * a3,
            a * astar * a2 - a2 * astar * a,
            a2 * astar - astar * a2,
            a * astar - astar * a,
        ]
        for _ in range(20):
            y, z = rng.randrange(g.n), rng.randrange(g.n)
            vals = entrywise_oracle(g, ctx, theta, y, z)
            for got, mat in zip(vals, mats):
                assert got == mat[(z, y)]


# -- synthesis steps ---------------------------------------------------------------


def test_beta_dual_polar(dp_params):
    res = beta_from_structure(dp_params)
    assert res.consistent
    assert res.beta == Fraction(5, 2)


def test_beta_precondition_violation():
    params = UniformParams(
        (0, 1, Fraction(-4, 3)),
        (Fraction(-1, 6), Fraction(-1, 6), 0),
        (8, 8, 8),
    )
    res = beta_from_structure(params)
    assert not res.consistent
    assert res.level == 2


def test_beta_level_dependent():
    params = UniformParams(
        (0, Fraction(-4, 3), Fraction(-4, 3)),
        (Fraction(-1, 6), Fraction(-1, 3), 0),
        (8, 8, 8),
    )
    res = beta_from_structure(params)
    assert not res.consistent
    assert res.reason.startswith("beta differs")


def test_theta_dual_polar(dp_params):
    theta = theta_from_structure(dp_params, -1, 0)
    assert theta == (-1, 0, Fraction(1, 2), Fraction(3, 4))
    assert uniform_ratio(dp_params, 1) == Fraction(-1, 2)
    # agreement with the geometric form theta*_{i+1} =
    # theta*_1 + (theta*_1 - theta*_0)(b^i - 1)/(b^i (b - 1)) at b = 2
    for i in (1, 2):
        expected = Fraction(0) + (0 - (-1)) * Fraction(2 ** i - 1, 2 ** i)
        assert theta[i + 1] == expected


def test_theta_affine_invariance(dp_params):
    base = theta_from_structure(dp_params, -1, 0)
    scaled = theta_from_structure(dp_params, -1 * 3 + 5, 0 * 3 + 5)
    assert all(s == 3 * b + 5 for s, b in zip(scaled, base))


def test_theta_requires_distinct_seeds(dp_params):
    with pytest.raises(ValueError):
        theta_from_structure(dp_params, 1, 1)


def test_theta_alternating_when_ratio_one():
    # F(k) = 1 throughout: theta alternates and distinctness fails later
    params = UniformParams((0, 2, 2), (0, 0, 0), (1, 1, 1))
    assert uniform_ratio(params, 1) == 1
    theta = theta_from_structure(params, -1, 0)
    assert theta == (-1, 0, -1, 0)


def test_check_eq7a(dp_params):
    assert check_eq7a(dp_params, Fraction(5, 2)).ok
    # beta = 0 with F = 1: 1 + 1 != 0
    params = UniformParams((0, 2, 2), (0, 0, 0), (1, 1, 1))
    res = check_eq7a(params, 0)
    assert not res.ok and res.level == 2


def test_candidate_search_dual_polar(dp_params):
    res = candidate_search(dp_params)
    assert res.accepted
    cand = res.candidate
    assert cand.theta_star == (-1, 0, Fraction(1, 2), Fraction(3, 4))
    assert cand.beta == Fraction(5, 2)
    assert cand.gamma == 0
    assert cand.rho == 36


def test_candidate_search_beta_rho_independent_of_seeds(dp_params):
    for t0, t1 in [(-1, 0), (0, 1), (Fraction(1, 3), 7)]:
        res = candidate_search(dp_params, t0, t1)
        assert res.accepted
        assert res.candidate.beta == Fraction(5, 2)
        assert res.candidate.rho == 36


def test_candidate_search_c6_rejected(cycle6):
    split = lfr_split(cycle6, bfs_context(cycle6, 0))
    fit = fit_uniform(split)
    res = candidate_search(fit.canonical)
    assert not res.accepted
    assert res.rejected_step in (1, 4)


def test_candidate_search_nonconstant_f(dp_params):
    params = UniformParams(
        dp_params.e_minus, dp_params.e_plus, (8, 8, 9)
    )
    res = candidate_search(params)
    assert res.rejected_step == 5


def test_candidate_search_soundness(c32_fb, c32_ctx, dp_params):
    # the emitted candidate must satisfy the relation on the graph
    res = candidate_search(dp_params)
    astar = dual_diagonal(c32_ctx, res.candidate.theta_star)
    rep = verify_tridiagonal(
        c32_fb.adjacency_matrix(), astar,
        res.candidate.beta, res.candidate.gamma, res.candidate.rho,
    )
    assert rep.holds


def test_candidate_search_requires_eps3():
    params = UniformParams.constant(2, Fraction(-1, 2), Fraction(-1, 2), 3)
    with pytest.raises(ValueError):
        candidate_search(params)


@pytest.mark.parametrize("maker, base", [
    ("hamming33", 0),
    ("hypercube4", 0),
])
def test_candidate_soundness_other_families(maker, base):
    # uniform + successful search implies the exact relation holds,
    # whatever the family
    from uniformq.generators import hamming
    from uniformq.graphs import full_bipartite
    from uniformq.uniform import fit_uniform_constant, verify_uniform

    g, _ = hamming(3, 3) if maker == "hamming33" else hamming(4, 2)
    fb = full_bipartite(g, base)
    ctx = bfs_context(fb, base)
    split = lfr_split(fb, ctx)
    params = fit_uniform_constant(split)
    assert params is not None and verify_uniform(split, params).passed
    res = candidate_search(params)
    assert res.accepted
    assert res.candidate.beta == 2  # the arithmetic-ladder branch
    astar = dual_diagonal(ctx, res.candidate.theta_star)
    rep = verify_tridiagonal(
        fb.adjacency_matrix(), astar,
        res.candidate.beta, res.candidate.gamma, res.candidate.rho,
    )
    assert rep.holds


# -- closed-form theta ------------------------------------------------------------


def test_closed_form_theta_dual_polar():
    vals = [closed_form_theta(Fraction(5, 2), Fraction(-1, 2), i)
            for i in range(4)]
    assert vals == [-1, 0, Fraction(1, 2), Fraction(3, 4)]


def test_closed_form_theta_beta2():
    assert [closed_form_theta(2, -1, i) for i in range(5)] == [-1, 0, 1, 2, 3]


def test_closed_form_theta_matches_recurrence():
    # P(i) = beta P(i-1) - P(i-2), P(0) = 1, P(1) = -F1
    for beta, f1 in [(Fraction(5, 2), Fraction(-1, 2)),
                     (3, Fraction(2, 3)), (Fraction(7, 2), -2),
                     (1, Fraction(1, 2)), (-2, 3), (Fraction(-5, 2), 1)]:
        p = [Fraction(1), -Fraction(f1)]
        for _ in range(10):
            p.append(beta * p[-1] - p[-2])
        assert closed_form_theta(beta, f1, 0) == -1  # the normalisation
        for i in range(1, 11):
            assert closed_form_theta(beta, f1, i) == sum(p[1:i], Fraction(0))


def test_closed_form_theta_matches_theta_from_structure(dp_params):
    theta = theta_from_structure(dp_params, -1, 0)
    f1 = uniform_ratio(dp_params, 1)
    for i, t in enumerate(theta):
        assert closed_form_theta(Fraction(5, 2), f1, i) == t
