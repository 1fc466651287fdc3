"""Backward sweeps, boundary-forgetting gaps, invariant solutions."""

import random
from fractions import Fraction

import pytest
from oracles import ep_candidates, mobius_mod, rational_mod, scan_unique_root

from padicsolve import (INF, AlgebraElement, CertificateError, DomainError,
                        DomainSpec, PadicNumber, TreeProblem, TreeShape,
                        backward_sweep, constant_boundary, constant_map,
                        invariant_solution, random_boundary, uniqueness_gap)
from padicsolve.tree import MODE_EDGE_VALUE, MODE_VERTEX

EP = DomainSpec.ep()


def ep_scalar(value, digits=60):
    return AlgebraElement.scalar(PadicNumber.from_int(value, 5, digits))


def fraction_mobius(coeffs, x: Fraction, y: Fraction) -> Fraction:
    a, b, c, a1, b1, c1 = coeffs
    return (a * x * y + b * (x + y) + c) / (a1 * x * y + b1 * (x + y) + c1)


def test_shape_coordinates_and_cap():
    shape = TreeShape(2, 3)
    levels = shape.levels()
    assert levels[0] == [()]
    assert levels[1] == [(1,), (2,)]
    assert len(levels[3]) == 8
    assert shape.successors((1, 2)) == [(1, 2, 1), (1, 2, 2)]
    TreeShape(2, 12)  # exactly at the default cap
    with pytest.raises(ValueError):
        TreeShape(2, 13)


def test_constant_maps_give_squares_on_binary_tree():
    c = ep_scalar(6)
    f = constant_map(c, EP, arity=2)
    shape = TreeShape(2, 3)
    problem = TreeProblem(shape, (f,), constant_boundary(shape, ep_scalar(1)))
    solution = backward_sweep(problem)
    square = c * c
    for level in solution.levels[:-1]:
        for v in level:
            assert solution.values[v] == square


def test_collapsed_map_gives_all_ones(mobius_ones):
    shape = TreeShape(2, 4)
    boundary = random_boundary(shape, EP, 5, 60, random.Random(3))
    problem = TreeProblem(shape, (mobius_ones,), boundary, mode=MODE_VERTEX)
    solution = backward_sweep(problem)
    for level in solution.levels[:-1]:
        for v in level:
            assert solution.values[v] == ep_scalar(1)


def test_depth3_root_matches_rational_oracle(mobius_116):
    # three-fold composition starting from the all-ones boundary,
    # evaluated independently with exact rational arithmetic
    coeffs = (1, 1, 1, 1, 1, 6)
    w = Fraction(1)
    for _ in range(3):
        w = fraction_mobius(coeffs, w, w)
    expected = rational_mod(w, 5**3)
    shape = TreeShape(2, 3)
    problem = TreeProblem(shape, (mobius_116,),
                          constant_boundary(shape, ep_scalar(1)),
                          mode=MODE_VERTEX)
    solution = backward_sweep(problem)
    assert solution.root_value.scalar_value.residue(3) == expected


def test_edge_value_mode(mobius_116):
    g = mobius_116.diagonal()
    shape = TreeShape(2, 2)
    problem = TreeProblem(shape, (g,), constant_boundary(shape, ep_scalar(6)),
                          mode=MODE_EDGE_VALUE)
    solution = backward_sweep(problem)
    level1 = g(ep_scalar(6)) * g(ep_scalar(6))
    assert solution.values[(1,)] == level1
    assert solution.root_value == g(level1) * g(level1)


def test_sweep_is_deterministic(mobius_116):
    shape = TreeShape(2, 5)
    boundary = random_boundary(shape, EP, 5, 60, random.Random(8))
    problem = TreeProblem(shape, (mobius_116,), boundary, mode=MODE_VERTEX)
    s1 = backward_sweep(problem)
    s2 = backward_sweep(problem)
    assert all(s1.values[v] == s2.values[v] for v in s1.values)


def test_residuals_vanish_by_construction(mobius_116):
    shape = TreeShape(2, 3)
    boundary = random_boundary(shape, EP, 5, 60, random.Random(2))
    problem = TreeProblem(shape, (mobius_116,), boundary, mode=MODE_VERTEX)
    solution = backward_sweep(problem)
    for level in solution.levels[:-1]:
        for v in level:
            assert solution.residual_valuation(v) == INF


def test_boundary_validation(mobius_116):
    shape = TreeShape(2, 2)
    good = constant_boundary(shape, ep_scalar(1))
    problem = TreeProblem(shape, (mobius_116,), good, mode=MODE_VERTEX)
    backward_sweep(problem)
    bad = dict(good)
    bad[(1, 1)] = ep_scalar(2)  # not in E_p
    with pytest.raises(DomainError, match=r"\(1, 1\)"):
        backward_sweep(TreeProblem(shape, (mobius_116,), bad, mode=MODE_VERTEX))
    missing = dict(good)
    del missing[(2, 2)]
    with pytest.raises(ValueError, match=r"\(2, 2\)"):
        backward_sweep(TreeProblem(shape, (mobius_116,), missing,
                                   mode=MODE_VERTEX))


def test_uniqueness_gap_identical_boundaries(mobius_116):
    shape = TreeShape(2, 4)
    boundary = random_boundary(shape, EP, 5, 60, random.Random(5))
    problem = TreeProblem(shape, (mobius_116,), boundary, mode=MODE_VERTEX)
    report = uniqueness_gap(problem, boundary)
    assert report.root_gap_valuation == INF
    assert all(g == INF for g in report.per_level)


def test_uniqueness_gap_collapsed_map(mobius_ones):
    shape = TreeShape(2, 3)
    rng = random.Random(6)
    b1 = random_boundary(shape, EP, 5, 60, rng)
    b2 = random_boundary(shape, EP, 5, 60, rng)
    problem = TreeProblem(shape, (mobius_ones,), b1, mode=MODE_VERTEX)
    report = uniqueness_gap(problem, b2)
    # interior values all equal 1 exactly, only the leaves differ
    assert report.root_gap_valuation == INF
    assert all(g == INF for g in report.per_level[:-1])


def test_uniqueness_gap_depth10(mobius_116):
    shape = TreeShape(2, 10)
    rng = random.Random(12)
    b1 = random_boundary(shape, EP, 5, 60, rng)
    b2 = random_boundary(shape, EP, 5, 60, rng)
    problem = TreeProblem(shape, (mobius_116,), b1, mode=MODE_VERTEX)
    report = uniqueness_gap(problem, b2)
    assert report.bound == 10
    assert report.root_gap_valuation >= 10
    for level, gap in enumerate(report.per_level):
        assert gap >= 10 - level


def test_invariant_solution_constant():
    c = ep_scalar(6)
    shape = TreeShape(2, 3)
    f = constant_map(c, EP, arity=2)
    problem = TreeProblem(shape, (f,), constant_boundary(shape, ep_scalar(1)))
    star = invariant_solution(problem, 30)
    assert star == c * c


def test_invariant_solution_collapsed(mobius_ones):
    shape = TreeShape(2, 3)
    problem = TreeProblem(shape, (mobius_ones,),
                          constant_boundary(shape, ep_scalar(1)),
                          mode=MODE_VERTEX)
    assert invariant_solution(problem, 30) == ep_scalar(1)


def test_invariant_solution_on_unary_tree(mobius_116):
    root = scan_unique_root(
        lambda u, mod: mobius_mod((1, 1, 1, 1, 1, 6), u, u, mod),
        5, 2, ep_candidates(5, 2))
    shape = TreeShape(1, 4)
    g = mobius_116.diagonal()
    problem = TreeProblem(shape, (g,), constant_boundary(shape, ep_scalar(1)))
    star = invariant_solution(problem, 40)
    assert star.scalar_value.residue(2) == root == 6


def test_invariant_boundary_reproduces_itself(mobius_116):
    shape = TreeShape(2, 4)
    problem = TreeProblem(shape, (mobius_116,),
                          constant_boundary(shape, ep_scalar(1)),
                          mode=MODE_VERTEX)
    star = invariant_solution(problem, 40)
    pinned = TreeProblem(shape, (mobius_116,), constant_boundary(shape, star),
                         mode=MODE_VERTEX)
    solution = backward_sweep(pinned)
    for level in solution.levels:
        for v in level:
            assert (solution.values[v] - star).valuation_floor >= 40


def test_invariant_solution_rejects_non_uniform(mobius_116):
    shape = TreeShape(2, 3)
    problem = TreeProblem(shape, (mobius_116,),
                          constant_boundary(shape, ep_scalar(1)),
                          mode=MODE_VERTEX,
                          edge_maps=lambda x, j: (mobius_116,))
    with pytest.raises(DomainError):
        invariant_solution(problem, 20)


def test_per_vertex_branching():
    c = ep_scalar(6)
    f1 = constant_map(c, EP, arity=1)
    shape = TreeShape(2, 2, branching_fn=lambda v: 2 if len(v) == 0 else 1)
    boundary = {leaf: ep_scalar(1) for leaf in shape.levels()[-1]}
    problem = TreeProblem(shape, (f1,), boundary, mode=MODE_VERTEX,
                          edge_maps=lambda x, j: (constant_map(c, EP,
                                                               arity=len(x) and 1 or 2),))
    # root has 2 children, deeper vertices 1
    assert shape.degree(()) == 2
    assert shape.degree((1,)) == 1
    solution = backward_sweep(problem)
    assert solution.values[(1,)] == c
