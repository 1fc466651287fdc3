"""Finite rooted trees and backward solvers for successor-indexed equations.

Vertices carry coordinate tuples: the root is () and the children of x
are x + (1,), ..., x + (k_x,).  A problem assigns contractive factor
maps along edges and boundary values at the deepest level; the sweep
evaluates

    u_x = sum_i prod_{y in S(x)} factor_i(x, y)(arguments)

level by level from the boundary to the root.  Three argument
conventions are supported, selected by ``mode``:

* ``edge-tuple`` - every factor receives the full successor tuple
  (u_{(x,1)}, ..., u_{(x,k_x)});
* ``edge-value`` - the factor for successor y receives u_y alone;
* ``vertex``     - a single factor per summand on the full tuple
  (no product over successors).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Callable, Mapping

from .algebra import AlgebraElement, DomainSpec
from .contraction import ContractiveMap
from .number import DEFAULT_DIGITS, CertificateError, DomainError
from .recurrence import (OFFSETS_ANY, RecurrenceSpec, solve_power_fixed_point,
                         solve_recurrence)
from .sampling import sample_element

Vertex = tuple[int, ...]

MODE_EDGE_TUPLE = "edge-tuple"
MODE_EDGE_VALUE = "edge-value"
MODE_VERTEX = "vertex"

_MODES = (MODE_EDGE_TUPLE, MODE_EDGE_VALUE, MODE_VERTEX)

#: Upper bound on total vertex count; depth 12 for a binary tree fits.
DEFAULT_VERTEX_CAP = 1 << 13


@dataclass(frozen=True, slots=True)
class TreeShape:
    """Rooted tree of a given depth, uniform branching by default.

    ``branching_fn`` overrides the per-vertex child count; the total
    vertex count must stay under ``max_vertices``.
    """

    branching: int
    depth: int
    max_vertices: int = DEFAULT_VERTEX_CAP
    branching_fn: Callable[[Vertex], int] | None = None

    def __post_init__(self) -> None:
        if self.branching < 1:
            raise ValueError("branching must be >= 1")
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        self.levels()  # enforces the vertex cap eagerly

    def degree(self, vertex: Vertex) -> int:
        if self.branching_fn is not None:
            k = self.branching_fn(vertex)
            if k < 1:
                raise ValueError(f"vertex {vertex} must have >= 1 successor")
            return k
        return self.branching

    def successors(self, vertex: Vertex) -> list[Vertex]:
        return [vertex + (i,) for i in range(1, self.degree(vertex) + 1)]

    def levels(self) -> list[list[Vertex]]:
        out: list[list[Vertex]] = [[()]]
        total = 1
        for _ in range(self.depth):
            nxt: list[Vertex] = []
            for v in out[-1]:
                nxt.extend(self.successors(v))
            total += len(nxt)
            if total > self.max_vertices:
                raise ValueError(
                    f"tree exceeds the configured cap of {self.max_vertices} vertices")
            out.append(nxt)
        return out

    @property
    def is_uniform(self) -> bool:
        return self.branching_fn is None


@dataclass(frozen=True, slots=True)
class TreeProblem:
    """Tree equation data: shape, factor maps, boundary assignment.

    ``maps`` lists the M summand families; translation-invariant
    problems use the same list at every vertex.  ``edge_maps(x, j)``
    optionally overrides the family on the edge to the j-th successor
    (0-based).  The contraction bound of the whole family is
    p**-beta_exponent with beta_exponent the smallest declared exponent.
    """

    shape: TreeShape
    maps: tuple[ContractiveMap, ...]
    boundary: Mapping[Vertex, AlgebraElement]
    mode: str = MODE_EDGE_TUPLE
    edge_maps: Callable[[Vertex, int], tuple[ContractiveMap, ...]] | None = None

    def __post_init__(self) -> None:
        if self.mode not in _MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.maps:
            raise ValueError("at least one summand map required")
        ref = self.maps[0]
        for f in self.maps:
            if f.domain != ref.domain or f.prime != ref.prime:
                raise ValueError("maps must share one domain and prime")
        if self.mode == MODE_EDGE_VALUE:
            if any(f.arity != 1 for f in self.maps):
                raise ValueError("edge-value mode needs arity-1 maps")
        elif self.shape.is_uniform:
            if any(f.arity != self.shape.branching for f in self.maps):
                raise ValueError(
                    f"mode {self.mode!r} needs arity {self.shape.branching} maps")

    @property
    def domain(self) -> DomainSpec:
        return self.maps[0].domain

    @property
    def prime(self) -> int:
        return self.maps[0].prime

    @property
    def digits(self) -> int:
        return self.maps[0].digits

    @property
    def beta_exponent(self) -> int | float:
        return min(f.contraction_exponent for f in self.maps)

    @property
    def is_translation_invariant(self) -> bool:
        return self.edge_maps is None

    def family(self, vertex: Vertex, successor_index: int) -> tuple[ContractiveMap, ...]:
        if self.edge_maps is not None:
            return self.edge_maps(vertex, successor_index)
        return self.maps


def constant_boundary(shape: TreeShape, value: AlgebraElement) -> dict[Vertex, AlgebraElement]:
    return {leaf: value for leaf in shape.levels()[-1]}


def random_boundary(shape: TreeShape, domain: DomainSpec, prime: int,
                    digits: int = DEFAULT_DIGITS,
                    rng: random.Random | None = None) -> dict[Vertex, AlgebraElement]:
    rng = rng or random.Random(0)
    return {leaf: sample_element(domain, prime, digits, rng)
            for leaf in shape.levels()[-1]}


@dataclass(frozen=True, slots=True)
class TreeSolution:
    """Full vertex assignment produced by a backward sweep."""

    problem: TreeProblem
    values: dict[Vertex, AlgebraElement]
    levels: tuple[tuple[Vertex, ...], ...]

    @property
    def root_value(self) -> AlgebraElement:
        return self.values[()]

    def residual_valuation(self, vertex: Vertex) -> int | float:
        """Valuation of u_x - RHS(x); INF everywhere by construction."""
        args = tuple(self.values[y] for y in self.problem.shape.successors(vertex))
        rhs = _vertex_value(self.problem, vertex, args)
        return (self.values[vertex] - rhs).valuation_floor


def _vertex_value(problem: TreeProblem, vertex: Vertex,
                  args: tuple[AlgebraElement, ...]) -> AlgebraElement:
    total = None
    count = len(problem.maps)
    for i in range(count):
        if problem.mode == MODE_VERTEX:
            term = problem.family(vertex, 0)[i](*args)
        else:
            term = None
            for j in range(len(args)):
                f = problem.family(vertex, j)[i]
                factor = f(args[j]) if problem.mode == MODE_EDGE_VALUE else f(*args)
                term = factor if term is None else term * factor
        total = term if total is None else total + term
    return total


def backward_sweep(problem: TreeProblem) -> TreeSolution:
    """Evaluate the equation level by level down to the root."""
    levels = problem.shape.levels()
    values: dict[Vertex, AlgebraElement] = {}
    for leaf in levels[-1]:
        if leaf not in problem.boundary:
            raise ValueError(f"boundary value missing for leaf {leaf}")
        v = problem.boundary[leaf]
        problem.domain.require(v, f"boundary value at leaf {leaf}")
        values[leaf] = v
    for level in reversed(levels[:-1]):
        for x in level:
            args = tuple(values[y] for y in problem.shape.successors(x))
            values[x] = _vertex_value(problem, x, args)
    return TreeSolution(problem, values,
                        tuple(tuple(level) for level in levels))


@dataclass(frozen=True, slots=True)
class GapReport:
    """Result of solving with two boundaries and comparing sweeps.

    ``per_level[d]`` is the smallest difference valuation over level-d
    vertices; the guaranteed bound at the root is depth * beta_exponent.
    """

    root_gap_valuation: int | float
    bound: int | float
    per_level: tuple[int | float, ...]


def uniqueness_gap(problem: TreeProblem,
                   boundary2: Mapping[Vertex, AlgebraElement]) -> GapReport:
    """Sweep twice and certify how fast the boundary is forgotten."""
    sol1 = backward_sweep(problem)
    sol2 = backward_sweep(replace(problem, boundary=boundary2))
    per_level = []
    for level in sol1.levels:
        per_level.append(min((sol1.values[x] - sol2.values[x]).valuation_floor
                             for x in level))
    bound = problem.shape.depth * problem.beta_exponent
    root_gap = per_level[0]
    if root_gap < bound:
        raise CertificateError(
            f"root gap valuation {root_gap} below certified bound {bound}")
    return GapReport(root_gap, bound, tuple(per_level))


def invariant_solution(problem: TreeProblem, target_valuation: int,
                       initial: AlgebraElement | None = None, seed: int = 0,
                       max_iter: int = 512) -> AlgebraElement:
    """The translation-invariant value solving the equation at every vertex.

    Requires a uniform tree and a vertex-independent family; the value
    is the fixed point of the diagonal one-vertex equation, found by
    iteration, then certified against the full vertex rule.
    """
    if not problem.is_translation_invariant or not problem.shape.is_uniform:
        raise DomainError("invariant solution needs a translation-invariant "
                          "family on a uniform tree")
    k = problem.shape.branching
    reps = 1 if problem.mode == MODE_VERTEX else k
    if initial is None:
        initial = sample_element(problem.domain, problem.prime, problem.digits,
                                 random.Random(seed))
    if len(problem.maps) == 1:
        cert = solve_power_fixed_point(problem.maps[0], reps, target_valuation,
                                       initial=initial, max_iter=max_iter)
    else:
        rows = tuple((f.diagonal(),) * reps for f in problem.maps)
        offsets = tuple((0,) * reps for _ in problem.maps)
        spec = RecurrenceSpec(rows, offsets, offset_rule=OFFSETS_ANY)
        cert = solve_recurrence(spec, [initial], target_valuation,
                                max_iter=max_iter)
    star = cert.limit
    args = (star,) * k
    rhs = _vertex_value(problem, (), args)
    residual = (star - rhs).valuation_floor
    if residual < target_valuation:
        raise CertificateError(
            f"invariant value residual {residual} below target {target_valuation}")
    return star
