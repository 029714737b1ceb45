"""Minimum mean improvement solver for the weighted closest-vector problem.

Given a lattice L = ker M /\\ Z^m (M totally unimodular) with weights g and
a target t in the span of L, the solver minimizes the separable objective
w(v) = sum_i g_i (v_i - t_i)^2 over v in L.  Starting from the origin it
repeatedly cancels a strict Voronoi vector of minimum mean cost until the
progress measure lambda(v) hits zero exactly, which happens if and only if
v is a closest lattice vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import simplex
from .core import (
    FracVec,
    IntVec,
    PrimitiveChain,
    ZonotopalLattice,
    frac_vec,
    inner_product,
    int_vec,
    matrix_rank,
    primitive_chain,
    project_onto_span,
)
from .errors import (
    InternalInvariantError,
    InvalidInputError,
    StepSizeError,
)


@dataclass(frozen=True)
class CVPInstance:
    """A lattice plus a rational target already lying in its span."""

    lattice: ZonotopalLattice
    target: FracVec

    def __post_init__(self):
        object.__setattr__(self, "target", frac_vec(self.target))
        if self.lattice.m < 1:
            raise InvalidInputError("the lattice needs at least one coordinate")
        if len(self.target) != self.lattice.m:
            raise InvalidInputError("target length does not match the lattice")
        if any(s != 0 for s in self.lattice.matrix.apply(self.target)):
            raise InvalidInputError(
                "target is not in the span of the lattice; project it first"
            )

    @property
    def m(self) -> int:
        return self.lattice.m

    @property
    def weights(self) -> FracVec:
        return self.lattice.weights

    def distance_sq(self, v: Sequence) -> Fraction:
        diff = [Fraction(a) - b for a, b in zip(v, self.target)]
        return inner_product(diff, diff, self.weights)


def cvp_instance(lattice: ZonotopalLattice, target: Sequence,
                 project: bool = True) -> CVPInstance:
    """Build an instance, projecting the target onto the span by default."""
    t = project_onto_span(target, lattice) if project else frac_vec(target)
    return CVPInstance(lattice=lattice, target=t)


@dataclass(frozen=True)
class IterationRecord:
    index: int
    v: IntVec                 # iterate after this step
    lam: Fraction             # lambda at the point the step left
    u: PrimitiveChain
    step: int
    distance_sq: Fraction
    step_fallback: bool = False


@dataclass(frozen=True)
class CVPSolution:
    closest: IntVec
    distance_sq: Fraction
    trace: tuple[IterationRecord, ...]
    certified: bool

    @property
    def iterations(self) -> int:
        return len(self.trace)

    def lambda_trace(self) -> tuple[Fraction, ...]:
        """Lambda at the start of each iteration, then the final zero."""
        return tuple(r.lam for r in self.trace) + (Fraction(0),)


@dataclass(frozen=True)
class SolveOptions:
    certify: bool = True
    enumeration_cap: int = 14


@dataclass(frozen=True)
class StoppingData:
    K: int
    delta: Fraction
    iteration_cap: int


# ---------------------------------------------------------------------------
# Discrete derivatives and costs
# ---------------------------------------------------------------------------


def right_derivative(i: int, v_i: int, instance: CVPInstance) -> Fraction:
    """w_i(v_i + 1) - w_i(v_i) = g_i (2 (v_i - t_i) + 1)."""
    g = instance.weights[i]
    return g * (2 * (Fraction(v_i) - instance.target[i]) + 1)


def left_derivative(i: int, v_i: int, instance: CVPInstance) -> Fraction:
    """w_i(v_i) - w_i(v_i - 1) = g_i (2 (v_i - t_i) - 1)."""
    g = instance.weights[i]
    return g * (2 * (Fraction(v_i) - instance.target[i]) - 1)


def cost(v: Sequence, u: PrimitiveChain, instance: CVPInstance) -> Fraction:
    """Exact change of w when stepping from v to v + u."""
    total = Fraction(0)
    for i in u.positive_part:
        total += right_derivative(i, v[i], instance)
    for i in u.negative_part:
        total -= left_derivative(i, v[i], instance)
    return total


# ---------------------------------------------------------------------------
# lambda(v) via an exact LP
# ---------------------------------------------------------------------------


def lambda_lp(v: Sequence, instance: CVPInstance) -> simplex.LPProblem:
    """LP whose optimum is -lambda(v) whenever lambda(v) > 0.

    Variables are x+ then x- (m each):
        min  sum_i c_i^+(v_i) x_i^+ - c_i^-(v_i) x_i^-
        s.t. M (x+ - x-) = 0,  sum_i (x_i^+ + x_i^-) = 1,  x+, x- >= 0.
    """
    m = instance.m
    obj = [right_derivative(i, v[i], instance) for i in range(m)]
    obj += [-left_derivative(i, v[i], instance) for i in range(m)]
    rows = []
    rhs = []
    for row in instance.lattice.matrix.entries:
        rows.append([Fraction(e) for e in row] + [Fraction(-e) for e in row])
        rhs.append(Fraction(0))
    rows.append([Fraction(1)] * (2 * m))
    rhs.append(Fraction(1))
    return simplex.lp_problem(obj, rows, rhs)


def compute_lambda(v: Sequence, instance: CVPInstance) -> tuple[Fraction, FracVec]:
    """lambda(v) = max(0, -opt) plus the optimal LP vertex."""
    vv = int_vec(v)
    if not instance.lattice.contains(vv):
        raise InvalidInputError(f"{vv} is not a lattice member")
    res = simplex.solve_lp(lambda_lp(vv, instance))
    if res.status != simplex.OPTIMAL:
        raise InternalInvariantError(f"lambda LP reported {res.status}")
    lam = max(Fraction(0), -res.optimum)
    return lam, res.vertex


def min_mean_voronoi_vector(v: Sequence, instance: CVPInstance,
                            lam: Fraction | None = None) -> PrimitiveChain:
    """Strict Voronoi vector of minimum mean cost, minimal support, at v.

    Probes coordinates in ascending index order, fixing x_i^+ = x_i^- = 0
    whenever the LP optimum stays at -lambda(v); the final optimal vertex
    then rescales exactly to a {-1,0,+1} kernel vector.
    """
    vv = int_vec(v)
    prob = lambda_lp(vv, instance)
    res = simplex.solve_lp(prob)
    if res.status != simplex.OPTIMAL:
        raise InternalInvariantError(f"lambda LP reported {res.status}")
    target_opt = res.optimum
    found = max(Fraction(0), -target_opt)
    if lam is not None and lam != found:
        raise InternalInvariantError(f"lambda mismatch: given {lam}, LP found {found}")
    if found <= 0:
        raise InvalidInputError("lambda(v) = 0: no improving vector exists")
    m = instance.m
    fixed: set[int] = set()
    vertex = res.vertex
    for i in range(m):
        if vertex[i] == 0 and vertex[m + i] == 0:
            # the incumbent optimal vertex already avoids i, so the probe
            # LP keeps the optimum and the fix is accepted for free
            fixed |= {i, m + i}
            continue
        trial = fixed | {i, m + i}
        probe = simplex.solve_with_fixed_zero(prob, trial)
        if probe.status == simplex.OPTIMAL and probe.optimum == target_opt:
            fixed = trial
            vertex = probe.vertex
    diff = [vertex[i] - vertex[m + i] for i in range(m)]
    scale = max(abs(d) for d in diff)
    if scale == 0:
        raise InternalInvariantError("optimal LP vertex rescaled to zero")
    coords = []
    for d in diff:
        q = d / scale
        if q not in (-1, 0, 1):
            raise InternalInvariantError(
                "minimal-support LP vertex is not a rescaled primitive chain"
            )
        coords.append(int(q))
    u = primitive_chain(coords, instance.lattice)
    mean = Fraction(cost(vv, u, instance), len(u.support))
    if mean != target_opt:
        raise InternalInvariantError(
            f"extracted vector has mean cost {mean}, expected {target_opt}"
        )
    return u


# ---------------------------------------------------------------------------
# Step length and stopping data
# ---------------------------------------------------------------------------


def step_size(lam: Fraction, instance: CVPInstance) -> int:
    """Minimum integer in the interval [max_i lam/g_i, min_i lam/g_i + 1].

    With spread-out weights the intersection can be empty (StepSizeError),
    and even when it is not, the value roughly doubles the line-search
    minimizer, which can stall progress to an arithmetic zigzag.  The main
    loop therefore steps by saturating_step instead; this operation is kept
    for callers that want the interval rule itself.
    """
    if lam <= 0:
        raise InvalidInputError("step size requires lambda > 0")
    lo = max(lam / g for g in instance.weights)
    hi = min(lam / g + 1 for g in instance.weights)
    delta = math.ceil(lo)
    if delta > hi:
        raise StepSizeError(f"no integer in step interval [{lo}, {hi}]")
    if delta < 1:
        raise InternalInvariantError("step size must be positive")
    return delta


def saturating_step(lam: Fraction, u: PrimitiveChain,
                    instance: CVPInstance) -> int:
    """Smallest integer step making the canceled chain nonnegative-cost.

    c(v + D u, u) = c(v, u) + 2 D sum_{supp u} g_i, so D >= lam p / (2 S)
    with p = |supp u| and S the support weight sum saturates u; the ceiling
    of that threshold is also an exact discrete line-search minimizer of
    w(v + D u).  It always exists, keeps the descent strict, and preserves
    the geometric decrease of lambda.
    """
    p = len(u.support)
    s = sum(instance.weights[i] for i in u.support)
    delta = math.ceil(Fraction(lam * p, 2 * s))
    return max(1, delta)


def stopping_data(instance: CVPInstance) -> StoppingData:
    """Integrality scale K, threshold delta, and a bug-detecting iteration cap.

    K is the lcm of the denominators of g_i and of 2 g_i t_i, so K times any
    cost is an integer; any positive lambda is then at least 1/(K m), and
    delta = 1/(2 K m) sits strictly below it.  The cap combines the
    geometric decrease of lambda (factor 1 - 1/(2m) every m - rank(M)
    iterations) with a safety margin; exact arithmetic stops at lambda = 0
    long before.
    """
    m = instance.m
    K = 1
    for g, t in zip(instance.weights, instance.target):
        K = math.lcm(K, g.denominator, (2 * g * t).denominator)
    delta = Fraction(1, 2 * K * m)
    lam0, _ = compute_lambda((0,) * m, instance)
    blocks = 0
    if lam0 > 0:
        ratio = lam0 * 2 * K * m  # lam0 / delta
        if ratio > 1:
            blocks = math.ceil(math.log(float(ratio)) / -math.log(1 - 1 / (2 * m)))
    block_len = m - matrix_rank(instance.lattice.matrix)
    cap = max(1, block_len) * blocks + m + 16
    return StoppingData(K=K, delta=delta, iteration_cap=cap)


# ---------------------------------------------------------------------------
# Main loop
# ---------------------------------------------------------------------------


def solve_cvp(instance: CVPInstance,
              options: SolveOptions | None = None) -> CVPSolution:
    """Walk from the origin to a closest lattice vector.

    Each iteration cancels a minimum mean strict Voronoi vector by the
    saturating line-search step.  Every iteration strictly decreases the
    squared distance and never increases lambda; both are asserted, and a
    step of length one is retried if a longer step ever violates them.
    """
    opts = options or SolveOptions()
    m = instance.m
    sd = stopping_data(instance)
    v: IntVec = (0,) * m
    dist = instance.distance_sq(v)
    lam, _ = compute_lambda(v, instance)
    records: list[IterationRecord] = []
    while lam > 0:
        if len(records) >= sd.iteration_cap:
            raise InternalInvariantError(
                f"iteration cap {sd.iteration_cap} exceeded; lambda = {lam}"
            )
        if lam * sd.K * m < 1:
            # positive lambda below 1/(K m) contradicts K-integrality of costs
            raise InternalInvariantError(
                f"stopping-rule inconsistency: 0 < lambda = {lam} < 1/(K m)"
            )
        u = min_mean_voronoi_vector(v, instance, lam=lam)
        fallback = False
        delta = saturating_step(lam, u, instance)
        v_next, dist_next, lam_next = _attempt(v, u, delta, instance)
        if delta > 1 and (lam_next > lam or dist_next >= dist):
            delta = 1
            fallback = True
            v_next, dist_next, lam_next = _attempt(v, u, 1, instance)
        if lam_next > lam:
            raise InternalInvariantError(
                f"lambda increased from {lam} to {lam_next} at unit step"
            )
        if dist_next >= dist:
            raise InternalInvariantError(
                f"squared distance failed to decrease ({dist} -> {dist_next})"
            )
        records.append(IterationRecord(
            index=len(records) + 1, v=v_next, lam=lam, u=u, step=delta,
            distance_sq=dist_next, step_fallback=fallback,
        ))
        v, dist, lam = v_next, dist_next, lam_next
    certified = False
    if opts.certify and m <= opts.enumeration_cap:
        from . import oracle  # deferred: oracle imports this module

        if not oracle.certify_closest(v, instance):
            raise InternalInvariantError(
                "lambda reached zero but the Voronoi certificate failed"
            )
        certified = True
    return CVPSolution(closest=v, distance_sq=dist, trace=tuple(records),
                       certified=certified)


def _attempt(v: IntVec, u: PrimitiveChain, delta: int,
             instance: CVPInstance) -> tuple[IntVec, Fraction, Fraction]:
    v_next = tuple(a + delta * b for a, b in zip(v, u.coords))
    dist_next = instance.distance_sq(v_next)
    lam_next, _ = compute_lambda(v_next, instance)
    return v_next, dist_next, lam_next
