"""Minimization algorithms with provable guarantees, plus lower bounds.

Body-count and body-area minimization are exact.  Total area gets a
2-approximation from any Hamiltonian cycle of the body graph.  Clause-count
style measures use a minimum spanning in-arborescence of the clause-cost
body graph; literal count uses an in-arborescence of the literal-cost graph
rooted at a smallest body.  Each dispatch also tries the cheap Hamiltonian
candidate and keeps the smaller formula, which realizes the ``min{..., k}``
term of the guarantees constructively.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    ClauseGroup,
    HornCNF,
    KeyHornInstance,
    Measure,
    measure_size,
    verify_representation,
)
from .graph import body_graph_c, body_graph_l, lambda_formula, min_in_arborescence

STRATEGY_EXACT = "exact"
STRATEGY_HAMILTONIAN = "hamiltonian"
STRATEGY_PROCEDURE1 = "procedure1"
STRATEGY_PROCEDURE2 = "procedure2"
STRATEGY_BEST_OF = "best_of"

STRATEGIES = (
    STRATEGY_EXACT,
    STRATEGY_HAMILTONIAN,
    STRATEGY_PROCEDURE1,
    STRATEGY_PROCEDURE2,
    STRATEGY_BEST_OF,
)


@dataclass(frozen=True)
class MinimizationResult:
    """A verified representation with its size, bound and guarantee."""

    formula: HornCNF
    measure: Measure
    size: int
    lower_bound: int
    guarantee: Fraction
    strategy: str

    def ratio(self) -> Fraction:
        return Fraction(self.size, self.lower_bound)


def _ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError("argument must be positive")
    return (x - 1).bit_length()


def guarantee_factor(inst: KeyHornInstance, mu: Measure) -> Fraction:
    """The proved approximation factor of ``minimize`` for this measure."""
    n, k = inst.n, inst.k
    if mu in (Measure.B, Measure.BA):
        return Fraction(1)
    if mu is Measure.TA:
        return Fraction(2)
    if mu in (Measure.C, Measure.BC):
        return Fraction(min(_ceil_log2(n) + 1, _ceil_log2(k) + 2, k))
    if mu is Measure.L:
        return min(Fraction(108, 17) * _ceil_log2(k) + 2, Fraction(k))
    raise ValueError(f"unknown measure {mu!r}")


def lower_bound(inst: KeyHornInstance, mu: Measure) -> int:
    """Unconditional lower bound on the optimal ``mu``-size.

    Every representation uses all m minimal bodies; every variable must be
    the head of some clause (so at least n clauses); each such clause has a
    body of size at least delta and at least two literals.
    """
    _require_normalized(inst)
    n, m, delta = inst.n, inst.m, inst.delta
    sum_bodies = sum(len(b) for b in inst.bodies)
    if mu is Measure.B:
        return m
    if mu is Measure.BA:
        return sum_bodies
    if mu is Measure.TA:
        return max(m, n, sum_bodies)
    if mu is Measure.C:
        return max(m, n)
    if mu is Measure.BC:
        return m + n
    if mu is Measure.L:
        return max(n * (delta + 1), 2 * m)
    raise ValueError(f"unknown measure {mu!r}")


def lower_bound_partition_c(inst: KeyHornInstance) -> int:
    """Clause-count bound from the singleton partition: chaining out of each
    body B costs at least the cheapest |B' \\ B| over the other bodies.

    Valid for any Sperner family; normalization is not required.
    """
    if inst.m < 2:
        raise ValueError("partition bound needs at least two bodies")
    masks = [b.mask for b in inst.bodies]
    total = 0
    for i, bi in enumerate(masks):
        total += min(
            (masks[j] & ~bi).bit_count() for j in range(inst.m) if j != i
        )
    return total


def _require_normalized(inst: KeyHornInstance) -> None:
    if not inst.is_normalized:
        raise ValueError("instance must be normalized (covering and coreless)")


def _verified(formula: HornCNF, inst: KeyHornInstance) -> HornCNF:
    res = verify_representation(formula, inst)
    if not res:
        raise AssertionError(f"produced formula failed verification: {res}")
    return formula


def hamiltonian_formula(inst: KeyHornInstance, order: Optional[Sequence[int]] = None) -> HornCNF:
    """Representation from a Hamiltonian cycle of the body graph: each body
    implies the next body's missing variables.  A k-approximation for every
    measure; the default cycle order is the instance's body order."""
    _require_normalized(inst)
    if inst.m < 2:
        raise ValueError("a cycle needs at least two bodies")
    if order is None:
        order = range(inst.m)
    order = list(order)
    if sorted(order) != list(range(inst.m)):
        raise ValueError("order must be a permutation of the body indices")
    bodies = inst.bodies
    groups = []
    for idx, i in enumerate(order):
        j = order[(idx + 1) % inst.m]
        groups.append(ClauseGroup(bodies[i], bodies[j] - bodies[i]))
    return _verified(HornCNF(inst.n, groups), inst)


def minimize_b_ba(inst: KeyHornInstance, mu: Measure = Measure.B) -> MinimizationResult:
    """Exact body-count / body-area minimization: any strongly connected
    cycle formula uses each minimal body exactly once, which is optimal."""
    if mu not in (Measure.B, Measure.BA):
        raise ValueError(f"only the body measures are exact here, got {mu}")
    _require_normalized(inst)
    formula = hamiltonian_formula(inst)
    size = measure_size(formula, mu)
    lb = lower_bound(inst, mu)
    assert size == lb, "cycle formula must meet the body-measure optimum"
    return MinimizationResult(formula, mu, size, lb, Fraction(1), STRATEGY_EXACT)


def procedure1(inst: KeyHornInstance, mu: Measure = Measure.C) -> MinimizationResult:
    """Clause-count minimizer: a minimum clause-cost spanning in-arborescence
    routes every body's chaining to a root body, which then implies the rest
    of the universe directly."""
    if mu not in (Measure.C, Measure.BC):
        raise ValueError(f"arborescence construction covers C and BC, got {mu}")
    _require_normalized(inst)
    g = body_graph_c(inst)
    arb = min_in_arborescence(g)
    bodies = inst.bodies
    groups = [
        ClauseGroup(bodies[x], bodies[s] - bodies[x]) for x, s in arb.succ.items()
    ]
    root_body = bodies[arb.root]
    groups.append(ClauseGroup(root_body, root_body.complement()))
    formula = _verified(HornCNF(inst.n, groups), inst)
    lb = max(lower_bound(inst, mu), _extra_bound(inst, mu))
    return MinimizationResult(
        formula,
        mu,
        measure_size(formula, mu),
        lb,
        guarantee_factor(inst, mu),
        STRATEGY_PROCEDURE1,
    )


def procedure2(inst: KeyHornInstance) -> MinimizationResult:
    """Literal-count minimizer: a minimum literal-cost spanning
    in-arborescence rooted at a smallest body, each tree arc realized by its
    shortest-path chain formula, plus the root's full clause group."""
    _require_normalized(inst)
    g = body_graph_l(inst)
    root = 0  # canonical body order puts a smallest body first
    arb = min_in_arborescence(g, root=root)
    bodies = inst.bodies
    groups: list[ClauseGroup] = []
    for x, s in arb.succ.items():
        groups.extend(lambda_formula(inst, bodies[x], bodies[s]).formula.groups)
    root_body = bodies[root]
    groups.append(ClauseGroup(root_body, root_body.complement()))
    formula = _verified(HornCNF(inst.n, groups), inst)
    return MinimizationResult(
        formula,
        Measure.L,
        measure_size(formula, Measure.L),
        lower_bound(inst, Measure.L),
        guarantee_factor(inst, Measure.L),
        STRATEGY_PROCEDURE2,
    )


def _extra_bound(inst: KeyHornInstance, mu: Measure) -> int:
    if mu is Measure.C and inst.m >= 2:
        return lower_bound_partition_c(inst)
    return 0


def _hamiltonian_result(inst: KeyHornInstance, mu: Measure) -> MinimizationResult:
    formula = hamiltonian_formula(inst)
    if mu in (Measure.B, Measure.BA):
        guarantee = Fraction(1)
    elif mu is Measure.TA:
        guarantee = Fraction(2)
    else:
        guarantee = Fraction(inst.k)
    lb = max(lower_bound(inst, mu), _extra_bound(inst, mu))
    return MinimizationResult(
        formula, mu, measure_size(formula, mu), lb, guarantee, STRATEGY_HAMILTONIAN
    )


def minimize(inst: KeyHornInstance, mu: Measure) -> MinimizationResult:
    """Best available representation for one measure.

    B/BA are exact; TA uses the Hamiltonian 2-approximation; C/BC take the
    smaller of the arborescence and Hamiltonian candidates; L takes the
    smaller of the rooted literal arborescence and Hamiltonian candidates.
    Ties prefer the arborescence construction.
    """
    _require_normalized(inst)
    if mu in (Measure.B, Measure.BA):
        return minimize_b_ba(inst, mu)
    if mu is Measure.TA:
        return _hamiltonian_result(inst, mu)
    if mu in (Measure.C, Measure.BC):
        main = procedure1(inst, mu)
    elif mu is Measure.L:
        main = procedure2(inst)
    else:
        raise ValueError(f"unknown measure {mu!r}")
    ham = _hamiltonian_result(inst, mu)
    winner = main if main.size <= ham.size else ham
    return MinimizationResult(
        winner.formula,
        mu,
        winner.size,
        winner.lower_bound,
        guarantee_factor(inst, mu),
        winner.strategy,
    )


def minimize_all(inst: KeyHornInstance) -> dict[Measure, MinimizationResult]:
    """All six measures at once, sharing the candidate constructions (and
    their verifications) across measures.  Per-measure results are identical
    to calling ``minimize`` separately."""
    _require_normalized(inst)
    ham = hamiltonian_formula(inst)
    p1 = procedure1(inst, Measure.C)
    p2 = procedure2(inst)

    def ham_result(mu: Measure) -> MinimizationResult:
        if mu in (Measure.B, Measure.BA):
            guarantee = Fraction(1)
        elif mu is Measure.TA:
            guarantee = Fraction(2)
        else:
            guarantee = Fraction(inst.k)
        lb = max(lower_bound(inst, mu), _extra_bound(inst, mu))
        return MinimizationResult(
            ham, mu, measure_size(ham, mu), lb, guarantee, STRATEGY_HAMILTONIAN
        )

    out: dict[Measure, MinimizationResult] = {}
    for mu in (Measure.B, Measure.BA):
        res = ham_result(mu)
        out[mu] = MinimizationResult(
            ham, mu, res.size, res.lower_bound, Fraction(1), STRATEGY_EXACT
        )
    out[Measure.TA] = ham_result(Measure.TA)
    for mu in (Measure.C, Measure.BC):
        main_size = measure_size(p1.formula, mu)
        hres = ham_result(mu)
        if main_size <= hres.size:
            out[mu] = MinimizationResult(
                p1.formula,
                mu,
                main_size,
                hres.lower_bound,
                guarantee_factor(inst, mu),
                STRATEGY_PROCEDURE1,
            )
        else:
            out[mu] = MinimizationResult(
                hres.formula,
                mu,
                hres.size,
                hres.lower_bound,
                guarantee_factor(inst, mu),
                STRATEGY_HAMILTONIAN,
            )
    hres = ham_result(Measure.L)
    if p2.size <= hres.size:
        out[Measure.L] = p2
    else:
        out[Measure.L] = MinimizationResult(
            hres.formula,
            Measure.L,
            hres.size,
            hres.lower_bound,
            guarantee_factor(inst, Measure.L),
            STRATEGY_HAMILTONIAN,
        )
    return out
