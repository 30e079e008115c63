"""Rational homotopy of gauge groups of principal bundles.

For a Q-local structure group with rational type an EM product, the gauge
group is a mapping space and its homotopy is dimension counting:

    dim pi_q(G(P))  = sum_r b_r(X) * mult_G(r + q)
    dim pi_q(G0(P)) = the same sum restricted to r >= 1.

The group type must be materialized deep enough for the window of q values
being asked about; callers pass an EMProduct already truncated appropriately.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import EMProduct
from .gca import FreeGCA, Generator, poincare_dims
from .linalg import GradedDims


@dataclass(frozen=True)
class GaugeQuery:
    group: EMProduct
    betti: GradedDims
    based: bool = False
    q_range: tuple[int, int] = (0, 24)

    def __post_init__(self):
        lo, hi = self.q_range
        if lo < 0 or hi < lo:
            raise ValueError(f"bad q_range {self.q_range}")


def pi_dim(group: EMProduct, betti: GradedDims, q: int, based: bool = False) -> int:
    r_min = 1 if based else 0
    return sum(
        betti.get(r) * group.mult(r + q)
        for r in betti.degrees()
        if r >= r_min
    )


def gauge_pi(query: GaugeQuery) -> dict[int, int]:
    """dim pi_q for every q in the query's inclusive range."""
    lo, hi = query.q_range
    return {
        q: pi_dim(query.group, query.betti, q, query.based)
        for q in range(lo, hi + 1)
    }


def sphere_case(m: int, group: EMProduct, n: int) -> int:
    """dim pi_n of the gauge group over S^m: mult(n + m) + mult(n)."""
    if m < 1:
        raise ValueError("sphere dimension must be >= 1")
    return group.mult(n + m) + group.mult(n)


def connectivity(query: GaugeQuery) -> int:
    """Largest c with pi_q = 0 for all q <= c inside the scanned range."""
    lo, hi = query.q_range
    for q in range(0, hi + 1):
        if pi_dim(query.group, query.betti, q, query.based):
            return q - 1
    return hi


def periodicity_check(query: GaugeQuery, k: int) -> bool:
    """Whether pi_q = pi_{q+4} for every q in [k, hi - 4].

    True for stable-tower group types; finite truncated types can fail, which
    is the caller's signal that the group EMProduct was cut too short.
    """
    _, hi = query.q_range
    for q in range(k, hi - 3):
        a = pi_dim(query.group, query.betti, q, query.based)
        b = pi_dim(query.group, query.betti, q + 4, query.based)
        if a != b:
            return False
    return True


def universal_bundle_pi(group_b_generators: tuple[Generator, ...],
                        group: EMProduct, q: int, max_degree: int = 24) -> int:
    """dim pi_q of the gauge group of the universal bundle, truncated.

    The base profile is the Poincare-series dimensions of the classifying
    space's free cohomology algebra through max_degree; the reported value is
    the (finite) truncated sum.
    """
    betti = poincare_dims(FreeGCA(group_b_generators), max_degree)
    return pi_dim(group, betti, q, based=False)
