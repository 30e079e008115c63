"""Structure-set computations for the tower levels 4, 8, 12, 16.

Everything is reported at the level of Q-dimensions: obstruction status,
torsor dimensions, and the labeled summand decompositions that compare
structure classes on a covered bundle with classes on its underlying bundle.
The level-8 and level-12 decompositions implement the closed forms

    H^7(Q)  =  Q a7  +  a3 (x) H^4(M)  +  H^7(M)        (kernel: S.phi4)
    H^11(Q) =  Q a11 +  a7 (x) H^4(M)  +  a3 (x) H^8(M) +  H^11(M)
                                        (kernel: F.phi4 and S.psi8)

which the Serre engine reproduces as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .catalog import level_name, obstruction_display
from .linalg import GradedDims

LEVELS = (4, 8, 12, 16)


class StructureError(ValueError):
    """A theorem precondition failed (obstruction not zero, b1 != 0, ...)."""


@dataclass(frozen=True)
class StructureQuery:
    """A structure-set question: lift a bundle at bundle_level to cover level."""

    level: int
    betti: GradedDims
    bundle_level: int = 0
    obstruction_status: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"level must be one of {LEVELS}")
        if self.bundle_level >= self.level:
            raise ValueError("bundle_level must be below the target level")
        if self.bundle_level % 4 != 0 or self.bundle_level < 0:
            raise ValueError("bundle_level must be a multiple of 4")
        for name, status in self.obstruction_status.items():
            if status not in ("zero", "nonzero", "unknown"):
                raise ValueError(f"bad status {status!r} for class {name}")

    def required_classes(self) -> list[str]:
        return [f"p{i}" for i in range(1, self.level // 4 + 1)
                if 4 * i > self.bundle_level]

    def status_of(self, name: str) -> str:
        return self.obstruction_status.get(name, "unknown")


def obstruction_survey(q: StructureQuery) -> str:
    """'yes' iff every obstruction class up to the level is declared zero."""
    statuses = [q.status_of(name) for name in q.required_classes()]
    if any(s == "nonzero" for s in statuses):
        return "no"
    if all(s == "zero" for s in statuses):
        return "yes"
    return "unknown"


def structure_torsor(q: StructureQuery) -> GradedDims:
    """The structure set is an H^{k-1}(M; Q)-torsor; returns that slice."""
    survey = obstruction_survey(q)
    if survey != "yes":
        raise StructureError(
            f"structures at level {q.level} not established: obstruction survey is "
            f"{survey!r} (requires {', '.join(q.required_classes())} all zero)"
        )
    k = q.level
    return GradedDims({k - 1: q.betti.get(k - 1)})


def torsor_dim(q: StructureQuery) -> int:
    return structure_torsor(q).get(q.level - 1)


@dataclass(frozen=True)
class Summand:
    label: str
    bidegree: Optional[tuple[int, int]]
    dim: int


@dataclass(frozen=True)
class StructureReport:
    level: int
    exists: str
    torsor: GradedDims
    bundle_summands: tuple[Summand, ...]   # classes on the underlying bundle
    lifted_summands: tuple[Summand, ...]   # classes on the covered bundle
    kernel: tuple[Summand, ...]
    surjective: bool

    @property
    def torsor_dim(self) -> int:
        return self.torsor.get(self.level - 1)

    def bundle_total(self) -> int:
        return sum(s.dim for s in self.bundle_summands)

    def lifted_total(self) -> int:
        return sum(s.dim for s in self.lifted_summands)

    def kernel_total(self) -> int:
        return sum(s.dim for s in self.kernel)


def _require_zero(q: StructureQuery, names: list[str]):
    bad = [n for n in names if q.status_of(n) != "zero"]
    if bad:
        raise StructureError(
            f"level-{q.level} decomposition needs "
            f"{', '.join(names)} declared zero; "
            f"{', '.join(f'{n} is {q.status_of(n)}' for n in bad)}"
        )


def _require_simply_connected(q: StructureQuery):
    if q.betti.get(1):
        raise StructureError("decomposition requires a simply connected base (b_1 = 0)")


def fivebrane_decomposition(q: StructureQuery) -> StructureReport:
    """Level-8 report: degree-7 classes on the underlying bundle vs the cover.

    The underlying-bundle decomposition is (1, b4, b7) with labels
    (a7; a3 (x) H^4; H^7); the covered bundle sees (1, b7); the comparison map
    is onto with kernel exactly the a3 (x) H^4 summand (differences S.phi4).
    """
    if q.level != 8:
        raise ValueError("fivebrane_decomposition is the level-8 report")
    _require_zero(q, ["p1", "p2"])
    _require_simply_connected(q)
    b4, b7 = q.betti.get(4), q.betti.get(7)
    bundle = (
        Summand("a7", (0, 7), 1),
        Summand("a3(x)H^4", (4, 3), b4),
        Summand("H^7", (7, 0), b7),
    )
    lifted = (
        Summand("a7", (0, 7), 1),
        Summand("H^7", (7, 0), b7),
    )
    kernel = (Summand("S.phi4", (4, 3), b4),)
    return StructureReport(
        level=8, exists="yes", torsor=structure_torsor(q),
        bundle_summands=bundle, lifted_summands=lifted,
        kernel=kernel, surjective=True,
    )


def ninebrane_decomposition(q: StructureQuery) -> StructureReport:
    """Level-12 report: degree-11 classes, kernel mixing levels 4 and 8."""
    if q.level != 12:
        raise ValueError("ninebrane_decomposition is the level-12 report")
    _require_zero(q, ["p1", "p2", "p3"])
    _require_simply_connected(q)
    b4, b8, b11 = q.betti.get(4), q.betti.get(8), q.betti.get(11)
    bundle = (
        Summand("a11", (0, 11), 1),
        Summand("a7(x)H^4", (4, 7), b4),
        Summand("a3(x)H^8", (8, 3), b8),
        Summand("H^11", (11, 0), b11),
    )
    lifted = (
        Summand("a11", (0, 11), 1),
        Summand("H^11", (11, 0), b11),
    )
    kernel = (
        Summand("F.phi4", (4, 7), b4),
        Summand("S.psi8", (8, 3), b8),
    )
    return StructureReport(
        level=12, exists="yes", torsor=structure_torsor(q),
        bundle_summands=bundle, lifted_summands=lifted,
        kernel=kernel, surjective=True,
    )


def string_level_report(q: StructureQuery) -> StructureReport:
    """Level-4 report: degree-3 classes decompose as (a3; H^3) with no kernel."""
    if q.level != 4:
        raise ValueError("string_level_report is the level-4 report")
    _require_zero(q, q.required_classes())
    b3 = q.betti.get(3)
    bundle = (
        Summand("a3", (0, 3), 1),
        Summand("H^3", (3, 0), b3),
    )
    return StructureReport(
        level=4, exists="yes", torsor=structure_torsor(q),
        bundle_summands=bundle, lifted_summands=bundle,
        kernel=(), surjective=True,
    )


def decomposition(q: StructureQuery) -> StructureReport:
    """Dispatch to the decomposition for the query's level."""
    if q.level == 4:
        return string_level_report(q)
    if q.level == 8:
        return fivebrane_decomposition(q)
    if q.level == 12:
        return ninebrane_decomposition(q)
    raise StructureError(
        f"no closed-form decomposition tabulated at level {q.level}; "
        f"obstruction survey and torsor are still available"
    )


@dataclass(frozen=True)
class MappingSpaceFactor:
    loop_degree: int   # the i of K(H^(w-i)(X; Q), i)
    dim: int           # dim H^(w-i)(X; Q)


@dataclass(frozen=True)
class MappingSpaceDecomposition:
    level: int
    group_level: bool
    window: int
    factors: tuple[MappingSpaceFactor, ...]

    @property
    def pi0_dim(self) -> int:
        for f in self.factors:
            if f.loop_degree == 0:
                return f.dim
        return 0

    def text(self) -> str:
        if not self.factors:
            return "trivial"
        parts = []
        for f in self.factors:
            head = "K(Q," if f.dim == 1 else f"K(Q^{f.dim},"
            parts.append(f"{head}{f.loop_degree})")
        return " x ".join(parts)


def mapping_space_decompose(level: int, betti: GradedDims,
                            group_level: bool = False) -> MappingSpaceDecomposition:
    """EM decomposition of the space of lifts at a tower level.

    Classifying-space variant: prod_{i=0..k-1} K(H^(k-1-i)(X; Q), i).
    Group-level variant (gauge transformations): window k-2 instead of k-1.
    Zero-dimensional factors are omitted.
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    window = level - 2 if group_level else level - 1
    factors = []
    for i in range(window + 1):
        dim = betti.get(window - i)
        if dim:
            factors.append(MappingSpaceFactor(i, dim))
    return MappingSpaceDecomposition(level, group_level, window, tuple(factors))


def pi0_of_mapping_space(level: int, betti: GradedDims) -> int:
    """pi_0 of the lift space: dim H^(k-1)(X; Q), matching the torsor."""
    return mapping_space_decompose(level, betti).pi0_dim


def report_headline(report: StructureReport) -> str:
    k = report.level
    return (f"{level_name(k)} level {k} (obstruction {obstruction_display(k)}): "
            f"torsor dim {report.torsor_dim}")
