"""Rational homotopy catalog for orthogonal-type groups and their connected covers.

The rational type of a group is recorded as an `EMProduct`: a finite multiset
of degrees, one per K(Q, m) factor.  Definite-rank tables:

    Spin(2n+1) ~ S^3 x S^7 x ... x S^(4n-1)
    Spin(2n)   ~ S^3 x S^7 x ... x S^(4n-5) x S^(2n-1)

SO(n) has the same rational type as Spin(n).  The stable group contributes
degrees 3, 7, 11, ... and taking classifying spaces shifts every degree up by
one.  A cover level k drops all factors of degree < k; the named families are
sugar for fixed levels (string=4, fivebrane=8, twospin=8, ninebrane=12).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .gca import FreeGCA, Generator
from .linalg import GradedDims


class CatalogError(ValueError):
    """Unknown or unsupported group specification."""


FAMILY_LEVELS = {"string": 4, "fivebrane": 8, "twospin": 8, "ninebrane": 12}
STANDARD_LEVELS = (4, 8, 12, 16)

# display-only fractional normalizations of the tower obstructions
OBSTRUCTION_FRACTIONS: dict[int, Fraction] = {
    4: Fraction(1, 2),
    8: Fraction(1, 6),
    12: Fraction(1, 240),
}

LEVEL_NAMES = {4: "string", 8: "fivebrane", 12: "ninebrane"}

# Degrees of the non-torsion homotopy of E8 known to this catalog.  The next
# one sits in degree 23; queries beyond that window are refused rather than
# silently wrong.
E8_DEGREES = (3, 15)
E8_MAX_DEGREE = 22


@dataclass(frozen=True)
class EMProduct:
    """Finite multiset of Eilenberg-MacLane degrees: factors[m] copies of K(Q, m)."""

    factors: Mapping[int, int]

    def __post_init__(self):
        clean = {}
        for deg, mult in self.factors.items():
            if deg < 1:
                raise ValueError(f"EM degree must be >= 1, got {deg}")
            if mult < 0:
                raise ValueError(f"negative multiplicity in degree {deg}")
            if mult > 0:
                clean[int(deg)] = int(mult)
        object.__setattr__(self, "factors", clean)

    @staticmethod
    def of(*degrees: int) -> "EMProduct":
        out: dict[int, int] = {}
        for d in degrees:
            out[d] = out.get(d, 0) + 1
        return EMProduct(out)

    def mult(self, degree: int) -> int:
        return self.factors.get(degree, 0)

    def degrees(self) -> list[int]:
        return sorted(self.factors)

    def is_empty(self) -> bool:
        return not self.factors

    def total(self) -> int:
        return sum(self.factors.values())

    def min_degree(self) -> Optional[int]:
        return min(self.factors) if self.factors else None

    def connectivity(self) -> Optional[int]:
        """Largest c with all homotopy vanishing through c; None if empty type."""
        m = self.min_degree()
        return None if m is None else m - 1

    def shift(self, by: int = 1) -> "EMProduct":
        return EMProduct({d + by: m for d, m in self.factors.items()})

    def filter_min(self, k: int) -> "EMProduct":
        return EMProduct({d: m for d, m in self.factors.items() if d >= k})

    def truncate(self, max_degree: int) -> "EMProduct":
        return EMProduct({d: m for d, m in self.factors.items() if d <= max_degree})

    def union(self, other: "EMProduct") -> "EMProduct":
        out = dict(self.factors)
        for d, m in other.factors.items():
            out[d] = out.get(d, 0) + m
        return EMProduct(out)

    def difference(self, other: "EMProduct") -> "EMProduct":
        out = dict(self.factors)
        for d, m in other.factors.items():
            out[d] = out.get(d, 0) - m
            if out[d] < 0:
                raise ValueError(f"difference not a submultiset in degree {d}")
        return EMProduct(out)

    def text(self) -> str:
        if not self.factors:
            return "trivial"
        parts = []
        for d in sorted(self.factors):
            m = self.factors[d]
            parts.append(f"K(Q,{d})" if m == 1 else f"K(Q,{d})^{m}")
        return " x ".join(parts)

    def __eq__(self, other) -> bool:
        if isinstance(other, EMProduct):
            return dict(self.factors) == dict(other.factors)
        if isinstance(other, (set, frozenset, list, tuple)):
            return self == EMProduct.of(*other)
        if isinstance(other, dict):
            return dict(self.factors) == {d: m for d, m in other.items() if m}
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.factors.items())))


@dataclass(frozen=True)
class GroupSpec:
    """A group (or classifying-space) query: family, optional rank/signature, cover level."""

    family: str
    rank: Optional[int] = None
    signature: Optional[tuple[int, int]] = None
    cover: int = 0
    classifying: bool = False

    def __post_init__(self):
        fam = self.family
        if fam not in ("so", "spin", "spinpq", "stableO", "string", "fivebrane",
                       "twospin", "ninebrane", "e8"):
            raise CatalogError(f"unknown family {fam!r}")
        if fam in ("so", "spin") and (self.rank is None or self.rank < 2):
            raise CatalogError(f"{fam} requires a rank n >= 2")
        if fam == "spinpq":
            if self.signature is None:
                raise CatalogError("spinpq requires a signature p,q")
            p, q = self.signature
            if p < 0 or q < 0:
                raise CatalogError("signature entries must be >= 0")
        if fam in ("stableO", "e8") and self.rank is not None:
            raise CatalogError(f"{fam} takes no rank")
        if fam in ("string", "fivebrane", "twospin", "ninebrane") and self.rank is not None \
                and self.rank < 2:
            raise CatalogError(f"{fam} rank must be >= 2")
        if self.cover < 0:
            raise CatalogError("cover level must be >= 0")

    @property
    def effective_cover(self) -> int:
        return max(self.cover, FAMILY_LEVELS.get(self.family, 0))

    def group(self) -> "GroupSpec":
        if not self.classifying:
            return self
        return GroupSpec(self.family, self.rank, self.signature, self.cover, False)


_SPEC_RE = re.compile(
    r"^(?P<b>b)?(?P<family>[a-zA-Z0-9]+)"
    r"(?::(?P<args>\d+(?:,\d+)?))?"
    r"(?:<(?P<cover>\d+)>)?$"
)

_FAMILY_ALIASES = {
    "so": "so", "spin": "spin", "spinpq": "spinpq", "stableo": "stableO",
    "o": "stableO", "string": "string", "fivebrane": "fivebrane",
    "twospin": "twospin", "2spin": "twospin", "ninebrane": "ninebrane", "e8": "e8",
}


def parse_groupspec(text: str) -> GroupSpec:
    """Parse strings like spin:9<12>, so:6, spinpq:7,9<8>, stableO<8>, bstring:7."""
    m = _SPEC_RE.match(text.strip())
    if not m:
        raise CatalogError(f"cannot parse group spec {text!r}")
    fam_raw = m.group("family").lower()
    classifying = m.group("b") is not None
    if not classifying and fam_raw not in _FAMILY_ALIASES \
            and fam_raw.startswith("b") and fam_raw[1:] in _FAMILY_ALIASES:
        # uppercase-B spellings arrive here with the prefix inside the family token
        classifying = True
        fam_raw = fam_raw[1:]
    if fam_raw not in _FAMILY_ALIASES:
        raise CatalogError(f"unknown family in group spec {text!r}")
    family = _FAMILY_ALIASES[fam_raw]
    rank = None
    signature = None
    args = m.group("args")
    if args:
        nums = [int(x) for x in args.split(",")]
        if family == "spinpq":
            if len(nums) != 2:
                raise CatalogError("spinpq requires two rank arguments p,q")
            signature = (nums[0], nums[1])
        elif len(nums) == 1:
            rank = nums[0]
        else:
            raise CatalogError(f"{family} takes a single rank")
    cover = int(m.group("cover") or 0)
    return GroupSpec(family, rank, signature, cover, classifying)


def format_groupspec(g: GroupSpec) -> str:
    out = "b" if g.classifying else ""
    out += g.family
    if g.signature is not None:
        out += f":{g.signature[0]},{g.signature[1]}"
    elif g.rank is not None:
        out += f":{g.rank}"
    if g.cover:
        out += f"<{g.cover}>"
    return out


def spin_degrees(n: int) -> list[int]:
    """Degrees of the odd-sphere factors of Spin(n) (and SO(n)) rationally."""
    if n < 2:
        return []
    if n % 2 == 1:
        m = (n - 1) // 2
        return [4 * i - 1 for i in range(1, m + 1)]
    m = n // 2
    return sorted([4 * i - 1 for i in range(1, m)] + [n - 1])


def stable_degrees(max_degree: int) -> list[int]:
    return list(range(3, max_degree + 1, 4))


def _base_degrees(g: GroupSpec, max_degree: int) -> list[int]:
    fam = g.family
    if fam in ("so", "spin"):
        return spin_degrees(g.rank)
    if fam in ("string", "fivebrane", "twospin", "ninebrane"):
        if g.rank is not None:
            return spin_degrees(g.rank)
        return stable_degrees(max_degree)
    if fam == "stableO":
        return stable_degrees(max_degree)
    if fam == "spinpq":
        p, q = g.signature
        return sorted(spin_degrees(p) + spin_degrees(q))
    if fam == "e8":
        if max_degree > E8_MAX_DEGREE:
            raise CatalogError(
                f"e8 catalog window ends at degree {E8_MAX_DEGREE} "
                f"(next non-torsion degree 23 is not tabulated)"
            )
        return list(E8_DEGREES)
    raise CatalogError(f"unsupported family {fam!r}")


def rational_type(g: GroupSpec, max_degree: int = 24) -> EMProduct:
    """EM-product rational type of g through max_degree (cover level applied)."""
    if max_degree < 1:
        raise CatalogError("max_degree must be >= 1")
    shift = 1 if g.classifying else 0
    degrees = _base_degrees(g.group(), max_degree - shift)
    em = EMProduct.of(*degrees).filter_min(g.effective_cover)
    if shift:
        em = em.shift(1)
    return em.truncate(max_degree)


def classifying_space(e: EMProduct) -> EMProduct:
    """Classifying functor on rational types: every degree moves up by one."""
    return e.shift(1)


def cover(e: EMProduct, k: int) -> EMProduct:
    """Connected-cover filter: drop all factors of degree < k."""
    if k < 0:
        raise ValueError("cover level must be >= 0")
    return e.filter_min(k)


def triviality_threshold(n: int) -> int:
    """Smallest cover level that kills Spin(n) rationally.

    4*floor((n-1)/2) for n >= 3.  At n = 2 the closed form degenerates: the
    only rational homotopy of Spin(2) ~ S^1 sits in degree 1, so the true
    threshold is 2.
    """
    if n < 2:
        return 0
    if n == 2:
        return 2
    return 4 * ((n - 1) // 2)


def is_rationally_trivial(g: GroupSpec) -> bool:
    """Whether Spin(n)<k> (or SO(n)<k>) is rationally a point."""
    spec = g.group()
    if spec.family in ("stableO",) or (spec.family in FAMILY_LEVELS and spec.rank is None):
        raise CatalogError("stable groups are never rationally trivial")
    if spec.family == "e8":
        raise CatalogError("triviality is not decidable inside the e8 catalog window")
    if spec.family == "spinpq":
        p, q = spec.signature
        k = spec.effective_cover
        return k >= triviality_threshold(p) and k >= triviality_threshold(q)
    return spec.effective_cover >= triviality_threshold(spec.rank)


@dataclass(frozen=True)
class IndefiniteSplit:
    """Factorwise rationalization of an indefinite cover Spin(p,q)<k>."""

    p: int
    q: int
    cover: int
    factor_p: EMProduct
    factor_q: EMProduct
    p_trivial: bool
    q_trivial: bool
    product_form_stated: bool  # k below the factorwise threshold of min(p, q)

    @property
    def trivial(self) -> bool:
        return self.p_trivial and self.q_trivial


def split_indefinite(p: int, q: int, k: int, max_degree: int = 24) -> IndefiniteSplit:
    """Split Spin(p,q)<k> rationally into its Spin(p)<k> and Spin(q)<k> factors."""
    if p < 0 or q < 0 or k < 0:
        raise CatalogError("p, q, k must be >= 0")
    fp = EMProduct.of(*spin_degrees(p)).filter_min(k).truncate(max_degree)
    fq = EMProduct.of(*spin_degrees(q)).filter_min(k).truncate(max_degree)
    return IndefiniteSplit(
        p=p, q=q, cover=k,
        factor_p=fp, factor_q=fq,
        p_trivial=k >= triviality_threshold(p),
        q_trivial=k >= triviality_threshold(q),
        product_form_stated=k < triviality_threshold(min(p, q)),
    )


def bcohomology_generators(g: GroupSpec, max_degree: int = 24) -> tuple[Generator, ...]:
    """Free generators of the rational cohomology of a classifying-space query.

    Uncovered queries use the Pontrjagin/Euler names p1, p2, ..., e; covered
    queries use the tower-model names x8, x12, ... (Euler survivor keeps "e").
    Rank bounds the Pontrjagin range; the stable families list every p_i whose
    degree fits under max_degree.
    """
    if not g.classifying:
        raise CatalogError(f"{format_groupspec(g)} is not a classifying-space query")
    grp = g.group()
    fam = grp.family
    raw: list[tuple[str, int, bool]] = []  # (pontrjagin/euler tag, degree, is_euler)
    if fam in ("so", "spin") or (fam in ("string", "fivebrane", "twospin", "ninebrane")
                                 and grp.rank is not None):
        n = grp.rank
        if n % 2 == 1:
            top = (n - 1) // 2
            raw = [(f"p{i}", 4 * i, False) for i in range(1, top + 1)]
        else:
            half = n // 2
            raw = [(f"p{i}", 4 * i, False) for i in range(1, half)]
            raw.append(("e", n, True))
    elif fam in ("stableO", "string", "fivebrane", "twospin", "ninebrane"):
        raw = [(f"p{i}", 4 * i, False) for i in range(1, max_degree // 4 + 1)]
    elif fam == "e8":
        if max_degree > E8_MAX_DEGREE + 1:
            raise CatalogError(f"e8 catalog window ends at degree {E8_MAX_DEGREE}")
        raw = [(f"x{d + 1}", d + 1, False) for d in E8_DEGREES]
    elif fam == "spinpq":
        raise CatalogError("use split_indefinite for indefinite-signature queries")
    k = g.effective_cover
    out = []
    for name, degree, is_euler in sorted(raw, key=lambda t: (t[1], t[0])):
        if degree > max_degree or degree - 1 < k:
            continue
        if k > 0 and not is_euler and fam != "e8":
            name = f"x{degree}"
        out.append(Generator(name, degree))
    return tuple(out)


def stable_tower_fiber(level: int, max_degree: int = 32) -> EMProduct:
    """Rational fiber of the stable tower stage at classifying-space level `level`.

    The stage BO<level> -> BO<level-4> kills exactly the group degrees in
    [level-8, level-4), computed here as a difference of catalog types.
    """
    if level % 4 != 0 or level < 8:
        raise CatalogError("tower stages sit at classifying-space levels 8, 12, 16, ...")
    below = rational_type(GroupSpec("stableO", cover=level - 8), max_degree)
    above = rational_type(GroupSpec("stableO", cover=level - 4), max_degree)
    return below.difference(above)


def obstruction_display(level: int) -> str:
    """Display form of the tower obstruction at a structure level, e.g. (1/6)p2."""
    if level % 4 != 0 or level < 4:
        raise CatalogError("structure levels are 4, 8, 12, 16, ...")
    i = level // 4
    frac = OBSTRUCTION_FRACTIONS.get(level)
    if frac is None:
        return f"p{i}"
    return f"({frac.numerator}/{frac.denominator})p{i}"


def level_name(level: int) -> str:
    return LEVEL_NAMES.get(level, f"level{level}")


def betti_of_bspace(g: GroupSpec, max_degree: int = 24) -> GradedDims:
    """Betti numbers of a classifying-space query via its free cohomology algebra."""
    from .gca import poincare_dims

    gens = bcohomology_generators(g, max_degree)
    return poincare_dims(FreeGCA(gens), max_degree)


def catalog_listing() -> str:
    return (
        "supported group specs:\n"
        "  so:N, spin:N            definite rank N >= 2 (e.g. spin:9, so:6)\n"
        "  spinpq:P,Q              indefinite signature (e.g. spinpq:7,9)\n"
        "  stableO                 stable orthogonal group\n"
        "  string, fivebrane,      named covers, optionally with rank\n"
        "  twospin, ninebrane      (string:7, fivebrane:9, ...)\n"
        "  e8                      exceptional catalog entry (window <= 22)\n"
        "  <K> suffix for covers   e.g. spin:9<12>, stableO<8>\n"
        "  b prefix for B-spaces   e.g. bso:5, bspin:8, bstring:7, bstableO"
    )
