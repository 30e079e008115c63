"""Free graded-commutative algebras over Q.

Generators carry a name and a positive degree; odd-degree generators square to
zero and anticommute (Koszul sign convention).  Monomials are exponent vectors
in the fixed generator order, which is also the normal form for products.

Per-degree dimensions are available through two independent routes: explicit
monomial enumeration (`basis_in_degree`) and coefficient extraction from the
Poincare series prod (1-t^d)^-1 * prod (1+t^d) (`poincare_dims`); the test
suite holds the two against each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import GradedDims, ZERO, rat, format_rat


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError(f"generator {self.name}: degree must be >= 1")

    @property
    def is_odd(self) -> bool:
        return self.degree % 2 == 1


Monomial = tuple  # exponent vector indexed by generator position


@dataclass(frozen=True)
class FreeGCA:
    """Free graded-commutative algebra on an ordered generator list."""

    generators: tuple[Generator, ...]

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names: {names}")

    @staticmethod
    def on(pairs: Iterable[tuple[str, int]]) -> "FreeGCA":
        return FreeGCA(tuple(Generator(n, d) for n, d in pairs))

    def index_of(self, name: str) -> int:
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise KeyError(f"no generator named {name!r}")

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(e * g.degree for e, g in zip(mono, self.generators))

    def monomial_valid(self, mono: Monomial) -> bool:
        return all(e >= 0 and (e <= 1 or not g.is_odd) for e, g in zip(mono, self.generators))

    def unit_monomial(self) -> Monomial:
        return (0,) * len(self.generators)

    def gen(self, name: str) -> "Polynomial":
        mono = [0] * len(self.generators)
        mono[self.index_of(name)] = 1
        return Polynomial(self, {tuple(mono): Fraction(1)})

    def one(self) -> "Polynomial":
        return Polynomial(self, {self.unit_monomial(): Fraction(1)})

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def monomial_name(self, mono: Monomial) -> str:
        parts = []
        for e, g in zip(mono, self.generators):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"


def multiply_monomials(alg: FreeGCA, a: Monomial, b: Monomial) -> tuple[int, Monomial | None]:
    """Sign and normal form of a*b, or (0, None) when an odd generator squares."""
    swaps = 0
    odd_in_b_before = 0  # odd-degree letters of b with generator index < current
    # moving each odd letter of b left past the odd letters of a with larger index
    odd_positions_a = [i for i, e in enumerate(a) if e and alg.generators[i].is_odd]
    for j, e in enumerate(b):
        if not e or not alg.generators[j].is_odd:
            continue
        swaps += sum(1 for i in odd_positions_a if i > j)
    out = tuple(x + y for x, y in zip(a, b))
    for i, e in enumerate(out):
        if e > 1 and alg.generators[i].is_odd:
            return 0, None
    return (-1) ** swaps, out


@dataclass(frozen=True)
class Polynomial:
    """Finite Q-linear combination of monomials; zero coefficients never stored."""

    alg: FreeGCA
    terms: Mapping[Monomial, Fraction]

    def __post_init__(self):
        clean = {m: rat(c) for m, c in self.terms.items() if c != 0}
        for m in clean:
            if not self.alg.monomial_valid(m):
                raise ValueError(f"invalid monomial {m}")
        object.__setattr__(self, "terms", clean)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int | None:
        """Common degree of all terms; None for 0, error if inhomogeneous."""
        degs = {self.alg.monomial_degree(m) for m in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous polynomial, degrees {sorted(degs)}")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return len({self.alg.monomial_degree(m) for m in self.terms}) <= 1

    def scale(self, c) -> "Polynomial":
        c = rat(c)
        return Polynomial(self.alg, {m: c * v for m, v in self.terms.items()})

    def __add__(self, other: "Polynomial") -> "Polynomial":
        _check_same_algebra(self, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return Polynomial(self.alg, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return multiply(self, other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            name = self.alg.monomial_name(m)
            if c == 1 and name != "1":
                parts.append(name)
            elif name == "1":
                parts.append(format_rat(c))
            else:
                parts.append(f"{format_rat(c)}*{name}")
        return " + ".join(parts)


def _check_same_algebra(a: Polynomial, b: Polynomial):
    if a.alg is not b.alg and a.alg != b.alg:
        raise ValueError("polynomials over different generator sets")


def multiply(a: Polynomial, b: Polynomial) -> Polynomial:
    """Bilinear product with Koszul signs; squared odd generators drop out."""
    _check_same_algebra(a, b)
    out: dict[Monomial, Fraction] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sign, m = multiply_monomials(a.alg, ma, mb)
            if m is None:
                continue
            out[m] = out.get(m, ZERO) + sign * ca * cb
    return Polynomial(a.alg, out)


def basis_in_degree(alg: FreeGCA, degree: int) -> list[Monomial]:
    """All monomials of the given total degree, ordered lexicographically."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    n = len(alg.generators)
    results: list[Monomial] = []

    def rec(i: int, remaining: int, prefix: list[int]):
        if i == n:
            if remaining == 0:
                results.append(tuple(prefix))
            return
        g = alg.generators[i]
        top = remaining // g.degree
        if g.is_odd:
            top = min(top, 1)
        for e in range(top + 1):
            prefix.append(e)
            rec(i + 1, remaining - e * g.degree, prefix)
            prefix.pop()

    rec(0, degree, [])
    results.sort()
    return results


def poincare_dims(alg: FreeGCA, max_degree: int) -> GradedDims:
    """Dimensions through max_degree from the Poincare series product formula."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    coeffs = [0] * (max_degree + 1)
    coeffs[0] = 1
    for g in alg.generators:
        d = g.degree
        if g.is_odd:
            # multiply by (1 + t^d)
            for k in range(max_degree, d - 1, -1):
                coeffs[k] += coeffs[k - d]
        else:
            # multiply by 1/(1 - t^d) = 1 + t^d + t^2d + ...
            for k in range(d, max_degree + 1):
                coeffs[k] += coeffs[k - d]
    return GradedDims({d: c for d, c in enumerate(coeffs) if c})


def generator_set_dims(gens: Sequence[Generator]) -> dict[int, int]:
    out: dict[int, int] = {}
    for g in gens:
        out[g.degree] = out.get(g.degree, 0) + 1
    return out
