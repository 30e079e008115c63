"""First-quadrant rational Serre spectral sequence for odd-sphere fibers.

The fiber is rationally a product of odd spheres, so the whole sequence is
driven by transgressions: a fiber generator a_m of odd degree m supports one
differential d_{m+1}(a_m) = (its declared target class in H^{m+1} of the base)
and the Leibniz rule propagates it to products.  Internally the engine builds
the Koszul-style filtered complex H^*(M) tensor Lambda(a_m) with D(a_m) equal
to the transgression, and computes the pages of the associated spectral
sequence by exact linear algebra:

    Z_r(s,t) = { x in F^s : D x in F^(s+r) }
    E_r(s,t) = Z_r(s,t) / ( Z_{r-1}(s+1,t-1) + D Z_{r-1}(s-r+1,t+r-2) )

Every page, rank, and representative is exact over Q.  Differentials at pages
that are not of the form m+1 vanish automatically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .gca import FreeGCA, Generator, basis_in_degree
from .linalg import GradedDims, QMatrix, RowSpan, kernel_basis, rat

ZERO = Fraction(0)


class PresentationError(ValueError):
    """Inconsistent finitely presented cohomology algebra."""


@dataclass(frozen=True)
class BasePresentation:
    """H^*(M; Q) as named per-degree bases, a multiplication table, and classes.

    Degrees without a listed basis are zero.  Products whose total degree
    exceeds max_degree are treated as zero, which is exact whenever the table
    covers all nonzero degrees of the algebra.  Distinguished classes (e.g.
    p1, p2, p3) are coordinate vectors in the basis of their degree; an empty
    vector declares the class to be zero.
    """

    max_degree: int
    basis: Mapping[int, tuple[str, ...]]
    products: Mapping[tuple[str, str], Mapping[str, Fraction]]
    classes: Mapping[str, Mapping[str, Fraction]]

    def __post_init__(self):
        if self.max_degree < 0:
            raise PresentationError("max_degree must be >= 0")
        basis = {int(d): tuple(names) for d, names in self.basis.items() if names}
        if 0 not in basis or len(basis[0]) != 1:
            raise PresentationError("degree-0 basis must be exactly the unit")
        degree_of: dict[str, int] = {}
        for d, names in basis.items():
            if d < 0 or d > self.max_degree:
                raise PresentationError(f"basis degree {d} outside [0, {self.max_degree}]")
            for name in names:
                if name in degree_of:
                    raise PresentationError(f"duplicate basis name {name!r}")
                degree_of[name] = d
        products = {}
        for (a, b), vec in self.products.items():
            if a not in degree_of or b not in degree_of:
                missing = a if a not in degree_of else b
                raise PresentationError(f"product ({a},{b}): unknown element {missing!r}")
            target = degree_of[a] + degree_of[b]
            clean = {}
            for name, coeff in vec.items():
                coeff = rat(coeff)
                if coeff == 0:
                    continue
                if name not in degree_of:
                    raise PresentationError(f"product ({a},{b}): unknown element {name!r}")
                if degree_of[name] != target:
                    raise PresentationError(
                        f"product ({a},{b}): {name!r} has degree {degree_of[name]}, "
                        f"expected {target}"
                    )
                clean[name] = coeff
            if target > self.max_degree and clean:
                raise PresentationError(
                    f"product ({a},{b}) lands beyond max_degree {self.max_degree}"
                )
            products[(a, b)] = clean
        classes = {}
        for cname, vec in self.classes.items():
            clean = {}
            degs = set()
            for name, coeff in vec.items():
                coeff = rat(coeff)
                if coeff == 0:
                    continue
                if name not in degree_of:
                    raise PresentationError(f"class {cname}: unknown element {name!r}")
                degs.add(degree_of[name])
                clean[name] = coeff
            if len(degs) > 1:
                raise PresentationError(f"class {cname}: mixed degrees {sorted(degs)}")
            if cname.startswith("p") and cname[1:].isdigit() and clean:
                expected = 4 * int(cname[1:])
                if degs and degs != {expected}:
                    raise PresentationError(
                        f"class {cname} must live in degree {expected}, got {degs.pop()}"
                    )
            classes[cname] = clean
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "products", products)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "_degree_of", degree_of)

    @property
    def unit(self) -> str:
        return self.basis[0][0]

    def degree_of(self, name: str) -> int:
        return self._degree_of[name]

    def basis_at(self, degree: int) -> tuple[str, ...]:
        return self.basis.get(degree, ())

    def betti(self) -> GradedDims:
        return GradedDims({d: len(names) for d, names in self.basis.items()})

    def simply_connected(self) -> bool:
        return not self.basis_at(1)

    def class_vector(self, name: str) -> dict[str, Fraction]:
        return dict(self.classes.get(name, {}))

    def class_is_zero(self, name: str) -> bool:
        return not self.classes.get(name)

    def product_vector(self, a: str, b: str) -> dict[str, Fraction]:
        """a*b expanded in the basis; zero beyond max_degree or when untabulated."""
        da, db = self.degree_of(a), self.degree_of(b)
        if da == 0:
            return {b: Fraction(1)}
        if db == 0:
            return {a: Fraction(1)}
        if da + db > self.max_degree:
            return {}
        if (a, b) in self.products:
            return dict(self.products[(a, b)])
        if (b, a) in self.products:
            sign = -1 if (da % 2) and (db % 2) else 1
            return {n: sign * c for n, c in self.products[(b, a)].items()}
        return {}

    def multiply_vectors(self, left: Mapping[str, Fraction],
                         right: Mapping[str, Fraction]) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for a, ca in left.items():
            for b, cb in right.items():
                for name, coeff in self.product_vector(a, b).items():
                    out[name] = out.get(name, ZERO) + ca * cb * coeff
        return {n: c for n, c in out.items() if c != 0}

    def validate_algebra(self, full: bool = False, sample_limit: int = 64) -> None:
        """Check graded commutativity and (sampled or full) associativity.

        Raises PresentationError naming the offending pair or triple.
        """
        names = sorted(self._degree_of, key=lambda n: (self.degree_of(n), n))
        for (a, b) in self.products:
            if (b, a) in self.products and a != b:
                da, db = self.degree_of(a), self.degree_of(b)
                sign = -1 if (da % 2) and (db % 2) else 1
                lhs = self.products[(a, b)]
                rhs = {n: sign * c for n, c in self.products[(b, a)].items()}
                if lhs != {n: c for n, c in rhs.items() if c != 0}:
                    raise PresentationError(
                        f"multiplication table not graded-commutative on ({a},{b})"
                    )
        for a in names:
            da = self.degree_of(a)
            if da % 2 == 1 and self.product_vector(a, a):
                raise PresentationError(f"odd element {a!r} has nonzero square")
        triples = [
            (a, b, c)
            for a in names for b in names for c in names
            if self.degree_of(a) + self.degree_of(b) + self.degree_of(c) <= self.max_degree
            and self.degree_of(a) * self.degree_of(b) * self.degree_of(c) > 0
        ]
        if not full and len(triples) > sample_limit:
            step = len(triples) // sample_limit
            triples = triples[::step][:sample_limit]
        for (a, b, c) in triples:
            left = self.multiply_vectors(self.product_vector(a, b), {c: Fraction(1)})
            right = self.multiply_vectors({a: Fraction(1)}, self.product_vector(b, c))
            if left != right:
                raise PresentationError(
                    f"multiplication table not associative on ({a},{b},{c})"
                )

    @staticmethod
    def from_betti(betti: GradedDims, classes: Optional[Mapping[str, Mapping]] = None,
                   max_degree: Optional[int] = None) -> "BasePresentation":
        """Presentation with anonymous basis names and all products zero.

        Exact for any space with the given Betti numbers as long as no nonzero
        transgression needs the ring structure.
        """
        if betti.get(0) != 1:
            raise PresentationError("Betti profile must be connected: b_0 = 1")
        basis = {0: ("1",)}
        for d in betti.degrees():
            if d == 0:
                continue
            basis[d] = tuple(f"h{d}_{i}" for i in range(betti.get(d)))
        return BasePresentation(
            max_degree=max_degree if max_degree is not None else betti.top(),
            basis=basis,
            products={},
            classes=classes or {},
        )


@dataclass(frozen=True)
class FiberGenerator:
    name: str
    degree: int
    target: Optional[str]  # distinguished class name; None or a zero class = no transgression

    def __post_init__(self):
        if self.degree % 2 == 0 or self.degree < 1:
            raise ValueError(f"fiber generator {self.name} must have odd degree")


@dataclass(frozen=True)
class FiberSpec:
    generators: tuple[FiberGenerator, ...]

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("duplicate fiber generator names")

    def degrees(self) -> list[int]:
        return [g.degree for g in self.generators]


def standard_fiber(names: Sequence[str]) -> FiberSpec:
    """Fiber generators a3, a7, a11, ... transgressing to p1, p2, p3, ..."""
    gens = []
    for name in names:
        if not (name.startswith("a") and name[1:].isdigit()):
            raise ValueError(f"expected a<degree> fiber name, got {name!r}")
        m = int(name[1:])
        if (m + 1) % 4 != 0:
            raise ValueError(f"fiber degree {m} is not of the form 4i-1")
        gens.append(FiberGenerator(name, m, f"p{(m + 1) // 4}"))
    return FiberSpec(tuple(gens))


@dataclass(frozen=True)
class Summand:
    s: int
    t: int
    dim: int
    labels: tuple[str, ...]

    @property
    def bidegree(self) -> tuple[int, int]:
        return (self.s, self.t)


@dataclass(frozen=True)
class TotalCohomology:
    degree: int
    dim: int
    summands: tuple[Summand, ...]

    def dims_by_bidegree(self) -> dict[tuple[int, int], int]:
        return {sm.bidegree: sm.dim for sm in self.summands}


class _KoszulComplex:
    """Monomial coordinates and the transgressive differential, per total degree."""

    def __init__(self, base: BasePresentation, fiber: FiberSpec, bound: int):
        self.base = base
        self.fiber = fiber
        self.bound = bound
        self.fiber_alg = FreeGCA(tuple(Generator(g.name, g.degree) for g in fiber.generators))
        self.targets = [
            base.class_vector(g.target) if g.target else {} for g in fiber.generators
        ]
        for g, vec in zip(fiber.generators, self.targets):
            for name in vec:
                if base.degree_of(name) != g.degree + 1:
                    raise PresentationError(
                        f"transgression target of {g.name} must sit in degree {g.degree + 1}"
                    )
        # coords[n]: ordered list of (s, base name, fiber monomial)
        self.coords: dict[int, list[tuple[int, str, tuple]]] = {}
        self.index: dict[int, dict[tuple[int, str, tuple], int]] = {}
        self.fiber_monos: dict[int, list[tuple]] = {}
        for t in range(bound + 2):
            self.fiber_monos[t] = basis_in_degree(self.fiber_alg, t)
        for n in range(bound + 2):
            coords = []
            for s in range(n + 1):
                t = n - s
                names = base.basis_at(s)
                if not names or t > bound + 1:
                    continue
                for mono in self.fiber_monos.get(t, []):
                    for name in names:
                        coords.append((s, name, mono))
            coords.sort(key=lambda c: (c[0], c[2], c[1]))
            self.coords[n] = coords
            self.index[n] = {c: i for i, c in enumerate(coords)}
        # columns[n][i]: rows of D restricted to column i, as (target index, coeff)
        self.columns: dict[int, list[list[tuple[int, Fraction]]]] = {}
        for n in range(bound + 1):
            cols = []
            for (s, bname, mono) in self.coords[n]:
                entries: dict[int, Fraction] = {}
                before = 0
                for j, e in enumerate(mono):
                    if e:
                        tau = self.targets[j]
                        if tau:
                            sign = -1 if (s + before) % 2 else 1
                            sub = list(mono)
                            sub[j] = 0
                            sub = tuple(sub)
                            for cname, gamma in tau.items():
                                for rname, pi in base.product_vector(bname, cname).items():
                                    key = (s + self.fiber.generators[j].degree + 1, rname, sub)
                                    idx = self.index[n + 1].get(key)
                                    if idx is None:
                                        continue
                                    entries[idx] = entries.get(idx, ZERO) + sign * gamma * pi
                        before += 1
                cols.append(sorted((i, c) for i, c in entries.items() if c != 0))
            self.columns[n] = cols

    def label(self, coord: tuple[int, str, tuple]) -> str:
        s, bname, mono = coord
        mono_name = self.fiber_alg.monomial_name(mono)
        if mono_name == "1":
            return bname
        if s == 0 and bname == self.base.unit:
            return mono_name
        return f"{mono_name}*{bname}"

    def apply_d(self, n: int, vector: Sequence[Fraction]) -> list[Fraction]:
        out = [ZERO] * len(self.coords.get(n + 1, []))
        for i, x in enumerate(vector):
            if x != 0:
                for j, c in self.columns[n][i]:
                    out[j] += x * c
        return out

    def filtration_indices(self, n: int, s_min: int) -> list[int]:
        return [i for i, (s, _, _) in enumerate(self.coords[n]) if s >= s_min]


@dataclass(frozen=True)
class SpectralSequence:
    """Immutable snapshot of pages, ranks, and labeled E-infinity data."""

    base: BasePresentation
    fiber: FiberSpec
    bound: int
    e2_labels: Mapping[tuple[int, int], tuple[str, ...]]
    pages: Mapping[int, Mapping[tuple[int, int], int]]
    differential_ranks: Mapping[tuple[int, int, int], int]
    einf: Mapping[tuple[int, int], int]
    einf_labels: Mapping[tuple[int, int], tuple[str, ...]]
    completed: bool
    _complex: _KoszulComplex = field(repr=False, compare=False)

    def page_dims(self, r: int) -> dict[tuple[int, int], int]:
        if r in self.pages:
            return dict(self.pages[r])
        top = max(self.pages)
        if r > top and self.completed:
            return dict(self.pages[top])
        raise KeyError(f"page {r} not computed")

    def e2_dim(self, s: int, t: int) -> int:
        return len(self.e2_labels.get((s, t), ()))

    def einf_dim(self, s: int, t: int) -> int:
        return self.einf.get((s, t), 0)


def e2_page(base: BasePresentation, fiber: FiberSpec, bound: int,
            verify_algebra: bool = False) -> SpectralSequence:
    """E2 = H^s(M) tensor (Lambda fiber)^t with explicit monomial bases."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    base.validate_algebra(full=verify_algebra)
    cx = _KoszulComplex(base, fiber, bound)
    labels: dict[tuple[int, int], tuple[str, ...]] = {}
    dims: dict[tuple[int, int], int] = {}
    for n in range(bound + 1):
        for coord in cx.coords[n]:
            s, _, mono = coord
            t = n - s
            labels.setdefault((s, t), ())
            labels[(s, t)] = labels[(s, t)] + (cx.label(coord),)
    labels = {k: v for k, v in labels.items() if v}
    dims = {k: len(v) for k, v in labels.items()}
    return SpectralSequence(
        base=base, fiber=fiber, bound=bound,
        e2_labels=labels, pages={2: dims},
        differential_ranks={}, einf={}, einf_labels={},
        completed=False, _complex=cx,
    )


def run_to_einfty(ss: SpectralSequence) -> SpectralSequence:
    """Run all transgressive differentials; returns a completed snapshot."""
    cx = ss._complex
    active = [g.degree + 1 for g, tau in zip(ss.fiber.generators, cx.targets) if tau]
    if not active:
        # no nonzero transgressions: every differential vanishes and E_inf = E2
        return SpectralSequence(
            base=ss.base, fiber=ss.fiber, bound=ss.bound,
            e2_labels=ss.e2_labels, pages=dict(ss.pages),
            differential_ranks={}, einf=dict(ss.pages[2]),
            einf_labels=dict(ss.e2_labels), completed=True, _complex=cx,
        )
    r_stop = max(active) + 1

    z_cache: dict[tuple[int, int, int], list[list[Fraction]]] = {}

    def z_space(r: int, s: int, t: int) -> list[list[Fraction]]:
        """Basis of Z_r(s,t) = {x in F^s K^n : D x in F^(s+r)} as K^n vectors.

        Negative s means the whole complex (the filtration is exhaustive), so
        only the D-condition survives; that is how boundaries from early pages
        stay dead on all later pages.
        """
        n = s + t
        if n < 0 or n > ss.bound:
            return []
        key = (r, s, t)
        if key in z_cache:
            return z_cache[key]
        cols = cx.filtration_indices(n, max(s, 0))
        if not cols:
            z_cache[key] = []
            return []
        bad_rows = [i for i, (s2, _, _) in enumerate(cx.coords[n + 1]) if s2 < s + r]
        if bad_rows:
            bad_set = {i: k for k, i in enumerate(bad_rows)}
            rows = [[ZERO] * len(cols) for _ in bad_rows]
            for cpos, i in enumerate(cols):
                for j, c in cx.columns[n][i]:
                    k = bad_set.get(j)
                    if k is not None:
                        rows[k][cpos] = c
            kb = kernel_basis(QMatrix.from_rows(rows)) if rows else []
        else:
            kb = [[Fraction(1) if a == b else ZERO for a in range(len(cols))]
                  for b in range(len(cols))]
        full_len = len(cx.coords[n])
        out = []
        for vec in kb:
            full = [ZERO] * full_len
            for cpos, i in enumerate(cols):
                full[i] = vec[cpos]
            out.append(full)
        z_cache[key] = out
        return out

    def boundary_span(r: int, s: int, t: int) -> RowSpan:
        n = s + t
        span = RowSpan(len(cx.coords[n]))
        for v in z_space(r - 1, s + 1, t - 1):
            span.add(v)
        for v in z_space(r - 1, s - r + 1, t + r - 2):
            image = cx.apply_d(n - 1, v)
            span.add(image)
        return span

    pages: dict[int, dict[tuple[int, int], int]] = dict(ss.pages)
    ranks: dict[tuple[int, int, int], int] = {}
    reps_by_page: dict[tuple[int, int, int], list[list[Fraction]]] = {}
    spans_by_page: dict[tuple[int, int, int], RowSpan] = {}

    bidegrees = sorted(ss.e2_labels)
    for r in range(2, r_stop + 1):
        page: dict[tuple[int, int], int] = {}
        for (s, t) in bidegrees:
            zr = z_space(r, s, t)
            boundary = boundary_span(r, s, t)
            spans_by_page[(r, s, t)] = boundary.copy()
            reps = []
            for v in zr:
                if boundary.add(v):
                    reps.append(v)
            if reps:
                page[(s, t)] = len(reps)
            reps_by_page[(r, s, t)] = reps
        pages[r] = page
        if r < r_stop and (r in active):
            for (s, t) in bidegrees:
                reps = reps_by_page.get((r, s, t), [])
                if not reps:
                    continue
                target = (r, s + r, t - r + 1)
                tspan = spans_by_page.get(target)
                if tspan is None:
                    continue
                before = tspan.dim
                for v in reps:
                    tspan.add(cx.apply_d(s + t, v))
                rk = tspan.dim - before
                if rk:
                    ranks[(r, s, t)] = rk
    # consistency: page dims drop exactly by the in/out ranks
    for r in range(2, r_stop):
        for (s, t) in bidegrees:
            expected = pages[r].get((s, t), 0) \
                - ranks.get((r, s, t), 0) \
                - ranks.get((r, s - r, t + r - 1), 0)
            got = pages[r + 1].get((s, t), 0)
            if expected != got:
                raise AssertionError(
                    f"page bookkeeping failed at r={r}, (s,t)=({s},{t}): "
                    f"{expected} != {got}"
                )

    einf = dict(pages[r_stop])
    einf_labels: dict[tuple[int, int], tuple[str, ...]] = {}
    for (s, t), dim in einf.items():
        reps = reps_by_page[(r_stop, s, t)]
        labels = []
        for v in reps:
            lead = next(i for i, x in enumerate(v) if x != 0)
            labels.append(cx.label(cx.coords[s + t][lead]))
        einf_labels[(s, t)] = tuple(labels)
    return SpectralSequence(
        base=ss.base, fiber=ss.fiber, bound=ss.bound,
        e2_labels=ss.e2_labels, pages=pages,
        differential_ranks=ranks, einf=einf,
        einf_labels=einf_labels, completed=True, _complex=cx,
    )


def total_space_cohomology(ss: SpectralSequence, n: int) -> TotalCohomology:
    """H^n of the total space as the labeled sum of E_inf along s + t = n."""
    if not ss.completed:
        raise ValueError("run_to_einfty first")
    if n > ss.bound:
        raise ValueError(f"degree {n} beyond computed bound {ss.bound}")
    summands = []
    total = 0
    for s in range(n + 1):
        t = n - s
        dim = ss.einf.get((s, t), 0)
        if dim:
            summands.append(Summand(s, t, dim, ss.einf_labels.get((s, t), ())))
            total += dim
    return TotalCohomology(n, total, tuple(summands))


def random_betti_presentation(rng: random.Random, max_degree: int = 12,
                              max_dim: int = 4,
                              zero_classes: Sequence[str] = ("p1", "p2", "p3"),
                              ) -> BasePresentation:
    """Random simply connected Betti profile with all products and classes zero.

    Used by the randomized cross-validation sweeps: basis sizes are at most
    max_dim per degree and b_1 = 0.
    """
    betti = {0: 1}
    for d in range(2, max_degree + 1):
        betti[d] = rng.randint(0, max_dim)
    return BasePresentation.from_betti(
        GradedDims(betti),
        classes={name: {} for name in zero_classes},
        max_degree=max_degree,
    )
