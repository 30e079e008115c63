"""The manifold input format: TOML profiles of H^*(M; Q).

A file carries Betti numbers (exact, no floats anywhere), an optional
dimension, an optional algebra block (named per-degree bases plus a
multiplication table) and an optional classes block declaring distinguished
classes either as "zero" or as an exact coordinate vector in the basis of
their degree.  Without an algebra block a synthetic basis with all products
zero is used, which is enough for every computation that never multiplies.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .linalg import GradedDims, rat
from .serre import BasePresentation, PresentationError


class ManifoldParseError(Exception):
    """File unreadable or not valid TOML (CLI exit code 2)."""


class ManifoldValidationError(Exception):
    """Well-formed TOML with invalid content (CLI exit code 3)."""


@dataclass(frozen=True)
class ManifoldFile:
    name: str
    path: str
    betti: GradedDims
    dim: Optional[int]
    presentation: BasePresentation
    class_status: Mapping[str, str]  # declared classes only: "zero" | "nonzero"

    @property
    def dimension(self) -> int:
        """Explicit dim if given, else the top degree with nonzero Betti number."""
        return self.dim if self.dim is not None else self.betti.top()


def _line_of(text: str, token: str) -> Optional[int]:
    for i, line in enumerate(text.splitlines(), 1):
        if token in line:
            return i
    return None


def _fail(path: str, text: str, token: str, message: str):
    line = _line_of(text, token)
    anchor = f"{path}:{line}" if line else path
    raise ManifoldValidationError(f"{anchor}: {message}")


def _expect_int(value, path, text, token, what) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, text, token, f"{what} must be an exact integer, got {value!r}")
    return value


def parse_manifold(path) -> ManifoldFile:
    """Parse and validate a manifold file; raises the two error classes above."""
    path = str(path)
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise ManifoldParseError(f"{path}: {e}") from e
    try:
        text = raw.decode("utf-8")
        data = tomllib.loads(text)
    except UnicodeDecodeError as e:
        raise ManifoldParseError(f"{path}: not UTF-8 ({e})") from e
    except tomllib.TOMLDecodeError as e:
        raise ManifoldParseError(f"{path}: {e}") from e

    name = data.get("name", Path(path).stem)
    if not isinstance(name, str):
        _fail(path, text, "name", "name must be a string")

    betti_raw = data.get("betti")
    if not isinstance(betti_raw, dict) or not betti_raw:
        _fail(path, text, "betti", "a [betti] table is required")
    betti_map: dict[int, int] = {}
    for key, value in betti_raw.items():
        if not str(key).isdigit():
            _fail(path, text, str(key), f"betti degree {key!r} is not a non-negative integer")
        dim = _expect_int(value, path, text, str(key), f"betti[{key}]")
        if dim < 0:
            _fail(path, text, str(key), f"betti[{key}] is negative")
        degree = int(key)
        if degree in betti_map:
            _fail(path, text, str(key), f"duplicate betti degree {key}")
        betti_map[degree] = dim
    if betti_map.get(0) != 1:
        _fail(path, text, "betti", 'betti["0"] must be 1 (connected base)')
    betti = GradedDims(betti_map)

    dim = data.get("dim")
    if dim is not None:
        dim = _expect_int(dim, path, text, "dim", "dim")
        if dim < betti.top():
            _fail(path, text, "dim", f"dim {dim} below top Betti degree {betti.top()}")

    classes_raw = data.get("classes", {})
    if not isinstance(classes_raw, dict):
        _fail(path, text, "classes", "[classes] must be a table")

    algebra = data.get("algebra")
    if algebra is None:
        presentation = _synthetic_presentation(betti, classes_raw, path, text)
    else:
        presentation = _explicit_presentation(algebra, betti, classes_raw, path, text)

    status = {}
    for cname in classes_raw:
        status[cname] = "zero" if presentation.class_is_zero(cname) else "nonzero"
    return ManifoldFile(
        name=name, path=path, betti=betti, dim=dim,
        presentation=presentation, class_status=status,
    )


def _class_degree(cname: str, path, text) -> int:
    if cname.startswith("p") and cname[1:].isdigit():
        return 4 * int(cname[1:])
    _fail(path, text, cname,
          f"class {cname!r}: coordinate vectors are only supported for p1, p2, ... "
          f"(use \"zero\" for other classes)")


def _class_vectors(classes_raw, basis_at, path, text) -> dict[str, dict]:
    out: dict[str, dict] = {}
    for cname, value in classes_raw.items():
        if value == "zero":
            out[cname] = {}
            continue
        if not isinstance(value, list):
            _fail(path, text, cname,
                  f"class {cname!r} must be \"zero\" or a coordinate array")
        degree = _class_degree(cname, path, text)
        names = basis_at(degree)
        if len(value) != len(names):
            _fail(path, text, cname,
                  f"class {cname!r}: {len(value)} coordinates for a "
                  f"{len(names)}-dimensional degree-{degree} basis")
        vec = {}
        for bname, coord in zip(names, value):
            if isinstance(coord, float):
                _fail(path, text, cname, f"class {cname!r}: floats are not allowed")
            try:
                coeff = rat(coord)
            except (TypeError, ValueError):
                _fail(path, text, cname, f"class {cname!r}: bad coordinate {coord!r}")
            if coeff != 0:
                vec[bname] = coeff
        out[cname] = vec
    return out


def _synthetic_presentation(betti, classes_raw, path, text) -> BasePresentation:
    basis = {0: ("1",)}
    for d in betti.degrees():
        if d:
            basis[d] = tuple(f"h{d}_{i}" for i in range(betti.get(d)))

    def basis_at(degree):
        return basis.get(degree, ())

    classes = _class_vectors(classes_raw, basis_at, path, text)
    try:
        return BasePresentation(max_degree=betti.top(), basis=basis,
                                products={}, classes=classes)
    except PresentationError as e:
        raise ManifoldValidationError(f"{path}: {e}") from e


def _explicit_presentation(algebra, betti, classes_raw, path, text) -> BasePresentation:
    if not isinstance(algebra, dict):
        _fail(path, text, "algebra", "[algebra] must be a table")
    max_degree = _expect_int(algebra.get("max_degree", betti.top()), path, text,
                             "max_degree", "algebra.max_degree")
    basis_raw = algebra.get("basis", {})
    if not isinstance(basis_raw, dict):
        _fail(path, text, "basis", "[algebra.basis] must be a table")
    basis: dict[int, tuple[str, ...]] = {0: ("1",)}
    for key, names in basis_raw.items():
        if not str(key).isdigit():
            _fail(path, text, str(key), f"basis degree {key!r} is not an integer")
        degree = int(key)
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            _fail(path, text, str(key), f"basis[{key}] must be a list of names")
        basis[degree] = tuple(names)
    for d in set(betti.degrees()) | {d for d in basis if basis[d]}:
        want = betti.get(d)
        got = len(basis.get(d, ()))
        if want != got:
            _fail(path, text, "basis",
                  f"degree {d}: basis size {got} != betti {want}")

    def basis_at(degree):
        return basis.get(degree, ())

    products: dict[tuple[str, str], dict] = {}
    for i, entry in enumerate(algebra.get("products", [])):
        if not isinstance(entry, dict) or "left" not in entry or "right" not in entry:
            _fail(path, text, "products",
                  f"products[{i}] needs left, right, and value fields")
        left, right = entry["left"], entry["right"]
        value = entry.get("value", {})
        if not isinstance(value, dict):
            _fail(path, text, "products", f"products[{i}].value must be a table")
        vec = {}
        for bname, coord in value.items():
            if isinstance(coord, float):
                _fail(path, text, bname, f"products[{i}]: floats are not allowed")
            vec[bname] = rat(coord)
        key = (left, right)
        if key in products:
            _fail(path, text, left, f"duplicate product entry ({left}, {right})")
        products[key] = vec

    classes = _class_vectors(classes_raw, basis_at, path, text)
    try:
        return BasePresentation(max_degree=max_degree, basis=basis,
                                products=products, classes=classes)
    except PresentationError as e:
        raise ManifoldValidationError(f"{path}: {e}") from e


def fixtures_dir():
    return resources.files("qtower") / "fixtures"


def fixture_path(name: str) -> Path:
    name = name.removesuffix(".toml")
    return Path(str(fixtures_dir() / f"{name}.toml"))


def list_fixtures() -> list[str]:
    return sorted(p.name.removesuffix(".toml")
                  for p in Path(str(fixtures_dir())).glob("*.toml"))


def resolve_manifold(arg: str) -> Path:
    """A filesystem path, or the name of a shipped fixture (s4, witten, ...)."""
    p = Path(arg)
    if p.exists():
        return p
    candidate = fixture_path(arg)
    if candidate.exists():
        return candidate
    raise ManifoldParseError(
        f"manifold file not found: {arg} (no such path, and no fixture named "
        f"{arg!r}; shipped fixtures: {', '.join(list_fixtures())})"
    )
