import pytest

from qtower.manifold import (ManifoldParseError, ManifoldValidationError,
                             fixture_path, list_fixtures, parse_manifold,
                             resolve_manifold)


def write(tmp_path, text, name="m.toml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_fixtures_all_parse():
    names = list_fixtures()
    assert {"point", "s2", "s4", "s7", "s12", "witten", "su4_su2",
            "e8_twelve"} <= set(names)
    for name in names:
        mf = parse_manifold(fixture_path(name))
        assert mf.betti.get(0) == 1
        assert mf.class_status.get("p1") in ("zero", "nonzero")


def test_s4_fixture_contents():
    mf = parse_manifold(fixture_path("s4"))
    assert mf.betti == {0: 1, 4: 1}
    assert mf.dim == 4
    assert mf.presentation.basis_at(4) == ("u4",)
    assert mf.class_status == {"p1": "zero", "p2": "zero", "p3": "zero"}


def test_witten_profile_has_torsion_h4():
    mf = parse_manifold(fixture_path("witten"))
    assert mf.betti.get(4) == 0
    assert mf.betti == {0: 1, 2: 1, 5: 1, 7: 1}


def test_su4_su2_profile():
    mf = parse_manifold(fixture_path("su4_su2"))
    assert mf.betti == {0: 1, 5: 1, 7: 1, 12: 1}
    assert mf.dimension == 12


def test_minimal_file(tmp_path):
    mf = parse_manifold(write(tmp_path, '[betti]\n0 = 1\n'))
    assert mf.betti == {0: 1}
    assert mf.name == "m"
    assert mf.dimension == 0


def test_synthetic_basis_names(tmp_path):
    mf = parse_manifold(write(tmp_path, '[betti]\n0 = 1\n4 = 2\n'))
    assert mf.presentation.basis_at(4) == ("h4_0", "h4_1")


def test_class_coordinate_vector(tmp_path):
    from fractions import Fraction

    text = '[betti]\n0 = 1\n4 = 2\n\n[classes]\np1 = ["1", "-2/3"]\n'
    mf = parse_manifold(write(tmp_path, text))
    assert mf.class_status["p1"] == "nonzero"
    vec = mf.presentation.class_vector("p1")
    assert vec == {"h4_0": Fraction(1), "h4_1": Fraction(-2, 3)}


def test_missing_file_is_parse_error():
    with pytest.raises(ManifoldParseError):
        parse_manifold("/nonexistent/nowhere.toml")


def test_bad_toml_is_parse_error(tmp_path):
    with pytest.raises(ManifoldParseError):
        parse_manifold(write(tmp_path, "betti = {"))


def test_duplicate_key_is_parse_error(tmp_path):
    with pytest.raises(ManifoldParseError):
        parse_manifold(write(tmp_path, "[betti]\n0 = 1\n0 = 2\n"))


def test_b0_must_be_one(tmp_path):
    with pytest.raises(ManifoldValidationError):
        parse_manifold(write(tmp_path, "[betti]\n0 = 2\n"))


def test_negative_dimension_rejected(tmp_path):
    with pytest.raises(ManifoldValidationError) as err:
        parse_manifold(write(tmp_path, "[betti]\n0 = 1\n4 = -1\n"))
    assert ":3:" in str(err.value)  # line-anchored


def test_float_rejected(tmp_path):
    with pytest.raises(ManifoldValidationError):
        parse_manifold(write(tmp_path, "[betti]\n0 = 1\n4 = 1.5\n"))
    with pytest.raises(ManifoldValidationError):
        parse_manifold(write(
            tmp_path, '[betti]\n0 = 1\n4 = 1\n\n[classes]\np1 = [0.5]\n'))


def test_basis_betti_mismatch(tmp_path):
    text = ('[betti]\n0 = 1\n4 = 2\n\n[algebra]\nmax_degree = 4\n'
            '[algebra.basis]\n4 = ["u4"]\n')
    with pytest.raises(ManifoldValidationError) as err:
        parse_manifold(write(tmp_path, text))
    assert "basis size 1 != betti 2" in str(err.value)


def test_class_vector_length_checked(tmp_path):
    text = '[betti]\n0 = 1\n4 = 2\n\n[classes]\np1 = ["1"]\n'
    with pytest.raises(ManifoldValidationError):
        parse_manifold(write(tmp_path, text))


def test_dim_below_top_rejected(tmp_path):
    with pytest.raises(ManifoldValidationError):
        parse_manifold(write(tmp_path, "dim = 3\n[betti]\n0 = 1\n4 = 1\n"))


def test_algebra_products_parse(tmp_path):
    text = (
        '[betti]\n0 = 1\n4 = 1\n8 = 1\n\n'
        '[algebra]\nmax_degree = 8\n'
        '[algebra.basis]\n4 = ["u"]\n8 = ["v"]\n'
        '[[algebra.products]]\nleft = "u"\nright = "u"\nvalue = { v = "1" }\n'
    )
    mf = parse_manifold(write(tmp_path, text))
    assert mf.presentation.product_vector("u", "u") == {"v": 1}


def test_resolve_manifold_fixture_names(tmp_path):
    assert resolve_manifold("s4").name == "s4.toml"
    assert resolve_manifold("s4.toml").name == "s4.toml"
    local = write(tmp_path, "[betti]\n0 = 1\n", name="local.toml")
    assert resolve_manifold(str(local)) == local
    with pytest.raises(ManifoldParseError):
        resolve_manifold("no_such_fixture")
