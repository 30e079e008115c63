import pytest

from qtower.catalog import EMProduct
from qtower.gca import FreeGCA, Generator, poincare_dims
from qtower.sullivan import (CDGA, cohomology_dims, d_squared_check,
                             differential_extend, pathspace_model,
                             polynomial_koszul, relative_model_of_cover)


def koszul_pair():
    # (x4, sy4) with d(sy4) = x4
    return CDGA.with_gen_targets([("x4", 4), ("sy4", 3)], {"sy4": "x4"})


def test_differential_on_generator():
    c = koszul_pair()
    assert differential_extend(c, c.generator("sy4")) == c.generator("x4")


def test_differential_leibniz_product():
    c = koszul_pair()
    x4, sy4 = c.generator("x4"), c.generator("sy4")
    # d(x4 * sy4) = x4 * d(sy4) = x4^2 since d(x4) = 0
    assert differential_extend(c, x4 * sy4) == x4 * x4


def test_differential_of_unit():
    c = koszul_pair()
    assert differential_extend(c, c.alg.one()).is_zero()


def test_d_squared_on_model():
    assert d_squared_check(koszul_pair(), 20)


def test_d_squared_detects_corruption():
    # degree-correct but d^2(a3) = e5 != 0
    c = CDGA.with_gen_targets([("a3", 3), ("b4", 4), ("e5", 5)],
                              {"a3": "b4", "b4": "e5"})
    assert not d_squared_check(c, 10)


def test_degree_violating_differential_rejected():
    # d must raise degree by exactly one, so d(x4) = sy4*x4 cannot be built
    alg = FreeGCA.on([("x4", 4), ("sy4", 3)])
    bad = alg.gen("sy4") * alg.gen("x4")
    with pytest.raises(ValueError):
        CDGA(alg, {"sy4": alg.gen("x4"), "x4": bad})


def test_zero_differential_always_squares():
    assert d_squared_check(CDGA(FreeGCA.on([("p1", 4)]), {}), 12)


def test_cover_model_string7():
    gens = (Generator("x8", 8), Generator("x12", 12))
    model = relative_model_of_cover(gens, "x8")
    names = [g.name for g in model.total.alg.generators]
    assert names == ["x8", "x12", "sy8"]
    assert model.total.d_of_gen("sy8") == model.total.generator("x8")
    assert [g.name for g in model.fiber.alg.generators] == ["sy8"]
    assert model.fiber.alg.generators[0].degree == 7


def test_cover_model_quasi_isomorphism():
    gens = (Generator("x8", 8), Generator("x12", 12))
    model = relative_model_of_cover(gens, "x8")
    dims = cohomology_dims(model.total, 24)
    expected = poincare_dims(FreeGCA.on([("x12", 12)]), 24)
    assert dims == expected == {0: 1, 12: 1, 24: 1}


def test_cover_model_single_generator_is_acyclic():
    model = relative_model_of_cover((Generator("x4", 4),), "x4")
    assert [g.name for g in model.total.alg.generators] == ["x4", "sy4"]
    assert cohomology_dims(model.total, 20) == {0: 1}


def test_cover_model_errors():
    gens = (Generator("x8", 8), Generator("x7", 7))
    with pytest.raises(ValueError):
        relative_model_of_cover(gens, "nope")
    with pytest.raises(ValueError):
        relative_model_of_cover(gens, "x7")  # odd degree


def test_pathspace_model_triples():
    for m in (4, 8, 12):
        model = pathspace_model(EMProduct.of(m))
        names = {g.name: g.degree for g in model.total.alg.generators}
        assert names == {f"y{m}": m, f"sy{m}": m - 1}
        assert cohomology_dims(model.total, m + 6) == {0: 1}
        assert cohomology_dims(model.base, m + 4) == poincare_dims(model.base.alg, m + 4)


def test_pathspace_model_empty_and_low_degree():
    trivial = pathspace_model(EMProduct({}))
    assert trivial.total.alg.generators == ()
    low = pathspace_model(EMProduct.of(2))
    assert {g.name: g.degree for g in low.total.alg.generators} == {"y2": 2, "sy2": 1}
    with pytest.raises(ValueError):
        pathspace_model({1: 1})


def test_pathspace_model_with_multiplicity():
    model = pathspace_model(EMProduct.of(4, 4))
    names = sorted(g.name for g in model.total.alg.generators)
    assert names == ["sy4_1", "sy4_2", "y4_1", "y4_2"]
    assert cohomology_dims(model.total, 12) == {0: 1}


def test_zero_differential_cohomology_is_poincare():
    alg_pairs = [("p1", 4), ("x3", 3)]
    c = CDGA(FreeGCA.on(alg_pairs), {})
    assert cohomology_dims(c, 15) == poincare_dims(c.alg, 15)


def test_koszul_contractibility_small_ranks():
    # acceptance covers n <= 3; keep the quick cases here
    for n in (1, 2):
        c = polynomial_koszul(n)
        assert cohomology_dims(c, 4 * n + 4) == {0: 1}


def test_cohomology_requires_d_squared():
    c = CDGA.with_gen_targets([("a3", 3), ("b4", 4), ("e5", 5)],
                              {"a3": "b4", "b4": "e5"})
    with pytest.raises(ValueError):
        cohomology_dims(c, 8)
