import random
from fractions import Fraction

import pytest

from qtower.linalg import GradedDims
from qtower.serre import (BasePresentation, FiberGenerator, FiberSpec,
                          PresentationError, e2_page, random_betti_presentation,
                          run_to_einfty, standard_fiber, total_space_cohomology)
from qtower.sullivan import cohomology_dims, polynomial_koszul


def truncated_pontrjagin_base(max_degree=12):
    """Q[p1, p2] truncated: the classifying-space presentation used as oracle."""
    basis = {0: ("1",), 4: ("p1",), 8: ("p1^2", "p2"), 12: ("p1^3", "p1p2")}
    products = {
        ("p1", "p1"): {"p1^2": 1},
        ("p1", "p1^2"): {"p1^3": 1},
        ("p1", "p2"): {"p1p2": 1},
    }
    classes = {"p1": {"p1": 1}, "p2": {"p2": 1}}
    return BasePresentation(max_degree, basis, products, classes)


def s4_base(p1_zero=True):
    classes = {"p1": {} if p1_zero else {"u4": 1}, "p2": {}}
    return BasePresentation(4, {0: ("1",), 4: ("u4",)}, {}, classes)


def test_e2_dimensions_s4_fiber_a3():
    ss = e2_page(s4_base(), standard_fiber(["a3"]), 8)
    assert ss.e2_dim(4, 3) == 1
    assert ss.e2_dim(0, 3) == 1
    assert ss.e2_dim(4, 0) == 1
    assert ss.e2_dim(3, 4) == 0


def test_e2_point_base_is_fiber_algebra():
    point = BasePresentation(0, {0: ("1",)}, {}, {})
    ss = e2_page(point, standard_fiber(["a3", "a7"]), 12)
    dims = {k: v for k, v in ss.pages[2].items()}
    assert dims == {(0, 0): 1, (0, 3): 1, (0, 7): 1, (0, 10): 1}


def test_e2_empty_fiber_is_base_row():
    ss = e2_page(s4_base(), FiberSpec(()), 8)
    assert ss.pages[2] == {(0, 0): 1, (4, 0): 1}


def test_universal_bundle_analog_is_acyclic():
    # oracle: the free Koszul CDGA is contractible (sullivan module)
    oracle = cohomology_dims(polynomial_koszul(2), 12)
    assert oracle == {0: 1}
    ss = run_to_einfty(e2_page(truncated_pontrjagin_base(), standard_fiber(["a3", "a7"]), 12))
    assert dict(ss.einf) == {(0, 0): 1}
    for n in range(13):
        assert total_space_cohomology(ss, n).dim == oracle.get(n)


def test_declared_zero_transgression_collapses():
    ss = run_to_einfty(e2_page(s4_base(p1_zero=True), standard_fiber(["a3"]), 8))
    assert ss.differential_ranks == {}
    assert dict(ss.einf) == dict(ss.pages[2])


def test_koszul_pair_on_truncated_free_algebra():
    basis = {0: ("1",), 4: ("u4",), 8: ("u8",), 12: ("u12",)}
    products = {("u4", "u4"): {"u8": 1}, ("u4", "u8"): {"u12": 1}}
    bp = BasePresentation(12, basis, products, {"p1": {"u4": 1}})
    ss = run_to_einfty(e2_page(bp, FiberSpec((FiberGenerator("a3", 3, "p1"),)), 12))
    assert dict(ss.einf) == {(0, 0): 1}


def test_nonzero_p1_kills_the_a3_column():
    ss = run_to_einfty(e2_page(s4_base(p1_zero=False), standard_fiber(["a3"]), 8))
    # d4: (0,3) -> (4,0) is an isomorphism, a3*u4 at (4,3) survives (u4^2 = 0)
    assert ss.differential_ranks == {(4, 0, 3): 1}
    assert dict(ss.einf) == {(0, 0): 1, (4, 3): 1}
    assert total_space_cohomology(ss, 7).dims_by_bidegree() == {(4, 3): 1}


def test_connected_fiber_exact_sequence_ranks():
    # 0 -> H^7(M) -> H^7(P) -> H^7(fiber) -> H^8(M), fiber a7 alone
    betti = GradedDims({0: 1, 7: 2, 8: 1})
    base_zero = BasePresentation.from_betti(betti, classes={"p2": {}})
    ss = run_to_einfty(e2_page(base_zero, FiberSpec((FiberGenerator("a7", 7, "p2"),)), 8))
    assert total_space_cohomology(ss, 7).dim == 2 + 1  # d8(a7) = 0: kernel is all of H^7(F)

    base_nonzero = BasePresentation.from_betti(betti, classes={"p2": {"h8_0": 1}})
    ss2 = run_to_einfty(e2_page(base_nonzero, FiberSpec((FiberGenerator("a7", 7, "p2"),)), 8))
    assert total_space_cohomology(ss2, 7).dim == 2  # a7 transgresses injectively
    assert ss2.differential_ranks == {(8, 0, 7): 1}


def test_rfiv_antidiagonal_on_random_profiles():
    rng = random.Random(20240)
    fiber = standard_fiber(["a3", "a7"])
    for _ in range(10):
        bp = random_betti_presentation(rng, max_degree=12, max_dim=4)
        betti = bp.betti()
        ss = run_to_einfty(e2_page(bp, fiber, 12))
        tc = total_space_cohomology(ss, 7)
        assert tc.dim == 1 + betti.get(4) + betti.get(7)
        expected = {(0, 7): 1}
        if betti.get(4):
            expected[(4, 3)] = betti.get(4)
        if betti.get(7):
            expected[(7, 0)] = betti.get(7)
        assert tc.dims_by_bidegree() == expected


def test_rnin_antidiagonal_on_random_profiles():
    rng = random.Random(20241)
    fiber = standard_fiber(["a3", "a7", "a11"])
    for _ in range(5):
        bp = random_betti_presentation(rng, max_degree=12, max_dim=3)
        betti = bp.betti()
        ss = run_to_einfty(e2_page(bp, fiber, 12))
        tc = total_space_cohomology(ss, 11)
        assert tc.dim == 1 + betti.get(4) + betti.get(8) + betti.get(11)
        got = tc.dims_by_bidegree()
        assert got.get((0, 11), 0) == 1
        assert got.get((4, 7), 0) == betti.get(4)
        assert got.get((8, 3), 0) == betti.get(8)
        assert got.get((11, 0), 0) == betti.get(11)


def test_euler_characteristic_conservation():
    # every differential inside the window cancels in the alternating sum;
    # only ranks leaving the top antidiagonal N shift it, by (-1)^(N+1) each
    ss = run_to_einfty(e2_page(truncated_pontrjagin_base(), standard_fiber(["a3", "a7"]), 12))
    for top in (7, 11):
        chi2 = sum((-1) ** (s + t) * len(v) for (s, t), v in ss.e2_labels.items()
                   if s + t <= top)
        chi_inf = sum((-1) ** (s + t) * d for (s, t), d in ss.einf.items()
                      if s + t <= top)
        escaping = sum(rk for (r, s, t), rk in ss.differential_ranks.items()
                       if s + t == top)
        assert chi_inf == chi2 + (-1) ** (top + 1) * escaping


def test_differential_squares_to_zero_as_matrices():
    from qtower.serre import _KoszulComplex
    cx = _KoszulComplex(truncated_pontrjagin_base(), standard_fiber(["a3", "a7"]), 11)
    for n in range(10):
        size = len(cx.coords[n])
        for i in range(size):
            vec = [Fraction(0)] * size
            vec[i] = Fraction(1)
            dd = cx.apply_d(n + 1, cx.apply_d(n, vec))
            assert all(x == 0 for x in dd)


def test_page_dims_follow_rank_bookkeeping():
    ss = run_to_einfty(e2_page(truncated_pontrjagin_base(), standard_fiber(["a3", "a7"]), 12))
    for r in range(2, max(ss.pages)):
        for (s, t) in ss.e2_labels:
            out_rank = ss.differential_ranks.get((r, s, t), 0)
            in_rank = ss.differential_ranks.get((r, s - r, t + r - 1), 0)
            assert ss.pages[r + 1].get((s, t), 0) == \
                ss.pages[r].get((s, t), 0) - out_rank - in_rank


def test_broken_associativity_detected():
    basis = {0: ("1",), 2: ("a",), 4: ("b",), 6: ("c",), 8: ("d",)}
    products = {
        ("a", "a"): {"b": 1},
        ("a", "b"): {"c": 1},
        ("a", "c"): {"d": 1},
        ("b", "b"): {"d": 3},  # (a a)(a a) != a(a(a a)) now
    }
    bp = BasePresentation(8, basis, products, {})
    with pytest.raises(PresentationError) as err:
        bp.validate_algebra(full=True)
    assert "associative" in str(err.value)


def test_broken_commutativity_detected():
    basis = {0: ("1",), 3: ("u", "v"), 6: ("w",)}
    products = {("u", "v"): {"w": 1}, ("v", "u"): {"w": 1}}  # should be -w
    bp = BasePresentation(6, basis, products, {})
    with pytest.raises(PresentationError) as err:
        bp.validate_algebra()
    assert "commutative" in str(err.value)


def test_presentation_validation_errors():
    with pytest.raises(PresentationError):
        BasePresentation(4, {0: ("1", "x")}, {}, {})  # two units
    with pytest.raises(PresentationError):
        BasePresentation(4, {0: ("1",), 4: ("u",)}, {("u", "z"): {"u": 1}}, {})
    with pytest.raises(PresentationError):
        # p1 must sit in degree 4
        BasePresentation(8, {0: ("1",), 8: ("v",)}, {}, {"p1": {"v": 1}})
    with pytest.raises(PresentationError):
        # product lands in the wrong degree
        BasePresentation(8, {0: ("1",), 4: ("u",), 8: ("w",)},
                         {("u", "w"): {"u": 1}}, {})


def test_fiber_target_degree_checked():
    bp = s4_base(p1_zero=False)
    bad = FiberSpec((FiberGenerator("a7", 7, "p1"),))  # p1 sits in degree 4, not 8
    with pytest.raises(PresentationError):
        e2_page(bp, bad, 8)
