import random

from qtower.catalog import EMProduct, parse_groupspec, rational_type, bcohomology_generators
from qtower.gauge import (GaugeQuery, connectivity, gauge_pi, periodicity_check,
                          pi_dim, sphere_case, universal_bundle_pi)
from qtower.linalg import GradedDims


def stable_type(depth=64, cover=0):
    return rational_type(parse_groupspec(f"stableO<{cover}>" if cover else "stableO"), depth)


def sphere(m):
    return GradedDims({0: 1, m: 1})


def test_gauge_pi_stable_group_over_s4():
    # H^0 and H^4 both pair with a degree-(q+r) factor: pi_3 has dimension 2
    dims = gauge_pi(GaugeQuery(stable_type(), sphere(4), q_range=(0, 8)))
    assert dims[3] == 2
    assert dims[0] == 0 and dims[1] == 0 and dims[2] == 0
    assert dims[4] == 0


def test_gauge_pi_point_base_is_group_type():
    em = stable_type()
    dims = gauge_pi(GaugeQuery(em, GradedDims({0: 1}), q_range=(0, 16)))
    for q in range(17):
        assert dims[q] == em.mult(q)


def test_gauge_pi_q0_vanishes_without_matching_degrees():
    assert pi_dim(stable_type(), sphere(4), 0) == 0


def test_based_unbased_difference_is_h0_term():
    rng = random.Random(5)
    em = stable_type()
    for _ in range(20):
        betti = GradedDims({0: 1, **{d: rng.randint(0, 3) for d in range(2, 13)}})
        for q in range(0, 12):
            unbased = pi_dim(em, betti, q, based=False)
            based = pi_dim(em, betti, q, based=True)
            assert unbased - based == em.mult(q)


def test_sphere_case_agrees_with_gauge_pi():
    groups = ["stableO", "string", "fivebrane", "ninebrane", "spin:7", "spin:8",
              "so:9", "twospin"]
    for spec in groups:
        em = rational_type(parse_groupspec(spec), 64)
        for m in range(1, 17):
            for n in range(0, 17):
                assert sphere_case(m, em, n) == pi_dim(em, sphere(m), n), (spec, m, n)


def test_sphere_case_eleven_connected_window():
    # over S^8 with an 11-connected group, pi_3 is 1 exactly when 11 is a factor
    em = stable_type(cover=8)   # degrees 11, 15, ...
    assert em.connectivity() == 10
    assert sphere_case(8, em, 3) == 1
    em16 = stable_type(cover=16)  # degrees 19, 23, ...
    assert sphere_case(8, em16, 3) == 0


def test_sphere_case_beyond_window_is_zero():
    em = rational_type(parse_groupspec("spin:7"), 24)  # {3, 7, 11}
    assert sphere_case(4, em, 30) == 0


def test_periodicity_stable_groups():
    rng = random.Random(11)
    for cover in (0, 4, 8, 12):
        em = stable_type(depth=80, cover=cover)
        for _ in range(5):
            betti = GradedDims({0: 1, **{d: rng.randint(0, 3) for d in range(2, 13)}})
            q = GaugeQuery(em, betti, q_range=(0, 32))
            assert periodicity_check(q, cover)


def test_periodicity_fails_for_truncated_type():
    em = EMProduct.of(3, 7)  # deliberately cut after degree 7
    q = GaugeQuery(em, GradedDims({0: 1}), q_range=(0, 16))
    assert not periodicity_check(q, 0)


def test_connectivity_point_base():
    em = stable_type(cover=8)  # 10-connected
    q = GaugeQuery(em, GradedDims({0: 1}), q_range=(0, 24))
    assert connectivity(q) == 10


def test_connectivity_string_small_base():
    em = rational_type(parse_groupspec("string"), 40)
    for betti in ({0: 1, 3: 2}, {0: 1, 2: 1, 3: 1}, {0: 1}):
        q = GaugeQuery(em, GradedDims(betti), q_range=(0, 16))
        assert connectivity(q) >= 3


def test_connectivity_lower_bound_k_minus_n():
    rng = random.Random(31)
    for cover in (4, 8, 12):
        em = stable_type(depth=64, cover=cover)
        k = em.connectivity()
        for _ in range(10):
            betti = {0: 1, **{d: rng.randint(0, 2) for d in range(2, 11)}}
            g = GradedDims(betti)
            n = g.top()
            q = GaugeQuery(em, g, q_range=(0, 24))
            assert connectivity(q) >= k - n


def test_e8_based_gauge_connectivity():
    em = rational_type(parse_groupspec("e8<4>"), 20)  # {15}
    betti = GradedDims({0: 1, 4: 1, 8: 1, 11: 1})  # 3-connected, dim 12 profile
    q = GaugeQuery(em, betti, based=True, q_range=(0, 8))
    assert connectivity(q) == 3  # = 15 - 12 exactly on this profile


def test_universal_bundle_homotopy():
    gens = bcohomology_generators(parse_groupspec("bstableO"), 24)
    em = stable_type(depth=48)
    assert universal_bundle_pi(gens, em, 1) == 0
    assert universal_bundle_pi(gens, em, 2) == 0
    assert universal_bundle_pi(gens, em, 3) >= 1
    assert universal_bundle_pi(gens, em, 5) == 0
    for q in range(0, 16):
        value = universal_bundle_pi(gens, em, q)
        if q % 4 != 3:
            assert value == 0, q
        else:
            assert value >= 1, q
