import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from annulus.circle import circle_distance, compose_circle, identity, mobius_boundary, rotation
from annulus.complexfn import DiskMap, ExteriorMap, circle_points, coeff_distance
from annulus.errors import ClassificationError, InvalidParameter, UnivalenceFailure
from annulus.fixtures import fixture_classes, mobius_annulus, mobius_pair, random_a0, random_e
from annulus.semigroup import (
    RiggedAnnulus,
    annulus_distance,
    aut_action,
    classify,
    compose_e,
    from_qs,
    infinity_derivative,
    invert_points,
    multiply,
    normalize,
    rho,
    section,
)

M = 64
k = np.arange(1, M + 1)


def disk(*coeffs):
    return DiskMap(np.r_[coeffs, np.zeros(M - len(coeffs))])


def e_elem(*coeffs):
    return RiggedAnnulus(disk(*coeffs), ExteriorMap.identity(M))


class TestRiggedAnnulus:
    def test_standard_requires_unit_lead(self):
        with pytest.raises(InvalidParameter):
            RiggedAnnulus(DiskMap.identity(M), ExteriorMap(2.0, 0.0, np.zeros(M)))

    def test_a_normalized(self):
        g = ExteriorMap(2.0, 0.0, np.zeros(M))
        x = RiggedAnnulus(DiskMap.identity(M), g, tag="a_normalized", a=2.0)
        assert x.a == 2.0
        with pytest.raises(InvalidParameter):
            RiggedAnnulus(DiskMap.identity(M), g, tag="a_normalized")
        with pytest.raises(InvalidParameter):
            RiggedAnnulus(DiskMap.identity(M), g, tag="a_normalized", a=3.0)

    def test_unknown_tag(self):
        with pytest.raises(InvalidParameter):
            RiggedAnnulus(DiskMap.identity(M), ExteriorMap.identity(M), tag="weird")

    def test_flag_order(self):
        x = e_elem(0.5).with_flags({"E", "A0"})
        assert x.sorted_flags() == ["A0", "E"]


class TestClassify:
    def test_bounded_univalent(self):
        assert classify(e_elem(0.5)) == {"A0", "E"}

    def test_identity(self):
        assert classify(RiggedAnnulus.identity(M)) == {"G"}

    def test_mobius_pair(self):
        assert classify(mobius_annulus(0.3)) == {"G"}

    def test_touching_but_different(self):
        # z / (2 - z) maps D onto |zeta - 1/3| < 2/3, which touches the unit circle at 1 only
        x = RiggedAnnulus(DiskMap(0.5**k), ExteriorMap.identity(M))
        assert classify(x) == {"A_degenerate"}

    def test_overlap_is_empty(self):
        x = RiggedAnnulus(disk(0.25, 0.01), ExteriorMap(1.0, 2.0, np.r_[0.5, np.zeros(M - 1)]))
        assert classify(x) == frozenset()

    def test_non_univalent(self):
        with pytest.raises(UnivalenceFailure):
            classify(e_elem(1.0, 0.6))
        with pytest.raises(UnivalenceFailure):
            classify(RiggedAnnulus(disk(0.5), ExteriorMap(1.0, 0.0, np.r_[4.0, np.zeros(M - 1)])))

    def test_delta_touch_margin(self):
        x = e_elem(1 - 1e-5)
        assert "G" in classify(x) or "A_degenerate" in classify(x)
        assert classify(x, delta_touch=1e-6) == {"A0", "E"}

    @given(st.integers(0, 2**32 - 1), st.complex_numbers(min_magnitude=0.3, max_magnitude=3.0,
                                                          allow_nan=False, allow_infinity=False))
    @settings(max_examples=10)
    def test_flags_scale_invariant(self, seed, a):
        x = random_a0(np.random.default_rng(seed))
        assert classify(normalize(x, a)) == classify(x) == {"A0"}


class TestNormalisation:
    def test_halving(self):
        g = ExteriorMap(2.0, 0.4, np.r_[0.2, np.zeros(M - 1)])
        x = RiggedAnnulus(disk(0.5), g, tag="raw")
        y = normalize(x)
        assert y.tag == "standard"
        assert coeff_distance(y.f, disk(0.25)) < 1e-15
        assert coeff_distance(y.g, g.scaled(0.5)) < 1e-15
        assert infinity_derivative(y) == 1

    def test_unchanged_when_already_normalised(self):
        g = ExteriorMap(2.0, 0.4, np.zeros(M))
        x = RiggedAnnulus(disk(0.5), g, tag="a_normalized", a=2.0)
        assert annulus_distance(normalize(x, 2.0), x) == 0.0

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=10)
    def test_projection_of_section(self, seed):
        x = random_a0(np.random.default_rng(seed))
        a = 3 + 4j
        assert abs(infinity_derivative(normalize(x, a)) - a) < 1e-12
        assert abs(infinity_derivative(section(x, a)) - a) < 1e-12
        once = normalize(x, a)
        assert annulus_distance(normalize(once, a), once) < 1e-15

    def test_zero_rejected(self):
        with pytest.raises(InvalidParameter):
            normalize(e_elem(0.5), 0)

    def test_aut_action(self):
        y = aut_action(e_elem(0.5), 2j)
        assert y.tag == "raw"
        assert y.g.lead == 2j and y.f.coeffs[0] == 1j


class TestMultiply:
    def test_e_closed_form(self):
        out = multiply(e_elem(0.5), e_elem(1 / 3))
        assert coeff_distance(out.f, disk(1 / 6)) < 1e-8
        assert out.g.tail_distance_to_identity() < 1e-8
        assert "E" in out.flags

    @pytest.mark.parametrize("name", sorted(fixture_classes()))
    def test_identity_laws(self, name):
        x = fixture_classes()[name]
        one = RiggedAnnulus.identity(M)
        assert annulus_distance(multiply(one, x), x) < 1e-7
        assert annulus_distance(multiply(x, one), x) < 1e-7

    def test_matches_compose_e(self, rng):
        for _ in range(3):
            x, y = random_e(rng), random_e(rng)
            assert annulus_distance(multiply(x, y), compose_e(x, y)) < 1e-6

    def test_group_homomorphism(self):
        x, y = mobius_annulus(0.3), mobius_annulus(0.2j)
        out = multiply(x, y)
        assert "G" in out.flags
        expected = compose_circle(mobius_boundary(0.3), mobius_boundary(0.2j))
        assert circle_distance(rho(out), compose_circle(rho(x), rho(y))) < 1e-6
        assert circle_distance(rho(out), expected) < 1e-6

    def test_generic_product_is_non_degenerate(self, rng):
        x, y = random_a0(rng), random_a0(rng)
        diag = []
        out = multiply(x, y, diagnostics=diag)
        assert out.tag == "standard" and out.g.lead == 1
        assert out.flags == {"A0"}
        assert diag[0].weld_residual < 1e-9
        assert diag[0].seam.shape == (1024,)

    def test_associative_mixed(self, rng):
        x, y, z = random_e(rng), mobius_annulus(0.2), random_a0(rng)
        left = multiply(multiply(x, y), z)
        right = multiply(x, multiply(y, z))
        assert annulus_distance(left, right) < 1e-5

    def test_overlap_rejected(self):
        bad = RiggedAnnulus(disk(0.25, 0.01), ExteriorMap(1.0, 2.0, np.r_[0.5, np.zeros(M - 1)]))
        with pytest.raises(ClassificationError):
            multiply(bad, e_elem(0.5))


class TestComposeE:
    def test_closed_forms(self):
        assert coeff_distance(compose_e(e_elem(0.5), e_elem(1 / 3)).f, disk(1 / 6)) < 1e-15
        assert coeff_distance(compose_e(e_elem(0.7), e_elem(0.4j)).f, disk(0.28j)) < 1e-15

    def test_geometric(self):
        outer = RiggedAnnulus(DiskMap(0.5 * 0.1 ** (k - 1)), ExteriorMap.identity(M))
        out = compose_e(outer, e_elem(0.5))
        assert np.max(np.abs(out.f.coeffs - 0.25 * 0.05 ** (k - 1))) < 1e-10

    def test_requires_e(self):
        with pytest.raises(ClassificationError):
            compose_e(mobius_annulus(0.3), e_elem(0.5))


class TestRho:
    def test_identity(self):
        assert circle_distance(rho(RiggedAnnulus.identity(M)), identity()) < 1e-12

    def test_rotation(self):
        x = RiggedAnnulus(disk(np.exp(0.6j)), ExteriorMap.identity(M), flags=frozenset({"G"}))
        assert circle_distance(rho(x), rotation(0.6)) < 1e-12

    def test_mobius(self):
        assert circle_distance(rho(mobius_annulus(0.3)), mobius_boundary(0.3)) < 1e-8

    def test_requires_group_flag(self):
        with pytest.raises(ClassificationError):
            rho(e_elem(0.5))


class TestFromQs:
    def test_identity(self):
        assert annulus_distance(from_qs(identity()), RiggedAnnulus.identity(M)) < 1e-13

    def test_rotation(self):
        x = from_qs(rotation(0.6))
        assert coeff_distance(x.f, disk(np.exp(0.6j))) < 1e-12
        assert x.flags == {"G"}

    def test_mobius(self):
        F, G = mobius_pair(0.3)
        x = from_qs(mobius_boundary(0.3))
        assert coeff_distance(x.f, F) < 1e-8 and coeff_distance(x.g, G) < 1e-8

    def test_inverse_of_rho(self):
        phi = compose_circle(mobius_boundary(0.2), rotation(0.3))
        assert circle_distance(rho(from_qs(phi)), phi) < 1e-7


class TestInvertPoints:
    def test_disk_map(self):
        f = DiskMap(0.5 * 0.3 ** (k - 1))
        z = 0.8 * circle_points(64) * np.exp(0.1j)
        assert np.max(np.abs(invert_points(f, f(z)) - z)) < 1e-11

    def test_exterior_map(self):
        g = ExteriorMap(1.0, 0.1, np.r_[0.2, np.zeros(M - 1)])
        w = np.r_[1.2 * circle_points(32), 10 * circle_points(8)]
        assert np.max(np.abs(invert_points(g, g(w)) - w)) < 1e-11
