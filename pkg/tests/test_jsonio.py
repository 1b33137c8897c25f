import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from annulus import jsonio
from annulus.charts import ChartPoint
from annulus.circle import CircleHomeo, mobius_boundary, uniform_angles
from annulus.complexfn import DiskMap, ExteriorMap
from annulus.errors import InputError, InvalidInput, OrientationError
from annulus.fixtures import mobius_annulus
from annulus.riemann import JordanCurve
from annulus.semigroup import RiggedAnnulus, normalize

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)


def round_trip(obj, kind):
    return jsonio.loads(jsonio.dumps(obj), kind)


class TestRoundTrip:
    @given(st.lists(cplx, min_size=1, max_size=20))
    def test_disk_map(self, coeffs):
        f = DiskMap(coeffs)
        assert np.array_equal(round_trip(f, "disk_map").coeffs, f.coeffs)

    @given(cplx.filter(lambda z: z != 0), cplx, st.lists(cplx, max_size=10))
    def test_exterior_map(self, lead, const, neg):
        g = ExteriorMap(lead, const, neg)
        h = round_trip(g, "exterior_map")
        assert h.lead == g.lead and h.const == g.const and np.array_equal(h.neg, g.neg)

    @given(st.floats(-0.6, 0.6), st.floats(-0.6, 0.6))
    def test_circle_homeo(self, a, b):
        phi = mobius_boundary(complex(a, b) * 0.9, n=64)
        assert np.array_equal(round_trip(phi, "circle_homeo").lift, phi.lift)
        assert 0 <= phi.lift[0] < 2 * np.pi

    def test_start_just_below_zero(self):
        lift = uniform_angles(8) - 1e-300
        phi = CircleHomeo(lift)
        assert 0 <= phi.lift[0] < 2 * np.pi
        assert np.array_equal(round_trip(phi, "circle_homeo").lift, phi.lift)

    def test_rigged_annulus(self):
        x = normalize(mobius_annulus(0.3), 2 - 1j)
        y = round_trip(x, "rigged_annulus")
        assert y.tag == "a_normalized" and y.a == 2 - 1j
        assert y.flags == x.flags
        assert np.array_equal(y.f.coeffs, x.f.coeffs) and np.array_equal(y.g.neg, x.g.neg)

    def test_curve(self):
        c = JordanCurve(np.exp(1j * uniform_angles(32)) * (1 + 0.1j))
        assert np.array_equal(round_trip(c, "curve").points, c.points)

    def test_chart_point(self):
        p = ChartPoint(np.array([0.1 + 0.2j, 1 / 3]), 0.5j, np.array([-1e-300 + 0j]), 1 + 1e-17j)
        q = round_trip(p, "chart_point")
        assert np.array_equal(q.as_vector(), p.as_vector())

    def test_series(self):
        s = np.array([1 / 7, -2j, 1e-310])
        assert np.array_equal(round_trip(s, "series"), s)


class TestDeterminism:
    def test_same_bytes(self):
        x = mobius_annulus(0.3)
        assert jsonio.dumps(x) == jsonio.dumps(round_trip(x, "rigged_annulus"))

    def test_sorted_keys(self):
        text = jsonio.dumps(DiskMap([1.0]))
        assert list(json.loads(text)) == sorted(json.loads(text))
        assert text.endswith("\n")

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            jsonio.dumps(DiskMap([np.nan]))

    def test_unsupported_type(self):
        with pytest.raises(TypeError):
            jsonio.encode(object())


class TestValidation:
    def test_malformed_json(self):
        with pytest.raises(InvalidInput) as err:
            jsonio.loads("{not json")
        assert "malformed" in str(err.value)

    def test_unknown_kind(self):
        with pytest.raises(InvalidInput) as err:
            jsonio.loads('{"kind": "torus"}')
        assert "$.kind" in str(err.value)

    def test_wrong_kind(self):
        with pytest.raises(InvalidInput):
            jsonio.loads(jsonio.dumps(DiskMap([1.0])), "exterior_map")

    def test_missing_field_path(self):
        data = json.loads(jsonio.dumps(mobius_annulus(0.3)))
        del data["g"]["lead"]
        with pytest.raises(InvalidInput) as err:
            jsonio.decode(data)
        assert "$.g" in str(err.value) and "lead" in str(err.value)

    def test_bad_pair_path(self):
        data = json.loads(jsonio.dumps(DiskMap([1.0, 2.0])))
        data["coeffs"][1] = [1.0, "x"]
        with pytest.raises(InvalidInput) as err:
            jsonio.decode(data)
        assert "$.coeffs[1][1]" in str(err.value)

    def test_length_mismatch(self):
        data = json.loads(jsonio.dumps(DiskMap([1.0, 2.0])))
        data["m"] = 3
        with pytest.raises(InvalidInput):
            jsonio.decode(data)

    def test_decreasing_lift(self):
        lift = list(uniform_angles(8)[::-1])
        with pytest.raises(OrientationError):
            jsonio.decode({"kind": "circle_homeo", "n": 8, "lift": lift})

    def test_lift_spanning_full_turn(self):
        lift = list(2 * uniform_angles(8))
        with pytest.raises(OrientationError):
            jsonio.decode({"kind": "circle_homeo", "n": 8, "lift": lift})

    def test_bad_flags(self):
        data = json.loads(jsonio.dumps(mobius_annulus(0.3)))
        data["flags"] = ["Z"]
        with pytest.raises(InvalidInput):
            jsonio.decode(data)

    def test_tag_invariant_reported_as_input_error(self):
        data = json.loads(jsonio.dumps(mobius_annulus(0.3)))
        data["g"]["lead"] = [2.0, 0.0]
        with pytest.raises(InputError):
            jsonio.decode(data)

    def test_booleans_are_not_numbers(self):
        with pytest.raises(InvalidInput):
            jsonio.decode({"kind": "series", "coeffs": [[True, 0]]})

    def test_file_errors_carry_path(self, tmp_path):
        missing = tmp_path / "absent.json"
        with pytest.raises(InvalidInput) as err:
            jsonio.load(missing)
        assert "absent.json" in str(err.value)
        bad = tmp_path / "bad.json"
        bad.write_text('{"kind": "disk_map"}')
        with pytest.raises(InvalidInput) as err:
            jsonio.load(bad)
        assert "bad.json" in str(err.value)

    def test_save_and_load(self, tmp_path):
        x = RiggedAnnulus.identity(8)
        jsonio.save(x, tmp_path / "x.json")
        assert jsonio.load(tmp_path / "x.json", "rigged_annulus").flags == {"G"}
