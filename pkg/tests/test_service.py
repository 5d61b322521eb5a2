import json
import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

from delaydesign.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


class TestHealth:
    def test_health(self, client):
        r = client.get("/health")
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "ok"
        assert body["version"] == "0.1.0"
        assert body["backend"] in ("compiled", "python")


class TestGenericMid:
    def test_first_order(self, client):
        r = client.post("/design/generic-mid", json={"n": 1, "m": 0, "tau": 1, "s0": 0})
        assert r.status_code == 200
        q = r.json()["quasipolynomial"]
        assert q["a"] == [-1.0]
        assert q["b"] == [1.0]

    def test_second_order(self, client):
        r = client.post("/design/generic-mid", json={"n": 2, "m": 0, "tau": 1, "s0": 0})
        assert r.status_code == 200
        q = r.json()["quasipolynomial"]
        np.testing.assert_allclose(q["a"], [2.0, -2.0], atol=1e-10)
        np.testing.assert_allclose(q["b"], [-2.0], atol=1e-10)

    def test_degenerate_orders(self, client):
        r = client.post("/design/generic-mid", json={"n": 0, "m": 0, "tau": 1, "s0": 0})
        assert r.status_code == 422
        assert r.json()["code"] == "bad_input"

    def test_malformed_json(self, client):
        r = client.post(
            "/design/generic-mid",
            content=b"{not json",
            headers={"content-type": "application/json"},
        )
        assert r.status_code == 400
        assert r.json()["code"] == "bad_input"

    def test_extra_fields_rejected(self, client):
        r = client.post(
            "/design/generic-mid",
            json={"n": 1, "m": 0, "tau": 1, "s0": 0, "zz": 1},
        )
        assert r.status_code == 422
        assert r.json()["code"] == "bad_input"
        assert "zz" in r.json()["message"]

    def test_missing_field(self, client):
        r = client.post("/design/generic-mid", json={"n": 1, "m": 0, "tau": 1})
        assert r.status_code == 422
        assert "s0" in r.json()["message"]


class TestGenericCrrid:
    def test_two_roots(self, client):
        r = client.post(
            "/design/generic-crrid",
            json={"n": 1, "m": 0, "tau": 1, "roots": [-1, -2]},
        )
        assert r.status_code == 200
        assert r.json()["quasipolynomial"]["b"][0] == pytest.approx(
            0.21409726569788409, rel=1e-9
        )

    def test_order_insensitive(self, client):
        a = client.post(
            "/design/generic-crrid",
            json={"n": 1, "m": 0, "tau": 1, "roots": [-1, -2]},
        )
        b = client.post(
            "/design/generic-crrid",
            json={"n": 1, "m": 0, "tau": 1, "roots": [-2, -1]},
        )
        assert a.status_code == b.status_code == 200
        assert a.content == b.content

    def test_wrong_count(self, client):
        r = client.post(
            "/design/generic-crrid", json={"n": 1, "m": 0, "tau": 1, "roots": [-1]}
        )
        assert r.status_code == 422
        assert r.json()["code"] == "bad_input"


class TestControlMid:
    def test_delay_given(self, client):
        r = client.post(
            "/design/control-mid",
            json={"n": 2, "m": 0, "a": [39.478, 0], "given": {"tau": 0.12}},
        )
        assert r.status_code == 200
        results = r.json()
        assert isinstance(results, list) and len(results) == 2
        assert results[0]["solved_parameter"] == pytest.approx(-2.859, abs=2e-3)
        assert results[0]["quasipolynomial"]["b"][0] == pytest.approx(-33.81, abs=5e-2)

    def test_no_admissible_point(self, client):
        r = client.post(
            "/design/control-mid",
            json={"n": 2, "m": 0, "a": [39.478, 0], "given": {"tau": 0.2}},
        )
        assert r.status_code == 422
        assert r.json()["code"] == "no_admissible_point"

    def test_root_given(self, client):
        r = client.post(
            "/design/control-mid",
            json={"n": 2, "m": 0, "a": [39.478, 0], "given": {"s0": -2.859}},
        )
        assert r.status_code == 200
        assert r.json()[0]["solved_parameter"] == pytest.approx(0.12, abs=1e-3)

    def test_bad_given(self, client):
        r = client.post(
            "/design/control-mid",
            json={"n": 2, "m": 0, "a": [39.478, 0], "given": {"x": 1.0}},
        )
        assert r.status_code == 422


class TestAdmissibility:
    def test_neutral_contour(self, client):
        r = client.post(
            "/admissibility",
            json={
                "n": 2,
                "m": 1,
                "a": [1, 1],
                "s0_min": -10,
                "tau_max": 3,
                "grid": [400, 400],
            },
        )
        assert r.status_code == 200
        body = r.json()
        top = max(p[1] for poly in body["polylines"] for p in poly)
        assert top == pytest.approx(1.6, abs=0.1)
        assert body["grid_shape"] == [400, 400]

    def test_oscillator_contour_matches_parabola(self, client):
        r = client.post(
            "/admissibility",
            json={
                "n": 2,
                "m": 0,
                "a": [39.478, 0],
                "s0_min": -20,
                "tau_max": 0.2,
                "grid": [200, 200],
            },
        )
        assert r.status_code == 200
        pts = [p for poly in r.json()["polylines"] for p in poly]
        assert pts
        for s0, tau in pts[:: max(1, len(pts) // 50)]:
            f = 2.0 * s0 + tau * (s0**2 + 39.478)
            assert abs(f) <= 0.35 * (1.0 + s0**2)

    def test_bad_window(self, client):
        r = client.post(
            "/admissibility",
            json={"n": 2, "m": 1, "a": [1, 1], "s0_min": -10, "tau_max": -1},
        )
        assert r.status_code == 422
        assert r.json()["code"] == "bad_input"


class TestRoots:
    TRIPLE = {"n": 2, "m": 0, "a": [2, -2], "b": [-2], "tau": 1}

    def test_triple_root(self, client):
        r = client.post(
            "/roots",
            json={
                "q": self.TRIPLE,
                "rect": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1},
            },
        )
        assert r.status_code == 200
        body = r.json()
        assert body["winding_count"] == 3
        assert len(body["roots"]) == 1
        re_, im_, mult, resid = body["roots"][0]
        assert mult == 3
        assert math.hypot(re_, im_) < 1e-8

    def test_byte_identical_repeats(self, client):
        payload = {
            "q": self.TRIPLE,
            "rect": {"x_min": -1, "x_max": 1, "y_min": -1, "y_max": 1},
        }
        r1 = client.post("/roots", json=payload)
        r2 = client.post("/roots", json=payload)
        assert r1.content == r2.content


class TestSensitivity:
    def test_seven_root_sets(self, client, oscillator_q):
        r = client.post(
            "/sensitivity",
            json={
                "q": oscillator_q.to_dict(),
                "rect": {"x_min": -3.86, "x_max": -1.86, "y_min": -1, "y_max": 1},
                "epsilon": 0.001,
                "K": 3,
            },
        )
        assert r.status_code == 200
        per_k = r.json()["per_k"]
        assert sorted(per_k, key=int) == ["-3", "-2", "-1", "0", "1", "2", "3"]
        assert all(v["roots"] for v in per_k.values())

    def test_invalid_perturbation(self, client, oscillator_q):
        r = client.post(
            "/sensitivity",
            json={
                "q": oscillator_q.to_dict(),
                "rect": {"x_min": -3.86, "x_max": -1.86, "y_min": -1, "y_max": 1},
                "epsilon": 0.05,
                "K": 3,
            },
        )
        assert r.status_code == 422
        assert r.json()["code"] == "invalid_perturbation"


class TestSimulate:
    def test_ode(self, client):
        r = client.post(
            "/simulate",
            json={
                "q": {"n": 1, "m": 0, "a": [1], "b": [0], "tau": 1},
                "ic": {"constant": 1},
                "T": 1,
                "steps": 1000,
            },
        )
        assert r.status_code == 200
        body = r.json()
        assert body["y"][-1] == pytest.approx(math.exp(-1.0), abs=1e-3)
        assert body["h"] == pytest.approx(1e-3)

    def test_designed_trajectory_decays(self, client, oscillator_q):
        r = client.post(
            "/simulate",
            json={
                "q": oscillator_q.to_dict(),
                "ic": {"constant": 1},
                "T": 5,
                "steps": 1000,
            },
        )
        assert r.status_code == 200
        y = r.json()["y"]
        assert abs(y[-1]) < abs(y[0])

    def test_blow_up_maps_to_api_error(self, client):
        r = client.post(
            "/simulate",
            json={
                "q": {"n": 1, "m": 0, "a": [-3], "b": [0], "tau": 1},
                "ic": {"constant": 1},
                "T": 500,
                "steps": 100,
            },
        )
        assert r.status_code == 422
        body = r.json()
        assert body["code"] == "blow_up"
        assert body["details"]["time"] > 0

    def test_transport_decimation(self, client):
        r = client.post(
            "/simulate",
            json={
                "q": {"n": 1, "m": 0, "a": [1], "b": [0], "tau": 1},
                "ic": {"constant": 1},
                "T": 200,
                "steps": 1000,
            },
        )
        assert r.status_code == 200
        body = r.json()
        assert len(body["t"]) <= 100_000
        assert body["t"][-1] >= 200.0 - 2 * body["h"]

    def test_bad_ic(self, client):
        r = client.post(
            "/simulate",
            json={
                "q": {"n": 1, "m": 0, "a": [1], "b": [0], "tau": 1},
                "ic": {"mystery": 1},
                "T": 1,
            },
        )
        assert r.status_code == 422
        assert r.json()["code"] == "bad_input"


class TestDeadlines:
    def test_deadline_exceeded_includes_partial(self, client):
        r = client.post(
            "/roots",
            json={
                "q": {"n": 2, "m": 0, "a": [39.478, 0], "b": [-33.813], "tau": 0.12},
                "rect": {"x_min": -500, "x_max": 500, "y_min": -500, "y_max": 500},
                "deadline_ms": 1,
            },
        )
        assert r.status_code == 408
        body = r.json()
        assert body["code"] == "deadline_exceeded"
        assert "details" in body and "partial" in body["details"]

    def test_generous_deadline_succeeds(self, client):
        r = client.post(
            "/design/generic-mid",
            json={"n": 1, "m": 0, "tau": 1, "s0": 0, "deadline_ms": 60_000},
        )
        assert r.status_code == 200


class TestSerializationContract:
    def test_17_digit_numbers_lossless(self, client):
        r = client.post(
            "/design/generic-crrid",
            json={"n": 1, "m": 0, "tau": 1, "roots": [-1, -2]},
        )
        raw = r.content.decode()
        parsed = json.loads(raw)
        # round-trip: parsing and re-serializing with repr loses nothing
        b0 = parsed["quasipolynomial"]["b"][0]
        assert b0 == float(repr(b0))
        assert "e" not in raw.split('"b":[')[1][:4]  # plain decimal notation

    def test_non_finite_margin_serializes_as_null(self, client, oscillator_q):
        # infinity (isolated-root dominance margin) must not leak into JSON
        r = client.post(
            "/roots",
            json={
                "q": oscillator_q.to_dict(),
                "rect": {"x_min": 2, "x_max": 3, "y_min": -1, "y_max": 1},
            },
        )
        assert r.status_code == 200
        assert r.json()["window_abscissa"] is None  # empty window: -inf -> null
