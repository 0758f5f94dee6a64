import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

from tflattice.lattice import Grid, delta_signal, random_signal
from tflattice.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


class TestHealth:
    def test_ok(self, client):
        r = client.get("/health")
        assert r.status_code == 200 and r.json() == {"status": "ok"}


class TestCheckEndpoint:
    def test_sjostrand_point(self, client):
        r = client.post("/check", json={"kind": "bpwm", "p": "inf", "q": "1",
                                        "p1": "2", "q1": "2", "p2": "2", "q2": "2"})
        assert r.status_code == 200
        assert r.json()["bounded"] is True

    def test_brwf_failure_lists_first_slot(self, client):
        r = client.post("/check", json={"kind": "brwf", "m": 1, "p": "1", "q": "1",
                                        "pj": ["2", "2"], "qj": ["2", "2"]})
        body = r.json()
        assert body["bounded"] is False
        assert "cd1" in body["failed"]

    def test_missing_field_is_422(self, client):
        r = client.post("/check", json={"kind": "brwm", "m": 1, "p": "2"})
        assert r.status_code == 422

    def test_unknown_kind_is_422(self, client):
        r = client.post("/check", json={"kind": "nope", "p": "2", "q": "2"})
        assert r.status_code == 422

    def test_unknown_key_rejected(self, client):
        r = client.post("/check", json={"kind": "brwm", "bogus": 1})
        assert r.status_code == 422

    def test_exact_fractions(self, client):
        r = client.post("/check", json={"kind": "bessel-bpwm", "s": "1/4", "d": 1,
                                        "p1": "4", "q1": "2", "p2": "4", "q2": "2"})
        assert r.json()["bounded"] is True
        r = client.post("/check", json={"kind": "bessel-bpwm", "s": "0.2499",
                                        "d": 1, "p1": "4", "q1": "2", "p2": "4",
                                        "q2": "2"})
        assert r.json()["bounded"] is False


class TestScanEndpoint:
    def test_single_point(self, client):
        req = {"kind": "bpwm",
               "sweeps": [{"name": "p", "start": "1/2", "stop": "1/2", "count": 1}],
               "fixed": {"q": "1", "p1": "2", "q1": "2", "p2": "2", "q2": "2"}}
        r = client.post("/scan", json=req)
        assert r.status_code == 200
        assert len(r.json()["rows"]) == 1

    def test_reversed_range_rejected(self, client):
        req = {"kind": "bpwm",
               "sweeps": [{"name": "p", "start": "1", "stop": "0", "count": 3}],
               "fixed": {"q": "1", "p1": "2", "q1": "2", "p2": "2", "q2": "2"}}
        assert client.post("/scan", json=req).status_code == 422

    def test_diagonal_region_121_rows(self, client):
        req = {"kind": "bpwm",
               "sweeps": [{"name": "p", "start": "0", "stop": "1", "count": 11},
                          {"name": "q", "start": "0", "stop": "1", "count": 11}],
               "fixed": {"p1": "2", "q1": "2", "p2": "2", "q2": "2"}}
        r = client.post("/scan", json=req)
        rows = r.json()["rows"]
        assert len(rows) == 121
        # bounded iff 1/p >= 1/q' = 1 - 1/q (diagonal all-2 region)
        from fractions import Fraction
        for row in rows:
            rp, rq = Fraction(row[0]), Fraction(row[1])
            expect = rp >= 1 - rq and rq >= Fraction(1, 2)
            assert (row[2] == "true") == expect, row

    def test_csv_shape(self, client):
        req = {"kind": "conv", "m": 1,
               "sweeps": [{"name": "q", "start": "0", "stop": "1", "count": 3}],
               "fixed": {"qj": "1,1"}}
        r = client.post("/scan", json=req)
        lines = r.json()["csv"].splitlines()
        assert lines[0] == "recip_q,bounded,failed,boundary"
        assert len(lines) == 4


class TestNormEndpoint:
    def test_lp_norm(self, client):
        f = delta_signal(Grid(1, 8, 1.0), 0)
        req = {"space": "lp", "p": "2", "signal": f.to_json_dict()}
        r = client.post("/norm", json=req)
        assert math.isclose(r.json()["value"], 1.0)

    def test_modulation_matches_library(self, client):
        from tflattice.lattice import default_window
        from tflattice.norms import modulation_norm
        g = Grid(1, 16, 1.0)
        f = random_signal(g, 0)
        req = {"space": "modulation", "p": "2", "q": "2",
               "signal": f.to_json_dict()}
        r = client.post("/norm", json=req)
        expect = modulation_norm(f, default_window(g), 2, 2)
        assert math.isclose(r.json()["value"], expect, rel_tol=1e-12)

    def test_bad_signal_is_422(self, client):
        req = {"space": "lp", "p": "2",
               "signal": {"d": 1, "N": 8, "alpha": 1.0, "re": [1.0], "im": [0.0]}}
        assert client.post("/norm", json=req).status_code == 422


class TestRihaczekEndpoint:
    def test_check_identity(self, client):
        req = {"mode": "check-identity", "m": 1, "N": 8, "seed": 7}
        r = client.post("/rihaczek", json=req)
        body = r.json()
        assert body["pass"] is True and body["max_residual"] < 1e-9

    def test_compute_roundtrip(self, client):
        g = Grid(1, 4, 1.0)
        sig_g = random_signal(g, 1)
        f = random_signal(g, 2)
        req = {"mode": "compute", "g": sig_g.to_json_dict(),
               "fs": [f.to_json_dict()], "m": 1}
        r = client.post("/rihaczek", json=req)
        body = r.json()
        assert body["m"] == 1 and len(body["re"]) == 16
        from tflattice.rihaczek import PhaseSpaceSignal, rihaczek
        back = PhaseSpaceSignal.from_json_dict(body)
        expect = rihaczek(sig_g, [f])
        assert np.abs(back.values - expect.values).max() < 1e-12


class TestExperimentEndpoint:
    def test_khinchin(self, client):
        req = {"kind": "khinchin", "p": "2", "trials": 200, "seed": 0}
        r = client.post("/experiment", json=req)
        assert 0.8 <= r.json()["report"]["ratio"] <= 1.25

    def test_scaling_preset(self, client):
        req = {"kind": "scaling", "tuple_name": "unbounded-demo", "N": 256}
        r = client.post("/experiment", json=req)
        body = r.json()
        assert body["report"]["predicted"] == 1.0
        assert body["csv"].startswith("parameter,ratio")

    def test_unknown_preset_is_422(self, client):
        req = {"kind": "scaling", "tuple_name": "nope"}
        assert client.post("/experiment", json=req).status_code == 422

    def test_star_growth(self, client):
        req = {"kind": "star-growth", "q": "2", "qj": ["2", "2"],
               "sizes": [8, 16, 32, 64]}
        r = client.post("/experiment", json=req)
        assert abs(r.json()["report"]["slope"] - 0.5) < 0.1
