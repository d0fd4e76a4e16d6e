"""Serialization round trips, the HTTP API, and the CLI."""
import json
import random
import subprocess
import sys
from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

from twopers.errors import InputError
from twopers.model import parse_firep
from twopers.query import LineSpec, query_barcode
from twopers.serialize import load, save
from twopers.service import create_app
from twopers.templates import compute_augmented_arrangement

from conftest import sample_lines
from test_betti import MODULE_M

TRIANGLE_BIF = (
    "bifiltration\n"
    "0 ; 0 0\n1 ; 0 0\n2 ; 0 0\n"
    "0 1 ; 1 1\n0 2 ; 1 1\n1 2 ; 1 1\n"
    "0 1 2 ; 2 2\n"
)


class TestSerialization:
    def test_round_trip_worked_module(self):
        rep = parse_firep(MODULE_M)
        aug = compute_augmented_arrangement(rep)
        data = save(aug)
        loaded = load(data)
        assert save(loaded) == data  # bit-exact round trip
        rng = random.Random(211)
        for line in sample_lines(rng, aug, 10):
            assert query_barcode(loaded, line).entries == query_barcode(aug, line).entries

    def test_truncated_rejected(self):
        aug = compute_augmented_arrangement(parse_firep(MODULE_M))
        data = save(aug)
        with pytest.raises(InputError, match="corrupt|missing"):
            load(data[: len(data) // 2])

    def test_version_mismatch_rejected(self):
        aug = compute_augmented_arrangement(parse_firep(MODULE_M))
        doc = json.loads(save(aug))
        doc["version"] = 999
        with pytest.raises(InputError, match="version"):
            load(json.dumps(doc).encode())

    def test_missing_section_named(self):
        aug = compute_augmented_arrangement(parse_firep(MODULE_M))
        doc = json.loads(save(aug))
        del doc["templates"]
        with pytest.raises(InputError, match="templates"):
            load(json.dumps(doc).encode())

    def test_empty_module_round_trip(self):
        aug = compute_augmented_arrangement(parse_firep("firep\n0 0 0\n"))
        loaded = load(save(aug))
        assert loaded.cell_count == 1
        assert query_barcode(loaded, LineSpec.finite(1, 0)).entries == ()


@pytest.fixture()
def client():
    return TestClient(create_app())


class TestApi:
    def test_post_and_query_barcode(self, client):
        r = client.post("/modules?degree=0", content=TRIANGLE_BIF)
        assert r.status_code == 201
        body = r.json()
        assert body["kappa"] >= 1 and body["cell_count"] >= 1
        mid = body["id"]
        r = client.get(f"/modules/{mid}/barcode?kind=finite&slope=1&intercept=0")
        assert r.status_code == 200
        assert r.json()["barcode"]

    def test_worked_module_barcode_two_essentials(self, client):
        mid = client.post("/modules", content=MODULE_M).json()["id"]
        r = client.get(f"/modules/{mid}/barcode?kind=finite&slope=1&intercept=0")
        bars = r.json()["barcode"]
        assert bars == [{"birth": ["1/1", "1/1"], "death": None, "multiplicity": 2}]

    def test_betti_endpoint_matches_worked_table(self, client):
        mid = client.post("/modules", content=MODULE_M).json()["id"]
        r = client.get(f"/modules/{mid}/betti")
        doc = r.json()
        grid_x = [Fraction(v) for v in doc["grid"]["xs"]]
        grid_y = [Fraction(v) for v in doc["grid"]["ys"]]
        xi0 = {
            (grid_x[i - 1], grid_y[j - 1]): v for i, j, v in doc["xi0"]
        }
        assert xi0 == {
            (Fraction(1), Fraction(0)): 1,
            (Fraction(0), Fraction(1)): 1,
            (Fraction(1), Fraction(1)): 1,
        }
        assert [tuple(e[:2]) for e in doc["xi1"]] == [(2, 2)]
        assert doc["xi2"] == []

    def test_negative_slope_is_400(self, client):
        mid = client.post("/modules", content=MODULE_M).json()["id"]
        r = client.get(f"/modules/{mid}/barcode?kind=finite&slope=-1&intercept=0")
        assert r.status_code == 400

    def test_unknown_id_is_404(self, client):
        assert client.get("/modules/nope/betti").status_code == 404

    def test_invalid_input_is_422(self, client):
        r = client.post("/modules", content="bifiltration\n0 1 ; 0 0\n")
        assert r.status_code == 422
        assert "face" in r.json()["detail"]

    def test_vertical_barcode(self, client):
        mid = client.post("/modules", content=MODULE_M).json()["id"]
        r = client.get(f"/modules/{mid}/barcode?kind=vertical&x=2")
        assert r.status_code == 200

    def test_determinism_byte_identical(self, client):
        mid = client.post("/modules", content=MODULE_M).json()["id"]
        url = f"/modules/{mid}/barcode?kind=finite&slope=3/2&intercept=-1/3"
        assert client.get(url).content == client.get(url).content

    def test_arrangement_endpoint(self, client):
        mid = client.post("/modules", content=MODULE_M).json()["id"]
        doc = client.get(f"/modules/{mid}/arrangement").json()
        assert ["1/1", "1/1"] in doc["anchors"]
        assert doc["faces"]

    def test_coarsening_params(self, client):
        r = client.post("/modules?degree=1&xbins=3&ybins=3", content=TRIANGLE_BIF)
        assert r.status_code == 201
        assert r.json()["kappa"] <= 9


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "twopers.cli", *args],
        capture_output=True,
        text=True,
    )


class TestCli:
    def test_compute_then_query_smoke(self, tmp_path):
        src = tmp_path / "mod.firep"
        src.write_text(MODULE_M)
        out = tmp_path / "mod.aug"
        r = run_cli("compute", str(src), "-d", "0", "-o", str(out))
        assert r.returncode == 0, r.stderr
        r = run_cli("query", str(out), "--slope", "1", "--intercept", "0", "--json")
        assert r.returncode == 0, r.stderr
        doc = json.loads(r.stdout)
        assert doc["barcode"][0]["multiplicity"] == 2

    def test_negative_slope_exit_1(self, tmp_path):
        src = tmp_path / "mod.firep"
        src.write_text(MODULE_M)
        out = tmp_path / "mod.aug"
        assert run_cli("compute", str(src), "-o", str(out)).returncode == 0
        r = run_cli("query", str(out), "--slope", "-1", "--intercept", "0")
        assert r.returncode == 1
        assert "slope" in r.stderr

    def test_betti_worked_values(self, tmp_path):
        src = tmp_path / "mod.firep"
        src.write_text(MODULE_M)
        r = run_cli("betti", str(src), "--json")
        assert r.returncode == 0, r.stderr
        doc = json.loads(r.stdout)
        assert [tuple(e[:2]) for e in doc["xi1"]] == [(2, 2)]

    def test_bad_input_exit_1(self, tmp_path):
        src = tmp_path / "bad.txt"
        src.write_text("not a module\n")
        assert run_cli("betti", str(src)).returncode == 1

    def test_compute_with_bins(self, tmp_path):
        src = tmp_path / "mod.bif"
        src.write_text(TRIANGLE_BIF)
        out = tmp_path / "mod.aug"
        r = run_cli(
            "compute", str(src), "-d", "1", "--xbins", "3", "--ybins", "3", "-o", str(out)
        )
        assert r.returncode == 0, r.stderr
        assert out.exists()
