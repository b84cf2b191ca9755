import json
import math
import os
import subprocess

import pytest

import momentlab as ml


@pytest.fixture(scope="module")
def g2():
    return ml.geometric()


def test_model(g2):
    assert g2.name == "geometric2"
    assert g2.coeff(3) == (8.0, 0.0)
    assert g2.shifted().coeff(0) == (2.0, 0.0)
    with pytest.raises(ml.ConfigError):
        ml.geometric(ratio=1.0)


def test_eval_pq(g2):
    p, q = ml.eval_pq(g2, 0.0, 2)
    assert [complex(x) for x in p] == [1, 0, -0.5]
    assert [complex(x) for x in q] == [0, 1, 0]


def test_nevanlinna(g2):
    d = ml.nevanlinna(g2, 1.0, 1.0)
    assert (d.A, d.B, d.C, d.D) == (0, -1, 1, 0)
    v = ml.nevanlinna(g2, 1.0, 0.0)
    assert abs(v.det_residual()) < 1e-9
    n5s = ml.nevanlinna_partial(g2, 1.0, 0.0, 5)
    n5d = ml.nevanlinna_determinant(g2, 1.0, 0.0, 5)
    assert abs(n5s.D - n5d.D) <= 1e-10 * max(1.0, abs(n5s.D))


def test_measure_roundtrip(g2):
    mu = ml.measure(g2, math.inf, (-8.0, 8.0))
    assert mu.captured_mass > 0.999
    assert ml.stieltjes_residual(g2, mu) < 1e-5
    back = ml.measure_from_json(mu.to_json())
    assert back.points == mu.points
    assert back.masses == mu.masses
    assert math.isinf(back.t)


def test_zeros(g2):
    zs = ml.find_zeros(g2, "D", 0.0, (-0.1, 0.1))
    assert len(zs) == 1 and abs(zs[0]) < 1e-12


def test_density(g2):
    rep = ml.density(g2, "P", 0.0, m_max=10, targets=["e0"])
    res = rep["residuals"]["e0"]
    assert len(res) == 10
    assert all(b <= a + 1e-12 for a, b in zip(res, res[1:]))
    assert res[-1] < res[0] / 10


def test_lemma32():
    r, closed = ml.lemma32_finite(4, [1.0, 1.0, 1.0], 3)
    assert r == pytest.approx(0.5, abs=1e-14)
    assert closed == pytest.approx(0.5, abs=1e-14)


def test_verify(g2):
    lines = ml.verify(g2, "identities")
    assert lines and all(ok for _, ok, _, _ in lines)


def test_csv_model(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("n,a,b\n0,1,0\n1,-2,0\n")
    with pytest.raises(ml.ConfigError, match="line 3"):
        ml.load_model(str(path))


@pytest.mark.skipif("MOMENTLAB_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_roundtrip():
    out = subprocess.run([os.environ["MOMENTLAB_CLI"], "nevanlinna", "--u", "1", "--v", "0"],
                         capture_output=True, text=True, check=True, env={**os.environ, "MOMENTLAB_CACHE": ""})
    j = json.loads(out.stdout)
    assert j["det_pass"] is True
    v = ml.nevanlinna(ml.geometric(), 1.0, 0.0)
    assert j["D"] == v.D.real
