import json
import math
import os
import subprocess

import numpy as np
import pytest

import jorbit_py as jb


def cli(*args):
    exe = os.environ["JORBIT_CLI"]
    return subprocess.run([exe, *args], capture_output=True, text=True)


def test_build_and_axioms():
    A = jb.build("herm:2:real")
    assert A.dim == 3
    assert A.kind == "jordan"
    assert A.rank == 2
    ax = A.axioms()
    assert ax["commutative"] and ax["jordan_identity"] and ax["has_unit"]
    u = A.unit
    x = np.array([0.3, -1.2, 0.7])
    assert np.allclose(A.product(u, x), x, atol=1e-12)


def test_spectral_against_numpy():
    A = jb.build("herm:2:real")
    rng = np.random.default_rng(3)
    x = rng.normal(size=3)
    sd = A.spectral(x)
    lam = np.sort(np.asarray(sd["coefficients"]))
    recon = sum(c * np.asarray(f) for c, f in zip(sd["coefficients"], sd["frame"]))
    assert np.allclose(recon, x, atol=1e-9)
    # eigenvalues of l_x are the lam_i and their pairwise midpoints
    lx = np.sort(np.linalg.eigvalsh(A.left_mult(x)))
    expected = np.sort([lam[0], lam[1], 0.5 * (lam[0] + lam[1])])
    assert np.allclose(lx, expected, atol=1e-9)


def test_fisher_rao_values():
    A = jb.build("rn:4")
    xi = np.array([0.5, 1.0, 2.0, 0.25])
    for i in range(4):
        e = np.eye(4)[i]
        assert abs(A.metric_value(xi, e, e) - 1.0 / xi[i]) < 1e-9
    assert abs(A.metric_value(xi, np.eye(4)[0], np.eye(4)[2])) < 1e-9


def test_block_coefficients_herm_complex():
    A = jb.build("herm:2:complex")
    f = A.frame
    xi = 3.0 * np.asarray(f[0]) + 1.0 * np.asarray(f[1])
    m = A.metric(xi)
    blocks = m["block_coefficients"]
    assert abs(blocks[(0, 0)] - 2.0 / 6.0) < 1e-9
    assert abs(blocks[(0, 1)] - 0.5) < 1e-9
    assert abs(blocks[(1, 1)] - 1.0) < 1e-9
    assert m["orbit_dim"] == A.dim
    assert m["positive"] == A.dim and m["negative"] == 0


def test_spin_metric_oracle():
    A = jb.build("spin:3")
    t0, s0 = 1.2, 0.5
    xi = np.zeros(4)
    xi[0], xi[1] = t0, s0
    v = np.array([0.3, -0.7, 0.4, 0.1])
    w = np.array([-1.0, 0.2, 0.8, -0.3])
    oracle = (
        (v[0] + v[1]) * (w[0] + w[1]) / (2 * (t0 + s0))
        + (v[0] - v[1]) * (w[0] - w[1]) / (2 * (t0 - s0))
        + (v[2:] @ w[2:]) / t0
    )
    assert abs(A.metric_value(xi, v, w) - oracle) < 1e-9


def test_orbit_classification_and_regularity():
    A = jb.build("herm:2:real")
    f = A.frame
    xi = np.asarray(f[0]) - np.asarray(f[1])
    c = A.classify(xi)
    assert (c["positive"], c["negative"]) == (1, 1)
    assert not c["regular_orbit"]
    assert c["cone_status"] == "exterior"
    assert not A.is_regular(xi)
    with pytest.raises(ArithmeticError):
        A.metric(xi)


def test_natural_gradient_entropy():
    A = jb.build("rn:3")
    xi = np.array([0.4, 1.1, 2.0])
    q = np.array([0.2, 0.5, 0.3])
    df = np.log(xi / q) + 1.0
    assert np.allclose(A.natural_gradient(xi, df), xi * df, atol=1e-12)


def test_involutivity_matches_regularity():
    A = jb.build("herm:2:complex")
    f = A.frame
    good = 2.0 * np.asarray(f[0]) + 1.0 * np.asarray(f[1])
    bad = np.asarray(f[0]) - np.asarray(f[1])
    assert A.involutive(good)["involutive"]
    assert not A.involutive(bad)["involutive"]


def test_input_validation():
    A = jb.build("rn:3")
    with pytest.raises(ValueError):
        A.product(np.zeros(2), np.zeros(3))
    with pytest.raises(ValueError):
        jb.build("herm:0:real")


def test_cli_metric_example():
    r = cli("metric", "--algebra", "herm:2:complex", "--xi", "diag:3,1")
    assert r.returncode == 0, r.stderr
    env = json.loads(r.stdout)
    assert env["schema"] == "jordan-orbit/1"
    blocks = env["metric"]["blockCoefficients"]
    off = [b["value"] for b in blocks if b["a"] != b["i"]]
    assert off and all(abs(v - 0.5) < 1e-9 for v in off)


def test_cli_orbit_example():
    r = cli("orbit", "--algebra", "herm:2:real", "--xi", "diag:1,-1")
    assert r.returncode == 0, r.stderr
    env = json.loads(r.stdout)
    orbit = env["orbit"]
    assert orbit["positive"] == 1 and orbit["negative"] == 1
    assert orbit["regularOrbit"] is False


def test_cli_exit_codes():
    assert cli("metric", "--algebra", "no-such-file:9", "--xi", "rand").returncode == 2
    assert cli("metric", "--algebra", "herm:2:real", "--xi", "diag:1,-1").returncode == 3


def test_cli_verify_is_deterministic():
    a = cli("verify", "--algebra", "rn:5", "--seed", "7")
    b = cli("verify", "--algebra", "rn:5", "--seed", "7")
    assert a.returncode == 0, a.stdout + a.stderr
    assert a.stdout == b.stdout


def test_cli_pole_sweep_csv():
    r = cli("sweep", "pole", "--algebra", "herm:2:complex")
    assert r.returncode == 0, r.stderr
    lines = r.stdout.strip().splitlines()
    assert lines[0] == "eps,maxGramEntry"
    rows = [tuple(map(float, ln.split(","))) for ln in lines[1:]]
    assert len(rows) == 5
    prods = [e * g for e, g in rows]
    assert all(abs(p / prods[0] - 1.0) < 0.05 for p in prods)


def test_cli_curve_speed_constant():
    r = cli("sweep", "curve", "--algebra", "rn:5", "--nplus", "2")
    assert r.returncode == 0, r.stderr
    lines = r.stdout.strip().splitlines()
    assert lines[0] == "t,speed"
    speeds = [float(ln.split(",")[1]) for ln in lines[1:]]
    assert all(abs(s - 8.0) < 1e-8 for s in speeds)
