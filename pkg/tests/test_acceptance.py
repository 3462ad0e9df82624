"""Acceptance gate: one test per shipped guarantee, at the stated tolerances.

Each test is independent and self-contained; the conftest summary prints one
PASS/FAIL line per criterion after the run.
"""
import json
import math
import time

import numpy as np
import pytest

import oracles
from rotwave import (
    BracketError,
    GimbalLockError,
    MotionClass,
    ResonanceKind,
    bch,
    classify,
    classify_resonance,
    dexp_op,
    dexpinv_op,
    exp_rot,
    find_orthogonal_branch,
    fit_circle,
    integrate_euler,
    integrate_group,
    lifted_frequency,
    log_rot,
    periodic_part,
    primary_frequency,
    tip_trajectory,
)
from rotwave.cli import main
from rotwave.scenarios import build, verify_against_closed_form

EXAMPLES = ("example1", "example2", "example3", "example4", "example5")


def test_criterion_01():
    # composition agrees with the matrix product on 1e4 pairs with norms up
    # to 3 pi: Frobenius defect < 1e-10 and ball-class equality with the
    # matrix log, in under 5 s
    rng = np.random.default_rng(2024)
    xs = oracles.random_axis_vectors(rng, 10_000, 3 * np.pi)
    ys = oracles.random_axis_vectors(rng, 10_000, 3 * np.pi)
    start = time.perf_counter()
    worst = 0.0
    for x, y in zip(xs, ys):
        cls = bch(x, y)
        prod = exp_rot(x) @ exp_rot(y)
        worst = max(worst, float(np.linalg.norm(exp_rot(cls.vector) - prod)))
        assert cls.isclose(log_rot(prod), tol=1e-10)
    elapsed = time.perf_counter() - start
    assert worst < 1e-10
    assert elapsed < 5.0


def test_criterion_02():
    # dexpinv composed with dexp is the identity to 1e-10 across the ball
    # (and through the series switch: 100 samples below 1e-3)
    rng = np.random.default_rng(7)
    dirs = oracles.random_axis_vectors(rng, 1000, 1.0)
    dirs = dirs / np.linalg.norm(dirs, axis=1)[:, None]
    norms = np.concatenate([
        rng.uniform(1e-3, 2 * np.pi - 0.1, size=900),
        rng.uniform(1e-12, 1e-3, size=100),
    ])
    worst = 0.0
    for u, n in zip(dirs, norms):
        z = n * u
        defect = np.linalg.norm(dexpinv_op(z) @ dexp_op(z) - np.eye(3))
        worst = max(worst, float(defect))
    assert worst < 1e-10


def test_criterion_03():
    # the integrator reproduces every closed-form family over two relative
    # periods to 1e-7, across the lambda (and mu) grid, in under 30 s
    start = time.perf_counter()
    worst = 0.0
    for name in EXAMPLES:
        sc = build(name)
        for lam in (0.0, 1e-4, 1e-2):
            mus = [0.0, 0.01, 0.1, math.sqrt(lam)] if sc.takes_mu else [None]
            for mu in mus:
                dev = verify_against_closed_form(sc, lam, mu)
                worst = max(worst, dev)
    elapsed = time.perf_counter() - start
    assert worst < 1e-7
    assert elapsed < 30.0


def test_criterion_04():
    # case1 frequency vector is X0 + sqrt(lambda) X1 componentwise to 1e-6,
    # classified as a nonresonant order-one meander
    sc = build("case1")
    for lam in (0.01, 0.05):
        T = sc.period(lam)
        traj = integrate_group(sc.forcing(lam), lam, T, ref_dir=sc.frame.x0_dir)
        X = primary_frequency(traj, T)
        assert np.max(np.abs(X - np.array([math.sqrt(lam), 0.0, 2.0]))) < 1e-6
        rep = classify(sc.X0, sc.omega_bif, X, T, lam)
        assert rep.resonance.kind is ResonanceKind.NONRESONANT
        assert rep.motion is MotionClass.MEANDER_O1


def test_criterion_05():
    # case2 drift direction is orthogonal to the primary axis to 1e-6
    sc = build("case2")
    x0_hat = sc.frame.x0_dir
    for lam in (0.05, 0.1):
        T = sc.period(lam)
        traj = integrate_group(sc.forcing(lam), lam, T, ref_dir=x0_hat)
        X = primary_frequency(traj, T)
        defect = abs(float(X @ x0_hat)) / np.linalg.norm(X)
        assert defect < 1e-6


def test_criterion_06():
    # case3 is 1:1 resonant with order-one overlap on the primary axis
    sc = build("case3")
    lam = 0.05
    T = sc.period(lam)
    traj = integrate_group(sc.forcing(lam), lam, T, ref_dir=sc.frame.x0_dir)
    X = primary_frequency(traj, T)
    rep = classify(sc.X0, sc.omega_bif, X, T, lam)
    assert rep.resonance.kind is ResonanceKind.RESONANT and rep.resonance.k == 1
    assert rep.motion is MotionClass.SLOW_MEANDER_ABOUT_X0
    assert rep.ortho_defect > 0.1


def test_criterion_07():
    # tips sampled at t = i T, i = 0..5, lie on a circle whose axis is the
    # frequency direction X(lambda) to 1e-6, with rms residual < 1e-6 r
    grids = {"case1": (0.01, 0.05), "case2": (0.05, 0.1), "case3": (0.05,)}
    for name, lams in grids.items():
        sc = build(name)
        assert sc.r == 3.0
        for lam in lams:
            T = sc.period(lam)
            traj = integrate_group(sc.forcing(lam), lam, 5 * T, ref_dir=sc.frame.x0_dir)
            X = primary_frequency(traj, T)
            x_hat = X / np.linalg.norm(X)
            track = tip_trajectory(traj, sc.tip_x0, sc.r, [0.0], period=T)
            assert track.period_samples.shape == (6, 3)
            fit = fit_circle(track.period_samples, ref_axis=x_hat)
            assert np.linalg.norm(fit.axis - x_hat) < 1e-6, (name, lam)
            assert fit.rms_residual < 1e-6 * sc.r, (name, lam)


def test_criterion_08():
    # periodic-part scaling: the nonresonant exponent amplitude scales like
    # sqrt(lambda) (ratio 10 within 25% across a factor-100 lambda step); the
    # resonant lifted-norm gap decays at least like lambda^(1/4) within a
    # factor of 2 (one-sided: it may decay faster)
    def max_log_bf(lam):
        sc = build("example1")
        T = sc.period(lam)
        traj = integrate_group(sc.forcing(lam), lam, T, ref_dir=sc.frame.x0_dir)
        X = primary_frequency(traj, T)
        res = classify_resonance(sc.x0_norm, sc.omega_bif)
        Xf = lifted_frequency(X, 2 * np.pi / sc.omega_bif, sc.X0, 2 * np.pi / T, res)
        part = periodic_part(traj, X, Xf, T)
        return max(np.linalg.norm(part.log_Bf(t)) for t in np.linspace(0.0, T, 201))

    ratio = max_log_bf(1e-2) / max_log_bf(1e-4)
    assert 7.5 <= ratio <= 12.5

    def lifted_gap(lam):
        sc = build("example2")
        T = sc.period(lam)
        traj = integrate_group(sc.forcing(lam), lam, T, ref_dir=sc.frame.x0_dir)
        X = primary_frequency(traj, T)
        res = classify_resonance(sc.x0_norm, sc.omega_bif)
        Xf = lifted_frequency(X, 2 * np.pi / sc.omega_bif, sc.X0, 2 * np.pi / T, res)
        return abs(float(np.linalg.norm(Xf)) - sc.x0_norm)

    assert lifted_gap(1e-2) / lifted_gap(1e-4) >= math.sqrt(10.0) / 2.0


def test_criterion_09():
    # the orthogonal-drift branch sits at mu* = sqrt(lambda) to 1e-6 with a
    # vanishing objective; a family with no transverse response cannot
    # bracket and is rejected
    sc = build("example4")
    x0_hat = sc.frame.x0_dir
    for lam in (1e-4, 1e-2):
        mu_star = find_orthogonal_branch(sc.forcing_family, lam, (0.0, 0.3), sc.X0)
        assert abs(mu_star - math.sqrt(lam)) < 1e-6
        sig = sc.forcing(lam, mu_star)
        T = sig.period(lam)
        traj = integrate_group(sig, lam, T, ref_dir=x0_hat)
        g = float(traj.class_at(T).vector @ x0_hat) / T
        assert abs(g) < 1e-10

    degenerate = lambda lam, mu: build("example1").forcing(lam)
    with pytest.raises(BracketError):
        find_orthogonal_branch(degenerate, 1e-2, (0.0, 0.3), build("example1").X0)


def test_criterion_10():
    # the Euler-angle chart independently reproduces the Z-formulation
    # trajectory to 1e-6 over five periods; the chart refuses its singularity
    sc = build("case3")
    lam = 0.05
    sig = sc.forcing(lam)
    T = sc.period(lam)
    group = integrate_group(sig, lam, 5 * T, ref_dir=sc.frame.x0_dir)
    euler = integrate_euler(sig, lam, 5 * T, 0.5)
    worst = max(
        float(np.linalg.norm(euler.eval_A(t) - group.eval_A(t)))
        for t in np.linspace(0.0, 5 * T, 101)
    )
    assert worst < 1e-6
    with pytest.raises(GimbalLockError):
        integrate_euler(sig, lam, T, 0.0)


def test_criterion_11(tmp_path):
    # identical inputs produce byte-identical outputs across reruns
    for sub in ("r1", "r2"):
        d = tmp_path / sub
        rc = main([
            "simulate", "--scenario", "case1", "--lambda", "0.05",
            "--horizon", "2", "--out", str(d),
        ])
        assert rc == 0
        rc = main([
            "frequency", "--scenario", "case2", "--lambda", "0.05",
            "--horizon", "2", "--out", str(d / "freq.json"),
        ])
        assert rc == 0
    csv1 = (tmp_path / "r1" / "case1_lambda0.05.csv").read_bytes()
    csv2 = (tmp_path / "r2" / "case1_lambda0.05.csv").read_bytes()
    assert csv1 == csv2
    frq1 = (tmp_path / "r1" / "freq.json").read_bytes()
    frq2 = (tmp_path / "r2" / "freq.json").read_bytes()
    assert frq1 == frq2
    json.loads(frq1.decode())  # sanity: the frequency output is valid JSON
