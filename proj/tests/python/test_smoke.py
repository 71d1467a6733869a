"""Smoke tests of the python module: model math, simulation, both solvers."""

import json
import math
import os
import sys
import tempfile

import levyob


def test_vg_model_roundtrip():
    params = levyob.VGParams(nu_vg=0.3, sigma=0.2, theta=-0.1)
    eta_p, eta_n = levyob.vg_roots(params)
    assert eta_p > 0 > eta_n
    model = levyob.LevyModel.vg(params)
    model.set_drift(levyob.calibrate_drift(model, 0.05))
    assert abs(model.psi(-1j).real - 0.05) < 1e-10
    assert model.psi(0.0) == 0
    assert model.finite_variation()
    # hermitian symmetry on a small grid
    for xi in (0.5, 1.7, 4.0):
        a, b = model.psi(xi), model.psi(-xi)
        assert abs(b - a.conjugate()) < 1e-12
        assert a.real <= 1e-12


def test_cgmy_moment_error():
    model = levyob.LevyModel.cgmy(levyob.CGMYParams(C=1.0, G=5.0, M=0.5, Y=0.5))
    try:
        levyob.calibrate_drift(model, 0.01)
    except levyob.MomentError:
        pass
    else:
        raise AssertionError("expected MomentError for M < 1")


def test_simulation_shapes_and_determinism():
    model = levyob.LevyModel.vg(levyob.VGParams(0.3, 0.2, -0.1))
    model.set_drift(levyob.calibrate_drift(model, 0.05))
    a = levyob.simulate_paths(model, x0=0.0, T=1.0, n_steps=16, n_paths=64, seed=7)
    b = levyob.simulate_paths(model, x0=0.0, T=1.0, n_steps=16, n_paths=64, seed=7)
    assert a.states.shape == (64, 17)
    assert (a.states == b.states).all()
    assert a.sigma2_eps > 0

    mart = levyob.martingale_check(model, rate=0.05, T=1.0, n_paths=20000, seed=3)
    assert abs(mart.mean - 1.0) <= 3.0 * mart.std_error + mart.bias_bound


def test_grid_solver_put():
    model = levyob.LevyModel.vg(levyob.VGParams(0.3, 0.2, -0.1))
    model.set_drift(levyob.calibrate_drift(model, 0.05))
    spec = levyob.ObstacleProblemSpec.perpetual_put(1.0, 0.05, -3.0, 3.0)
    grid = levyob.solve_stationary_grid(spec, model, n_nodes=257)
    values = grid.values
    assert values.shape == (1, 257)
    # value dominates the obstacle
    for i, x in enumerate(grid.x_grid):
        assert values[0, i] >= spec.obstacle(0.0, x) - 1e-10
    fb = levyob.free_boundary(grid, spec)
    assert not fb.empty_contact
    assert len(fb.slices[0].x_star) == 1
    assert -1.0 < fb.slices[0].x_star[0] < 0.0

    rep = levyob.regularity_report(grid, spec)
    assert 0.85 <= rep.alpha_x <= 1.05
    assert rep.condition_c0_ge_lip


def test_mc_solver_and_dpp():
    model = levyob.LevyModel.vg(levyob.VGParams(0.3, 0.2, -0.1))
    model.set_drift(levyob.calibrate_drift(model, 0.05))
    spec = levyob.ObstacleProblemSpec.perpetual_put(1.0, 0.05, -3.0, 3.0)
    grid = levyob.solve_stationary_grid(spec, model, n_nodes=257)
    est = levyob.solve_stationary_mc(spec, model, x=0.0, n_paths=4000, n_steps=192,
                                     seed=5)
    ref = grid.interpolate(0, 0.0)
    assert abs(est.value - ref) <= max(
        0.12 * ref, 3.0 * est.std_error + est.bias_horizon + 0.01 * ref)

    dpp = levyob.dpp_check(spec, model, grid, x=-2.0, r_ball=0.3, n_paths=400,
                           seed=4)
    assert dpp.discrepancy <= 1e-6


def test_evolution_solver():
    model = levyob.LevyModel.vg(levyob.VGParams(0.3, 0.2, -0.1))
    model.set_drift(levyob.calibrate_drift(model, 0.05))
    spec = levyob.ObstacleProblemSpec.american_put(1.0, 0.05, 0.5, -3.0, 3.0)
    grid = levyob.solve_evolution_grid(spec, model, n_nodes=129, n_time=64)
    values = grid.values
    assert values.shape == (65, 129)
    # terminal condition is the payoff, earlier slices dominate later ones
    for i, x in enumerate(grid.x_grid):
        assert values[-1, i] == spec.obstacle(spec.horizon_T, x)
    assert (values[0] >= values[-1] - 1e-9).all()


def test_config_pipeline(tmp_path=None):
    out_dir = tempfile.mkdtemp(prefix="levyob_smoke_")
    config = {
        "schema": 1,
        "model": {"family": "vg", "nu_vg": 0.3, "sigma": 0.2, "theta": -0.1,
                  "rate": 0.05},
        "problem": {"kind": "stationary", "payoff": "put", "strike": 1.0,
                    "domain_padding": 6.0},
        "solver": {"grid_n": 129, "seed": 2},
        "outputs": {"dir": out_dir},
    }
    ok = levyob.run_pipeline("solve", json.dumps(config), out_dir)
    assert ok
    for name in ("value.csv", "boundary.csv", "regularity.json", "run.json"):
        assert os.path.exists(os.path.join(out_dir, name)), name
    with open(os.path.join(out_dir, "run.json")) as fh:
        run = json.load(fh)
    assert run["seed"] == 2
    assert "config_hash" in run


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} python smoke tests passed")


if __name__ == "__main__":
    main()
