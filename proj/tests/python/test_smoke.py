import math

import numpy as np
import pytest

import harnack


def torus(n=1, N=64):
    return harnack.flat_torus(n, [2 * math.pi] * n, [N] * n)


def test_bochner_and_trace_on_catalog():
    m = torus(2)
    for name in harnack.elliptic_catalog(m):
        u = harnack.elliptic_mms(name, m)["solution"]
        assert np.abs(harnack.bochner_residual(m, u)).max() <= 1e-8
        assert harnack.hessian_trace_margin(m, u).min() >= -1e-10


def test_gradient_bound_for_shifted_cosine():
    m = torus()
    x = m.points()[:, 0]
    source = np.cos(x)
    r = harnack.verify_theorem1(m, source, shift=1.0, b=0.5)
    assert r["holds"] and r["statement_holds"]
    assert r["res_solver"] <= 1e-8
    assert r["sup_Q"] <= r["rhs"]


def test_heat_run_tracks_manufactured_solution():
    m = torus()
    run = harnack.run_heat_mms("driven", m, T=0.5, dt=1e-3)
    err = np.abs(run["final_state"] - run["exact_final_state"]).max()
    assert err <= 1e-6
    assert math.isfinite(run["space_time_sup_F"])
    assert set(run["structural_constants"]) >= {"min_u", "sup_A", "a", "T"}


def test_li_yau_constant_data():
    m = torus()
    run = harnack.run_heat(m, np.full(m.node_count, 2.0), T=0.2)
    assert all(abs(r["sup_F"]) <= 1e-9 for r in run["records"])


def test_sphere_operators():
    s = harnack.unit_sphere(3)
    z = s.points()[:, 2]
    f, g = z + s.points()[:, 0] * s.points()[:, 1], np.exp(z)
    lhs = harnack.integrate(s, f * harnack.laplace_beltrami(s, g))
    rhs = harnack.integrate(s, harnack.laplace_beltrami(s, f) * g)
    assert abs(lhs - rhs) <= 1e-6 * abs(lhs)


def test_bad_input_raises_value_error():
    with pytest.raises(ValueError):
        harnack.run_heat(torus(), np.full(64, 2.0), a=0.5)


def test_cli_exit_code_for_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("subcommand = heat\na = 0.5\n")
    code, _, err = harnack.run_cli(["--config", str(cfg)])
    assert code == 2 and "'a'" in err


def test_format_number_round_trips():
    for v in (0.1, 1e-300, 2.0 / 3.0):
        assert float(harnack.format_number(v)) == v
