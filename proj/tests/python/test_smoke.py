import math

import numpy as np
import pytest

import rabistark as rs


def dense_oracle(delta, g, u, kappa, cutoff):
    """Kronecker-product construction, permuted to the interleaved |n, s> order."""
    n = np.arange(cutoff + 1, dtype=float)
    a = np.diag(np.sqrt(n[1:]), 1)
    num = np.diag(n)
    sz = np.diag([-1.0, 1.0])  # index 0 is spin down
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    eye2, eyen = np.eye(2), np.eye(cutoff + 1)
    return (
        np.kron(num, eye2)
        + delta / 2 * np.kron(eyen, sz)
        + g * np.kron(a + a.T, sx)
        + u / 2 * np.kron(num, sz)
        + kappa * np.kron(num @ num, eye2)
    )


def test_hamiltonian_matches_dense_oracle():
    p = rs.ModelParams("completed", delta=0.8, g=0.3, u=1.3, kappa=0.07)
    h = rs.hamiltonian(p, 40)
    ref = dense_oracle(0.8, 0.3, 1.3, 0.07, 40)
    assert h.shape == ref.shape
    assert np.max(np.abs(h - ref)) <= 1e-15 * np.max(np.abs(ref))
    assert abs(rs.lowest_energies(p, 40, 1)[0] - np.linalg.eigvalsh(ref)[0]) <= 1e-10


def test_collapse_classification():
    energies, report = rs.converged_spectrum(rs.ModelParams(g=0.2, u=1.9), k=3)
    assert report["classification"] == "converged"
    assert len(energies) == 3
    _, report = rs.converged_spectrum(rs.ModelParams(g=0.2, u=2.2), k=3)
    assert report["classification"] == "unbounded_below"


def test_analytic_ground_energy_tracks_numerics():
    p = rs.ModelParams(g=0.2, u=1.0)
    energies, _ = rs.converged_spectrum(p, k=1, tol=1e-10)
    assert abs(rs.analytic_ground_energy(p) - energies[0]) <= 2e-2
    levels = rs.analytic_levels(p, 5)
    assert levels[0][1] == "negative" and levels[0][2] == 0
    assert all(a[0] <= b[0] for a, b in zip(levels, levels[1:]))


def test_co_limit_helpers():
    p = rs.ModelParams("completed", delta=200, g=0.1, u=0.0, kappa=0.05)
    assert rs.crossing_ladder(p, 3) == pytest.approx([2.1, 2.3, 2.5, 2.7])
    assert rs.co_excitation_energy(rs.ModelParams(delta=200, g=0.1, u=2.0))[1] == 0.0
    assert rs.slope_prediction(rs.ModelParams("completed", delta=1000, kappa=1e-3)) == pytest.approx(0.25)
    assert rs.analytic_mean_photon(3, 0.1, 1.0, 0.0) == pytest.approx(3.01)
    assert rs.solve_lambda(rs.ModelParams(delta=200, g=0.1, u=1.0), 0, 1, "co_limit") == pytest.approx(-0.1 / 200.5)


def test_errors_are_typed():
    with pytest.raises(rs.ValidationError):
        rs.ModelParams(g=-1.0)
    with pytest.raises(rs.RegimeError):
        rs.co_excitation_energy(rs.ModelParams(delta=1.0, g=0.1))
    with pytest.raises(rs.DivergenceError):
        rs.mean_photon_ground(rs.ModelParams(g=0.2, u=2.5))
    assert issubclass(rs.ValidationError, rs.Error)


def test_staircase_plateaus():
    p = rs.ModelParams("completed", delta=200, g=0.1, kappa=0.05)
    r = rs.staircase(p, 1.8, 2.6, 0.004)
    assert abs(r["edges"][0] - 2.1) <= 0.02
    assert all(abs(v - round(v)) <= 0.05 for v in r["plateaus"])
    assert math.isnan(r["fitted_slope"])
