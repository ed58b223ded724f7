import math

import numpy as np
import pytest

from bellghz.errors import DivergentDenominatorError
from bellghz.hamiltonian import SystemParams
from bellghz.perturbation import (
    enumerate_paths,
    g_eff_bell_closed,
    g_eff_ghz_closed,
    g_eff_path_sum,
)


def _bell_params(g=0.1, theta=math.pi / 6.0):
    return SystemParams(omega_q=2.5, g_a=g, g_b=g, theta=theta)


def _ghz_params(g=0.12):
    return SystemParams(omega_q=4.25, g_a=g, g_b=g, g_c=g, theta=0.0)


def test_bell_closed_form_structure():
    params = _bell_params()
    val = g_eff_bell_closed(params)
    assert val < 0
    assert val == pytest.approx(-0.1 * 0.1 * 2.5 * math.sin(math.pi / 3.0) / 1.5)
    # quadratic in the couplings
    assert g_eff_bell_closed(_bell_params(g=0.2)) == pytest.approx(4.0 * val)


def test_bell_closed_form_theta_zero_warns():
    with pytest.warns(UserWarning):
        assert g_eff_bell_closed(_bell_params(theta=0.0)) == 0.0


def test_ghz_closed_form_structure():
    val = g_eff_ghz_closed(_ghz_params())
    assert val < 0
    expected = -4.0 * 0.12**3 * 4.25 / (2.5 * 2.75 * 3.25)
    assert val == pytest.approx(expected)


def test_path_count_bell():
    paths = enumerate_paths((0, 0, 1), (1, 1, 0), 2, _bell_params(), modes="ab")
    assert len(paths) == 4
    for path in paths:
        assert len(path.states) == 3
        assert len(path.denominators) == 1


def test_path_count_ghz():
    paths = enumerate_paths((0, 0, 0, 1), (1, 1, 1, 0), 3, _ghz_params())
    assert len(paths) == 6
    for path in paths:
        assert len(path.states) == 4
        assert len(path.denominators) == 2


def test_hops_change_one_mode_by_one():
    for paths in (
        enumerate_paths((0, 0, 1), (1, 1, 0), 2, _bell_params(), modes="ab"),
        enumerate_paths((0, 0, 0, 1), (1, 1, 1, 0), 3, _ghz_params()),
    ):
        for path in paths:
            for s0, s1 in zip(path.states, path.states[1:]):
                diffs = [abs(a - b) for a, b in zip(s0[:-1], s1[:-1])]
                assert sorted(diffs)[-1] == 1 and sum(diffs) == 1


def test_path_sum_matches_closed_form_bell():
    params = _bell_params()
    total = g_eff_path_sum((0, 0, 1), (1, 1, 0), 2, params, modes="ab")
    closed = g_eff_bell_closed(params)
    assert abs(total - closed) <= 1e-10 * abs(closed)


def test_path_sum_matches_closed_form_ghz():
    params = _ghz_params()
    total = g_eff_path_sum((0, 0, 0, 1), (1, 1, 1, 0), 3, params)
    closed = g_eff_ghz_closed(params)
    assert abs(total - closed) <= 1e-10 * abs(closed)


def test_path_contributions_sum_like_path_sum():
    params = _bell_params()
    paths = enumerate_paths((0, 0, 1), (1, 1, 0), 2, params, modes="ab")
    total = sum(p.contribution for p in paths)
    assert total == pytest.approx(g_eff_path_sum((0, 0, 1), (1, 1, 0), 2, params, modes="ab"))


def test_divergent_denominator_guard():
    # the intermediate |1, 0, g> lies at omega_a - omega_q/2, so its
    # denominator omega_q - omega_a vanishes when the qubit is tuned to omega_a
    params = _bell_params()
    with pytest.raises(DivergentDenominatorError):
        g_eff_path_sum((0, 0, 1), (1, 1, 0), 2, params, modes="ab", omega_q=1.0 + 1e-8)


def test_same_qubit_level_has_no_resonance():
    with pytest.raises(ValueError):
        g_eff_path_sum((0, 0, 1), (1, 1, 1), 2, _bell_params(), modes="ab")


def test_commensurate_frequencies_warn():
    params = SystemParams(omega_b=2.0, omega_q=3.0, g_a=0.1, g_b=0.1, theta=0.4)
    with pytest.warns(UserWarning, match="commensurate"):
        g_eff_path_sum((0, 0, 1), (1, 1, 0), 2, params, modes="ab")


def test_unsupported_order_rejected():
    with pytest.raises(ValueError):
        enumerate_paths((0, 0, 1), (1, 1, 0), 4, _bell_params(), modes="ab")
