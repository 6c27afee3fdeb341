"""Double cover of the rotation circle by the unitary circle."""

import numpy as np

from orbitkit import spin


def test_theta_zero():
    r = spin.spin_cover_check(0.0)
    assert np.allclose(r.so6_action, np.eye(6))
    assert np.allclose(r.su4_element, np.eye(4))
    assert r.discrepancy <= 1e-15


def test_one_loop_downstairs_is_half_a_loop_upstairs():
    r = spin.spin_cover_check(2 * np.pi)
    assert np.max(np.abs(r.so6_action - np.eye(6))) <= 1e-12
    assert np.max(np.abs(r.su4_element + np.eye(4))) <= 1e-12
    assert r.discrepancy <= 1e-12
    r2 = spin.spin_cover_check(4 * np.pi)
    assert np.max(np.abs(r2.su4_element - np.eye(4))) <= 1e-12


def test_rotation_of_first_basis_vector():
    theta = np.pi / 3
    r = spin.spin_cover_check(theta)
    expected = np.zeros(6)
    expected[0] = np.cos(theta)
    expected[1] = np.sin(theta)
    assert np.allclose(r.so6_action[:, 0], expected, atol=1e-15)
    # The transported unitary action is real and agrees column by column.
    assert np.max(np.abs(r.su4_action_on_wedge.imag)) <= 1e-13
    assert np.allclose(r.su4_action_on_wedge[:, 0].real, expected, atol=1e-13)


def test_discrepancy_over_sweep():
    for theta in np.linspace(0, 4 * np.pi, 101):
        assert spin.spin_cover_check(float(theta)).discrepancy < 1e-12
