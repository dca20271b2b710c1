import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftir_gh.core import CONSTANTS, critical_angle, kinematics, media_admittances
from ftir_gh.materials import equivalent_epsilon, epsilon_from_absolute
from ftir_gh.scatter import (
    LayerStack,
    NoResonanceError,
    Sheet,
    Slab,
    StackError,
    closed_form_t,
    dispersion_residual,
    find_reflection_minimum,
    find_resonance,
    gap_field,
    interface_residual,
    match,
    sheet_gap_stack,
    sinc,
    stack_transfer,
)

from oracles import airy_ftir_t, fresnel_tm_r

LAM, N, A = 3e-4, 1.605, 2.5e-4
SIG = 0.021j
TC = critical_angle(N, 1.0)


def closed(theta, sigma=SIG, a=A, lam=LAM, n=N, ng=1.0):
    kin = kinematics(theta, lam, n, ng)
    e1, e2 = media_admittances(kin)
    return closed_form_t(kin, e1, e2, sigma, a)


def stack_t(stack, theta, lam=LAM, ng=1.0):
    return stack_transfer(stack, kinematics(theta, lam, stack.n_prism, ng))


def test_sinc_series_branch():
    assert sinc(0) == 1
    z = np.array([1e-7, 1e-7j, 0.5 + 0.2j])
    assert np.allclose(sinc(z), np.sin(z) / z, rtol=1e-15)


@pytest.mark.parametrize("theta", [0.0, 0.3, 0.6, 0.9, 1.2])
def test_single_interface_reduces_to_fresnel(theta):
    n2 = 1.33
    kin1 = kinematics(theta, LAM, N, n2)
    e1, e2 = media_admittances(kin1)
    one = np.ones(1, dtype=complex)[0]
    r, t = match((one, 0 * one, 0 * one, one), e1, e2)
    assert r == pytest.approx(fresnel_tm_r(N, n2, theta), rel=1e-13, abs=1e-15)
    assert t == pytest.approx(1 + r, rel=1e-13)


@pytest.mark.parametrize("theta_deg", [0, 10, 25, 38, 38.5, 39, 41, 50, 70, 85])
@pytest.mark.parametrize("a", [0.3 * LAM, A, 2.0 * LAM])
def test_bare_barrier_matches_airy_composition(theta_deg, a):
    th = math.radians(theta_deg)
    t = closed(th, sigma=0.0, a=a)
    assert t == pytest.approx(airy_ftir_t(th, LAM, N, 1.0, a), rel=1e-11)


def test_fabry_perot_unit_transmission():
    th = 0.4
    kin = kinematics(th, LAM, N, 1.0)
    a = 3 * math.pi / kin.kx_gap.real
    assert abs(closed(th, sigma=0.0, a=a)) == pytest.approx(1.0, abs=1e-12)


def test_fig2_graphene_reaches_unit_transmission():
    th = np.linspace(TC + 1e-6, math.pi / 2 - 1e-3, 20000)
    T = np.abs(closed(th)) ** 2
    assert T.max() > 0.999
    assert th[T.argmax()] > TC


def test_stack_equals_closed_form_on_fig2():
    th = np.linspace(0.05, 1.5, 500)
    t1 = closed(th)
    t2 = stack_t(sheet_gap_stack(SIG, A, N), th).t
    assert np.max(np.abs(t1 - t2) / np.abs(t1)) < 1e-12


def test_empty_gap_limit():
    res = stack_t(LayerStack(N, (Slab(1.0, 1e-15),)), 0.3)
    assert res.t == pytest.approx(1.0, abs=1e-9)
    assert abs(res.r) < 1e-9


def test_fig5_metal_film_resonance():
    eps = epsilon_from_absolute(-2.97e-10 + 2.52e-11j)
    film = Slab(eps, 25e-9)
    stack = LayerStack(N, (film, Slab(1.0, 4e-7), film))
    th = np.linspace(TC - math.radians(2), TC + math.radians(6), 2000)
    T = stack_t(stack, th, lam=500e-9).T
    i = int(np.argmax(T))
    assert 0 < i < T.size - 1 and T[i] > T[0] and T[i] > T[-1]
    assert T[i] < 1


def test_continuity_through_critical_angle():
    t_c = closed(TC)
    assert np.isfinite(t_c)
    # t is smooth in kx^2 ~ (theta - theta_c), so the gap closes linearly
    for d in (1e-11, 1e-13):
        assert abs(closed(TC + d) - t_c) < 1e-9
        assert abs(closed(TC - d) - t_c) < 1e-9
    slope = abs(closed(TC + 1e-8) - t_c) / 1e-8
    assert abs(closed(TC + 1e-10) - t_c) == pytest.approx(slope * 1e-10, rel=1e-3)
    stack = sheet_gap_stack(SIG, A, N)
    assert stack_t(stack, TC).t == pytest.approx(t_c, rel=1e-12)


lossless_element = st.one_of(
    st.builds(Sheet, st.floats(-0.05, 0.05).map(lambda x: 1j * x)),
    st.builds(Slab, st.floats(-60.0, 6.0).filter(lambda e: abs(e) > 1e-3),
              st.floats(1e-9, 2e-4)),
)


@settings(max_examples=300, deadline=None)
@given(elements=st.lists(lossless_element, min_size=1, max_size=4),
       theta=st.floats(0.0, math.radians(89)), n=st.floats(1.1, 3.0))
def test_energy_conservation_lossless(elements, theta, n):
    res = stack_t(LayerStack(n, elements), theta)
    assert abs(res.R + res.T - 1) < 1e-10


passive_element = st.one_of(
    st.builds(lambda re, im: Sheet(complex(re, im)), st.floats(0, 0.05), st.floats(-0.05, 0.05)),
    st.builds(lambda re, im, d: Slab(complex(re, im), d),
              st.floats(-60.0, 6.0), st.floats(0.0, 20.0),
              st.floats(1e-9, 2e-4)).filter(lambda s: abs(s.eps_rel) > 1e-3),
)


@settings(max_examples=300, deadline=None)
@given(elements=st.lists(passive_element, min_size=1, max_size=4),
       theta=st.floats(0.0, math.radians(89)))
def test_passivity(elements, theta):
    res = stack_t(LayerStack(N, elements), theta)
    assert res.R + res.T <= 1 + 1e-10
    assert res.absorbed >= -1e-10


@settings(max_examples=300, deadline=None)
@given(theta=st.floats(0.0, math.radians(89)), a_over=st.floats(0.1, 1.5),
       sig_re=st.floats(0, 0.01), sig_im=st.floats(-0.05, 0.05), lam=st.floats(1e-6, 1e-3))
def test_closed_form_matrix_equivalence(theta, a_over, sig_re, sig_im, lam):
    sigma = complex(sig_re, sig_im)
    a = a_over * lam
    t1 = closed(theta, sigma=sigma, a=a, lam=lam)
    t2 = stack_t(sheet_gap_stack(sigma, a, N), theta, lam=lam).t
    assert abs(t1 - t2) <= 1e-12 * abs(t1)


@settings(max_examples=200, deadline=None)
@given(elements=st.lists(passive_element, min_size=1, max_size=4),
       theta=st.floats(0.0, math.radians(89)))
def test_reciprocity(elements, theta):
    stack = LayerStack(N, elements)
    t1 = stack_t(stack, theta).t
    t2 = stack_t(stack.reversed(), theta).t
    assert abs(t1 - t2) <= 1e-12 * max(abs(t1), 1e-300) + 1e-300


def test_sheet_to_slab_consistency_fig2():
    omega = 2 * math.pi * CONSTANTS.c / LAM
    eps = equivalent_epsilon(SIG, omega, 0.5e-9)
    th = np.linspace(TC - math.radians(2), TC + math.radians(6), 2000)
    T_sheet = stack_t(sheet_gap_stack(SIG, A, N), th).T
    slab = Slab(eps, 0.5e-9)
    T_slab = stack_t(LayerStack(N, (slab, Slab(1.0, A), slab)), th).T
    assert np.max(np.abs(T_slab - T_sheet) / T_sheet) < 1e-3


def test_gap_field_no_backward_wave_when_matched():
    kin = kinematics(0.4, LAM, N, N)
    e1, e2 = media_admittances(kin)
    t = closed_form_t(kin, e1, e2, 0.0, A)
    gf = gap_field(0.0, A, kin, t)
    assert abs(gf.g) < 1e-15 * abs(gf.f)


@pytest.mark.parametrize("theta_deg", [20.0, 39.6, 45.0])
def test_gap_field_boundary_conditions(theta_deg):
    th = math.radians(theta_deg)
    kin = kinematics(th, LAM, N, 1.0)
    e1, e2 = media_admittances(kin)
    t = closed_form_t(kin, e1, e2, SIG, A)
    gf = gap_field(SIG, A, kin, t)
    if th > TC:
        assert abs(gf.f) > 0 and abs(gf.g) > 0
    # x = a: E continuous, H jumps by -sigma E
    E, H = gf.fields(A)
    assert abs(E - e1 * t) <= 1e-12 * abs(E)
    assert abs((t - H) + SIG * E) <= 1e-12 * abs(H)
    # x = 0: reconstruct r from E and check H against 1 + r
    r = stack_t(sheet_gap_stack(SIG, A, N), th).r
    E0, H0 = gf.fields(0.0)
    assert abs(e1 * (1 - r) - E0) <= 1e-12 * abs(E0)
    assert abs((H0 - (1 + r)) + SIG * E0) <= 1e-12 * abs(1 + r)


def test_residual_interface_limit():
    th = math.radians(41)
    big = 40 * LAM
    res = dispersion_residual(th, SIG, LAM, N, 1.0, big)
    kappa = kinematics(th, LAM, N).kappa
    lim = interface_residual(th, SIG, LAM, N)
    assert res / np.sinh(kappa * big) == pytest.approx(lim, rel=1e-12)


def test_residual_pure_imaginary_for_lossless_sheet():
    th = np.linspace(TC + 1e-4, 1.5, 50)
    res = dispersion_residual(th, SIG, LAM, N, 1.0, A)
    assert np.all(res.real == 0)


def test_residual_vanishes_at_transmission_peak():
    th = find_reflection_minimum(sheet_gap_stack(SIG, A, N), LAM, (TC + 1e-7, 1.5))
    kin = kinematics(th, LAM, N)
    e1, _ = media_admittances(kin)
    scale = abs(SIG * e1 * np.cosh(kin.kappa * A))
    assert abs(dispersion_residual(th, SIG, LAM, N, 1.0, A)) < 1e-6 * scale


def test_residual_without_sheet_never_vanishes():
    th = np.linspace(TC + 1e-6, 1.5, 500)
    assert np.all(np.abs(dispersion_residual(th, 0.0, LAM, N, 1.0, A)) > 0)
    with pytest.raises(ValueError):
        dispersion_residual(TC - 0.01, SIG, LAM, N, 1.0, A)


def test_find_resonance_matches_grid():
    th_res = find_resonance(SIG, LAM, N, 1.0, A)
    grid = np.linspace(TC + 1e-7, 1.5, 20000)
    R = stack_t(sheet_gap_stack(SIG, A, N), grid).R
    assert abs(math.degrees(th_res - grid[np.argmin(R)])) < 0.01
    assert TC < th_res < math.pi / 2


def test_find_resonance_lossy_uses_reflection_minimum():
    sigma = 3.48e-4 + 0.0131j
    th = find_resonance(sigma, LAM, N, 1.0, A)
    grid = np.linspace(TC + 1e-7, 1.5, 20000)
    R = stack_t(sheet_gap_stack(sigma, A, N), grid).R
    assert abs(math.degrees(th - grid[np.argmin(R)])) < 0.01


def test_no_resonance_without_sheet():
    with pytest.raises(NoResonanceError):
        find_resonance(0.0, LAM, N, 1.0, A)
    with pytest.raises(ValueError):
        find_resonance(SIG, LAM, N, 1.0, A, bracket=(TC - 0.1, 1.0))


def test_wider_gap_pulls_resonance_towards_critical():
    # regression values from this implementation, not published numbers
    t1 = find_resonance(SIG, LAM, N, 1.0, A)
    t2 = find_resonance(SIG, LAM, N, 1.0, 2 * A)
    assert math.degrees(t1) == pytest.approx(39.6465483, abs=1e-6)
    assert math.degrees(t2) == pytest.approx(39.1254515, abs=1e-6)
    assert TC < t2 < t1


def test_element_validation_and_degenerate_stack():
    with pytest.raises(ValueError):
        Sheet(-1e-3 + 0j)
    with pytest.raises(ValueError):
        Slab(2.0, 0.0)
    with pytest.raises(ValueError):
        LayerStack(N, ())
    stack = LayerStack(N, (Slab(1.0, A), Slab(-1e12, 1.0)))
    with pytest.raises(StackError) as info:
        stack_t(stack, 0.3)
    assert info.value.index == 1
