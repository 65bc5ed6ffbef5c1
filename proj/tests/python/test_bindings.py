import math

import pytest

import zpflab as z


def test_planck_and_quantum():
    x = 0.01
    e = z.planck_mean_energy(1.0, 1.0 / x, z.PlanckLaw.Second)
    assert abs((e * x - 1.0) - x * x / 12) < 0.05 * x * x / 12
    si = z.PhysicalConstants.si()
    assert z.spectral_quantum_line(1e12, si.h * 1e12) == pytest.approx(si.h, rel=1e-12)


def test_fringe_scan_matches_closed_form():
    p = z.FringeParams()
    p.shots = 50_000
    p.seed = 3
    deltas = z.uniform_deltas(16, 2, 1.0)
    rows = z.correlation_scan(z.FringeGeometry(), p, deltas)
    assert len(rows) == 16
    for r in rows:
        assert r.oracle == pytest.approx(z.closed_form_mean(1.0, 0.1, r.delta, 1.0))
        assert abs(r.mean - r.oracle) <= 4 * r.stderr
    h = z.fringe_analysis(rows, 1.0)
    assert h.first > h.second


def test_splitter_conserves_energy():
    a, b = z.Phasor(1.0, 0.2), z.Phasor(0.5, 1.1)
    o1, o2 = z.interfere_two_sources(a, b, z.SplitterSpec())
    assert o1.intensity() + o2.intensity() == pytest.approx(1.25, rel=1e-14)


def test_dipole_comparison():
    q = z.SphereQuadrature()
    q.radius, q.nodes = 20.0, 4000
    rep = z.compare_inputs(z.DipoleSource(), 1.0, -math.pi / 2, q)
    assert rep.spherical.total() == pytest.approx(math.pi, rel=1e-6)
    assert rep.spherical.phi_x == pytest.approx(rep.spherical.phi_y, rel=1e-9)


def test_filament_and_toroid():
    m = z.MediumModel()
    p = z.solve_profile(m, 1.0, 1.0)
    assert p.residual < 1e-8
    assert len(p.r) == len(p.field)
    c = z.carrier_of(p)
    fp = z.find_stable_curvature(p, c, m)
    assert fp.slope < 0
    assert z.rotation_ratio(p, c, m, fp.curvature) == pytest.approx(1.0, abs=1e-10)
    spec = z.QuantizeSpec()
    spec.carrier, spec.transverse_q, spec.critical_power = c, p.q, z.beam_power(p)
    spec.adjustment = z.Adjustment.Medium
    sols = z.quantize_torus(fp.curvature, spec, 3, 12)
    energies = [s.energy for s in sols]
    assert energies == sorted(energies) and len(set(energies)) == 10


def test_errors_map_to_python():
    with pytest.raises(z.NoSolutionError):
        z.solve_profile(z.MediumModel(), 1.0, 1e-7)
    with pytest.raises(ValueError):
        z.solve_profile(z.MediumModel(), 1.0, 0.0)
    assert issubclass(z.SolverError, z.ZpfError)
