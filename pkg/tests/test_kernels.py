import numpy as np
import pytest

from matrixmech import _kernels
from matrixmech.classical_dynamics import HamiltonianSystem, PhasePoint, hamiltonian_flow_step


def _cases():
    return [
        (_kernels.HARMONIC, [1.3], 0.7, 1.0, 0.2),
        (_kernels.QUARTIC, [0.25], 1.0, 1.4, -0.3),
        (_kernels.PENDULUM, [1.0, 1.0], 1.0, 0.9, 0.0),
        (_kernels.POLYNOMIAL, [0.0, 0.0, 0.5, 0.1, 0.05], 2.0, 0.5, 0.4),
    ]


class TestBackends:
    def test_selection_round_trip(self):
        original = _kernels.backend_name()
        try:
            for name in _kernels.available_backends():
                _kernels.select_backend(name)
                assert _kernels.backend_name() == name
        finally:
            _kernels.select_backend(original)
        with pytest.raises(ValueError):
            _kernels.select_backend("gpu")

    @pytest.mark.skipif(
        "compiled" not in _kernels.available_backends(), reason="extension not built"
    )
    def test_compiled_matches_pure(self):
        for family, params, mass, q0, p0 in _cases():
            fast = _kernels.leapfrog(family, params, mass, q0, p0, 1e-3, 5000, 1, backend="compiled")
            slow = _kernels.leapfrog(family, params, mass, q0, p0, 1e-3, 5000, 1, backend="pure")
            assert np.max(np.abs(fast[0] - slow[0])) <= 1e-13
            assert np.max(np.abs(fast[1] - slow[1])) <= 1e-13


class TestLeapfrog:
    def test_stride_subsamples_trajectory(self):
        q1, p1 = _kernels.leapfrog(_kernels.HARMONIC, [1.0], 1.0, 1.0, 0.0, 1e-2, 600, 1)
        q4, p4 = _kernels.leapfrog(_kernels.HARMONIC, [1.0], 1.0, 1.0, 0.0, 1e-2, 600, 4)
        assert len(q4) == 151
        assert np.array_equal(q4, q1[::4])
        assert np.array_equal(p4, p1[::4])

    def test_free_particle_is_exact(self):
        q, p = _kernels.leapfrog(_kernels.POLYNOMIAL, [], 2.0, 0.0, 1.0, 0.125, 16, 1)
        assert np.allclose(q, 0.125 * np.arange(17) / 2.0, atol=0)
        assert np.all(p == 1.0)

    def test_harmonic_energy_bounded(self):
        q, p = _kernels.leapfrog(_kernels.HARMONIC, [1.0], 1.0, 1.0, 0.0, 1e-2, 100_000, 100)
        energy = 0.5 * (q * q + p * p)
        assert np.max(np.abs(energy - 0.5)) <= 0.5 * (1e-2) ** 2  # no secular drift

    def test_validation(self):
        with pytest.raises(ValueError):
            _kernels.leapfrog(_kernels.HARMONIC, [1.0, 2.0], 1.0, 0.0, 0.0, 0.1, 10, 1)
        with pytest.raises(ValueError):
            _kernels.leapfrog(_kernels.HARMONIC, [1.0], 1.0, 0.0, 0.0, 0.1, 10, 3)
        with pytest.raises(ValueError):
            _kernels.leapfrog(99, [1.0], 1.0, 0.0, 0.0, 0.1, 10, 1)

    def test_matches_single_flow_step(self):
        # the kernel loop and the one-step API implement the same map
        systems = [
            HamiltonianSystem.harmonic(mass=1.3, omega0=0.8),
            HamiltonianSystem.quartic(0.4, mass=0.9),
            HamiltonianSystem.pendulum(g=1.2, length=0.7),
            HamiltonianSystem.polynomial([0.0, 0.1, 0.5, 0.0, 0.02], mass=1.1),
        ]
        for sys_ in systems:
            family, params = sys_.kernel_args()
            q, p = _kernels.leapfrog(family, params, sys_.mass, 0.6, -0.3, 0.05, 1, 1)
            stepped = hamiltonian_flow_step(sys_, PhasePoint(0.6, -0.3), 0.05)
            assert q[1] == pytest.approx(stepped.q, rel=1e-15)
            assert p[1] == pytest.approx(stepped.p, rel=1e-15)
