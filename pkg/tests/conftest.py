import pytest

from matrixmech import HamiltonianSystem, build_action_grid


@pytest.fixture(scope="session")
def harmonic_system():
    return HamiltonianSystem.harmonic(mass=1.0, omega0=1.0)


@pytest.fixture(scope="session")
def harmonic_grid64(harmonic_system):
    """hbar=1, 64 levels: the workhorse ladder for CCR checks."""
    return build_action_grid(harmonic_system, 1.0, 64)


@pytest.fixture(scope="session")
def quartic_system():
    return HamiltonianSystem.quartic(0.25)


@pytest.fixture(scope="session")
def quartic_grid89(quartic_system):
    """hbar=0.01, 89 levels: interior row 80 at band 8."""
    return build_action_grid(quartic_system, 0.01, 89)


@pytest.fixture(scope="session")
def halving_grids(harmonic_system):
    """Grids at hbar in {0.1, 0.05, 0.025} holding I = 1 on the ladder
    (m = 10, 20, 40), for difference-quotient convergence checks."""
    return {
        hbar: build_action_grid(harmonic_system, hbar, m + 2)
        for hbar, m in ((0.1, 10), (0.05, 20), (0.025, 40))
    }
