import pytest

from heatcap import geometry, spectral


@pytest.fixture(scope="session")
def hemisphere():
    return geometry.make_round_cap(n=2, rho0=1.0, cap_fraction=1.0)


@pytest.fixture(scope="session")
def hemisphere_spectrum(hemisphere):
    # shared mid-resolution spectrum; tests needing finer meshes build their own
    return spectral.assemble_spectrum(hemisphere, l_max=20, mesh_points=600,
                                      modes_per_l=15)


@pytest.fixture(scope="session")
def cap06():
    return geometry.make_round_cap(n=2, rho0=1.0, cap_fraction=0.6)


@pytest.fixture(scope="session")
def cap06_spectrum(cap06):
    return spectral.assemble_spectrum(cap06, l_max=16, mesh_points=600,
                                      modes_per_l=12)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance checklist so it survives output capture."""
    try:
        from tests import test_acceptance
    except ImportError:
        import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance checklist")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
