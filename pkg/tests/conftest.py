"""Shared fixtures for the expensive runs (10^6-step spectra, 200x200
basin grids) so the module tests and the acceptance checks compute each
of them exactly once per session."""
import pytest

from quadshift import (BasinOptions, Params, Point3, SliceSpec, basin_slice,
                       build_catalog, lyapunov_1d, lyapunov_spectrum)

# the start used by the reference runs; its x-stream is 0 -> b -> b^2+b, which
# at b=-2 lands exactly on the unstable fixed point 2 in floats
PINNED_X0 = Point3(0.0, -0.5, 0.5)
GENERIC_X0 = Point3(0.3, -0.5, 0.5)

# grid classification options used by the coexistence checks: bigger cloud
# signatures and a looser tail match than the interactive defaults, because
# chaotic tails need a dense cloud to land within tolerance of
BASIN_CHECK_OPTIONS = BasinOptions(signature_samples=4096, match_tol=0.3)
BASIN_CHECK_SLICE = SliceSpec()      # fix z=0.5, sweep [-2.5, 2.5]^2, 200x200


@pytest.fixture(scope="session")
def spectrum_b2_pinned():
    return lyapunov_spectrum(PINNED_X0, Params(-2.0))


@pytest.fixture(scope="session")
def spectrum_b2_generic():
    return lyapunov_spectrum(GENERIC_X0, Params(-2.0))


@pytest.fixture(scope="session")
def spectrum_b1864_pinned():
    return lyapunov_spectrum(PINNED_X0, Params(-1.864))


@pytest.fixture(scope="session")
def exponent1d_b2():
    return lyapunov_1d(0.3, Params(-2.0))


@pytest.fixture(scope="session")
def exponent1d_b1864():
    return lyapunov_1d(0.3, Params(-1.864))


def _classified_slice(b):
    params = Params(b)
    catalog = build_catalog(params, options=BASIN_CHECK_OPTIONS)
    return basin_slice(params, BASIN_CHECK_SLICE, catalog, BASIN_CHECK_OPTIONS)


@pytest.fixture(scope="session")
def basin_grid_b1864():
    return _classified_slice(-1.864)


@pytest.fixture(scope="session")
def basin_grid_b2():
    return _classified_slice(-2.0)
