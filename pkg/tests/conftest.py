"""Shared fixtures: reference parameters and the expensive window-length runs."""

import numpy as np
import pytest

from dysonflow import (
    IntegrationGrid,
    TimeSeries,
    YangLeeParams,
    dyson_from_metric,
    h1_su2,
    integrate_metric,
    propagator_series,
    rabi_h,
    rho_closed,
)

DT = 1e-3


@pytest.fixture(scope="session")
def params():
    return YangLeeParams(gamma=0.5, omega=1.0)


@pytest.fixture(scope="session")
def window_grid(params):
    # two Rabi periods starting at the anchor time, snapped to whole steps
    n = round(2.0 * params.period / DT)
    return IntegrationGrid(t_start=params.t0, t_end=params.t0 + n * DT, dt=DT)


@pytest.fixture(scope="session")
def metric_flow_window(params, window_grid):
    return integrate_metric(
        h1_su2(params), rho_closed(window_grid.t_start, params), window_grid
    )


@pytest.fixture(scope="session")
def u_series_window(params, window_grid):
    return propagator_series(lambda t: rabi_h(t, params), window_grid)


@pytest.fixture(scope="session")
def closed_metric_series(params, window_grid):
    samples = np.stack([rho_closed(t, params) for t in window_grid.times])
    return TimeSeries(t0=window_grid.t_start, dt=window_grid.dt, samples=samples)


@pytest.fixture(scope="session")
def dyson_fd_window(closed_metric_series):
    # Dyson maps with finite-difference derivatives on the dt = 1e-3 grid
    return dyson_from_metric(closed_metric_series)
