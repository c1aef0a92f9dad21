"""Time-ordered propagation in both pictures and metric inner products.

All propagators are built by integrating states (or basis columns) with the
shared fixed-step RK4 core, which keeps the time ordering implicit. Unitarity
is checked by tests and reported as a diagnostic, never re-imposed.
"""

import warnings

import numpy as np

from ._integrate import rk4_series
from .dyson import DysonSeries, invert_dyson_map
from .errors import NotPositiveDefinite
from .series import IntegrationGrid, TimeSeries
from .su2 import complex2x2


def _state_rhs(h_of_t, hermitian_check):
    warned = [not hermitian_check]

    def rhs(t, y):
        hm = h_of_t(t)
        if not warned[0]:
            drift = np.linalg.norm(hm - np.conj(np.swapaxes(hm, -1, -2)))
            if drift > 1e-8 * max(1.0, float(np.linalg.norm(hm))):
                warnings.warn(
                    f"Hamiltonian source is not Hermitian at t = {t:.6g} "
                    f"(residual {drift:.3e}); integrating anyway",
                    stacklevel=2,
                )
                warned[0] = True
        return -1j * (hm @ y)

    return rhs


def evolve_state(
    h_of_t,
    psi0,
    grid: IntegrationGrid,
    local_error_bound: float | None = 1e-6,
    check_every: int = 100,
    hermitian_check: bool = True,
) -> TimeSeries:
    """Integrate i d/dt psi = h(t) psi over the grid with fixed-step RK4.

    ``h_of_t`` is a callable t -> matrix and is queried at integrator
    substage times, not just grid points. A non-Hermitian source triggers a
    single warning when ``hermitian_check`` is on; the integrator itself is
    happy to evolve non-Hermitian generators (used for the non-Hermitian
    picture, where the flat norm is not conserved).
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.ndim != 1:
        raise ValueError(f"psi0 must be a state vector, got shape {psi0.shape}")
    samples = rk4_series(
        _state_rhs(h_of_t, hermitian_check),
        psi0,
        grid.t_start,
        grid.dt,
        grid.n_steps,
        local_error_bound=local_error_bound,
        check_every=check_every,
    )
    return TimeSeries(t0=grid.t_start, dt=grid.dt, samples=samples)


def propagator_series(
    h_of_t,
    grid: IntegrationGrid,
    local_error_bound: float | None = 1e-6,
    check_every: int = 100,
    hermitian_check: bool = True,
) -> TimeSeries:
    """u(t, grid.t_start) at every grid time, integrated once as a matrix ODE.

    The columns are the evolved canonical basis states; u(t_start, t_start)
    is the identity exactly.
    """
    dim = h_of_t(grid.t_start).shape[0]
    samples = rk4_series(
        _state_rhs(h_of_t, hermitian_check),
        np.eye(dim, dtype=complex),
        grid.t_start,
        grid.dt,
        grid.n_steps,
        local_error_bound=local_error_bound,
        check_every=check_every,
    )
    return TimeSeries(t0=grid.t_start, dt=grid.dt, samples=samples)


def time_ordered_u(
    h_of_t,
    t_from: float,
    t_to: float,
    dt: float,
    local_error_bound: float | None = 1e-6,
    check_every: int = 100,
    hermitian_check: bool = True,
) -> np.ndarray:
    """Time-ordered propagator u(t_to, t_from) for the Hamiltonian source.

    ``dt`` must divide t_to - t_from (t_to = t_from returns the identity);
    composition u(t2, t1) u(t1, t0) = u(t2, t0) then holds to integrator
    accuracy. Only forward propagation is supported.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    span = t_to - t_from
    if span < 0.0:
        raise ValueError("backward propagation is not supported; swap the endpoints")
    n = round(span / dt)
    if abs(n * dt - span) > 1e-9 * max(dt, abs(span)):
        raise ValueError(f"dt = {dt:.9g} does not divide t_to - t_from = {span:.9g}")
    dim = h_of_t(t_from).shape[0]
    if n == 0:
        return np.eye(dim, dtype=complex)
    samples = rk4_series(
        _state_rhs(h_of_t, hermitian_check),
        np.eye(dim, dtype=complex),
        t_from,
        dt,
        n,
        local_error_bound=local_error_bound,
        check_every=check_every,
    )
    return samples[-1]


def nonhermitian_u(eta_series: DysonSeries, u, t_from: float, t_to: float) -> np.ndarray:
    """Non-Hermitian-picture propagator U(t_to, t_from) = eta^-1(t_to) u eta(t_from).

    Generally not unitary in the flat inner product, but it preserves the
    rho-weighted one. The Dyson maps at both endpoints are looked up on the
    sample grid of ``eta_series``.
    """
    u = np.asarray(u, dtype=complex)
    eta_start = eta_series.at_time(t_from).eta
    eta_end = eta_series.at_time(t_to).eta
    return invert_dyson_map(eta_end) @ u @ eta_start


def rho_inner(a, b, rho) -> complex:
    """Metric inner product <a | rho b> = a^dag rho b.

    Conjugate linear in ``a``, linear in ``b``, and positive definite
    because ``rho`` is required to be Hermitian positive definite.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    rho = complex2x2(rho)
    residual = np.linalg.norm(rho - rho.conj().T)
    det = (rho[0, 0] * rho[1, 1] - rho[0, 1] * rho[1, 0]).real
    tr = (rho[0, 0] + rho[1, 1]).real
    if residual > 1e-10 or det <= 0.0 or tr <= 0.0:
        raise NotPositiveDefinite(
            f"rho is not Hermitian positive definite "
            f"(hermiticity residual {residual:.3e}, tr = {tr:.6g}, det = {det:.6g})"
        )
    return complex(a.conj() @ rho @ b)
