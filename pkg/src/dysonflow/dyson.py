"""Dyson maps from metric series and the time-dependent Dyson relation.

The Hermitian Dyson map is the positive square root eta(t) = sqrt(rho(t)).
It carries a static non-Hermitian H to its Hermitian counterpart

    h(t) = eta H eta^-1 + i (d/dt eta) eta^-1,

while the quasi-Hermitian physical energy observable of the non-Hermitian
picture is Htilde(t) = H + i eta^-1 (d/dt eta) = eta^-1 h eta. Only the
Hermitian branch of the square root is implemented; the unitary gauge
family eta' = V eta with V unitary is out of scope.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NotHermitian, NotPositiveDefinite, SingularDysonMap
from .metric import MetricFlow
from .series import TimeSeries
from .su2 import complex2x2, hermitian_sqrt

# Refuse inversion of maps this close to singular.
MIN_DYSON_DET = 1e-12


@dataclass(frozen=True)
class DysonSample:
    """Dyson map eta(t) = sqrt(rho(t)) and its time derivative at one instant."""

    t: float
    eta: np.ndarray
    eta_dot: np.ndarray


@dataclass(frozen=True)
class DysonSeries:
    """Dyson samples on a uniform grid; eta and eta_dot are (n, 2, 2) stacks."""

    t0: float
    dt: float
    eta: np.ndarray
    eta_dot: np.ndarray

    def __len__(self) -> int:
        return len(self.eta)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.eta))

    def __getitem__(self, i: int) -> DysonSample:
        i = int(i)
        if i < 0:
            i += len(self.eta)
        return DysonSample(t=self.t0 + self.dt * i, eta=self.eta[i], eta_dot=self.eta_dot[i])

    def at_time(self, t: float) -> DysonSample:
        i = round((t - self.t0) / self.dt)
        if i < 0 or i >= len(self.eta) or abs(self.t0 + i * self.dt - t) > 1e-6 * self.dt:
            raise ValueError(f"t = {t:.9g} is not on the Dyson sample grid")
        return self[i]


def invert_dyson_map(eta) -> np.ndarray:
    """Closed-form 2x2 inverse via adjugate; refuses |det| < 1e-12."""
    eta = complex2x2(eta)
    det = eta[0, 0] * eta[1, 1] - eta[0, 1] * eta[1, 0]
    if abs(det) < MIN_DYSON_DET:
        raise SingularDysonMap(f"|det eta| = {abs(det):.3e} below {MIN_DYSON_DET:.1e}")
    return np.array([[eta[1, 1], -eta[0, 1]], [-eta[1, 0], eta[0, 0]]], dtype=complex) / det


def fourth_order_derivative(samples: np.ndarray, dt: float) -> np.ndarray:
    """First time derivative of a uniformly sampled array stack, O(dt^4).

    Five-point central stencil in the interior, one-sided stencils of the
    same order at the two points on each edge. Needs at least 5 samples.
    """
    samples = np.asarray(samples)
    n = len(samples)
    if n < 5:
        raise ValueError(f"fourth-order differentiation needs >= 5 samples, got {n}")
    d = np.empty_like(samples, dtype=complex)
    f = samples
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * dt)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * dt)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * dt)
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * dt)
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * dt)
    return d


def dyson_from_metric(metric_series) -> DysonSeries:
    """Hermitian Dyson maps eta = sqrt(rho) for a positive-definite metric series.

    eta_dot comes from fourth-order finite differences on the sampled family,
    one-sided at the endpoints; callers with an analytic derivative should
    prefer it. Accepts a TimeSeries of matrices or a MetricFlow.
    Raises NotPositiveDefinite (carrying the sample time) on the first
    invalid sample.
    """
    if isinstance(metric_series, MetricFlow):
        metric_series = metric_series.series
    if not isinstance(metric_series, TimeSeries):
        raise TypeError("expected a TimeSeries or MetricFlow of metric samples")
    n = len(metric_series)
    eta = np.empty((n, 2, 2), dtype=complex)
    for i in range(n):
        t_i = metric_series.t0 + i * metric_series.dt
        try:
            eta[i] = hermitian_sqrt(metric_series[i])
        except (NotHermitian, NotPositiveDefinite) as exc:
            raise NotPositiveDefinite(
                f"metric sample at t = {t_i:.9g} is not a valid metric: {exc}", t=t_i
            ) from exc
    eta_dot = fourth_order_derivative(eta, metric_series.dt)
    return DysonSeries(t0=metric_series.t0, dt=metric_series.dt, eta=eta, eta_dot=eta_dot)


def hermitian_counterpart(h_nonhermitian, sample: DysonSample) -> np.ndarray:
    """Hermitian counterpart h = eta H eta^-1 + i eta_dot eta^-1.

    Hermiticity of the result is a property of a correct (eta, eta_dot)
    pair, not of this formula; the residual is the standard cross check.
    """
    h_nonhermitian = complex2x2(h_nonhermitian)
    inv = invert_dyson_map(sample.eta)
    return sample.eta @ h_nonhermitian @ inv + 1j * sample.eta_dot @ inv


def physical_hamiltonian(h_nonhermitian, sample: DysonSample) -> np.ndarray:
    """Physical energy observable Htilde = H + i eta^-1 eta_dot.

    Quasi-Hermitian with respect to rho = eta^2 and equal to
    eta^-1 h eta for the counterpart h above.
    """
    h_nonhermitian = complex2x2(h_nonhermitian)
    inv = invert_dyson_map(sample.eta)
    return h_nonhermitian + 1j * inv @ sample.eta_dot


def quasi_hermiticity_residual(h_tilde, rho) -> float:
    """Frobenius norm of Htilde^dag rho - rho Htilde.

    Zero exactly when Htilde is quasi-Hermitian with respect to rho, the
    condition for real expectation values in the rho-weighted inner product.
    """
    h_tilde = complex2x2(h_tilde)
    rho = complex2x2(rho)
    return float(np.linalg.norm(h_tilde.conj().T @ rho - rho @ h_tilde))
