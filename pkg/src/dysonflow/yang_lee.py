"""Closed-form solutions for the one-site lattice Yang-Lee model.

The non-Hermitian one-site Hamiltonian

    H1 = -1/2 [omega I + sigma_z + i gamma sigma_x],    0 < gamma < 1,

has real eigenvalues E_pm = (-omega +- phi)/2 with level splitting
phi = sqrt(1 - gamma^2), the Rabi frequency of everything that follows.
Its oscillatory metric

    rho(t) = [1/gamma + gamma sin(phi t)] I
           + phi cos(phi t) sigma_x - [1 + sin(phi t)] sigma_y

and Hermitian Dyson map eta(t) = sqrt(rho(t)) carry H1 onto the Hermitian,
explicitly time-dependent Rabi-type Hamiltonian

    h(t) = -1/2 [omega I + 2 phi^2 / (2 + gamma^2 sin(phi t) - gamma^2) sigma_z],

whose propagator, orthonormal basis and energy expectations all exist in
closed form. Everything here doubles as an oracle for the numeric paths in
the metric, dyson and propagation modules.
"""

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .dyson import DysonSample
from .errors import DimensionTooLarge
from .metric import SU2Hamiltonian, ZetaConstants
from .su2 import IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z

MAX_CHAIN_SITES = 12


@dataclass(frozen=True)
class YangLeeParams:
    """Model constants (gamma, omega) plus derived frequencies and anchor time.

    gamma is restricted to (0, 1): at gamma = 1 the eigenvalues of H1
    coalesce (exceptional point) and beyond it they form a complex-conjugate
    pair, so no positive-definite metric exists. The anchor time
    t0 = -pi/(2 phi) is where the metric becomes the scalar (phi^2/gamma) I.
    """

    gamma: float
    omega: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.gamma < 1.0):
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if not np.isfinite(self.omega):
            raise ValueError("omega must be finite")

    @property
    def phi(self) -> float:
        """Level splitting E_plus - E_minus = sqrt(1 - gamma^2)."""
        return math.sqrt(1.0 - self.gamma**2)

    @property
    def phi_plus(self) -> float:
        return math.sqrt(1.0 + self.gamma)

    @property
    def phi_minus(self) -> float:
        return math.sqrt(1.0 - self.gamma)

    @property
    def t0(self) -> float:
        return -math.pi / (2.0 * self.phi)

    @property
    def period(self) -> float:
        """Common period 2 pi / phi of metric, Hamiltonian and energies."""
        return 2.0 * math.pi / self.phi


def _pauli_sign(sign) -> int:
    if sign in (+1, -1):
        return int(sign)
    raise ValueError(f"sign must be +1 or -1, got {sign!r}")


def chain_hamiltonian(n_sites: int, lam: complex, kappa: complex) -> np.ndarray:
    """Ising chain with transverse field and imaginary longitudinal field.

    H_N = -1/2 sum_j (sigma^z_j + lam sigma^x_j sigma^x_{j+1} + i kappa sigma^x_j)
    with periodic indexing sigma_{N+1} = sigma_1. For N = 1 the exchange term
    collapses to lam * I, leaving H1 = -1/2 (lam I + sigma_z + i kappa sigma_x).
    Dense construction, refused above 12 sites.
    """
    if n_sites < 1:
        raise ValueError(f"n_sites must be >= 1, got {n_sites}")
    if n_sites > MAX_CHAIN_SITES:
        raise DimensionTooLarge(
            f"dense construction capped at {MAX_CHAIN_SITES} sites, got {n_sites}"
        )

    def site_op(op, j):
        mats = [IDENTITY] * n_sites
        mats[j] = op
        return reduce(np.kron, mats)

    def bond_op(j, k):
        mats = [IDENTITY] * n_sites
        if j == k:
            mats[j] = SIGMA_X @ SIGMA_X
        else:
            mats[j] = SIGMA_X
            mats[k] = SIGMA_X
        return reduce(np.kron, mats)

    dim = 2**n_sites
    out = np.zeros((dim, dim), dtype=complex)
    for j in range(n_sites):
        out -= 0.5 * site_op(SIGMA_Z, j)
        out -= 0.5 * lam * bond_op(j, (j + 1) % n_sites)
        out -= 0.5j * kappa * site_op(SIGMA_X, j)
    return out


def h1_matrix(p: YangLeeParams) -> np.ndarray:
    """One-site Hamiltonian H1 = -1/2 (omega I + sigma_z + i gamma sigma_x)."""
    return chain_hamiltonian(1, p.omega, p.gamma)


def h1_su2(p: YangLeeParams) -> SU2Hamiltonian:
    """H1 in coefficient form: kappa0 = -omega, kappa = -e_z, lambda = -gamma e_x."""
    return SU2Hamiltonian(
        kappa0=-p.omega,
        lambda0=0.0,
        kappa_vec=(0.0, 0.0, -1.0),
        lambda_vec=(-p.gamma, 0.0, 0.0),
    )


def eigenvalues_h1(p: YangLeeParams) -> tuple[float, float]:
    """Real eigenvalues (E_plus, E_minus) = ((-omega + phi)/2, (-omega - phi)/2)."""
    return 0.5 * (-p.omega + p.phi), 0.5 * (-p.omega - p.phi)


def psi_pm(t: float, sign: int, p: YangLeeParams) -> np.ndarray:
    """Eigenstate solution of the non-Hermitian TDSE i d/dt Psi = H1 Psi.

    Psi_pm(t) = sqrt(gamma) / (sqrt(2) phi sqrt(1 +- phi))
              * (gamma, i (1 +- phi))^T e^{-i E_pm t},
    normalized so that <Psi_pm | rho(t) Psi_pm> = 1 at every t.
    """
    s = _pauli_sign(sign)
    e_plus, e_minus = eigenvalues_h1(p)
    energy = e_plus if s > 0 else e_minus
    pref = math.sqrt(p.gamma) / (math.sqrt(2.0) * p.phi * math.sqrt(1.0 + s * p.phi))
    vec = np.array([p.gamma, 1j * (1.0 + s * p.phi)], dtype=complex)
    return pref * vec * np.exp(-1j * energy * t)


def _rho_coeffs(t: float, p: YangLeeParams):
    s, c = math.sin(p.phi * t), math.cos(p.phi * t)
    alpha = 1.0 / p.gamma + p.gamma * s
    beta = np.array([p.phi * c, -(1.0 + s), 0.0])
    return alpha, beta


def rho_closed(t: float, p: YangLeeParams) -> np.ndarray:
    """Oscillatory metric rho(t); Hermitian with constant det = phi^4 / gamma^2."""
    alpha, beta = _rho_coeffs(t, p)
    return alpha * IDENTITY + beta[0] * SIGMA_X + beta[1] * SIGMA_Y


def rho_closed_dot(t: float, p: YangLeeParams) -> np.ndarray:
    """Analytic time derivative of rho_closed."""
    s, c = math.sin(p.phi * t), math.cos(p.phi * t)
    return (
        p.gamma * p.phi * c * IDENTITY
        - p.phi**2 * s * SIGMA_X
        - p.phi * c * SIGMA_Y
    )


def rho_closed_constants(p: YangLeeParams) -> ZetaConstants:
    """Constants (0, -phi/gamma, -1/gamma, 0) generating rho_closed via zeta_metric."""
    return ZetaConstants(c1=0.0, c2=-p.phi / p.gamma, c3=-1.0 / p.gamma, c4=0.0)


def eta_closed(t: float, p: YangLeeParams) -> DysonSample:
    """Hermitian Dyson map eta(t) = sqrt(rho(t)) with its analytic derivative.

    With p0(t) = 1 + sin(phi t) + i phi cos(phi t) and
    p_pm(t) = sqrt(1/gamma + gamma sin(phi t) +- |p0(t)|):

        eta = (p_+ + p_-)/2 I
            + (p_+ - p_-)/(2 |p0|) [Im(p0) sigma_x - Re(p0) sigma_y].

    Because p_+^2 - p_-^2 = 2 |p0| identically, the coefficient
    (p_+ - p_-)/(2 |p0|) equals 1/(p_+ + p_-); that regular form is used
    here since |p0| vanishes at t0 modulo one period.
    """
    alpha, beta = _rho_coeffs(t, p)
    s, c = math.sin(p.phi * t), math.cos(p.phi * t)
    delta = p.phi**2 / p.gamma  # sqrt(det rho), conserved
    a = math.sqrt(0.5 * (alpha + delta))
    bx = beta[0] / (2.0 * a)
    by = beta[1] / (2.0 * a)
    eta = a * IDENTITY + bx * SIGMA_X + by * SIGMA_Y

    alpha_dot = p.gamma * p.phi * c
    a_dot = alpha_dot / (4.0 * a)
    bx_dot = -p.phi**2 * s / (2.0 * a) - p.phi * c * a_dot / (2.0 * a * a)
    by_dot = -p.phi * c / (2.0 * a) + (1.0 + s) * a_dot / (2.0 * a * a)
    eta_dot = a_dot * IDENTITY + bx_dot * SIGMA_X + by_dot * SIGMA_Y
    return DysonSample(t=float(t), eta=eta, eta_dot=eta_dot)


def rabi_h(t: float, p: YangLeeParams) -> np.ndarray:
    """Hermitian Rabi-type Hamiltonian produced by the Dyson map.

    h(t) = -1/2 [omega I + 2 phi^2 / (2 + gamma^2 sin(phi t) - gamma^2) sigma_z].
    Diagonal, periodic with period 2 pi / phi; the denominator is bounded
    below by 2 phi^2 > 0 for gamma < 1.
    """
    denom = 2.0 + p.gamma**2 * math.sin(p.phi * t) - p.gamma**2
    return -0.5 * (p.omega * IDENTITY + (2.0 * p.phi**2 / denom) * SIGMA_Z)


def theta(t, p: YangLeeParams):
    """Accumulated phase of the upper propagator component.

    theta(t) = pi/4 + (omega/2)(t - t0)
             + arctan[ ((1-phi)^2 + gamma^2 tan(phi t/2))
                     / (gamma^2 + (1-phi)^2 tan(phi t/2)) ],

    with the arctan continued across its branch jumps (the quotient blows up
    whenever gamma^2 + (1-phi)^2 tan(phi t/2) crosses zero, once per period
    of the tangent, and each crossing costs +pi). The continued phase is
    smooth, satisfies theta(t0) = 0 and

        d theta / dt = omega/2 + phi^2 / (2 + gamma^2 sin(phi t) - gamma^2),

    so it stays finite across the tangent poles as well. Accepts scalar or
    array t.
    """
    t_arr = np.asarray(t, dtype=float)
    a = (1.0 - p.phi) ** 2
    g2 = p.gamma**2
    half = 0.5 * p.phi * t_arr
    tan_half = np.tan(half)
    with np.errstate(divide="ignore"):
        branch = np.arctan((a + g2 * tan_half) / (g2 + a * tan_half))
    jump_phase = np.arctan(g2 / a)
    winding = np.floor((half + jump_phase) / np.pi) - math.floor(
        (0.5 * p.phi * p.t0 + jump_phase) / np.pi
    )
    out = np.pi / 4.0 + 0.5 * p.omega * (t_arr - p.t0) + branch + np.pi * winding
    if np.isscalar(t):
        return float(out)
    return out


def u_closed(t: float, p: YangLeeParams) -> np.ndarray:
    """Closed-form propagator u(t, t0) of the Rabi-type Hamiltonian.

    Diagonal because h(t) is:
    u = diag(e^{i theta(t)}, e^{i [pi omega/(2 phi) + omega t - theta(t)]}),
    so u(t0, t0) = I, u is unitary, and det u = e^{i omega (t - t0)}.
    """
    th = theta(float(t), p)
    upper = np.exp(1j * th)
    lower = np.exp(1j * (np.pi * p.omega / (2.0 * p.phi) + p.omega * float(t) - th))
    return np.array([[upper, 0.0], [0.0, lower]], dtype=complex)


@dataclass(frozen=True)
class BasisStates:
    """Canonical Hermitian-picture basis at t0 and its expansion coefficients.

    phi1 and phi2 are rebuilt from the Dyson-mapped eigenstates
    phi_pm(t0) = eta(t0) Psi_pm(t0) as

        phi1 = c_plus  phi_minus + c_minus phi_plus   (= (1, 0) up to numerics)
        phi2 = c_minus phi_minus - c_plus  phi_plus   (= (0, 1) up to numerics)
    """

    phi1: np.ndarray
    phi2: np.ndarray
    c_plus: complex
    c_minus: complex


def basis_states(p: YangLeeParams) -> BasisStates:
    """Expansion of (1,0) and (0,1) over the Dyson-mapped eigenstates at t0.

    c_pm = e^{i pi/4 (omega/phi +- 1)} (sqrt(1 +- phi) - gamma sqrt(1 -+ phi))
           / (sqrt(2) phi^2);

    note the square roots run over 1 +- phi, the level splitting, not over
    1 +- gamma. The reconstruction is exact and doubles as the validation of
    the coefficients.
    """
    root_plus = math.sqrt(1.0 + p.phi)
    root_minus = math.sqrt(1.0 - p.phi)
    pref = 1.0 / (math.sqrt(2.0) * p.phi**2)
    c_plus = pref * np.exp(1j * np.pi / 4.0 * (p.omega / p.phi + 1.0)) * (
        root_plus - p.gamma * root_minus
    )
    c_minus = pref * np.exp(1j * np.pi / 4.0 * (p.omega / p.phi - 1.0)) * (
        root_minus - p.gamma * root_plus
    )
    eta0 = eta_closed(p.t0, p).eta
    phi_plus = eta0 @ psi_pm(p.t0, +1, p)
    phi_minus = eta0 @ psi_pm(p.t0, -1, p)
    return BasisStates(
        phi1=c_plus * phi_minus + c_minus * phi_plus,
        phi2=c_minus * phi_minus - c_plus * phi_plus,
        c_plus=complex(c_plus),
        c_minus=complex(c_minus),
    )


def energy_expectation(t: float, sign: int, p: YangLeeParams) -> float:
    """Energy expectation E_pm(t) = +- phi^3 / (2 + gamma^2 sin(phi t) - gamma^2) - omega/2.

    Equals <phi_pm(t)| h(t) |phi_pm(t)> in the Hermitian picture and
    <Psi_pm(t)| rho(t) Htilde(t) |Psi_pm(t)> in the non-Hermitian one. It
    oscillates with frequency phi between the static eigenvalues E_pm at t0
    and (+- phi^3 - omega)/2 at -t0.
    """
    s = _pauli_sign(sign)
    denom = 2.0 + p.gamma**2 * math.sin(p.phi * t) - p.gamma**2
    return s * p.phi**3 / denom - 0.5 * p.omega
