"""Single-qubit variational polaron ground state.

Self-consistent displacement amplitudes f_k = c_k/(Delta_r + omega_k) with the
renormalized splitting Delta_r = Delta * exp(-2 sum_k f_k^2), solved by damped
fixed-point iteration on Delta_r.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ConvergenceError
from .model import ModelParams, MomentumGrid, coupling_strength, momentum_to_site

DAMPING = 0.5
TOL = 1e-12
MAX_ITER = 100_000


@dataclass(frozen=True)
class SingleQubitPolaron:
    """Converged variational data for one qubit."""

    f_k: np.ndarray = field(repr=False)
    delta_r: float
    e_gs: float
    iterations: int
    residual: float

    @property
    def displacement_weight(self):
        """sum_k f_k^2, the total displaced weight."""
        return float(np.sum(self.f_k**2))


def gs_energy_functional(f_k, model: ModelParams, grid: MomentumGrid = None):
    """Variational energy E[f] = -Delta*exp(-2 sum f^2)/2 + sum w f^2 - 2 sum c f.

    Delta_r is re-evaluated from the supplied f, so this is the full functional
    whose stationary point solve_single_qubit returns.
    """
    if grid is None:
        grid = model.grid()
    ck = coupling_strength(model.couplings[0], model.n_sites)
    s2 = np.sum(f_k**2)
    return (-0.5 * model.delta * np.exp(-2 * s2)
            + np.sum(grid.omega * f_k**2) - 2 * ck * np.sum(f_k))


def solve_single_qubit(model: ModelParams, damping=DAMPING, tol=TOL,
                       max_iter=MAX_ITER) -> SingleQubitPolaron:
    """Damped fixed-point solve for (f_k, Delta_r).

    Residual at return: |Delta_r - Delta*exp(-2 sum f_k^2)| < tol * Delta.
    Raises ConvergenceError after max_iter.
    """
    if model.n_qubits != 1:
        raise ConfigError("solve_single_qubit requires exactly one qubit")
    grid = model.grid()
    delta = model.delta
    ck = coupling_strength(model.couplings[0], model.n_sites)
    dr = delta
    residual = np.inf
    for it in range(1, max_iter + 1):
        f_k = ck / (dr + grid.omega)
        target = delta * np.exp(-2 * np.sum(f_k**2))
        residual = abs(target - dr)
        if residual < tol * delta:
            break
        dr = (1 - damping) * dr + damping * target
    else:
        raise ConvergenceError(
            f"polaron fixed point did not converge after {max_iter} iterations "
            f"(residual {residual:.3e})",
            residual=residual, iterations=max_iter)
    f_k = ck / (dr + grid.omega)
    e_gs = -0.5 * dr + float(np.sum(grid.omega * f_k**2)) - 2 * ck * float(np.sum(f_k))
    f_k.flags.writeable = False
    return SingleQubitPolaron(f_k=f_k, delta_r=float(dr), e_gs=e_gs,
                              iterations=it, residual=float(residual))


def sigma_z_gs(sol: SingleQubitPolaron, model: ModelParams):
    """Lab-frame ground-state magnetization, -Delta_r/Delta."""
    return -sol.delta_r / model.delta


def excited_probability(sol: SingleQubitPolaron, model: ModelParams):
    """Ground-state excited-qubit population (1 - Delta_r/Delta)/2 in [0, 1/2)."""
    return 0.5 * (1.0 - sol.delta_r / model.delta)


def site_amplitudes(sol: SingleQubitPolaron, model: ModelParams):
    """Real-space displacement amplitudes f_n centered on the qubit site."""
    fn = momentum_to_site(sol.f_k, model.n_sites, model.positions[0])
    return fn.real


def gs_photon_numbers(sol: SingleQubitPolaron, model: ModelParams):
    """Ground-state photon occupation per site, <b_n^dag b_n> = f_n^2."""
    fn = site_amplitudes(sol, model)
    return fn * fn


def gs_localization_length(sol: SingleQubitPolaron, model: ModelParams):
    """Decay length of the ground-state cloud, 1/arccosh((w0 + Delta_r)/(2 lambda))."""
    arg = (model.omega0 + sol.delta_r) / (2 * model.lambda_hop)
    if arg <= 1:
        raise ValueError(f"arccosh argument {arg} <= 1: no exponential envelope")
    return 1.0 / float(np.arccosh(arg))


def fit_tail_rate(values, offsets=None, first=5, last=25, floor=1e-12):
    """Least-squares log-slope of an exponential tail.

    Fits log|values| over offsets in [first, last] restricted to entries above
    floor * max|values|; offsets where the amplitude has fallen below the
    float64 dynamic range would otherwise contaminate the fit.
    """
    values = np.asarray(values, dtype=float)
    if offsets is None:
        offsets = np.arange(values.size)
    offsets = np.asarray(offsets)
    mag = np.abs(values)
    mask = (offsets >= first) & (offsets <= last) & (mag > floor * mag.max())
    if mask.sum() < 3:
        raise ValueError("too few tail points above the noise floor")
    slope = np.polyfit(offsets[mask], np.log(mag[mask]), 1)[0]
    return -float(slope)
