"""Number-conserving RWA baseline: bare splitting Delta and bare couplings c_k,
single-excitation bound states above and below the band.

Energies are excitation energies over the trivial RWA ground state (qubits
down, photon vacuum), directly comparable with the polaron excitation
energies.
"""
from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from .bound_states import BELOW_BAND_MARGIN, PARITY_TIE, BoundState, site_transform
from .errors import NoBoundStateError
from .model import ModelParams, coupling_strength, momentum_to_site


def rwa_hamiltonian(model: ModelParams):
    """(N + N_q)-dim Hermitian single-excitation matrix: qubit diagonal Delta,
    photon diagonal omega_k, couplings c_k e^{ik x_j}."""
    grid = model.grid()
    n = model.n_sites
    nq = model.n_qubits
    h = np.zeros((n + nq, n + nq), dtype=complex)
    for j in range(nq):
        h[j, j] = model.delta
        ck = coupling_strength(model.couplings[j], n)
        coup = ck * np.exp(1j * grid.k * model.positions[j])
        h[nq:, j] = coup
        h[j, nq:] = np.conj(coup)
    h[nq:, nq:] = np.diag(grid.omega.astype(complex))
    return h


def _secular_rwa(energy, delta, ck2, omega):
    return energy - delta - np.sum(ck2 / (energy - omega))


def _single_qubit_root(model, side):
    """Out-of-band root of E = Delta + sum_k c_k^2/(E - w_k); exact secular
    equation of the arrow matrix, equal to its out-of-band eigenvalue."""
    grid = model.grid()
    ck2 = coupling_strength(model.couplings[0], model.n_sites) ** 2
    ck2 = np.full(model.n_sites, ck2)
    lam = model.lambda_hop
    if side == "below":
        lo, hi = grid.omega_min - 10 * lam, grid.omega_min - BELOW_BAND_MARGIN
    else:
        lo, hi = grid.omega_max + BELOW_BAND_MARGIN, grid.omega_max + 10 * lam + model.delta
    f_lo = _secular_rwa(lo, model.delta, ck2, grid.omega)
    f_hi = _secular_rwa(hi, model.delta, ck2, grid.omega)
    if not f_lo * f_hi < 0:
        raise NoBoundStateError(f"no RWA {side}-band root in [{lo}, {hi}]")
    energy = brentq(_secular_rwa, lo, hi, args=(model.delta, ck2, grid.omega),
                    xtol=1e-15, rtol=8.9e-16)
    ck = coupling_strength(model.couplings[0], model.n_sites)
    phase = np.exp(1j * grid.k * model.positions[0])
    lam_k = -ck * phase / (grid.omega - energy)
    lam0 = 1.0 / np.sqrt(1.0 + float(np.sum(np.abs(lam_k) ** 2)))
    lam_k = lam_k * lam0
    lam_n = site_transform(lam_k, model.n_sites)
    arg = abs(model.omega0 - energy) / (2 * lam)
    loc = 1.0 / float(np.arccosh(arg)) if arg > 1 else None
    return BoundState(energy=float(energy), qubit_amplitudes=(float(lam0),),
                      lambda_k=lam_k, lambda_n=lam_n, parity=None,
                      localization_length=loc, energy_absolute=float(energy))


def rwa_bound_states(model: ModelParams):
    """Out-of-band eigenstates of the RWA Hamiltonian, lowest first.

    One qubit: exactly two states (below and above the band), obtained from
    the arrow-matrix secular equation (identical to dense diagonalization to
    machine precision). Two qubits: dense diagonalization; parity labeled by
    the qubit-amplitude product.
    """
    if model.n_qubits == 1:
        return [_single_qubit_root(model, "below"),
                _single_qubit_root(model, "above")]
    grid = model.grid()
    h = rwa_hamiltonian(model)
    evals, evecs = np.linalg.eigh(h)
    outside = (evals < grid.omega_min - BELOW_BAND_MARGIN) | \
              (evals > grid.omega_max + BELOW_BAND_MARGIN)
    out = []
    for i in np.nonzero(outside)[0]:
        vec = evecs[:, i]
        ref = vec[0] if abs(vec[0]) >= abs(vec[1]) else vec[1]
        if abs(ref) > 0:
            vec = vec * (np.conj(ref) / abs(ref))
        lam0, lam1 = vec[0], vec[1]
        prod = (lam0 * np.conj(lam1)).real
        parity = "antisymmetric" if prod < -PARITY_TIE else "symmetric"
        lam_n = site_transform(vec[2:], model.n_sites)
        arg = abs(model.omega0 - evals[i]) / (2 * model.lambda_hop)
        loc = 1.0 / float(np.arccosh(arg)) if arg > 1 else None
        out.append(BoundState(energy=float(evals[i]),
                              qubit_amplitudes=(complex(lam0), complex(lam1)),
                              lambda_k=vec[2:], lambda_n=lam_n, parity=parity,
                              localization_length=loc,
                              energy_absolute=float(evals[i])))
    return out


def rwa_gs_photons(model: ModelParams):
    """The RWA ground state is the bare vacuum: zero photons everywhere.
    Provided so comparison tables have a uniform interface."""
    return np.zeros(model.n_sites)


def rwa_sebs_photon_numbers(bound: BoundState, model: ModelParams):
    """Photon occupation per site of an RWA bound state, |lambda_n|^2."""
    return np.abs(bound.lambda_n) ** 2
