"""Cavity-array waveguide model: parameters, momentum grid, dispersion, coupling,
spectral density.

Units: energies in multiples of the cavity frequency (omega0 = 1 by default),
hbar = 1, lattice constant = 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

DEFAULT_N_SITES = 2000


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the qubits + cavity-array system.

    positions are absolute sites in [0, n_sites); couplings[j] is the
    qubit-array coupling of the qubit at positions[j].
    """

    delta: float
    couplings: tuple
    positions: tuple
    omega0: float = 1.0
    lambda_hop: float = 0.2
    n_sites: int = DEFAULT_N_SITES

    def __post_init__(self):
        object.__setattr__(self, "couplings", tuple(float(g) for g in self.couplings))
        object.__setattr__(self, "positions", tuple(int(x) for x in self.positions))
        if not self.lambda_hop > 0:
            raise ConfigError(f"hopping must be positive, got {self.lambda_hop}")
        if not self.omega0 - 2 * self.lambda_hop > 0:
            raise ConfigError(
                f"band must be strictly positive: omega0 - 2*lambda = "
                f"{self.omega0 - 2 * self.lambda_hop}"
            )
        if self.n_sites < 2 or self.n_sites % 2 != 0:
            raise ConfigError(f"n_sites must be even and >= 2, got {self.n_sites}")
        if not self.delta > 0:
            raise ConfigError(f"qubit splitting must be positive, got {self.delta}")
        if len(self.couplings) != len(self.positions):
            raise ConfigError("couplings and positions must have equal length")
        if len(self.positions) not in (1, 2):
            raise ConfigError("one or two qubits supported")
        if len(set(self.positions)) != len(self.positions):
            raise ConfigError("qubit positions must be distinct")
        for x in self.positions:
            if not 0 <= x < self.n_sites:
                raise ConfigError(f"position {x} outside [0, {self.n_sites})")
        for g in self.couplings:
            if g < 0:
                raise ConfigError(f"couplings must be non-negative, got {g}")

    @classmethod
    def single_qubit(cls, delta, g, omega0=1.0, lambda_hop=0.2,
                     n_sites=DEFAULT_N_SITES, position=None):
        if position is None:
            position = n_sites // 2
        return cls(delta=delta, couplings=(g,), positions=(position,),
                   omega0=omega0, lambda_hop=lambda_hop, n_sites=n_sites)

    @classmethod
    def two_qubit(cls, delta, g, separation, omega0=1.0, lambda_hop=0.2,
                  n_sites=DEFAULT_N_SITES):
        """Qubits at n_sites//2 and n_sites//2 + separation, equal coupling g."""
        p1 = n_sites // 2
        p2 = p1 + int(separation)
        return cls(delta=delta, couplings=(g, g), positions=(p1, p2),
                   omega0=omega0, lambda_hop=lambda_hop, n_sites=n_sites)

    @property
    def n_qubits(self):
        return len(self.positions)

    @property
    def band_bottom(self):
        return self.omega0 - 2 * self.lambda_hop

    @property
    def band_top(self):
        return self.omega0 + 2 * self.lambda_hop

    @property
    def separation(self):
        if self.n_qubits != 2:
            raise ConfigError("separation defined for two qubits only")
        x = self.positions[0] - self.positions[1]
        if x == 0:
            raise ConfigError("two qubits cannot share a site")
        return x

    def with_couplings(self, couplings):
        return ModelParams(delta=self.delta, couplings=tuple(couplings),
                           positions=self.positions, omega0=self.omega0,
                           lambda_hop=self.lambda_hop, n_sites=self.n_sites)

    def grid(self) -> "MomentumGrid":
        return MomentumGrid.build(self.n_sites, self.omega0, self.lambda_hop)


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform symmetric momentum grid k_m = -pi + 2*pi*m/N with even N,
    so every k has an exact partner -k (mod 2*pi)."""

    k: np.ndarray = field(repr=False)
    omega: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, n_sites, omega0, lambda_hop):
        k = -np.pi + 2 * np.pi * np.arange(n_sites) / n_sites
        omega = dispersion(k, omega0, lambda_hop)
        k.flags.writeable = False
        omega.flags.writeable = False
        return cls(k=k, omega=omega)

    @property
    def n_sites(self):
        return self.k.size

    @property
    def omega_min(self):
        return float(self.omega.min())

    @property
    def omega_max(self):
        return float(self.omega.max())


def dispersion(k, omega0, lambda_hop):
    """Band energy omega_k = omega0 - 2*lambda*cos(k)."""
    return omega0 - 2 * lambda_hop * np.cos(k)


def coupling_strength(g, n_sites):
    """Momentum-space coupling per mode, g/sqrt(N), independent of k."""
    if n_sites < 1:
        raise ConfigError(f"n_sites must be >= 1, got {n_sites}")
    return g / np.sqrt(n_sites)


def spectral_density(model: ModelParams, omega, qubit=0):
    """Bath spectral density J(omega) = g^2 / (lambda * sin k(omega)) for omega
    strictly inside the band; diverges at the band edges (van Hove points).

    Normalized against the defining mode sum 2*pi*sum_k |c_k|^2 delta(w - w_k)
    counting both +k and -k branches.
    """
    omega = float(omega)
    lam = model.lambda_hop
    if not model.band_bottom < omega < model.band_top:
        raise ValueError(
            f"omega={omega} outside the open band "
            f"({model.band_bottom}, {model.band_top})"
        )
    g = model.couplings[qubit]
    cos_k = (model.omega0 - omega) / (2 * lam)
    sin_k = np.sqrt(1.0 - cos_k * cos_k)
    return g * g / (lam * sin_k)


def momentum_to_site(amplitudes, n_sites, center):
    """Fourier transform to site space, a_n = (1/sqrt N) sum_k e^{ik(n-center)} a_k,
    for the symmetric grid. Exact for integer site offsets via FFT."""
    amplitudes = np.asarray(amplitudes)
    n = np.arange(n_sites)
    d = n - int(center)
    # k_m = 2*pi*m/N - pi  =>  sum_m a_m e^{i k_m d} = (-1)^d * N * ifft(a)[d mod N]
    vals = n_sites * np.fft.ifft(amplitudes)
    out = ((-1.0) ** (d % 2)) * vals[d % n_sites] / np.sqrt(n_sites)
    return out
