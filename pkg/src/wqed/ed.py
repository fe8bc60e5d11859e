"""Exact diagonalization of the untransformed Hamiltonian on small open
chains with a per-site Fock-space cutoff; ground truth for every benchmark.

The Hamiltonian is assembled as sparse kron products in the tensor basis
(qubits x site Fock states). Eigensolves use a deterministic start vector so
identical configs produce identical results bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .errors import ConfigError, SolverError
from .model import ModelParams

MAX_DIMENSION = 2_600_000
DENSE_CUTOFF = 4000
TRUNCATION_TARGET = 1e-6


@dataclass(frozen=True)
class EdConfig:
    """Chain geometry and truncation for one exact diagonalization."""

    n_sites: int
    n_max: int
    positions: tuple
    solver: str = "auto"
    max_dimension: int = MAX_DIMENSION

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(int(p) for p in self.positions))
        if self.n_sites < 1 or self.n_sites > 14:
            raise ConfigError(f"ED supports 1..14 sites, got {self.n_sites}")
        if self.n_max < 2:
            raise ConfigError("n_max >= 2 required so counter-rotating pair "
                              "creation is representable")
        if self.solver not in ("auto", "dense", "sparse"):
            raise ConfigError(f"unknown solver {self.solver!r}")
        for p in self.positions:
            if not 0 <= p < self.n_sites:
                raise ConfigError(f"qubit position {p} outside the chain")
        if len(set(self.positions)) != len(self.positions):
            raise ConfigError("qubit positions must be distinct")

    def dimension(self, n_qubits=None):
        nq = len(self.positions) if n_qubits is None else n_qubits
        return 2**nq * (self.n_max + 1) ** self.n_sites


@dataclass(frozen=True)
class EdResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = field(repr=False)
    site_photon_numbers: np.ndarray = field(repr=False)
    sigma_z: np.ndarray = field(repr=False)
    parity: np.ndarray = field(repr=False)
    max_residual: float
    config: EdConfig


def _site_operator(op, site, n_sites, n_max):
    left = sp.identity((n_max + 1) ** site, format="csr")
    right = sp.identity((n_max + 1) ** (n_sites - site - 1), format="csr")
    return sp.kron(sp.kron(left, op, format="csr"), right, format="csr")


def _qubit_operator(op, j, n_qubits):
    left = sp.identity(2**j, format="csr")
    right = sp.identity(2 ** (n_qubits - j - 1), format="csr")
    return sp.kron(sp.kron(left, op, format="csr"), right, format="csr")


def build_operator_parts(model: ModelParams, ed: EdConfig):
    """(H_base, [H_coupling_j]) with H = H_base + sum_j g_j * H_coupling_j.

    H_base carries the qubit splittings, the cavity energies and the
    open-chain hopping; each H_coupling_j is sigma_j^x (b_{x_j}^dag + b_{x_j}).
    """
    nq = len(ed.positions)
    dim = ed.dimension(nq)
    if dim > ed.max_dimension:
        raise ConfigError(
            f"ED dimension {dim} = 2^{nq} * {ed.n_max + 1}^{ed.n_sites} exceeds "
            f"the cap {ed.max_dimension}")
    n_max, n_sites = ed.n_max, ed.n_sites
    lower = sp.diags(np.sqrt(np.arange(1, n_max + 1)), 1, format="csr")
    number = sp.diags(np.arange(n_max + 1.0), 0, format="csr")
    sz = sp.diags([1.0, -1.0], 0, format="csr")
    sx = sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
    dq = 2**nq
    identity_q = sp.identity(dq, format="csr")

    photon = sp.csr_matrix(((n_max + 1) ** n_sites,) * 2)
    for n in range(n_sites):
        photon = photon + model.omega0 * _site_operator(number, n, n_sites, n_max)
    for n in range(1, n_sites):
        hop = (_site_operator(lower, n, n_sites, n_max).T
               @ _site_operator(lower, n - 1, n_sites, n_max))
        photon = photon - model.lambda_hop * (hop + hop.T)
    base = sp.kron(identity_q, photon, format="csr")
    for j in range(nq):
        base = base + (model.delta / 2) * sp.kron(
            _qubit_operator(sz, j, nq),
            sp.identity((n_max + 1) ** n_sites, format="csr"), format="csr")

    couplings = []
    for j, pos in enumerate(ed.positions):
        b = _site_operator(lower, pos, n_sites, n_max)
        couplings.append(sp.kron(_qubit_operator(sx, j, nq), b + b.T,
                                 format="csr"))
    return base.tocsr(), couplings


def build_hamiltonian(model: ModelParams, ed: EdConfig):
    """Sparse Hermitian Hamiltonian in the tensor basis."""
    if len(ed.positions) != model.n_qubits:
        raise ConfigError("EdConfig and model disagree on the qubit count")
    base, parts = build_operator_parts(model, ed)
    h = base
    for g, part in zip(model.couplings, parts):
        h = h + g * part
    return h.tocsr()


def _operator_norm_estimate(h, iterations=8):
    """Deterministic power-iteration estimate of the spectral norm."""
    v = np.ones(h.shape[0]) / np.sqrt(h.shape[0])
    norm = 1.0
    for _ in range(iterations):
        v = h @ v
        norm = np.linalg.norm(v)
        if norm == 0:
            return 1.0
        v /= norm
    return float(norm)


def _site_numbers(vec, n_sites, n_max, nq):
    v = vec.reshape(2**nq, (n_max + 1) ** n_sites)
    weights = np.arange(n_max + 1.0)
    out = np.zeros(n_sites)
    for n in range(n_sites):
        left = (n_max + 1) ** n
        right = (n_max + 1) ** (n_sites - n - 1)
        vv = v.reshape(2**nq, left, n_max + 1, right)
        out[n] = float(np.einsum("qlnr,n->", np.abs(vv) ** 2, weights))
    return out


def _qubit_sigma_z(vec, n_sites, n_max, nq):
    db = (n_max + 1) ** n_sites
    prob = np.abs(vec.reshape([2] * nq + [db])) ** 2
    out = np.zeros(nq)
    for j in range(nq):
        axes = tuple(a for a in range(nq + 1) if a != j)
        pj = prob.sum(axis=axes)
        out[j] = float(pj[0] - pj[1])
    return out


def _parity_diagonal(n_sites, n_max, nq):
    """Diagonal of the conserved joint parity (sigma^z string x photon parity)."""
    qubit = np.array([1.0])
    for _ in range(nq):
        qubit = np.kron(qubit, np.array([1.0, -1.0]))
    photon = np.array([1.0])
    site = (-1.0) ** np.arange(n_max + 1)
    for _ in range(n_sites):
        photon = np.kron(photon, site)
    return np.kron(qubit, photon)


def lowest_states(model: ModelParams, ed: EdConfig, m=2) -> EdResult:
    """m lowest eigenpairs with per-site photon numbers, per-qubit
    magnetizations and joint-parity expectations."""
    h = build_hamiltonian(model, ed)
    dim = h.shape[0]
    solver = ed.solver
    if solver == "auto":
        solver = "dense" if dim <= DENSE_CUTOFF else "sparse"
    if solver == "dense":
        evals, evecs = np.linalg.eigh(h.toarray())
        evals, evecs = evals[:m], evecs[:, :m]
    else:
        v0 = np.ones(dim) / np.sqrt(dim)
        try:
            evals, evecs = eigsh(h, k=m, which="SA", v0=v0)
        except ArpackNoConvergence as err:
            raise SolverError(f"ARPACK did not converge: {err}") from err
        order = np.argsort(evals)
        evals, evecs = evals[order], evecs[:, order]

    norm = _operator_norm_estimate(h)
    residual = max(
        float(np.linalg.norm(h @ evecs[:, i] - evals[i] * evecs[:, i]))
        for i in range(m))
    nq = len(ed.positions)
    photons = np.array([_site_numbers(evecs[:, i], ed.n_sites, ed.n_max, nq)
                        for i in range(m)])
    sigma_z = np.array([_qubit_sigma_z(evecs[:, i], ed.n_sites, ed.n_max, nq)
                        for i in range(m)])
    par_diag = _parity_diagonal(ed.n_sites, ed.n_max, nq)
    parity = np.array([float(par_diag @ (np.abs(evecs[:, i]) ** 2))
                       for i in range(m)])
    return EdResult(eigenvalues=evals, eigenvectors=evecs,
                    site_photon_numbers=photons, sigma_z=sigma_z,
                    parity=parity, max_residual=residual / norm, config=ed)


_PROXY_CACHE = {}


def proxy_gs_energy(model: ModelParams, n_sites, n_max):
    """GS energy on a small single-qubit proxy chain, used by the truncation
    rule; deterministic, so cached process-wide on the physical parameters."""
    key = (model.delta, model.couplings[0], model.omega0, model.lambda_hop,
           n_sites, n_max)
    if key not in _PROXY_CACHE:
        proxy = EdConfig(n_sites=n_sites, n_max=n_max,
                         positions=(n_sites // 2,))
        single = ModelParams.single_qubit(model.delta, model.couplings[0],
                                          model.omega0, model.lambda_hop,
                                          n_sites=max(model.n_sites, 2))
        _PROXY_CACHE[key] = float(
            lowest_states(single, proxy, m=1).eigenvalues[0])
    return _PROXY_CACHE[key]


def suggested_truncation(model: ModelParams, target=TRUNCATION_TARGET,
                         max_sites=12, cap_dim=MAX_DIMENSION, proxy_sites=7,
                         n_max_ceiling=6):
    """(EdConfig, certificate) under the truncation rule.

    n_max is the smallest cutoff whose GS energy moves by less than `target`
    (relative) when bumped by one, measured on a short proxy chain where the
    bump is affordable; the photon cloud is localized to about one site, so
    the truncation error is insensitive to the chain length. n_sites is then
    the largest length (up to max_sites) that fits the dimension cap.
    """
    nq = model.n_qubits
    chosen = None
    for n_max in range(2, n_max_ceiling):
        e_this = proxy_gs_energy(model, proxy_sites, n_max)
        e_next = proxy_gs_energy(model, proxy_sites, n_max + 1)
        bump = abs(e_next - e_this) / abs(e_next)
        if bump < target:
            chosen = (n_max, bump)
            break
    if chosen is None:
        raise ConfigError(
            f"no per-site cutoff below {n_max_ceiling} satisfies the "
            f"{target} truncation rule for couplings {model.couplings}")
    n_max, bump = chosen
    n_sites = max_sites
    while n_sites > nq and 2**nq * (n_max + 1) ** n_sites > cap_dim:
        n_sites -= 1
    if nq == 1:
        positions = (n_sites // 2,)
    else:
        x = abs(model.separation)
        if x >= n_sites:
            raise ConfigError(f"separation {x} does not fit on {n_sites} sites")
        lead = (n_sites - x) // 2
        positions = (lead, lead + x)
    cert = {"n_max": n_max, "proxy_sites": proxy_sites,
            "proxy_bump_relative": bump, "target": target,
            "dimension": 2**nq * (n_max + 1) ** n_sites}
    return EdConfig(n_sites=n_sites, n_max=n_max, positions=positions), cert
