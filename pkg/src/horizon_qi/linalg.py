"""Dense complex linear algebra for small Hermitian operators.

Matrices are plain ``numpy.ndarray`` objects of complex dtype; kets are 1-D
arrays.  Composite systems use big-endian ordering: site 0 is the most
significant tensor factor, so the basis ket ``|0 1 1 1 1>`` of five qubits
sits at index ``0b01111``.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ArgumentError, ContractError, DimensionError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "Spectrum",
    "as_matrix",
    "as_ket",
    "projector",
    "check_density",
    "is_density",
    "tensor",
    "partial_trace",
    "eigh",
    "von_neumann_entropy",
    "purity",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used by the contract checks.

    Pass a modified copy (``dataclasses.replace(DEFAULT_TOL, herm=1e-8)``) to
    any function taking ``tol`` to override them.
    """

    herm: float = 1e-10
    trace: float = 1e-10
    norm: float = 1e-10
    psd: float = 1e-10
    eig: float = 1e-10
    max_dim: int = 1024


DEFAULT_TOL = Tolerances()

# Jacobi stops once the off-diagonal Frobenius mass drops below this
# fraction of the full Frobenius norm.
JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 64


class Spectrum(NamedTuple):
    """Eigen-decomposition with eigenvalues in descending order.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    return m


def as_ket(psi, tol: Tolerances = DEFAULT_TOL, normalize: bool = False) -> np.ndarray:
    """Return ``psi`` as a 1-D complex ket, checking (or imposing) unit norm."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.size == 0:
        raise DimensionError("empty ket")
    nrm = np.linalg.norm(v)
    if normalize:
        if nrm == 0:
            raise ContractError("cannot normalize the zero vector")
        return v / nrm
    if abs(nrm - 1.0) > tol.norm:
        raise ContractError(f"ket norm {nrm:.3e} differs from 1")
    return v


def projector(psi) -> np.ndarray:
    """``|psi><psi|`` for an (already normalized) ket."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def _hermitian_defect(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def check_density(rho, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Validate a density operator and return it as a Hermitian complex array.

    Raises
    ------
    ContractError
        If ``rho`` is not square, not Hermitian, not unit trace or has an
        eigenvalue below ``-tol.psd``.
    """
    m = as_matrix(rho)
    if m.shape[0] != m.shape[1]:
        raise ContractError(f"density operator must be square, got {m.shape}")
    if _hermitian_defect(m) > tol.herm:
        raise ContractError("density operator is not Hermitian")
    m = 0.5 * (m + m.conj().T)
    tr = np.trace(m).real
    if abs(tr - 1.0) > tol.trace:
        raise ContractError(f"density operator has trace {tr!r}")
    lam_min = np.linalg.eigvalsh(m)[0]
    if lam_min < -tol.psd:
        raise ContractError(f"density operator has eigenvalue {lam_min:.3e} < 0")
    return m


def is_density(rho, tol: Tolerances = DEFAULT_TOL) -> bool:
    try:
        check_density(rho, tol)
    except (ContractError, DimensionError):
        return False
    return True


def tensor(a, b, max_dim: int | None = None) -> np.ndarray:
    """Kronecker product ``a ⊗ b`` with ``a`` as the slow index.

    Works for matrices and for 1-D kets alike.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    limit = DEFAULT_TOL.max_dim if max_dim is None else max_dim
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise DimensionError("tensor expects two kets or two matrices")
    if any(x * y > limit for x, y in zip(a.shape, b.shape)):
        raise DimensionError(
            f"tensor product {a.shape} x {b.shape} exceeds the maximum dimension {limit}"
        )
    return np.kron(a, b)


def partial_trace(rho, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduce ``rho`` to the sites in ``keep``, in the order given.

    Parameters
    ----------
    rho : array_like
        Square operator on ``prod(dims)`` dimensions.
    dims : sequence of int
        Local dimension of each site, site 0 most significant.
    keep : sequence of int
        Sites to keep.  The output factors appear in this order, so
        ``keep=(2, 0)`` also swaps the two retained sites.
    """
    m = as_matrix(rho)
    dims = [int(d) for d in dims]
    keep = [int(k) for k in keep]
    n = len(dims)
    if not keep:
        raise ArgumentError("keep must name at least one site")
    if len(set(keep)) != len(keep) or any(k < 0 or k >= n for k in keep):
        raise ArgumentError(f"invalid keep={keep} for {n} sites")
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise DimensionError(f"dims {dims} imply {total}x{total}, got {m.shape}")
    if 2 * n > len(string.ascii_letters):
        raise DimensionError("too many sites")

    rows = string.ascii_letters[:n]
    cols = [c for c in string.ascii_letters[n : 2 * n]]
    for s in range(n):
        if s not in keep:
            cols[s] = rows[s]
    cols = "".join(cols)
    out = "".join(rows[k] for k in keep) + "".join(cols[k] for k in keep)
    reduced = np.einsum(f"{rows}{cols}->{out}", m.reshape(dims + dims))
    d = int(np.prod([dims[k] for k in keep]))
    return reduced.reshape(d, d)


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi rotations; returns (diagonal, eigenvectors)."""
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= JACOBI_OFF_TOL * scale:
            break
        for p, q in pairs:
            z = a[p, q]
            r = abs(z)
            if r == 0.0:
                continue
            app, aqq = a[p, p].real, a[q, q].real
            phase = z / r
            theta = (aqq - app) / (2.0 * r)
            t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
            if theta < 0:
                t = -t
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # diag(1, conj(phase)) makes the pivot real; then a real rotation
            g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
            idx = [p, q]
            a[:, idx] = a[:, idx] @ g
            a[idx, :] = g.conj().T @ a[idx, :]
            a[p, q] = a[q, p] = 0.0
            a[p, p] = a[p, p].real
            a[q, q] = a[q, q].real
            v[:, idx] = v[:, idx] @ g
    return np.diag(a).real.copy(), v


def eigh(h, tol: Tolerances = DEFAULT_TOL) -> Spectrum:
    """Full spectral decomposition of a Hermitian matrix by Jacobi rotations.

    Eigenvalues come back in descending order.  Each eigenvector is
    rephased so its first non-negligible component is real and positive,
    which makes the output reproducible for identical input.
    """
    m = as_matrix(h)
    if m.shape[0] != m.shape[1]:
        raise ContractError(f"eigh needs a square matrix, got {m.shape}")
    if _hermitian_defect(m) > tol.herm:
        raise ContractError("eigh input is not Hermitian")
    m = 0.5 * (m + m.conj().T)
    w, v = _jacobi(m)
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    for k in range(v.shape[1]):
        col = v[:, k]
        lead = np.flatnonzero(np.abs(col) > 1e-12)
        if lead.size:
            ph = col[lead[0]] / abs(col[lead[0]])
            v[:, k] = col * ph.conjugate()
    return Spectrum(w, v)


def _clamped_spectrum(rho, tol: Tolerances) -> np.ndarray:
    m = check_density(rho, tol)
    lam = eigh(m, tol).eigenvalues
    if lam[-1] < -tol.psd:
        raise ContractError(f"eigenvalue {lam[-1]:.3e} below -{tol.psd}")
    return np.clip(lam, 0.0, 1.0)


def von_neumann_entropy(rho, tol: Tolerances = DEFAULT_TOL) -> float:
    """Entropy ``-tr(rho log2 rho)`` in bits."""
    lam = _clamped_spectrum(rho, tol)
    lam = lam[lam > 0]
    return float(max(-np.sum(lam * np.log2(lam)), 0.0))


def purity(rho, tol: Tolerances = DEFAULT_TOL) -> float:
    """``tr(rho^2)``."""
    m = check_density(rho, tol)
    return float(np.sum(np.abs(m) ** 2))
