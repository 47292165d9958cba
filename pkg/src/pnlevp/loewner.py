"""Loewner-matrix realization of eigenvalues from tangential samples.

Given left samples b_i = H^T(theta_i) l_i and right samples
c_j = H(sigma_j) r_j of the rational pole part H, the Loewner pencil

    L_ij  = (b_i^T r_j - l_i^T c_j) / (theta_i - sigma_j)
    Ls_ij = (theta_i b_i^T r_j - sigma_j l_i^T c_j) / (theta_i - sigma_j)

realizes H: after rank truncation via two SVDs, the generalized eigenvalue
problem (X* Ls Ys) s = lambda (X* L Ys) s yields the eigenvalues in the
target domain, and the eigenvector matrices follow from the block data.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import RealizationError


@dataclass(frozen=True)
class TangentialData:
    """Left/right sample points, probing directions, and tangential values."""

    theta: np.ndarray       # (r,)
    sigma: np.ndarray       # (r,)
    left_dirs: np.ndarray   # (r, n)
    right_dirs: np.ndarray  # (r, n)
    left_vals: np.ndarray   # (r, n), rows b_i = H^T(theta_i) l_i
    right_vals: np.ndarray  # (r, n), rows c_j = H(sigma_j) r_j

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=complex)
        sigma = np.asarray(self.sigma, dtype=complex)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "sigma", sigma)
        if np.min(np.abs(theta[:, None] - sigma[None, :])) == 0.0:
            raise ValueError(
                "left and right sample points must be pairwise distinct"
            )


@dataclass(frozen=True)
class EigenRealization:
    eigenvalues: np.ndarray  # (m,) sorted ascending by (Re, Im)
    V: np.ndarray            # (n, m) right eigenvectors
    W: np.ndarray            # (n, m) left eigenvectors
    singular_values: tuple   # spectra of [L Ls] and [L; Ls]
    rank: int
    diagnostics: dict = field(default_factory=dict)


def build_loewner(data):
    """Loewner and shifted Loewner matrices from tangential data."""
    P = data.left_vals @ data.right_dirs.T   # P_ij = b_i^T r_j
    Q = data.left_dirs @ data.right_vals.T   # Q_ij = l_i^T c_j
    D = data.theta[:, None] - data.sigma[None, :]
    L = (P - Q) / D
    Ls = (data.theta[:, None] * P - data.sigma[None, :] * Q) / D
    return L, Ls


def numerical_rank(M, rank_tol=1e-10):
    """Count of singular values above rank_tol relative to the largest."""
    s = np.linalg.svd(M, compute_uv=False)
    if len(s) == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rank_tol * s[0]))


def realize(data, rank_tol=1e-10, order=None):
    """Recover eigenvalues and eigenvector matrices from tangential data.

    When the pole count is known in advance (e.g. fixed by the offline rank
    consistency check), pass it as `order` to truncate the pencil there even
    if noise in the data raises the numerical rank above it.
    """
    L, Ls = build_loewner(data)
    X, s_row, _ = np.linalg.svd(np.hstack([L, Ls]))
    _, s_col, Ysh = np.linalg.svd(np.vstack([L, Ls]))
    m_row = int(np.count_nonzero(s_row > rank_tol * s_row[0])) if s_row[0] > 0 else 0
    m_col = int(np.count_nonzero(s_col > rank_tol * s_col[0])) if s_col[0] > 0 else 0
    m = max(m_row, m_col)
    diagnostics = {"rank_mismatch": abs(m_row - m_col), "m_row": m_row, "m_col": m_col}
    if order is not None:
        m = min(m, order)
        diagnostics["order"] = order
    if m == 0:
        n = data.left_vals.shape[1]
        return EigenRealization(
            eigenvalues=np.array([], dtype=complex),
            V=np.zeros((n, 0), dtype=complex),
            W=np.zeros((n, 0), dtype=complex),
            singular_values=(s_row, s_col),
            rank=0,
            diagnostics=diagnostics,
        )
    X = X[:, :m]
    Ys = Ysh.conj().T[:, :m]
    Xh = X.conj().T
    A = Xh @ Ls @ Ys
    M = Xh @ L @ Ys
    if numerical_rank(M, 1e-14) < m:
        raise RealizationError(
            "projected Loewner matrix is numerically singular; use more or "
            "different sample points"
        )
    lam, S = scipy.linalg.eig(A, M)
    finite = np.isfinite(lam)
    diagnostics["discarded_infinite"] = int(np.count_nonzero(~finite))
    lam, S = lam[finite], S[:, finite]
    order = np.lexsort((lam.imag, lam.real))
    lam, S = lam[order], S[:, order]
    C = data.right_vals.T  # (n, r), columns c_j
    B = data.left_vals     # (r, n), rows b_i^T
    V = C @ Ys @ S
    MS = M @ S
    XB = Xh @ B
    if MS.shape[0] == MS.shape[1]:
        try:
            Wstar = -np.linalg.solve(MS, XB)
        except np.linalg.LinAlgError as exc:
            raise RealizationError(
                "eigenvector recovery failed; use more or different sample points"
            ) from exc
    else:
        Wstar, *_ = np.linalg.lstsq(MS, -XB, rcond=None)
    W = Wstar.conj().T
    return EigenRealization(
        eigenvalues=lam,
        V=V,
        W=W,
        singular_values=(s_row, s_col),
        rank=m,
        diagnostics=diagnostics,
    )


def filter_in_domain(realization, domain):
    """Flag each eigenvalue with strict-interior containment; nothing is
    deleted (computed eigenvalues may legitimately sit outside the domain)."""
    return np.array(
        [domain.contains(z) for z in realization.eigenvalues], dtype=bool
    )
