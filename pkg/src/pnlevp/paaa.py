"""Bivariate barycentric rational fitting of probed resolvent samples.

The scalar surrogate has the form

    f(z, p) = sum_ij a_ij D(xi_i, pi_j) / ((z - xi_i)(p - pi_j))
            / sum_ij a_ij / ((z - xi_i)(p - pi_j)),

which interpolates the data at every node pair (xi_i, pi_j).  Nodes are
picked greedily at the worst-error grid point; the unit-norm coefficients
a_ij minimize the linearized residual over the remaining grid in a least-
squares sense.  Vector-valued lifts reuse the scalar nodes/coefficients with
vector node data.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import EvaluationError, RankConsistencyError
from .loewner import numerical_rank

_NODE_TOL = 1e-14
_DENOM_FLOOR = 1e-300


@dataclass(frozen=True)
class BarycentricModel2D:
    """Scalar bivariate barycentric rational interpolant."""

    z_nodes: np.ndarray     # (mz,)
    p_nodes: np.ndarray     # (mp,)
    coeffs: np.ndarray      # (mz, mp), unit Frobenius norm
    node_values: np.ndarray  # (mz, mp)
    converged: bool = True
    max_error: float = 0.0
    error_history: tuple = field(default=())

    def __call__(self, z, p):
        return eval_model(self, z, p)


@dataclass(frozen=True)
class VectorBarycentricModel:
    """Vector-valued lift sharing nodes and coefficients with its parent."""

    z_nodes: np.ndarray
    p_nodes: np.ndarray
    coeffs: np.ndarray
    node_values: np.ndarray  # (mz, mp, n)

    def __call__(self, z, p):
        return eval_model(self, z, p)


def consistency_rank_check(samples, config, rank_tol=1e-10):
    """Common rank of the per-parameter Loewner matrices.

    The rank equals the eigenvalue count m inside the domain; the parametric
    decomposition requires it to be the same for every sampled parameter.
    """
    theta = config.left_points
    sigma = config.right_points
    ti, si = config.left_indices, config.right_indices
    r = config.r
    D = theta[:, None] - sigma[None, :]
    ranks = []
    for j in range(config.q):
        b = samples.left[np.arange(r), ti, j]    # (r, n) rows l_i^T H(theta_i, p_j)
        c = samples.right[np.arange(r), si, j]   # (r, n) rows H(sigma_j', p_j) r_j'
        L = (b @ config.right_dirs.T - config.left_dirs @ c.T) / D
        ranks.append(numerical_rank(L, rank_tol))
    if len(set(ranks)) != 1:
        raise RankConsistencyError(
            "eigenvalue count inside the domain varies across parameter "
            f"samples; per-parameter Loewner ranks: {ranks}",
            ranks=ranks,
        )
    return ranks[0]


def paaa_fit(grid_values, s_points, p_points, tol=1e-12, max_z_nodes=None,
             max_p_nodes=None, min_z_nodes=1):
    """Greedy bivariate barycentric fit of a full data grid.

    grid_values[i, j] holds D(s_i, p_j).  Each iteration adds the worst-error
    grid coordinates as new nodes (at most one per axis) and re-solves the
    linearized least-squares problem for the coefficients.  Terminates when
    the max relative grid error drops below tol and at least min_z_nodes
    z-nodes are present, or when the node budgets are exhausted (then the
    best model seen is returned with converged=False).
    """
    D = np.asarray(grid_values, dtype=complex)
    s = np.asarray(s_points, dtype=complex)
    p = np.asarray(p_points, dtype=complex)
    if D.shape != (len(s), len(p)):
        raise ValueError("grid_values must have shape (len(s_points), len(p_points))")
    if len(np.unique(s)) != len(s) or len(np.unique(p)) != len(p):
        raise ValueError("sample and parameter points must be distinct")
    if max_z_nodes is None:
        max_z_nodes = max(min_z_nodes, len(s) // 2)
    if max_p_nodes is None:
        max_p_nodes = max(2, len(p) // 2)
    max_z_nodes = min(max_z_nodes, len(s))
    max_p_nodes = min(max_p_nodes, len(p))
    if min_z_nodes > max_z_nodes:
        raise ValueError("min_z_nodes exceeds the z-node budget")
    scale = np.max(np.abs(D))
    if scale == 0.0:
        model = BarycentricModel2D(
            z_nodes=s[:1], p_nodes=p[:1],
            coeffs=np.ones((1, 1), dtype=complex),
            node_values=np.zeros((1, 1), dtype=complex),
        )
        return model

    i0, j0 = np.unravel_index(np.argmax(np.abs(D)), D.shape)
    zi = [int(i0)]
    pj = [int(j0)]
    best = None
    history = []
    while True:
        alpha = _solve_coefficients(D, s, p, zi, pj)
        model = BarycentricModel2D(
            z_nodes=s[zi], p_nodes=p[pj], coeffs=alpha,
            node_values=D[np.ix_(zi, pj)],
        )
        E = np.abs(_eval_grid(model, s, p, zi, pj) - D) / scale
        err = float(np.max(E))
        history.append(err)
        if best is None or err < best[0]:
            best = (err, model)
        if err <= tol and len(zi) >= min_z_nodes:
            return BarycentricModel2D(
                z_nodes=model.z_nodes, p_nodes=model.p_nodes,
                coeffs=model.coeffs, node_values=model.node_values,
                converged=True, max_error=err, error_history=tuple(history),
            )
        if err <= tol:
            # tolerance met early: keep adding z-nodes until the pole-count
            # constraint (min_z_nodes) is satisfied
            Ez = E.copy()
            Ez[zi, :] = -1.0
            i_star = int(np.unravel_index(np.argmax(Ez), Ez.shape)[0])
            zi.append(i_star)
            continue
        i_star, j_star = np.unravel_index(np.argmax(E), E.shape)
        added = False
        if i_star not in zi and len(zi) < max_z_nodes:
            zi.append(int(i_star))
            added = True
        if j_star not in pj and len(pj) < max_p_nodes:
            pj.append(int(j_star))
            added = True
        if not added:
            # the worst point contributes no new node (its coordinates are
            # already nodes, or an axis is at budget); fall back to the worst
            # error restricted to coordinates that can still be added
            if len(zi) < max_z_nodes:
                Ez = E.copy()
                Ez[zi, :] = -1.0
                zi.append(int(np.unravel_index(np.argmax(Ez), Ez.shape)[0]))
                added = True
            if len(pj) < max_p_nodes:
                Ep = E.copy()
                Ep[:, pj] = -1.0
                pj.append(int(np.unravel_index(np.argmax(Ep), Ep.shape)[1]))
                added = True
        if not added:
            err, model = best
            return BarycentricModel2D(
                z_nodes=model.z_nodes, p_nodes=model.p_nodes,
                coeffs=model.coeffs, node_values=model.node_values,
                converged=False, max_error=err, error_history=tuple(history),
            )


def _solve_coefficients(D, s, p, zi, pj):
    """Unit-norm coefficients minimizing the linearized residual over the
    whole grid.

    Rows come in three groups: grid points off both node axes (the standard
    2-D Loewner least-squares rows), and grid points on a single node line,
    where the barycentric limit collapses one coordinate and the linearized
    residual involves only that node's coefficient row/column.  Node pairs
    are interpolated exactly and contribute no rows.
    """
    ia = np.setdiff1d(np.arange(len(s)), zi)
    jb = np.setdiff1d(np.arange(len(p)), pj)
    Dn = D[np.ix_(zi, pj)]
    nz, npj = len(zi), len(pj)
    if len(ia) == 0 or len(jb) == 0:
        alpha = np.ones((nz, npj), dtype=complex)
        return alpha / np.linalg.norm(alpha)
    Cz = 1.0 / (s[ia][:, None] - s[zi][None, :])   # (na, nz)
    Cp = 1.0 / (p[jb][:, None] - p[pj][None, :])   # (nb, np)
    R = D[np.ix_(ia, jb)][:, :, None, None] - Dn[None, None, :, :]
    M = R * Cz[:, None, :, None] * Cp[None, :, None, :]
    rows = [M.reshape(len(ia) * len(jb), nz * npj)]
    for k in range(nz):
        # points (xi_k, p_b): 1-D barycentric in p over coefficient row k
        Rrow = D[zi[k], jb][:, None] - Dn[k][None, :]
        block = np.zeros((len(jb), nz * npj), dtype=complex)
        block[:, k * npj:(k + 1) * npj] = Rrow * Cp
        rows.append(block)
    for k in range(npj):
        # points (s_a, pi_k): 1-D barycentric in z over coefficient column k
        Rcol = D[ia, pj[k]][:, None] - Dn[:, k][None, :]
        block = np.zeros((len(ia), nz * npj), dtype=complex)
        block[:, k::npj] = Rcol * Cz
        rows.append(block)
    M = np.vstack(rows)
    # full SVD only when the null space is not covered by the reduced factors
    _, _, Vh = np.linalg.svd(M, full_matrices=M.shape[0] < M.shape[1])
    alpha = Vh[-1].conj().reshape(nz, npj)
    return alpha / np.linalg.norm(alpha)


def _eval_grid(model, s, p, zi, pj):
    """Evaluate the model on the full (s, p) grid, applying the barycentric
    interpolation limit on node rows/columns."""
    values = model.node_values
    vec = values.ndim == 3
    with np.errstate(divide="ignore", invalid="ignore"):
        Cz = 1.0 / (s[:, None] - model.z_nodes[None, :])   # (ns, nz)
        Cp = 1.0 / (p[:, None] - model.p_nodes[None, :])   # (np, mp)
        Cz[zi, :] = 0.0
        Cp[pj, :] = 0.0
        den = Cz @ model.coeffs @ Cp.T
        if vec:
            num = np.einsum("ai,ijn,bj->abn", Cz, model.coeffs[:, :, None] * values, Cp)
            F = num / den[:, :, None]
        else:
            num = Cz @ (model.coeffs * values) @ Cp.T
            F = num / den
        # rows where s is a z-node: 1-D barycentric in p over that node's row
        for k, i in enumerate(zi):
            wrow = model.coeffs[k, :]
            if vec:
                rnum = np.einsum("j,jn,bj->bn", wrow, values[k], Cp)
            else:
                rnum = Cp @ (wrow * values[k])
            rden = Cp @ wrow
            F[i] = (rnum.T / rden).T if vec else rnum / rden
        # columns where p is a p-node
        for k, j in enumerate(pj):
            wcol = model.coeffs[:, k]
            if vec:
                cnum = np.einsum("i,in,ai->an", wcol, values[:, k], Cz)
            else:
                cnum = Cz @ (wcol * values[:, k])
            cden = Cz @ wcol
            F[:, j] = (cnum.T / cden).T if vec else cnum / cden
    # node pairs: exact interpolation
    for a, i in enumerate(zi):
        for b, j in enumerate(pj):
            F[i, j] = values[a, b]
    return F


def lift_vector(model, node_vectors):
    """Replace scalar node values with vectors; nodes and coefficients are
    shared bit-exactly with the parent model."""
    node_vectors = np.asarray(node_vectors, dtype=complex)
    if node_vectors.ndim != 3 or node_vectors.shape[:2] != model.node_values.shape:
        raise ValueError(
            f"node_vectors must have shape {model.node_values.shape} + (n,), "
            f"got {node_vectors.shape}"
        )
    return VectorBarycentricModel(
        z_nodes=model.z_nodes,
        p_nodes=model.p_nodes,
        coeffs=model.coeffs,
        node_values=node_vectors,
    )


def eval_model(model, z, p):
    """Evaluate a (scalar or vector) barycentric model at a single (z, p).

    Coordinates matching a node within 1e-14 trigger the degenerate
    interpolation limit (both sums restricted to the matching node's terms).
    """
    values = model.node_values
    vec = values.ndim == 3
    iz = _match_node(z, model.z_nodes)
    jp = _match_node(p, model.p_nodes)
    if iz is not None and jp is not None:
        return values[iz, jp]
    if iz is not None:
        w = model.coeffs[iz, :] / (p - model.p_nodes)
        return _quotient(w, values[iz], vec)
    if jp is not None:
        w = model.coeffs[:, jp] / (z - model.z_nodes)
        return _quotient(w, values[:, jp], vec)
    cz = 1.0 / (z - model.z_nodes)
    cp = 1.0 / (p - model.p_nodes)
    W = model.coeffs * np.outer(cz, cp)
    den = np.sum(W)
    if abs(den) < _DENOM_FLOOR:
        raise EvaluationError(
            f"barycentric denominator underflow at (z={z}, p={p}); "
            "the evaluation point hits a spurious pole"
        )
    if vec:
        return np.tensordot(W, values, axes=([0, 1], [0, 1])) / den
    return np.sum(W * values) / den


def _quotient(weights, values, vec):
    den = np.sum(weights)
    if abs(den) < _DENOM_FLOOR:
        raise EvaluationError("barycentric denominator underflow on a node line")
    if vec:
        return weights @ values / den
    return np.sum(weights * values) / den


def _match_node(x, nodes):
    d = np.abs(x - nodes)
    i = int(np.argmin(d))
    return i if d[i] <= _NODE_TOL else None
