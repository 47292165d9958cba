"""Offline/online solver for parametric nonlinear eigenvalue problems.

The offline phase probes tangential samples of the pole part H by contour
quadrature, fixes the eigenvalue count m by the Loewner rank consistency
check, fits one shared scalar bivariate barycentric surrogate of
l^T H(s, p) r (with l, r the means of the probing directions), and lifts it
once per probing direction into vector-valued surrogates L_k, R_k.

The online phase evaluates L_i(theta_i, p), R_j(sigma_j, p) for any complex
parameter p, assembles the tangential data, and delegates to the Loewner
realization.  Its cost is independent of the quadrature size and of the
problem dimension except for assembling the eigenvector matrices.
"""

import json
import os
import tempfile
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .contour import (Disk, Ellipse, ProbedSampleSet, SamplingConfig,
                      build_trapezoid_rule, probe_samples)
from .errors import EvaluationError, ModelFormatError
from .loewner import TangentialData, filter_in_domain, realize
from .paaa import (BarycentricModel2D, VectorBarycentricModel,
                   consistency_rank_check, eval_model, lift_vector, paaa_fit)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class OfflineModel:
    """Serialized result of the offline phase."""

    domain: object
    config: SamplingConfig
    m: int
    scalar_model: BarycentricModel2D
    left_models: tuple   # r vector models for l_k^T H
    right_models: tuple  # r vector models for H r_k
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class EigenSolution:
    p_hat: complex
    eigenvalues: np.ndarray
    V: np.ndarray
    W: np.ndarray
    in_domain: np.ndarray
    diagnostics: dict = field(default_factory=dict)


def offline(problem, domain, config, N, fit_opts=None):
    """Run the offline phase and return an OfflineModel."""
    if config.q < 2:
        raise ValueError("parametric fitting needs at least 2 parameter samples")
    opts = dict(fit_opts or {})
    rank_tol = opts.pop("rank_tol", 1e-10)
    tol = opts.pop("tol", 1e-12)
    max_z_nodes = opts.pop("max_z_nodes", None)
    max_p_nodes = opts.pop("max_p_nodes", None)
    if opts:
        raise ValueError(f"unknown fit options: {sorted(opts)}")

    rule = build_trapezoid_rule(domain, N)
    samples = probe_samples(problem, rule, config, domain)
    m = consistency_rank_check(samples, config, rank_tol)

    # scalar data l^T H(s_i, p_j) r with l, r the direction means
    r_mean = config.right_dirs.mean(axis=0)
    D = samples.left.mean(axis=0) @ r_mean  # (2r, q)
    if max_z_nodes is None:
        # the pole part is rational of degree exactly m in z, so m+1 nodes
        # suffice; extra z-nodes fit quadrature noise with spurious poles
        max_z_nodes = m + 1
    scalar_model = paaa_fit(
        D, config.sample_points, config.parameter_points,
        tol=tol, max_z_nodes=max_z_nodes, max_p_nodes=max_p_nodes,
        min_z_nodes=m + 1,
    )
    if not scalar_model.converged:
        warnings.warn(
            "scalar barycentric fit did not reach tolerance "
            f"{tol:g} (max grid error {scalar_model.max_error:.2e})",
            stacklevel=2,
        )
    zi = _node_indices(scalar_model.z_nodes, config.sample_points)
    pj = _node_indices(scalar_model.p_nodes, config.parameter_points)
    left_models = tuple(
        lift_vector(scalar_model, samples.left[k][np.ix_(zi, pj)])
        for k in range(config.r)
    )
    right_models = tuple(
        lift_vector(scalar_model, samples.right[k][np.ix_(zi, pj)])
        for k in range(config.r)
    )
    metadata = {
        "problem_name": getattr(problem, "name", "custom"),
        "N": N,
        "rank_tol": rank_tol,
        "fit_tol": tol,
        "z_degree": len(scalar_model.z_nodes) - 1,
        "p_degree": len(scalar_model.p_nodes) - 1,
        "converged": scalar_model.converged,
        "max_fit_error": scalar_model.max_error,
    }
    return OfflineModel(
        domain=domain, config=config, m=m, scalar_model=scalar_model,
        left_models=left_models, right_models=right_models, metadata=metadata,
    )


def online(model, p_hat, rank_tol=None):
    """Extract eigenvalues and eigenvectors at an arbitrary parameter."""
    p_hat = complex(p_hat)
    if rank_tol is None:
        rank_tol = model.metadata.get("rank_tol", 1e-10)
    _warn_if_extrapolating(model, p_hat)
    config = model.config
    theta, sigma = config.left_points, config.right_points
    b = np.array([eval_model(model.left_models[i], theta[i], p_hat)
                  for i in range(config.r)])
    c = np.array([eval_model(model.right_models[j], sigma[j], p_hat)
                  for j in range(config.r)])
    data = TangentialData(
        theta=theta, sigma=sigma,
        left_dirs=config.left_dirs, right_dirs=config.right_dirs,
        left_vals=b, right_vals=c,
    )
    realization = realize(data, rank_tol, order=model.m)
    flags = filter_in_domain(realization, model.domain)
    diagnostics = dict(realization.diagnostics)
    diagnostics["singular_values"] = realization.singular_values
    return EigenSolution(
        p_hat=p_hat,
        eigenvalues=realization.eigenvalues,
        V=realization.V,
        W=realization.W,
        in_domain=flags,
        diagnostics=diagnostics,
    )


def residuals(problem, solution):
    """Per-eigenpair relative residuals ||T(lam_j, p) v_j|| / ||v_j||."""
    if len(solution.eigenvalues) == 0:
        raise ValueError("solution has no eigenpairs")
    out = []
    for j, lam in enumerate(solution.eigenvalues):
        v = solution.V[:, j]
        nv = np.linalg.norm(v)
        if nv == 0.0:
            raise ValueError(f"eigenvector {j} is zero")
        T = problem.eval(lam, solution.p_hat)
        out.append(float(np.linalg.norm(T @ v) / nv))
    return out


def scalar_probe_eigenvalues(model, p_hat):
    """Eigenvalues-only shortcut: poles in z of the scalar surrogate at p_hat.

    Fixing the parameter collapses the bivariate barycentric form to a 1-D
    barycentric function with effective weights beta_i = sum_j a_ij/(p-pi_j);
    its poles are the finite generalized eigenvalues of the arrowhead pencil.
    Eigenvalue multiplicity is not visible along this path.
    """
    scalar = model.scalar_model if isinstance(model, OfflineModel) else model
    p_hat = complex(p_hat)
    d = np.abs(p_hat - scalar.p_nodes)
    j = int(np.argmin(d))
    if d[j] <= 1e-14:
        beta = scalar.coeffs[:, j].copy()
    else:
        beta = scalar.coeffs @ (1.0 / (p_hat - scalar.p_nodes))
    if np.max(np.abs(beta)) == 0.0:
        raise EvaluationError("all effective barycentric weights vanish")
    k = len(scalar.z_nodes)
    A = np.zeros((k + 1, k + 1), dtype=complex)
    A[0, 1:] = beta
    A[1:, 0] = 1.0
    A[1:, 1:] = np.diag(scalar.z_nodes)
    B = np.eye(k + 1, dtype=complex)
    B[0, 0] = 0.0
    vals = scipy.linalg.eigvals(A, B)
    vals = vals[np.isfinite(vals)]
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def _warn_if_extrapolating(model, p_hat):
    p = model.config.parameter_points
    lo, hi = p.real.min(), p.real.max()
    span = max(hi - lo, 1e-12)
    outside = (
        p_hat.real < lo - 0.5 * span
        or p_hat.real > hi + 0.5 * span
        or abs(p_hat.imag - p.imag.mean()) > 0.5 * span
    )
    if outside:
        warnings.warn(
            f"parameter {p_hat} is far outside the sampled range "
            f"[{lo:g}, {hi:g}]; extrapolation may be inaccurate",
            stacklevel=3,
        )


def _node_indices(nodes, points):
    idx = []
    for x in nodes:
        i = int(np.argmin(np.abs(points - x)))
        if points[i] != x:
            raise ValueError("barycentric node is not a grid point")
        idx.append(i)
    return np.array(idx, dtype=int)


# ---------------------------------------------------------------------------
# model persistence (JSON, complex numbers as [re, im] pairs)

def save_model(model, path):
    """Write the offline model to a JSON text file (atomic replace)."""
    doc = {
        "format_version": FORMAT_VERSION,
        "problem_name": model.metadata.get("problem_name", "custom"),
        "domain": _domain_to_doc(model.domain),
        "sampling": {
            "sample_points": _c2l(model.config.sample_points),
            "parameter_points": _c2l(model.config.parameter_points),
            "left_dirs": _c2l(model.config.left_dirs),
            "right_dirs": _c2l(model.config.right_dirs),
            "seed": model.config.seed,
        },
        "m": model.m,
        "scalar_nodes": {
            "z": _c2l(model.scalar_model.z_nodes),
            "p": _c2l(model.scalar_model.p_nodes),
        },
        "alpha": _c2l(model.scalar_model.coeffs),
        "scalar_values": _c2l(model.scalar_model.node_values),
        "scalar_fit": {
            "converged": model.scalar_model.converged,
            "max_error": model.scalar_model.max_error,
            "error_history": list(model.scalar_model.error_history),
        },
        "left_models": [{"node_vectors": _c2l(lm.node_values)}
                        for lm in model.left_models],
        "right_models": [{"node_vectors": _c2l(rm.node_values)}
                         for rm in model.right_models],
        "metadata": model.metadata,
    }
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            json.dump(doc, f)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_model(path):
    """Read an offline model written by save_model."""
    try:
        with open(path) as f:
            doc = json.load(f)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ModelFormatError(f"malformed model file {path!r}: {exc}") from exc
    try:
        version = doc["format_version"]
        if version != FORMAT_VERSION:
            raise ModelFormatError(
                f"unsupported model format version {version!r}"
            )
        domain = _domain_from_doc(doc["domain"])
        sampling = doc["sampling"]
        config = SamplingConfig(
            sample_points=_l2c(sampling["sample_points"]),
            parameter_points=_l2c(sampling["parameter_points"]),
            left_dirs=_l2c(sampling["left_dirs"]),
            right_dirs=_l2c(sampling["right_dirs"]),
            seed=sampling["seed"],
        )
        fit = doc.get("scalar_fit", {})
        scalar_model = BarycentricModel2D(
            z_nodes=_l2c(doc["scalar_nodes"]["z"]),
            p_nodes=_l2c(doc["scalar_nodes"]["p"]),
            coeffs=_l2c(doc["alpha"]),
            node_values=_l2c(doc["scalar_values"]),
            converged=fit.get("converged", True),
            max_error=fit.get("max_error", 0.0),
            error_history=tuple(fit.get("error_history", ())),
        )
        left_models = tuple(
            lift_vector(scalar_model, _l2c(entry["node_vectors"]))
            for entry in doc["left_models"]
        )
        right_models = tuple(
            lift_vector(scalar_model, _l2c(entry["node_vectors"]))
            for entry in doc["right_models"]
        )
        return OfflineModel(
            domain=domain, config=config, m=doc["m"],
            scalar_model=scalar_model,
            left_models=left_models, right_models=right_models,
            metadata=doc["metadata"],
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ModelFormatError(f"malformed model file {path!r}: {exc}") from exc


def _domain_to_doc(domain):
    if isinstance(domain, Disk):
        return {"type": "disk",
                "center": [domain.center.real, domain.center.imag],
                "radius": domain.radius}
    if isinstance(domain, Ellipse):
        return {"type": "ellipse",
                "center": [domain.center.real, domain.center.imag],
                "semi_real": domain.semi_real,
                "semi_imag": domain.semi_imag}
    raise TypeError(f"unsupported domain type: {type(domain)!r}")


def _domain_from_doc(doc):
    center = complex(doc["center"][0], doc["center"][1])
    if doc["type"] == "disk":
        return Disk(center, doc["radius"])
    if doc["type"] == "ellipse":
        return Ellipse(center, doc["semi_real"], doc["semi_imag"])
    raise ModelFormatError(f"unknown domain type {doc['type']!r}")


def _c2l(a):
    """Complex ndarray -> nested lists of [re, im] pairs."""
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def _l2c(lst):
    a = np.asarray(lst, dtype=float)
    if a.shape[-1] != 2:
        raise ModelFormatError("complex entries must be [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]
