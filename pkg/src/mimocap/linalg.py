"""Small dense complex-matrix primitives shared by the numeric modules.

All matrices here are a few dozen rows at most, so spectral methods are
cheap and robust; nothing in this module is tuned for large or sparse
problems.
"""

import numpy as np
import scipy.linalg

# Eigenvalues above -EIG_TOL are treated as zero (roundoff of a PSD matrix);
# anything below signals a genuinely indefinite input.
EIG_TOL = 1e-10

__all__ = [
    "EIG_TOL",
    "hermitize",
    "check_hermitian",
    "check_covariance",
    "psd_sqrt",
    "logdet_i_plus",
    "solve_hpd",
]


def hermitize(m):
    """Return the Hermitian part (m + m^H) / 2 of a square matrix."""
    return 0.5 * (m + np.conj(m.T))


def check_hermitian(m, tol=1e-12):
    """Raise ValueError unless ``m`` is square with m == m^H entrywise.

    The comparison is absolute up to ``tol`` scaled by the largest entry
    magnitude (floor 1), so well-normalized matrices are held to 1e-12.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max())) if m.size else 1.0
    dev = float(np.abs(m - np.conj(m.T)).max()) if m.size else 0.0
    if dev > tol * scale:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {dev:.3e})")


def check_covariance(q, trace=None, trace_rtol=1e-9, eig_tol=EIG_TOL):
    """Validate that ``q`` is Hermitian PSD, optionally with a given trace.

    Used for membership in the trace-constrained covariance set: PSD up to
    the ``-eig_tol`` eigenvalue slack and trace equal to ``trace`` up to
    ``trace_rtol`` relative error.
    """
    check_hermitian(q)
    w = np.linalg.eigvalsh(hermitize(q))
    if w.min() < -eig_tol:
        raise ValueError(f"covariance has negative eigenvalue {w.min():.3e}")
    if trace is not None:
        tr = float(np.trace(q).real)
        if abs(tr - trace) > trace_rtol * max(1.0, abs(trace)):
            raise ValueError(f"covariance trace {tr!r} differs from required {trace!r}")


def psd_sqrt(m):
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues in [-EIG_TOL, 0) are clamped to zero; anything more
    negative raises ValueError.
    """
    check_hermitian(m)
    w, v = np.linalg.eigh(hermitize(m))
    if w.min() < -EIG_TOL:
        raise ValueError(f"matrix is not PSD (eigenvalue {w.min():.3e})")
    w = np.clip(w, 0.0, None)
    return hermitize((v * np.sqrt(w)) @ np.conj(v.T))


def logdet_i_plus(m):
    """log det(I + m) in nats for Hermitian PSD ``m``, via Cholesky of I + m.

    Rejects inputs with an eigenvalue below -EIG_TOL.  The result is
    clamped at zero (it is nonnegative in exact arithmetic).
    """
    check_hermitian(m)
    m = hermitize(m)
    if np.linalg.eigvalsh(m).min() < -EIG_TOL:
        raise ValueError("matrix is not PSD")
    chol = np.linalg.cholesky(np.eye(m.shape[0]) + m)
    val = 2.0 * float(np.sum(np.log(np.diag(chol).real)))
    return max(val, 0.0)


def solve_hpd(m, b):
    """Solve m @ x = b for Hermitian positive definite ``m``.

    Uses a Cholesky factorization; a singular or indefinite ``m`` raises
    ValueError.
    """
    check_hermitian(m)
    try:
        factor = scipy.linalg.cho_factor(hermitize(m), lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise ValueError(f"matrix is singular or indefinite: {exc}") from exc
    return scipy.linalg.cho_solve(factor, np.asarray(b))
