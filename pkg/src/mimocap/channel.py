"""Channel construction: line-of-sight geometry, exponential antenna
correlations, and the trace normalizations that fix the power conventions.

A channel instance consists of a deterministic line-of-sight matrix plus a
doubly correlated scattered component.  All three matrices are rescaled so
that, with a Rice factor ``K``,

    (1/n_rx) tr(rx_corr)        = 1 / sqrt(K + 1)
    (1/n_tx) tr(tx_corr)        = 1 / sqrt(K + 1)
    (1/n_rx) tr(los @ los^H)    = K / (K + 1)

which makes the average per-receive-antenna channel gain equal to one, so
that SNR = 1 / noise_var.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .linalg import EIG_TOL, hermitize, check_hermitian

__all__ = [
    "LosSpec",
    "ChannelModel",
    "build_los_matrix",
    "exp_correlation",
    "assemble_model",
    "rayleigh_model",
    "exp_rician_model",
]


@dataclass
class LosSpec:
    """Geometry of the line-of-sight component for a uniform linear array.

    ``angles`` holds one arrival angle (radians) per transmit antenna and
    ``amplitudes`` the corresponding complex path amplitudes.
    """

    angles: np.ndarray
    amplitudes: np.ndarray
    rice_factor: float

    def __post_init__(self):
        self.angles = np.atleast_1d(np.asarray(self.angles, dtype=float))
        self.amplitudes = np.atleast_1d(np.asarray(self.amplitudes, dtype=complex))
        if self.angles.shape != self.amplitudes.shape:
            raise ValueError(
                f"angles and amplitudes must have equal length, got "
                f"{self.angles.size} and {self.amplitudes.size}"
            )
        if not self.rice_factor > 0:
            raise ValueError("rice_factor must be positive for a line-of-sight component")


@dataclass
class ChannelModel:
    """One normalized channel instance.

    Fields
    ------
    los : (n_rx, n_tx) complex ndarray, deterministic component
    rx_corr : (n_rx, n_rx) Hermitian PSD receive correlation
    tx_corr : (n_tx, n_tx) Hermitian PSD transmit correlation
    rice_factor : line-of-sight to scattered power ratio, >= 0
    noise_var : noise level, > 0

    Instances are treated as immutable; build them through
    :func:`assemble_model` (or the convenience constructors) so the trace
    normalizations hold.
    """

    los: np.ndarray
    rx_corr: np.ndarray
    tx_corr: np.ndarray
    rice_factor: float
    noise_var: float

    @property
    def n_rx(self):
        return self.los.shape[0]

    @property
    def n_tx(self):
        return self.los.shape[1]

    @property
    def ratio(self):
        """Antenna ratio n_tx / n_rx of the large-system regime."""
        return self.n_tx / self.n_rx

    @property
    def snr_db(self):
        return -10.0 * np.log10(self.noise_var)

    def with_noise(self, noise_var):
        """A copy of this model at a different noise level."""
        if not noise_var > 0:
            raise ValueError("noise_var must be positive")
        return replace(self, noise_var=float(noise_var))

    def validate(self, rtol=1e-10):
        """Check the trace normalizations and PSD-ness; raise on violation."""
        k = self.rice_factor
        target = 1.0 / np.sqrt(k + 1.0)
        tr_r = np.trace(self.rx_corr).real / self.n_rx
        tr_t = np.trace(self.tx_corr).real / self.n_tx
        if abs(tr_r - target) > rtol * target:
            raise ValueError(f"receive correlation trace {tr_r} != {target}")
        if abs(tr_t - target) > rtol * target:
            raise ValueError(f"transmit correlation trace {tr_t} != {target}")
        los_power = np.trace(self.los @ np.conj(self.los.T)).real / self.n_rx
        los_target = k / (k + 1.0)
        if k == 0:
            if np.any(self.los != 0):
                raise ValueError("Rayleigh model (rice_factor 0) requires a zero los matrix")
        elif abs(los_power - los_target) > rtol * los_target:
            raise ValueError(f"los power {los_power} != {los_target}")
        for name, mat in (("rx_corr", self.rx_corr), ("tx_corr", self.tx_corr)):
            check_hermitian(mat)
            if np.linalg.eigvalsh(mat).min() < -EIG_TOL:
                raise ValueError(f"{name} is not PSD")


def build_los_matrix(spec: LosSpec, n_rx: int):
    """Line-of-sight matrix for a uniform linear receive array.

    Column k is sqrt(K/(K+1)) * sqrt(n_rx/n_tx) * steering(angle_k) *
    amplitude_k with the unit-norm steering vector
    steering(theta) = (1, e^{i theta}, ..., e^{i (n_rx-1) theta}) / sqrt(n_rx).
    """
    if n_rx < 1:
        raise ValueError("n_rx must be >= 1")
    n_tx = spec.angles.size
    k = spec.rice_factor
    rows = np.arange(n_rx)
    steering = np.exp(1j * np.outer(rows, spec.angles)) / np.sqrt(n_rx)
    scale = np.sqrt(k / (k + 1.0)) * np.sqrt(n_rx / n_tx)
    return scale * steering * spec.amplitudes[None, :]


def exp_correlation(rho: float, dim: int):
    """Exponential correlation matrix c[i, j] = rho^|i-j| (unnormalized)."""
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"correlation parameter must lie in [0, 1), got {rho}")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    idx = np.arange(dim)
    return (rho ** np.abs(idx[:, None] - idx[None, :])).astype(complex)


def assemble_model(los_raw, rx_raw, tx_raw, rice_factor, noise_var):
    """Rescale raw inputs into a normalized :class:`ChannelModel`.

    The receive/transmit correlations and the line-of-sight matrix are each
    multiplied by the positive scalar that enforces the module's trace
    conventions, so any PSD correlation shape and any nonzero los geometry
    may be supplied.  ``los_raw`` may be None when ``rice_factor`` is 0.
    """
    if not rice_factor >= 0:
        raise ValueError("rice_factor must be >= 0")
    if not noise_var > 0:
        raise ValueError("noise_var must be positive")
    rx_raw = np.asarray(rx_raw, dtype=complex)
    tx_raw = np.asarray(tx_raw, dtype=complex)
    check_hermitian(rx_raw)
    check_hermitian(tx_raw)
    n_rx = rx_raw.shape[0]
    n_tx = tx_raw.shape[0]
    if los_raw is None:
        los_raw = np.zeros((n_rx, n_tx), dtype=complex)
    los_raw = np.asarray(los_raw, dtype=complex)
    if los_raw.shape != (n_rx, n_tx):
        raise ValueError(
            f"los shape {los_raw.shape} inconsistent with correlations "
            f"({n_rx}x{n_rx} receive, {n_tx}x{n_tx} transmit)"
        )
    if np.linalg.eigvalsh(hermitize(rx_raw)).min() < -EIG_TOL:
        raise ValueError("receive correlation is not PSD")
    if np.linalg.eigvalsh(hermitize(tx_raw)).min() < -EIG_TOL:
        raise ValueError("transmit correlation is not PSD")

    k = float(rice_factor)
    tr_r = np.trace(rx_raw).real
    tr_t = np.trace(tx_raw).real
    if tr_r <= 0 or tr_t <= 0:
        raise ValueError("correlation matrices must have positive trace")
    target = 1.0 / np.sqrt(k + 1.0)
    rx = hermitize(rx_raw * (n_rx * target / tr_r))
    tx = hermitize(tx_raw * (n_tx * target / tr_t))

    los_power = np.trace(los_raw @ np.conj(los_raw.T)).real
    if k == 0:
        if los_power != 0:
            raise ValueError("rice_factor 0 requires a zero los matrix")
        los = np.zeros((n_rx, n_tx), dtype=complex)
    else:
        if los_power <= 0:
            raise ValueError("nonzero rice_factor requires a nonzero los matrix")
        los = los_raw * np.sqrt(k * n_rx / ((k + 1.0) * los_power))

    model = ChannelModel(los=los, rx_corr=rx, tx_corr=tx,
                         rice_factor=k, noise_var=float(noise_var))
    model.validate()
    return model


def rayleigh_model(n_tx, n_rx=None, noise_var=1.0):
    """Uncorrelated Rayleigh model: zero los, identity correlations."""
    n_rx = n_tx if n_rx is None else n_rx
    return assemble_model(None, np.eye(n_rx, dtype=complex),
                          np.eye(n_tx, dtype=complex), 0.0, noise_var)


def exp_rician_model(n_tx, n_rx=None, rice_factor=1.0, rho_t=0.5, rho_r=0.8,
                     noise_var=1.0, angle_seed=0, amplitudes=None):
    """Rician model with exponential correlations and random path angles.

    Angles are drawn uniformly on [0, 2*pi) from a generator seeded with
    ``angle_seed``; amplitudes default to all ones.
    """
    n_rx = n_tx if n_rx is None else n_rx
    rx_raw = exp_correlation(rho_r, n_rx)
    tx_raw = exp_correlation(rho_t, n_tx)
    if rice_factor == 0:
        return assemble_model(None, rx_raw, tx_raw, 0.0, noise_var)
    rng = np.random.default_rng(angle_seed)
    angles = rng.uniform(0.0, 2.0 * np.pi, n_tx)
    if amplitudes is None:
        amplitudes = np.ones(n_tx)
    spec = LosSpec(angles=angles, amplitudes=amplitudes, rice_factor=rice_factor)
    los_raw = build_los_matrix(spec, n_rx)
    return assemble_model(los_raw, rx_raw, tx_raw, rice_factor, noise_var)
