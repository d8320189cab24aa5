"""Photon-number statistics: distributions, moments, Mandel parameter, sweeps.

Two independent routes produce every distribution: squared constructor
amplitudes (photon_distribution) and the explicit closed-form probability
formulas driven by their own term ratios and hypergeometric normalization
constants (closed_form_distribution_a / _d).  Tests hold the two routes
against each other to 1e-10.

The Mandel parameter follows the convention Q = Var(n)/<n>, which makes a
Poissonian state read exactly 1 (not 0).  CSV output also carries
q_standard = Q - 1 for downstream tools that expect the usual convention.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationError
from .specfun import DEFAULT_TOL, SeriesTolerance, hyp_pFq
from .states import FockState, KerrParams, StateLabel, make_state, zeta

COVERAGE_TOL = 1e-10


@dataclass(frozen=True)
class PhotonDistribution:
    """Probabilities P_k for k = 0..N-1, with provenance."""

    probabilities: np.ndarray
    source_label: StateLabel | None = None

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValueError("probabilities must be a nonempty 1-D vector")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "probabilities", p)

    @property
    def kmax(self) -> int:
        return int(self.probabilities.size - 1)

    def mean(self) -> float:
        k = np.arange(self.probabilities.size, dtype=float)
        return float(k @ self.probabilities)

    def variance(self) -> float:
        k = np.arange(self.probabilities.size, dtype=float)
        m1 = float(k @ self.probabilities)
        m2 = float((k * k) @ self.probabilities)
        return m2 - m1 * m1

    def mandel_q(self) -> float:
        m1 = self.mean()
        if m1 == 0.0:
            raise ValueError("Mandel parameter is undefined for the vacuum")
        return self.variance() / m1


def photon_distribution(state: FockState) -> PhotonDistribution:
    """P_k = |c_k|^2 from a constructed state."""
    return PhotonDistribution(state.probabilities(), state.label)


def _ratio_distribution(m: int, kmax: int, norm: float, ratio_fn) -> np.ndarray:
    """P_m = 1/norm, P_{k+1} = ratio_fn(k) P_k; zero below the offset m."""
    p = np.zeros(kmax + 1, dtype=float)
    p[m] = 1.0 / norm
    for k in range(m, kmax):
        p[k + 1] = p[k] * ratio_fn(k)
    return p


def _check_coverage(p: np.ndarray, source: str) -> None:
    total = float(np.sum(p))
    if abs(total - 1.0) > COVERAGE_TOL:
        raise TruncationError(
            f"{source}: probabilities sum to {total!r} within the requested "
            f"kmax; enlarge kmax instead of renormalizing"
        )


def closed_form_distribution_a(alpha: complex, m: int, params: KerrParams,
                               kmax: int,
                               tol: SeriesTolerance | None = None) -> PhotonDistribution:
    """Explicit P_{k,m} for the photon-added deformed-eigenstate family.

    P_{m+j} = (m+1)_j (b+m)_j y^j / ((j!)^2 ((b)_j)^2 N) with y = r|alpha|^2
    and N = 2F3(b+m, m+1; b, b, 1; y), evaluated through the exact ratio
    P_{k+1}/P_k = (k+1)(b+k) y / ((k-m+1)^2 (b+k-m)^2).  Independent of the
    constructor route.
    """
    if kmax < m:
        raise ValueError(f"kmax must be at least m (got kmax={kmax}, m={m})")
    tol = DEFAULT_TOL if tol is None else tol
    b, r = params.b, params.r
    y = r * abs(complex(alpha)) ** 2
    norm = hyp_pFq([b + m, m + 1], [b, b, 1], y, tol)

    def ratio(k: int) -> float:
        return (k + 1) * (b + k) * y / ((k - m + 1) ** 2 * (b + k - m) ** 2)

    p = _ratio_distribution(m, kmax, norm, ratio)
    label = StateLabel("dpancs-a", complex(alpha), m, params.chi_over_omega0)
    _check_coverage(p, "closed_form_distribution_a")
    return PhotonDistribution(p, label)


def closed_form_distribution_d(alpha: complex, m: int, params: KerrParams,
                               kmax: int,
                               tol: SeriesTolerance | None = None) -> PhotonDistribution:
    """Explicit P_{k,m} for the photon-added displacement-operator family.

    P_{m+j} = (m+1)_j (b+m)_j |zeta|^{2j} / ((j!)^2 N) with
    N = 2F1(b+m, m+1; 1; |zeta|^2), via the exact ratio
    P_{k+1}/P_k = (k+1)(b+k)|zeta|^2 / (k-m+1)^2.
    """
    if kmax < m:
        raise ValueError(f"kmax must be at least m (got kmax={kmax}, m={m})")
    tol = DEFAULT_TOL if tol is None else tol
    b = params.b
    z2 = abs(zeta(alpha, params)) ** 2
    norm = hyp_pFq([b + m, m + 1], [1], z2, tol)

    def ratio(k: int) -> float:
        return (k + 1) * (b + k) * z2 / (k - m + 1) ** 2

    p = _ratio_distribution(m, kmax, norm, ratio)
    label = StateLabel("dpancs-d", complex(alpha), m, params.chi_over_omega0)
    _check_coverage(p, "closed_form_distribution_d")
    return PhotonDistribution(p, label)


def mandel_q(state: FockState) -> float:
    """Mandel parameter Q = (<n^2> - <n>^2)/<n>; Poissonian reads 1."""
    return photon_distribution(state).mandel_q()


@dataclass(frozen=True)
class MandelSweep:
    """Q(alpha) along a real-amplitude sweep for one family and one m."""

    alphas: np.ndarray
    q_values: np.ndarray
    flags: tuple[str, ...]
    family: str
    m: int
    chi_over_omega0: float | None

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=float)
        q = np.asarray(self.q_values, dtype=float)
        if a.shape != q.shape or a.ndim != 1 or len(self.flags) != a.size:
            raise ValueError("alphas, q_values and flags must share one length")
        for arr, name in ((a, "alphas"), (q, "q_values")):
            arr = arr.copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def mandel_sweep(family: str, m: int, params: KerrParams | None,
                 alphas) -> MandelSweep:
    """Q at each real alpha >= 0, one certified state per point.

    alpha = 0 short-circuits to the analytic limit (0 for m >= 1, the Fock
    state; 1 for m = 0, the Poissonian limit) and is flagged as such.
    A point whose construction fails is flagged and reported as NaN; the
    sweep continues.
    """
    a = np.asarray(alphas, dtype=float)
    if a.ndim != 1:
        raise ValueError("alphas must be a 1-D sequence")
    if np.any(a < 0.0):
        raise ValueError("sweep amplitudes must be nonnegative")
    q = np.empty_like(a)
    flags: list[str] = []
    for i, x in enumerate(a):
        if x == 0.0:
            q[i] = 0.0 if m >= 1 else 1.0
            flags.append("analytic-limit")
            continue
        try:
            state = make_state(family, complex(x), m, params)
            q[i] = mandel_q(state)
            flags.append("ok")
        except (ArithmeticError, RuntimeError, ValueError) as exc:
            q[i] = math.nan
            flags.append(f"error: {exc}")
    chi = None if params is None else params.chi_over_omega0
    return MandelSweep(a, q, tuple(flags), family, m, chi)


def _fmt(x) -> str:
    """Deterministic cell formatting: plain repr of Python scalars."""
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_mandel_csv(sweeps, path) -> None:
    """Long-format CSV: alpha, q_paper, q_standard, family, m, chi_over_omega0."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["alpha", "q_paper", "q_standard", "family", "m",
                    "chi_over_omega0"])
        for s in sweeps:
            for x, qv in zip(s.alphas, s.q_values):
                w.writerow([
                    _fmt(float(x)), _fmt(float(qv)), _fmt(float(qv) - 1.0),
                    s.family, s.m, _fmt(s.chi_over_omega0),
                ])


def write_distribution_csv(dists, path) -> None:
    """Long-format CSV: k, p_k, family, m, alpha_re, alpha_im, chi_over_omega0."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "p_k", "family", "m", "alpha_re", "alpha_im",
                    "chi_over_omega0"])
        for d in dists:
            lab = d.source_label
            family = lab.family if lab is not None else ""
            m = lab.m if lab is not None else ""
            a_re = _fmt(float(lab.alpha.real)) if lab is not None else ""
            a_im = _fmt(float(lab.alpha.imag)) if lab is not None else ""
            chi = _fmt(lab.chi_over_omega0) if lab is not None else ""
            for k, pk in enumerate(d.probabilities):
                w.writerow([k, _fmt(float(pk)), family, m, a_re, a_im, chi])
