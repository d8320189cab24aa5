"""Scalar special-function kernels used throughout the package.

Everything here is plain real/complex arithmetic: Pochhammer symbols by
direct product, Laguerre polynomials by their stable three-term
recurrences, and generalized hypergeometric series summed through their
term recurrence.  No gamma-function calls anywhere, so there are no pole
surprises and results are bit-reproducible across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .errors import NonConvergenceError, PoleError

if TYPE_CHECKING:  # annotation only; KerrParams lives downstream of this module
    from .states import KerrParams


@dataclass(frozen=True)
class SeriesTolerance:
    """Shared stopping rule for every infinite series in the package.

    Convergence is judged on a geometric tail estimate, not on the bare
    term size: with r = |term_n| / |term_{n-1}| < 1 the remaining tail is
    continued as |term_n| r / (1 - r), and the series is converged once
    that estimate stayed below max(rel_tol * |partial sum|, abs_tol) for
    three consecutive terms with at least six terms consumed.  The tail
    estimate matters when the term ratio approaches 1 (geometric-type
    series near their convergence edge), where the bare last term can
    understate the remaining mass a hundredfold.  The three-in-a-row
    requirement guards oscillatory series against stopping on a single
    accidental small term.  abs_tol is a hard floor, not a target; the
    default keeps the rule purely relative.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_terms: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if self.abs_tol < 0.0:
            raise ValueError(f"abs_tol must be nonnegative, got {self.abs_tol!r}")
        if self.max_terms < 6:
            raise ValueError("max_terms must allow at least 6 terms")


DEFAULT_TOL = SeriesTolerance()

_CONSECUTIVE_SMALL = 3
_MIN_INDEX = 5


def sum_series(terms: Iterable[complex], tol: SeriesTolerance = DEFAULT_TOL):
    """Sum an iterable of terms under the shared stopping rule.

    An iterable that runs out before the rule fires is treated as an
    exactly terminating series and its full sum is returned.  Consuming
    max_terms terms without convergence raises NonConvergenceError; a
    non-finite term raises OverflowError.  Works for real or complex terms.
    """
    total = 0
    small = 0
    prev_mag = None
    for n, term in enumerate(terms):
        if n >= tol.max_terms:
            raise NonConvergenceError(
                f"series did not meet rel_tol={tol.rel_tol} within "
                f"{tol.max_terms} terms"
            )
        total = total + term
        mag = abs(term)
        if not math.isfinite(mag):
            raise OverflowError(f"series term overflowed at index {n}")
        # geometric continuation of the remaining tail at the current
        # term ratio; terms not (yet) decaying leave the tail unbounded
        if mag == 0.0:
            tail = 0.0
        elif prev_mag is not None and mag < prev_mag:
            ratio = mag / prev_mag
            tail = mag * ratio / (1.0 - ratio)
        else:
            tail = math.inf
        prev_mag = mag
        if tail <= max(tol.rel_tol * abs(total), tol.abs_tol):
            small += 1
            if small >= _CONSECUTIVE_SMALL and n >= _MIN_INDEX:
                return total
        else:
            small = 0
    return total


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a(a+1)...(a+n-1); (a)_0 = 1."""
    if n < 0 or n != int(n):
        raise ValueError(f"pochhammer order must be a nonnegative integer, got {n!r}")
    out = 1.0
    for k in range(int(n)):
        out *= a + k
    if not math.isfinite(out):
        raise OverflowError(f"pochhammer({a}, {n}) overflowed")
    return out


def laguerre(m: int, x: float) -> float:
    """Laguerre polynomial L_m(x) by the upward three-term recurrence.

    The recurrence (j+1) L_{j+1} = (2j+1-x) L_j - j L_{j-1} is forward
    stable for positive and negative arguments alike, unlike the power
    series, which cancels catastrophically for large m with x > 0.
    """
    if m < 0 or m != int(m):
        raise ValueError(f"Laguerre degree must be a nonnegative integer, got {m!r}")
    m = int(m)
    if m == 0:
        return 1.0
    prev = 1.0
    cur = 1.0 - x
    for j in range(1, m):
        prev, cur = cur, ((2 * j + 1 - x) * cur - j * prev) / (j + 1)
    return cur


def _gen_binom(a: float, s: int) -> float:
    """Generalized binomial coefficient C(a, s) = a(a-1)...(a-s+1)/s!."""
    out = 1.0
    for i in range(s):
        out *= (a - i) / (i + 1)
    return out


def assoc_laguerre(n: int, k: int, x: float) -> float:
    """Associated Laguerre polynomial L_n^{(k)}(x) for integer superscript k.

    Negative superscripts follow the reflection identity
        L_n^{(-j)}(x) = (-x)^j (n-j)!/n! L_{n-j}^{(j)}(x)   for j <= n,
    which is what the displaced-number expansion needs.  For j > n (never
    reached by that expansion) the finite sum with generalized binomial
    coefficients is used; it matches the 1F1 continuation.
    """
    if n < 0 or n != int(n):
        raise ValueError(f"degree must be a nonnegative integer, got {n!r}")
    n = int(n)
    k = int(k)
    if k >= 0:
        # upward recurrence in the degree, stable for either sign of x:
        # (j+1) L_{j+1}^{(k)} = (2j+k+1-x) L_j^{(k)} - (j+k) L_{j-1}^{(k)}
        if n == 0:
            return 1.0
        prev = 1.0
        cur = 1.0 + k - x
        for j in range(1, n):
            prev, cur = cur, ((2 * j + k + 1 - x) * cur - (j + k) * prev) / (j + 1)
        return cur
    j0 = -k
    if n >= j0:
        scale = 1.0
        for i in range(n - j0 + 1, n + 1):  # (n-j0)!/n!
            scale /= i
        return (-x) ** j0 * scale * assoc_laguerre(n - j0, j0, x)
    total = 0.0
    for j in range(n + 1):
        total += (-1) ** j * _gen_binom(n + k, n - j) * x**j / math.factorial(j)
    return total


def _pfq_terms(a: Sequence[float], b: Sequence[float], x: float):
    """Term generator for pFq via the exact term-ratio recurrence."""
    term = 1.0
    n = 0
    while True:
        yield term
        if term == 0.0:
            # a numerator parameter hit a nonpositive integer: the series
            # terminated, so later denominator zeros are never "reached"
            while True:
                yield 0.0
        num = 1.0
        for ai in a:
            num *= ai + n
        den = 1.0
        for bj in b:
            fac = bj + n
            if fac == 0.0:
                raise PoleError(
                    f"denominator parameter {bj} reaches zero at term {n + 1}"
                )
            den *= fac
        term = term * num / den * x / (n + 1)
        n += 1


def hyp_pFq(
    numerator: Sequence[float],
    denominator: Sequence[float],
    x: float,
    tol: SeriesTolerance | None = None,
) -> float:
    """Generalized hypergeometric pFq(a; b; x) = sum_n prod(a_i)_n/prod(b_j)_n x^n/n!.

    Terms are built by the ratio recurrence (no factorial recomputation)
    and summed under the shared tolerance policy.  Convergence domain is
    enforced up front: p <= q converges everywhere, p = q + 1 needs
    |x| < 1, anything beyond diverges for x != 0.
    """
    tol = DEFAULT_TOL if tol is None else tol
    a = [float(v) for v in numerator]
    b = [float(v) for v in denominator]
    x = float(x)
    if len(a) == len(b) + 1 and abs(x) >= 1.0:
        raise ValueError(
            f"{len(a)}F{len(b)} converges only for |x| < 1, got x={x}"
        )
    if len(a) > len(b) + 1 and x != 0.0:
        raise ValueError(
            f"{len(a)}F{len(b)} diverges for x != 0 (got x={x})"
        )
    return float(sum_series(_pfq_terms(a, b, x), tol))


def f_factorial(n: int, params: "KerrParams") -> float:
    """Deformation factorial f(n)! = f(n) f(n-1) ... f(0), with f(0)! = 1.

    f(k) = sqrt(1 + k chi/(omega0 - chi)) = sqrt(1 + k/r), so the product
    runs k = 1..n (the k = 0 factor is 1 by the stated convention).
    """
    if n < 0 or n != int(n):
        raise ValueError(f"order must be a nonnegative integer, got {n!r}")
    r = params.r
    out = 1.0
    for k in range(1, int(n) + 1):
        out *= math.sqrt(1.0 + k / r)
    if not math.isfinite(out):
        raise OverflowError(f"f_factorial({n}) overflowed")
    return out
