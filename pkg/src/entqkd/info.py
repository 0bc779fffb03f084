"""Entropies, mutual information and the closed-form eavesdropping bounds.

All logarithms are base 2 and 0*log(0) is taken as 0.
"""

from fractions import Fraction

import numpy as np

TOL = 1e-9


def _plogp(p):
    p = np.asarray(p, dtype=float)
    safe = np.where(p > 0, p, 1.0)
    return np.where(p > 0, p * np.log2(safe), 0.0)


def entropy(d):
    d = np.asarray(d, dtype=float)
    if np.any(d < -TOL) or abs(d.sum() - 1) > TOL:
        raise ValueError("not a probability distribution")
    return float(-np.sum(_plogp(d)))


def binary_entropy(p):
    if not -TOL <= p <= 1 + TOL:
        raise ValueError("probability outside [0, 1]")
    return float(-_plogp(p) - _plogp(1 - p))


def mutual_information(j):
    """H(X) + H(Y) - H(X,Y) for a joint table with rows indexed by X."""
    j = np.asarray(j, dtype=float)
    if j.ndim != 2 or np.any(j < -TOL) or abs(j.sum() - 1) > TOL:
        raise ValueError("not a joint probability table")
    return entropy(j.sum(axis=1)) + entropy(j.sum(axis=0)) - entropy(j.ravel())


def ir_bound(q):
    """Eve's best information per bit for QBER q using intercept-resend on a fraction."""
    if not 0 <= q <= 0.5:
        raise ValueError("q must lie in [0, 1/2]")
    return 2 * q if q <= 0.25 else 0.5


def incoherent_bound(q):
    if not 0 <= q <= 0.5:
        raise ValueError("q must lie in [0, 1/2]")
    s = np.sqrt(q * (1 - q))
    # (1/2 + s) log(1 + 2s) + (1/2 - s) log(1 - 2s), written with the plogp guard
    return float(_plogp(0.5 + s) + _plogp(0.5 - s) + 1)


def incoherent_curve(eta):
    """(QBER, information) of the phase-covariant cloning attack at coupling eta."""
    if not 0 <= eta <= np.pi / 2 + TOL:
        raise ValueError("eta must lie in [0, pi/2]")
    q = (1 - np.cos(eta)) / 2
    info = 1 - binary_entropy(min(1.0, (1 + np.sin(eta)) / 2))
    return float(q), float(info)


def six_state_bound(q):
    if not 0 <= q < 0.5:
        raise ValueError("q must lie in [0, 1/2)")
    g = 0.5 * (1 + np.sqrt(q * (2 - 3 * q)) / (1 - q))
    return float(1 - (1 - q) * binary_entropy(min(g, 1.0)))


def shannon_reconciliation_bound(n, p):
    if n < 0:
        raise ValueError("n must be non-negative")
    return n * binary_entropy(p)


def werner_fidelity(n, m, d):
    """Optimal fidelity of an N -> M universal cloner in dimension d."""
    if not 1 <= n <= m or d < 2:
        raise ValueError("need 1 <= N <= M and d >= 2")
    f = Fraction(n, m) + Fraction((m - n) * (n + 1), m * (n + d))
    return float(f)


def asymmetric_fidelities(a, b, d):
    """Fidelities (F_A, F_B) of the asymmetric universal 1 -> 2 cloner.

    a and b must satisfy a^2 + b^2 + 2ab/d = 1, which is a^2 + b^2 + ab = 1 for qubits.
    """
    if abs(a * a + b * b + 2 * a * b / d - 1) > TOL:
        raise ValueError("cloner parameters violate the normalization constraint")
    k = (d - 1) / d
    return 1 - k * b * b, 1 - k * a * a
