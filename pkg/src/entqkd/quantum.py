"""State-vector primitives for one and two qubits.

States are 1-D complex arrays of length 2 or 4 with basis order
|00>, |01>, |10>, |11> (first qubit most significant).  An impossible
measurement branch is represented by the all-zero vector.
"""

import numpy as np

TOL = 1e-9
ZERO_PROB = 1e-12

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


def ket(*amplitudes):
    return np.asarray(amplitudes, dtype=complex)


def projector(v):
    """|v><v| for a normalized vector v."""
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


BASIS_PROJECTORS = {
    "Z": (projector(KET0), projector(KET1)),
    "X": (projector(KET_PLUS), projector(KET_MINUS)),
}


def _as_state(s):
    s = np.asarray(s, dtype=complex)
    if s.ndim != 1 or s.shape[0] not in (2, 4):
        raise ValueError(f"expected a state of dimension 2 or 4, got shape {s.shape}")
    return s


def _as_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
        raise ValueError(f"expected a 2x2 or 4x4 matrix, got shape {m.shape}")
    return m


def is_sentinel(s):
    return not np.any(np.asarray(s))


def is_unitary(u, tol=TOL):
    u = np.asarray(u, dtype=complex)
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) < tol)


def is_projector(p, tol=TOL):
    p = np.asarray(p, dtype=complex)
    return bool(
        np.max(np.abs(p @ p - p)) < tol and np.max(np.abs(p.conj().T - p)) < tol
    )


def is_psd(m, tol=TOL):
    m = np.asarray(m, dtype=complex)
    if np.max(np.abs(m.conj().T - m)) >= tol:
        return False
    return bool(np.min(np.linalg.eigvalsh(m)) >= -tol)


def kron(a, b):
    """Tensor product of two single-qubit operands (states or matrices)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[0] != 2 or b.shape[0] != 2 or a.ndim != b.ndim:
        raise ValueError("kron expects two single-qubit operands of the same kind")
    return np.kron(a, b)


def apply(u, s):
    u = _as_matrix(u)
    s = _as_state(s)
    if u.shape[0] != s.shape[0]:
        raise ValueError("operator and state dimensions differ")
    if not is_unitary(u):
        raise ValueError("operator is not unitary")
    return u @ s


def _check_projector(proj, s):
    proj = _as_matrix(proj)
    if proj.shape[0] != s.shape[0]:
        raise ValueError("projector and state dimensions differ")
    if not is_projector(proj):
        raise ValueError("matrix is not an orthogonal projector")
    return proj


def measure_prob(s, proj):
    """Born probability <s|P|s>; zero for the sentinel."""
    s = _as_state(s)
    proj = _check_projector(proj, s)
    p = float(np.real(np.vdot(s, proj @ s)))
    return min(max(p, 0.0), 1.0)


def post_measure(s, proj):
    """Renormalized post-measurement state, or the zero vector if impossible."""
    s = _as_state(s)
    proj = _check_projector(proj, s)
    p = float(np.real(np.vdot(s, proj @ s)))
    if p < ZERO_PROB:
        return np.zeros_like(s)
    return proj @ s / np.sqrt(p)


def povm_probs(s, elements):
    s = _as_state(s)
    elements = [_as_matrix(e) for e in elements]
    for e in elements:
        if not is_psd(e):
            raise ValueError("POVM element is not positive semidefinite")
    total = sum(elements)
    if np.max(np.abs(total - np.eye(s.shape[0]))) >= TOL:
        raise ValueError("POVM elements do not sum to the identity")
    return [float(np.real(np.vdot(s, e @ s))) for e in elements]


def discrimination_povm():
    """Three-outcome POVM that never misidentifies |0> as outcome 1 or |+> as outcome 2."""
    c = np.sqrt(2) / (1 + np.sqrt(2))
    e1 = c * projector(KET1)
    e2 = c / 2 * np.outer(ket(1, -1), ket(1, -1).conj())
    return [e1, e2, I2 - e1 - e2]


def partial_trace(s, keep="first"):
    s = _as_state(s)
    if s.shape[0] != 4:
        raise ValueError("partial_trace needs a two-qubit state")
    m = s.reshape(2, 2)
    if keep == "first":
        return m @ m.conj().T
    if keep == "second":
        return m.T @ m.conj()
    raise ValueError("keep must be 'first' or 'second'")


def fidelity(rho, psi):
    psi = _as_state(psi)
    return float(np.real(np.vdot(psi, np.asarray(rho) @ psi)))


def concurrence_pure(s):
    """|<s| sy^(x)n |s*>| for one or two qubits."""
    s = _as_state(s)
    sy = SY if s.shape[0] == 2 else np.kron(SY, SY)
    return float(abs(np.vdot(s, sy @ s.conj())))


def phase_covariant_clone(eta, phi):
    """Fidelities of the two outputs when cloning an equatorial qubit of phase phi.

    The cloner maps |00> -> |00> and |10> -> cos(eta)|10> + sin(eta)|01>.
    """
    if not 0 <= eta <= np.pi / 2 + TOL:
        raise ValueError("eta must lie in [0, pi/2]")
    psi = (KET0 + np.exp(1j * phi) * KET1) / np.sqrt(2)
    cloner = np.zeros((4, 4), dtype=complex)
    cloner[0, 0] = 1
    cloner[2, 2] = np.cos(eta)
    cloner[1, 2] = np.sin(eta)
    # complete to a unitary on the unused inputs |01>, |11>
    cloner[3, 3] = 1
    cloner[2, 1] = -np.sin(eta)
    cloner[1, 1] = np.cos(eta)
    out = apply(cloner, kron(psi, KET0))
    f_a = fidelity(partial_trace(out, "first"), psi)
    f_b = fidelity(partial_trace(out, "second"), psi)
    return f_a, f_b
