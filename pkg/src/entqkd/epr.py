"""Attack on the Bell-state encoding U1 = CNOT (H x I) when Eve knows Alice used the ZZ basis.

Eve decodes Alice's pair exactly, then hands Bob one half of a fresh |Phi+>
after rotating her own half so that the pair Bob receives is the Bell state
Alice would have sent.  Bob sees no errors and Eve knows both bits.
"""

from dataclasses import dataclass

import numpy as np

from .quantum import BASIS_PROJECTORS, CNOT, HADAMARD, I2, SX, SZ, apply, kron, measure_prob

BELL_LABELS = ("Phi+", "Psi+", "Phi-", "Psi-")


@dataclass(frozen=True)
class EprAttackRecord:
    a1: int
    a2: int
    eve_recovered: tuple
    bob_recovered: tuple
    qber_contrib: float


def u1():
    return CNOT @ np.kron(HADAMARD, I2)


def z_pair(a1, a2):
    return np.eye(4, dtype=complex)[2 * a1 + a2]


def bell_state(a1, a2):
    return apply(u1(), z_pair(a1, a2))


def correction_gate(a1, a2):
    """sx^a2 sz^a1, which turns |Phi+> into U1|a1 a2> when applied to the second qubit."""
    return np.linalg.matrix_power(SX, a2) @ np.linalg.matrix_power(SZ, a1)


def _measure_z(s):
    """Outcome probabilities of a Z measurement on both qubits, as a 2x2 table."""
    p = np.zeros((2, 2))
    for b1, p1 in enumerate(BASIS_PROJECTORS["Z"]):
        for b2, p2 in enumerate(BASIS_PROJECTORS["Z"]):
            p[b1, b2] = measure_prob(s, kron(p1, p2))
    return p


def _certain_outcome(table):
    b1, b2 = np.unravel_index(int(np.argmax(table)), table.shape)
    if abs(table[b1, b2] - 1) > 1e-12:
        raise RuntimeError("Z measurement after decoding is not deterministic")
    return int(b1), int(b2)


def run_epr_attack(a1, a2):
    if a1 not in (0, 1) or a2 not in (0, 1):
        raise ValueError("the attack is only defined for ZZ-basis pairs")
    u = u1()
    sent = apply(u, z_pair(a1, a2))
    eve = _certain_outcome(_measure_z(apply(u.conj().T, sent)))
    substitute = apply(kron(I2, correction_gate(*eve)), bell_state(0, 0))
    bob_table = _measure_z(apply(u.conj().T, substitute))
    bob = _certain_outcome(bob_table)
    qber = 0.5 * (bob_table[1 - a1, :].sum() + bob_table[:, 1 - a2].sum())
    return EprAttackRecord(a1, a2, eve, bob, float(qber))
