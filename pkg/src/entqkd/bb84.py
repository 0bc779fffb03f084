"""Exact intercept-resend analysis of single-qubit BB84.

Only sifted events are enumerated: Alice and Bob use the same basis.
Eve's view of each event is her outcome together with her basis; after the
public basis announcement she also knows whether her basis matched Alice's.
"""

from dataclasses import dataclass

import numpy as np

from .gates import SYMBOLS, basis_of, bb84_state, bit_value
from .info import entropy, mutual_information
from .quantum import BASIS_PROJECTORS, measure_prob, post_measure


@dataclass(frozen=True)
class SingleAttackOutcome:
    info_bits: float
    qber: float


@dataclass(frozen=True)
class Enumeration:
    """Joint tables built while enumerating the attack."""

    bit_table: np.ndarray  # rows Alice's bit, columns (Eve outcome, basis matched)
    state_table: np.ndarray  # rows Alice's state, columns (Eve outcome, Eve basis)
    qber: float


def _eve_basis_probs(eve, p_z):
    if eve == "none":
        return {}
    if eve == "fixed_z":
        return {"Z": 1.0}
    if eve == "random":
        return {"Z": p_z, "X": 1 - p_z}
    raise ValueError(f"unknown eavesdropper strategy {eve!r}")


def enumerate_attack(eve="random", p_z=0.5):
    """Enumerate Alice's state, Eve's basis and outcome, and Bob's outcome.

    eve is "random" (basis Z with probability p_z), "fixed_z" or "none".
    """
    bases = _eve_basis_probs(eve, p_z)
    bit_table = np.zeros((2, 4))
    state_table = np.zeros((4, 4))
    error = 0.0
    for ai, sym in enumerate(SYMBOLS):
        p_a = 1 / len(SYMBOLS)
        s = bb84_state(sym)
        bob_projs = BASIS_PROJECTORS[basis_of(sym)]
        if not bases:
            # a single certain observation carries no information
            bit_table[bit_value(sym), 0] += p_a
            state_table[ai, 0] += p_a
            error += p_a * measure_prob(s, bob_projs[1 - bit_value(sym)])
            continue
        for bi, (eb, p_eb) in enumerate(bases.items()):
            matched = int(eb == basis_of(sym))
            for e, proj in enumerate(BASIS_PROJECTORS[eb]):
                p_e = measure_prob(s, proj)
                resent = post_measure(s, proj)
                p = p_a * p_eb * p_e
                bit_table[bit_value(sym), 2 * e + matched] += p
                state_table[ai, 2 * e + bi] += p
                error += p * measure_prob(resent, bob_projs[1 - bit_value(sym)])
    keep = lambda t: t[:, t.sum(axis=0) > 0]
    return Enumeration(keep(bit_table), keep(state_table), error)


def ir_attack_exact(p_z=0.5):
    en = enumerate_attack("random", p_z)
    return SingleAttackOutcome(mutual_information(en.bit_table), en.qber)


def conditional_joint_entropy(en):
    """H(A,E) averaged over whether Eve's basis matched Alice's."""
    t = en.bit_table
    h = 0.0
    for matched in (0, 1):
        cols = t[:, matched::2]
        w = cols.sum()
        if w > 0:
            h += w * entropy((cols / w).ravel())
    return h


def scale_by_fraction(o, xi):
    if not 0 <= xi <= 1:
        raise ValueError("interception fraction must lie in [0, 1]")
    return SingleAttackOutcome(xi * o.info_bits, xi * o.qber)


def state_vs_bit_mi_equivalence(eve="random", p_z=0.5):
    """Eve's information on the sifted bit and on the transmitted state."""
    en = enumerate_attack(eve, p_z)
    return mutual_information(en.bit_table), mutual_information(en.state_table)
