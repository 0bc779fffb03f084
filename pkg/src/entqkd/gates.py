"""BB84 alphabet, the 16 two-qubit input states and the parametrized gates."""

from dataclasses import dataclass

import numpy as np

from .quantum import KET0, KET1, KET_MINUS, KET_PLUS, kron

SYMBOLS = ("0", "1", "+", "-")
_KETS = {"0": KET0, "1": KET1, "+": KET_PLUS, "-": KET_MINUS}

# first qubit's symbol, then second's; a = 8*basis1 + 4*basis2 + 2*bit1 + bit2
PAIR_LABELS = (
    "00", "01", "10", "11", "0+", "0-", "1+", "1-",
    "+0", "+1", "-0", "-1", "++", "+-", "-+", "--",
)


def bb84_state(sym):
    try:
        return _KETS[sym].copy()
    except KeyError:
        raise ValueError(f"unknown BB84 symbol {sym!r}") from None


def bit_value(sym):
    return 0 if sym in ("0", "+") else 1


def basis_of(sym):
    return "Z" if sym in ("0", "1") else "X"


def decode_pair(a):
    if not 0 <= a < 16:
        raise ValueError("pair index must lie in [0, 15]")
    label = PAIR_LABELS[a]
    return label[0], label[1]


def pair_state(a):
    s1, s2 = decode_pair(a)
    return kron(bb84_state(s1), bb84_state(s2))


def pair_bits(a):
    return (a >> 1) & 1, a & 1


def pair_bases(a):
    return ("Z" if a < 8 else "X"), ("Z" if (a >> 2) & 1 == 0 else "X")


PAIR_STATES = np.array([pair_state(a) for a in range(16)])


@dataclass(frozen=True)
class CanonicalParams:
    c1: float
    c2: float
    c3: float

    def __post_init__(self):
        for c in (self.c1, self.c2, self.c3):
            if not -1e-12 <= c <= np.pi + 1e-12:
                raise ValueError("canonical gate parameters must lie in [0, pi]")

    def __iter__(self):
        return iter((self.c1, self.c2, self.c3))

    @classmethod
    def of(cls, p):
        return p if isinstance(p, cls) else cls(*p)


def su2_gate(a1, a2, a3):
    return np.array(
        [
            [np.exp(1j * a1) * np.cos(a2), np.exp(1j * a3) * np.sin(a2)],
            [-np.exp(-1j * a3) * np.sin(a2), np.exp(-1j * a1) * np.cos(a2)],
        ]
    )


def canonical_gate(c1, c2, c3):
    """exp[i/2 (c1 XX + c2 YY + c3 ZZ)] in closed form.

    Accepts scalars or equal-shape arrays; arrays give a stack of shape (..., 4, 4).
    """
    c1, c2, c3 = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in (c1, c2, c3)))
    m = np.zeros(c1.shape + (4, 4), dtype=complex)
    even = np.exp(0.5j * c3)
    odd = np.exp(-0.5j * c3)
    m[..., 0, 0] = m[..., 3, 3] = even * np.cos((c1 - c2) / 2)
    m[..., 0, 3] = m[..., 3, 0] = 1j * even * np.sin((c1 - c2) / 2)
    m[..., 1, 1] = m[..., 2, 2] = odd * np.cos((c1 + c2) / 2)
    m[..., 1, 2] = m[..., 2, 1] = 1j * odd * np.sin((c1 + c2) / 2)
    return m
