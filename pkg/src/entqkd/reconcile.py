"""Classical post-processing: noisy channel, error reconciliation and privacy amplification.

Bit strings are numpy uint8 arrays.  Alice's string is never modified; only
Bob's copy is corrected.  Every parity Alice discloses counts as one leaked bit.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ReconciliationReport:
    residual_errors: int
    leaked_bits: int
    passes: int
    final_length: int
    round_lengths: tuple = field(default=())


def _bits(s):
    s = np.asarray(s, dtype=np.uint8)
    if s.ndim != 1 or np.any(s > 1):
        raise ValueError("expected a 1-D string of bits")
    return s


def _same_length(a, b):
    a, b = _bits(a), _bits(b)
    if a.shape != b.shape:
        raise ValueError("strings differ in length")
    if a.size == 0:
        raise ValueError("strings are empty")
    return a, b


def flip_channel(s, p, seed):
    """Flip each bit independently with probability p."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    s = _bits(s)
    rng = np.random.default_rng(seed)
    return s ^ (rng.random(s.size) < p).astype(np.uint8)


def random_bits(n, seed):
    return np.random.default_rng(seed).integers(0, 2, n, dtype=np.uint8)


def simple_xor_protocol(a, b, rounds, seed):
    """Compare XORs of random disjoint pairs; keep the first bit on a match, drop both otherwise.

    An unpaired leftover bit (odd length) is carried to the next round unchanged.
    """
    a, b = _same_length(a, b)
    rng = np.random.default_rng(seed)
    leaked = 0
    lengths = []
    for _ in range(rounds):
        n = a.size
        perm = rng.permutation(n)
        pairs = perm[: 2 * (n // 2)].reshape(-1, 2)
        leaked += len(pairs)
        match = (a[pairs[:, 0]] ^ a[pairs[:, 1]]) == (b[pairs[:, 0]] ^ b[pairs[:, 1]])
        keep = np.sort(np.concatenate([pairs[match, 0], perm[2 * (n // 2):]]))
        a, b = a[keep], b[keep]
        lengths.append(int(a.size))
        if a.size < 2:
            break
    report = ReconciliationReport(
        int(np.sum(a != b)), leaked, len(lengths), int(a.size), tuple(lengths)
    )
    return a, b, report


def cascade_block_size(p_est):
    if not 0 < p_est <= 0.25:
        raise ValueError("p_est must lie in (0, 1/4]")
    return int(np.ceil(0.73 / p_est))


class _Cascade:
    def __init__(self, a, b, rng):
        self.a = a
        self.b = b.copy()
        self.rng = rng
        self.leaked = 0
        self.orders = []  # position order per pass
        self.sizes = []  # block size per pass
        self.block_of = []  # block index of each position, per pass
        self.mismatch = []  # parity mismatch flag of each block, per pass

    def add_pass(self, k):
        n = self.a.size
        order = np.arange(n) if not self.orders else self.rng.permutation(n)
        block_of = np.empty(n, dtype=np.int64)
        block_of[order] = np.arange(n) // k
        nblocks = -(-n // k)
        diff = np.bincount(block_of, weights=self.a ^ self.b, minlength=nblocks)
        # Alice discloses one parity per block
        self.leaked += nblocks
        self.orders.append(order)
        self.sizes.append(k)
        self.block_of.append(block_of)
        self.mismatch.append(diff.astype(np.int64) % 2 == 1)

    def block(self, j, i):
        k = self.sizes[j]
        return self.orders[j][i * k:(i + 1) * k]

    def binary(self, positions):
        """Locate one error in a block of odd error parity by halving."""
        while positions.size > 1:
            half = positions[: (positions.size + 1) // 2]
            self.leaked += 1
            if np.bitwise_xor.reduce(self.a[half] ^ self.b[half]):
                positions = half
            else:
                positions = positions[half.size:]
        return int(positions[0])

    def fix_all(self):
        """Correct until no block of any pass so far has odd parity, smallest blocks first."""
        corrected = 0
        while True:
            for j, flags in enumerate(self.mismatch):
                hits = np.flatnonzero(flags)
                if hits.size:
                    break
            else:
                return corrected
            pos = self.binary(self.block(j, int(hits[0])))
            self.b[pos] ^= 1
            corrected += 1
            for jj in range(len(self.mismatch)):
                self.mismatch[jj][self.block_of[jj][pos]] ^= True


def cascade(a, b, p_est, passes=4, seed=0, stop_when_clean=True):
    """Cascade reconciliation of Bob's string b towards Alice's string a.

    Pass j uses block size k1 * 2^(j-1) with k1 = ceil(0.73 / p_est); passes
    after the first work on a seeded random permutation.  Each correction is
    propagated to the blocks of earlier passes containing the corrected bit.
    With stop_when_clean, reconciliation ends after a pass whose block
    parities all agree.
    """
    a, b = _same_length(a, b)
    if passes < 1:
        raise ValueError("need at least one pass")
    k = cascade_block_size(p_est)
    state = _Cascade(a, b, np.random.default_rng(seed))
    done = 0
    for j in range(passes):
        state.add_pass(min(k << j, a.size))
        done += 1
        corrected = state.fix_all()
        if stop_when_clean and corrected == 0:
            break
    report = ReconciliationReport(
        int(np.sum(a != state.b)), state.leaked, done, int(a.size)
    )
    return state.b, report


def privacy_amplify(a, mask, pairs, seed):
    """Collapse `pairs` random disjoint slot pairs (i, j) into one bit a_i XOR a_j.

    The combined bit sits at slot i; Eve knows it only if she knew both sources.
    """
    a = _bits(a)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != a.shape:
        raise ValueError("mask and string differ in length")
    if not 0 <= pairs <= a.size // 2:
        raise ValueError("too many pairs for the string length")
    rng = np.random.default_rng(seed)
    chosen = rng.permutation(a.size)[: 2 * pairs].reshape(-1, 2)
    i, j = chosen[:, 0], chosen[:, 1]
    a = a.copy()
    mask = mask.copy()
    a[i] ^= a[j]
    mask[i] &= mask[j]
    keep = np.ones(a.size, dtype=bool)
    keep[j] = False
    return a[keep], mask[keep]
