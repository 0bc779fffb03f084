"""Intercept-resend attack on the two-qubit protocol that encodes with a non-local gate.

Alice sends A(c1,c2,c3)|a> for one of 16 BB84 pair states, Eve measures one or
both qubits in Z or X and forwards the collapsed pair, and Bob applies the
inverse gate and measures each qubit in Alice's basis.  Every branch is
enumerated exactly; the kernel is vectorized over a batch of gates.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gates import PAIR_STATES, CanonicalParams, canonical_gate
from .quantum import BASIS_PROJECTORS, I2, ZERO_PROB

AUDIT_TOL = 1e-9
SLOPE_TOL = 1e-9


class InvariantError(RuntimeError):
    """A probability audit failed inside the attack simulation."""


@dataclass(frozen=True)
class EveConfig:
    """Eve's bases for the first and second qubit; None means that qubit is not measured."""

    first: str | None
    second: str | None

    @property
    def label(self):
        return (self.first or "I") + (self.second or "I")

    def __str__(self):
        return self.label


def both_qubits(b1, b2):
    return EveConfig(b1, b2)


def second_only(b):
    return EveConfig(None, b)


NO_MEASUREMENT = EveConfig(None, None)
MEASURING_CONFIGS = (
    EveConfig("Z", "Z"),
    EveConfig("Z", "X"),
    EveConfig("X", "Z"),
    EveConfig("X", "X"),
    EveConfig(None, "Z"),
    EveConfig(None, "X"),
)
ALL_CONFIGS = MEASURING_CONFIGS + (NO_MEASUREMENT,)


@dataclass(frozen=True)
class AttackPoint:
    info_per_bit: float
    qber1: float
    qber2: float
    qber: float

    @classmethod
    def from_rates(cls, info, q1, q2):
        return cls(float(info), float(q1), float(q2), float((q1 + q2) / 2))


# Bob's basis on each qubit follows Alice's encoding basis of that qubit.
_A = np.arange(16)
BIT1 = (_A >> 1) & 1
BIT2 = _A & 1
_BOB1 = [BASIS_PROJECTORS["Z" if a < 8 else "X"] for a in _A]
_BOB2 = [BASIS_PROJECTORS["Z" if (a >> 2) & 1 == 0 else "X"] for a in _A]
# (16, 2, 4, 4): projector for outcome b on the given qubit, per input a
BOB_FIRST = np.array([[np.kron(p, I2) for p in _BOB1[a]] for a in _A])
BOB_SECOND = np.array([[np.kron(I2, p) for p in _BOB2[a]] for a in _A])


def _project(states, proj):
    """Project a batch of states; returns (probabilities, renormalized states or zero)."""
    v = states @ proj.T if proj.ndim == 2 else np.einsum("...ij,...j->...i", proj, states)
    p = np.sum(np.abs(v) ** 2, axis=-1)
    ok = p >= ZERO_PROB
    scale = np.where(ok, 1 / np.sqrt(np.where(ok, p, 1)), 0)
    return np.where(ok, p, 0.0), v * scale[..., None]


def _audit(total, weight, stage):
    """Outcome probabilities of every live branch must sum to one."""
    bad = (weight > 0) & (np.abs(total - 1) > AUDIT_TOL)
    if np.any(bad):
        raise InvariantError(f"normalization audit failed at {stage}")


def _eve_branches(psi, cfg):
    """Yield (p(e|a), post-measurement states) for each of Eve's outcomes e."""
    if cfg.first is None and cfg.second is None:
        return [(np.ones(psi.shape[:-1]), psi)]
    if cfg.first is None:
        first = [(np.ones(psi.shape[:-1]), psi)]
    else:
        first = [_project(psi, np.kron(p, I2)) for p in BASIS_PROJECTORS[cfg.first]]
        _audit(sum(p for p, _ in first), np.ones(psi.shape[:-1]), "Eve's first qubit")
    if cfg.second is None:
        return first
    branches = []
    for p1, s1 in first:
        second = [_project(s1, np.kron(I2, p)) for p in BASIS_PROJECTORS[cfg.second]]
        _audit(sum(p for p, _ in second), p1, "Eve's second qubit")
        branches += [(p1 * p2, s2) for p2, s2 in second]
    return branches


def conditional_tables(c1, c2, c3, cfg):
    """Exact outcome tables for a batch of gates.

    Returns p(e|a) with shape (G, 16, m) and Bob's marginal outcome
    probabilities p(b1|a), p(b2|a) with shape (G, 16, 2).
    """
    u = canonical_gate(c1, c2, c3).reshape(-1, 4, 4)
    psi = np.einsum("gij,aj->gai", u, PAIR_STATES)
    udag = np.conj(np.swapaxes(u, -1, -2))
    branches = _eve_branches(psi, cfg)
    p_e = np.stack([p for p, _ in branches], axis=-1)
    _audit(p_e.sum(axis=-1), np.ones(p_e.shape[:-1]), "Eve's outcomes")

    bob1 = np.zeros(psi.shape[:2] + (2,))
    bob2 = np.zeros(psi.shape[:2] + (2,))
    for pe, s in branches:
        back = np.einsum("gij,gaj->gai", udag, s)
        first = [_project(back, BOB_FIRST[:, b]) for b in range(2)]
        _audit(sum(p for p, _ in first), pe, "Bob's first qubit")
        for b1, (q1, t1) in enumerate(first):
            bob1[..., b1] += pe * q1
            second = [_project(t1, BOB_SECOND[:, b]) for b in range(2)]
            _audit(sum(p for p, _ in second), pe * q1, "Bob's second qubit")
            for b2, (q2, _) in enumerate(second):
                bob2[..., b2] += pe * q1 * q2
    return p_e, bob1, bob2


def _plogp(p):
    return np.where(p > 0, p * np.log2(np.where(p > 0, p, 1)), 0.0)


def attack_rates(c1, c2, c3, cfg):
    """Information per bit, QBER1 and QBER2 for a batch of gates; arrays of shape (G,)."""
    p_e, bob1, bob2 = conditional_tables(c1, c2, c3, cfg)
    # I(A,E) = H(A) + H(E) - H(A,E) with uniform A over 16 states, halved per bit
    h_e = -np.sum(_plogp(p_e.mean(axis=1)), axis=-1)
    h_ae = -np.sum(_plogp(p_e / 16), axis=(1, 2))
    info = (4 + h_e - h_ae) / 2
    q1 = np.mean(np.take_along_axis(bob1, (1 - BIT1)[None, :, None], axis=-1)[..., 0], axis=1)
    q2 = np.mean(np.take_along_axis(bob2, (1 - BIT2)[None, :, None], axis=-1)[..., 0], axis=1)
    return info, q1, q2


def run_attack(p, cfg):
    p = CanonicalParams.of(p)
    info, q1, q2 = attack_rates(p.c1, p.c2, p.c3, cfg)
    return AttackPoint.from_rates(info[0], q1[0], q2[0])


def select_best(info, qber):
    """Index of the config with the steepest info/qber line, per row.

    info and qber have shape (N, k).  A zero-qber config competes with infinite
    slope if it yields information, otherwise it is skipped.  Slopes equal
    within SLOPE_TOL are resolved by larger information, then by column order.
    Returns -1 for rows where no config competes.
    """
    info = np.atleast_2d(info)
    qber = np.atleast_2d(qber)
    zero_q = qber <= 1e-15
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.where(zero_q, np.where(info > 1e-15, np.inf, np.nan), info / qber)
        live = ~np.isnan(slope)
        best_slope = np.max(np.where(live, slope, -np.inf), axis=1, keepdims=True)
        tied = live & (
            (slope == best_slope)
            | (np.isfinite(best_slope) & (slope >= best_slope - SLOPE_TOL * np.maximum(1, best_slope)))
        )
    best_info = np.max(np.where(tied, info, -np.inf), axis=1, keepdims=True)
    chosen = tied & (info >= best_info - SLOPE_TOL)
    idx = np.argmax(chosen, axis=1)
    return np.where(live.any(axis=1), idx, -1)


def best_config(p):
    points = [run_attack(p, cfg) for cfg in MEASURING_CONFIGS]
    info = np.array([[pt.info_per_bit for pt in points]])
    qber = np.array([[pt.qber for pt in points]])
    i = int(select_best(info, qber)[0])
    if i < 0:
        raise InvariantError("no measuring configuration yields information")
    return MEASURING_CONFIGS[i], points[i]


def scale_point(pt, xi):
    if not 0 <= xi <= 1:
        raise ValueError("interception fraction must lie in [0, 1]")
    return AttackPoint(xi * pt.info_per_bit, xi * pt.qber1, xi * pt.qber2, xi * pt.qber)


def grid_axis(steps):
    if steps < 2:
        raise ValueError("a sweep needs at least 2 points per axis")
    return np.linspace(0, np.pi, steps)


def _slice_rates(args):
    c1, axis = args
    c2, c3 = np.meshgrid(axis, axis, indexing="ij")
    c2, c3 = c2.ravel(), c3.ravel()
    c1 = np.full_like(c2, c1)
    out = np.empty((c2.size, len(MEASURING_CONFIGS), 3))
    for k, cfg in enumerate(MEASURING_CONFIGS):
        out[:, k, :] = np.stack(attack_rates(c1, c2, c3, cfg), axis=-1)
    return np.stack([c1, c2, c3], axis=-1), out


def sweep_arrays(steps=33, workers=None):
    """Rates for all measuring configs over the inclusive lattice [0, pi]^3.

    Returns params (N, 3) and rates (N, 6, 3) holding (info, qber1, qber2),
    ordered c1-major, then c2, then c3.  Each c1 slice is one work unit.
    """
    axis = grid_axis(steps)
    jobs = [(c1, axis) for c1 in axis]
    workers = workers or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            parts = list(pool.map(_slice_rates, jobs))
    else:
        parts = [_slice_rates(j) for j in jobs]
    params = np.concatenate([p for p, _ in parts])
    rates = np.concatenate([r for _, r in parts])
    return params, rates


def sweep(steps=33, workers=None):
    """List of (CanonicalParams, {EveConfig: AttackPoint}) in lattice order."""
    params, rates = sweep_arrays(steps, workers)
    out = []
    for c, row in zip(params, rates):
        points = {
            cfg: AttackPoint.from_rates(*row[k]) for k, cfg in enumerate(MEASURING_CONFIGS)
        }
        out.append((CanonicalParams(*c), points))
    return out


def best_of_rates(rates):
    """Best-slope config index and its (info, qber) for sweep rates of shape (N, 6, 3)."""
    info = rates[..., 0]
    qber = (rates[..., 1] + rates[..., 2]) / 2
    idx = select_best(info, qber)
    rows = np.arange(len(idx))
    return idx, info[rows, idx], qber[rows, idx]


def _line(c1, c2, c3):
    c1, c2, c3 = np.broadcast_arrays(c1, c2, c3)
    rates = np.stack(
        [np.stack(attack_rates(c1, c2, c3, cfg), axis=-1) for cfg in MEASURING_CONFIGS],
        axis=1,
    )
    idx, _, _ = best_of_rates(rates)
    return [AttackPoint.from_rates(*rates[i, k]) for i, k in enumerate(idx)]


def envelope_c2(samples=33):
    """Best-config points for c2 from 0 to pi/2 with c1 = c3 = 0."""
    if samples < 2:
        raise ValueError("need at least 2 samples")
    return _line(0.0, np.linspace(0, np.pi / 2, samples), 0.0)


def arc_c3(c2, samples=33):
    """Best-config points for c3 from 0 to pi/2 with c1 = 0 and the given c2."""
    if samples < 2:
        raise ValueError("need at least 2 samples")
    return _line(0.0, c2, np.linspace(0, np.pi / 2, samples))


def c1_redundancy_report(steps=9, workers=None, threshold=0.02):
    """Hausdorff distance between best-config (qber, info) clouds of the c1=0 slice and the full grid.

    Informational only: reports whether the c1 = 0 slice already covers the cloud.
    """
    params, rates = sweep_arrays(steps, workers)
    _, info, qber = best_of_rates(rates)
    cloud = np.stack([qber, info], axis=-1)
    sub = cloud[params[:, 0] == 0]
    d = np.linalg.norm(cloud[:, None, :] - sub[None, :, :], axis=-1)
    h = max(d.min(axis=1).max(), d.min(axis=0).max())
    return {"hausdorff": float(h), "threshold": threshold, "within": bool(h <= threshold)}
