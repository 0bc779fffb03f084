"""How closely a product of two single-qubit states can match Alice's pair state.

Alice's state has moduli on the 3-sphere (angles theta1..3) and a single free
phase alpha4 on |11>.  Eve picks psi1 = (cos Phi e^{i phi1}, sin Phi e^{i phi2})
and psi2 = (cos Omega e^{i omega1}, sin Omega e^{i omega2}) to maximize
G = Re<psi|psi1 (x) psi2>; the approximation error is sqrt(2(1 - G)).
Alice then minimizes Eve's best G by simulated annealing.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize


@dataclass(frozen=True)
class AliceParams:
    theta1: float
    theta2: float
    theta3: float
    alpha4: float

    def as_array(self):
        return np.array([self.theta1, self.theta2, self.theta3, self.alpha4])


@dataclass(frozen=True)
class EveParams:
    Phi: float
    Omega: float
    phi1: float
    phi2: float
    omega1: float
    omega2: float

    def as_array(self):
        return np.array([self.Phi, self.Omega, self.phi1, self.phi2, self.omega1, self.omega2])


@dataclass(frozen=True)
class ApproxResult:
    e_mm: float
    alice: AliceParams
    eve: EveParams
    g_value: float


def error_from_g(g):
    return float(np.sqrt(max(0.0, 2 * (1 - g))))


def alice_moduli(t1, t2, t3):
    s1, s2 = np.sin(t1), np.sin(t2)
    return np.array([np.cos(t1), s1 * np.cos(t2), s1 * s2 * np.cos(t3), s1 * s2 * np.sin(t3)])


def alice_state(a):
    r = alice_moduli(a.theta1, a.theta2, a.theta3)
    return r * np.array([1, 1, 1, np.exp(1j * a.alpha4)])


def eve_states(e):
    psi1 = np.array([np.cos(e.Phi) * np.exp(1j * e.phi1), np.sin(e.Phi) * np.exp(1j * e.phi2)])
    psi2 = np.array([np.cos(e.Omega) * np.exp(1j * e.omega1), np.sin(e.Omega) * np.exp(1j * e.omega2)])
    return psi1, psi2


def g_function(a, e):
    """Re<psi|psi1 (x) psi2> written out trigonometrically."""
    r1, r2, r3, r4 = alice_moduli(a.theta1, a.theta2, a.theta3)
    cP, sP = np.cos(e.Phi), np.sin(e.Phi)
    cO, sO = np.cos(e.Omega), np.sin(e.Omega)
    return float(
        r1 * cP * cO * np.cos(e.phi1 + e.omega1)
        + r2 * cP * sO * np.cos(e.phi1 + e.omega2)
        + r3 * sP * cO * np.cos(e.phi2 + e.omega1)
        + r4 * sP * sO * np.cos(e.phi2 + e.omega2 - a.alpha4)
    )


def _g_batch(r, alpha4, x):
    P, O, p1, p2, w1, w2 = x.T
    return (
        r[0] * np.cos(P) * np.cos(O) * np.cos(p1 + w1)
        + r[1] * np.cos(P) * np.sin(O) * np.cos(p1 + w2)
        + r[2] * np.sin(P) * np.cos(O) * np.cos(p2 + w1)
        + r[3] * np.sin(P) * np.sin(O) * np.cos(p2 + w2 - alpha4)
    )


def _ascend(r, alpha4, x, tol=1e-13, max_sweeps=200):
    """Coordinate ascent on G for a batch of starts x (n, 6).

    G is a sinusoid A cos(t) + B sin(t) in each single angle t, so every
    coordinate step jumps to that angle's exact maximizer atan2(B, A).
    """
    x = x.copy()
    beta = np.array([0.0, 0.0, 0.0, alpha4])
    g = _g_batch(r, alpha4, x)
    for _ in range(max_sweeps):
        P, O, p1, p2, w1, w2 = x.T
        # Phi: cos(Phi) * [r1 cO c(p1+w1) + r2 sO c(p1+w2)] + sin(Phi) * [...]
        a = r[0] * np.cos(O) * np.cos(p1 + w1) + r[1] * np.sin(O) * np.cos(p1 + w2)
        b = r[2] * np.cos(O) * np.cos(p2 + w1) + r[3] * np.sin(O) * np.cos(p2 + w2 - beta[3])
        x[:, 0] = P = np.arctan2(b, a)
        a = r[0] * np.cos(P) * np.cos(p1 + w1) + r[2] * np.sin(P) * np.cos(p2 + w1)
        b = r[1] * np.cos(P) * np.cos(p1 + w2) + r[3] * np.sin(P) * np.cos(p2 + w2 - beta[3])
        x[:, 1] = O = np.arctan2(b, a)
        # each phase enters as sum_k m_k cos(t + d_k) = Re(e^{it} sum_k m_k e^{i d_k})
        z = r[0] * np.cos(P) * np.cos(O) * np.exp(1j * w1) + r[1] * np.cos(P) * np.sin(O) * np.exp(1j * w2)
        x[:, 2] = p1 = -np.angle(z)
        z = r[2] * np.sin(P) * np.cos(O) * np.exp(1j * w1) + r[3] * np.sin(P) * np.sin(O) * np.exp(1j * (w2 - beta[3]))
        x[:, 3] = p2 = -np.angle(z)
        z = r[0] * np.cos(P) * np.cos(O) * np.exp(1j * p1) + r[2] * np.sin(P) * np.cos(O) * np.exp(1j * p2)
        x[:, 4] = w1 = -np.angle(z)
        z = r[1] * np.cos(P) * np.sin(O) * np.exp(1j * p1) + r[3] * np.sin(P) * np.sin(O) * np.exp(1j * (p2 - beta[3]))
        x[:, 5] = -np.angle(z)
        g_new = _g_batch(r, alpha4, x)
        done = np.max(g_new - g) < tol
        g = g_new
        if done:
            break
    return x, g


def _neg_g_and_grad(x, psi):
    """-G and its gradient, computed from the explicit vectors."""
    P, O, p1, p2, w1, w2 = x
    e1 = np.array([np.exp(1j * p1), np.exp(1j * p2)])
    e2 = np.array([np.exp(1j * w1), np.exp(1j * w2)])
    v1 = np.array([np.cos(P), np.sin(P)]) * e1
    v2 = np.array([np.cos(O), np.sin(O)]) * e2
    m = psi.conj().reshape(2, 2)
    g = np.real(v1 @ m @ v2)
    dv1 = [np.array([-np.sin(P), np.cos(P)]) * e1, 1j * v1 * [1, 0], 1j * v1 * [0, 1]]
    dv2 = [np.array([-np.sin(O), np.cos(O)]) * e2, 1j * v2 * [1, 0], 1j * v2 * [0, 1]]
    grad = [np.real(d @ m @ v2) for d in dv1[:1]] + [np.real(v1 @ m @ d) for d in dv2[:1]]
    grad += [np.real(d @ m @ v2) for d in dv1[1:]] + [np.real(v1 @ m @ d) for d in dv2[1:]]
    return -g, -np.array(grad)


def _polish(x, psi):
    """Quasi-Newton refinement; coordinate ascent crawls when Schmidt coefficients nearly coincide."""
    res = minimize(_neg_g_and_grad, x, args=(psi,), jac=True, method="BFGS", options={"gtol": 1e-12})
    return res.x, -res.fun


def _starts(seed, restarts):
    """One independent stream per restart, so a larger budget extends a smaller one."""
    children = np.random.SeedSequence(seed).spawn(restarts)
    return np.array([np.random.default_rng(c).uniform(0, 2 * np.pi, 6) for c in children])


def inner_maximize(a, restarts=100, seed=0):
    """Eve's best product approximation of Alice's state from `restarts` random starts."""
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    r = alice_moduli(a.theta1, a.theta2, a.theta3)
    x, g = _ascend(r, a.alpha4, _starts(seed, restarts))
    i = int(np.argmax(g))
    best, g_best = _polish(x[i], alice_state(a))
    if g_best < g[i]:
        best, g_best = x[i], g[i]
    return EveParams(*best), float(g_best)


def outer_minimize(
    restarts=3,
    inner_restarts=20,
    seed=42,
    t0=0.05,
    cooling=0.95,
    temperature_steps=200,
    moves_per_step=10,
    sigma0=0.5,
):
    """Simulated annealing over Alice's (theta, alpha4) of Eve's best G.

    Each of `restarts` independent chains starts from a random point; the
    proposal width shrinks with temperature as sigma0 * T / t0 (floored at 1e-3).
    """
    if restarts < 1 or inner_restarts < 1:
        raise ValueError("budgets must be at least 1")
    seeds = np.random.SeedSequence(seed).spawn(restarts)
    best = None
    for ss in seeds:
        rng = np.random.default_rng(ss)
        inner_seed = int(rng.integers(2**63))

        def objective(v):
            return inner_maximize(AliceParams(*v), inner_restarts, inner_seed)

        x = np.concatenate([rng.uniform(0, np.pi, 3), rng.uniform(0, 2 * np.pi, 1)])
        eve, g = objective(x)
        chain_best = (g, x, eve)
        t = t0
        for _ in range(temperature_steps):
            sigma = max(sigma0 * t / t0, 1e-3)
            for _ in range(moves_per_step):
                y = x + rng.normal(0, sigma, 4)
                eve_y, g_y = objective(y)
                if g_y <= g or rng.random() < np.exp(-(g_y - g) / t):
                    x, g, eve = y, g_y, eve_y
                    if g < chain_best[0]:
                        chain_best = (g, x, eve)
            t *= cooling
        if best is None or chain_best[0] < best[0]:
            best = chain_best
    g, x, eve = best
    return ApproxResult(error_from_g(g), AliceParams(*x), eve, g)


PAPER_ALICE = AliceParams(1.228, 0.848, -0.499, 0.474)
PAPER_EVE = EveParams(2.365, 0.797, 1.243, 3.034, 2.801, 1.472)
