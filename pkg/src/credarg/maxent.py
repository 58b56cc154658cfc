"""Maximum-entropy member of a credal set.

The feasible set is first cut down exactly: cells that no admissible
distribution can give mass to are fixed at zero, and inequality rows that
can never be slack are promoted to equalities. What remains has a strictly
positive relative-interior point, so the entropy maximiser has the
exponential-family form ``p_c ∝ |c| exp(theta . row_c)`` and the dual is a
smooth log-sum-exp minimisation with sign constraints on the inequality
multipliers. That dual is solved with L-BFGS-B and then polished with
Newton steps on the active constraints.
"""

from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from .credal import CredalSet, Distribution, _program, _require_consistent, _solve
from .simplex import OPTIMAL

log = logging.getLogger(__name__)

TOLERANCE = 1e-9


def _max_of(prog, objective, normaliser) -> Fraction:
    res = _solve(prog, [-v for v in objective], normaliser)
    assert res.status == OPTIMAL
    return -res.value


def max_entropy(c: CredalSet, tol: float = TOLERANCE) -> Distribution:
    """Entropy-maximising admissible distribution, masses as floats.

    Every constraint holds to within ``tol``. Raises
    ``InconsistentPremisesError`` for an empty credal set.
    """
    _require_consistent(c)
    prog = _program(c, ())
    n = len(prog.cells)
    ones = [Fraction(1)] * n

    support = []
    for k in range(n):
        unit = [Fraction(int(j == k)) for j in range(n)]
        if _max_of(prog, unit, ones) > 0:
            support.append(k)

    eq_rows = list(prog.eq_rows)
    ge_rows = []
    for row in prog.ge_rows:
        if _max_of(prog, row, ones) > 0:
            ge_rows.append(row)
        else:
            eq_rows.append(row)

    sizes = np.array([prog.cells[k].bit_count() for k in support], dtype=float)
    log_s = np.log(sizes)
    E = np.array([[float(r[k]) for k in support] for r in eq_rows]).reshape(len(eq_rows), len(support))
    G = np.array([[float(r[k]) for k in support] for r in ge_rows]).reshape(len(ge_rows), len(support))
    A = np.vstack([E, G])
    n_eq = len(eq_rows)

    def probs(z):
        theta = log_s + A.T @ z
        return np.exp(theta - logsumexp(theta))

    def dual(z):
        theta = log_s + A.T @ z
        p = np.exp(theta - logsumexp(theta))
        return logsumexp(theta), A @ p

    z = np.zeros(A.shape[0])
    if A.shape[0]:
        bounds = [(None, None)] * n_eq + [(0.0, None)] * len(ge_rows)
        res = minimize(
            dual, z, jac=True, method="L-BFGS-B", bounds=bounds,
            options={"ftol": 1e-16, "gtol": 1e-13, "maxiter": 10000},
        )
        z = res.x
        z = _polish(A, log_s, z, n_eq, tol)

    p_support = probs(z)
    masses = [0.0] * c.space.world_count
    for k, pk in zip(support, p_support):
        cell = prog.cells[k]
        share = float(pk) / cell.bit_count()
        w = cell
        while w:
            low = w & -w
            masses[low.bit_length() - 1] = share
            w ^= low
    dist = Distribution(c.space, tuple(masses))
    for s in c.statements:
        if not dist.satisfies(s, tol):
            log.warning("max-entropy solution violates %s beyond %g", s, tol)
    return dist


def _polish(A, log_s, z, n_eq, tol, steps=50):
    """Newton refinement of the dual on the currently active rows.

    Inequality multipliers are held at zero unless strictly positive.
    Falls back to the input when refinement breaks a sign
    condition or an inactive inequality.
    """
    active = [i for i in range(A.shape[0]) if i < n_eq or z[i] > 0]
    if not active:
        return z
    B = A[active]
    w = z[active].copy()
    for _ in range(steps):
        theta = log_s + B.T @ w
        p = np.exp(theta - logsumexp(theta))
        grad = B @ p
        if np.max(np.abs(grad)) < tol * 1e-3:
            break
        H = B @ (np.diag(p) - np.outer(p, p)) @ B.T
        step = np.linalg.lstsq(H, grad, rcond=None)[0]
        w = w - step
    candidate = np.zeros_like(z)
    candidate[active] = w
    theta = log_s + A.T @ candidate
    p = np.exp(theta - logsumexp(theta))
    slack = A[n_eq:] @ p
    if np.any(candidate[n_eq:] < 0) or np.any(slack < -tol):
        return z
    return candidate
