"""Fit the six RY angles of the dilation circuit to a target unitary.

Objective: overlap fidelity F = |Tr(U_T^H U_R)|^2 / 16, which is 1 iff
the realized circuit unitary matches the target up to a global phase.
The local step is box-constrained L-BFGS-B with an analytic gradient
(dRY(a)/da = RY(a + pi)/2); since it can fall into local minima, the
primary safeguard is a loop of random restarts drawn uniformly from
``init_range`` on a seed domain separate from measurement sampling.
A derivative-free compass search is available as a fallback local step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .builders import SynthesisParams
from .rng import optimizer_generator

_DIM = 4


@dataclass(frozen=True)
class FidelityProblem:
    """Target unitary plus restart/bound configuration."""

    target: np.ndarray
    bounds: tuple[float, float] = (-math.pi, math.pi)
    restarts: int = 1000
    init_range: tuple[float, float] = (-1.0, 1.0)
    tol_infidelity: float = 1e-9

    def __post_init__(self):
        t = np.asarray(self.target, dtype=complex)
        object.__setattr__(self, "target", t)
        if t.shape != (_DIM, _DIM):
            raise ValueError(f"target must be 4x4, got {t.shape}")
        if np.max(np.abs(t.conj().T @ t - np.eye(_DIM))) > 1e-10:
            raise ValueError("target is not unitary within 1e-10")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass(frozen=True)
class OptimResult:
    params: SynthesisParams
    infidelity: float
    restarts_used: int
    converged: bool


def _ry(a: float) -> np.ndarray:
    c, s = math.cos(a / 2), math.sin(a / 2)
    return np.array([[c, -s], [s, c]])


_CX = np.array([[1., 0., 0., 0.],
                [0., 1., 0., 0.],
                [0., 0., 0., 1.],
                [0., 0., 1., 0.]])


def ansatz_unitary(angles: np.ndarray) -> np.ndarray:
    """Real 4x4 unitary of the circuit for angles (a1,b1,a2,b2,a3,b3)."""
    a1, b1, a2, b2, a3, b3 = angles
    k1 = np.kron(_ry(a1), _ry(b1))
    k2 = np.kron(_ry(a2), _ry(b2))
    k3 = np.kron(_ry(a3), _ry(b3))
    return k3 @ _CX @ k2 @ _CX @ k1


def params_to_vector(sp: SynthesisParams) -> np.ndarray:
    a, b = sp.alpha, sp.beta
    return np.array([a[0], b[0], a[1], b[1], a[2], b[2]])


def vector_to_params(v: np.ndarray) -> SynthesisParams:
    return SynthesisParams(alpha=(float(v[0]), float(v[2]), float(v[4])),
                           beta=(float(v[1]), float(v[3]), float(v[5])))


def fidelity(u_t: np.ndarray, sp: SynthesisParams) -> float:
    """Overlap fidelity of the realized circuit against a target."""
    u_r = ansatz_unitary(params_to_vector(sp))
    t = np.trace(np.asarray(u_t).conj().T @ u_r)
    return float(abs(t) ** 2) / _DIM ** 2


def infidelity_and_grad(u_t: np.ndarray, angles: np.ndarray
                        ) -> tuple[float, np.ndarray]:
    """1 - F and its analytic gradient in the six angles."""
    a1, b1, a2, b2, a3, b3 = angles
    r = [_ry(a1), _ry(b1), _ry(a2), _ry(b2), _ry(a3), _ry(b3)]
    d = [0.5 * _ry(a + math.pi) for a in angles]
    k1, k2, k3 = np.kron(r[0], r[1]), np.kron(r[2], r[3]), np.kron(r[4], r[5])

    right1 = _CX @ k2 @ _CX @ k1          # U = k3 @ right1
    left2 = k3 @ _CX                      # U = left2 @ k2 @ (_CX @ k1)
    cxk1 = _CX @ k1
    u_r = k3 @ right1

    uth = np.asarray(u_t).conj().T
    t = np.trace(uth @ u_r)
    f = abs(t) ** 2 / _DIM ** 2

    dks = [
        left2 @ np.kron(d[2], r[3]) @ cxk1,    # d/da2
        left2 @ np.kron(r[2], d[3]) @ cxk1,    # d/db2
        np.kron(d[4], r[5]) @ right1,          # d/da3
        np.kron(r[4], d[5]) @ right1,          # d/db3
        k3 @ _CX @ k2 @ _CX @ np.kron(d[0], r[1]),   # d/da1
        k3 @ _CX @ k2 @ _CX @ np.kron(r[0], d[1]),   # d/db1
    ]
    order = [4, 5, 0, 1, 2, 3]   # back to (a1,b1,a2,b2,a3,b3)
    grad = np.empty(6)
    for i, j in enumerate(order):
        dt = np.trace(uth @ dks[j])
        grad[i] = -2.0 * (t.conjugate() * dt).real / _DIM ** 2
    return float(1.0 - f), grad


def compass_search(u_t: np.ndarray, start: np.ndarray,
                   bounds: tuple[float, float], tol: float = 1e-12,
                   max_iter: int = 2000) -> tuple[np.ndarray, float]:
    """Derivative-free fallback: coordinate steps with halving radius."""
    lo, hi = bounds
    current = np.clip(start, lo, hi)
    f_cur = infidelity_and_grad(u_t, current)[0]
    step = 0.5
    it = 0
    while step > 1e-10 and f_cur > tol and it < max_iter:
        improved = False
        for i in range(6):
            for sgn in (1.0, -1.0):
                trial = current.copy()
                trial[i] = min(hi, max(lo, trial[i] + sgn * step))
                f_try = infidelity_and_grad(u_t, trial)[0]
                if f_try < f_cur:
                    current, f_cur = trial, f_try
                    improved = True
        if not improved:
            step *= 0.5
        it += 1
    return current, f_cur


def optimize(problem: FidelityProblem, seed: int,
             method: str = "lbfgsb") -> OptimResult:
    """Best-of-restarts fit of the circuit angles to ``problem.target``.

    Initial points are drawn up front from the optimizer RNG stream, so
    the result is a pure function of (problem, seed).  Stops early once
    the best infidelity reaches ``tol_infidelity``; ties between
    restarts keep the earliest.  Non-convergence is reported through
    ``converged``, never raised.
    """
    rng = optimizer_generator(seed)
    lo, hi = problem.init_range
    starts = rng.uniform(lo, hi, size=(problem.restarts, 6))
    box = [problem.bounds] * 6

    best_val = math.inf
    best_x = starts[0]
    used = 0
    for start in starts:
        used += 1
        if method == "lbfgsb":
            res = minimize(lambda v: infidelity_and_grad(problem.target, v),
                           start, jac=True, method="L-BFGS-B", bounds=box)
            cand_x, cand_val = res.x, float(res.fun)
        elif method == "compass":
            cand_x, cand_val = compass_search(problem.target, start,
                                              problem.bounds,
                                              tol=problem.tol_infidelity)
        else:
            raise ValueError(f"unknown method {method!r}")
        if cand_val < best_val:
            best_val, best_x = cand_val, cand_x
        if best_val <= problem.tol_infidelity:
            break

    best_val = max(best_val, 0.0)
    return OptimResult(params=vector_to_params(np.clip(best_x, *problem.bounds)),
                       infidelity=best_val, restarts_used=used,
                       converged=best_val <= problem.tol_infidelity)
