"""Minimization of the Chebyshev projection objective.

The objective ``a -> ||x - sum_{n in A} a_n e_n||`` is convex, and on the
polyhedral spaces it is piecewise linear with non-unique minimizers.  Three
routes are provided:

* :func:`minimize_convex` -- derivative-free cyclic coordinate descent with
  golden-section line searches (generic engine, any space);
* :func:`polyhedral_minimize` -- exact linear program for spaces exposing a
  polyhedral form (summing, difference, l1, l_inf);
* :func:`grid_oracle` -- exhaustive lattice evaluation, used only to
  validate the other two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .core import BudgetError, GlabError, SparseVector, index_set

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
GRID_CAP = 10**8


@dataclass
class MinimizeResult:
    argmin: np.ndarray
    value: float
    achieved_tol: float
    evaluations: int
    converged: bool = True
    method: str = "coordinate-descent"


class _Counter:
    """Wraps an objective; counts calls and tracks the best point seen."""

    def __init__(self, f, budget):
        self.f = f
        self.budget = budget
        self.n = 0
        self.best_x = None
        self.best_v = math.inf

    def __call__(self, a):
        if self.n >= self.budget:
            raise _OutOfBudget
        self.n += 1
        v = float(self.f(a))
        if v < self.best_v:
            self.best_v, self.best_x = v, np.array(a, dtype=float)
        return v


class _OutOfBudget(Exception):
    pass


def _line_search(phi, f0, h, xtol):
    """Minimize the convex function ``phi`` on the real line, ``phi(0) = f0``.

    Brackets by doubling from step h, then golden section down to ``xtol``.
    Returns ``(s, phi(s))``.
    """
    fp = phi(h)
    if fp < f0:
        a, b, fb, c = 0.0, h, fp, 2.0 * h
        fc = phi(c)
        while fc < fb:
            a, b, fb = b, c, fc
            c = 2.0 * c
            fc = phi(c)
    else:
        fm = phi(-h)
        if fm < f0:
            a, b, fb, c = 0.0, -h, fm, -2.0 * h
            fc = phi(c)
            while fc < fb:
                a, b, fb = b, c, fc
                c = 2.0 * c
                fc = phi(c)
        else:
            a, b, fb, c = -h, 0.0, f0, h
    lo, hi = min(a, c), max(a, c)
    best_s, best_f = b, fb
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = phi(x1), phi(x2)
    while hi - lo > xtol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = phi(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = phi(x2)
    for s, v in ((x1, f1), (x2, f2)):
        if v < best_f:
            best_s, best_f = s, v
    return best_s, best_f


def _descent(fc: _Counter, x0, tol, h0, rng):
    d = x0.size
    x = np.array(x0, dtype=float)
    fx = fc(x)
    h = h0
    coords = [np.eye(d)[i] for i in range(d)]
    pairs = []
    for i in range(d):
        for j in range(i + 1, d):
            for sgn in (1.0, -1.0):
                u = np.zeros(d)
                u[i], u[j] = 1.0, sgn
                pairs.append(u)
    xtol = max(tol * 0.1, 1e-15)
    last_gain = math.inf
    while True:
        gain = 0.0
        # coordinate sweeps first; diagonal directions only once those stall
        for dirs in (coords, pairs):
            while True:
                sweep_gain = 0.0
                moves = []
                for u in dirs:
                    s, v = _line_search(lambda s: fc(x + s * u), fx, h, xtol)
                    if v < fx:
                        sweep_gain += fx - v
                        x = x + s * u
                        fx = v
                        moves.append(abs(s))
                gain += sweep_gain
                if moves:
                    h = max(2.0 * max(moves), 10 * xtol)
                if sweep_gain <= tol:
                    break
            if gain > tol:
                break
        if gain <= tol and d >= 2:
            # a few seeded random directions before declaring a stall
            for _ in range(d):
                u = rng.standard_normal(d)
                u /= np.abs(u).max()
                s, v = _line_search(lambda s: fc(x + s * u), fx, h, xtol)
                if v < fx:
                    gain += fx - v
                    x, fx = x + s * u, v
        last_gain = gain
        if gain <= tol:
            return x, fx, last_gain


def minimize_convex(objective, d: int, tol: float = 1e-9, budget: int | None = None,
                    starts=None, seed: int = 0, scale: float = 1.0) -> MinimizeResult:
    """Derivative-free minimization of a convex function of ``d`` real variables.

    Runs cyclic coordinate descent (golden-section line searches, adaptive
    step) from the zero vector and from each point in ``starts``; diagonal
    directions ``e_i +- e_j`` and a few seeded random directions are tried
    when coordinate sweeps stall.  ``budget`` caps objective evaluations per
    restart (default ``200 d^2``); running out marks the result
    ``converged=False`` and returns the best point seen.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if d == 0:
        v = float(objective(np.zeros(0)))
        return MinimizeResult(np.zeros(0), v, 0.0, 1)
    budget = 200 * d * d if budget is None else int(budget)
    pts = [np.zeros(d)]
    for s in starts or ():
        s = np.asarray(s, dtype=float)
        if not any(np.array_equal(s, q) for q in pts):
            pts.append(s)
    best = None
    total = 0
    converged = True
    achieved = 0.0
    for r, x0 in enumerate(pts):
        fc = _Counter(objective, budget)
        rng = np.random.default_rng([seed, r])
        h0 = scale * max(1.0, float(np.abs(x0).max()))
        try:
            _, _, gain = _descent(fc, x0, tol, h0, rng)
            achieved = max(achieved, gain)
        except _OutOfBudget:
            converged = False
        total += fc.n
        if best is None or fc.best_v < best[1]:
            best = (fc.best_x, fc.best_v)
    return MinimizeResult(best[0], best[1], achieved, total, converged)


def grid_oracle(objective, box, step: float, cap: int = GRID_CAP):
    """Exhaustive minimization over the lattice ``lo + step*k`` inside ``box``.

    ``box`` is a sequence of ``(lo, hi)`` pairs.  Objectives with a ``batch``
    method (rows = points) are evaluated in chunks.  Returns ``(argmin, value)``.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    axes = [lo + step * np.arange(int(math.floor((hi - lo) / step + 1e-9)) + 1) for lo, hi in box]
    count = math.prod(len(a) for a in axes)
    if count > cap:
        raise BudgetError(f"lattice of {count} points exceeds cap {cap}")
    if not axes:
        return np.zeros(0), float(objective(np.zeros(0)))
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    if hasattr(objective, "batch"):
        vals = np.concatenate([objective.batch(mesh[i:i + 65536]) for i in range(0, count, 65536)])
    else:
        vals = np.array([objective(p) for p in mesh])
    k = int(np.argmin(vals))
    return mesh[k], float(vals[k])


class ChebyshevObjective:
    """``a -> ||x - sum_{n in A} a_n e_n||`` over real coordinates.

    In the complex field each coefficient contributes two real coordinates
    ``(re, im)``.  ``lipschitz`` bounds the objective's Lipschitz constant
    with respect to the max-norm on coordinates.
    """

    def __init__(self, space, x: SparseVector, A):
        self.space = space
        self.x = x
        self.A = index_set(A)
        self.complex = space.field == "complex"
        self.d = len(self.A) * (2 if self.complex else 1)
        nA = np.array(self.A, dtype=np.int64)
        w = 2.0 if self.complex else 1.0
        self.lipschitz = w * sum(space.basis_norm(int(n)) for n in self.A)
        if space.kind == "trig":
            self._mode = "grid"
            self._base = space.values_on_grid(x)
            self._cols = space.columns(self.A)
        elif space.kind == "block":
            self._mode = "sparse"
            self._nA = nA
        else:
            self._mode = "dense"
            width = max(x.max_index, int(nA.max()) if nA.size else 0, 1)
            dtype = complex if self.complex else float
            self._base = x.to_dense(width).astype(dtype)
            self._cols = nA - 1

    def coeffs(self, a):
        a = np.asarray(a, dtype=float)
        if self.complex:
            return a[..., 0::2] + 1j * a[..., 1::2]
        return a

    def coords(self, c):
        c = np.asarray(c)
        if self.complex:
            out = np.empty(c.shape[:-1] + (2 * c.shape[-1],))
            out[..., 0::2] = c.real
            out[..., 1::2] = c.imag
            return out
        return c.real.astype(float)

    def residual(self, a) -> SparseVector:
        c = self.coeffs(a)
        corr = SparseVector.from_arrays(np.array(self.A, dtype=np.int64), c)
        return self.x - corr

    def __call__(self, a):
        if self._mode == "sparse":
            return self.space.norm(self.residual(a))
        return float(self.batch(np.asarray(a, dtype=float)[None, :])[0])

    def batch(self, P):
        c = self.coeffs(P)
        if self._mode == "grid":
            return self.space.grid_norm(self._base[None, :] - c @ self._cols)
        if self._mode == "dense":
            V = np.repeat(self._base[None, :], c.shape[0], axis=0)
            V[:, self._cols] -= c
            return self.space.dense_norms(V)
        return np.array([self(p) for p in P])


def chebyshev_objective(space, x: SparseVector, A) -> ChebyshevObjective:
    return ChebyshevObjective(space, x, A)


def polyhedral_minimize(space, x: SparseVector, A) -> MinimizeResult:
    """Solve ``min_a ||x - sum_{n in A} a_n e_n||`` exactly as a linear program.

    Requires ``space.lp_form`` (real polyhedral norms).  The returned value
    is the norm re-evaluated at the LP solution.
    """
    A = index_set(A)
    width = max(x.max_index, A[-1] if A else 0, 1)
    form = space.lp_form(width)
    if form is None:
        raise GlabError(f"{space.descriptor} has no polyhedral form")
    L, kind = form
    c0 = x.to_dense(width).real
    d = len(A)
    r = L.shape[0]
    LE = L[:, [n - 1 for n in A]]
    Lc = L @ c0
    if kind == "max":
        # variables (a, s): minimize s with |L(c0 - E a)| <= s
        cost = np.r_[np.zeros(d), 1.0]
        ones = np.ones((r, 1))
        A_ub = np.block([[-LE, -ones], [LE, -ones]])
    else:
        # variables (a, u): minimize sum u with |L(c0 - E a)| <= u
        cost = np.r_[np.zeros(d), np.ones(r)]
        I = np.eye(r)
        A_ub = np.block([[-LE, -I], [LE, -I]])
    b_ub = np.r_[-Lc, Lc]
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * A_ub.shape[1], method="highs")
    if res.status != 0:
        raise GlabError(f"linear program failed: {res.message}")
    a = res.x[:d]
    obj = ChebyshevObjective(space, x, A)
    return MinimizeResult(a, obj(a), 0.0, 1, True, method="linear-program")
