"""Thresholding greedy machinery.

t-greedy sets, the greedy operator ``P_A``, the alpha-truncation ``T_alpha``
and the Chebyshev t-greedy step, which keeps a t-greedy support and
replaces the coefficients on it by norm-minimizing ones.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import BudgetError, GlabError, SparseVector, WindowError, index_set, restrict, sign
from .optim import ChebyshevObjective, minimize_convex, polyhedral_minimize

# relative tolerance on the greedy comparison |x_n| >= t |x_j|
GREEDY_TOL = 1e-12
# windows up to this size are enumerated exhaustively
EXHAUSTIVE_WINDOW = 24
# hard cap on the number of greedy sets returned by one enumeration
MAX_SETS = 10**6
# a candidate replaces an earlier one only if it improves by more than this
TIE_TOL = 1e-12

TIE_BREAKS = ("lowest-index", "adversarial")


@dataclass(frozen=True)
class GreedyConfig:
    """Parameters of a (Chebyshev) t-greedy run.

    Parameters
    ----------
    t : float
        Weakness parameter in (0, 1].
    tie_break : str
        ``"lowest-index"`` uses the canonical greedy set; ``"adversarial"``
        tries every greedy set and keeps the worst outcome.
    tol, budget, seed
        Passed to the convex minimizer (``tol=None`` picks the space default).
    """

    t: float = 1.0
    tie_break: str = "lowest-index"
    tol: float | None = None
    budget: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.t <= 1:
            raise ValueError(f"t must lie in (0, 1], got {self.t}")
        if self.tie_break not in TIE_BREAKS:
            raise ValueError(f"tie_break must be one of {TIE_BREAKS}")


@dataclass
class ChebyshevStep:
    support: tuple
    coefficients: np.ndarray
    residual: SparseVector
    residual_norm: float
    achieved_tol: float = 0.0
    method: str = "closed-form"
    converged: bool = True

    def to_json(self) -> dict:
        coeffs = [[c.real, c.imag] if isinstance(c, complex) else c for c in self.coefficients.tolist()]
        return {
            "support": list(self.support),
            "coefficients": coeffs,
            "residual": self.residual.to_json(),
            "residual_norm": self.residual_norm,
            "achieved_tol": self.achieved_tol,
            "method": self.method,
            "converged": self.converged,
        }


def default_tol(space) -> float:
    return 1e-7 if space.kind == "trig" else 1e-9


def _window(x: SparseVector, m: int, window) -> tuple:
    if window is None:
        return tuple(range(1, max(x.max_index, m) + 1))
    w = index_set(window)
    if len(x) and not set(x.support) <= set(w):
        raise WindowError("the window must contain the support of x")
    return w


def _cmp_tol(x: SparseVector) -> float:
    return GREEDY_TOL * max(1.0, x.abs_max())


def is_greedy_set(x: SparseVector, A, t: float = 1.0) -> bool:
    """Whether ``min_{n in A} |x_n| >= t max_{n not in A} |x_n|`` (up to 1e-12 relative)."""
    A = set(index_set(A))
    inside = [abs(x[n]) for n in A]
    outside = [abs(v) for n, v in x.items() if n not in A]
    lo = min(inside) if inside else math.inf
    hi = max(outside) if outside else 0.0
    return lo >= t * hi - _cmp_tol(x)


def canonical_greedy_set(x: SparseVector, m: int, window=None) -> tuple:
    """Top-m indices by modulus, lower index first among equal moduli."""
    w = _window(x, m, window)
    if m > len(w):
        raise WindowError(f"m = {m} exceeds the window size {len(w)}")
    mods = np.array([abs(x[n]) for n in w])
    order = np.lexsort((np.array(w), -mods))
    return index_set(w[i] for i in order[:m])


def greedy_sets(x: SparseVector, m: int, t: float = 1.0, window=None) -> list:
    """All t-greedy sets of order m for x inside the window.

    Exhaustive for windows of at most 24 indices; for larger windows the
    canonical set plus every single swap that keeps the set t-greedy.
    The window defaults to ``[1, max(max supp x, m)]``.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if not 0 < t <= 1:
        raise ValueError("t must lie in (0, 1]")
    w = _window(x, m, window)
    if m > len(w):
        raise WindowError(f"m = {m} exceeds the window size {len(w)}")
    if m == 0:
        return [()]
    if len(w) > EXHAUSTIVE_WINDOW:
        return _canonical_and_swaps(x, m, t, w)

    idx = np.array(w)
    vals = np.array([abs(x[n]) for n in w])
    tol = _cmp_tol(x)
    out = set()
    # A is t-greedy with min_A |x| = a iff A contains every |x_n| > a/t and
    # lies inside {|x_n| >= a}
    for a in sorted(set(vals.tolist()), reverse=True):
        forced = vals > a / t + tol
        nf = int(forced.sum())
        if nf > m:
            break
        optional = (vals >= a - tol) & ~forced
        at = np.abs(vals - a) <= tol
        k = m - nf
        opt = idx[optional]
        if k == 0 or k > opt.size:
            continue
        if math.comb(opt.size, k) > MAX_SETS:
            raise BudgetError("too many tied greedy sets; shrink the window")
        base = tuple(idx[forced])
        at_set = set(idx[at].tolist())
        for comb in itertools.combinations(opt.tolist(), k):
            if at_set.intersection(comb):
                out.add(index_set(base + comb))
    return sorted(out)


def _canonical_and_swaps(x, m, t, w):
    A = canonical_greedy_set(x, m, w)
    out = {A}
    Aset = set(A)
    outside = [n for n in x.support if n not in Aset]
    zero = next((n for n in w if n not in Aset and x[n] == 0), None)
    if zero is not None:
        outside.append(zero)
    for i in A:
        for j in outside:
            B = index_set((Aset - {i}) | {j})
            if is_greedy_set(x, B, t):
                out.add(B)
    return sorted(out)


def greedy_apply(x: SparseVector, A) -> SparseVector:
    """The greedy operator on a chosen set: ``P_A x``."""
    return restrict(x, A)


def truncate(x: SparseVector, alpha: float):
    """alpha-truncation ``T_alpha x`` and the set ``Lambda_alpha = {|x_n| > alpha}``.

    Returns ``(T_alpha x, Lambda_alpha)``.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    lam = []
    entries = {}
    for n, v in x.items():
        if abs(v) > alpha:
            lam.append(n)
            entries[n] = alpha * sign(v)
        else:
            entries[n] = v
    return SparseVector(entries), tuple(lam)


def chebyshev_objective(space, x: SparseVector, A) -> ChebyshevObjective:
    return ChebyshevObjective(space, x, A)


def chebyshev_projection(space, x: SparseVector, A, tol: float | None = None,
                         budget: int | None = None, seed: int = 0) -> ChebyshevStep:
    """Best coefficients on the fixed support A: ``min_a ||x - sum_{n in A} a_n e_n||``.

    Lattice norms use the closed form ``a_n = x_n``; real polyhedral norms
    are solved as a linear program; everything else goes through
    :func:`minimize_convex`.  The zero vector and the greedy coefficients
    ``a_n = x_n`` are always candidates, and an earlier candidate is kept
    unless a later one improves by more than 1e-12, so exact witnesses
    report their exact (often zero) correction.
    """
    A = index_set(A)
    tol = default_tol(space) if tol is None else tol
    xA = np.array([x[n] for n in A], dtype=complex if x.is_complex else float)
    if not A:
        return ChebyshevStep((), xA, x, space.norm(x))
    if space.lattice:
        res = x - restrict(x, A)
        return ChebyshevStep(A, xA, res, space.norm(res))

    obj = ChebyshevObjective(space, x, A)
    cands = [(np.zeros(obj.d), "zero"), (obj.coords(xA), "greedy")]
    achieved, converged = 0.0, True
    if space.field == "real" and space.lp_form(1) is not None:
        r = polyhedral_minimize(space, x, A)
        cands.append((r.argmin, r.method))
    else:
        starts = [cands[1][0], -cands[1][0]]
        r = minimize_convex(obj, obj.d, tol=tol, budget=budget, starts=starts, seed=seed,
                            scale=max(1.0, x.abs_max()))
        cands.append((r.argmin, r.method))
        achieved, converged = r.achieved_tol, r.converged
    best, best_v, method = None, math.inf, None
    for a, name in cands:
        v = obj(a)
        if v < best_v - TIE_TOL:
            best, best_v, method = a, v, name
    coeffs = obj.coeffs(best)
    res = obj.residual(best)
    return ChebyshevStep(A, coeffs, res, space.norm(res), achieved, method, converged)


def chebyshev_step(space, x: SparseVector, m: int, cfg: GreedyConfig | None = None,
                   window=None, sets=None) -> ChebyshevStep:
    """One Chebyshev t-greedy step of order m.

    ``cfg.tie_break == "lowest-index"`` projects on the canonical greedy
    set; ``"adversarial"`` projects on every greedy set (or on ``sets``
    when given) and returns the worst residual.
    """
    cfg = cfg or GreedyConfig()
    if window is None:
        window = range(1, min(space.n_max, max(x.max_index, m)) + 1)
    if sets is None:
        if cfg.tie_break == "lowest-index":
            sets = [canonical_greedy_set(x, m, window)]
            if not is_greedy_set(x, sets[0], cfg.t):
                raise GlabError("canonical set is not greedy")
        else:
            sets = greedy_sets(x, m, cfg.t, window)
    worst = None
    for A in sets:
        step = chebyshev_projection(space, x, A, cfg.tol, cfg.budget, cfg.seed)
        if worst is None or step.residual_norm > worst.residual_norm + TIE_TOL:
            worst = step
    return worst


def greedy_step(space, x: SparseVector, m: int, cfg: GreedyConfig | None = None,
                window=None) -> tuple:
    """Plain t-greedy step: ``(A, ||x - P_A x||)`` for the canonical or worst greedy set."""
    cfg = cfg or GreedyConfig()
    if window is None:
        window = range(1, min(space.n_max, max(x.max_index, m)) + 1)
    if cfg.tie_break == "lowest-index":
        sets = [canonical_greedy_set(x, m, window)]
    else:
        sets = greedy_sets(x, m, cfg.t, window)
    worst = None
    for A in sets:
        r = space.norm(x - restrict(x, A))
        if worst is None or r > worst[1] + TIE_TOL:
            worst = (A, r)
    return worst
