"""Witness constructions and inequality checks.

Each ``witness_*`` function builds an explicit vector, runs the
(Chebyshev) greedy step on a prescribed greedy set and compares the
residual with the best m-term error, producing a :class:`WitnessReport`.
The ``check_*`` functions evaluate the upper-bound right-hand sides from
parameter tables and record which inequalities hold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import GlabError, SparseVector, WindowError, index_set, indicator, restrict
from .greedy import (
    GreedyConfig, chebyshev_projection, chebyshev_step, greedy_sets, greedy_step, is_greedy_set,
)
from .params import (
    conditionality_est, democracy_alt, fundamental_function, gamma_cc, indicator_profiles,
    quasi_greedy_est, sigma_search, super_democracy, theta_inf, theta_sep, unsigned_democracy,
    DEFAULT_C_LIST,
)
from .spaces import (
    BlockSpace, BlockSpec, DifferenceSpace, LpSpace, SummingSpace, TrigSpace, trig_index, vp_operator,
)

# exhaustive sigma_m is attempted when the number of supports is at most this
SIGMA_EXHAUSTIVE_SUPPORTS = 1000
# separation used for the far padding set in the A > cB construction
LAMBDA = 64
TOL = 1e-9


@dataclass
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    satisfied: bool
    advisory: bool = False

    def to_json(self):
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "satisfied": self.satisfied, "advisory": self.advisory}


@dataclass
class WitnessReport:
    """Outcome of one witness run.

    ``ratio = residual / sigma``.  ``residual_mode`` is ``"chebyshev"``
    (measured projection) or ``"indicator-bound"``; ``sigma_mode`` is
    ``"exhaustive"`` or ``"approximant"`` (an upper bound, so the ratio is
    then a lower bound for the Lebesgue parameter).
    """

    space: str
    m: int
    t: float
    witness: SparseVector
    greedy_set: tuple
    residual: float
    sigma: float
    ratio: float
    expected_ratio: float | None = None
    bounds: list = field(default_factory=list)
    residual_mode: str = "chebyshev"
    sigma_mode: str = "exhaustive"
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "space": self.space,
            "m": self.m,
            "t": self.t,
            "witness": self.witness.to_json(),
            "greedy_set": list(self.greedy_set),
            "residual": self.residual,
            "sigma": self.sigma,
            "ratio": self.ratio,
            "expected_ratio": self.expected_ratio,
            "residual_mode": self.residual_mode,
            "sigma_mode": self.sigma_mode,
            "bounds": [b.to_json() for b in self.bounds],
            "extra": self.extra,
        }


def _check_t(t):
    if not 0 < t <= 1:
        raise ValueError(f"t must lie in (0, 1], got {t}")


def _sigma(space, x, m, approx_value, approx_support, window=None, mode="auto"):
    """Exhaustive sigma_m when affordable, else the given approximant value."""
    w = index_set(window or range(1, x.max_index + 1))
    n_supports = math.comb(len(w), min(m, len(w)))
    if mode == "exhaustive" or (mode == "auto" and n_supports <= SIGMA_EXHAUSTIVE_SUPPORTS):
        v, B, _ = sigma_search(space, x, m, w, max_supports=max(n_supports, 1))
        return v, list(B), "exhaustive"
    return approx_value, list(approx_support), "approximant"


# ---------------------------------------------------------------------------
# sharpness witnesses for the general upper bound


def summing_vector(m: int, t: float) -> SparseVector:
    """m blocks (1/2, 1/t, 1/2), a middle 1/2, then m blocks (-1, 1)."""
    vals = [0.5, 1.0 / t, 0.5] * m + [0.5] + [-1.0, 1.0] * m
    return SparseVector.from_dense(vals)


def difference_vector(m: int, t: float) -> SparseVector:
    """Coefficients ``(1, [1, 1, -1/t, 1] x m)`` in the difference basis."""
    return SparseVector.from_dense([1.0] + [1.0, 1.0, -1.0 / t, 1.0] * m)


def expected_sharp_ratio(m: int, t: float, frak_k: float = 2.0) -> float:
    return 1.0 + (1.0 + 1.0 / t) * frak_k * m


def _sharp_report(space, x, A, m, t, approx, sigma_mode):
    if not is_greedy_set(x, A, t):
        raise GlabError("witness set is not t-greedy")
    step = chebyshev_projection(space, x, A)
    greedy_res = space.norm(x - restrict(x, A))
    sig, B, smode = _sigma(space, x, m, approx[0], approx[1], mode=sigma_mode)
    ratio = step.residual_norm / sig
    rep = WitnessReport(
        space=space.descriptor, m=m, t=t, witness=x, greedy_set=tuple(A),
        residual=step.residual_norm, sigma=sig, ratio=ratio,
        expected_ratio=expected_sharp_ratio(m, t, space.frak_k), sigma_mode=smode,
        extra={
            "chebyshev_coefficients": [float(c) for c in step.coefficients],
            "chebyshev_method": step.method,
            "greedy_residual": greedy_res,
            "sigma_support": B,
        },
    )
    rhs = expected_sharp_ratio(m, t, space.frak_k)
    rep.bounds.append(BoundCheck("general", ratio, rhs, ratio <= rhs + TOL))
    rep.bounds.append(BoundCheck("dominance", step.residual_norm, greedy_res,
                                 step.residual_norm <= greedy_res + TOL))
    return rep


def witness_summing(m: int, t: float, sigma: str = "auto") -> WitnessReport:
    """Equality case of the general bound in the summing basis.

    A is the set of the m entries equal to -1.  The Chebyshev correction
    on A is zero, the residual is ``m + m/t + 1/2`` and ``sigma_m = 1/2``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    _check_t(t)
    x = summing_vector(m, t)
    space = SummingSpace(x.max_index)
    A = [n for n, v in x.items() if v == -1.0]
    # subtracting 1 + 1/t at the 1/t entries leaves partial sums in [-1/2, 1/2]
    big = [3 * j + 2 for j in range(m)]
    return _sharp_report(space, x, A, m, t, (0.5, big), sigma)


def witness_difference(m: int, t: float, sigma: str = "auto") -> WitnessReport:
    """Equality case of the general bound in the difference basis.

    ``Gamma = {2, 6, ..., 4m - 2}``; the optimal coefficients on Gamma are
    zero, the residual is ``2m(1 + 1/t) + 1`` and ``sigma_m = 1``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    _check_t(t)
    x = difference_vector(m, t)
    space = DifferenceSpace(x.max_index)
    gamma = [4 * j - 2 for j in range(1, m + 1)]
    # adding 1 + 1/t at the -1/t entries gives the all-ones vector, of norm 1
    neg = [4 * j for j in range(1, m + 1)]
    return _sharp_report(space, x, gamma, m, t, (1.0, neg), sigma)


# ---------------------------------------------------------------------------
# lower bounds through summation operators


def witness_cesaro_lower(space, A, B, c: int, t: float, y: SparseVector | None = None,
                         eps=None, eta=None, m: int | None = None, lam: int = LAMBDA,
                         sigma: str = "auto", tol: float | None = None) -> WitnessReport:
    """Separated-pair lower bound for the Chebyshev Lebesgue parameter.

    Builds ``x = 1_{eps A} + t y + t 1_{eta B} + t 1_C`` (``A > c(B u supp y)``,
    C placed at the first free indices above ``lam * max A``) or
    ``x = 1_{eps A} + t 1_{eta B} + t 1_C`` (``B > cA``, C right above B),
    and projects x on the greedy set ``B u C``.  The report's ratio is
    checked against ``(1/(t beta^2)) ((c-1)/(c+1)) ((lam-1)/(lam+1)) Q``
    (respectively ``(1/(t beta)) ((c-1)/(c+1)) Q``) with
    ``Q = ||1_{eps A}|| / ||1_{eta B} + y||``.

    Trigonometric spaces report the indicator quotient ``Q / t`` itself
    (``residual_mode = "indicator-bound"``) instead of running the
    projection.
    """
    _check_t(t)
    A, B = index_set(A), index_set(B)
    if len(A) != len(B) or not A:
        raise ValueError("A and B must be nonempty with |A| = |B|")
    y = y if y is not None else SparseVector()
    if len(y) and y.abs_max() > 1 + 1e-12:
        raise ValueError("y must have coefficients of modulus <= 1")
    low = set(B) | set(y.support)
    if min(A) > c * max(low):
        case = "A>cB"
    elif not len(y) and min(B) > c * max(A):
        case = "B>cA"
    else:
        raise ValueError("separation violated: need A > c(B u supp y) or B > cA")
    m = len(B) if m is None else m
    if m < len(B):
        raise ValueError("m must be at least |B|")
    eps = eps or {n: 1.0 for n in A}
    eta = eta or {n: 1.0 for n in B}
    start = lam * max(A) + 1 if case == "A>cB" else max(B) + 1
    used = set(A) | set(B) | set(y.support)
    C = []
    n = start
    while len(C) < m - len(B):
        if n not in used:
            C.append(n)
        n += 1
    C = tuple(C)
    one_A = indicator(A, eps)
    den_vec = indicator(B, eta) + y
    x = one_A + t * den_vec + t * indicator(C)
    if x.max_index > space.n_max:
        raise WindowError(f"witness reaches index {x.max_index} beyond {space.descriptor}")
    G = index_set(set(B) | set(C))
    if not is_greedy_set(x, G, t):
        raise GlabError("B u C is not t-greedy for the witness")
    nA = space.norm(one_A)
    nden = space.norm(den_vec)
    Q = nA / nden
    beta = space.cesaro_constant if space.is_cesaro else None
    factor = (c - 1) / (c + 1)
    if case == "A>cB":
        lower = factor * (lam - 1) / (lam + 1) * Q / (t * beta**2) if beta else None
    else:
        lower = factor * Q / (t * beta) if beta else None
    approx_support = tuple(A) + C
    extra = {"case": case, "A": list(A), "B": list(B), "C": list(C), "c": c, "lambda": lam,
             "norm_A": nA, "norm_B_plus_y": nden, "indicator_ratio": Q / t}
    if space.kind == "trig":
        residual, sig, smode, rmode = nA, t * nden, "approximant", "indicator-bound"
    else:
        step = chebyshev_projection(space, x, G, tol)
        residual, rmode = step.residual_norm, "chebyshev"
        sig, supp, smode = _sigma(space, x, m, t * nden, approx_support, mode=sigma)
        extra["chebyshev_coefficients"] = [float(np.real(v)) for v in step.coefficients]
        extra["sigma_support"] = supp
    ratio = residual / sig
    rep = WitnessReport(space.descriptor, m, t, x, G, residual, sig, ratio,
                        residual_mode=rmode, sigma_mode=smode, extra=extra)
    if lower is not None:
        rep.bounds.append(BoundCheck("cesaro-lower", lower, ratio, ratio >= lower - TOL))
    return rep


# ---------------------------------------------------------------------------
# trigonometric system


def rudin_shapiro(L: int) -> np.ndarray:
    """Rudin-Shapiro signs of length ``2^L``: ``P <- (P, Q)``, ``Q <- (P, -Q)``."""
    if L < 0:
        raise ValueError("L must be nonnegative")
    P = np.array([1.0])
    Q = np.array([1.0])
    for _ in range(L):
        P, Q = np.concatenate([P, Q]), np.concatenate([P, -Q])
    return P


def dirichlet_set(ell: int) -> tuple:
    """Storage indices of the frequencies ``-ell..ell``."""
    return index_set(trig_index(k) for k in range(-ell, ell + 1))


def lacunary_set(size: int, above: int) -> tuple:
    """``size`` storage indices of the frequencies ``+-2^j``, all beyond ``above``.

    The smallest j satisfies ``index(2^j) > above``; frequencies alternate
    ``2^j, -2^j, 2^(j+1), ...`` so that exponents grow only like size/2.
    """
    j = 0
    while trig_index(1 << j) <= above:
        j += 1
    idx = []
    while len(idx) < size:
        f = 1 << j
        idx.append(trig_index(f))
        if len(idx) < size:
            idx.append(trig_index(-f))
        j += 1
    return index_set(idx)


def vallee_poussin_tail(ell: int) -> SparseVector:
    """The part y of the de la Vallee-Poussin kernel beyond the Dirichlet block.

    ``V_ell = 2 K_{2 ell + 1} - K_ell`` (Fejer kernels) has coefficient 1
    for ``|k| <= ell`` and ``2 - |k|/(ell + 1)`` for ``ell < |k| <= 2 ell + 1``.
    """
    entries = {}
    for k in range(ell + 1, 2 * ell + 2):
        v = 2.0 - k / (ell + 1)
        entries[trig_index(k)] = v
        entries[trig_index(-k)] = v
    return SparseVector(entries)


def _trig_space(p, maxfreq, grid):
    return TrigSpace(p, int(maxfreq), grid)


def witness_trig(p: float, m: int, t: float = 1.0, grid: int | None = None) -> WitnessReport:
    """Indicator-quotient witness for the trigonometric system in L^p.

    * ``1 < p <= 2``: B the Dirichlet block ``|k| <= ell`` (``ell = (m-1)//2``),
      A lacunary with ``A > 2B``; ratio ``||1_A|| / (t ||1_B||)``.
    * ``p >= 2``: same sets, numerator and denominator exchanged.
    * ``p = inf``: B a Rudin-Shapiro block ``N + [0, 2^L)`` with ``2^L <= m``,
      A the frequencies ``+-1..+-2^(L-1)`` (``|A| = 2^L``), ``B > 2A``.
    * ``p = 1``: lacunary A against the de la Vallee-Poussin kernel
      ``V_ell = 1_B + y`` via :func:`witness_cesaro_lower`.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    _check_t(t)
    if not p >= 1:
        raise ValueError(f"unsupported p = {p}")
    ell = (m - 1) // 2
    size = 2 * ell + 1
    if p == 1:
        B = dirichlet_set(ell)
        y = vallee_poussin_tail(ell)
        low = max(max(B), y.max_index)
        A = lacunary_set(size, 2 * low)
        maxfreq = max(abs(_freq(n)) for n in A)
        space = _trig_space(p, maxfreq, grid)
        rep = witness_cesaro_lower(space, A, B, 2, t, y=y)
        rep.extra["kernel_norm"] = space.norm(indicator(B) + y)
        rep.extra["case"] = "p=1"
        return rep
    if math.isinf(p):
        L = int(math.floor(math.log2(m)))
        half = 1 << (L - 1) if L >= 1 else 0
        A = index_set(trig_index(s * k) for k in range(1, half + 1) for s in (1, -1)) if half else (1,)
        n_a = max(A)
        N = 1
        while trig_index(N) <= 2 * n_a:
            N += 1
        rs = rudin_shapiro(L)
        B = index_set(trig_index(N + q) for q in range(1 << L))
        eta = {trig_index(N + q): float(rs[q]) for q in range(1 << L)}
        maxfreq = N + (1 << L)
        space = _trig_space(p, maxfreq, grid)
        num = space.norm(indicator(A))
        den = space.norm(indicator(B, eta))
        rep = _trig_report(space, m, t, indicator(A) + t * indicator(B, eta), B, num, den)
        rep.extra.update({"case": "p=inf", "A": list(A), "B": list(B), "N": N, "L": L})
        return rep
    B = dirichlet_set(ell)
    A = lacunary_set(size, 2 * max(B))
    maxfreq = max(abs(_freq(n)) for n in A)
    space = _trig_space(p, maxfreq, grid)
    nA = space.norm(indicator(A))
    nB = space.norm(indicator(B))
    if p <= 2:
        num, den, greedy_set = nA, nB, B
        x = indicator(A) + t * indicator(B)
    else:
        num, den, greedy_set = nB, nA, A
        x = indicator(B) + t * indicator(A)
    rep = _trig_report(space, m, t, x, greedy_set, num, den)
    rep.extra.update({"case": "1<p<=2" if p <= 2 else "p>=2", "A": list(A), "B": list(B)})
    return rep


def _freq(n):
    from .spaces import trig_frequency
    return trig_frequency(int(n))


def _trig_report(space, m, t, x, G, num, den):
    ratio = num / (t * den)
    return WitnessReport(space.descriptor, m, t, x, tuple(G), num, t * den, ratio,
                         residual_mode="indicator-bound", sigma_mode="approximant",
                         extra={"numerator_norm": num, "denominator_norm": den})


def loglog_slope(ms, ratios) -> float:
    """Least-squares slope of ``log2 ratio`` against ``log2 m``."""
    lx = np.log2(np.asarray(ms, dtype=float))
    ly = np.log2(np.asarray(ratios, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])


def trig_slope(p: float, ms=(4, 8, 16, 32, 64), t: float = 1.0) -> dict:
    """Witness ratios over ms and their log-log slope, next to ``|1/p - 1/2|``."""
    reports = [witness_trig(p, m, t) for m in ms]
    ratios = [r.ratio for r in reports]
    expected = abs((0.0 if math.isinf(p) else 1.0 / p) - 0.5)
    out = {"p": "inf" if math.isinf(p) else p, "ms": list(ms), "ratios": ratios,
           "slope": loglog_slope(ms, ratios), "expected_slope": expected}
    if p == 1:
        out["kernel_norms"] = [r.extra["kernel_norm"] for r in reports]
    return out


# ---------------------------------------------------------------------------
# block space


def gap_formula(n_k: int) -> float:
    """``(N_k/2) / (log2 N_k * sqrt(log2 log2 N_k))``."""
    lg = n_k.bit_length() - 1 if n_k & (n_k - 1) == 0 else math.log2(n_k)
    return (n_k / 2) / (lg * math.sqrt(math.log2(lg)))


def witness_block(spec: BlockSpec | None = None, k: int = 2, samples: int = 200,
                  seed: int = 0) -> dict:
    """Super-democracy gap in the block space.

    A takes ``N_k/2`` indices of ``S_k`` and ``N_k/2`` of ``S_{k+1}``;
    B is ``S_k``.  Also samples disjoint signed pairs ``|A'| = |B'| <= N_k``
    and records the largest quotient next to ``sqrt(N_k)``.
    """
    spec = spec or BlockSpec.default(3)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k + 1 > spec.kmax:
        raise WindowError(
            f"block {k + 1} is not available; the default recursion stops at kmax = 3, "
            "use block:geom:base:kmax for larger k"
        )
    space = BlockSpace(spec)
    n_k = spec.sizes[k - 1]
    if n_k > 1 << 22:
        raise WindowError("block too large for explicit evaluation; use a geometric recursion")
    half = n_k // 2
    A_idx = np.concatenate([spec.block_indices(k, half), spec.block_indices(k + 1, half)])
    B_idx = spec.block_indices(k)
    one_A = SparseVector.from_arrays(A_idx, np.ones(A_idx.size))
    one_B = SparseVector.from_arrays(B_idx, np.ones(B_idx.size))
    nA, nB = space.norm(one_A), space.norm(one_B)
    ratio = nA / nB
    out = {
        "space": space.descriptor, "k": k, "N_k": n_k,
        "norm_A": nA, "norm_B": nB, "ratio": ratio,
        "terms_A": space.terms(one_A), "terms_B": space.terms(one_B),
    }
    if spec.label == "default":
        out["gap_formula"] = gap_formula(n_k)
        out["gap_formula_holds"] = ratio >= gap_formula(n_k) - TOL
    # disjoint pairs within S_1 .. S_{k+1}: structured ones, then random ones
    rng = np.random.default_rng(seed)
    lo, _ = spec.block(1)
    s_k, s_k1 = spec.block(k)[0], spec.block(k + 1)[0]
    hi = s_k1 + 2 * n_k
    pairs = []
    for s in sorted({2, n_k // 8, n_k // 4, n_k // 2, n_k}):
        h = s // 2
        split = np.concatenate([np.arange(s_k, s_k + h), np.arange(s_k1, s_k1 + s - h)])
        pairs.append((split, np.arange(s_k1 + n_k, s_k1 + n_k + s)))
        if s <= n_k // 2:
            pairs.append((split, np.arange(s_k + h, s_k + h + s)))
        pairs.append((np.arange(s_k1, s_k1 + s), np.arange(s_k1 + s, s_k1 + 2 * s)))
    for _ in range(samples):
        s = int(rng.integers(1, n_k + 1))
        pool = rng.choice(np.arange(lo, hi + 1), size=2 * s, replace=False)
        pairs.append((np.sort(pool[:s]), np.sort(pool[s:])))
    worst = 0.0
    root = math.sqrt(n_k)
    for a, b in pairs:
        for ea, eb in ((np.ones(a.size), np.ones(b.size)),
                       (rng.choice((-1.0, 1.0), size=a.size), rng.choice((-1.0, 1.0), size=b.size))):
            na = space.norm(SparseVector.from_arrays(a, ea))
            nb = space.norm(SparseVector.from_arrays(b, eb))
            worst = max(worst, na / nb, nb / na)
    out["pair_count"] = 2 * len(pairs)
    out["pair_max"] = worst
    out["pair_bound"] = root
    out["pair_bound_holds"] = worst <= root + TOL
    return out


# ---------------------------------------------------------------------------
# upper-bound right-hand sides


def upper_bound_tables(space, m: int, window=None, family=None, seed: int = 0, jobs: int = 1) -> dict:
    """Parameter tables up to ``2m`` needed by :func:`check_upper_bounds`."""
    from .params import resolve_window
    w = resolve_window(space, window)
    M = min(2 * m, len(w))
    prof = indicator_profiles(space, M, w, jobs)
    mt, mtd = super_democracy(space, M, w, profiles=prof)
    g, gc, gt = quasi_greedy_est(space, M, family, seed, w)
    k, kc = conditionality_est(space, M, family, seed, w)
    return {"mu_tilde": mt, "mu_tilde_d": mtd, "gamma": gamma_cc(space, M, w, jobs),
            "g": g, "g_c": gc, "g_tilde": gt, "k": k, "k_c": kc}


def _tv(tables, name, j):
    t = tables[name]
    j = min(j, max(t.values))
    return t.values[j], t.mode


def check_upper_bounds(space, m: int, t: float, report: WitnessReport, tables: dict | None) -> list:
    """Compare a witness ratio with the general, quasi-greedy and conditionality bounds.

    Bounds built from estimated (lower-bound) tables are advisory: they are
    recorded but a violation is not a failure.  Also checks the chain
    ``cheb residual <= greedy residual <= k^c_m cheb residual``.
    """
    out = []
    ratio = report.ratio
    try:
        fk = space.frak_k
    except GlabError:
        fk = None
    if fk is not None:
        rhs = 1 + (1 + 1 / t) * fk * m
        out.append(BoundCheck("general", ratio, rhs, ratio <= rhs + TOL))
    if tables is None:
        raise GlabError("parameter tables are required for the quasi-greedy bounds")
    need = ("g_c", "g_tilde", "mu_tilde", "gamma", "mu_tilde_d", "k", "k_c")
    missing = [n for n in need if n not in tables]
    if missing:
        raise GlabError(f"missing parameter tables: {missing}")
    gc2, m1 = _tv(tables, "g_c", 2 * m)
    gt1, m2 = _tv(tables, "g_tilde", m)
    gt2, _ = _tv(tables, "g_tilde", 2 * m)
    mt1, m3 = _tv(tables, "mu_tilde", m)
    ga2, m4 = _tv(tables, "gamma", 2 * m)
    mtd1, m5 = _tv(tables, "mu_tilde_d", m)
    k1, m6 = _tv(tables, "k", m)
    kc1, m7 = _tv(tables, "k_c", m)
    estimated = any(md != "exact" for md in (m1, m2, m3, m4, m5))
    rhs = gc2 + (2 / t) * min(gt1 * mt1, ga2 * gt2 * mtd1)
    out.append(BoundCheck("quasi-greedy", ratio, rhs, ratio <= rhs + TOL, advisory=estimated))
    rhs = gc2 + (2 / t) * k1 * mtd1
    out.append(BoundCheck("conditionality", ratio, rhs, ratio <= rhs + TOL,
                          advisory=estimated or m6 != "exact"))
    g_res = report.extra.get("greedy_residual")
    if g_res is not None and report.residual_mode == "chebyshev":
        c_res = report.residual
        out.append(BoundCheck("chain-cheb-greedy", c_res, g_res, c_res <= g_res + TOL))
        out.append(BoundCheck("chain-greedy-kc", g_res, kc1 * c_res, g_res <= kc1 * c_res + TOL,
                              advisory=m7 != "exact"))
    return out


def random_witness(space, m: int, t: float, window=None, samples: int = 20, seed: int = 0) -> WitnessReport:
    """Worst sampled ratio ``max_G ||x - CG x|| / sigma_m(x)`` over random x in the window."""
    from .params import resolve_window
    w = resolve_window(space, window)
    rng = np.random.default_rng(seed)
    cfg = GreedyConfig(t=t, tie_break="adversarial")
    best = None
    for _ in range(samples):
        s = int(rng.integers(m + 1, len(w) + 1)) if len(w) > m else len(w)
        idx = rng.choice(np.array(w), size=s, replace=False)
        vals = rng.choice((-1.0, 1.0), size=s) * rng.uniform(0.2, 1.0, size=s)
        x = SparseVector(dict(zip(idx.tolist(), vals.tolist())))
        sig, B, _ = sigma_search(space, x, m, w)
        if sig <= 1e-12:
            continue
        step = chebyshev_step(space, x, m, cfg, window=w)
        g_res = space.norm(x - restrict(x, step.support))
        r = step.residual_norm / sig
        if best is None or r > best.ratio:
            best = WitnessReport(space.descriptor, m, t, x, step.support, step.residual_norm, sig, r,
                                 extra={"greedy_residual": g_res, "sigma_support": list(B)})
    if best is None:
        raise GlabError("no sampled vector had positive sigma_m")
    return best


def mu_chain_checks(space, m: int, window=None, c_list=DEFAULT_C_LIST, jobs: int = 1) -> dict:
    """Inequalities between democracy-type tables, each recorded as a BoundCheck.

    Returns ``{"tables": {...}, "checks": [...]}``.
    """
    from .params import resolve_window
    w = resolve_window(space, window)
    prof = indicator_profiles(space, m, w, jobs)
    mt, mtd = super_democracy(space, m, w, profiles=prof)
    mu, mud = unsigned_democracy(space, m, w, profiles=prof)
    alt = democracy_alt(space, m, w, profiles=prof)
    alt_u = democracy_alt(space, m, w, profiles=prof, signed=False)
    gam = gamma_cc(space, m, w, jobs)
    phi = fundamental_function(space, m, w, profiles=prof)
    th = theta_inf(space, m, w, c_list, profiles=prof)
    ths = {c: theta_sep(space, m, c, w, profiles=prof) for c in c_list}
    kappa = 1 if space.field == "real" else 2
    checks = []

    def add(name, lhs, rhs, ok=None):
        if lhs is None or rhs is None:
            return
        checks.append(BoundCheck(name, lhs, rhs, (lhs <= rhs + TOL) if ok is None else ok))

    kb = space.basis_constant if space.is_schauder else None
    try:
        vk = space.varkappa
    except GlabError:
        vk = None
    for j in range(1, m + 1):
        a, b = mtd.values[j], mt.values[j]
        add(f"mu_d<=mu[{j}]", a, b)
        if a is not None:
            add(f"mu<=mu_d^2[{j}]", b, a * a)
            add(f"mu<=(1+2kappa)gamma*mu_d[{j}]", b, (1 + 2 * kappa) * gam.values[j] * a)
        if a is not None and alt.values[j] is not None:
            checks.append(BoundCheck(f"alt_mu_d==mu_d[{j}]", alt.values[j], a,
                                     abs(alt.values[j] - a) <= TOL * max(1.0, a)))
        if kb is not None and vk is not None and a is not None:
            add(f"mu<=2(Kb+1)mu_d+varkappa*Kb[{j}]", b, 2 * (kb + 1) * a + vk * kb)
            if mud.values[j] is not None:
                add(f"mu_unsigned<=2(Kb+1)Kb*mu_d+varkappa*Kb[{j}]", mu.values[j],
                    2 * (kb + 1) * kb * mud.values[j] + vk * kb)
                add(f"mu_d_unsigned<=alt[{j}]", mud.values[j], alt_u.values[j])
                add(f"alt_unsigned<=Kb*mu_d[{j}]", alt_u.values[j], kb * mud.values[j])
        add(f"mu_d_unsigned<=mu_unsigned[{j}]", mud.values[j], mu.values[j])
        add(f"mu_unsigned<=mu[{j}]", mu.values[j], b)
        wit = th.witnesses.get(j) or {}
        for c, tab in ths.items():
            if c in wit.get("c_list", ()):
                add(f"theta<=theta_c{c}[{j}]", th.values[j], tab.values[j])
        if j > 1:
            for tab in [mt, mtd, mu, mud, gam, phi, th, *ths.values()]:
                prev, cur = tab.values[j - 1], tab.values[j]
                if prev is not None and cur is not None:
                    add(f"monotone:{tab.name}[{j}]", prev, cur)
    tables = {t.name: t for t in [mt, mtd, mu, mud, alt, alt_u, gam, phi, th, *ths.values()]}
    return {"tables": tables, "checks": checks}


# ---------------------------------------------------------------------------
# convergence


def convergence_run(space, x: SparseVector, t: float, m_max: int, cfg: GreedyConfig | None = None,
                    window=None) -> dict:
    """Worst-case residuals of Chebyshev and plain greedy steps for m = 0..m_max.

    ``chebyshev[m] = max_G ||x - CG_m x||`` and ``greedy[m] = max_G ||x - P_G x||``
    over every t-greedy set G of order m in the window.
    """
    cfg = cfg or GreedyConfig(t=t, tie_break="adversarial")
    if cfg.t != t:
        cfg = GreedyConfig(t, cfg.tie_break, cfg.tol, cfg.budget, cfg.seed)
    if window is None:
        window = range(1, max(x.max_index, m_max) + 1)
    w = index_set(window)
    if w[-1] > space.n_max:
        raise WindowError("window beyond the space")
    cheb = [space.norm(x)]
    greedy = [space.norm(x)]
    for m in range(1, m_max + 1):
        if m > len(w):
            break
        sets = greedy_sets(x, m, t, w)
        cheb.append(chebyshev_step(space, x, m, cfg, window=w, sets=sets).residual_norm)
        greedy.append(max(space.norm(x - restrict(x, G)) for G in sets))
    return {"space": space.descriptor, "t": t, "support_size": len(x),
            "chebyshev": cheb, "greedy": greedy}
