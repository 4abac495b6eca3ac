"""Basis parameters by enumeration over a finite window.

Indicator-type parameters (super-democracy, democracy, gamma, theta,
fundamental function) are sups over finitely many sets and signs once the
indices are confined to a window, and are computed exactly there (real
field) or over the 8th roots of unity (complex field, a lower bound).
Operator-norm parameters are estimated from a witness family; for real
polyhedral norms the family contains every vertex of the unit ball of the
window, which makes the conditionality tables exact for the window.

Every table records its window; values are exact *for that window* and
lower bounds for the same parameters over all of N.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    ROOTS_OF_UNITY, BudgetError, GlabError, SparseVector, WindowError, index_set, indicator, restrict,
)
from .greedy import chebyshev_projection, greedy_sets
from .parallel import chunked, pmap

# hard cap on norm evaluations per table
EVAL_CAP = 10**9
# supports tried by sigma_m before giving up
SIGMA_SUPPORT_CAP = 200_000
# vertex enumeration of polyhedral unit balls is used up to this window width
VERTEX_WINDOW = 14
DEFAULT_C_LIST = (2, 3, 4, 8)


@dataclass
class ParamTable:
    """Per-m values of one parameter, with provenance.

    ``mode`` is ``"exact"`` (exact for the window), ``"lower-bound"`` or
    ``"upper-bound-of-inner-inf"``.  A value of None means the parameter is
    undefined at this window (e.g. no separated pair fits).
    """

    name: str
    mode: str
    window: tuple
    values: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def __getitem__(self, m):
        return self.values[m]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode,
            "window": _window_json(self.window),
            "values": {str(m): v for m, v in sorted(self.values.items())},
            "witnesses": {str(m): w for m, w in sorted(self.witnesses.items())},
        }

    def to_csv(self) -> str:
        lines = ["m,value"]
        for m, v in sorted(self.values.items()):
            lines.append(f"{m},{'' if v is None else format(v, '.17g')}")
        return "\n".join(lines) + "\n"


def _window_json(w):
    w = list(w)
    if w and w == list(range(w[0], w[-1] + 1)):
        return [w[0], w[-1]]
    return w


def resolve_window(space, window=None, default: int = 8) -> tuple:
    """Window as a sorted tuple; default ``[1, min(n_max, default)]``."""
    if window is None:
        w = tuple(range(1, min(space.n_max, default) + 1))
    elif isinstance(window, str):
        a, b = window.split(":")
        w = tuple(range(int(a), int(b) + 1))
    else:
        w = index_set(window)
    if not w:
        raise WindowError("empty window")
    if w[-1] > space.n_max:
        raise WindowError(f"window reaches {w[-1]} beyond {space.descriptor}")
    return w


# ---------------------------------------------------------------------------
# sign patterns and per-set indicator profiles


def sign_matrix(k: int, field: str = "real", fix_first: bool = True) -> np.ndarray:
    """All sign vectors of length k, first row all ones.

    Real field: entries +-1; complex field: 8th roots of unity.  With
    ``fix_first`` the first entry is 1 (norms are invariant under a global
    unimodular factor).
    """
    if k == 0:
        return np.ones((1, 0))
    phases = (1.0, -1.0) if field == "real" else ROOTS_OF_UNITY
    free = k - 1 if fix_first else k
    rows = np.array(list(itertools.product(range(len(phases)), repeat=free)), dtype=np.int64)
    rows = rows.reshape(len(phases) ** free, free)
    vals = np.array(phases)[rows]
    if fix_first:
        vals = np.concatenate([np.ones((vals.shape[0], 1), dtype=vals.dtype), vals], axis=1)
    return vals


def _indicator_norms(space, A, signs, width):
    rows = np.zeros((signs.shape[0], width), dtype=signs.dtype)
    rows[:, np.array(A) - 1] = signs
    return np.asarray(space.dense_norms(rows), dtype=float)


def _profile_chunk(args):
    space, sets, field_, width = args
    k = len(sets[0]) if sets else 0
    signs = sign_matrix(k, field_)
    out = []
    for A in sets:
        v = _indicator_norms(space, A, signs, width)
        out.append((float(v.max()), int(v.argmax()), float(v.min()), int(v.argmin()), float(v[0])))
    return out


@dataclass
class SizeProfile:
    """Indicator norms of all sets of one cardinality inside a window."""

    sets: list
    masks: np.ndarray
    fmax: np.ndarray
    emax: np.ndarray
    fmin: np.ndarray
    emin: np.ndarray
    f1: np.ndarray
    signs: np.ndarray
    lo: np.ndarray
    hi: np.ndarray

    def sign_of(self, i, which):
        s = self.signs[self.emax[i] if which == "max" else self.emin[i]]
        return [_num(v) for v in s.tolist()]


def _num(v):
    if isinstance(v, complex):
        return [v.real, v.imag] if v.imag != 0 else v.real
    return v


def indicator_profiles(space, m: int, window, jobs: int = 1, cap: int = EVAL_CAP) -> dict:
    """``{j: SizeProfile}`` for j = 1..m over all j-subsets of the window."""
    w = resolve_window(space, window)
    if m > len(w):
        raise WindowError(f"m = {m} exceeds the window size {len(w)}")
    field_ = space.field
    nph = 2 if field_ == "real" else 8
    evals = sum(math.comb(len(w), j) * nph ** (j - 1) for j in range(1, m + 1))
    if evals > cap:
        raise BudgetError(f"{evals} norm evaluations exceed the cap {cap}; shrink the window or m")
    pos = {n: i for i, n in enumerate(w)}
    width = w[-1]
    out = {}
    for j in range(1, m + 1):
        sets = list(itertools.combinations(w, j))
        parts = chunked(sets, max(1, jobs * 4))
        res = [r for part in pmap(_profile_chunk, [(space, p, field_, width) for p in parts], jobs) for r in part]
        arr = np.array(res)
        masks = np.array([sum(1 << pos[n] for n in A) for A in sets], dtype=object)
        out[j] = SizeProfile(
            sets=sets,
            masks=masks,
            fmax=arr[:, 0], emax=arr[:, 1].astype(int),
            fmin=arr[:, 2], emin=arr[:, 3].astype(int),
            f1=arr[:, 4],
            signs=sign_matrix(j, field_),
            lo=np.array([A[0] for A in sets]),
            hi=np.array([A[-1] for A in sets]),
        )
    return out


def _disjoint_matrix(pa: SizeProfile, pb: SizeProfile) -> np.ndarray:
    ma = np.array([int(x) for x in pa.masks], dtype=np.uint64)
    mb = np.array([int(x) for x in pb.masks], dtype=np.uint64)
    return (ma[:, None] & mb[None, :]) == 0


def _mode(space) -> str:
    return "exact" if space.field == "real" else "lower-bound"


def _pair_witness(pa, i, pb, j, ratio, signed=True):
    w = {"A": list(pa.sets[i]), "B": list(pb.sets[j]), "ratio": ratio}
    if signed:
        w["eps"] = pa.sign_of(i, "max")
        w["eta"] = pb.sign_of(j, "min")
    return w


def _running(name, mode, window, per_size, m):
    """Running max over sizes j <= k of per-size ``(value, witness)`` pairs."""
    t = ParamTable(name, mode, tuple(window))
    best, wit = None, None
    for k in range(1, m + 1):
        v, w = per_size.get(k, (None, None))
        if v is not None and (best is None or v > best):
            best, wit = v, w
        t.values[k] = best
        t.witnesses[k] = wit
    return t


# ---------------------------------------------------------------------------
# democracy-type parameters


def super_democracy(space, m: int, window=None, jobs: int = 1, profiles=None):
    """Tables of ``mu~_m`` and ``mu~^d_m`` (signed indicators, equal cardinalities).

    Returns ``(mu_tilde, mu_tilde_d)``.
    """
    w = resolve_window(space, window)
    prof = profiles or indicator_profiles(space, m, w, jobs)
    full, disj = {}, {}
    for j in range(1, m + 1):
        p = prof[j]
        i, k = int(p.fmax.argmax()), int(p.fmin.argmin())
        r = float(p.fmax[i] / p.fmin[k])
        full[j] = (r, _pair_witness(p, i, p, k, r))
        d = _disjoint_matrix(p, p)
        if d.any():
            R = np.where(d, p.fmax[:, None] / p.fmin[None, :], -np.inf)
            i, k = np.unravel_index(int(R.argmax()), R.shape)
            r = float(R[i, k])
            disj[j] = (r, _pair_witness(p, i, p, k, r))
    mode = _mode(space)
    return _running("mu_tilde", mode, w, full, m), _running("mu_tilde_d", mode, w, disj, m)


def unsigned_democracy(space, m: int, window=None, jobs: int = 1, profiles=None):
    """Tables of ``mu_m`` and ``mu^d_m`` (all-ones indicators). Returns ``(mu, mu_d)``."""
    w = resolve_window(space, window)
    prof = profiles or indicator_profiles(space, m, w, jobs)
    full, disj = {}, {}
    for j in range(1, m + 1):
        p = prof[j]
        i, k = int(p.f1.argmax()), int(p.f1.argmin())
        r = float(p.f1[i] / p.f1[k])
        full[j] = (r, _pair_witness(p, i, p, k, r, signed=False))
        d = _disjoint_matrix(p, p)
        if d.any():
            R = np.where(d, p.f1[:, None] / p.f1[None, :], -np.inf)
            i, k = np.unravel_index(int(R.argmax()), R.shape)
            r = float(R[i, k])
            disj[j] = (r, _pair_witness(p, i, p, k, r, signed=False))
    # unsigned values are exact in either field
    return _running("mu", "exact", w, full, m), _running("mu_d", "exact", w, disj, m)


def democracy_alt(space, m: int, window=None, jobs: int = 1, profiles=None, signed: bool = True):
    """``sup ||1_{eta B}|| / ||1_{eps A}||`` over disjoint ``|B| <= |A| <= m``.

    With ``signed=True`` this is the alternative formula for ``mu~^d_m``;
    unsigned, it sits between ``mu^d_m`` and ``K_b mu^d_m``.
    """
    w = resolve_window(space, window)
    prof = profiles or indicator_profiles(space, m, w, jobs)
    per = {}
    for ja in range(1, m + 1):
        pa = prof[ja]
        best = None
        for jb in range(1, ja + 1):
            pb = prof[jb]
            d = _disjoint_matrix(pb, pa)
            if not d.any():
                continue
            num = pb.fmax if signed else pb.f1
            den = pa.fmin if signed else pa.f1
            R = np.where(d, num[:, None] / den[None, :], -np.inf)
            i, k = np.unravel_index(int(R.argmax()), R.shape)
            r = float(R[i, k])
            if best is None or r > best[0]:
                wit = {"B": list(pb.sets[i]), "A": list(pa.sets[k]), "ratio": r}
                if signed:
                    wit["eta"] = pb.sign_of(i, "max")
                    wit["eps"] = pa.sign_of(k, "min")
                best = (r, wit)
        if best is not None:
            per[ja] = best
    name = "mu_tilde_d_alt" if signed else "mu_d_alt"
    return _running(name, _mode(space) if signed else "exact", w, per, m)


def fundamental_function(space, m: int, window=None, jobs: int = 1, profiles=None) -> ParamTable:
    """Right fundamental function ``phi_r(m) = sup_{|A| <= m} ||1_A||``."""
    w = resolve_window(space, window)
    prof = profiles or indicator_profiles(space, m, w, jobs)
    per = {}
    for j in range(1, m + 1):
        p = prof[j]
        i = int(p.f1.argmax())
        per[j] = (float(p.f1[i]), {"A": list(p.sets[i])})
    return _running("phi_r", "exact", w, per, m)


def _gamma_chunk(args):
    space, sets, field_, width = args
    out = []
    for A in sets:
        k = len(A)
        signs = sign_matrix(k, field_)
        sub = np.array(list(itertools.product((0, 1), repeat=k)), dtype=float)
        rows = (signs[:, None, :] * sub[None, :, :]).reshape(-1, k)
        v = _indicator_norms(space, A, rows, width).reshape(signs.shape[0], sub.shape[0])
        ratio = v / v[:, -1:]
        i, b = np.unravel_index(int(ratio.argmax()), ratio.shape)
        out.append((float(ratio[i, b]), int(i), [A[q] for q in range(k) if sub[b, q]]))
    return out


def gamma_cc(space, m: int, window=None, jobs: int = 1, cap: int = EVAL_CAP) -> ParamTable:
    """``gamma_m = sup ||1_{eps B}|| / ||1_{eps A}||`` over ``B subset A``, ``|A| <= m``."""
    w = resolve_window(space, window)
    if m > len(w):
        raise WindowError(f"m = {m} exceeds the window size {len(w)}")
    nph = 2 if space.field == "real" else 8
    evals = sum(math.comb(len(w), j) * nph ** (j - 1) * 2**j for j in range(1, m + 1))
    if evals > cap:
        raise BudgetError(f"{evals} norm evaluations exceed the cap {cap}")
    per = {}
    for j in range(1, m + 1):
        sets = list(itertools.combinations(w, j))
        parts = chunked(sets, max(1, jobs * 4))
        res = [r for part in pmap(_gamma_chunk, [(space, p, space.field, w[-1]) for p in parts], jobs)
               for r in part]
        best = max(range(len(res)), key=lambda q: (res[q][0], -q))
        r, si, B = res[best]
        signs = sign_matrix(j, space.field)
        per[j] = (r, {"A": list(sets[best]), "B": B, "eps": [_num(v) for v in signs[si].tolist()]})
    return _running("gamma", _mode(space), w, per, m)


# ---------------------------------------------------------------------------
# separated democracy


def _theta_c_of(prof, j, i, c):
    """``theta_c(A)`` for the i-th j-set A: sup over ``|B| = j``, ``B > cA``."""
    p = prof[j]
    mask = p.lo > c * p.hi[i]
    if not mask.any():
        return None
    r1 = p.fmax[i] / p.fmin[mask].min()
    r2 = p.fmax[mask].max() / p.fmin[i]
    return float(max(r1, r2))


def theta_sep(space, m: int, c: int, window=None, jobs: int = 1, profiles=None) -> ParamTable:
    """``theta_{m,c}``: signed indicator ratios over ``|A| = |B| <= m`` with ``A > cB`` or ``B > cA``.

    Values are None while no separated pair fits in the window.
    """
    if c < 1:
        raise ValueError("c must be >= 1")
    w = resolve_window(space, window)
    prof = profiles or indicator_profiles(space, m, w, jobs)
    per = {}
    for j in range(1, m + 1):
        best = None
        for i, A in enumerate(prof[j].sets):
            v = _theta_c_of(prof, j, i, c)
            if v is not None and (best is None or v > best[0]):
                best = (v, {"A": list(A)})
        if best is not None:
            per[j] = best
    return _running(f"theta_sep_c{c}", _mode(space), w, per, m)


def theta_inf(space, m: int, window=None, c_list=DEFAULT_C_LIST, jobs: int = 1,
              profiles=None) -> ParamTable:
    """``theta_m`` with the inner inf over c replaced by a min over ``c_list``.

    Only the c admitting a separated pair at every size that admits one at
    all take part (window truncation leaves large c undefined), and sets A
    for which one of those c admits no B are skipped.  The result therefore
    never exceeds ``theta_{m,c}`` for any participating c; the participating
    list is stored in each witness.
    """
    w = resolve_window(space, window)
    prof = profiles or indicator_profiles(space, m, w, jobs)
    active = list(c_list)
    for j in range(1, m + 1):
        p = prof[j]
        here = [c for c in c_list if (p.lo[None, :] > c * p.hi[:, None]).any()]
        if here:
            active = [c for c in active if c in here]
    per = {}
    for j in range(1, m + 1):
        best = None
        for i, A in enumerate(prof[j].sets):
            vals = [_theta_c_of(prof, j, i, c) for c in active]
            if not vals or any(v is None for v in vals):
                continue
            v = min(vals)
            if best is None or v > best[0]:
                best = (v, {"A": list(A), "c": int(active[int(np.argmin(vals))]),
                            "c_list": [int(c) for c in active]})
        if best is not None:
            per[j] = best
    return _running("theta", "upper-bound-of-inner-inf", w, per, m)


# ---------------------------------------------------------------------------
# best m-term error


def sigma_search(space, x: SparseVector, m: int, window=None, tol: float | None = None,
                 max_supports: int = SIGMA_SUPPORT_CAP):
    """Exhaustive best m-term approximation inside a window.

    Returns ``(value, support, ChebyshevStep)``.  Only supports of size
    ``min(m, |window|)`` are tried: enlarging a support never hurts.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if window is None:
        window = range(1, max(x.max_index, 1) + 1)
    w = index_set(window)
    if len(x) and not set(x.support) <= set(w):
        raise WindowError("window must contain the support of x")
    s = min(m, len(w))
    if len(x) <= s:
        B = index_set(x.support)
        return 0.0, B, chebyshev_projection(space, x, B, tol)
    if space.kind == "lp":
        # symmetric lattice norm: drop the m largest entries
        order = np.lexsort((x.indices, -np.abs(x.values)))
        B = index_set(x.indices[order[:s]])
        step = chebyshev_projection(space, x, B, tol)
        return step.residual_norm, B, step
    count = math.comb(len(w), s)
    if count > max_supports:
        raise BudgetError(
            f"sigma_m needs {count} supports (cap {max_supports}); use a smaller window"
        )
    best = None
    for B in itertools.combinations(w, s):
        step = chebyshev_projection(space, x, B, tol)
        if best is None or step.residual_norm < best[2].residual_norm - 1e-15:
            best = (step.residual_norm, B, step)
    return best


def sigma_m(space, x: SparseVector, m: int, window=None, tol: float | None = None) -> float:
    """``sigma_m(x)`` over supports inside the window (exact up to tol)."""
    return sigma_search(space, x, m, window, tol)[0]


# ---------------------------------------------------------------------------
# operator-norm parameters


def polyhedral_vertices(space, width: int, cap_width: int = VERTEX_WINDOW):
    """Vertices of the unit ball of ``[e_1..e_width]`` for real polyhedral norms, up to sign.

    Returns a list of dense arrays, or None when unavailable.
    """
    if space.field != "real" or width > cap_width:
        return None
    form = space.lp_form(width)
    if form is None:
        return None
    L, kind = form
    Linv = np.linalg.inv(L)
    if kind == "max":
        S = sign_matrix(width, "real")
        V = S @ Linv.T
    else:
        V = Linv.T.copy()
    V = np.round(V, 12) + 0.0
    return [v for v in V]


FAMILY_PARTS = ("vertices", "patterns", "random", "indicators")


def default_witness_family(space, m: int, window=None, seed: int = 0,
                           n_random: int = 24, max_indicators: int = 4000,
                           parts=FAMILY_PARTS) -> list:
    """Witness vectors used to estimate operator-norm parameters.

    ``parts`` selects among unit-ball vertices (real polyhedral norms, small
    windows), alternating and extremal witness patterns, random sparse
    vectors with geometric coefficient decay, and signed indicators of all
    sets of size <= m.
    """
    unknown = set(parts) - set(FAMILY_PARTS)
    if unknown:
        raise ValueError(f"unknown family parts {sorted(unknown)}; choose from {FAMILY_PARTS}")
    w = resolve_window(space, window)
    W = w[-1]
    fam = []
    if "vertices" in parts and w == tuple(range(1, W + 1)):
        verts = polyhedral_vertices(space, W)
        if verts:
            fam += [SparseVector.from_dense(v) for v in verts]
    if "patterns" in parts:
        # alternating indicators on windows and their tails
        for s in range(1, len(w) + 1):
            for start in (0, len(w) - s):
                idx = w[start:start + s]
                fam.append(SparseVector({n: (-1.0) ** q for q, n in enumerate(idx)}))
        # extremal patterns of summing and difference type
        for mm in range(1, m + 1):
            if 5 * mm + 1 <= W and w == tuple(range(1, W + 1)):
                from .experiments import summing_vector, difference_vector
                fam.append(summing_vector(mm, 1.0))
                if 4 * mm + 1 <= W:
                    fam.append(difference_vector(mm, 1.0))
    rng = np.random.default_rng(seed)
    for _ in range(n_random if "random" in parts else 0):
        s = int(rng.integers(1, len(w) + 1))
        idx = rng.choice(np.array(w), size=s, replace=False)
        r = float(rng.uniform(0.3, 0.9))
        vals = rng.choice((-1.0, 1.0), size=s) * r ** rng.permutation(s)
        fam.append(SparseVector(dict(zip(idx.tolist(), vals.tolist()))))
    count = 0
    for j in range(1, min(m, len(w)) + 1 if "indicators" in parts else 0):
        signs = sign_matrix(j, "real", fix_first=False)
        for A in itertools.combinations(w, j):
            for s in signs:
                if count >= max_indicators:
                    break
                fam.append(SparseVector(dict(zip(A, s.tolist()))))
                count += 1
    uniq, seen = [], set()
    for v in fam:
        if len(v) and v not in seen:
            seen.add(v)
            uniq.append(v)
    return uniq


def witness_family(space, m: int, name: str = "default", window=None, seed: int = 0) -> list:
    """Named witness family: ``default`` (all parts) or one of :data:`FAMILY_PARTS`."""
    parts = FAMILY_PARTS if name == "default" else (name,)
    return default_witness_family(space, m, window, seed, parts=parts)


def conditionality_est(space, m: int, family=None, seed: int = 0, window=None,
                       max_sets: int = 20000):
    """Tables of ``k_m = sup ||P_A||`` and ``k^c_m = sup ||I - P_A||`` over ``|A| <= m``.

    Closed form 1 on lattice spaces.  For real polyhedral norms whose
    window is ``[1, W]`` with W small, the unit-ball vertices plus all sets
    ``|A| <= m`` make the values exact for the window; otherwise they are
    lower bounds over the family.  Returns ``(k, k_c)``.
    """
    w = resolve_window(space, window)
    if space.lattice:
        k = ParamTable("k", "exact", w, {j: 1.0 for j in range(1, m + 1)})
        kc = ParamTable("k_c", "exact", w, {j: 1.0 for j in range(1, m + 1)})
        return k, kc
    fam = family if family is not None else default_witness_family(space, m, w, seed)
    exact = (family is None and w == tuple(range(1, w[-1] + 1))
             and polyhedral_vertices(space, w[-1]) is not None)
    W = w[-1]
    X = np.array([v.to_dense(W) for v in fam])
    nx = np.asarray(space.dense_norms(X), dtype=float)
    nsets = sum(math.comb(len(w), j) for j in range(1, m + 1))
    if nsets <= max_sets:
        set_iter = lambda j: itertools.combinations(w, j)
    else:
        exact = False
        set_iter = lambda j: _heuristic_sets(fam, j, w)
    per_k, per_kc = {}, {}
    for j in range(1, m + 1):
        bk, bkc = None, None
        for A in set_iter(j):
            cols = np.array(A) - 1
            P = np.zeros_like(X)
            P[:, cols] = X[:, cols]
            rk = np.asarray(space.dense_norms(P), dtype=float) / nx
            rkc = np.asarray(space.dense_norms(X - P), dtype=float) / nx
            i, ic = int(rk.argmax()), int(rkc.argmax())
            if bk is None or rk[i] > bk[0]:
                bk = (float(rk[i]), {"A": list(A), "x": fam[i].to_json()})
            if bkc is None or rkc[ic] > bkc[0]:
                bkc = (float(rkc[ic]), {"A": list(A), "x": fam[ic].to_json()})
        per_k[j], per_kc[j] = bk, bkc
    mode = "exact" if exact else "lower-bound"
    return _running("k", mode, w, per_k, m), _running("k_c", mode, w, per_kc, m)


def _heuristic_sets(fam, j, w):
    out = set()
    W = list(w)
    out.add(tuple(W[:j]))
    out.add(tuple(W[-j:]))
    out.add(tuple(W[::2][:j]) if len(W[::2]) >= j else tuple(W[:j]))
    out.add(tuple(W[1::2][:j]) if len(W[1::2]) >= j else tuple(W[-j:]))
    for x in fam:
        if len(x) >= j:
            for A in greedy_sets(x, j, 1.0, w)[:8]:
                out.add(A)
    return sorted(index_set(A) for A in out if len(A) == j)


def quasi_greedy_est(space, m: int, family=None, seed: int = 0, window=None):
    """Lower-bound tables of ``g_m``, ``g^c_m`` and ``g~_m`` over a witness family.

    Every greedy set (t = 1) of every family vector is tried; ``g~`` uses
    nested pairs ``G' subset G`` of greedy sets, ``G'`` possibly empty.
    Returns ``(g, g_c, g_tilde)``.
    """
    w = resolve_window(space, window)
    fam = family if family is not None else default_witness_family(space, m, w, seed)
    W = w[-1]
    K = min(m, len(w))
    per = {"g": {}, "g_c": {}, "g_tilde": {}}

    for x in fam:
        nx = space.norm(x)
        if nx == 0:
            continue
        dense = x.to_dense(W)
        gsets = {k: greedy_sets(x, k, 1.0, w) for k in range(1, K + 1)}
        # rows: P_G x for every greedy set, then P_{G minus G'} x for nested pairs
        flat = [(k, G) for k in range(1, K + 1) for G in gsets[k]]
        masks = np.zeros((len(flat), W), dtype=bool)
        for r, (_, G) in enumerate(flat):
            masks[r, np.array(G) - 1] = True
        PG = np.where(masks, dense, 0)
        ng = np.asarray(space.dense_norms(PG), dtype=float) / nx
        ngc = np.asarray(space.dense_norms(dense[None, :] - PG), dtype=float) / nx
        nested, rows = [], []
        for r, (k, G) in enumerate(flat):
            Gs = set(G)
            for k2 in range(1, k):
                for G2 in gsets[k2]:
                    if Gs.issuperset(G2):
                        row = masks[r].copy()
                        row[np.array(G2) - 1] = False
                        nested.append((r, G2))
                        rows.append(row)
        nt = (np.asarray(space.dense_norms(np.where(np.array(rows), dense, 0)), dtype=float) / nx
              if rows else np.zeros(0))
        best_t = {r: (ng[r], ()) for r in range(len(flat))}
        for (r, G2), v in zip(nested, nt):
            if v > best_t[r][0]:
                best_t[r] = (v, G2)
        xj = None
        for r, (k, G) in enumerate(flat):
            for name, v in (("g", ng[r]), ("g_c", ngc[r]), ("g_tilde", best_t[r][0])):
                cur = per[name].get(k)
                if cur is None or v > cur[0]:
                    xj = xj or x.to_json()
                    wit = {"G": list(G), "x": xj}
                    if name == "g_tilde":
                        wit["G_inner"] = list(best_t[r][1])
                    per[name][k] = (float(v), wit)
    return tuple(_running(n, "lower-bound", w, per[n], m) for n in ("g", "g_c", "g_tilde"))


def admissibility_margin(space, A, n0: int, m: int | None = None, window=None,
                         samples: int = 64, seed: int = 0) -> float:
    """Sampled ``rho`` with ``||P_A z|| <= rho ||z||`` for z on ``A u B``.

    B ranges over all sets in ``[n0, max window]`` with ``|B| <= m``
    (default ``|A|``); coefficients are random Gaussians plus all sign
    patterns when ``|A u B|`` is small.  The result is a lower bound for the
    best admissibility constant of A.
    """
    A = index_set(A)
    if A and n0 <= A[-1]:
        raise ValueError("n0 must exceed max A")
    w = resolve_window(space, window)
    if n0 > w[-1]:
        raise WindowError(f"window ends at {w[-1]}, before n0 = {n0}")
    m = len(A) if m is None else min(m, len(A))
    tail = [n for n in w if n >= n0]
    rng = np.random.default_rng(seed)
    best = 1.0
    W = w[-1]
    for s in range(0, m + 1):
        for B in itertools.combinations(tail, s):
            S = list(A) + list(B)
            k = len(S)
            coeffs = [rng.standard_normal((samples, k))]
            if k <= 10:
                coeffs.append(sign_matrix(k, "real", fix_first=False))
            C = np.concatenate(coeffs)
            Z = np.zeros((C.shape[0], W))
            Z[:, np.array(S) - 1] = C
            PA = np.zeros_like(Z)
            PA[:, np.array(A) - 1] = Z[:, np.array(A) - 1]
            nz = np.asarray(space.dense_norms(Z), dtype=float)
            ok = nz > 0
            r = np.asarray(space.dense_norms(PA), dtype=float)[ok] / nz[ok]
            if r.size:
                best = max(best, float(r.max()))
    return best
