"""Concrete normed sequence spaces and the summation operators on them.

A :class:`Space` is a norm oracle for finitely supported coefficient
vectors together with metadata about its canonical basis: ``||e_n||``,
``||e*_n||``, the constants ``frak_k = sup ||e*_n|| ||e_j||`` and
``varkappa = sup ||e*_n|| ||e_n||``, and Schauder/Cesaro flags.

Implemented variants:

* ``SummingSpace``      ``||a|| = sup_m |a_1 + ... + a_m|``
* ``DifferenceSpace``   difference basis of l1, ``||sum b_n y_n|| = sum |b_n - b_{n+1}|``
* ``LpSpace``           canonical basis of l^p
* ``TrigSpace``         trigonometric system in L^p(T), quadrature norm
* ``BlockSpace``        the block norm built from balanced sign sums
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import GlabError, SparseVector, WindowError, restrict


class NoClosedForm(GlabError):
    """The space provides no closed form for a requested quantity."""


class DescriptorError(GlabError, ValueError):
    """A space descriptor string could not be parsed."""


DESCRIPTOR_GRAMMAR = (
    "space descriptors: summing:N | difference:N | lp:p:N | "
    "trig:p:maxfreq[:grid] | block:default:kmax | block:geom:base:kmax "
    "(p may be 'inf')"
)


class Space:
    """Base class: a norm on vectors supported in ``[1, n_max]``."""

    kind = "abstract"
    field = "real"
    n_max: int = 0
    is_schauder = False
    basis_constant: float | None = None
    is_cesaro = False
    cesaro_constant: float | None = None
    # True when the norm is a lattice norm (|a_n| <= |b_n| for all n implies ||a|| <= ||b||)
    lattice = False

    # -- norm ------------------------------------------------------------
    def norm(self, x: SparseVector) -> float:
        self.check(x)
        return self._norm(x)

    def _norm(self, x: SparseVector) -> float:
        raise NotImplementedError

    def dense_norms(self, C: np.ndarray) -> np.ndarray:
        """Norms of the rows of ``C`` (row ``r`` holds coefficients at 1..C.shape[1])."""
        C = np.atleast_2d(C)
        return np.array([self.norm(SparseVector.from_dense(row)) for row in C])

    def check(self, x: SparseVector):
        if len(x) and x.max_index > self.n_max:
            raise WindowError(
                f"index {x.max_index} beyond window [1, {self.n_max}] of {self.descriptor}"
            )
        if self.field == "real" and x.is_complex:
            raise GlabError(f"complex vector given to real space {self.descriptor}")

    # -- basis metadata --------------------------------------------------
    def basis_norm(self, n: int) -> float:
        return 1.0

    def dual_norm_entry(self, n: int) -> float:
        raise NoClosedForm(f"no closed form for ||e*_{n}|| in {self.descriptor}")

    def _check_index(self, n):
        if not 1 <= n <= self.n_max:
            raise WindowError(f"index {n} outside [1, {self.n_max}]")

    @property
    def frak_k(self) -> float:
        """``sup_{n,j} ||e*_n|| ||e_j||``."""
        raise NoClosedForm(f"no closed form for frak_k in {self.descriptor}")

    @property
    def varkappa(self) -> float:
        """``sup_n ||e*_n|| ||e_n||``."""
        raise NoClosedForm(f"no closed form for varkappa in {self.descriptor}")

    def lp_form(self, width: int):
        """Polyhedral description ``(L, 'max'|'sum')`` with ``||c|| = max|Lc|`` or ``sum|Lc|``.

        Returns None for non-polyhedral norms.
        """
        return None

    @property
    def descriptor(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"


@dataclass(frozen=True, repr=False)
class SummingSpace(Space):
    n_max: int
    kind = "summing"
    is_schauder = True
    basis_constant = 1.0
    is_cesaro = True
    # ||F_N|| <= K_b = 1 and ||I - F_N|| <= 2
    cesaro_constant = 2.0

    def _norm(self, x):
        if not len(x):
            return 0.0
        return self.dense_norms(x.to_dense(x.max_index))[0]

    def dense_norms(self, C):
        C = np.atleast_2d(C)
        return np.abs(np.cumsum(C, axis=1)).max(axis=1)

    def dual_norm_entry(self, n):
        self._check_index(n)
        return 1.0 if n == 1 else 2.0

    @property
    def frak_k(self):
        return 2.0 if self.n_max >= 2 else 1.0

    @property
    def varkappa(self):
        return 2.0 if self.n_max >= 2 else 1.0

    def lp_form(self, width):
        return np.tril(np.ones((width, width))), "max"

    @property
    def descriptor(self):
        return f"summing:{self.n_max}"


@dataclass(frozen=True, repr=False)
class DifferenceSpace(Space):
    """Difference basis ``y_1 = e_1, y_n = e_n - e_{n-1}`` of l1.

    Vectors hold coefficients ``b_n`` in the y-basis.
    """

    n_max: int
    kind = "difference"
    is_schauder = True
    basis_constant = 1.0
    is_cesaro = True
    cesaro_constant = 2.0

    def _norm(self, x):
        if not len(x):
            return 0.0
        return self.dense_norms(x.to_dense(x.max_index))[0]

    def dense_norms(self, C):
        C = np.atleast_2d(C)
        padded = np.concatenate([C, np.zeros((C.shape[0], 1), dtype=C.dtype)], axis=1)
        return np.abs(np.diff(padded, axis=1)).sum(axis=1)

    def basis_norm(self, n):
        return 1.0 if n == 1 else 2.0

    def dual_norm_entry(self, n):
        self._check_index(n)
        return 1.0

    @property
    def frak_k(self):
        return 2.0 if self.n_max >= 2 else 1.0

    @property
    def varkappa(self):
        return 2.0 if self.n_max >= 2 else 1.0

    def lp_form(self, width):
        L = np.eye(width) - np.eye(width, k=1)
        return L, "sum"

    @property
    def descriptor(self):
        return f"difference:{self.n_max}"


@dataclass(frozen=True, repr=False)
class LpSpace(Space):
    p: float
    n_max: int
    field: str = "real"
    kind = "lp"
    is_schauder = True
    basis_constant = 1.0
    is_cesaro = True
    cesaro_constant = 1.0
    lattice = True

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"p must be >= 1, got {self.p}")

    def _norm(self, x):
        return self._pnorm(np.abs(x.values)[None, :])[0]

    def _pnorm(self, A):
        if A.shape[1] == 0:
            return np.zeros(A.shape[0])
        if math.isinf(self.p):
            return A.max(axis=1)
        if self.p == 1:
            return A.sum(axis=1)
        if self.p == 2:
            return np.sqrt((A * A).sum(axis=1))
        return (A**self.p).sum(axis=1) ** (1.0 / self.p)

    def dense_norms(self, C):
        return self._pnorm(np.abs(np.atleast_2d(C)))

    def dual_norm_entry(self, n):
        self._check_index(n)
        return 1.0

    frak_k = 1.0
    varkappa = 1.0

    def lp_form(self, width):
        if self.field != "real":
            return None
        if self.p == 1:
            return np.eye(width), "sum"
        if math.isinf(self.p):
            return np.eye(width), "max"
        return None

    @property
    def descriptor(self):
        return f"lp:{_fmt_p(self.p)}:{self.n_max}"


# Trigonometric system -----------------------------------------------------

# largest equispaced grid used; beyond it a prime-size lattice rule is used
GRID_CAP = 1 << 21
# prime with 2 as a primitive root, so lacunary frequencies 2^j (j < LATTICE_PRIME - 1)
# stay pairwise distinct modulo the grid size
LATTICE_PRIME = 1048571


def trig_frequency(n: int) -> int:
    """Frequency of storage index n in the ordering 1, e^{ix}, e^{-ix}, e^{2ix}, ..."""
    if n < 1:
        raise ValueError("index must be positive")
    return n // 2 if n % 2 == 0 else -(n - 1) // 2


def trig_index(k: int) -> int:
    """Storage index of frequency k (inverse of :func:`trig_frequency`)."""
    return 2 * k if k > 0 else 2 * (-k) + 1


@dataclass(frozen=True, repr=False)
class TrigSpace(Space):
    """Trigonometric system in L^p(T) with normalized measure, p in [1, inf].

    Norms are computed from the values of the polynomial on ``gridsize``
    equispaced nodes (trapezoidal rule, grid maximum for p = inf).  Values
    are obtained by an FFT of the coefficient array with frequencies
    reduced modulo the grid size.  When ``8 * maxfreq`` exceeds ``GRID_CAP``
    and no grid is given, the grid size is the prime ``LATTICE_PRIME``; the
    rule stays exact in L^2 as long as the frequencies in play are distinct
    modulo the grid size.
    """

    p: float
    maxfreq: int
    gridsize: int | None = None
    field: str = "complex"
    kind = "trig"
    is_cesaro = True
    # literature-style upper bound: the symmetric part of F_N is a positive kernel
    # (norm 1) and the index-order skew adds at most 1/2; so ||F_N|| <= 1.5,
    # ||I - F_N|| <= 2.5.  Used only to scale lower-bound checks.
    cesaro_constant = 2.5

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if self.maxfreq < 1:
            raise ValueError("maxfreq must be positive")

    @property
    def n_max(self):
        return 2 * self.maxfreq + 1

    @property
    def grid(self) -> int:
        if self.gridsize is not None:
            return int(self.gridsize)
        g = 8 * self.maxfreq
        return max(g, 16) if g <= GRID_CAP else LATTICE_PRIME

    @property
    def is_schauder(self):
        return 1 < self.p < math.inf

    @property
    def lacunary_constants(self):
        """``(c1, c2)`` with ``c1 sqrt(m) <= ||1_A||_p <= c2 sqrt(m)`` for lacunary A.

        Monotonicity of L^p norms gives the bounds next to p = 2; the 1/2
        below p = 2 and the sqrt(p) above it are the usual Zygmund-type
        constants for gap ratio 2 (loose, documented, never claimed sharp).
        None for p = inf, where no such bound holds.
        """
        if math.isinf(self.p):
            return None
        lo = 0.5 if self.p < 2 else 1.0
        hi = 1.0 if self.p <= 2 else math.sqrt(self.p)
        return lo, hi

    def values_on_grid(self, x: SparseVector) -> np.ndarray:
        """Polynomial values at the nodes ``2 pi k / G``, k = 0..G-1."""
        G = self.grid
        spec = np.zeros(G, dtype=complex)
        if len(x):
            freqs = np.array([trig_frequency(int(n)) % G for n in x.indices], dtype=np.int64)
            np.add.at(spec, freqs, x.values)
        return np.fft.ifft(spec) * G

    def columns(self, indices) -> np.ndarray:
        """Grid values of the basis elements ``e_n``, one row per index."""
        G = self.grid
        k = np.arange(G, dtype=np.int64)
        rows = []
        for n in indices:
            f = trig_frequency(int(n)) % G
            rows.append(np.exp(2j * np.pi * ((f * k) % G) / G))
        return np.array(rows).reshape(len(rows), G)

    def grid_norm(self, vals: np.ndarray) -> np.ndarray:
        """L^p quadrature of grid values; works on the last axis."""
        a = np.abs(vals)
        if math.isinf(self.p):
            return a.max(axis=-1)
        if self.p == 2:
            return np.sqrt((a * a).mean(axis=-1))
        if self.p == 1:
            return a.mean(axis=-1)
        return (a**self.p).mean(axis=-1) ** (1.0 / self.p)

    def _norm(self, x):
        return float(self.grid_norm(self.values_on_grid(x)))

    def dense_norms(self, C):
        C = np.atleast_2d(C)
        G = self.grid
        freqs = np.array([trig_frequency(n) % G for n in range(1, C.shape[1] + 1)])
        spec = np.zeros((C.shape[0], G), dtype=complex)
        for j, f in enumerate(freqs):
            spec[:, f] += C[:, j]
        return self.grid_norm(np.fft.ifft(spec, axis=1) * G)

    def dual_norm_entry(self, n):
        self._check_index(n)
        return 1.0

    frak_k = 1.0
    varkappa = 1.0

    @property
    def descriptor(self):
        base = f"trig:{_fmt_p(self.p)}:{self.maxfreq}"
        return base if self.gridsize is None else f"{base}:{self.gridsize}"


# Block space --------------------------------------------------------------


# block sizes with more binary digits than this are stored as math.inf
HUGE_BITS = 1 << 20


@dataclass(frozen=True)
class BlockSpec:
    """Consecutive blocks ``S_k`` of sizes ``N_k`` with weights ``alpha_k``, ``beta_k``.

    Block k (1-based) occupies ``offsets[k-1]+1 .. offsets[k-1]+sizes[k-1]``.
    Sizes are Python ints and may be astronomically large; a size too large
    to store (more than ``HUGE_BITS`` binary digits) is ``math.inf``, which
    is enough because only its offset and vanishing weights are ever used.
    """

    sizes: tuple
    alphas: tuple
    betas: tuple
    label: str = "custom"

    def __post_init__(self):
        if not (len(self.sizes) == len(self.alphas) == len(self.betas)):
            raise ValueError("sizes, alphas and betas must have equal length")
        if any(n < 1 for n in self.sizes):
            raise ValueError("block sizes must be positive")

    @classmethod
    def default(cls, kmax: int) -> "BlockSpec":
        """``N_0 = 1``, ``N_k = 2^(2^N_{k-1})``, ``alpha_k = 2^-N_{k-1}``, ``beta_k = N_k^-1/2``."""
        if not 1 <= kmax <= 3:
            raise DescriptorError(
                "the default recursion is representable only for kmax <= 3 "
                "(N_3 already has 2^65536 binary digits and is kept symbolically); "
                "use block:geom:base:kmax"
            )
        sizes, alphas, betas = [], [], []
        prev = 1
        for _ in range(kmax):
            if math.isinf(prev) or (1 << prev) > HUGE_BITS:
                nk = math.inf
            else:
                nk = 1 << (1 << prev)
            sizes.append(nk)
            alphas.append(0.0 if math.isinf(prev) else math.ldexp(1.0, -prev))
            betas.append(_inv_sqrt(nk))
            prev = nk
        return cls(tuple(sizes), tuple(alphas), tuple(betas), label="default")

    @classmethod
    def geometric(cls, base: int, kmax: int) -> "BlockSpec":
        """``N_k = base^k`` with the same weight identities ``alpha_k = 1/log2 N_k``, ``beta_k = N_k^-1/2``."""
        if base < 2 or base % 2:
            raise DescriptorError("geometric block base must be an even integer >= 2")
        sizes = tuple(base**k for k in range(1, kmax + 1))
        alphas = tuple(1.0 / math.log2(n) for n in sizes)
        betas = tuple(_inv_sqrt(n) for n in sizes)
        return cls(sizes, alphas, betas, label=f"geom:{base}")

    @property
    def kmax(self) -> int:
        return len(self.sizes)

    @property
    def offsets(self) -> tuple:
        """``N'_k = N_1 + ... + N_{k-1}`` for k = 1..kmax+1."""
        out = [0]
        for n in self.sizes:
            out.append(out[-1] + n)
        return tuple(out)

    def block(self, k: int) -> tuple:
        """First and last index of block k."""
        off = self.offsets
        return off[k - 1] + 1, off[k - 1] + self.sizes[k - 1]

    def block_indices(self, k: int, count: int | None = None, start: int = 0) -> np.ndarray:
        """``count`` consecutive indices of block k beginning at position ``start``."""
        lo, hi = self.block(k)
        size = self.sizes[k - 1]
        count = size - start if count is None else count
        if start + count > size:
            raise WindowError(f"block {k} has only {size} elements")
        first = lo + start
        if first + count > np.iinfo(np.int64).max:
            raise WindowError("indices beyond int64 range")
        return np.arange(first, first + count, dtype=np.int64)


def _inv_sqrt(n) -> float:
    if math.isinf(n):
        return 0.0
    # exact for huge powers of two, where float(n) would overflow
    if n.bit_length() > 1000:
        return math.ldexp(1.0, -(n.bit_length() - 1) // 2) if n & (n - 1) == 0 else 0.0
    return 1.0 / math.sqrt(n)


def balanced_max_values(vals: np.ndarray, size: int) -> float:
    """``max |<1_{sigma S}, x>|`` over sign vectors summing to zero on a block of ``size``.

    ``vals`` are the (real) entries of x on the block; the remaining
    ``size - len(vals)`` entries are zero.  The maximizer puts +1 on the
    ``size/2`` largest entries and -1 on the rest.
    """
    if size % 2:
        raise ValueError(f"balanced signs need an even block size, got {size}")
    vals = np.asarray(vals, dtype=float)
    half = size // 2
    total = float(vals.sum())
    pos = np.sort(vals[vals > 0])[::-1]
    neg = np.sort(vals[vals < 0])[::-1]
    zeros = size - pos.size - neg.size
    if half <= pos.size:
        top = float(pos[:half].sum())
    elif half <= pos.size + zeros:
        top = float(pos.sum())
    else:
        top = float(pos.sum()) + float(neg[: half - pos.size - zeros].sum())
    return 2.0 * top - total


@dataclass(frozen=True, repr=False)
class BlockSpace(Space):
    """Real space with norm

    ``max{ ||x||_inf, sup_k alpha_k max_{sigma balanced on S_k} |<1_{sigma S_k}, x>|,
    sup_k beta_k max_{S in T_k, |S| = N_k} sum_{j in S} |x_j| }``

    where ``T_k`` is the union of the blocks after ``S_k``.
    """

    spec: BlockSpec
    kind = "block"

    @property
    def n_max(self):
        return self.spec.offsets[-1]

    def check(self, x):
        if len(x) and x.max_index > self.n_max:
            raise WindowError(f"index {x.max_index} beyond block window")
        if x.is_complex:
            raise GlabError("the block space is real")

    def block_of(self, indices: np.ndarray) -> np.ndarray:
        """1-based block number of each index."""
        bounds = [o for o in self.spec.offsets[1:] if o < np.iinfo(np.int64).max]
        return np.searchsorted(np.array(bounds, dtype=np.int64), indices, side="left") + 1

    def terms(self, x: SparseVector) -> dict:
        """The three terms of the norm, each maximized over k."""
        self.check(x)
        if not len(x):
            return {"sup": 0.0, "alpha": 0.0, "beta": 0.0}
        blk = self.block_of(x.indices)
        vals = x.values
        absv = np.abs(vals)
        alpha_term = 0.0
        for k in np.unique(blk):
            k = int(k)
            a = self.spec.alphas[k - 1]
            if a == 0.0:
                continue
            alpha_term = max(alpha_term, a * balanced_max_values(vals[blk == k], self.spec.sizes[k - 1]))
        beta_term = 0.0
        top_block = int(blk.max())
        for k in range(1, top_block):
            b = self.spec.betas[k - 1]
            tail = np.sort(absv[blk > k])[::-1]
            nk = self.spec.sizes[k - 1]
            s = float(tail[:nk].sum()) if nk < tail.size else float(tail.sum())
            beta_term = max(beta_term, b * s)
        return {"sup": float(absv.max()), "alpha": alpha_term, "beta": beta_term}

    def _norm(self, x):
        return max(self.terms(x).values())

    def dual_norm_entry(self, n):
        # ||x|| >= ||x||_inf and e_n has norm 1
        self._check_index(n)
        return 1.0

    frak_k = 1.0
    varkappa = 1.0

    @property
    def descriptor(self):
        if self.spec.label == "default":
            return f"block:default:{self.spec.kmax}"
        if self.spec.label.startswith("geom:"):
            return f"block:{self.spec.label}:{self.spec.kmax}"
        return "block:custom"


def balanced_sign_max(space: BlockSpace, k: int, x: SparseVector) -> float:
    """Max over balanced sign vectors on block ``S_k`` of ``|<1_{sigma S_k}, x>|``."""
    if not isinstance(space, BlockSpace):
        raise GlabError("balanced_sign_max needs a block space")
    lo, hi = space.spec.block(k)
    mask = (x.indices >= lo) & (x.indices <= min(hi, np.iinfo(np.int64).max))
    return balanced_max_values(x.values[mask].real, space.spec.sizes[k - 1])


# Summation operators ------------------------------------------------------


def partial_sum(space: Space, x: SparseVector, N: int) -> SparseVector:
    """``S_N x``: keep the coefficients with index at most N."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return restrict(x, x.indices[x.indices <= N])


def cesaro(space: Space, x: SparseVector, N: int) -> SparseVector:
    """``F_N x = (1/N) sum_{n<=N} S_n x``; coefficient n is ``(1 - (n-1)/N) e*_n(x)``."""
    if N < 1:
        raise ValueError("N must be positive")
    mask = x.indices <= N
    idx = x.indices[mask]
    w = 1.0 - (idx - 1) / N
    return SparseVector.from_arrays(idx, w * x.values[mask])


def vp_operator(space: Space, x: SparseVector, N: int, M: int) -> SparseVector:
    """de la Vallee-Poussin type operator ``V_{N,M} = (M F_M - N F_N)/(M - N)``.

    Identity on indices ``<= N``, linear ramp down on ``(N, M]``, zero above M.
    """
    if not M > N >= 1:
        raise ValueError(f"need M > N >= 1, got N={N}, M={M}")
    mask = x.indices <= M
    idx = x.indices[mask]
    w = np.where(idx <= N, 1.0, 1.0 - (idx - N - 1) / (M - N))
    return SparseVector.from_arrays(idx, w * x.values[mask])


# Descriptors --------------------------------------------------------------


def _fmt_p(p: float) -> str:
    if math.isinf(p):
        return "inf"
    return str(int(p)) if float(p).is_integer() else repr(float(p))


def _parse_p(tok: str) -> float:
    if tok.lower() in ("inf", "infinity", "oo"):
        return math.inf
    if "/" in tok:
        a, b = tok.split("/", 1)
        return float(a) / float(b)
    return float(tok)


def parse_space(desc: str) -> Space:
    """Build a space from a descriptor string such as ``summing:8`` or ``trig:1:64``."""
    parts = desc.strip().split(":")
    try:
        kind = parts[0].lower()
        if kind == "summing" and len(parts) == 2:
            return SummingSpace(int(parts[1]))
        if kind == "difference" and len(parts) == 2:
            return DifferenceSpace(int(parts[1]))
        if kind == "lp" and len(parts) == 3:
            return LpSpace(_parse_p(parts[1]), int(parts[2]))
        if kind == "trig" and len(parts) in (3, 4):
            grid = int(parts[3]) if len(parts) == 4 else None
            return TrigSpace(_parse_p(parts[1]), int(parts[2]), grid)
        if kind == "block" and len(parts) == 3 and parts[1] == "default":
            return BlockSpace(BlockSpec.default(int(parts[2])))
        if kind == "block" and len(parts) == 4 and parts[1] == "geom":
            return BlockSpace(BlockSpec.geometric(int(parts[2]), int(parts[3])))
    except DescriptorError:
        raise
    except ValueError as exc:
        raise DescriptorError(f"bad space descriptor {desc!r}: {exc}. {DESCRIPTOR_GRAMMAR}") from exc
    raise DescriptorError(f"bad space descriptor {desc!r}. {DESCRIPTOR_GRAMMAR}")
