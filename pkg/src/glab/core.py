"""Finitely supported coefficient vectors, index sets and sign patterns.

Every vector in the package is a :class:`SparseVector`: a finite map from
positive integer indices to nonzero real or complex scalars, i.e. the
formal expansion ``x ~ sum_n e*_n(x) e_n`` truncated to its support.
"""

from __future__ import annotations

import cmath
import json
import math
from typing import Iterable, Mapping

import numpy as np

# entries with modulus below this are dropped by arithmetic
ZERO_TOL = 1e-15

# phases used when sign patterns must be enumerated in the complex field
ROOTS_OF_UNITY = tuple(cmath.exp(2j * math.pi * k / 8) for k in range(8))


class GlabError(Exception):
    """Base class for all errors raised by the package."""


class WindowError(GlabError):
    """An index lies outside the usable window of a space or sweep."""


class BudgetError(GlabError):
    """An enumeration would exceed its evaluation budget."""


def sign(z):
    """Unimodular sign: ``z/|z|`` for nonzero z and 1 for z = 0."""
    a = abs(z)
    if a == 0:
        return 1.0
    return z / a


def index_set(items: Iterable[int]) -> tuple[int, ...]:
    """Sorted, duplicate-free tuple of positive integers."""
    out = tuple(sorted({int(i) for i in items}))
    if out and out[0] < 1:
        raise ValueError(f"indices must be positive, got {out[0]}")
    return out


def sign_pattern(assignment: Mapping[int, complex], tol: float = 1e-12) -> dict:
    """Validate a map ``index -> unimodular scalar`` and return it as a dict."""
    out = {}
    for n, e in assignment.items():
        if abs(abs(e) - 1.0) > tol:
            raise ValueError(f"sign at index {n} has modulus {abs(e)}, expected 1")
        out[int(n)] = e
    return out


class SparseVector:
    """Immutable finitely supported coefficient sequence.

    Stored as two aligned numpy arrays: sorted ``indices`` (int64) and
    nonzero ``values`` (float64 or complex128).

    >>> x = SparseVector({1: 3, 2: -2, 5: 1})
    >>> x.support
    (1, 2, 5)
    >>> x[2], x[4]
    (-2.0, 0.0)
    """

    __slots__ = ("indices", "values", "_hash")

    def __init__(self, entries: Mapping[int, complex] | Iterable | None = None):
        if entries is None:
            items = []
        elif isinstance(entries, Mapping):
            items = list(entries.items())
        else:
            items = list(entries)
        idx = np.array([int(k) for k, _ in items], dtype=np.int64)
        vals = [v for _, v in items]
        is_cplx = any(isinstance(v, complex) or np.iscomplexobj(v) for v in vals)
        vals = np.array(vals, dtype=complex if is_cplx else float)
        if len(np.unique(idx)) != len(idx):
            raise ValueError("duplicate indices")
        self._set(idx, vals)

    def _set(self, idx, vals):
        if idx.size and idx.min() < 1:
            raise ValueError("indices must be positive integers")
        if np.iscomplexobj(vals) and vals.size and np.all(vals.imag == 0):
            vals = vals.real.copy()
        keep = np.abs(vals) >= ZERO_TOL
        idx, vals = idx[keep], vals[keep]
        order = np.argsort(idx, kind="stable")
        self.indices = idx[order]
        self.values = vals[order]
        self.indices.setflags(write=False)
        self.values.setflags(write=False)
        self._hash = None

    @classmethod
    def from_arrays(cls, indices, values) -> "SparseVector":
        """Build from parallel arrays; repeated indices are summed."""
        idx = np.asarray(indices, dtype=np.int64)
        vals = np.asarray(values)
        if vals.dtype.kind not in "fc":
            vals = vals.astype(float)
        if idx.size != np.unique(idx).size:
            uniq, inv = np.unique(idx, return_inverse=True)
            acc = np.zeros(uniq.size, dtype=vals.dtype)
            np.add.at(acc, inv, vals)
            idx, vals = uniq, acc
        obj = cls.__new__(cls)
        obj._set(idx, vals.copy())
        return obj

    @classmethod
    def from_dense(cls, values, start: int = 1) -> "SparseVector":
        """Coefficients ``values[k]`` placed at index ``start + k``."""
        vals = np.asarray(values)
        if vals.dtype.kind not in "fc":
            vals = vals.astype(float)
        return cls.from_arrays(np.arange(start, start + vals.size), vals)

    # -- basic accessors -------------------------------------------------
    @property
    def support(self) -> tuple[int, ...]:
        return tuple(int(i) for i in self.indices)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    @property
    def max_index(self) -> int:
        return int(self.indices[-1]) if self.indices.size else 0

    def __len__(self):
        return int(self.indices.size)

    def __getitem__(self, n: int):
        pos = np.searchsorted(self.indices, n)
        if pos < self.indices.size and self.indices[pos] == n:
            return self.values[pos].item()
        return 0.0

    def items(self):
        return [(int(i), v.item()) for i, v in zip(self.indices, self.values)]

    def to_dict(self) -> dict:
        return dict(self.items())

    def to_dense(self, width: int) -> np.ndarray:
        """Coefficients at indices ``1..width`` as a dense array."""
        if self.max_index > width:
            raise WindowError(f"index {self.max_index} beyond dense width {width}")
        out = np.zeros(width, dtype=self.values.dtype if self.values.size else float)
        out[self.indices - 1] = self.values
        return out

    def abs_max(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other: "SparseVector") -> "SparseVector":
        return axpy(1.0, self, other)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return axpy(-1.0, other, self)

    def __neg__(self) -> "SparseVector":
        return SparseVector.from_arrays(self.indices, -self.values)

    def __mul__(self, alpha) -> "SparseVector":
        return SparseVector.from_arrays(self.indices, alpha * self.values)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return (
            np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.indices.tobytes(), self.values.tobytes()))
        return self._hash

    def __repr__(self):
        body = ", ".join(f"{i}: {v!r}" for i, v in self.items()[:8])
        more = ", ..." if len(self) > 8 else ""
        return f"SparseVector({{{body}{more}}})"

    # -- serialization ---------------------------------------------------
    def to_text(self) -> str:
        """Whitespace separated ``index:value`` pairs (complex as ``re,im``)."""
        parts = []
        for i, v in self.items():
            if isinstance(v, complex):
                parts.append(f"{i}:{v.real!r},{v.imag!r}")
            else:
                parts.append(f"{i}:{v!r}")
        return " ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "SparseVector":
        entries = {}
        for tok in text.split():
            try:
                k, v = tok.split(":", 1)
                if "," in v:
                    re_, im_ = v.split(",", 1)
                    val = complex(float(re_), float(im_))
                else:
                    val = float(v)
                n = int(k)
            except ValueError as exc:
                raise ValueError(f"bad vector token {tok!r}; expected index:value") from exc
            if n in entries:
                raise ValueError(f"duplicate index {n}")
            entries[n] = val
        return cls(entries)

    def to_json(self) -> dict:
        """JSON object mapping index strings to numbers or ``[re, im]``."""
        out = {}
        for i, v in self.items():
            out[str(i)] = [v.real, v.imag] if isinstance(v, complex) else v
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> "SparseVector":
        entries = {}
        for k, v in obj.items():
            entries[int(k)] = complex(v[0], v[1]) if isinstance(v, (list, tuple)) else float(v)
        return cls(entries)

    @classmethod
    def loads(cls, text: str) -> "SparseVector":
        """Parse either the JSON object form or the text form."""
        s = text.strip()
        if s.startswith("{"):
            return cls.from_json(json.loads(s))
        return cls.from_text(s)


ZERO = SparseVector()


def restrict(x: SparseVector, A: Iterable[int]) -> SparseVector:
    """The projection ``P_A x``: keep exactly the entries of x indexed by A."""
    A = np.fromiter((int(a) for a in A), dtype=np.int64)
    mask = np.isin(x.indices, A)
    return SparseVector.from_arrays(x.indices[mask], x.values[mask])


def indicator(A: Iterable[int], eps: Mapping[int, complex] | None = None) -> SparseVector:
    """Signed indicator sum ``1_{eps A} = sum_{n in A} eps_n e_n``."""
    A = index_set(A)
    if eps is None:
        return SparseVector.from_arrays(np.array(A, dtype=np.int64), np.ones(len(A)))
    missing = [n for n in A if n not in eps]
    if missing:
        raise KeyError(f"sign pattern lacks indices {missing}")
    vals = [eps[n] for n in A]
    return SparseVector(dict(zip(A, vals)))


def axpy(alpha, x: SparseVector, y: SparseVector) -> SparseVector:
    """``alpha*x + y`` with entries of modulus below ZERO_TOL dropped."""
    if alpha == 0 or len(x) == 0:
        return y
    idx = np.concatenate([x.indices, y.indices])
    vals = np.concatenate([alpha * x.values, y.values])
    return SparseVector.from_arrays(idx, vals)


def signs_of(x: SparseVector) -> dict:
    """Sign pattern ``{n: sgn(e*_n(x))}`` on the support of x."""
    return {i: sign(v) for i, v in x.items()}
