"""Dense complex matrix primitives with an explicit tolerance policy.

All operators are plain ``numpy.ndarray`` values in complex double
precision. Every decision of the form "is this zero" or "what is the rank"
goes through a :class:`NumericPolicy`, so the rest of the package never
hard-codes a floating-point threshold.

The JSON matrix file format used by the CLI also lives here:

    {"rows": r, "cols": c, "data": [[[re, im], ...], ...]}

``data`` is row-major; each entry is a two-element array of finite doubles.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotSquare, ParseError, Singular

__all__ = [
    "NumericPolicy",
    "DEFAULT_POLICY",
    "as_matrix",
    "adjoint",
    "matmul",
    "power",
    "rank",
    "null_basis",
    "range_basis",
    "inverse",
    "eigenvalues",
    "vectorize",
    "unvectorize",
    "is_zero",
    "frob",
    "one_norm",
    "spectral_norm",
    "condition",
    "eye",
    "zeros",
    "block_diag",
    "matrix_to_json",
    "matrix_from_json",
    "load_matrix",
    "save_matrix",
]


@dataclass(frozen=True)
class NumericPolicy:
    """Thresholds governing every zero test and rank decision.

    atol/rtol enter zero tests as ``norm <= atol + rtol * scale`` where the
    caller supplies a scale reflecting the worst-case growth of the
    quantity being tested. ``rank_rtol`` is the relative singular-value
    cutoff, ``cond_max`` bounds the conditioning of similarities we are
    willing to trust.
    """

    atol: float = 1e-10
    rtol: float = 1e-8
    rank_rtol: float = 1e-10
    cond_max: float = 1e8

    def __post_init__(self):
        if self.atol < 0 or self.rtol < 0 or self.rank_rtol < 0:
            raise ValueError("tolerances must be nonnegative")
        if not self.cond_max > 1:
            raise ValueError("cond_max must exceed 1")

    def zero_threshold(self, scale: float) -> float:
        return self.atol + self.rtol * scale


DEFAULT_POLICY = NumericPolicy()


def as_matrix(data) -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting non-finite entries."""
    m = np.asarray(data, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D array, got ndim={m.ndim}")
    if m.size and not np.all(np.isfinite(m)):
        raise ParseError("matrix entries must be finite")
    return m


def _require_square(m: np.ndarray) -> np.ndarray:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {m.shape}")
    return m


def adjoint(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def power(m: np.ndarray, k: int) -> np.ndarray:
    """``m**k`` for integer k >= 0 by repeated squaring; ``m**0`` is I."""
    m = _require_square(np.asarray(m, dtype=np.complex128))
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    n = m.shape[0]
    result = np.eye(n, dtype=np.complex128)
    base = m.copy()
    e = int(k)
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def _singular_values(m: np.ndarray) -> np.ndarray:
    if m.size == 0:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


def rank(m: np.ndarray, policy: NumericPolicy = DEFAULT_POLICY) -> int:
    """Number of singular values above ``rank_rtol`` times the largest."""
    s = _singular_values(np.asarray(m, dtype=np.complex128))
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > policy.rank_rtol * s[0]))


def null_basis(m: np.ndarray, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Orthonormal columns spanning the (numerical) kernel of m."""
    m = np.asarray(m, dtype=np.complex128)
    rows, cols = m.shape
    if m.size == 0:
        # 0xN maps kill everything; Nx0 maps have nothing to kill.
        return np.eye(cols, dtype=np.complex128) if rows == 0 else np.zeros((cols, 0), np.complex128)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    r = 0 if (s.size == 0 or s[0] == 0.0) else int(np.count_nonzero(s > policy.rank_rtol * s[0]))
    return vh[r:].conj().T


def range_basis(m: np.ndarray, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Orthonormal columns spanning the column space of m."""
    m = np.asarray(m, dtype=np.complex128)
    if m.size == 0:
        return np.zeros((m.shape[0], 0), np.complex128)
    u, s, _ = np.linalg.svd(m, full_matrices=True)
    r = 0 if (s.size == 0 or s[0] == 0.0) else int(np.count_nonzero(s > policy.rank_rtol * s[0]))
    return u[:, :r]


def inverse(m: np.ndarray, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    m = _require_square(np.asarray(m, dtype=np.complex128))
    n = m.shape[0]
    if n == 0:
        return m.copy()
    if rank(m, policy) < n:
        raise Singular(f"matrix of shape {m.shape} is rank deficient under the policy")
    return np.linalg.solve(m, np.eye(n, dtype=np.complex128))


def eigenvalues(m: np.ndarray) -> np.ndarray:
    m = _require_square(np.asarray(m, dtype=np.complex128))
    if m.shape[0] == 0:
        return np.zeros(0, dtype=np.complex128)
    return np.linalg.eigvals(m)


def vectorize(x: np.ndarray) -> np.ndarray:
    """Column-major (column-stacking) vectorization."""
    return np.asarray(x).reshape(-1, order="F")


def unvectorize(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    v = np.asarray(v).reshape(-1)
    if v.size != rows * cols:
        raise DimensionMismatch(f"vector of length {v.size} is not {rows}x{cols}")
    return v.reshape((rows, cols), order="F")


def frob(m: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(m)) if np.asarray(m).size else 0.0


def one_norm(m: np.ndarray) -> float:
    """Maximum absolute column sum."""
    m = np.asarray(m)
    return float(np.linalg.norm(m, 1)) if m.size else 0.0


def spectral_norm(m: np.ndarray) -> float:
    s = _singular_values(np.asarray(m, dtype=np.complex128))
    return float(s[0]) if s.size else 0.0


def condition(m: np.ndarray) -> float:
    """2-norm condition number; inf when numerically singular, 1 for 0x0."""
    s = _singular_values(np.asarray(m, dtype=np.complex128))
    if s.size == 0:
        return 1.0
    if s[-1] == 0.0:
        return math.inf
    return float(s[0] / s[-1])


def is_zero(m: np.ndarray, scale: float, policy: NumericPolicy = DEFAULT_POLICY) -> bool:
    """True iff ``||m||_F <= atol + rtol * scale``."""
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    return frob(m) <= policy.zero_threshold(scale)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.complex128)


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    """Direct sum of square blocks (empty blocks allowed)."""
    blocks = [_require_square(np.asarray(b, dtype=np.complex128)) for b in blocks]
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=np.complex128)
    at = 0
    for b in blocks:
        k = b.shape[0]
        out[at : at + k, at : at + k] = b
        at += k
    return out


# ---------------------------------------------------------------------------
# JSON matrix file format
# ---------------------------------------------------------------------------


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch("only 2-D matrices are serializable")
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ParseError("matrix document must be a JSON object")
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing matrix field: {exc}") from exc
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 0 or cols < 0:
        raise ParseError("rows/cols must be nonnegative integers")
    if not isinstance(data, list) or len(data) != rows:
        raise ParseError(f"data must hold {rows} rows")
    out = np.zeros((rows, cols), dtype=np.complex128)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise ParseError(f"row {i} must hold {cols} entries")
        for j, entry in enumerate(row):
            if not isinstance(entry, list) or len(entry) != 2:
                raise ParseError(f"entry ({i},{j}) must be a [re, im] pair")
            re, im = entry
            if not isinstance(re, (int, float)) or not isinstance(im, (int, float)):
                raise ParseError(f"entry ({i},{j}) must hold numbers")
            if not (math.isfinite(re) and math.isfinite(im)):
                raise ParseError(f"entry ({i},{j}) is not finite")
            out[i, j] = complex(re, im)
    return out


def load_matrix(path) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read matrix file {path}: {exc}") from exc
    return matrix_from_json(obj)


def save_matrix(path, m: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(m), fh)
        fh.write("\n")
