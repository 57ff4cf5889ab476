"""Drazin index, Drazin inverse, and the core-nilpotent block structure.

A square A decomposes the space as ``range(A^p) + null(A^p)`` where p is
the least k with rank(A^k) = rank(A^(k+1)). Relative to a basis of those
two subspaces A is block diagonal A1 (+) A2 with A1 invertible and A2
p-nilpotent, and the Drazin inverse is A1^(-1) (+) 0 carried back to the
original basis. The two subspaces are each spanned orthonormally but are
not orthogonal to each other in general; the conditioning of the combined
basis is checked against the policy and failure raises
:class:`~opcheck.errors.IllConditioned` rather than returning junk.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionMismatch, IllConditioned, NotSquare
from .matcore import (
    DEFAULT_POLICY,
    NumericPolicy,
    adjoint,
    condition,
    frob,
    inverse,
    one_norm,
    power,
    rank,
)

__all__ = [
    "DrazinData",
    "BlockView",
    "PairSelector",
    "index_of",
    "core_nilpotent_decompose",
    "drazin_inverse",
    "block_view",
    "assemble_blocks",
    "resolve_pair",
    "axiom_residuals",
    "axiom_threshold",
]


def _power_rank(ak: np.ndarray, k: int, base_scale: float, policy: NumericPolicy) -> int:
    """Rank of the k-th power with the zero floor of the policy.

    A relative cutoff alone cannot tell an exactly nilpotent power apart
    from its rounding dirt (whose largest singular value is ~eps), so
    singular values are also floored at atol times the natural magnitude
    ||A||^k of the power.
    """
    if ak.size == 0:
        return 0
    s = np.linalg.svd(ak, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    cutoff = max(policy.rank_rtol * s[0], policy.atol * max(1.0, base_scale) ** k)
    return int(np.count_nonzero(s > cutoff))


def index_of(a: np.ndarray, policy: NumericPolicy = DEFAULT_POLICY) -> int:
    """Least k >= 0 with rank(A^k) = rank(A^(k+1)); 0 means invertible."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    base = float(np.linalg.norm(a, 2)) if n else 0.0
    prev_rank = n
    ak = np.eye(n, dtype=np.complex128)
    for k in range(n + 1):
        ak = ak @ a
        r = _power_rank(ak, k + 1, base, policy)
        if r == prev_rank:
            return k
        prev_rank = r
    return n  # ranks strictly decrease at most n times


def axiom_residuals(a: np.ndarray, a_d: np.ndarray, p: int) -> tuple[float, float, float]:
    """Frobenius residuals of the three defining identities of A_d.

    Returned in the order: commutation [A_d, A], A_d^2 A = A_d,
    A^(p+1) A_d = A^p.
    """
    a = np.asarray(a, dtype=np.complex128)
    a_d = np.asarray(a_d, dtype=np.complex128)
    r1 = frob(a_d @ a - a @ a_d)
    r2 = frob(a_d @ a_d @ a - a_d)
    ap = power(a, p)
    r3 = frob(ap @ a @ a_d - ap)
    return r1, r2, r3


@dataclass(frozen=True, eq=False)
class DrazinData:
    """Core-nilpotent decomposition of one operator.

    ``s`` holds an orthonormal basis of range(A^p) in its first ``dim_h1``
    columns and an orthonormal basis of null(A^p) in the rest;
    ``s_inv @ a @ s`` is block diagonal with blocks ``a1`` (invertible) and
    ``a2`` (p-nilpotent).
    """

    p: int
    a_d: np.ndarray
    s: np.ndarray
    s_inv: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    dim_h1: int
    dim_h2: int

    @property
    def n(self) -> int:
        return self.dim_h1 + self.dim_h2

    def residuals_for(self, a: np.ndarray) -> tuple[float, float, float]:
        return axiom_residuals(a, self.a_d, self.p)

    def to_json(self, a: np.ndarray | None = None) -> dict:
        from .matcore import matrix_to_json

        doc = {
            "index": self.p,
            "dim_core": self.dim_h1,
            "dim_nil": self.dim_h2,
            "drazin_inverse": matrix_to_json(self.a_d),
        }
        if a is not None:
            r1, r2, r3 = self.residuals_for(a)
            doc["axiom_residuals"] = {
                "commutation": r1,
                "inner_inverse": r2,
                "index_power": r3,
            }
        return doc


def core_nilpotent_decompose(
    a: np.ndarray, policy: NumericPolicy = DEFAULT_POLICY
) -> DrazinData:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    p = index_of(a, policy)

    if p == 0:
        s = np.eye(n, dtype=np.complex128)
        return DrazinData(
            p=0,
            a_d=inverse(a, policy),
            s=s,
            s_inv=s.copy(),
            a1=a.copy(),
            a2=np.zeros((0, 0), np.complex128),
            dim_h1=n,
            dim_h2=0,
        )

    ap = power(a, p)
    u, sv, vh = np.linalg.svd(ap, full_matrices=True)
    base = float(np.linalg.norm(a, 2))
    if sv.size == 0 or sv[0] == 0.0:
        r = 0
    else:
        cutoff = max(policy.rank_rtol * sv[0], policy.atol * max(1.0, base) ** p)
        r = int(np.count_nonzero(sv > cutoff))
    s = np.hstack([u[:, :r], vh[r:].conj().T])

    kappa = condition(s)
    if kappa > policy.cond_max:
        raise IllConditioned(
            f"core/null basis has condition {kappa:.3e} > {policy.cond_max:.1e}"
        )
    s_inv = np.linalg.solve(s, np.eye(n, dtype=np.complex128))
    t = s_inv @ a @ s
    a1, a2 = t[:r, :r], t[r:, r:]

    # A maps each subspace into itself, so the cross blocks must vanish.
    leak = max(frob(t[:r, r:]), frob(t[r:, :r]))
    if leak > policy.zero_threshold(kappa * frob(a)):
        raise IllConditioned(f"block leakage {leak:.3e} exceeds policy threshold")
    if r and rank(a1, policy) < r:
        raise IllConditioned("core block is numerically singular")

    a1_inv = inverse(a1, policy) if r else a1
    core = np.zeros((n, n), dtype=np.complex128)
    core[:r, :r] = a1_inv
    a_d = s @ core @ s_inv
    return DrazinData(
        p=p, a_d=a_d, s=s, s_inv=s_inv, a1=a1, a2=a2, dim_h1=r, dim_h2=n - r
    )


def drazin_inverse(a: np.ndarray, policy: NumericPolicy = DEFAULT_POLICY) -> np.ndarray:
    return core_nilpotent_decompose(a, policy).a_d


@dataclass(frozen=True, eq=False)
class BlockView:
    """Blocks of S^(-1) X S partitioned at the core dimension."""

    x11: np.ndarray
    x12: np.ndarray
    x21: np.ndarray
    x22: np.ndarray


def block_view(x: np.ndarray, dd: DrazinData) -> BlockView:
    x = np.asarray(x, dtype=np.complex128)
    n = dd.n
    if x.shape != (n, n):
        raise DimensionMismatch(f"weight must have shape {(n, n)}, got {x.shape}")
    t = dd.s_inv @ x @ dd.s
    r = dd.dim_h1
    return BlockView(x11=t[:r, :r], x12=t[:r, r:], x21=t[r:, :r], x22=t[r:, r:])


def assemble_blocks(bv: BlockView, dd: DrazinData) -> np.ndarray:
    """Inverse of :func:`block_view`."""
    n, r = dd.n, dd.dim_h1
    t = np.zeros((n, n), dtype=np.complex128)
    t[:r, :r] = bv.x11
    t[:r, r:] = bv.x12
    t[r:, :r] = bv.x21
    t[r:, r:] = bv.x22
    return dd.s @ t @ dd.s_inv


class PairSelector(str, Enum):
    """Which partner operator to pair with A."""

    SELF = "self"
    ADJOINT = "adjoint"
    DRAZIN = "drazin"
    DRAZIN_ADJOINT = "drazin-adjoint"


def resolve_pair(
    a: np.ndarray, sel: PairSelector, policy: NumericPolicy = DEFAULT_POLICY
) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    sel = PairSelector(sel)
    if sel == PairSelector.SELF:
        return a.copy()
    if sel == PairSelector.ADJOINT:
        return adjoint(a)
    a_d = drazin_inverse(a, policy)
    if sel == PairSelector.DRAZIN:
        return a_d
    return adjoint(a_d)


def axiom_threshold(a: np.ndarray, p: int, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Shared tolerance for the three axiom residuals: scales like ||A||_1^(p+2)."""
    return policy.zero_threshold(max(1.0, one_norm(a)) ** (p + 2))
