"""Deterministic, seeded generators for structured operator instances.

Every builder self-certifies: it evaluates the properties the instance is
supposed to have (nilpotency orders, vanishing defects, exact commutation,
Drazin indices) and raises :class:`~opcheck.errors.GenerationFailed` if
certification cannot be achieved within a small retry budget. Instances
are bit-reproducible functions of their seed; independent streams are
derived by keying a counter-based Philox generator, so parallel and serial
sweeps see identical draws.

Commutation-constrained families (the product/sum and AB = 0 instance
sets) are built constructively on block layouts where the constraints hold
exactly, never by rejection sampling over dense matrices: the constraint
sets have measure zero, so rejection would not terminate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .drazin import drazin_inverse, index_of
from .errors import GenerationFailed, InvalidOrder
from .kernels import kernel
from .matcore import (
    DEFAULT_POLICY,
    NumericPolicy,
    adjoint,
    block_diag,
    condition,
    eye,
    frob,
    inverse,
    matrix_to_json,
    power,
    zeros,
)
from .transforms import (
    TransformKind,
    defect_threshold,
    delta,
    isometry_defect,
    selfadjoint_defect,
    triangle,
)

__all__ = [
    "Family",
    "InstanceSpec",
    "GeneratedInstance",
    "rng_for",
    "random_unitary",
    "random_nilpotent",
    "random_invertible",
    "make_drazin_block",
    "make_ab_zero_pair",
    "make_scalar_plus_nilpotent",
    "make_remark3_counterexample",
    "make_commuting_quadruple",
    "make_disjoint_quadruple",
    "make_nilpotent_perturbation",
    "make_product_pairs",
    "make_commuting_core_weight",
    "generate",
]

_MASK64 = (1 << 64) - 1


def _splitmix(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def rng_for(seed: int, *path: int) -> np.random.Generator:
    """Independent generator for (seed, path); distinct paths give
    statistically independent, individually reproducible streams."""
    h = seed & _MASK64
    for p in path:
        h = _splitmix(h ^ (int(p) & _MASK64))
    key = np.array([seed & _MASK64, h], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


class _CertFailure(Exception):
    def __init__(self, bad):
        super().__init__(", ".join(f"{n}: {r:.3e} > {t:.3e}" for n, r, t in bad))
        self.bad = bad


def _certify(checks) -> list[tuple[str, float]]:
    bad = [(name, res, thr) for name, res, thr in checks if res > thr]
    if bad:
        raise _CertFailure(bad)
    return [(name, float(res)) for name, res, _ in checks]


def _with_retries(build, retries: int = 8):
    last = None
    for _ in range(retries):
        try:
            return build()
        except _CertFailure as exc:
            last = exc
    raise GenerationFailed(f"certification failed after {retries} attempts ({last})")


class Family(str, Enum):
    UNITARY = "unitary"
    NILPOTENT = "nilpotent"
    INVERTIBLE = "invertible"
    DRAZIN_BLOCK = "drazin-block"
    AB_ZERO = "ab-zero"
    HYPOTHESIS1 = "hypothesis1"
    REMARK3 = "remark3"
    SCALAR_PLUS_NILPOTENT = "scalar-plus-nilpotent"


@dataclass(frozen=True)
class InstanceSpec:
    """Seeded description of one generated instance (the CLI surface)."""

    family: Family
    dims: tuple[int, ...] = ()
    orders: tuple[int, ...] = ()
    seed: int = 0


def _plain(value):
    """Coerce meta values to JSON-encodable types."""
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (np.complexfloating,)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    return value


@dataclass(eq=False)
class GeneratedInstance:
    family: Family
    matrices: dict
    certified: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "family": self.family.value,
            "meta": {k: _plain(v) for k, v in self.meta.items()},
            "certified": [
                {"property": name, "residual": res} for name, res in self.certified
            ],
            "matrices": {k: matrix_to_json(v) for k, v in self.matrices.items()},
        }


# ---------------------------------------------------------------------------
# elementary draws
# ---------------------------------------------------------------------------


def _cgauss(rng: np.random.Generator, *shape: int) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def _unit_modulus(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * math.pi * rng.random()))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary (QR of a complex Gaussian with phase fix)."""
    if n == 0:
        return zeros(0, 0)
    z = _cgauss(rng, n, n)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _distinct_reals(rng, n, lo=0.55, hi=1.9, gap=0.04, signs=True) -> list[float]:
    vals: list[float] = []
    guard = 0
    while len(vals) < n:
        v = float(rng.uniform(lo, hi))
        if signs and rng.random() < 0.5:
            v = -v
        if all(abs(v - w) > gap for w in vals):
            vals.append(v)
        guard += 1
        if guard > 1000:
            raise GenerationFailed("could not draw distinct eigenvalues")
    return vals


def _reciprocal_reals(rng, n) -> list[float]:
    ts = _distinct_reals(rng, n // 2, lo=1.2, hi=1.85, gap=0.03, signs=False)
    vals = ts + [1.0 / t for t in ts]
    if n % 2:
        vals.append(1.0 if rng.random() < 0.5 else -1.0)
    return vals


def random_invertible(
    n: int, rng: np.random.Generator, spectrum: str = "generic"
) -> np.ndarray:
    """Well-conditioned invertible matrix with a chosen eigenvalue structure.

    spectrum:
      generic     -- complex eigenvalues with moduli in [0.55, 1.9]
      unitary     -- Haar unitary
      signs       -- unitary conjugate of diag(+-1)
      selfadjoint -- unitary conjugate of a distinct real diagonal
      real        -- (non-normal) similarity conjugate of a distinct real diagonal
      reciprocal  -- like real, eigenvalues paired (t, 1/t) plus +-1 leftover
    """
    if n == 0:
        return zeros(0, 0)
    if spectrum == "generic":
        # Schur-style construction keeps eigenvalue moduli bounded away
        # from zero, so powers of the core never lose rank numerically.
        lam = rng.uniform(0.55, 1.9, size=n) * np.exp(2j * math.pi * rng.random(n))
        t = np.diag(lam.astype(np.complex128)) + 0.35 * np.triu(_cgauss(rng, n, n), 1)
        u = random_unitary(n, rng)
        return u @ t @ adjoint(u)
    if spectrum == "unitary":
        return random_unitary(n, rng)
    if spectrum == "signs":
        v = random_unitary(n, rng)
        d = np.where(rng.random(n) < 0.5, -1.0, 1.0).astype(np.complex128)
        return v @ np.diag(d) @ adjoint(v)
    if spectrum == "selfadjoint":
        v = random_unitary(n, rng)
        d = np.array(_distinct_reals(rng, n), dtype=np.complex128)
        return v @ np.diag(d) @ adjoint(v)
    if spectrum in ("real", "reciprocal"):
        d = _reciprocal_reals(rng, n) if spectrum == "reciprocal" else _distinct_reals(rng, n)
        u = random_unitary(n, rng)
        v = random_unitary(n, rng)
        sv = np.exp(rng.uniform(math.log(0.75), math.log(1.33), size=n))
        q = u @ np.diag(sv).astype(np.complex128) @ v
        return q @ np.diag(np.array(d, dtype=np.complex128)) @ np.linalg.solve(
            q, eye(n)
        )
    raise ValueError(f"unknown spectrum {spectrum!r}")


def random_nilpotent(n: int, q: int, rng: np.random.Generator) -> np.ndarray:
    """Exactly q-nilpotent n x n matrix (N^q = 0 structurally, N^(q-1) != 0).

    Coordinates are partitioned into q consecutive groups and N carries
    random dense blocks mapping each group to the previous one, so the
    nilpotency order is exact by support, not by cancellation.
    """
    if q < 1 or q > max(n, 1):
        raise InvalidOrder(f"nilpotency order {q} invalid for size {n}")
    if n == 0:
        return zeros(0, 0)
    if q == 1:
        return zeros(n, n)

    sizes = [1] * q
    for _ in range(n - q):
        sizes[int(rng.integers(0, q))] += 1
    starts = np.concatenate([[0], np.cumsum(sizes)])

    for _ in range(60):
        mat = zeros(n, n)
        for lev in range(q - 1):
            r0, r1 = starts[lev], starts[lev + 1]
            c0, c1 = starts[lev + 1], starts[lev + 2]
            shape = (r1 - r0, c1 - c0)
            # entry moduli bounded away from zero so chain products survive
            block = (0.4 + 0.6 * rng.random(shape)) * np.exp(
                2j * math.pi * rng.random(shape)
            )
            mat[r0:r1, c0:c1] = block / math.sqrt(c1 - c0)
        if frob(power(mat, q - 1)) > 1e-3:
            return mat
    raise GenerationFailed(f"could not realize a {q}-nilpotent of size {n}")


# ---------------------------------------------------------------------------
# structured families
# ---------------------------------------------------------------------------


def make_drazin_block(
    n1: int,
    n2: int,
    p: int,
    rng: np.random.Generator,
    policy: NumericPolicy = DEFAULT_POLICY,
    *,
    conjugate: bool = False,
    spectrum: str = "generic",
) -> GeneratedInstance:
    """A = U (A1 (+) A2) U* with A1 invertible and A2 exactly p-nilpotent.

    ``p = 0`` requires ``n2 = 0`` (invertible A); otherwise 1 <= p <= n2.
    The constructed index is certified against :func:`~opcheck.drazin.index_of`.
    """
    if n2 == 0:
        if p != 0:
            raise InvalidOrder("p must be 0 when the nilpotent summand is empty")
    elif not 1 <= p <= n2:
        raise InvalidOrder(f"index {p} invalid for nilpotent size {n2}")
    if n1 + n2 == 0:
        raise InvalidOrder("instance must have positive size")

    def build():
        a1 = random_invertible(n1, rng, spectrum)
        a2 = random_nilpotent(n2, p, rng) if n2 else zeros(0, 0)
        a0 = block_diag(a1, a2)
        u = random_unitary(n1 + n2, rng) if conjugate else eye(n1 + n2)
        a = u @ a0 @ adjoint(u)
        checks = [
            ("index", abs(index_of(a, policy) - p), 0.5),
            ("core_condition", condition(a1) if n1 else 1.0, 100.0),
        ]
        if n2:
            checks.append(("nil_order", frob(power(a2, p)), policy.zero_threshold(1.0)))
            if p > 1:
                shortfall = max(0.0, 1e-3 - frob(power(a2, p - 1)))
                checks.append(("nil_order_sharp", shortfall, 0.0))
        certified = _certify(checks)
        return GeneratedInstance(
            family=Family.DRAZIN_BLOCK,
            matrices={"A": a, "A1": a1, "A2": a2, "U": u},
            certified=certified,
            meta={"n1": n1, "n2": n2, "p": p, "spectrum": spectrum, "conjugate": conjugate},
        )

    return _with_retries(build)


def make_ab_zero_pair(
    n1: int,
    n2: int,
    rng: np.random.Generator,
    policy: NumericPolicy = DEFAULT_POLICY,
    *,
    qa: int | None = None,
    qb: int | None = None,
    invertible_tail: bool = False,
    spectrum: str = "real",
    conjugate: bool = False,
) -> GeneratedInstance:
    """Commuting pair with AB = BA = 0 exactly.

    A = A1 (+) A2 with A1 invertible on the first n1 coordinates and A2
    nilpotent on the first half of the trailing n2; B vanishes there and
    acts nilpotently on the second half (plus, optionally, an invertible
    tail so that B has a nonzero core of its own). All the structure lives
    on disjoint coordinate blocks, so the product and commutator vanish
    identically rather than to rounding.
    """
    if n2 < 2:
        raise InvalidOrder("need n2 >= 2 to split the nilpotent part")
    h2c = max(1, n2 // 3) if invertible_tail else 0
    h2a = (n2 - h2c + 1) // 2
    h2b = n2 - h2c - h2a
    qa = qa if qa is not None else min(2, h2a)
    qb = qb if qb is not None else (min(2, h2b) if h2b else 1)
    if not 1 <= qa <= max(h2a, 1):
        raise InvalidOrder(f"qa={qa} invalid for block of size {h2a}")
    if h2b and not 1 <= qb <= h2b:
        raise InvalidOrder(f"qb={qb} invalid for block of size {h2b}")
    if h2b == 0:
        qb = 1

    def build():
        a1 = random_invertible(n1, rng, spectrum)
        na = random_nilpotent(h2a, qa, rng) if h2a else zeros(0, 0)
        nb = random_nilpotent(h2b, qb, rng) if h2b else zeros(0, 0)
        mb = random_invertible(h2c, rng, spectrum) if h2c else zeros(0, 0)
        a = block_diag(a1, na, zeros(h2b, h2b), zeros(h2c, h2c))
        b = block_diag(zeros(n1, n1), zeros(h2a, h2a), nb, mb)
        u = random_unitary(n1 + n2, rng) if conjugate else eye(n1 + n2)
        a_full, b_full = u @ a @ adjoint(u), u @ b @ adjoint(u)
        expected_b_index = qb if h2b else 1
        certified = _certify(
            [
                ("ab_product", frob(a_full @ b_full), policy.atol),
                ("ba_product", frob(b_full @ a_full), policy.atol),
                ("commutator", frob(a_full @ b_full - b_full @ a_full), policy.atol),
                ("index_A", abs(index_of(a_full, policy) - qa), 0.5),
                ("index_B", abs(index_of(b_full, policy) - expected_b_index), 0.5),
            ]
        )
        return GeneratedInstance(
            family=Family.AB_ZERO,
            matrices={
                "A": a_full,
                "B": b_full,
                "A1": a1,
                "A2": block_diag(na, zeros(h2b, h2b), zeros(h2c, h2c)),
                "B22": block_diag(zeros(h2a, h2a), nb, mb),
                "U": u,
            },
            certified=certified,
            meta={
                "n1": n1,
                "n2": n2,
                "qa": qa,
                "qb": qb,
                "layout": (n1, h2a, h2b, h2c),
                "invertible_tail": invertible_tail,
            },
        )

    return _with_retries(build)


def make_scalar_plus_nilpotent(
    n: int,
    q: int,
    s: complex,
    rng: np.random.Generator,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> GeneratedInstance:
    """A = s I + N with N exactly q-nilpotent.

    Certifies the order-(2q-1) selfadjointness defect when s is real and
    the order-(2q-1) isometry defect when |s| = 1.
    """

    def build():
        nil = random_nilpotent(n, q, rng)
        a = complex(s) * eye(n) + nil
        m = 2 * q - 1
        checks = []
        ident = eye(n)
        if abs(complex(s).imag) < 1e-15:
            checks.append(
                (
                    "selfadjoint_defect",
                    frob(selfadjoint_defect(a, ident, m)),
                    defect_threshold(policy, adjoint(a), a, ident, m),
                )
            )
        if abs(abs(complex(s)) - 1.0) < 1e-15:
            checks.append(
                (
                    "isometry_defect",
                    frob(isometry_defect(a, ident, m)),
                    defect_threshold(policy, adjoint(a), a, ident, m),
                )
            )
        certified = _certify(checks)
        return GeneratedInstance(
            family=Family.SCALAR_PLUS_NILPOTENT,
            matrices={"A": a, "N": nil},
            certified=certified,
            meta={"n": n, "q": q, "s": complex(s), "order": m},
        )

    return _with_retries(build)


def make_remark3_counterexample(
    rng: np.random.Generator,
    policy: NumericPolicy = DEFAULT_POLICY,
    n1: int = 2,
) -> GeneratedInstance:
    """The one-way-implication witness: a pair (A, X) whose order-3
    selfadjointness defect vanishes while the order-3 triangle defect
    against the adjoint of the Drazin inverse stays far from zero.

    A = A1 (+) N with A1 an invertible real diagonal, N a 2-nilpotent
    2 x 2 block; X = X11 (+) I with X11 diagonal. The surviving defect is
    exactly the identity on the nilpotent summand, so its norm is sqrt(2).
    """

    def build():
        d = np.array(
            _distinct_reals(rng, n1, lo=0.5, hi=2.5, signs=False), dtype=np.complex128
        )
        a1 = np.diag(d)
        x11 = np.diag(
            np.array(
                [(0.5 + rng.random()) * _unit_modulus(rng) for _ in range(n1)],
                dtype=np.complex128,
            )
        )
        alpha = (0.6 + 0.8 * rng.random()) * _unit_modulus(rng)
        nil = zeros(2, 2)
        nil[0, 1] = alpha
        a = block_diag(a1, nil)
        x = block_diag(x11, eye(2))
        a_d = drazin_inverse(a, policy)
        pos = frob(selfadjoint_defect(a, x, 3))
        neg = frob(triangle(adjoint(a_d), a, x, 3))
        certified = _certify(
            [
                ("delta3_defect", pos, 1e-9),
                ("triangle3_norm_shortfall", max(0.0, 0.5 - neg), 0.0),
            ]
        )
        return GeneratedInstance(
            family=Family.REMARK3,
            matrices={"A": a, "X": x, "A1": a1, "X11": x11, "N": nil},
            certified=certified,
            meta={"n1": n1, "delta3": pos, "triangle3": neg},
        )

    return _with_retries(build)


def make_commuting_core_weight(
    rng: np.random.Generator,
    policy: NumericPolicy = DEFAULT_POLICY,
    *,
    n1: int,
    n2: int,
    p: int,
    m: int,
    conjugate: bool = True,
) -> GeneratedInstance:
    """(A, X) with A1 selfadjoint, X = X11 (+) 0, X11 invertible, [A, X] = 0,
    and the order-m triangle defect of (A_d*, A) on X equal to zero.

    X11 is a function of A1 (same unitary eigenbasis, nonzero diagonal), so
    commutation and the defect identity hold exactly by construction.
    """
    if not 1 <= p <= n2:
        raise InvalidOrder(f"index {p} invalid for nilpotent size {n2}")

    def build():
        v = random_unitary(n1, rng)
        d = np.array(_distinct_reals(rng, n1), dtype=np.complex128)
        a1 = v @ np.diag(d) @ adjoint(v)
        f = np.array(
            [(0.5 + 1.3 * rng.random()) * _unit_modulus(rng) for _ in range(n1)],
            dtype=np.complex128,
        )
        x11 = v @ np.diag(f) @ adjoint(v)
        a2 = random_nilpotent(n2, p, rng)
        u = random_unitary(n1 + n2, rng) if conjugate else eye(n1 + n2)
        a = u @ block_diag(a1, a2) @ adjoint(u)
        x = u @ block_diag(x11, zeros(n2, n2)) @ adjoint(u)
        a_d = drazin_inverse(a, policy)
        b = adjoint(a_d)
        certified = _certify(
            [
                (
                    "triangle_defect",
                    frob(triangle(b, a, x, m)),
                    defect_threshold(policy, b, a, x, m),
                ),
                ("commutator_AX", frob(a @ x - x @ a), policy.zero_threshold(frob(a) * frob(x))),
                ("weight_core_condition", condition(x11), 1e4),
                ("index", abs(index_of(a, policy) - p), 0.5),
            ]
        )
        return GeneratedInstance(
            family=Family.DRAZIN_BLOCK,
            matrices={"A": a, "X": x, "A1": a1, "X11": x11, "A2": a2, "U": u},
            certified=certified,
            meta={"n1": n1, "n2": n2, "p": p, "m": m},
        )

    return _with_retries(build)


# ---------------------------------------------------------------------------
# commutation-constrained quadruples
# ---------------------------------------------------------------------------


def _kernel_sample_block(kind, b_block, a_block, m, policy, rng):
    """Unit-norm sample from the weight kernel of a single diagonal block."""
    basis = kernel(kind, b_block, a_block, m, policy)
    if basis.dim == 0:
        raise _CertFailure([("block_kernel_dim", 0.0, -1.0)])
    return basis.sample(rng)


def _quadruple_commutator_checks(a, b, x, y, policy):
    def thr(p, q):
        return policy.zero_threshold(max(1.0, frob(p)) * max(1.0, frob(q)))

    return [
        ("commutator_XY", frob(x @ y - y @ x), thr(x, y)),
        ("commutator_AB", frob(a @ b - b @ a), thr(a, b)),
        ("commutator_AstarY", frob(adjoint(a) @ y - y @ adjoint(a)), thr(a, y)),
        ("commutator_BstarX", frob(adjoint(b) @ x - x @ adjoint(b)), thr(b, x)),
    ]


def make_commuting_quadruple(
    rng: np.random.Generator,
    policy: NumericPolicy = DEFAULT_POLICY,
    *,
    flavor: str = "triangle-drazin",
    dims: tuple[int, int, int, int] = (2, 2, 1, 1),
    qa: int = 1,
    qb: int = 1,
    m: int | None = None,
    n: int | None = None,
    pa: int | None = None,
    pb: int | None = None,
    shared_weight: bool = False,
    conjugate: bool = True,
) -> GeneratedInstance:
    """Commuting quadruple (A, B, X, Y) with exact cross-commutation.

    Layout: H = Ca (+) Cb (+) Na (+) Nb. A acts as (scalar + nilpotent) on
    Ca, as a real scalar on Cb, nilpotently on Na and as zero on Nb; B is
    the mirror image. X is kernel-sampled on Ca (order m) and scalar on
    Cb; Y the mirror. All four cross commutators vanish identically
    because every pair of factors meets only through scalar blocks.

    flavor "triangle-drazin": X is sampled from the weight kernel of the
    order-m triangle transform of (A_d*, A) (core scalars real); flavor
    "delta": from the kernel of the order-m delta transform of (A*, A).
    """
    nca, ncb, nna, nnb = dims
    if not 1 <= qa <= nca or not 1 <= qb <= ncb:
        raise InvalidOrder(f"orders ({qa},{qb}) invalid for core dims ({nca},{ncb})")
    m = m if m is not None else 2 * qa - 1
    n = n if n is not None else 2 * qb - 1
    pa = pa if pa is not None else (min(2, nna) if nna else 0)
    pb = pb if pb is not None else (min(2, nnb) if nnb else 0)
    if flavor not in ("triangle-drazin", "delta"):
        raise ValueError(f"unknown flavor {flavor!r}")

    def build():
        sa, ta = (rng.choice([-1.0, 1.0]) * rng.uniform(0.6, 1.6) for _ in range(2))
        sb, tb = (rng.choice([-1.0, 1.0]) * rng.uniform(0.6, 1.6) for _ in range(2))
        na_core = random_nilpotent(nca, qa, rng)
        nb_core = random_nilpotent(ncb, qb, rng)
        a_ca = sa * eye(nca) + na_core
        b_cb = tb * eye(ncb) + nb_core
        nil_a = random_nilpotent(nna, pa, rng) if nna else zeros(0, 0)
        nil_b = random_nilpotent(nnb, pb, rng) if nnb else zeros(0, 0)

        a = block_diag(a_ca, ta * eye(ncb), nil_a, zeros(nnb, nnb))
        b = block_diag(sb * eye(nca), b_cb, zeros(nna, nna), nil_b)

        if flavor == "triangle-drazin":
            x_ca = _kernel_sample_block(
                TransformKind.TRIANGLE, adjoint(inverse(a_ca, policy)), a_ca, m, policy, rng
            )
            y_cb = _kernel_sample_block(
                TransformKind.TRIANGLE, adjoint(inverse(b_cb, policy)), b_cb, n, policy, rng
            )
        else:
            x_ca = _kernel_sample_block(
                TransformKind.DELTA, adjoint(a_ca), a_ca, m, policy, rng
            )
            y_cb = _kernel_sample_block(
                TransformKind.DELTA, adjoint(b_cb), b_cb, n, policy, rng
            )

        if shared_weight:
            x = block_diag(x_ca, y_cb, zeros(nna, nna), zeros(nnb, nnb))
            y = x
        else:
            c = (0.5 + rng.random()) * _unit_modulus(rng)
            d = (0.5 + rng.random()) * _unit_modulus(rng)
            x = block_diag(x_ca, c * eye(ncb), zeros(nna, nna), zeros(nnb, nnb))
            y = block_diag(d * eye(nca), y_cb, zeros(nna, nna), zeros(nnb, nnb))

        if conjugate:
            u = random_unitary(sum(dims), rng)
            a, b, x, y = (u @ t @ adjoint(u) for t in (a, b, x, y))

        if flavor == "triangle-drazin":
            ba_full = adjoint(drazin_inverse(a, policy))
            bb_full = adjoint(drazin_inverse(b, policy))
        else:
            ba_full, bb_full = adjoint(a), adjoint(b)
        kind = TransformKind.TRIANGLE if flavor == "triangle-drazin" else TransformKind.DELTA
        op = triangle if kind == TransformKind.TRIANGLE else delta
        checks = [
            (
                "defect_A_X",
                frob(op(ba_full, a, x, m)),
                defect_threshold(policy, ba_full, a, x, m),
            ),
            (
                "defect_B_Y",
                frob(op(bb_full, b, y, n)),
                defect_threshold(policy, bb_full, b, y, n),
            ),
        ]
        if shared_weight:
            # the shared-weight statement only assumes [A, B] = 0
            checks.append(
                (
                    "commutator_AB",
                    frob(a @ b - b @ a),
                    policy.zero_threshold(max(1.0, frob(a)) * max(1.0, frob(b))),
                )
            )
        else:
            checks.extend(_quadruple_commutator_checks(a, b, x, y, policy))
        certified = _certify(checks)
        return GeneratedInstance(
            family=Family.HYPOTHESIS1,
            matrices={"A": a, "B": b, "X": x, "Y": y},
            certified=certified,
            meta={
                "flavor": flavor,
                "dims": dims,
                "qa": qa,
                "qb": qb,
                "m": m,
                "n": n,
                "shared_weight": shared_weight,
                "xy_norm": frob(x @ y),
            },
        )

    return _with_retries(build)


def make_disjoint_quadruple(
    rng: np.random.Generator,
    policy: NumericPolicy = DEFAULT_POLICY,
    *,
    flavor: str = "triangle-drazin",
    dims: tuple[int, int, int, int] = (2, 1, 2, 1),
    qa: int = 1,
    qb: int = 1,
    m: int | None = None,
    n: int | None = None,
    pa: int | None = None,
    pb: int | None = None,
    conjugate: bool = True,
) -> GeneratedInstance:
    """Quadruple (A, B, X, Y) with AB = BA = 0 exactly plus the commuting
    hypotheses; A and B live on disjoint coordinate blocks.

    Layout: H = CoreA (+) NilA (+) CoreB (+) NilB. flavor picks the weight
    hypothesis: "triangle-drazin" (real core scalars, kernel of the
    triangle transform of (A_d*, A)) or "triangle-adjoint" (unimodular
    core scalars, kernel of the isometry-style transform of (A*, A)).
    """
    n1a, nsa, n1b, nsb = dims
    if not 1 <= qa <= n1a or not 1 <= qb <= n1b:
        raise InvalidOrder(f"orders ({qa},{qb}) invalid for core dims ({n1a},{n1b})")
    m = m if m is not None else 2 * qa - 1
    n = n if n is not None else 2 * qb - 1
    pa = pa if pa is not None else (min(2, nsa) if nsa else 0)
    pb = pb if pb is not None else (min(2, nsb) if nsb else 0)
    if flavor not in ("triangle-drazin", "triangle-adjoint"):
        raise ValueError(f"unknown flavor {flavor!r}")

    def build():
        if flavor == "triangle-drazin":
            sa = rng.choice([-1.0, 1.0]) * rng.uniform(0.6, 1.6)
            sb = rng.choice([-1.0, 1.0]) * rng.uniform(0.6, 1.6)
        else:
            sa, sb = _unit_modulus(rng), _unit_modulus(rng)
        a_core = sa * eye(n1a) + random_nilpotent(n1a, qa, rng)
        b_core = sb * eye(n1b) + random_nilpotent(n1b, qb, rng)
        nil_a = random_nilpotent(nsa, pa, rng) if nsa else zeros(0, 0)
        nil_b = random_nilpotent(nsb, pb, rng) if nsb else zeros(0, 0)

        a = block_diag(a_core, nil_a, zeros(n1b, n1b), zeros(nsb, nsb))
        b = block_diag(zeros(n1a, n1a), zeros(nsa, nsa), b_core, nil_b)

        if flavor == "triangle-drazin":
            pair_a = adjoint(inverse(a_core, policy))
            pair_b = adjoint(inverse(b_core, policy))
        else:
            pair_a, pair_b = adjoint(a_core), adjoint(b_core)
        x_a = _kernel_sample_block(TransformKind.TRIANGLE, pair_a, a_core, m, policy, rng)
        y_b = _kernel_sample_block(TransformKind.TRIANGLE, pair_b, b_core, n, policy, rng)
        x = block_diag(x_a, zeros(nsa, nsa), zeros(n1b, n1b), zeros(nsb, nsb))
        y = block_diag(zeros(n1a, n1a), zeros(nsa, nsa), y_b, zeros(nsb, nsb))

        if conjugate:
            u = random_unitary(sum(dims), rng)
            a, b, x, y = (u @ t @ adjoint(u) for t in (a, b, x, y))

        if flavor == "triangle-drazin":
            ba_full = adjoint(drazin_inverse(a, policy))
            bb_full = adjoint(drazin_inverse(b, policy))
        else:
            ba_full, bb_full = adjoint(a), adjoint(b)
        checks = [
            ("ab_product", frob(a @ b), policy.atol),
            ("ba_product", frob(b @ a), policy.atol),
            (
                "defect_A_X",
                frob(triangle(ba_full, a, x, m)),
                defect_threshold(policy, ba_full, a, x, m),
            ),
            (
                "defect_B_Y",
                frob(triangle(bb_full, b, y, n)),
                defect_threshold(policy, bb_full, b, y, n),
            ),
        ]
        checks.extend(_quadruple_commutator_checks(a, b, x, y, policy))
        certified = _certify(checks)
        return GeneratedInstance(
            family=Family.AB_ZERO,
            matrices={"A": a, "B": b, "X": x, "Y": y},
            certified=certified,
            meta={
                "flavor": flavor,
                "dims": dims,
                "qa": qa,
                "qb": qb,
                "m": m,
                "n": n,
                "xy_norm": frob(x @ y),
            },
        )

    return _with_retries(build)


def make_nilpotent_perturbation(
    rng: np.random.Generator,
    policy: NumericPolicy = DEFAULT_POLICY,
    *,
    flavor: str = "delta",
    na: int = 2,
    nb: int = 2,
    qa: int = 1,
    m: int | None = None,
    nil_placement: str = "disjoint",
    q_pert: int | None = None,
    conjugate: bool = True,
) -> GeneratedInstance:
    """(A, B, X, N) with [A, N] = 0 and the order-m defect of (B, A) on X zero.

    flavor "delta" uses B = A* with a real core scalar (selfadjointness
    setting); flavor "triangle" uses B = A* with a unimodular core scalar
    (left-invertibility setting). ``nil_placement`` puts N either on a
    scalar block disjoint from the active core ("disjoint") or as a power
    of the core nilpotent ("power").
    """
    if not 1 <= qa <= na:
        raise InvalidOrder(f"core order {qa} invalid for size {na}")
    m = m if m is not None else 2 * qa - 1
    if flavor not in ("delta", "triangle"):
        raise ValueError(f"unknown flavor {flavor!r}")
    if nil_placement not in ("disjoint", "power"):
        raise ValueError(f"unknown placement {nil_placement!r}")
    if nil_placement == "power" and qa < 2:
        raise InvalidOrder("power placement needs a nontrivial core nilpotent")
    if nil_placement == "disjoint" and nb < 1:
        raise InvalidOrder("disjoint placement needs a nonempty scalar block")

    def build():
        if flavor == "delta":
            sa = rng.choice([-1.0, 1.0]) * rng.uniform(0.6, 1.6)
            tb = rng.choice([-1.0, 1.0]) * rng.uniform(0.6, 1.6)
        else:
            sa, tb = _unit_modulus(rng), _unit_modulus(rng)
        core_nil = random_nilpotent(na, qa, rng)
        a_core = sa * eye(na) + core_nil
        a = block_diag(a_core, tb * eye(nb))

        kind = TransformKind.DELTA if flavor == "delta" else TransformKind.TRIANGLE
        x_a = _kernel_sample_block(kind, adjoint(a_core), a_core, m, policy, rng)
        x_b = _cgauss(rng, nb, nb) if nb else zeros(0, 0)
        x = block_diag(x_a, x_b)

        if nil_placement == "disjoint":
            q = q_pert if q_pert is not None else min(2, nb)
            if not 1 <= q <= max(nb, 1):
                raise InvalidOrder(f"perturbation order {q} invalid for size {nb}")
            pert = block_diag(zeros(na, na), random_nilpotent(nb, q, rng))
        else:
            r = 1 if qa <= 2 else int(rng.integers(1, qa - 1))
            coeff = (0.4 + rng.random()) * _unit_modulus(rng)
            pert = block_diag(coeff * power(core_nil, r), zeros(nb, nb))
            q = -(-qa // r)  # ceil(qa / r): exact nilpotency order of core_nil^r

        if conjugate:
            u = random_unitary(na + nb, rng)
            a, x, pert = (u @ t @ adjoint(u) for t in (a, x, pert))

        b = adjoint(a)
        op = delta if kind == TransformKind.DELTA else triangle
        certified = _certify(
            [
                (
                    "defect_A_X",
                    frob(op(b, a, x, m)),
                    defect_threshold(policy, b, a, x, m),
                ),
                (
                    "commutator_AN",
                    frob(a @ pert - pert @ a),
                    policy.zero_threshold(max(1.0, frob(a)) * max(1.0, frob(pert))),
                ),
                ("pert_nilpotency", frob(power(pert, q)), policy.zero_threshold(1.0)),
            ]
        )
        return GeneratedInstance(
            family=Family.SCALAR_PLUS_NILPOTENT,
            matrices={"A": a, "B": b, "X": x, "N": pert},
            certified=certified,
            meta={"flavor": flavor, "m": m, "q": q, "qa": qa, "placement": nil_placement},
        )

    return _with_retries(build)


def make_product_pairs(
    rng: np.random.Generator,
    policy: NumericPolicy = DEFAULT_POLICY,
    *,
    families: tuple[str, str] = ("adjoint", "adjoint"),
    na: int = 2,
    nb: int = 2,
    qa: int = 1,
    qb: int = 1,
    m1: int | None = None,
    m2: int | None = None,
    conjugate: bool = True,
) -> GeneratedInstance:
    """Two pairs (B1, A1), (B2, A2) with weights X1, X2, active on disjoint
    blocks, each left (Xi, mi)-invertible, with every cross commutator
    exactly zero.

    family "adjoint": Ai = (unimodular scalar + nilpotent) on its block,
    Bi = Ai*; family "inverse": Ai invertible with distinct real spectrum,
    Bi = Ai^(-1). Off its own block every operator of pair i is a scalar
    chosen so it cancels inside the pair-i transform.
    """
    if not 1 <= qa <= na or not 1 <= qb <= nb:
        raise InvalidOrder(f"orders ({qa},{qb}) invalid for dims ({na},{nb})")
    for fam in families:
        if fam not in ("adjoint", "inverse"):
            raise ValueError(f"unknown pair family {fam!r}")
    m1 = m1 if m1 is not None else 2 * qa - 1
    m2 = m2 if m2 is not None else 2 * qb - 1

    def one_pair(fam, size, q, order):
        if fam == "adjoint":
            alpha = _unit_modulus(rng) * eye(size) + random_nilpotent(size, q, rng)
            beta = adjoint(alpha)
        else:
            alpha = random_invertible(size, rng, "real")
            beta = inverse(alpha, policy)
        xi = _kernel_sample_block(TransformKind.TRIANGLE, beta, alpha, order, policy, rng)
        return alpha, beta, xi

    def build():
        alpha1, beta1, xi1 = one_pair(families[0], na, qa, m1)
        alpha2, beta2, xi2 = one_pair(families[1], nb, qb, m2)
        # scalar continuations: pair-i operators act as reciprocal scalars
        # on the other pair's block, so transforms cancel there exactly
        w1 = _unit_modulus(rng) if families[0] == "adjoint" else complex(rng.uniform(0.6, 1.6))
        w2 = _unit_modulus(rng) if families[1] == "adjoint" else complex(rng.uniform(0.6, 1.6))
        a1 = block_diag(alpha1, w1 * eye(nb))
        b1 = block_diag(beta1, (1.0 / w1) * eye(nb))
        a2 = block_diag(w2 * eye(na), alpha2)
        b2 = block_diag((1.0 / w2) * eye(na), beta2)
        c1 = (0.5 + rng.random()) * _unit_modulus(rng)
        c2 = (0.5 + rng.random()) * _unit_modulus(rng)
        x1 = block_diag(xi1, c1 * eye(nb))
        x2 = block_diag(c2 * eye(na), xi2)

        if conjugate:
            u = random_unitary(na + nb, rng)
            a1, b1, x1, a2, b2, x2 = (u @ t @ adjoint(u) for t in (a1, b1, x1, a2, b2, x2))

        def thr(p, q_):
            return policy.zero_threshold(max(1.0, frob(p)) * max(1.0, frob(q_)))

        def comm(p, q_):
            return frob(p @ q_ - q_ @ p)

        certified = _certify(
            [
                (
                    "defect_pair1",
                    frob(triangle(b1, a1, x1, m1)),
                    defect_threshold(policy, b1, a1, x1, m1),
                ),
                (
                    "defect_pair2",
                    frob(triangle(b2, a2, x2, m2)),
                    defect_threshold(policy, b2, a2, x2, m2),
                ),
                ("commutator_A1A2", comm(a1, a2), thr(a1, a2)),
                ("commutator_A1B2", comm(a1, b2), thr(a1, b2)),
                ("commutator_X1X2", comm(x1, x2), thr(x1, x2)),
                ("commutator_A1X2", comm(a1, x2), thr(a1, x2)),
                ("commutator_A2X1", comm(a2, x1), thr(a2, x1)),
                ("commutator_B1B2", comm(b1, b2), thr(b1, b2)),
                ("commutator_B2X1", comm(b2, x1), thr(b2, x1)),
            ]
        )
        return GeneratedInstance(
            family=Family.HYPOTHESIS1,
            matrices={"A1": a1, "B1": b1, "X1": x1, "A2": a2, "B2": b2, "X2": x2},
            certified=certified,
            meta={"families": families, "m1": m1, "m2": m2, "qa": qa, "qb": qb},
        )

    return _with_retries(build)


# ---------------------------------------------------------------------------
# CLI dispatcher
# ---------------------------------------------------------------------------


_FAMILY_LANE = {fam: i for i, fam in enumerate(Family)}


def _need(spec: InstanceSpec, dims: int, orders: int) -> None:
    if len(spec.dims) != dims or len(spec.orders) != orders:
        raise InvalidOrder(
            f"family {spec.family.value} takes {dims} dims and {orders} orders, "
            f"got {len(spec.dims)} and {len(spec.orders)}"
        )


def generate(spec: InstanceSpec, policy: NumericPolicy = DEFAULT_POLICY) -> GeneratedInstance:
    """Build the instance described by ``spec`` (deterministic per seed)."""
    fam = Family(spec.family)
    rng = rng_for(spec.seed, _FAMILY_LANE[fam])

    if fam == Family.UNITARY:
        _need(spec, 1, 0)

        def build_unitary():
            u = random_unitary(spec.dims[0], rng)
            resid = frob(adjoint(u) @ u - eye(spec.dims[0]))
            certified = _certify([("unitarity", resid, 1e-12)])
            return GeneratedInstance(fam, {"A": u}, certified, {"n": spec.dims[0]})

        return _with_retries(build_unitary)

    if fam == Family.NILPOTENT:
        _need(spec, 1, 1)
        n, q = spec.dims[0], spec.orders[0]

        def build_nilpotent():
            nil = random_nilpotent(n, q, rng)
            certified = _certify(
                [
                    ("nil_order", frob(power(nil, q)), policy.zero_threshold(1.0)),
                    ("index", abs(index_of(nil, policy) - (q if n else 0)), 0.5),
                ]
            )
            return GeneratedInstance(fam, {"A": nil}, certified, {"n": n, "q": q})

        return _with_retries(build_nilpotent)

    if fam == Family.INVERTIBLE:
        _need(spec, 1, 0)

        def build_invertible():
            a = random_invertible(spec.dims[0], rng)
            certified = _certify([("condition", condition(a), 100.0)])
            return GeneratedInstance(fam, {"A": a}, certified, {"n": spec.dims[0]})

        return _with_retries(build_invertible)

    if fam == Family.DRAZIN_BLOCK:
        _need(spec, 2, 1)
        return make_drazin_block(spec.dims[0], spec.dims[1], spec.orders[0], rng, policy)

    if fam == Family.AB_ZERO:
        _need(spec, 2, 2)
        return make_ab_zero_pair(
            spec.dims[0], spec.dims[1], rng, policy, qa=spec.orders[0], qb=spec.orders[1]
        )

    if fam == Family.HYPOTHESIS1:
        _need(spec, 4, 2)
        return make_commuting_quadruple(
            rng, policy, dims=spec.dims, qa=spec.orders[0], qb=spec.orders[1]
        )

    if fam == Family.REMARK3:
        if spec.orders:
            raise InvalidOrder("remark3 takes no orders")
        n1 = spec.dims[0] if spec.dims else 2
        return make_remark3_counterexample(rng, policy, n1=n1)

    if fam == Family.SCALAR_PLUS_NILPOTENT:
        _need(spec, 1, 1)
        s = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.5)
        return make_scalar_plus_nilpotent(spec.dims[0], spec.orders[0], s, rng, policy)

    raise InvalidOrder(f"unhandled family {fam}")
