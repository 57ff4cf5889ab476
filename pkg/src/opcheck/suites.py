"""Seeded verification suites.

Each suite generates structured instances, certifies the hypotheses of one
identity family numerically, and then checks the corresponding conclusion
at its scaled tolerance. A trial whose hypothesis certification fails is
skipped, never counted as a pass, and a suite whose skip fraction exceeds
one half fails outright (that guards against vacuous green runs).
Generation errors are counted separately from mathematical failures.

Reports are deterministic per (config, seed): every trial draws from its
own key-split stream, so serial and parallel execution would see the same
instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .drazin import (
    BlockView,
    PairSelector,
    assemble_blocks,
    axiom_threshold,
    block_view,
    core_nilpotent_decompose,
    drazin_inverse,
    resolve_pair,
)
from .errors import (
    GenerationFailed,
    IllConditioned,
    Singular,
    ToleranceInconsistency,
    UnknownSuite,
)
from .generators import (
    make_ab_zero_pair,
    make_commuting_core_weight,
    make_commuting_quadruple,
    make_disjoint_quadruple,
    make_drazin_block,
    make_nilpotent_perturbation,
    make_product_pairs,
    make_remark3_counterexample,
    make_scalar_plus_nilpotent,
    random_invertible,
    random_nilpotent,
    random_unitary,
    rng_for,
)
from .kernels import kernel, minimal_order
from .matcore import (
    DEFAULT_POLICY,
    NumericPolicy,
    adjoint,
    block_diag,
    condition,
    eye,
    frob,
    inverse,
    power,
)
from .transforms import (
    TransformKind,
    defect_scale,
    defect_threshold,
    delta,
    selfadjoint_defect,
    transform,
    triangle,
)

__all__ = ["SuiteConfig", "SuiteReport", "TrialFailure", "run_suite", "available_suites"]

EIGENVALUE_TOL = 1e-6
OFFBLOCK_TOL = 1e-7
WITNESS_FLOOR = 1e-3
COUNTEREXAMPLE_POS = 1e-9
COUNTEREXAMPLE_NEG = 0.5


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    trials: int = 200
    dim_max: int = 6
    order_max: int = 4
    seed: int = 0
    policy: NumericPolicy = DEFAULT_POLICY

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.dim_max < 2:
            raise ValueError("dim_max must be >= 2")
        if self.order_max < 1:
            raise ValueError("order_max must be >= 1")

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "dim_max": self.dim_max,
            "order_max": self.order_max,
            "seed": self.seed,
            "policy": {
                "atol": self.policy.atol,
                "rtol": self.policy.rtol,
                "rank_rtol": self.policy.rank_rtol,
                "cond_max": self.policy.cond_max,
            },
        }


@dataclass(frozen=True)
class TrialFailure:
    trial: int
    clause: str
    residual: float
    threshold: float
    detail: dict

    def to_json(self) -> dict:
        return {
            "trial": self.trial,
            "clause": self.clause,
            "residual": self.residual,
            "threshold": self.threshold,
            "detail": {k: repr(v) for k, v in self.detail.items()},
        }


@dataclass
class SuiteReport:
    suite: str
    config: SuiteConfig
    trials: int
    passes: int
    skips: int
    generation_failures: int
    failures: list = field(default_factory=list)
    max_residual: float = 0.0
    max_ratio: float = 0.0
    anomalies: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if not self.failures else "fail"

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config.to_json(),
            "trials": self.trials,
            "passes": self.passes,
            "skips": self.skips,
            "generation_failures": self.generation_failures,
            "failures": [f.to_json() for f in self.failures],
            "max_residual": self.max_residual,
            "max_ratio": self.max_ratio,
            "anomalies": self.anomalies,
            "verdict": self.verdict,
        }


class _Skip(Exception):
    """Raised by a trial whose hypotheses could not be certified."""


def _dim(rng, lo: int, hi: int) -> int:
    if hi < lo:
        return lo
    return int(rng.integers(lo, hi + 1))


def _zt(policy: NumericPolicy, scale: float) -> float:
    return policy.zero_threshold(scale)


_PARTNER = {
    PairSelector.SELF: PairSelector.DRAZIN,
    PairSelector.DRAZIN: PairSelector.SELF,
    PairSelector.ADJOINT: PairSelector.DRAZIN_ADJOINT,
    PairSelector.DRAZIN_ADJOINT: PairSelector.ADJOINT,
}

_SELECTORS = (
    PairSelector.SELF,
    PairSelector.ADJOINT,
    PairSelector.DRAZIN,
    PairSelector.DRAZIN_ADJOINT,
)


def _cgauss(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


# ---------------------------------------------------------------------------
# per-suite trial bodies: return a list of (clause, residual, threshold, detail)
# ---------------------------------------------------------------------------


def _draw_drazin_dims(rng, cfg, *, min_nil=0, min_core=0, min_p=0):
    """Core/nil sizes and index within the configured budget."""
    lo2 = max(min_nil, min_p)
    n2 = _dim(rng, lo2, max(lo2, cfg.dim_max - max(min_core, 1)))
    lo1 = max(min_core, 1 if n2 == 0 else 0)
    n1 = _dim(rng, lo1, max(lo1, cfg.dim_max - n2))
    if n2 == 0:
        return n1, 0, 0
    p = _dim(rng, max(1, min_p), max(max(1, min_p), min(n2, cfg.order_max)))
    return n1, n2, p


def _trial_drazin_axioms(cfg, rng, extras, trial):
    policy = cfg.policy
    kind = trial % 9
    if kind == 7:
        inst = make_ab_zero_pair(
            _dim(rng, 1, 2), _dim(rng, 2, max(2, cfg.dim_max - 2)), rng, policy,
            invertible_tail=bool(trial & 16), conjugate=bool(trial & 32),
        )
        pick = (trial // 9) % 3
        if pick == 0:
            a, expected = inst.matrices["A"], inst.meta["qa"]
        elif pick == 1:
            h2b = inst.meta["layout"][2]
            a, expected = inst.matrices["B"], (inst.meta["qb"] if h2b else 1)
        else:
            a = inst.matrices["A"] + inst.matrices["B"]
            expected = max(inst.meta["qa"], inst.meta["qb"])
    elif kind == 8:
        inst = make_remark3_counterexample(rng, policy)
        a, expected = inst.matrices["A"], 2
    elif kind == 0:
        inst = make_drazin_block(*_draw_drazin_dims(rng, cfg, min_nil=1, min_p=1), rng, policy, conjugate=True, spectrum="generic")
        a, expected = inst.matrices["A"], inst.meta["p"]
    elif kind == 1:
        inst = make_drazin_block(*_draw_drazin_dims(rng, cfg, min_nil=1, min_p=1), rng, policy, conjugate=bool(trial & 8), spectrum="real")
        a, expected = inst.matrices["A"], inst.meta["p"]
    elif kind == 2:
        inst = make_drazin_block(*_draw_drazin_dims(rng, cfg, min_core=1, min_nil=1, min_p=1), rng, policy, conjugate=True, spectrum="selfadjoint")
        a, expected = inst.matrices["A"], inst.meta["p"]
    elif kind == 3:
        n = _dim(rng, 2, cfg.dim_max)
        q = _dim(rng, 1, min(n, cfg.order_max))
        u = random_unitary(n, rng)
        a = u @ random_nilpotent(n, q, rng) @ adjoint(u)
        expected = q
    elif kind == 4:
        a = random_invertible(_dim(rng, 2, cfg.dim_max), rng, "generic")
        expected = 0
    elif kind == 5:
        a = random_unitary(_dim(rng, 2, cfg.dim_max), rng)
        expected = 0
    else:
        n = _dim(rng, 2, cfg.dim_max)
        q = _dim(rng, 1, min(n, cfg.order_max))
        s = float(rng.choice([-1.0, 1.0])) * rng.uniform(0.5, 1.5)
        inst = make_scalar_plus_nilpotent(n, q, s, rng, policy)
        a, expected = inst.matrices["A"], 0  # s != 0 keeps A invertible

    dd = core_nilpotent_decompose(a, policy)
    r1, r2, r3 = dd.residuals_for(a)
    thr = axiom_threshold(a, dd.p, policy)
    recon = dd.s @ block_diag(dd.a1, dd.a2) @ dd.s_inv
    detail = {"family": kind, "n": a.shape[0], "p": dd.p}
    return [
        ("axiom_commutation", r1, thr, detail),
        ("axiom_inner_inverse", r2, thr, detail),
        ("axiom_index_power", r3, thr, detail),
        ("index_match", abs(dd.p - expected), 0.5, detail),
        ("block_reconstruction", frob(recon - a), _zt(cfg.policy, condition(dd.s) * frob(a)), detail),
    ]


def _trial_prop1(cfg, rng, extras, trial):
    policy = cfg.policy
    flavor = trial % 4
    checks = []
    if flavor in (0, 1):
        tkind = TransformKind.TRIANGLE if flavor == 0 else TransformKind.DELTA
        sel = _SELECTORS[(trial // 4) % 4]
        n1, n2, p = _draw_drazin_dims(rng, cfg, min_core=2, min_nil=1, min_p=1)
        inst = make_drazin_block(n1, n2, p, rng, policy, conjugate=bool(trial & 16), spectrum="reciprocal")
        a = inst.matrices["A"]
        b = resolve_pair(a, sel, policy)
        m = _dim(rng, 1, cfg.order_max)
        basis = kernel(tkind, b, a, m, policy)
        if basis.dim == 0:
            raise _Skip(f"empty kernel for selector {sel.value}")
        x = basis.sample(rng)
        detail = {"selector": sel.value, "kind": tkind.value, "m": m, "n": a.shape[0]}
        try:
            scan = minimal_order(tkind, b, a, x, m + 3, policy)
        except ToleranceInconsistency as exc:
            return [("tolerance_consistency", math.inf, 0.0, {**detail, "error": str(exc)})]
        for k in range(m, m + 4):
            checks.append(
                (f"order_{k - m}_above", scan.residuals[k - 1], scan.thresholds[k - 1], detail)
            )
    elif flavor == 2:
        n = _dim(rng, 2, cfg.dim_max)
        m = _dim(rng, 1, cfg.order_max)
        a = random_invertible(n, rng, "generic")
        b = random_invertible(n, rng, "generic")
        x = _cgauss(rng, n, n)
        a_inv, b_inv = inverse(a, policy), inverse(b, policy)
        scale = (
            (1.0 + frob(a) * frob(b)) ** m
            * (1.0 + frob(a_inv) * frob(b_inv)) ** m
            * frob(x)
        )
        detail = {"n": n, "m": m}
        for tkind in TransformKind:
            lhs = transform(tkind, b_inv, a_inv, x, m)
            rhs = (-1) ** m * power(b_inv, m) @ transform(tkind, b, a, x, m) @ power(a_inv, m)
            checks.append(
                (f"inverse_identity_{tkind.value}", frob(lhs - rhs), _zt(policy, scale), detail)
            )
    else:
        n = _dim(rng, 2, cfg.dim_max)
        m = _dim(rng, 1, cfg.order_max)
        a = random_invertible(n, rng, "reciprocal")
        sel = PairSelector.DRAZIN_ADJOINT if trial & 4 else PairSelector.DRAZIN
        b = resolve_pair(a, sel, policy)
        tkind = TransformKind.TRIANGLE if trial & 8 else TransformKind.DELTA
        a_inv, b_inv = inverse(a, policy), inverse(b, policy)
        detail = {"selector": sel.value, "kind": tkind.value, "m": m, "n": n}
        fwd = kernel(tkind, b, a, m, policy)
        if fwd.dim == 0:
            raise _Skip("empty kernel on invertible pair")
        x = fwd.sample(rng)
        checks.append(
            (
                "inverse_pair_forward",
                frob(transform(tkind, b_inv, a_inv, x, m)),
                defect_threshold(policy, b_inv, a_inv, x, m),
                detail,
            )
        )
        bwd = kernel(tkind, b_inv, a_inv, m, policy)
        if bwd.dim == 0:
            raise _Skip("empty kernel on inverted pair")
        x2 = bwd.sample(rng)
        checks.append(
            (
                "inverse_pair_backward",
                frob(transform(tkind, b, a, x2, m)),
                defect_threshold(policy, b, a, x2, m),
                detail,
            )
        )
    return checks


def _quad_params(rng, cfg):
    qa = _dim(rng, 1, min(2, cfg.order_max))
    qb = _dim(rng, 1, min(2, cfg.order_max))
    hi_core = max(2, min(3, cfg.dim_max - 2))
    nca = _dim(rng, qa, max(qa, hi_core))
    ncb = _dim(rng, qb, max(qb, hi_core))
    rest = max(0, cfg.dim_max - nca - ncb)
    nna = _dim(rng, 0, min(2, rest))
    nnb = _dim(rng, 0, min(2, max(0, rest - nna)))
    m = _dim(rng, 1, cfg.order_max)
    n = _dim(rng, 1, cfg.order_max)
    return dict(dims=(nca, ncb, nna, nnb), qa=qa, qb=qb, m=m, n=n)


def _conclusion_checks(policy, a, b, x, y, m, n, *, pairs, detail):
    """Evaluate delta/triangle conclusions at order m + n - 1.

    ``pairs`` lists (clause, kind, Bop, Aop, weight).
    """
    order = m + n - 1
    out = []
    for clause, kind, bop, aop, w in pairs:
        d = transform(kind, bop, aop, w, order)
        out.append((clause, frob(d), defect_threshold(policy, bop, aop, w, order), detail))
    return out


def _trial_prop2(cfg, rng, extras, trial):
    policy = cfg.policy
    flavor = trial % 3
    if flavor == 0:
        params = _quad_params(rng, cfg)
        inst = make_commuting_quadruple(rng, policy, flavor="delta", conjugate=bool(trial & 4), **params)
        a, b, x, y = (inst.matrices[k] for k in "ABXY")
        m, n = inst.meta["m"], inst.meta["n"]
        xy = x @ y
        detail = {"flavor": "product-sum", **{k: inst.meta[k] for k in ("dims", "m", "n")}}
        return _conclusion_checks(
            policy,
            a,
            b,
            x,
            y,
            m,
            n,
            pairs=[
                ("product_selfadjoint", TransformKind.DELTA, adjoint(a) @ adjoint(b), a @ b, xy),
                ("sum_selfadjoint", TransformKind.DELTA, adjoint(a) + adjoint(b), a + b, xy),
            ],
            detail=detail,
        )
    placement = "disjoint" if flavor == 1 else "power"
    qa = _dim(rng, 2 if placement == "power" else 1, min(2, max(cfg.order_max, 2)))
    na = _dim(rng, max(qa, 2), max(qa, 3))
    nb = _dim(rng, 1, 2)
    m = _dim(rng, 1, cfg.order_max)
    inst = make_nilpotent_perturbation(
        rng, policy, flavor="delta", na=na, nb=nb, qa=qa, m=m, nil_placement=placement,
        conjugate=bool(trial & 4),
    )
    a, x, nmat = inst.matrices["A"], inst.matrices["X"], inst.matrices["N"]
    q = inst.meta["q"]
    order = m + q - 1
    d = delta(adjoint(a), a + nmat, x, order)
    detail = {"flavor": f"perturbation-{placement}", "m": m, "q": q}
    return [
        (
            "perturbed_adjoint",
            frob(d),
            defect_threshold(policy, adjoint(a), a + nmat, x, order),
            detail,
        )
    ]


def _trial_cor1(cfg, rng, extras, trial):
    policy = cfg.policy
    params = _quad_params(rng, cfg)
    inst = make_commuting_quadruple(
        rng, policy, flavor="delta", shared_weight=True, conjugate=bool(trial & 2), **params
    )
    a, b, x = inst.matrices["A"], inst.matrices["B"], inst.matrices["X"]
    m, n = inst.meta["m"], inst.meta["n"]
    detail = {"dims": inst.meta["dims"], "m": m, "n": n}
    return _conclusion_checks(
        policy,
        a,
        b,
        x,
        x,
        m,
        n,
        pairs=[
            ("product_shared_weight", TransformKind.DELTA, adjoint(a) @ adjoint(b), a @ b, x),
            ("sum_shared_weight", TransformKind.DELTA, adjoint(a) + adjoint(b), a + b, x),
        ],
        detail=detail,
    )


def _trial_remark1(cfg, rng, extras, trial):
    policy = cfg.policy
    flavor = trial % 3
    if flavor == 0:
        fams = (
            ("adjoint", "adjoint"),
            ("adjoint", "inverse"),
            ("inverse", "adjoint"),
            ("inverse", "inverse"),
        )[(trial // 3) % 4]
        qa = _dim(rng, 1, 2)
        qb = _dim(rng, 1, 2)
        na = _dim(rng, max(qa, 2), max(qa, cfg.dim_max // 2))
        nb = _dim(rng, max(qb, 2), max(qb, cfg.dim_max - na))
        m1 = _dim(rng, 1, cfg.order_max)
        m2 = _dim(rng, 1, cfg.order_max)
        inst = make_product_pairs(
            rng, policy, families=fams, na=na, nb=nb, qa=qa, qb=qb, m1=m1, m2=m2,
            conjugate=bool(trial & 8),
        )
        a1, b1, x1 = (inst.matrices[k] for k in ("A1", "B1", "X1"))
        a2, b2, x2 = (inst.matrices[k] for k in ("A2", "B2", "X2"))
        order = m1 + m2 - 1
        prod = triangle(b1 @ b2, a1 @ a2, x1 @ x2, order)
        detail = {"families": fams, "m1": m1, "m2": m2}
        return [
            (
                "product_pairs",
                frob(prod),
                defect_threshold(policy, b1 @ b2, a1 @ a2, x1 @ x2, order),
                detail,
            )
        ]
    placement = "disjoint" if flavor == 1 else "power"
    qa = _dim(rng, 2 if placement == "power" else 1, 2)
    na = _dim(rng, max(qa, 2), max(qa, 3))
    nb = _dim(rng, 1, 2)
    m = _dim(rng, 1, cfg.order_max)
    inst = make_nilpotent_perturbation(
        rng, policy, flavor="triangle", na=na, nb=nb, qa=qa, m=m,
        nil_placement=placement, conjugate=bool(trial & 8),
    )
    a, b, x, nmat = (inst.matrices[k] for k in ("A", "B", "X", "N"))
    q = inst.meta["q"]
    order = m + q - 1
    d = triangle(b, a + nmat, x, order)
    detail = {"flavor": f"perturbation-{placement}", "m": m, "q": q}
    return [
        (
            "perturbed_left_invertible",
            frob(d),
            defect_threshold(policy, b, a + nmat, x, order),
            detail,
        )
    ]


def _trial_remark2(cfg, rng, extras, trial):
    policy = cfg.policy
    flavor = trial % 3
    if flavor == 0:
        n = _dim(rng, 2, cfg.dim_max)
        m = _dim(rng, 1, cfg.order_max)
        a = _cgauss(rng, n, n)
        d = delta(a, a, eye(n), m)
        return [
            (
                "self_pair_identity_weight",
                frob(d),
                defect_threshold(policy, a, a, eye(n), m),
                {"n": n, "m": m},
            )
        ]
    if flavor == 1:
        n = _dim(rng, 2, cfg.dim_max)
        a = _cgauss(rng, n, n)
        d2 = selfadjoint_defect(a, eye(n), 2)
        # trace(delta^2 of I) = -||A - A*||_F^2 exactly: order-2 selfadjointness
        # forces selfadjointness, quantitatively.
        tau = complex(np.trace(d2))
        gap = abs(tau + frob(a - adjoint(a)) ** 2)
        scale = n * (1.0 + frob(a)) ** 2
        h = (a + adjoint(a)) / 2
        return [
            ("order2_trace_identity", gap, _zt(policy, scale), {"n": n}),
            (
                "selfadjoint_is_order2",
                frob(selfadjoint_defect(h, eye(n), 2)),
                defect_threshold(policy, adjoint(h), h, eye(n), 2),
                {"n": n},
            ),
        ]
    family = (trial // 3) % 4
    if family == 3:
        n1, n2, p = 0, _dim(rng, 2, 3), 2
        spectrum = "generic"
    else:
        n1 = _dim(rng, 1, cfg.dim_max - 2)
        n2, p = ((1, 1) if family == 1 else (2, 2))
        spectrum = "unitary" if family == 2 else "signs"
    inst = make_drazin_block(n1, n2, p, rng, policy, conjugate=True, spectrum=spectrum)
    a = inst.matrices["A"]
    a_d = drazin_inverse(a, policy)
    hyp = frob(delta(adjoint(a_d), a, eye(a.shape[0]), 2))
    if hyp > defect_threshold(policy, adjoint(a_d), a, eye(a.shape[0]), 2):
        raise _Skip(f"order-2 identity not satisfied (residual {hyp:.2e})")
    eigs = np.linalg.eigvals(a)
    on_circle_or_zero = max(
        (min(abs(lam), abs(abs(lam) - 1.0)) for lam in eigs), default=0.0
    )
    sign_membership = max(
        (min(abs(lam), abs(lam - 1.0), abs(lam + 1.0)) for lam in eigs), default=0.0
    )
    detail = {"family": spectrum if family != 3 else "nilpotent", "n": a.shape[0]}
    if sign_membership > EIGENVALUE_TOL:
        extras.setdefault("anomalies", []).append(
            {
                "trial": trial,
                "family": detail["family"],
                "eigenvalues": [[lam.real, lam.imag] for lam in eigs],
                "deviation_from_signs": sign_membership,
            }
        )
    return [("spectrum_unit_or_zero", on_circle_or_zero, EIGENVALUE_TOL, detail)]


def _trial_no_left_m_inv(cfg, rng, extras, trial):
    policy = cfg.policy
    spectrum = ("generic", "real", "unitary")[trial % 3]
    n1, n2, p = _draw_drazin_dims(rng, cfg, min_nil=1, min_p=1)
    inst = make_drazin_block(n1, n2, p, rng, policy, conjugate=bool(trial & 2), spectrum=spectrum)
    a = inst.matrices["A"]
    dd = core_nilpotent_decompose(a, policy)
    m = _dim(rng, 1, cfg.order_max)
    ident = eye(a.shape[0])
    checks = []
    for sel in (PairSelector.DRAZIN, PairSelector.DRAZIN_ADJOINT):
        b = resolve_pair(a, sel, policy)
        d = triangle(b, a, ident, m)
        bv = block_view(d, dd)
        sign = (-1) ** m
        detail = {"selector": sel.value, "m": m, "dim_nil": dd.dim_h2}
        checks.append(
            (
                "nil_block_identity",
                frob(bv.x22 - sign * eye(dd.dim_h2)),
                _zt(policy, condition(dd.s) * defect_scale(b, a, ident, m)),
                detail,
            )
        )
        shortfall = max(0.0, math.sqrt(dd.dim_h2) - 1e-6 - frob(d))
        checks.append(("defect_norm_floor", shortfall, 0.0, detail))
    return checks


def _trial_thm1(cfg, rng, extras, trial):
    policy = cfg.policy
    n2 = _dim(rng, 2, max(2, cfg.dim_max - 2))
    p = _dim(rng, 2, min(n2, max(2, cfg.order_max)))
    n1 = _dim(rng, 1, max(1, cfg.dim_max - n2))
    inst = make_drazin_block(n1, n2, p, rng, policy, conjugate=bool(trial & 2), spectrum="reciprocal")
    a = inst.matrices["A"]
    dd = core_nilpotent_decompose(a, policy)
    m = _dim(rng, 1, cfg.order_max)
    checks = []
    nonempty = 0
    for sel in _SELECTORS:
        b = resolve_pair(a, sel, policy)
        basis = kernel(TransformKind.TRIANGLE, b, a, m, policy)
        if basis.dim == 0:
            continue
        nonempty += 1
        cmat = resolve_pair(a, _PARTNER[sel], policy)
        detail = {"selector": sel.value, "m": m, "p": p, "kernel_dim": basis.dim}
        # basis elements are unit Frobenius norm, so one threshold covers all
        delta_thr = defect_threshold(policy, cmat, a, basis.basis[0], m)
        worst_block = 0.0
        worst_delta = 0.0
        for x in basis.basis:
            bv = block_view(x, dd)
            worst_block = max(worst_block, frob(bv.x12), frob(bv.x21), frob(bv.x22))
            worst_delta = max(worst_delta, frob(delta(cmat, a, x, m)))
        checks.append(("weight_block_structure", worst_block, OFFBLOCK_TOL, detail))
        checks.append(("triangle_implies_delta", worst_delta, delta_thr, detail))
    if nonempty == 0:
        raise _Skip("all four selector kernels were empty")
    return checks


def _trial_remark3(cfg, rng, extras, trial):
    policy = cfg.policy
    if trial % 2 == 0:
        spectrum = "real" if trial & 2 else "reciprocal"
        n1, n2, p = _draw_drazin_dims(rng, cfg, min_core=1, min_nil=1, min_p=1)
        inst = make_drazin_block(n1, n2, p, rng, policy, conjugate=bool(trial & 4), spectrum=spectrum)
        a = inst.matrices["A"]
        dd = core_nilpotent_decompose(a, policy)
        m = _dim(rng, 1, cfg.order_max)
        basis = kernel(TransformKind.DELTA, a, a, m, policy)
        if basis.dim == 0:
            raise _Skip("empty self-pair kernel")
        off = 0.0
        x22_max = 0.0
        for x in basis.basis:
            bv = block_view(x, dd)
            off = max(off, frob(bv.x12), frob(bv.x21))
            x22_max = max(x22_max, frob(bv.x22))
        detail = {"m": m, "p": p, "kernel_dim": basis.dim}
        return [
            ("offdiagonal_blocks_vanish", off, OFFBLOCK_TOL, detail),
            ("diagonal_converse_witness", max(0.0, WITNESS_FLOOR - x22_max), 0.0, detail),
        ]
    inst = make_remark3_counterexample(rng, policy)
    pos, neg = inst.meta["delta3"], inst.meta["triangle3"]
    detail = {"delta3": pos, "triangle3": neg}
    return [
        ("counterexample_positive_clause", pos, COUNTEREXAMPLE_POS, detail),
        ("counterexample_negative_clause", max(0.0, COUNTEREXAMPLE_NEG - neg), 0.0, detail),
    ]


def _trial_thm2(cfg, rng, extras, trial):
    policy = cfg.policy
    n2 = _dim(rng, 1, cfg.dim_max - 1)
    p = _dim(rng, 1, min(n2, cfg.order_max))
    n1 = _dim(rng, 1, cfg.dim_max - n2)
    m = _dim(rng, 1, cfg.order_max)
    inst = make_commuting_core_weight(
        rng, policy, n1=n1, n2=n2, p=p, m=m, conjugate=bool(trial & 2)
    )
    a = inst.matrices["A"]
    ident = eye(a.shape[0])
    order = m + 2 * p - 2
    checks = []
    detail = {"m": m, "p": p, "order": order}
    d = selfadjoint_defect(a, ident, order)
    checks.append(
        (
            "selfadjoint_at_order",
            frob(d),
            defect_threshold(policy, adjoint(a), a, ident, order),
            detail,
        )
    )
    if m == 2:
        sharp = 2 * p - 1
        d2 = selfadjoint_defect(a, ident, sharp)
        checks.append(
            (
                "selfadjoint_sharpened",
                frob(d2),
                defect_threshold(policy, adjoint(a), a, ident, sharp),
                {**detail, "order": sharp},
            )
        )
    return checks


def _trial_thm3(cfg, rng, extras, trial):
    policy = cfg.policy
    params = _quad_params(rng, cfg)
    inst = make_commuting_quadruple(
        rng, policy, flavor="triangle-drazin", conjugate=bool(trial & 2), **params
    )
    a, b, x, y = (inst.matrices[k] for k in "ABXY")
    m, n = inst.meta["m"], inst.meta["n"]
    xy = x @ y
    detail = {"dims": inst.meta["dims"], "m": m, "n": n, "xy_norm": inst.meta["xy_norm"]}
    return _conclusion_checks(
        policy,
        a,
        b,
        x,
        y,
        m,
        n,
        pairs=[
            ("product_selfadjoint", TransformKind.DELTA, adjoint(a) @ adjoint(b), a @ b, xy),
            ("sum_selfadjoint", TransformKind.DELTA, adjoint(a) + adjoint(b), a + b, xy),
        ],
        detail=detail,
    )


def _disjoint_params(rng, cfg):
    qa = _dim(rng, 1, min(2, cfg.order_max))
    qb = _dim(rng, 1, min(2, cfg.order_max))
    n1a = _dim(rng, qa, max(qa, 2))
    n1b = _dim(rng, qb, max(qb, 2))
    rest = max(0, cfg.dim_max - n1a - n1b)
    nsa = _dim(rng, 0, min(2, rest))
    nsb = _dim(rng, 0, min(2, max(0, rest - nsa)))
    m = _dim(rng, 1, cfg.order_max)
    n = _dim(rng, 1, cfg.order_max)
    return dict(dims=(n1a, nsa, n1b, nsb), qa=qa, qb=qb, m=m, n=n)


def _trial_thm4(cfg, rng, extras, trial):
    policy = cfg.policy
    params = _disjoint_params(rng, cfg)
    inst = make_disjoint_quadruple(
        rng, policy, flavor="triangle-drazin", conjugate=bool(trial & 2), **params
    )
    a, b, x, y = (inst.matrices[k] for k in "ABXY")
    m, n = inst.meta["m"], inst.meta["n"]
    xy = x @ y
    apb = a + b
    apb_d = drazin_inverse(apb, policy)
    order = m + n - 1
    detail = {"dims": inst.meta["dims"], "m": m, "n": n}
    checks = [
        (
            "sum_drazin_adjoint",
            frob(delta(adjoint(apb_d), apb, xy, order)),
            defect_threshold(policy, adjoint(apb_d), apb, xy, order),
            detail,
        )
    ]
    # cross-check the block formula for (A+B)_d inside A's own decomposition
    dd = core_nilpotent_decompose(a, policy)
    bb = block_view(b, dd)
    b_leak = max(frob(bb.x11), frob(bb.x12), frob(bb.x21))
    checks.append(
        ("b_vanishes_on_core", b_leak, _zt(policy, condition(dd.s) * max(1.0, frob(b))), detail)
    )
    t = block_view(apb, dd)
    checks.append(
        (
            "sum_block_diagonal",
            max(frob(t.x12), frob(t.x21)),
            _zt(policy, condition(dd.s) * max(1.0, frob(apb))),
            detail,
        )
    )
    formula = assemble_blocks(
        BlockView(
            inverse(t.x11, policy),
            np.zeros((dd.dim_h1, dd.dim_h2)),
            np.zeros((dd.dim_h2, dd.dim_h1)),
            drazin_inverse(t.x22, policy),
        ),
        dd,
    )
    scale = condition(dd.s) ** 2 * (1.0 + frob(apb_d) + frob(formula))
    checks.append(("drazin_block_formula", frob(apb_d - formula), _zt(policy, scale), detail))
    return checks


def _trial_thm5(cfg, rng, extras, trial):
    policy = cfg.policy
    params = _disjoint_params(rng, cfg)
    inst = make_disjoint_quadruple(
        rng, policy, flavor="triangle-adjoint", conjugate=bool(trial & 2), **params
    )
    a, b, x, y = (inst.matrices[k] for k in "ABXY")
    m, n = inst.meta["m"], inst.meta["n"]
    xy = x @ y
    apb = a + b
    apb_d = drazin_inverse(apb, policy)
    order = m + n - 1
    detail = {"dims": inst.meta["dims"], "m": m, "n": n}
    return [
        (
            "sum_isometric",
            frob(triangle(adjoint(apb), apb, xy, order)),
            defect_threshold(policy, adjoint(apb), apb, xy, order),
            detail,
        ),
        (
            "sum_drazin_adjoint",
            frob(delta(adjoint(apb_d), apb, xy, order)),
            defect_threshold(policy, adjoint(apb_d), apb, xy, order),
            detail,
        ),
    ]


_SUITES = {
    "drazin_axioms": _trial_drazin_axioms,
    "prop1": _trial_prop1,
    "prop2": _trial_prop2,
    "cor1": _trial_cor1,
    "remark1": _trial_remark1,
    "remark2": _trial_remark2,
    "no_left_m_inv": _trial_no_left_m_inv,
    "thm1": _trial_thm1,
    "remark3": _trial_remark3,
    "thm2": _trial_thm2,
    "thm3": _trial_thm3,
    "thm4": _trial_thm4,
    "thm5": _trial_thm5,
}

_LANE = {name: i for i, name in enumerate(sorted(_SUITES))}


def available_suites() -> tuple[str, ...]:
    return tuple(_SUITES)


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    if cfg.suite not in _SUITES:
        raise UnknownSuite(
            f"unknown suite {cfg.suite!r}; available: {', '.join(_SUITES)}"
        )
    trial_fn = _SUITES[cfg.suite]
    failures: list[TrialFailure] = []
    extras: dict = {}
    passes = skips = genfails = 0
    max_residual = 0.0
    max_ratio = 0.0
    for t in range(cfg.trials):
        rng = rng_for(cfg.seed, _LANE[cfg.suite], t)
        try:
            checks = trial_fn(cfg, rng, extras, t)
        except _Skip:
            skips += 1
            continue
        except (GenerationFailed, IllConditioned, Singular) as exc:
            genfails += 1
            skips += 1
            extras.setdefault("generation_errors", []).append(
                {"trial": t, "error": str(exc)}
            )
            continue
        ok = True
        for clause, residual, threshold, detail in checks:
            residual = float(residual)
            max_residual = max(max_residual, residual)
            if threshold > 0:
                max_ratio = max(max_ratio, residual / threshold)
            if residual > threshold:
                ok = False
                failures.append(TrialFailure(t, clause, residual, float(threshold), detail))
        passes += ok
    if skips > cfg.trials // 2:
        failures.append(
            TrialFailure(
                -1,
                "skip_budget_exceeded",
                float(skips),
                cfg.trials / 2,
                {"skips": skips, "generation_failures": genfails},
            )
        )
    report = SuiteReport(
        suite=cfg.suite,
        config=cfg,
        trials=cfg.trials,
        passes=passes,
        skips=skips,
        generation_failures=genfails,
        failures=failures,
        max_residual=max_residual,
        max_ratio=max_ratio,
        anomalies=extras.get("anomalies", []),
    )
    return report
