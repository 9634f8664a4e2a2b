"""Verification sweeps over the K-type lattice, producing machine-readable
reports.

Each sweep returns a list of check dicts with the schema

    {check, status: PASS|FAIL|WARN, max_residual, tolerance, ...detail}

``run_verification`` assembles the full suite for one parameter set; the
expected coefficient differences against the published Heisenberg-ladder
table are reported as WARN, never FAIL.
"""

from __future__ import annotations

import numpy as np

from .admissibility import ParameterSet, enumerate_admissible, radial_pairs
from .config import DEFAULT_FD, DEFAULT_TOLERANCES, FDConfig, Tolerances
from .hypergeometric import contiguous_residual_scaled, RELATIONS
from .ktypes import periodicity_residual, to_noncompact
from .operators import (
    GroupElement,
    OperatorSpec,
    apply_eta,
    apply_kappa,
    eta_coefficient,
    fd_apply,
    group_parameter_derivative,
    ktype_steps,
    pde_residual_noncompact,
    recover_E_coefficients,
)
from .polynomials import harmonic_basis, harmonic_dimension, laplacian, decompose_yj
from .structure import heisenberg_targets, ktype_lattice


def _status(max_residual: float, tolerance: float) -> str:
    return "PASS" if max_residual <= tolerance else "FAIL"


def sample_compact_points(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Seeded (theta, y) samples with rho in [0.2, 2.0], theta in [-1.2, 1.2]."""
    theta = rng.uniform(-1.2, 1.2, count)
    dirs = rng.normal(size=(count, n))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    rho = rng.uniform(0.2, 2.0, count)
    return np.concatenate([theta[:, None], rho[:, None] * dirs], axis=1)


def sample_noncompact_points(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Seeded (t, x) samples with |x| in [0.3, 2.0], t in [-1.2, 1.2]."""
    t = rng.uniform(-1.2, 1.2, count)
    dirs = rng.normal(size=(count, n))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    nx = rng.uniform(0.3, 2.0, count)
    return np.concatenate([t[:, None], nx[:, None] * dirs], axis=1)


def sweep_contiguous(
    samples: int = 1000,
    seed: int = 20240,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[dict]:
    """Residuals of all seven contiguous relations on seeded random samples.

    a, b complex with |a|, |b| <= 20, b kept 0.1 away from {1, 0, -1, ...}
    (so every shifted denominator parameter stays valid), |z| <= 10.
    """
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < samples:
        a = complex(rng.uniform(-20, 20), rng.uniform(-20, 20)) / np.sqrt(2)
        b = complex(rng.uniform(-20, 20), rng.uniform(-20, 20)) / np.sqrt(2)
        z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10)) / np.sqrt(2)
        dist = min(abs(b - 1), min(abs(b + j) for j in range(0, 25)))
        if dist < 0.1:
            continue
        pts.append((a, b, z))
    checks = []
    for name in RELATIONS:
        worst = 0.0
        for a, b, z in pts:
            res, scale = contiguous_residual_scaled(name, a, b, z, tol)
            worst = max(worst, abs(res) / scale)
        checks.append(
            {
                "check": f"contiguous/{name}",
                "points": len(pts),
                "max_residual": worst,
                "tolerance": tol.contiguous,
                "status": _status(worst, tol.contiguous),
            }
        )
    return checks


def sweep_harmonicity(n_max: int = 5, k_max: int = 6) -> list[dict]:
    """Exact-arithmetic checks: harmonicity, dimensions, decomposition."""
    checks = []
    ok_harm = True
    ok_dim = True
    ok_split = True
    for n in range(1, n_max + 1):
        for k in range(0, k_max + 1):
            if n == 1 and k > 1:
                continue
            basis = harmonic_basis(n, k)
            if len(basis) != harmonic_dimension(n, k):
                ok_dim = False
            for h in basis:
                if not laplacian(h.poly).is_zero():
                    ok_harm = False
                from .polynomials import Polynomial

                rho2 = Polynomial.radius_squared(n)
                for j in range(n):
                    h_plus, c = decompose_yj(h, j)
                    lhs = Polynomial.variable(n, j) * h.poly
                    rhs = h_plus.poly + rho2.scale(c) * h.poly.partial(j)
                    if lhs != rhs:
                        ok_split = False
    checks.append(
        {
            "check": "harmonic/laplacian-kernel",
            "max_residual": 0.0 if ok_harm else 1.0,
            "tolerance": 0.0,
            "status": "PASS" if ok_harm else "FAIL",
        }
    )
    checks.append(
        {
            "check": "harmonic/dimension-formula",
            "max_residual": 0.0 if ok_dim else 1.0,
            "tolerance": 0.0,
            "status": "PASS" if ok_dim else "FAIL",
        }
    )
    checks.append(
        {
            "check": "harmonic/yj-decomposition",
            "max_residual": 0.0 if ok_split else 1.0,
            "tolerance": 0.0,
            "status": "PASS" if ok_split else "FAIL",
        }
    )
    return checks


def sweep_periodicity(
    params: ParameterSet,
    lam_max=30,
    m_max: int = 14,
    points: int = 20,
    seed: int = 20241,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> list[dict]:
    """Compact-picture periodicity for every constructed K-type, j in 1..4."""
    rng = np.random.default_rng(seed)
    lattice = ktype_lattice(params, lam_max, m_max, include_zero_family=True)
    P = sample_compact_points(params.n, points, rng)
    worst = 0.0
    for F in lattice:
        for j in (1, 2, 3, 4):
            res = periodicity_residual(F, P[:, 0], P[:, 1:], j, tol)
            scale = np.maximum(1.0, np.abs(F.eval_compact(P[:, 0], P[:, 1:], tol)))
            worst = max(worst, float(np.max(np.abs(res) / scale)))
    return [
        {
            "check": "ktypes/periodicity",
            "ktypes": len(lattice),
            "points": points,
            "max_residual": worst,
            "tolerance": tol.periodicity,
            "status": _status(worst, tol.periodicity),
        }
    ]


def sweep_pde_kernel(
    params: ParameterSet,
    lam_max=60,
    m_max: int = 30,
    points: int = 50,
    seed: int = 20242,
    tol: Tolerances = DEFAULT_TOLERANCES,
    fd: FDConfig = DEFAULT_FD,
) -> list[dict]:
    """Non-compact PDE residual of every lattice K-type at seeded points."""
    rng = np.random.default_rng(seed)
    lattice = ktype_lattice(params, lam_max, m_max)
    P = sample_noncompact_points(params.n, points, rng)
    worst = 0.0
    worst_index = None
    for F in lattice:
        f = to_noncompact(F, tol)
        steps = ktype_steps(F, P, "noncompact", fd)
        res = pde_residual_noncompact(f, float(F.lam.value), params.s, P, steps=steps, fd=fd)
        scale = np.maximum(1.0, np.abs(f.batch(P)))
        rel = float(np.max(np.abs(res) / scale))
        if rel > worst:
            worst, worst_index = rel, (F.m, F.l, F.k)
    return [
        {
            "check": "operators/pde-kernel",
            "ktypes": len(lattice),
            "points": points,
            "worst_index": list(worst_index) if worst_index else None,
            "max_residual": worst,
            "tolerance": tol.pde_residual,
            "status": _status(worst, tol.pde_residual),
        }
    ]


def sweep_ladder(
    params: ParameterSet,
    lam_max=60,
    m_max: int = 30,
    points: int = 20,
    seed: int = 20243,
    tol: Tolerances = DEFAULT_TOLERANCES,
    fd: FDConfig = DEFAULT_FD,
) -> list[dict]:
    """kappa and eta closed forms against the finite-difference oracle.

    Also asserts the exact boundary kills: the eta coefficient vanishes if
    and only if m is at the corresponding boundary weight +-(2k+4l+n).
    """
    rng = np.random.default_rng(seed)
    lattice = ktype_lattice(params, lam_max, m_max, include_zero_family=True)
    P = sample_compact_points(params.n, points, rng)
    worst = 0.0
    kills_ok = True
    for F in lattice:
        fc = F.compact_function(tol)
        steps = ktype_steps(F, P, "compact", fd)
        scale = np.maximum(1.0, np.abs(F.eval_compact(P[:, 0], P[:, 1:], tol)))
        closed = apply_kappa(F).eval_compact(P[:, 0], P[:, 1:], tol)
        oracle = fd_apply(OperatorSpec.kappa(params), fc, P, steps=steps, fd=fd)
        worst = max(worst, float(np.max(np.abs(closed - oracle) / scale)))
        boundary = 2 * F.k + 4 * F.l + params.n
        for sign in (1, -1):
            combo = apply_eta(F, sign)
            closed = combo.eval_compact(P[:, 0], P[:, 1:], tol)
            oracle = fd_apply(OperatorSpec.eta(params, sign), fc, P, steps=steps, fd=fd)
            worst = max(worst, float(np.max(np.abs(closed - oracle) / scale)))
            killed = eta_coefficient(F, sign) == 0
            at_boundary = F.m == -sign * boundary
            if killed != at_boundary or killed != combo.is_empty():
                kills_ok = False
    return [
        {
            "check": "operators/ladder-closed-form",
            "ktypes": len(lattice),
            "points": points,
            "max_residual": worst,
            "tolerance": tol.ladder_match,
            "status": _status(worst, tol.ladder_match),
        },
        {
            "check": "operators/eta-boundary-kills",
            "max_residual": 0.0 if kills_ok else 1.0,
            "tolerance": 0.0,
            "status": "PASS" if kills_ok else "FAIL",
        },
    ]


def sweep_heisenberg(
    params: ParameterSet,
    lam_max=30,
    m_max: int = 10,
    points: int = 40,
    seed: int = 20244,
    tol: Tolerances = DEFAULT_TOLERANCES,
    fd: FDConfig = DEFAULT_FD,
) -> list[dict]:
    """Least-squares recovery of the E_j coefficients, with the WARN diff
    against the published table and the eigenvalue-shift bookkeeping."""
    rng = np.random.default_rng(seed)
    lattice = ktype_lattice(params, lam_max, m_max)
    P = sample_compact_points(params.n, points, rng)
    worst_lsq = 0.0
    worst_rational = 0.0
    shipped_ok = True
    printed_diffs = 0
    recoveries = 0
    shift_ok = True
    details = []
    for F in lattice:
        targets = {(l2, k2): lam2 for l2, k2, lam2 in heisenberg_targets(params.n, F.l, F.k)}
        lam = F.lam.value
        edge = 2 * F.l + 2 * F.k + params.n - 2
        for (l2, k2), lam2 in targets.items():
            shift = lam2 - lam
            if abs(l2 - F.l) == 1:
                if abs(shift) != edge:
                    shift_ok = False
            elif shift != 0 and abs(shift) != 2 * F.l:
                shift_ok = False
        for j in range(1, params.n + 1):
            for sign in (1, -1):
                rec = recover_E_coefficients(F, j, sign, P, tol, fd)
                recoveries += 1
                worst_lsq = max(worst_lsq, rec.lsq_residual)
                worst_rational = max(
                    worst_rational, max(rec.rational_errors.values(), default=0.0)
                )
                if not rec.matches_shipped:
                    shipped_ok = False
                    details.append(rec.to_json())
                if not rec.matches_printed:
                    printed_diffs += 1
    checks = [
        {
            "check": "operators/heisenberg-lsq",
            "recoveries": recoveries,
            "points": points,
            "max_residual": worst_lsq,
            "tolerance": tol.lsq_residual,
            "status": _status(worst_lsq, tol.lsq_residual),
        },
        {
            "check": "operators/heisenberg-rational-coefficients",
            "max_residual": worst_rational,
            "tolerance": tol.coeff_match,
            "status": _status(worst_rational, tol.coeff_match),
        },
        {
            "check": "operators/heisenberg-shipped-match",
            "max_residual": 0.0 if shipped_ok else 1.0,
            "tolerance": 0.0,
            "status": "PASS" if shipped_ok else "FAIL",
            "failures": details,
        },
        {
            "check": "operators/eigenvalue-shifts",
            "max_residual": 0.0 if shift_ok else 1.0,
            "tolerance": 0.0,
            "status": "PASS" if shift_ok else "FAIL",
        },
    ]
    if printed_diffs:
        checks.append(
            {
                "check": "operators/printed-coefficient-diff",
                "count": printed_diffs,
                "max_residual": 0.0,
                "tolerance": 0.0,
                "status": "WARN",
                "note": (
                    "recovered lowering-operator coefficients differ from the "
                    "published table on the (l,k+1) and (l+1,k-1) entries; "
                    "expected and documented"
                ),
            }
        )
    return checks


def sweep_group_algebra(
    params: ParameterSet,
    points: int = 20,
    seed: int = 20245,
    tol: Tolerances = DEFAULT_TOLERANCES,
    fd: FDConfig = DEFAULT_FD,
) -> list[dict]:
    """Derivative at identity of each one-parameter flow vs the algebra action."""
    rng = np.random.default_rng(seed)
    n = params.n
    lam_small = next(
        (ev for ev in enumerate_admissible(n, 20)), None
    )
    if lam_small is None:
        raise RuntimeError("no admissible eigenvalue below 20")
    l, k = radial_pairs(n, lam_small.value)[0]
    from .polynomials import harmonic_representative
    from .ktypes import make_ktype

    m = (params.q + 2 * k) % 4
    F = make_ktype(params, m, l, k, harmonic_representative(n, k))
    f = to_noncompact(F, tol)
    P = sample_noncompact_points(n, points, rng)
    steps = ktype_steps(F, P, "noncompact", fd)
    scale = np.maximum(1.0, np.abs(f.batch(P)))
    worst = 0.0

    sl2_families = [
        ("h", GroupElement.sl2_diag, (1, 0, 0)),
        ("e+", GroupElement.sl2_upper, (0, 1, 0)),
        ("e-", GroupElement.sl2_lower, (0, 0, 1)),
    ]
    for name, family, (al, be, ga) in sl2_families:
        flow = group_parameter_derivative(family, f, P, params.s, params.q, fd)
        alg = fd_apply(OperatorSpec.sl2(params, al, be, ga), f, P, steps=steps, fd=fd)
        worst = max(worst, float(np.max(np.abs(flow - alg) / scale)))

    basis = np.eye(n)
    heis_families = []
    for i in range(n):
        heis_families.append((basis[i], np.zeros(n), 0.0))
        heis_families.append((np.zeros(n), basis[i], 0.0))
    heis_families.append((np.zeros(n), np.zeros(n), 1.0))
    for u, v, w in heis_families:
        family = lambda tau, _u=u, _v=v, _w=w: GroupElement.heisenberg(tau * _u, tau * _v, tau * _w)
        flow = group_parameter_derivative(family, f, P, params.s, params.q, fd)
        alg = fd_apply(OperatorSpec.heisenberg(params, u, v, w), f, P, steps=steps, fd=fd)
        worst = max(worst, float(np.max(np.abs(flow - alg) / scale)))

    # O(n) rotations: derivative of f(t, R(-tau) x) is (x_b d_a - x_a d_b) f
    for a_ax in range(n):
        for b_ax in range(a_ax + 1, n):
            def rot(tau, _a=a_ax, _b=b_ax):
                R = np.eye(n)
                R[_a, _a] = R[_b, _b] = np.cos(tau)
                R[_a, _b] = -np.sin(tau)
                R[_b, _a] = np.sin(tau)
                return GroupElement.orthogonal(R)

            flow = group_parameter_derivative(rot, f, P, params.s, params.q, fd)
            from .operators import fd_first

            alg = P[:, 1 + b_ax] * fd_first(f, P, 1 + a_ax, steps[:, 1 + a_ax], fd) - P[
                :, 1 + a_ax
            ] * fd_first(f, P, 1 + b_ax, steps[:, 1 + b_ax], fd)
            worst = max(worst, float(np.max(np.abs(flow - alg) / scale)))

    return [
        {
            "check": "operators/group-vs-algebra",
            "points": points,
            "max_residual": worst,
            "tolerance": tol.group_match,
            "status": _status(worst, tol.group_match),
        }
    ]


def run_verification(
    params: ParameterSet,
    lam_max=30,
    m_max: int = 14,
    seed: int = 2024,
    tol: Tolerances = DEFAULT_TOLERANCES,
    fd: FDConfig = DEFAULT_FD,
    contiguous_samples: int = 200,
    pde_points: int = 20,
    heisenberg_m_max: int = 10,
) -> dict:
    """The full invariant suite for one parameter set.

    Returns a report dict with per-check entries and a summary; ``ok`` is
    true when no check FAILed (WARNs expected for the published-table diff).
    """
    checks: list[dict] = []
    checks += sweep_contiguous(contiguous_samples, seed, tol)
    checks += sweep_harmonicity(min(params.n + 1, 4), 4)
    checks += sweep_periodicity(params, lam_max, m_max, 20, seed + 1, tol)
    checks += sweep_pde_kernel(params, lam_max, m_max, pde_points, seed + 2, tol, fd)
    checks += sweep_ladder(params, lam_max, m_max, 20, seed + 3, tol, fd)
    checks += sweep_heisenberg(params, min(lam_max, 30), heisenberg_m_max, 40, seed + 4, tol, fd)
    checks += sweep_group_algebra(params, 20, seed + 5, tol, fd)
    counts = {"PASS": 0, "FAIL": 0, "WARN": 0}
    for c in checks:
        counts[c["status"]] += 1
    # no timing in the payload: reports are byte-identical for a fixed seed
    return {
        "params": {
            "n": params.n,
            "q": params.q,
            "s": [params.s.real, params.s.imag],
            "lam_max": str(lam_max),
            "m_max": m_max,
            "seed": seed,
        },
        "checks": checks,
        "summary": counts,
        "ok": counts["FAIL"] == 0,
    }
