"""The mirroring pipeline: move determinantal roots across the unit circle.

One step takes a real matrix polynomial ``p`` and a root record, plans the
kernel geometry, builds the matching all-pass factor ``V``, and returns

    p_tilde = p Q blockdiag(V, I)

with the factor's denominator divided back out of the transformed columns,
so the output is again a real matrix polynomial of no higher degree.  The
boundary product ``p(z) p(1/conj z)^H`` is untouched while the selected root
moves from ``alpha`` to ``1/alpha``.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .blaschke import b2_consecutive, b2_polynomial, elementary, squared
from .config import DEFAULTS
from .errors import (
    DeconvolutionResidueTooLarge,
    OnUnitCircle,
    SelectionNotClosed,
)
from .polymat import PolyMatrix, _conv_coeffs, _divide_coeffs, spectral_eval, trim
from .roots import (
    CASE_DEGENERATE,
    CASE_REAL,
    KIND_COMPLEX,
    KIND_REAL,
    LOCATION_INSIDE,
    LOCATION_ON_CIRCLE,
    RootRecord,
    classify,
    det_roots,
)
from .statespace import build_b2

__all__ = [
    "MirrorReport",
    "mirror_once",
    "mirror_set",
    "mirror_all_inside",
    "enumerate_selections",
]

METHODS = ("consecutive", "polynomial", "statespace")


@dataclasses.dataclass
class MirrorReport:
    """Residual bookkeeping for one mirroring step.

    mirrored_roots
        The root values moved in this step (both members for a pair).
    residual_deconv
        Largest remainder left by dividing out the factor denominator,
        relative to the largest dividend coefficient.
    max_imag
        Imaginary residue of the factor's numerator before projection to
        real coefficients (zero for the real-arithmetic constructions).
    spectral_dev
        Largest deviation of the boundary product from the input's,
        normalized by the largest boundary product magnitude, over 64
        circle samples.
    new_root_residual
        ``sigma_min(p_tilde(1/alpha))`` normalized by
        ``||p_tilde|| * max(1, |1/alpha|)^degree`` (the natural size of an
        evaluation there); small means the root really relocated.
    """

    mirrored_roots: list
    method: str
    residual_deconv: float
    max_imag: float
    spectral_dev: float
    new_root_residual: float
    degree_in: int
    degree_out: int


def _spectral_deviation(p_new, p_old, n_samples: int = 64) -> float:
    zs = np.exp(2j * np.pi * np.arange(n_samples) / n_samples)
    dev = 0.0
    scale = 0.0
    for z in zs:
        s_old = spectral_eval(p_old, z)
        s_new = spectral_eval(p_new, z)
        dev = max(dev, float(np.linalg.norm(s_new - s_old)))
        scale = max(scale, float(np.linalg.norm(s_old)))
    return dev / max(scale, np.finfo(float).tiny)


def _relocation_residual(p_new, targets) -> float:
    worst = 0.0
    scale = p_new.norm()
    for beta in targets:
        M = np.atleast_2d(np.asarray(p_new(beta)))
        sig = np.linalg.svd(M, compute_uv=False)
        denom = max(scale * max(1.0, abs(beta)) ** p_new.degree, np.finfo(float).tiny)
        worst = max(worst, float(sig[-1]) / denom)
    return worst


def mirror_once(
    p: PolyMatrix,
    record: RootRecord,
    method: str = "polynomial",
    tol=DEFAULTS,
):
    """Mirror one copy of one root (or conjugate pair) of ``p``.

    Multiplicity on the record is ignored here: one factor application moves
    one copy, and repeated copies need the kernel recomputed in between (see
    :func:`mirror_set`).

    Parameters
    ----------
    p : PolyMatrix
    record : RootRecord
        Root to mirror; must be off the unit circle.
    method : {"consecutive", "polynomial", "statespace"}
        Construction used for a generic complex pair; real and degenerate
        roots always take the scalar factors.

    Returns
    -------
    (PolyMatrix, MirrorReport)

    Raises
    ------
    OnUnitCircle, NotARoot, DegenerateW
    DeconvolutionResidueTooLarge
        If dividing out the factor denominator leaves a remainder far above
        noise, which means the root structure did not match the factor.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    plan = classify(p, record, tol_kernel=tol.kernel, tol_degenerate=tol.degenerate)

    if plan.case == CASE_REAL:
        V = elementary(plan.alpha.real)
        mirrored = [plan.alpha]
        targets = [1.0 / plan.alpha.real]
    elif plan.case == CASE_DEGENERATE:
        V = squared(plan.alpha)
        mirrored = [plan.alpha, np.conj(plan.alpha)]
        targets = [1.0 / plan.alpha]
    else:
        if method == "consecutive":
            V = b2_consecutive(plan.alpha, plan.R, tol_real=tol.real)
        elif method == "polynomial":
            V = b2_polynomial(plan.alpha, plan.w, tol_degenerate=tol.degenerate)
        else:
            _, V = build_b2(
                plan.alpha, plan.w,
                tol_degenerate=tol.degenerate, tol_circle=tol.circle,
            )
        mirrored = [plan.alpha, np.conj(plan.alpha)]
        targets = [1.0 / plan.alpha]

    k = V.dim
    pq = np.matmul(p.coeffs, plan.Q)
    block = pq[:, :, :k]
    rest = pq[:, :, k:]

    raw = _conv_coeffs(block, V.num.coeffs)
    quot, resid_abs = _divide_coeffs(raw, V.den.coeffs)
    resid = resid_abs / max(1.0, float(np.max(np.abs(raw))))
    if resid > 1e-6:
        raise DeconvolutionResidueTooLarge(
            f"dividing out the factor denominator left relative remainder "
            f"{resid:.3e}; the selected root does not match the factor"
        )

    assembled = np.concatenate([quot, rest], axis=2)
    p_new = trim(PolyMatrix(assembled))

    report = MirrorReport(
        mirrored_roots=[complex(x) for x in mirrored],
        method=V.method,
        residual_deconv=resid,
        max_imag=V.max_imag_pre,
        spectral_dev=_spectral_deviation(p_new, p),
        new_root_residual=_relocation_residual(p_new, targets),
        degree_in=p.degree,
        degree_out=p_new.degree,
    )
    return p_new, report


def _validate_selection(selection):
    for rec in selection:
        if rec.multiplicity < 1:
            raise SelectionNotClosed(
                f"record for {rec.alpha} has multiplicity {rec.multiplicity}"
            )
        if rec.kind == KIND_COMPLEX and rec.alpha.imag <= 0:
            raise SelectionNotClosed(
                f"complex record must carry the upper-half-plane member, "
                f"got {rec.alpha}"
            )
        if rec.kind == KIND_REAL and rec.alpha.imag != 0:
            raise SelectionNotClosed(
                f"real record has nonzero imaginary part: {rec.alpha}"
            )


def mirror_set(
    p: PolyMatrix,
    selection,
    method: str = "polynomial",
    tol=DEFAULTS,
):
    """Mirror every root in a selection, one copy at a time.

    Records are processed in ascending ``|alpha|`` (ties by real then
    imaginary part) and a record of multiplicity m is applied m times, with
    the kernel recomputed from the current polynomial before each copy.

    Returns the final polynomial and the reports of every step.
    """
    _validate_selection(selection)
    ordered = sorted(
        selection, key=lambda r: (abs(r.alpha), r.alpha.real, r.alpha.imag)
    )
    current = p
    reports = []
    for rec in ordered:
        for _ in range(rec.multiplicity):
            single = dataclasses.replace(rec, multiplicity=1)
            current, rep = mirror_once(current, single, method=method, tol=tol)
            reports.append(rep)
    return current, reports


def mirror_all_inside(
    p: PolyMatrix,
    method: str = "polynomial",
    tol=DEFAULTS,
):
    """Mirror until no determinantal root remains inside the unit circle.

    Roots are re-detected after every step (multiplicities fall away one
    copy at a time) and the smallest ``|alpha|`` goes first.

    Raises
    ------
    OnUnitCircle
        If a root sits on the circle, where no mirror exists.
    """
    current = p
    reports = []
    max_steps = current.dim * max(current.degree, 1) + 4
    for _ in range(max_steps):
        records = det_roots(
            current, tol_imag=tol.imag, cluster_rtol=tol.cluster, tol_circle=tol.circle
        )
        for rec in records:
            if rec.location == LOCATION_ON_CIRCLE:
                raise OnUnitCircle(
                    f"root {rec.alpha} lies on the unit circle; "
                    "mirroring cannot move it"
                )
        inside = [r for r in records if r.location == LOCATION_INSIDE]
        if not inside:
            return current, reports
        single = dataclasses.replace(inside[0], multiplicity=1)
        current, rep = mirror_once(current, single, method=method, tol=tol)
        reports.append(rep)
    raise RuntimeError(
        "mirroring did not terminate; root detection is likely unstable here"
    )


def enumerate_selections(records):
    """All subsets of a root record list, including the empty selection.

    With ``m_r`` real and ``m_c`` complex-pair records this is
    ``2**(m_r + m_c)`` selections; multiplicities are not expanded
    (a record is either taken, with all its copies, or left).
    """
    records = list(records)
    K = len(records)
    if K > 16:
        raise ValueError(f"{K} records would enumerate {2**K} selections")
    out = []
    for mask in range(1 << K):
        out.append([records[i] for i in range(K) if (mask >> i) & 1])
    return out
