"""Membership, projection, and complementarity certificates for the MESOC.

The monotone extended second-order cone (MESOC) in R^{p+q} is

    L(p, q)  = {(x, u) : x_1 >= x_2 >= ... >= x_p >= ||u||},
    L*(p, q) = {(y, v) : sum(y_1..y_j) >= 0 for j < p, sum(y) >= ||v||}.

Projecting onto L splits into three mutually exclusive regimes decided by
two scalar tests on the monotone-nonnegative projections of the x-part:

1. the dual part absorbs all of w          -> primal u-part is 0,
2. the primal part absorbs all of w        -> dual v-part is 0,
3. both parts are nonzero ("interior"): u and v are antiparallel multiples
   of w with ratio lambda, and lambda is recovered from one isotonic
   regression in dimension p+1 on the lifted vector (z, ||w||).

All three regimes cost O(p + q): a constant number of PAVA passes plus
vector arithmetic. Every projection is returned as a certificate carrying
both halves of the Moreau pair and their reconstruction residuals, so
callers can audit the result without trusting the case analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._pava import pava_nonincreasing_kernel
from .cones import DimensionError, as_vector

# below this fraction of ||w||, the lifted isotonic projection's last
# coordinate signals a misclassified interior case instead of a legitimate
# lambda; the ratio keeps the guard invariant under input scaling
_LIFT_DENOMINATOR_FLOOR = 1e-14


@dataclass(frozen=True)
class MesocPoint:
    """A point (x, u) in R^p x R^q, identified with the concatenation.

    q = 0 is allowed (empty u), in which case the cone degenerates to the
    monotone nonnegative cone in R^p.
    """

    x: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", as_vector(self.x, "x"))
        object.__setattr__(self, "u", as_vector(self.u, "u", allow_empty=True))

    @property
    def p(self) -> int:
        return self.x.size

    @property
    def q(self) -> int:
        return self.u.size

    @property
    def u_norm(self) -> float:
        return float(np.linalg.norm(self.u)) if self.u.size else 0.0

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.x, self.u])

    @classmethod
    def from_vector(cls, vec, p: int, q: int) -> "MesocPoint":
        vec = as_vector(vec, "vec")
        if p < 1 or q < 0:
            raise DimensionError(f"need p >= 1 and q >= 0, got p={p}, q={q}")
        if vec.size != p + q:
            raise DimensionError(f"vector has length {vec.size}, expected p + q = {p + q}")
        return cls(vec[:p], vec[p:])


class ProjectionCase(Enum):
    """Which regime of the three-way projection analysis applied."""

    DUAL_DOMINATES = "DualDominates"
    PRIMAL_DOMINATES = "PrimalDominates"
    INTERIOR = "Interior"


@dataclass(frozen=True)
class ProjectionCertificate:
    """Moreau pair for one projection onto the MESOC.

    `primal` is the projection of the input onto the cone, `dual_of_neg`
    the projection of the negated input onto the dual cone. The residuals
    record how well primal - dual_of_neg reconstructs the input and how
    orthogonal the two halves are. `lam` is populated only in the interior
    case (antiparallel ratio v = -lam * u).
    """

    input: MesocPoint
    primal: MesocPoint
    dual_of_neg: MesocPoint
    case: ProjectionCase
    lam: float | None
    moreau_additive_residual: float
    moreau_orthogonality_residual: float

    def to_dict(self) -> dict:
        return {
            "p": self.input.p,
            "q": self.input.q,
            "input": self.input.as_vector().tolist(),
            "primal": self.primal.as_vector().tolist(),
            "dual_of_neg": self.dual_of_neg.as_vector().tolist(),
            "case": self.case.value,
            "lambda": self.lam,
            "moreau_additive_residual": self.moreau_additive_residual,
            "moreau_orthogonality_residual": self.moreau_orthogonality_residual,
        }


def mesoc_contains(pt: MesocPoint, tol: float = 0.0) -> bool:
    """True iff x is nonincreasing and x_p >= ||u||, within tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    x = pt.x
    if not np.all(np.diff(x) <= tol):
        return False
    return bool(x[-1] >= pt.u_norm - tol)


def mesoc_dual_contains(pt: MesocPoint, tol: float = 0.0) -> bool:
    """True iff all proper prefix sums of y are >= 0 and sum(y) >= ||v||, within tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    prefixes = np.cumsum(pt.x)
    if not np.all(prefixes[:-1] >= -tol):
        return False
    return bool(prefixes[-1] >= pt.u_norm - tol)


def mesoc_violation(pt: MesocPoint) -> float:
    """Largest violation of the cone inequalities (0 for members)."""
    x = pt.x
    return float(max(0.0, np.max(np.diff(x), initial=0.0), pt.u_norm - x[-1]))


def mesoc_dual_violation(pt: MesocPoint) -> float:
    prefixes = np.cumsum(pt.x)
    return float(
        max(0.0, -np.min(prefixes[:-1], initial=0.0), pt.u_norm - prefixes[-1])
    )


def _project_parts(z: np.ndarray, w: np.ndarray):
    """Shared three-case analysis; returns (x, u, y, v, case, lam)."""
    w_norm = float(np.linalg.norm(w)) if w.size else 0.0

    primal_x = np.maximum(pava_nonincreasing_kernel(z), 0.0)
    dual_y = primal_x - z  # P_{K*}(-z) = -z + P_K(z), K = monotone nonnegative

    if w_norm == 0.0:
        # includes q = 0; the primal keeps (a zero) w and the dual drops it
        return primal_x, w.copy(), dual_y, np.zeros_like(w), ProjectionCase.PRIMAL_DOMINATES, None
    if float(np.sum(dual_y)) >= w_norm:
        return primal_x, np.zeros_like(w), dual_y, -w, ProjectionCase.DUAL_DOMINATES, None
    if float(primal_x[-1]) >= w_norm:
        return primal_x, w.copy(), dual_y, np.zeros_like(w), ProjectionCase.PRIMAL_DOMINATES, None

    # interior: recover lambda from the lifted isotonic projection of (z, ||w||)
    lifted = np.maximum(pava_nonincreasing_kernel(np.append(z, w_norm)), 0.0)
    denom = float(lifted[-1])
    if denom < _LIFT_DENOMINATOR_FLOOR * w_norm:
        raise RuntimeError(
            "lifted isotonic projection has vanishing last coordinate; "
            "case classification is inconsistent (this indicates a bug or a "
            "pathologically degenerate input)"
        )
    lam = w_norm / denom - 1.0
    a = w_norm / (1.0 + lam)  # shift absorbed by the primal
    b = w_norm - a            # = lam/(1+lam) * ||w||, absorbed by the dual
    f = z - a
    f[-1] += b
    pf = np.maximum(pava_nonincreasing_kernel(f), 0.0)
    x = pf + a
    y = pf - f
    y[-1] += b
    u = (a / w_norm) * w
    v = (-b / w_norm) * w
    return x, u, y, v, ProjectionCase.INTERIOR, lam


def project_mesoc_parts(z, w) -> tuple[MesocPoint, MesocPoint]:
    """Primal and dual-of-negation projections without certificate overhead."""
    z = as_vector(z, "z")
    w = as_vector(w, "w", allow_empty=True)
    x, u, y, v, _, _ = _project_parts(z, w)
    return MesocPoint(x, u), MesocPoint(y, v)


def project_mesoc(z, w) -> ProjectionCertificate:
    """Project (z, w) onto the MESOC and return the full Moreau certificate."""
    z = as_vector(z, "z")
    w = as_vector(w, "w", allow_empty=True)
    x, u, y, v, case, lam = _project_parts(z, w)
    primal = MesocPoint(x, u)
    dual = MesocPoint(y, v)
    additive = float(np.linalg.norm(np.concatenate([x - y - z, u - v - w])))
    ortho = abs(float(np.dot(x, y) + (np.dot(u, v) if w.size else 0.0)))
    return ProjectionCertificate(
        input=MesocPoint(z, w),
        primal=primal,
        dual_of_neg=dual,
        case=case,
        lam=lam,
        moreau_additive_residual=additive,
        moreau_orthogonality_residual=ortho,
    )


def project_mesoc_dual(z, w) -> MesocPoint:
    """Projection onto the dual MESOC, via Moreau on the negated input."""
    z = as_vector(z, "z")
    w = as_vector(w, "w", allow_empty=True)
    _, _, y, v, _, _ = _project_parts(-z, -w)
    return MesocPoint(y, v)


@dataclass(frozen=True)
class ComplementarityReport:
    """Outcome of a complementarity check between a primal/dual pair.

    `ok` is the headline verdict: both memberships plus orthogonality of
    the inner product, all within tol. When both u and v are nonzero the
    four structural conditions characterizing complementary pairs are
    evaluated as well (last primal coordinate pinned at ||u||, dual sum
    pinned at ||v||, u and v exactly antiparallel, and the shifted pair
    complementary for the monotone nonnegative cone); for degenerate pairs
    (u = 0 or v = 0) they are reported as None.
    """

    in_primal_cone: bool
    in_dual_cone: bool
    inner_product: float
    ok: bool
    xp_equals_u_norm: bool | None = None
    dual_sum_equals_v_norm: bool | None = None
    uv_antiparallel: bool | None = None
    shifted_pair_complementary: bool | None = None

    def __bool__(self) -> bool:
        return self.ok


def complementarity_check(a: MesocPoint, b: MesocPoint, tol: float = 1e-8) -> ComplementarityReport:
    """Check that (a, b) is a complementary pair for the MESOC and its dual."""
    if a.p != b.p or a.q != b.q:
        raise DimensionError(
            f"dimension mismatch: ({a.p},{a.q}) vs ({b.p},{b.q})"
        )
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    in_primal = mesoc_contains(a, tol)
    in_dual = mesoc_dual_contains(b, tol)
    inner = float(np.dot(a.as_vector(), b.as_vector()))
    ok = in_primal and in_dual and abs(inner) <= tol

    u_norm, v_norm = a.u_norm, b.u_norm
    if u_norm > 0.0 and v_norm > 0.0:
        xp_eq = abs(float(a.x[-1]) - u_norm) <= tol
        sum_eq = abs(float(np.sum(b.x)) - v_norm) <= tol
        anti = abs(float(np.dot(a.u, b.u)) + u_norm * v_norm) <= tol
        sx = a.x - u_norm
        sy = b.x.copy()
        sy[-1] -= v_norm
        shifted = (
            bool(np.all(np.diff(sx) <= tol) and sx[-1] >= -tol)
            and bool(np.all(np.cumsum(sy) >= -tol))
            and abs(float(np.dot(sx, sy))) <= tol
        )
        return ComplementarityReport(
            in_primal, in_dual, inner, ok, xp_eq, sum_eq, anti, shifted
        )
    return ComplementarityReport(in_primal, in_dual, inner, ok)
