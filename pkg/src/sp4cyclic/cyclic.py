"""Graded sp(4,C)-valued 1-forms, the cyclic conditions, and the pointwise rigidity system."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import liealg as la
from .liealg import ALPHA1, ALPHA2, HIGHEST, LieElem

NEG_SIMPLE = (-ALPHA1, -ALPHA2)
FRAME_ROOTS = (-ALPHA1, -ALPHA2, HIGHEST)  # the roots spanning hat-degree -1


@dataclass(frozen=True)
class GradedForm:
    """omega = dz-part * dz + dzbar-part * dzbar, both sp(4,C)-valued."""

    dz: LieElem
    dzbar: LieElem

    @classmethod
    def zero(cls) -> GradedForm:
        return cls(LieElem.zero(), LieElem.zero())

    @property
    def cartan(self) -> tuple:
        return ((self.dz["H1"], self.dzbar["H1"]), (self.dz["H2"], self.dzbar["H2"]))

    def component(self, lab) -> tuple:
        return self.dz[lab], self.dzbar[lab]

    def type_tag(self, lab, tol: float = 1e-14) -> str | None:
        a, b = (np.max(np.abs(v)) for v in self.component(lab))
        if a > tol and b > tol:
            return "mixed"
        if a > tol:
            return "(1,0)"
        if b > tol:
            return "(0,1)"
        return None

    def components(self) -> dict:
        out = {}
        for i, lab in enumerate(la.LABELS):
            mask = np.zeros(la.DIM)
            mask[i] = 1.0
            out[lab] = GradedForm(LieElem(self.dz.coeffs * mask), LieElem(self.dzbar.coeffs * mask))
        return out

    def hat(self, j: int) -> GradedForm:
        a = la.grading(self.dz, "hat").get(la.hat_index(j), LieElem.zero())
        b = la.grading(self.dzbar, "hat").get(la.hat_index(j), LieElem.zero())
        return GradedForm(a, b)

    def __add__(self, o: GradedForm) -> GradedForm:
        return GradedForm(self.dz + o.dz, self.dzbar + o.dzbar)

    def norm(self) -> float:
        return max(self.dz.norm(), self.dzbar.norm())

    def matrix(self) -> tuple:
        return self.dz.matrix, self.dzbar.matrix


def big_theta(w: GradedForm) -> GradedForm:
    """Theta on forms: conjugates the form part, so types are swapped."""
    return GradedForm(la.theta(w.dzbar), la.theta(w.dz))


def big_lambda(w: GradedForm) -> GradedForm:
    return GradedForm(la.lam(w.dzbar), la.lam(w.dz))


def wedge_bracket(a: GradedForm, b: GradedForm) -> LieElem:
    """Coefficient of dz^dzbar in [a ^ b]."""
    return la.bracket(a.dz, b.dzbar) - la.bracket(a.dzbar, b.dz)


@dataclass(frozen=True)
class CyclicReport:
    defects: dict

    def passed(self, tol: float = 1e-12) -> dict:
        return {k: v <= tol for k, v in self.defects.items()}

    def ok(self, tol: float = 1e-12) -> bool:
        return all(self.passed(tol).values())

    def failures(self, tol: float = 1e-12) -> list:
        return [k for k, v in self.passed(tol).items() if not v]


def check_cyclic(omega: GradedForm) -> CyclicReport:
    """Defect of each cyclic condition; zero means the condition holds.

    vanishing: hat components of degree 0 and 2 vanish
    reality:   omega_1 = -Theta(omega_{-1}) with omega_{-1} of type (1,0)
    bracket:   [omega_{-1} ^ omega_{-1}] = 0
    lambda:    Lambda(omega) = omega
    """
    wm, wp = omega.hat(-1), omega.hat(1)
    target = big_theta(GradedForm(wm.dz, LieElem.zero()))
    reality = max((wp.dz + target.dz).norm(), (wp.dzbar + target.dzbar).norm(), wm.dzbar.norm())
    return CyclicReport({
        "vanishing": max(omega.hat(0).norm(), omega.hat(2).norm()),
        "reality": reality,
        "bracket": wedge_bracket(wm, wm).norm(),
        "lambda": max((big_lambda(omega).dz - omega.dz).norm(),
                      (big_lambda(omega).dzbar - omega.dzbar).norm()),
    })


def cartan_part_of_bracket(omega: GradedForm) -> tuple:
    """(H1, H2) coefficients of [omega_1 ^ omega_{-1}] on dz^dzbar; exposed for inspection only."""
    c = wedge_bracket(omega.hat(1), omega.hat(-1))
    return c["H1"], c["H2"]


def theta_norm(x: LieElem) -> float:
    return float(np.real(-la.killing(x, la.theta(x))))


def sign_check(x: LieElem) -> bool:
    """True iff -B(x, theta x) > 0; the zero element gives False."""
    return theta_norm(x) > 0.0


@dataclass(frozen=True)
class CyclicFrame:
    """Values of Phi on the hat-degree -1 roots at a point."""

    phi: dict

    def __post_init__(self):
        if set(self.phi) != set(FRAME_ROOTS):
            raise ValueError(f"frame needs exactly the roots {[r.name for r in FRAME_ROOTS]}")

    @classmethod
    def from_values(cls, phi_a1, phi_a2, phi_mu) -> CyclicFrame:
        return cls({-ALPHA1: complex(phi_a1), -ALPHA2: complex(phi_a2), HIGHEST: complex(phi_mu)})

    @property
    def Phi(self) -> LieElem:
        return LieElem.from_dict(self.phi)

    @property
    def phi_star(self) -> LieElem:
        return -la.theta(self.Phi)

    def omega(self) -> GradedForm:
        return GradedForm(self.Phi, self.phi_star)

    def scaled(self, c) -> CyclicFrame:
        return CyclicFrame({r: c * v for r, v in self.phi.items()})


class RigidityHypothesisError(ValueError):
    pass


def _realify(M: np.ndarray) -> np.ndarray:
    """Real matrix of a complex-linear map acting on (Re, Im) stacked vectors."""
    return np.block([[M.real, -M.imag], [M.imag, M.real]])


def _projector(labels) -> np.ndarray:
    P = np.zeros((la.DIM, la.DIM))
    for lab in labels:
        P[la.INDEX[lab], la.INDEX[lab]] = 1.0
    return P


@dataclass(frozen=True)
class RigidityResult:
    dimension: int
    basis: tuple  # GradedForm per kernel vector (zeta placed in the dz slot)
    singular_values: np.ndarray


def rigidity_matrix(frame: CyclicFrame, zeroed_root) -> np.ndarray:
    """Real constraint matrix acting on coordinates of the real form fix(Lambda)."""
    F = la.real_basis_of_fixed_set(la.involutions()[2])
    rows = []
    # hat-degree 0 and 2 parts of zeta vanish
    kill = la.hat_labels(0) + la.hat_labels(2) + (zeroed_root,)
    rows.append(_realify(_projector(kill)))
    # pi_Y [Phi, zeta_{-1}] = 0 and pi_Y [Phi*, zeta_1] = 0
    PY = _projector(la.hat_labels(2))
    for src, j in ((frame.Phi, -1), (frame.phi_star, 1)):
        rows.append(_realify(PY @ la.ad(src) @ _projector(la.hat_labels(j))))
    return np.vstack(rows) @ F


def rigidity_nullspace(frame: CyclicFrame, zeroed_root, strict: bool = True,
                       rtol: float = 1e-10) -> RigidityResult:
    """Infinitesimal deformations of a cyclic frame allowed by the pointwise constraints.

    With strict=True the frame must have nonzero components on both negative simple
    roots; strict=False runs the same linear algebra on degenerate frames.
    """
    if zeroed_root not in NEG_SIMPLE:
        raise ValueError("zeroed_root must be a negative simple root")
    if strict:
        scale = max(abs(v) for v in frame.phi.values())
        for r in NEG_SIMPLE:
            if abs(frame.phi[r]) <= 1e-14 * max(scale, 1.0):
                raise RigidityHypothesisError(f"frame component on {r.name} vanishes")
    A = rigidity_matrix(frame, zeroed_root)
    _, s, vh = np.linalg.svd(A)
    smax = s.max() if s.size else 0.0
    rank = int(np.sum(s > rtol * smax)) if smax > 0 else 0
    kernel = vh[rank:]
    F = la.real_basis_of_fixed_set(la.involutions()[2])
    basis = []
    for y in kernel:
        v = F @ y
        z = LieElem(v[:la.DIM] + 1j * v[la.DIM:])
        basis.append(GradedForm(z, LieElem.zero()))
    return RigidityResult(A.shape[1] - rank, tuple(basis), s)
