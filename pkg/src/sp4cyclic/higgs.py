"""Gothen normal-form Sp(4,R) Higgs data and its sl(4,C) realisation.

Matrices here live in the holomorphic splitting N + N^-1 K + N^-1 + N K^-1.  That
frame differs from the Lie-algebra frame of liealg by the symplectic permutation
swapping slots 1<->2 and 3<->4 (see FRAME_PERMUTATION).
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from . import liealg as la
from .cyclic import GradedForm
from .liealg import ALPHA1, ALPHA2, HIGHEST, LieElem

SLOT_NAMES = ("N", "N^-1 K", "N^-1", "N K^-1")
FRAME_PERMUTATION = np.eye(4)[[1, 0, 3, 2]]
Q_W = np.array([[0.0, 1.0], [1.0, 0.0]])


def to_lie_frame(m: np.ndarray) -> np.ndarray:
    return FRAME_PERMUTATION @ m @ FRAME_PERMUTATION.T


def to_bundle_frame(m: np.ndarray) -> np.ndarray:
    return FRAME_PERMUTATION.T @ m @ FRAME_PERMUTATION


@dataclass(frozen=True)
class HiggsData:
    mu: complex | np.ndarray = 1.0
    nu: complex | np.ndarray = 0.0
    q2: complex | np.ndarray = 0.0
    genus: int = 2
    d: int = 2

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError("genus must be at least 2")
        if not self.genus - 1 <= self.d <= 3 * self.genus - 3:
            raise ValueError(f"degree {self.d} outside [g-1, 3g-3] = "
                             f"[{self.genus - 1}, {3 * self.genus - 3}]")

    def fields(self) -> tuple:
        return tuple(np.broadcast_arrays(*(np.asarray(v, dtype=complex)
                                           for v in (self.mu, self.nu, self.q2))))

    @property
    def shape(self) -> tuple:
        return self.fields()[0].shape


@dataclass(frozen=True)
class Sl4Higgs:
    phi: np.ndarray
    weight_labels: tuple = SLOT_NAMES


@dataclass(frozen=True)
class CayleyData:
    psi: np.ndarray
    Q_W: np.ndarray = field(default_factory=lambda: Q_W.copy())


def build_sl4(h: HiggsData) -> Sl4Higgs:
    mu, nu, q2 = h.fields()
    phi = np.zeros(mu.shape + (4, 4), dtype=complex)
    phi[..., 0, 2] = nu
    phi[..., 0, 3] = q2
    phi[..., 1, 2] = q2
    phi[..., 1, 3] = mu
    phi[..., 2, 1] = 1.0
    phi[..., 3, 0] = 1.0
    return Sl4Higgs(phi)


def hitchin_invariants(s: Sl4Higgs) -> tuple:
    """(Tr phi^2, Tr phi^4)."""
    p2 = s.phi @ s.phi
    return np.trace(p2, axis1=-2, axis2=-1), np.trace(p2 @ p2, axis1=-2, axis2=-1)


def cayley_partner(h: HiggsData) -> CayleyData:
    mu, nu, q2 = h.fields()
    beta = np.stack([np.stack([nu, q2], -1), np.stack([q2, mu], -1)], -2)
    return CayleyData(Q_W @ beta)


def gauge_action(lam: complex, h: HiggsData) -> HiggsData:
    """(mu, nu, q2) -> (lam^2 mu, lam^-2 nu, q2)."""
    if lam == 0:
        raise ValueError("gauge parameter must be nonzero")
    return replace(h, mu=lam**2 * np.asarray(h.mu), nu=np.asarray(h.nu) / lam**2)


def normal_form(h: HiggsData) -> tuple:
    """Representative of the C* orbit with max |mu| attained at a value equal to 1.

    Returns (normalized data, lam).  Data with mu identically zero is returned as is.
    """
    mu = np.ravel(np.asarray(h.mu, dtype=complex))
    k = int(np.argmax(np.abs(mu)))
    if abs(mu[k]) <= 1e-14:
        return h, 1.0 + 0j
    lam = complex(np.sqrt(1.0 / mu[k]))
    out = gauge_action(lam, h)
    # remove rounding in the normalised entry
    mu2 = np.array(out.mu, dtype=complex)
    if mu2.ndim:
        mu2.flat[k] = 1.0
    else:
        mu2 = np.complex128(1.0)
    return replace(out, mu=mu2), lam


def zeta4_fixed_point_check(h: HiggsData, tol: float = 1e-12) -> bool:
    """Conjugation by diag(l^-3, l, l^3, l^-1), l = exp(2 pi i/8), multiplies phi by i."""
    if np.max(np.abs(h.fields()[2])) != 0:
        raise ValueError("the fourth-root-of-unity check needs q2 = 0")
    l = np.exp(2j * np.pi / 8)
    g = np.diag([l**-3, l, l**3, l**-1])
    phi = build_sl4(h).phi
    conj = g @ phi @ np.linalg.inv(g)
    scale = max(1.0, float(np.max(np.abs(phi))))
    return bool(np.max(np.abs(conj - 1j * phi)) <= tol * scale)


class Stability(NamedTuple):
    flag: str
    note: str = ""


STABLE = "stable"
FLAGGED = "strictly_semistable_or_unstable"


def stability_flag(h: HiggsData) -> Stability:
    g, d = h.genus, h.d
    mu_zero = float(np.max(np.abs(h.fields()[0]))) <= 1e-14
    if mu_zero:
        return Stability(FLAGGED, "mu vanishes identically")
    if d == g - 1:
        return Stability(FLAGGED, "boundary degree d = g-1: stable iff mu != 0")
    if g - 1 < d <= 3 * g - 3:
        return Stability(STABLE)
    return Stability(FLAGGED, "degree outside (g-1, 3g-3]")


def to_graded_element(h: HiggsData) -> GradedForm:
    """Phi as a (1,0)-form with components (1, mu, q2, nu) on (-a1, -a2 = 2L1, a1, 2L2)."""
    mu, nu, q2 = h.fields()
    c = np.zeros(mu.shape + (la.DIM,), dtype=complex)
    c[..., la.INDEX[-ALPHA1]] = 1.0
    c[..., la.INDEX[-ALPHA2]] = mu
    c[..., la.INDEX[ALPHA1]] = q2
    c[..., la.INDEX[HIGHEST]] = nu
    return GradedForm(LieElem(c), LieElem(np.zeros_like(c)))


def graded_to_bundle_matrix(w: GradedForm) -> np.ndarray:
    return to_bundle_frame(w.dz.matrix)


def cyclic_form(h: HiggsData) -> GradedForm:
    """Phi dz + Phi* dzbar with Phi* = -theta(Phi), the form tested by check_cyclic."""
    w = to_graded_element(h)
    return GradedForm(w.dz, -la.theta(w.dz))
