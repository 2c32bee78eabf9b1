"""Harmonic-map quantities attached to a solved metric.

The flat connection is D = d + h^-1 dh + Phi dz + Phi^*h dzbar in the holomorphic
frame; its dzbar^dz curvature is the solver residual plus dbar Phi.  On the torus only
constant coefficients are holomorphic, so varying mu, nu, q2 give a solvable elliptic
problem but a connection that is not flat.  Edge transport uses the matrix
exponential of the connection averaged over the two end nodes.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import expm

from .higgs import HiggsData, build_sl4
from .liealg import OMEGA
from .solver import MetricField, SolveReport, TorusDomain, adjoint, higgs_field, residual, shift

J_SIGMA = np.diag([1.0, 1.0, -1.0, -1.0])
CONVERGED_RESIDUAL = 1e-8


def hopf(h: HiggsData, m: MetricField | None = None) -> np.ndarray:
    """Tr(phi^2) as a field.  The metric plays no role; it is accepted for symmetry."""
    phi = build_sl4(h).phi
    return np.trace(phi @ phi, axis1=-2, axis2=-1)


def energy_density(phi: np.ndarray, hmat: np.ndarray) -> np.ndarray:
    """-Tr(phi Theta_h(phi)) = Tr(phi phi^*h), real and nonnegative."""
    return np.trace(phi @ adjoint(phi, hmat), axis1=-2, axis2=-1).real


def energy(h: HiggsData, m: MetricField, dom: TorusDomain, kappa: float = 1.0) -> float:
    """kappa times the integral of the trace-form energy density over one period cell.

    Only ratios between energies are meaningful; the Killing form would rescale
    everything by 6.
    """
    dens = energy_density(higgs_field(h, dom), m.matrix())
    return float(kappa * np.sum(dens) * dom.area / dom.n**2)


def circle_action(h: HiggsData, angle: float) -> HiggsData:
    """Normal form of e^{i angle} phi: all three parameters rotate by e^{2 i angle}."""
    c = np.exp(2j * angle)
    return replace(h, mu=c * np.asarray(h.mu), nu=c * np.asarray(h.nu), q2=c * np.asarray(h.q2))


def immersion_check(h) -> bool:
    """True iff the sl(4) Higgs field is nonzero at every node.

    Accepts HiggsData or a raw array of 4x4 matrices (for synthetic fields).
    """
    phi = build_sl4(h).phi if isinstance(h, HiggsData) else np.asarray(h)
    if phi.shape[-2:] != (4, 4):
        raise ValueError("expected a field of 4x4 matrices")
    return bool(np.all(np.max(np.abs(phi), axis=(-2, -1)) > 0))


@dataclass(frozen=True)
class FlatConnectionData:
    """Connection components along the lattice directions s and t, shape (n, n, 4, 4)."""

    A_x: np.ndarray
    A_y: np.ndarray
    dom: TorusDomain

    def plaquette_defect(self) -> float:
        """sup over plaquettes of |transport around the unit cell - 1|."""
        hs = self.dom.h
        Ex = _edge_maps(self.A_x, (1, 0), hs)
        Ey = _edge_maps(self.A_y, (0, 1), hs)
        loop = (np.linalg.inv(shift(Ey, (0, 0)))
                @ np.linalg.inv(shift(Ex, (0, 1))) @ shift(Ey, (1, 0)) @ Ex)
        return float(np.max(np.abs(loop - np.eye(4))))


def _edge_maps(A: np.ndarray, e: tuple, hs: float) -> np.ndarray:
    mid = 0.5 * (A + shift(A, e))
    return expm(-hs * mid.reshape(-1, 4, 4)).reshape(mid.shape)


def _chern_dz(hmat: np.ndarray, dom: TorusDomain) -> np.ndarray:
    """h^-1 d_z h by centred differences."""
    hinv = np.linalg.inv(hmat)
    d_s = hinv @ (shift(hmat, (1, 0)) - shift(hmat, (-1, 0))) / (2 * dom.h)
    d_t = hinv @ (shift(hmat, (0, 1)) - shift(hmat, (0, -1))) / (2 * dom.h)
    tau = complex(dom.tau)
    return (np.conj(tau) * d_s - d_t) / (dom.scale * (np.conj(tau) - tau))


def flat_connection(h: HiggsData, m: MetricField, dom: TorusDomain) -> FlatConnectionData:
    hmat = m.matrix()
    phi = higgs_field(h, dom)
    a10 = _chern_dz(hmat, dom) + phi
    a01 = adjoint(phi, hmat)
    tau, L = complex(dom.tau), dom.scale
    # dz(d_s) = L, dz(d_t) = L tau
    return FlatConnectionData(L * (a10 + a01), L * (tau * a10 + np.conj(tau) * a01), dom)


def real_structure(m: MetricField) -> np.ndarray:
    """R = J h^-1 Omega; the real form acts on sections by s -> R conj(s)."""
    return J_SIGMA @ np.linalg.inv(m.matrix()) @ OMEGA


@dataclass(frozen=True)
class HolonomyResult:
    Ma: np.ndarray
    Mb: np.ndarray
    commutator_defect: float
    symplectic_defect: float
    det_defect: float
    reality_defect: float
    plaquette_defect: float
    holomorphic: bool = True  # False when mu, nu or q2 vary: D is then not flat


def _path(A: np.ndarray, e: tuple, hs: float) -> np.ndarray:
    E = _edge_maps(A, e, hs)
    M = np.eye(4, dtype=complex)
    idx = [0, 0]
    for _ in range(A.shape[0]):
        M = E[idx[0], idx[1]] @ M
        idx = [(idx[0] + e[0]) % A.shape[0], (idx[1] + e[1]) % A.shape[1]]
    return M


def transport_loops(conn: FlatConnectionData) -> tuple:
    """Path-ordered transport around the two lattice generators from node (0, 0)."""
    return _path(conn.A_x, (1, 0), conn.dom.h), _path(conn.A_y, (0, 1), conn.dom.h)


def _symplectic_defect(M: np.ndarray) -> float:
    return float(np.max(np.abs(M.T @ OMEGA @ M - OMEGA)))


def holonomy(h: HiggsData, m: MetricField, dom: TorusDomain,
             report: SolveReport | None = None) -> HolonomyResult:
    """Holonomies along the two lattice generators from the base node, with checks."""
    if report is not None and not report.converged:
        raise ValueError("metric did not converge; holonomy is meaningless")
    if m.n != dom.n:
        raise ValueError("metric and domain grids differ")
    if np.max(np.abs(residual(h, m, dom))) > CONVERGED_RESIDUAL:
        raise ValueError("metric does not solve Hitchin's equations to the required accuracy")
    conn = flat_connection(h, m, dom)
    Ma, Mb = transport_loops(conn)
    R = real_structure(m)
    worst = 0.0
    for A, e in ((conn.A_x, (1, 0)), (conn.A_y, (0, 1))):
        dR = (shift(R, e) - shift(R, (-e[0], -e[1]))) / (2 * dom.h)
        worst = max(worst, float(np.max(np.abs(dR + A @ R - R @ np.conj(A)))))
    return HolonomyResult(
        Ma, Mb,
        commutator_defect=float(np.max(np.abs(Ma @ Mb - Mb @ Ma))),
        symplectic_defect=max(_symplectic_defect(Ma), _symplectic_defect(Mb)),
        det_defect=float(max(abs(np.linalg.det(Ma) - 1), abs(np.linalg.det(Mb) - 1))),
        reality_defect=worst,
        plaquette_defect=conn.plaquette_defect(),
        holomorphic=all(bool(np.all(f == f.flat[0])) for f in h.fields()),
    )
