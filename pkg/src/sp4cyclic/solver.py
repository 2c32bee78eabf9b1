"""Hitchin's equations for the cyclic family on a flat torus.

The torus is C / L(Z + tau Z) with L chosen so the area equals dom.area.  Nodes sit at
z = L(s + tau t), s, t in {0, 1/n, ...}.  Metrics are h = diag(e^u1, e^u2, e^-u1, e^-u2)
(diagonal mode) or h = H + H^-T with H a 2x2 Hermitian matrix field (full mode), always
in the holomorphic splitting N + N^-1 K + N^-1 + N K^-1 of higgs.build_sl4.

Convention: the residual is the dzbar^dz coefficient of F_h + [phi ^ phi*],
    R = dbar(h^-1 d h) - [Phi, Phi^*h],   Phi^*h = h^-1 conj(Phi)^T h.
With this sign the nonlinearity is monotone, so the discrete problem has a unique
solution whenever one exists.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from . import liealg as la
from .higgs import HiggsData, STABLE, build_sl4, stability_flag
from .liealg import ALPHA1, ALPHA2, HIGHEST, LieElem

log = logging.getLogger(__name__)

# grid offsets used by the stencil: s, t and the two diagonals
_DIRS = ((1, 0), (0, 1), (1, 1), (1, -1))


# A Newton run only counts as converged once its increments have settled; a residual
# that shrinks while the metric drifts off is the signature of a non-existent solution.
STEP_TOL = 1e-5
U_MAX = 30.0
RUNAWAY = "metric escapes to infinity: no solution for these data on the torus"


STAGNATED = "Newton stagnated: residual stopped decreasing"


def _stagnated(history: list, window: int = 8) -> bool:
    return len(history) > window + 2 and min(history[-window:]) > 0.5 * history[-window - 1]


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class TorusDomain:
    tau: complex = 1j
    n: int = 64
    area: float = 1.0

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise ValueError("tau must have positive imaginary part")
        if self.n < 8 or self.n % 2:
            raise ValueError("n must be even and at least 8")
        if self.area <= 0:
            raise ValueError("area must be positive")

    @property
    def scale(self) -> float:
        return float(np.sqrt(self.area / complex(self.tau).imag))

    @property
    def h(self) -> float:
        return 1.0 / self.n

    def st(self) -> tuple:
        g = np.arange(self.n) / self.n
        return np.meshgrid(g, g, indexing="ij")

    def z(self) -> np.ndarray:
        s, t = self.st()
        return self.scale * (s + complex(self.tau) * t)

    def stencil_weights(self) -> tuple:
        """Weights (w_s, w_t, w_st, w_comm) with
        dbar(A) = w_s D_s + w_t D_t + w_st (D_++ - D_+-) + w_comm [A_s, A_t]
        where D_e are second differences and A_e centred first differences (unit spacing).
        """
        tau = complex(self.tau)
        a, b = tau.real, tau.imag
        c = 1.0 / (4 * b * b * self.scale**2 * self.h**2)
        return abs(tau) ** 2 * c, c, -a * c / 2, 1j * b * c


def shift(f: np.ndarray, e: tuple) -> np.ndarray:
    """f evaluated at node + e (periodic); the grid occupies the two leading axes."""
    return np.roll(f, (-e[0], -e[1]), axis=(0, 1))


@dataclass
class MetricField:
    mode: str
    u1: np.ndarray | None = None
    u2: np.ndarray | None = None
    H: np.ndarray | None = None  # (n, n, 2, 2) Hermitian, full mode

    @classmethod
    def flat(cls, n: int, mode: str = "diagonal") -> MetricField:
        if mode == "diagonal":
            return cls("diagonal", np.zeros((n, n)), np.zeros((n, n)))
        H = np.zeros((n, n, 2, 2), dtype=complex)
        H[..., 0, 0] = H[..., 1, 1] = 1.0
        return cls("full", H=H)

    @property
    def n(self) -> int:
        return (self.u1 if self.mode == "diagonal" else self.H).shape[0]

    def to_full(self) -> MetricField:
        if self.mode == "full":
            return self
        H = np.zeros(self.u1.shape + (2, 2), dtype=complex)
        H[..., 0, 0] = np.exp(self.u1)
        H[..., 1, 1] = np.exp(self.u2)
        return MetricField("full", H=H)

    def matrix(self) -> np.ndarray:
        """The rank-4 metric h at every node."""
        if self.mode == "diagonal":
            d = np.stack([self.u1, self.u2, -self.u1, -self.u2], -1)
            return np.einsum("...i,ij->...ij", np.exp(d), np.eye(4))
        n = self.n
        h = np.zeros((n, n, 4, 4), dtype=complex)
        h[..., :2, :2] = self.H
        h[..., 2:, 2:] = np.linalg.inv(self.H).swapaxes(-1, -2)
        return h

    def diagonal_part(self) -> tuple:
        if self.mode == "diagonal":
            return self.u1, self.u2
        return np.log(self.H[..., 0, 0].real), np.log(self.H[..., 1, 1].real)

    def offdiag_sup(self) -> float:
        if self.mode == "diagonal":
            return 0.0
        return float(np.max(np.abs(self.H[..., 0, 1])))


@dataclass
class SolveReport:
    iterations: int
    residual_sup: float
    residual_l2: float
    converged: bool
    offdiag_sup: float = 0.0
    mode: str = "diagonal"
    relaxation_sweeps: int = 0
    message: str = ""
    history: list = field(default_factory=list)


# ---------------------------------------------------------------- field helpers

def higgs_field(h: HiggsData, dom: TorusDomain) -> np.ndarray:
    phi = build_sl4(h).phi
    return np.broadcast_to(phi, (dom.n, dom.n, 4, 4)).copy()


def adjoint(phi: np.ndarray, hmat: np.ndarray) -> np.ndarray:
    """phi^*h = h^-1 conj(phi)^T h."""
    return np.linalg.solve(hmat, np.conj(phi).swapaxes(-1, -2) @ hmat)


def _herm2(M: np.ndarray, kind: str) -> np.ndarray:
    """exp, log, sqrt or 1/sqrt of 2x2 Hermitian matrices in closed form.

    f(M) = alpha I + beta M with beta the divided difference of f over the two
    eigenvalues m +- r; each beta below is written so it stays accurate as r -> 0.
    """
    a, d, c = M[..., 0, 0].real, M[..., 1, 1].real, M[..., 0, 1]
    m = 0.5 * (a + d)
    r = np.sqrt(0.25 * (a - d) ** 2 + np.abs(c) ** 2)
    lo, hi = m - r, m + r
    small = r < 1e-4 * np.maximum(np.abs(m), 1.0)
    rs = np.where(small, 1.0, r)
    if kind == "exp":
        sinhc = np.where(small, 1 + r**2 / 6 + r**4 / 120, np.sinh(rs) / rs)
        beta = np.exp(m) * sinhc
        fhi = np.exp(hi)
    else:
        if np.any(lo <= 0):
            raise ValueError("metric is not positive definite at some node")
        if kind == "log":
            x = r / m
            xs = np.where(small, 0.5, x)
            beta = np.where(small, 1 + x**2 / 3 + x**4 / 5, np.arctanh(xs) / xs) / m
            fhi = np.log(hi)
        elif kind == "sqrt":
            beta = 1.0 / (np.sqrt(hi) + np.sqrt(lo))
            fhi = np.sqrt(hi)
        elif kind == "isqrt":
            sh, sl = np.sqrt(hi), np.sqrt(lo)
            beta = -1.0 / (sh * sl * (sh + sl))
            fhi = 1.0 / sh
        else:
            raise ValueError(kind)
    alpha = fhi - beta * hi
    out = beta[..., None, None] * M
    out[..., 0, 0] += alpha
    out[..., 1, 1] += alpha
    return out


class _FullGeometry:
    """Square roots of H and log-ratios log(H^-1 H_{+e}) for the full-mode stencil."""

    def __init__(self, H: np.ndarray):
        self.H = H
        self.sq = _herm2(H, "sqrt")
        self.isq = _herm2(H, "isqrt")

    def hlog(self, e: tuple) -> np.ndarray:
        """H log(H^-1 H_{+e}) = H^1/2 log(H^-1/2 H_{+e} H^-1/2) H^1/2, Hermitian."""
        M = self.isq @ shift(self.H, e) @ self.isq
        M = 0.5 * (M + np.conj(M).swapaxes(-1, -2))
        return self.sq @ _herm2(M, "log") @ self.sq


def _curvature_full(H: np.ndarray, dom: TorusDomain, geom: _FullGeometry | None = None,
                    weighted: bool = False) -> np.ndarray:
    """dbar(H^-1 dH) on the rank-2 block; weighted=True returns H times it (Hermitian)."""
    g = geom or _FullGeometry(H)
    ws, wt, wst, wc = dom.stencil_weights()
    L = {}
    for e in _DIRS:
        L[e] = g.hlog(e)
        L[(-e[0], -e[1])] = g.hlog((-e[0], -e[1]))
    D = {e: L[e] + L[(-e[0], -e[1])] for e in _DIRS}
    HAs = 0.5 * (L[(1, 0)] - L[(-1, 0)])
    HAt = 0.5 * (L[(0, 1)] - L[(0, -1)])
    Hinv = g.isq @ g.isq
    As, At = Hinv @ HAs, Hinv @ HAt
    out = ws * D[(1, 0)] + wt * D[(0, 1)] + wst * (D[(1, 1)] - D[(1, -1)])
    out = out + wc * (HAs @ At - HAt @ As)
    return out if weighted else Hinv @ out


def _laplace_diag(u: np.ndarray, dom: TorusDomain) -> np.ndarray:
    ws, wt, wst, _ = dom.stencil_weights()
    D = {e: shift(u, e) + shift(u, (-e[0], -e[1])) - 2 * u for e in _DIRS}
    return ws * D[(1, 0)] + wt * D[(0, 1)] + wst * (D[(1, 1)] - D[(1, -1)])


def curvature(m: MetricField, dom: TorusDomain) -> np.ndarray:
    n = m.n
    F = np.zeros((n, n, 4, 4), dtype=complex)
    if m.mode == "diagonal":
        f1, f2 = _laplace_diag(m.u1, dom), _laplace_diag(m.u2, dom)
        for k, f in enumerate((f1, f2, -f1, -f2)):
            F[..., k, k] = f
        return F
    FV = _curvature_full(m.H, dom)
    F[..., :2, :2] = FV
    F[..., 2:, 2:] = -FV.swapaxes(-1, -2)
    return F


def residual(h: HiggsData, m: MetricField, dom: TorusDomain) -> np.ndarray:
    """Pointwise R = dbar(h^-1 dh) - [Phi, Phi^*h] on the grid, shape (n, n, 4, 4)."""
    if m.n != dom.n:
        raise ValueError("metric and domain grids differ")
    hmat = m.matrix()
    if m.mode == "full":
        if np.any(np.linalg.eigvalsh(m.H) <= 0):
            raise ValueError("metric is not positive definite at some node")
    phi = higgs_field(h, dom)
    return curvature(m, dom) - la.commutator(phi, adjoint(phi, hmat))


def residual_norms(R: np.ndarray, dom: TorusDomain) -> tuple:
    sup = float(np.max(np.abs(R)))
    l2 = float(np.sqrt(np.sum(np.abs(R) ** 2) * dom.area / dom.n**2))
    return sup, l2


# ---------------------------------------------------------------- constant oracle

def _phi_lie(mu: complex, nu: complex) -> LieElem:
    return LieElem.from_dict({-ALPHA1: 1.0, -ALPHA2: mu, HIGHEST: nu})


def _oracle_system(mu, nu, u: np.ndarray) -> tuple:
    """Cartan part of [Phi, Phi^*h] and its Jacobian, built with the bracket engine.

    In the Lie frame the metric diag(e^u1, e^u2, e^-u1, e^-u2) is exp(u2 H1 + u1 H2).
    """
    Phi = _phi_lie(mu, nu)
    s = -la.theta(Phi).coeffs
    c = (u[1], u[0])
    scal = np.ones(la.DIM)
    dscal = np.zeros((2, la.DIM))
    for r in la.ROOTS:
        k = la.INDEX[r]
        scal[k] = np.exp(-r(c))
        dscal[0, k] = -r.a * scal[k]
        dscal[1, k] = -r.b * scal[k]
    val = la.bracket(Phi, LieElem(scal * s)).coeffs[:2].real
    J = np.zeros((2, 2))
    for i in range(2):  # i indexes (H1, H2) coordinates of c
        col = la.bracket(Phi, LieElem(dscal[i] * s)).coeffs[:2].real
        J[:, 1 - i] = col  # c = (u2, u1)
    return val, J


def constant_oracle(mu: complex, nu: complex, dom: TorusDomain | None = None,
                    tol: float = 1e-14, maxit: int = 100) -> tuple:
    """Constant (u1, u2) solving Hitchin's equations for constant data with q2 = 0.

    All derivatives vanish, so the equations reduce to the Cartan part of
    [Phi, Phi^*h] = 0.  Newton from (0, 0) with backtracking; the map is the gradient
    of a convex function so backtracking on the residual norm is enough.
    """
    if mu == 0:
        raise ValueError("mu must be nonzero")
    if nu == 0:
        raise OracleError("with nu = 0 the constant system has no solution: "
                          "the equation for u1 reads 0 = e^(-u1-u2)")
    u = np.zeros(2)
    f, J = _oracle_system(mu, nu, u)
    for it in range(maxit):
        nf = np.linalg.norm(f)
        try:
            step = np.linalg.solve(J, -f)
        except np.linalg.LinAlgError:
            break
        if nf < tol and np.max(np.abs(step)) < 1e-12:
            return float(u[0]), float(u[1])
        t = 1.0
        while t > 1e-12:
            f2, J2 = _oracle_system(mu, nu, u + t * step)
            if np.linalg.norm(f2) < (1 - 1e-4 * t) * nf:
                break
            t /= 2
        else:
            break
        u, f, J = u + t * step, f2, J2
        if np.max(np.abs(u)) > 60:
            break
    raise OracleError(
        f"constant system did not converge (mu={mu}, nu={nu}); last u={u.tolist()}, "
        f"|f|={np.linalg.norm(f):.3e}. With nu = 0 the system has no real solution: "
        "the equation for u1 reads 0 = e^(-u1-u2)."
    )


# ---------------------------------------------------------------- diagonal Newton

def _diag_nonlinearity(phi: np.ndarray, u1: np.ndarray, u2: np.ndarray) -> tuple:
    """Diagonal of [Phi, Phi^*h] for diagonal h and its derivative in (u1, u2)."""
    w = np.stack([u1, u2, -u1, -u2], -1)
    c = np.abs(phi) ** 2
    E = c * np.exp(w[..., :, None] - w[..., None, :])  # E_ij = c_ij e^(w_i - w_j)
    N = E.sum(-1) - E.sum(-2)
    dNdw = np.einsum("...k,km->...km", E.sum(-1) + E.sum(-2), np.eye(4)) - E - E.swapaxes(-1, -2)
    W = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
    return N[..., :2], (dNdw @ W)[..., :2, :]


def _diag_residual_vec(h: HiggsData, m: MetricField, dom: TorusDomain) -> np.ndarray:
    R = residual(h, m, dom)
    return np.concatenate([R[..., 0, 0].real.ravel(), R[..., 1, 1].real.ravel()])


def laplace_matrix(dom: TorusDomain) -> sp.csr_matrix:
    n = dom.n
    ws, wt, wst, _ = dom.stencil_weights()
    idx = np.arange(n * n).reshape(n, n)
    rows, cols, vals = [], [], []

    def add(e, wgt):
        for sgn in (1, -1):
            rows.append(idx.ravel())
            cols.append(shift(idx, (sgn * e[0], sgn * e[1])).ravel())
            vals.append(np.full(n * n, wgt))

    add((1, 0), ws)
    add((0, 1), wt)
    add((1, 1), wst)
    add((1, -1), -wst)
    rows.append(idx.ravel())
    cols.append(idx.ravel())
    vals.append(np.full(n * n, -2 * ws - 2 * wt))
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                         shape=(n * n, n * n))


def _diag_jacobian(phi, m: MetricField, Lap: sp.csr_matrix) -> sp.csr_matrix:
    _, dN = _diag_nonlinearity(phi, m.u1, m.u2)
    blocks = [[None, None], [None, None]]
    for k in range(2):
        for j in range(2):
            D = sp.diags(-dN[..., k, j].ravel())
            blocks[k][j] = (Lap + D) if k == j else D
    return sp.bmat(blocks, format="csc")


def _relax(h: HiggsData, m: MetricField, dom: TorusDomain, phi, sweeps: int) -> MetricField:
    """Coloured nonlinear Gauss-Seidel: one pointwise Newton step per node, neighbours lagged."""
    ws, wt, _, _ = dom.stencil_weights()
    centre = -2 * ws - 2 * wt
    u1, u2 = m.u1.copy(), m.u2.copy()
    i, j = np.meshgrid(np.arange(dom.n), np.arange(dom.n), indexing="ij")
    for _ in range(sweeps):
        for color in ((0, 0), (0, 1), (1, 0), (1, 1)):
            mask = (i % 2 == color[0]) & (j % 2 == color[1])
            N, dN = _diag_nonlinearity(phi, u1, u2)
            r = np.stack([_laplace_diag(u1, dom) - N[..., 0], _laplace_diag(u2, dom) - N[..., 1]], -1)
            J = centre * np.eye(2) - dN
            step = np.linalg.solve(J, -r[..., None])[..., 0]
            step = np.clip(step, -1.0, 1.0)
            u1 = np.where(mask, u1 + step[..., 0], u1)
            u2 = np.where(mask, u2 + step[..., 1], u2)
    return MetricField("diagonal", u1, u2)


def _solve_diagonal(h, dom, m, tol, maxit, relax_sweeps) -> tuple:
    phi = higgs_field(h, dom)
    Lap = laplace_matrix(dom)
    nn = dom.n * dom.n
    report = SolveReport(0, np.inf, np.inf, False, mode="diagonal")
    last_step = np.inf
    for it in range(maxit):
        r = _diag_residual_vec(h, m, dom)
        sup = float(np.max(np.abs(r)))
        report.history.append(sup)
        if sup < tol and last_step < STEP_TOL:
            report.converged = True
            break
        if max(np.max(np.abs(m.u1)), np.max(np.abs(m.u2))) > U_MAX:
            report.message = RUNAWAY
            break
        if _stagnated(report.history):
            report.message = STAGNATED
            break
        J = _diag_jacobian(phi, m, Lap)
        step = spsolve(J, -r)
        nr, t = np.linalg.norm(r), 1.0
        while t > 1e-4:
            trial = MetricField("diagonal", m.u1 + t * step[:nn].reshape(m.u1.shape),
                                m.u2 + t * step[nn:].reshape(m.u2.shape))
            if np.linalg.norm(_diag_residual_vec(h, trial, dom)) < (1 - 1e-4 * t) * nr:
                m = trial
                last_step = t * float(np.max(np.abs(step)))
                break
            t /= 2
        else:
            log.info("line search failed at iteration %d; relaxing", it)
            m = _relax(h, m, dom, phi, relax_sweeps)
            report.relaxation_sweeps += relax_sweeps
            last_step = np.inf
        report.iterations = it + 1
    return m, report


# ---------------------------------------------------------------- full Newton

def _params_to_H(p: np.ndarray) -> np.ndarray:
    S = np.empty(p.shape[:-1] + (2, 2), dtype=complex)
    S[..., 0, 0] = p[..., 0]
    S[..., 1, 1] = p[..., 1]
    S[..., 0, 1] = p[..., 2] + 1j * p[..., 3]
    S[..., 1, 0] = p[..., 2] - 1j * p[..., 3]
    return _herm2(S, "exp")


def _H_to_params(H: np.ndarray) -> np.ndarray:
    S = _herm2(H, "log")
    return np.stack([S[..., 0, 0].real, S[..., 1, 1].real, S[..., 0, 1].real, S[..., 0, 1].imag], -1)


def _full_equations(phi: np.ndarray, p: np.ndarray, dom: TorusDomain) -> np.ndarray:
    """Four real equations per node from the Hermitian matrix H^1/2 R_V H^-1/2."""
    H = _params_to_H(p)
    g = _FullGeometry(H)
    hmat = MetricField("full", H=H).matrix()
    comm = la.commutator(phi, adjoint(phi, hmat))[..., :2, :2]
    G = _curvature_full(H, dom, g, weighted=True) - H @ comm
    G = g.isq @ G @ g.isq
    return np.stack([G[..., 0, 0].real, G[..., 1, 1].real, G[..., 0, 1].real, G[..., 0, 1].imag], -1)


def _colour_period(n: int) -> int:
    for k in range(3, n + 1):
        if n % k == 0:
            return k
    return n


def _full_jacobian(phi, p, dom, delta=1e-7) -> sp.csc_matrix:
    """Forward-difference Jacobian; columns of one colour share a single evaluation."""
    n = dom.n
    k = _colour_period(n)
    idx = np.arange(n * n).reshape(n, n)
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    offs = [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)]
    rows, cols, vals = [], [], []
    G0 = _full_equations(phi, p, dom)
    for ci in range(k):
        for cj in range(k):
            mask = (i % k == ci) & (j % k == cj)
            nodes = idx[mask]
            for dof in range(4):
                pp = p.copy()
                pp[mask, dof] += delta
                dG = (_full_equations(phi, pp, dom) - G0) / delta
                for o in offs:
                    tgt = shift(idx, o)[mask]  # node at perturbed node + o
                    tgt_ij = np.unravel_index(tgt, (n, n))
                    for r in range(4):
                        rows.append(4 * tgt + r)
                        cols.append(4 * nodes + dof)
                        vals.append(dG[tgt_ij[0], tgt_ij[1], r])
    N = 4 * n * n
    return sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                         shape=(N, N))


def _solve_full(h, dom, m, tol, maxit) -> tuple:
    phi = higgs_field(h, dom)
    p = _H_to_params(m.H)
    report = SolveReport(0, np.inf, np.inf, False, mode="full")
    last_step = np.inf
    for it in range(maxit):
        m = MetricField("full", H=_params_to_H(p))
        sup = residual_norms(residual(h, m, dom), dom)[0]
        report.history.append(sup)
        if sup < tol and last_step < STEP_TOL:
            report.converged = True
            break
        if np.max(np.abs(p)) > U_MAX:
            report.message = RUNAWAY
            break
        if _stagnated(report.history):
            report.message = STAGNATED
            break
        G = _full_equations(phi, p, dom)
        J = _full_jacobian(phi, p, dom)
        step = spsolve(J, -G.ravel()).reshape(p.shape)
        nG, t = np.linalg.norm(G), 1.0
        while t > 1e-6:
            if np.linalg.norm(_full_equations(phi, p + t * step, dom)) < (1 - 1e-4 * t) * nG:
                break
            t /= 2
        else:
            report.message = "line search failed"
            break
        p = p + t * step
        last_step = t * float(np.max(np.abs(step)))
        report.iterations = it + 1
    return MetricField("full", H=_params_to_H(p)), report


def resample(m: MetricField, n: int) -> MetricField:
    """Trigonometric interpolation of a diagonal metric onto an n x n grid."""
    if m.mode != "diagonal":
        raise ValueError("resampling is implemented for diagonal metrics")

    def one(u):
        k = u.shape[0]
        U = np.fft.fftshift(np.fft.fft2(u))
        out = np.zeros((n, n), dtype=complex)
        lo = (n - k) // 2
        if n >= k:
            out[lo:lo + k, lo:lo + k] = U
        else:
            out = U[-lo:-lo + n, -lo:-lo + n]
        return np.real(np.fft.ifft2(np.fft.ifftshift(out))) * (n / k) ** 2

    return MetricField("diagonal", one(m.u1), one(m.u2))


# ---------------------------------------------------------------- driver

def initial_metric(dom: TorusDomain, mode: str = "diagonal", init=None, seed: int = 0) -> MetricField:
    """init: None (flat), "random" (smooth random perturbation), or a MetricField."""
    if isinstance(init, MetricField):
        return init.to_full() if mode == "full" else init
    if init is None:
        m = MetricField.flat(dom.n, "diagonal")
    elif init == "random":
        rng = np.random.default_rng(seed)
        s, t = dom.st()
        fields = []
        for _ in range(2):
            a = rng.normal(size=5)
            fields.append(a[0] + 0.5 * (a[1] * np.cos(2 * np.pi * s) + a[2] * np.sin(2 * np.pi * t)
                                        + a[3] * np.cos(2 * np.pi * (s + t)) + a[4] * np.sin(4 * np.pi * s)))
        m = MetricField("diagonal", fields[0], fields[1])
    else:
        raise ValueError(f"unknown init {init!r}")
    if mode == "diagonal":
        return m
    full = m.to_full()
    if init is not None:
        rng = np.random.default_rng(seed + 1)
        s, t = dom.st()
        amp = 0.3 * np.sqrt(full.H[..., 0, 0].real * full.H[..., 1, 1].real)
        ph = rng.uniform(0, 2 * np.pi, size=2)
        off = amp * (np.cos(2 * np.pi * s + ph[0]) + 0.5j * np.sin(2 * np.pi * t + ph[1]) + 0.5)
        full.H[..., 0, 1] = off
        full.H[..., 1, 0] = np.conj(off)
    return full


def solve(h: HiggsData, dom: TorusDomain, mode: str = "diagonal", init=None, *,
          tol: float = 1e-10, maxit: int = 50, relax_sweeps: int = 20, seed: int = 0) -> tuple:
    """Solve R = 0 for the metric.  Returns (MetricField, SolveReport)."""
    flag = stability_flag(h)
    if flag.flag != STABLE:
        raise ValueError(f"Higgs data not in the stable regime: {flag.note}")
    if mode not in ("diagonal", "full"):
        raise ValueError("mode must be 'diagonal' or 'full'")
    if mode == "diagonal" and np.max(np.abs(h.fields()[2])) != 0:
        raise ValueError("diagonal mode needs q2 = 0; use mode='full'")
    m0 = initial_metric(dom, mode, init, seed)
    try:
        if mode == "diagonal":
            m, rep = _solve_diagonal(h, dom, m0, tol, maxit, relax_sweeps)
        else:
            m, rep = _solve_full(h, dom, m0, tol, maxit)
        R = residual(h, m, dom)
        rep.residual_sup, rep.residual_l2 = residual_norms(R, dom)
        if not np.all(np.isfinite(R)):
            raise FloatingPointError("non-finite residual")
    except (FloatingPointError, np.linalg.LinAlgError, ValueError) as exc:
        if isinstance(exc, ValueError) and "positive definite" not in str(exc):
            raise
        return m0, SolveReport(0, np.inf, np.inf, False, mode=mode, message=f"diverged: {exc}")
    rep.converged = rep.converged and rep.residual_sup < tol
    rep.offdiag_sup = m.offdiag_sup()
    if not rep.converged and not rep.message:
        rep.message = f"residual {rep.residual_sup:.3e} above tolerance after {rep.iterations} iterations"
    return m, rep
