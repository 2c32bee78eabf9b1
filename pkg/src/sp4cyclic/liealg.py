"""The Lie algebra sp(4,C): root datum, Chevalley basis, brackets, involutions, PTDS, gradings.

Elements are stored as coefficient vectors over the basis (H1, H2, X_alpha...).
The 4x4 matrix model is kept alongside as an independent cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

OMEGA = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])

# weights of the four slots of C^4 under the Cartan H1=diag(1,0,-1,0), H2=diag(0,1,0,-1)
SLOT_WEIGHTS = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass(frozen=True, order=True)
class Root:
    """aL1 + bL2."""

    a: int
    b: int

    def __post_init__(self):
        if (abs(self.a), abs(self.b)) not in {(1, 1), (2, 0), (0, 2)}:
            raise ValueError(f"({self.a},{self.b}) is not a root of sp(4,C)")

    def __neg__(self) -> Root:
        return Root(-self.a, -self.b)

    def __add__(self, other: Root) -> Root:
        return Root(self.a + other.a, self.b + other.b)

    def __call__(self, h) -> complex:
        """Evaluate on a Cartan element given by its (H1, H2) coefficients."""
        return self.a * h[0] + self.b * h[1]

    @property
    def name(self) -> str:
        parts = []
        for c, s in ((self.a, "L1"), (self.b, "L2")):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            sign = "-" if c < 0 else ("+" if parts else "")
            parts.append(f"{sign}{mag}{s}")
        return "".join(parts)

    def __str__(self) -> str:
        return self.name


def is_root(a: int, b: int) -> bool:
    return (abs(a), abs(b)) in {(1, 1), (2, 0), (0, 2)}


ALPHA1 = Root(1, 1)
ALPHA2 = Root(-2, 0)
HIGHEST = Root(0, 2)

# positive roots in order of height, then their negatives
ROOTS = (ALPHA1, ALPHA2, Root(-1, 1), HIGHEST, -ALPHA1, -ALPHA2, Root(1, -1), -HIGHEST)
LABELS = ("H1", "H2") + ROOTS
DIM = 10
INDEX = {lab: i for i, lab in enumerate(LABELS)}

# N_{alpha,beta} in [X_alpha, X_beta] = N X_{alpha+beta}.  Generated once from the
# matrix model (scripts/structure_table.py) and frozen; tests re-derive it.
_N = {
    ((1, 1), (-2, 0)): 1, ((1, 1), (-1, 1)): -2, ((1, 1), (1, -1)): -2, ((1, 1), (0, -2)): 1,
    ((-2, 0), (1, 1)): -1, ((-2, 0), (1, -1)): 1,
    ((-1, 1), (1, 1)): 2, ((-1, 1), (-1, -1)): -2, ((-1, 1), (2, 0)): 1, ((-1, 1), (0, -2)): -1,
    ((0, 2), (-1, -1)): 1, ((0, 2), (1, -1)): -1,
    ((-1, -1), (-1, 1)): 2, ((-1, -1), (0, 2)): -1, ((-1, -1), (2, 0)): -1, ((-1, -1), (1, -1)): 2,
    ((2, 0), (-1, 1)): -1, ((2, 0), (-1, -1)): 1,
    ((1, -1), (1, 1)): 2, ((1, -1), (-2, 0)): -1, ((1, -1), (0, 2)): 1, ((1, -1), (-1, -1)): -2,
    ((0, -2), (1, 1)): -1, ((0, -2), (-1, 1)): 1,
}
STRUCTURE_CONSTANTS = {(Root(*p), Root(*q)): n for (p, q), n in _N.items()}


def coroot(r: Root) -> tuple[float, float]:
    """(H1, H2) coefficients of H_alpha = 2 alpha / (alpha, alpha)."""
    nrm = r.a * r.a + r.b * r.b
    return (2 * r.a / nrm, 2 * r.b / nrm)


def simple_coords(r: Root) -> tuple[int, int]:
    """Integers (m, n) with r = m*alpha1 + n*alpha2."""
    m = r.b
    n = (m * ALPHA1.a - r.a) // 2
    assert m * ALPHA1.a + n * ALPHA2.a == r.a
    return m, n


def height(r: Root) -> int:
    return sum(simple_coords(r))


def hat_index(h: int) -> int:
    """Representative of h mod 4 in {-1, 0, 1, 2}."""
    r = h % 4
    return r - 4 if r == 3 else r


def label_height(lab) -> int:
    return 0 if isinstance(lab, str) else height(lab)


@dataclass(frozen=True)
class RootDatum:
    roots: tuple
    simple: tuple
    positive: frozenset
    heights: dict
    coroots: dict
    highest: Root

    @property
    def rank(self) -> int:
        return 2

    @property
    def dim(self) -> int:
        return self.rank + len(self.roots)


def build_root_datum() -> RootDatum:
    pos = frozenset(r for r in ROOTS if height(r) > 0)
    hi = max(pos, key=height)
    return RootDatum(
        roots=ROOTS,
        simple=(ALPHA1, ALPHA2),
        positive=pos,
        heights={r: height(r) for r in ROOTS},
        coroots={r: LieElem.cartan(*coroot(r)) for r in ROOTS},
        highest=hi,
    )


# ---------------------------------------------------------------- matrix model

def _root_matrix(r: Root) -> np.ndarray:
    m = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            wi, wj = SLOT_WEIGHTS[i], SLOT_WEIGHTS[j]
            if i != j and (wi[0] - wj[0], wi[1] - wj[1]) == (r.a, r.b):
                # lower-right gl(2) block carries -X^T
                m[i, j] = -1.0 if (i >= 2 and j >= 2) else 1.0
    return m


@lru_cache(maxsize=None)
def basis_matrices() -> np.ndarray:
    mats = [np.diag([1.0, 0, -1, 0]), np.diag([0, 1.0, 0, -1])]
    mats += [_root_matrix(r) for r in ROOTS]
    return np.array(mats, dtype=complex)


@lru_cache(maxsize=None)
def _coord_map() -> np.ndarray:
    """Left inverse of the basis embedding C^10 -> C^16."""
    B = basis_matrices().reshape(DIM, 16).T
    return np.linalg.pinv(B)


def matrix_to_coeffs(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    c = m.reshape(m.shape[:-2] + (16,)) @ _coord_map().T
    return c


def in_sp4(m: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(np.swapaxes(m, -1, -2) @ OMEGA + OMEGA @ m), initial=0.0) <= tol)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


# ---------------------------------------------------------------- coefficient model

@lru_cache(maxsize=None)
def structure_tensor() -> np.ndarray:
    """C[i, j, k] with [b_i, b_j] = sum_k C[i,j,k] b_k, from root data only."""
    C = np.zeros((DIM, DIM, DIM))
    for ir, r in enumerate(ROOTS, start=2):
        for ih, hval in ((0, (1, 0)), (1, (0, 1))):
            C[ih, ir, ir] = r(hval)
            C[ir, ih, ir] = -r(hval)
        h = coroot(r)
        C[ir, INDEX[-r], 0] = h[0]
        C[ir, INDEX[-r], 1] = h[1]
        for js, s in enumerate(ROOTS, start=2):
            n = STRUCTURE_CONSTANTS.get((r, s))
            if n:
                C[ir, js, INDEX[r + s]] = n
    return C


class LieElem:
    """Element of sp(4,C); coeffs has shape (..., 10) so grids of elements work too."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        if c.shape[-1] != DIM:
            raise ValueError("expected trailing dimension 10")
        self.coeffs = c

    @classmethod
    def zero(cls) -> LieElem:
        return cls(np.zeros(DIM))

    @classmethod
    def basis(cls, lab) -> LieElem:
        c = np.zeros(DIM, dtype=complex)
        c[INDEX[lab]] = 1.0
        return cls(c)

    @classmethod
    def cartan(cls, h1, h2) -> LieElem:
        c = np.zeros(DIM, dtype=complex)
        c[0], c[1] = h1, h2
        return cls(c)

    @classmethod
    def from_dict(cls, d: dict) -> LieElem:
        c = np.zeros(DIM, dtype=complex)
        for lab, v in d.items():
            c[INDEX[lab]] += v
        return cls(c)

    @classmethod
    def from_matrix(cls, m) -> LieElem:
        return cls(matrix_to_coeffs(m))

    @property
    def matrix(self) -> np.ndarray:
        return np.tensordot(self.coeffs, basis_matrices(), axes=([-1], [0]))

    def __getitem__(self, lab):
        return self.coeffs[..., INDEX[lab]]

    def as_dict(self, tol: float = 0.0) -> dict:
        return {lab: complex(self.coeffs[i]) for i, lab in enumerate(LABELS)
                if abs(self.coeffs[i]) > tol}

    def __add__(self, o):
        return LieElem(self.coeffs + o.coeffs)

    def __sub__(self, o):
        return LieElem(self.coeffs - o.coeffs)

    def __neg__(self):
        return LieElem(-self.coeffs)

    def __mul__(self, s):
        return LieElem(self.coeffs * np.asarray(s)[..., None] if np.ndim(s) else self.coeffs * s)

    __rmul__ = __mul__

    def conj(self) -> LieElem:
        return LieElem(np.conj(self.coeffs))

    def norm(self) -> float:
        return float(np.max(np.abs(self.coeffs), initial=0.0))

    def allclose(self, o, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coeffs, o.coeffs, rtol=0, atol=atol))

    def __repr__(self) -> str:
        terms = [f"{v:.6g}*{lab}" for lab, v in self.as_dict(1e-15).items()]
        return "LieElem(" + (" + ".join(terms) or "0") + ")"


def bracket(a: LieElem, b: LieElem) -> LieElem:
    return LieElem(np.einsum("...i,...j,ijk->...k", a.coeffs, b.coeffs, structure_tensor()))


def ad(a: LieElem) -> np.ndarray:
    """Matrix of ad_a on coefficient vectors: (ad_a)[k, j] = coefficient of b_k in [a, b_j]."""
    return np.einsum("i,ijk->kj", a.coeffs, structure_tensor())


@lru_cache(maxsize=None)
def killing_matrix() -> np.ndarray:
    C = structure_tensor()
    return np.einsum("ikl,jlk->ij", C, C)


def killing(a: LieElem, b: LieElem) -> complex:
    return np.einsum("...i,ij,...j->...", a.coeffs, killing_matrix(), b.coeffs)


@lru_cache(maxsize=None)
def killing_trace_constant() -> float:
    """c with B(X,Y) = c Tr(XY), found by comparing every basis pair."""
    K = killing_matrix()
    B = basis_matrices()
    T = np.einsum("iab,jba->ij", B, B).real
    mask = np.abs(T) > 0.5
    ratios = K[mask] / T[mask]
    c = float(ratios[0])
    if not (np.allclose(ratios, c, atol=1e-12) and np.allclose(K[~mask], 0, atol=1e-12)):
        raise RuntimeError("Killing form is not a multiple of the trace form")
    return c


# ---------------------------------------------------------------- involutions

@dataclass(frozen=True)
class Involution:
    kind: str
    table: np.ndarray  # column j is the image of basis element j
    conjugate: bool

    def __call__(self, a: LieElem) -> LieElem:
        c = np.conj(a.coeffs) if self.conjugate else a.coeffs
        return LieElem(c @ self.table.T)


def apply_involution(inv: Involution, a: LieElem) -> LieElem:
    return inv(a)


def _theta_table() -> np.ndarray:
    T = np.zeros((DIM, DIM), dtype=complex)
    T[0, 0] = T[1, 1] = -1.0
    for r in ROOTS:
        T[INDEX[-r], INDEX[r]] = -1.0
    return T


def _extend_by_brackets(gens: list) -> np.ndarray:
    """Linear map fixed by its values on generators, extended as an automorphism."""
    words = [(g.coeffs, s.coeffs) for g, s in gens]
    frontier = list(words)
    while np.linalg.matrix_rank(np.array([w for w, _ in words]), tol=1e-9) < DIM:
        new = []
        for g, sg in gens:
            for w, sw in frontier:
                new.append((bracket(g, LieElem(w)).coeffs, bracket(sg, LieElem(sw)).coeffs))
        if not new:
            break
        words += new
        frontier = new
    V = np.array([w for w, _ in words]).T
    W = np.array([s for _, s in words]).T
    T = W @ np.linalg.pinv(V)
    if np.max(np.abs(T @ V - W)) > 1e-10:
        raise RuntimeError("sigma does not extend consistently: structure constants are inconsistent")
    T[np.abs(T) < 1e-14] = 0.0
    return T


def build_involutions(ptds: PtdsData | None = None) -> tuple[Involution, Involution, Involution]:
    ptds = ptds or build_ptds()
    theta = Involution("theta", _theta_table(), True)
    gens = [(ptds.e1_tilde, -ptds.e1_tilde), (ptds.e1, -ptds.e1), (ptds.e2, -ptds.e2)]
    sigma = Involution("sigma", _extend_by_brackets(gens), False)
    lam = Involution("lambda", sigma.table @ theta.table, True)
    return theta, sigma, lam


@lru_cache(maxsize=None)
def involutions() -> tuple[Involution, Involution, Involution]:
    return build_involutions(build_ptds())


def theta(a: LieElem) -> LieElem:
    return involutions()[0](a)


def sigma(a: LieElem) -> LieElem:
    return involutions()[1](a)


def lam(a: LieElem) -> LieElem:
    return involutions()[2](a)


def real_basis_of_fixed_set(inv: Involution, tol: float = 1e-10) -> np.ndarray:
    """Columns span fix(inv) over R, in the realification (Re c, Im c) of C^10."""
    T = inv.table
    # real 20x20 matrix of the conjugate-linear map c -> T conj(c)
    R = np.block([[T.real, T.imag], [T.imag, -T.real]])
    _, s, vh = np.linalg.svd(R - np.eye(2 * DIM))
    return vh[np.sum(s > tol):].T


# ---------------------------------------------------------------- PTDS

@dataclass(frozen=True)
class PtdsData:
    x: LieElem
    e1: LieElem
    e1_tilde: LieElem
    e2: LieElem
    exponents: tuple
    isotypic_dims: tuple
    g_plus: np.ndarray = field(repr=False)


def _isotypic(e_tilde: LieElem, hw: LieElem) -> np.ndarray:
    vecs, v = [], hw
    while v.norm() > 1e-12:
        vecs.append(v.coeffs)
        v = bracket(e_tilde, v)
    return np.array(vecs)


@lru_cache(maxsize=None)
def build_ptds() -> PtdsData:
    # x is the Cartan element with alpha_i(x) = 1 on both simple roots
    A = np.array([[ALPHA1.a, ALPHA1.b], [ALPHA2.a, ALPHA2.b]], dtype=float)
    xh = np.linalg.solve(A, np.ones(2))
    x = LieElem.cartan(*xh)
    # x = 1/2 sum r_i H_{alpha_i}
    Hs = np.array([coroot(ALPHA1), coroot(ALPHA2)]).T
    r = np.linalg.solve(Hs, 2 * xh)
    c = np.sqrt(r / 2)
    e1 = LieElem.from_dict({ALPHA1: c[0], ALPHA2: c[1]})
    e1t = LieElem.from_dict({-ALPHA1: c[0], -ALPHA2: c[1]})
    e2 = LieElem.basis(HIGHEST)
    blocks = [_isotypic(e1t, e1), _isotypic(e1t, e2)]
    dims = tuple(len(b) for b in blocks)
    if np.linalg.matrix_rank(np.vstack(blocks), tol=1e-9) != sum(dims):
        raise RuntimeError("isotypic pieces are not independent")
    g_plus = expm(2j * np.pi * x.matrix / (height(HIGHEST) + 1))
    return PtdsData(x, e1, e1t, e2, tuple((d - 1) // 2 for d in dims), dims, g_plus)


# ---------------------------------------------------------------- gradings

def grading(elem: LieElem, scheme: str = "height") -> dict:
    """Split elem by height (Z-grading) or by height mod 4 (hat grading)."""
    if scheme not in ("height", "hat"):
        raise ValueError(f"unknown grading scheme {scheme!r}")
    out: dict[int, np.ndarray] = {}
    for i, lab in enumerate(LABELS):
        k = label_height(lab)
        if scheme == "hat":
            k = hat_index(k)
        if k not in out:
            out[k] = np.zeros_like(elem.coeffs)
        out[k][..., i] = elem.coeffs[..., i]
    return {k: LieElem(v) for k, v in sorted(out.items())}


def hat_labels(j: int) -> tuple:
    return tuple(lab for lab in LABELS if hat_index(label_height(lab)) == hat_index(j))


# ---------------------------------------------------------------- report

def dump_table() -> str:
    """Plain-text table of the structure constants, coroots, heights and involutions."""
    ptds = build_ptds()
    th, sg, lm = involutions()
    lines = ["# sp(4,C) Chevalley data", "# basis: " + " ".join(str(l) for l in LABELS), ""]
    lines.append("# roots: name height hat coroot(H1,H2) matrix-slots")
    for r in ROOTS:
        slots = [(i + 1, j + 1) for i, j in zip(*np.nonzero(_root_matrix(r)))]
        h = coroot(r)
        lines.append(f"{r.name:>8} {height(r):>3} {hat_index(height(r)):>3} "
                     f"({h[0]:g},{h[1]:g}) {slots}")
    lines += ["", "# structure constants [X_a, X_b] = N X_(a+b)"]
    for (p, q), n in sorted(STRUCTURE_CONSTANTS.items()):
        lines.append(f"{p.name:>8} {q.name:>8} {n:>3} -> {(p + q).name}")
    lines += ["", f"# Killing form B(X,Y) = {killing_trace_constant():g} Tr(XY)", ""]
    for inv in (th, sg, lm):
        lines.append(f"# {inv.kind} ({'conjugate-linear' if inv.conjugate else 'complex-linear'})")
        for j, lab in enumerate(LABELS):
            img = LieElem(inv.table[:, j])
            terms = " + ".join(f"{v.real:g}*{l}" for l, v in img.as_dict(1e-14).items())
            lines.append(f"{str(lab):>8} -> {terms}")
        lines.append("")
    lines.append("# PTDS")
    lines.append(f"x  = {ptds.x.as_dict(1e-15)}")
    lines.append(f"e1 = {ptds.e1.as_dict(1e-15)}")
    lines.append(f"e1~ = {ptds.e1_tilde.as_dict(1e-15)}")
    lines.append(f"e2 = X_{HIGHEST.name} with coefficient 1 (chosen scale)")
    lines.append(f"exponents = {ptds.exponents}; isotypic dims = {ptds.isotypic_dims}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- invariant suite

def invariant_suite() -> dict:
    """Named defects of the structural identities; each should vanish to roundoff.

    Exact-valued items (dimensions, exponents) report 0 on match and 1 otherwise.
    """
    T = structure_tensor()
    out = {"root_model_vs_matrices": float(np.max(np.abs(T - structure_tensor_full())))}
    # Jacobi on every basis triple: [a,[b,c]] + [b,[c,a]] + [c,[a,b]]
    jac = (np.einsum("bcm,aml->abcl", T, T) + np.einsum("cam,bml->abcl", T, T)
           + np.einsum("abm,cml->abcl", T, T))
    out["jacobi"] = float(np.max(np.abs(jac)))
    th, sg, lm = involutions()
    # theta sigma (c) = T_th conj(T_sg) conj(c), sigma theta (c) = T_sg T_th conj(c)
    out["theta_sigma_commute"] = float(np.max(np.abs(th.table @ np.conj(sg.table) - sg.table @ th.table)))
    for inv in (th, sg, lm):
        sq = inv.table @ (np.conj(inv.table) if inv.conjugate else inv.table)
        out[f"{inv.kind}_involutive"] = float(np.max(np.abs(sq - np.eye(DIM))))
    out["fix_lambda_real_dim"] = float(real_basis_of_fixed_set(lm).shape[1] != 10)
    p = build_ptds()
    out["ptds_x_e1"] = (bracket(p.x, p.e1) - p.e1).norm()
    out["ptds_x_e1tilde"] = (bracket(p.x, p.e1_tilde) + p.e1_tilde).norm()
    out["ptds_e1_e1tilde"] = (bracket(p.e1, p.e1_tilde) - p.x).norm()
    out["isotypic_dims"] = float(sorted(p.isotypic_dims) != [3, 7])
    out["exponents"] = float(tuple(sorted(p.exponents)) != (1, 3))
    # hat grading: [g_i, g_j] in g_{i+j mod 4} and Ad(g+) = i^j on g_j
    worst = 0.0
    for i, a in enumerate(LABELS):
        for j, b in enumerate(LABELS):
            v = LieElem(T[i, j])
            k = hat_index(label_height(a) + label_height(b))
            for kk, part in grading(v, "hat").items():
                if kk != k:
                    worst = max(worst, part.norm())
    out["hat_grading_closed"] = worst
    B = basis_matrices()
    g, gi = p.g_plus, np.linalg.inv(p.g_plus)
    out["ad_gplus_eigen"] = max(
        float(np.max(np.abs(g @ B[k] @ gi - 1j ** hat_index(label_height(lab)) * B[k])))
        for k, lab in enumerate(LABELS))
    out["hat_minus_one_span"] = float(set(hat_labels(-1)) != {-ALPHA1, -ALPHA2, HIGHEST})
    return out


def structure_tensor_full() -> np.ndarray:
    """T[i, j, k] with [e_i, e_j] = sum_k T[i, j, k] e_k over the full basis."""
    B = basis_matrices()
    T = np.zeros((DIM, DIM, DIM), dtype=complex)
    for i in range(DIM):
        for j in range(DIM):
            T[i, j] = matrix_to_coeffs(commutator(B[i], B[j]))
    return T
