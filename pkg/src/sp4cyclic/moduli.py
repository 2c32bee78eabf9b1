"""Dimension counts and component census for maximal Sp(4,R) representations.

Everything is exact integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass

N_DEPENDENT = "N-dependent"
DIM_SP4R = 10


def _check_genus(g: int) -> None:
    if int(g) != g or g < 2:
        raise ValueError("genus must be an integer >= 2")


def _check_degree(g: int, d: int) -> None:
    _check_genus(g)
    if int(d) != d or not g - 1 <= d <= 3 * g - 3:
        raise ValueError(f"degree {d} outside [g-1, 3g-3] = [{g - 1}, {3 * g - 3}]")


def rr_dims(g: int, d: int, *, n_squared_is_k_cubed: bool = False) -> tuple:
    """(a, b) = (h0(N^-2 K^3), h0(N^2 K)).

    b = 2d + g - 1 always.  a = -2d + 5g - 5 while N^-2 K^3 has degree above 2g - 2,
    i.e. d < 2g - 2; from d = 2g - 2 on it depends on N and N_DEPENDENT is returned.
    At d = 3g - 3 the flag n_squared_is_k_cubed selects the special locus N^2 = K^3,
    where a = h0(O) = 1.
    """
    _check_degree(g, d)
    b = 2 * d + g - 1
    if d < 2 * g - 2:
        return -2 * d + 5 * g - 5, b
    if n_squared_is_k_cubed:
        if d != 3 * g - 3:
            raise ValueError("N^2 = K^3 forces d = 3g-3")
        return 1, b
    return N_DEPENDENT, b


def generic_a(g: int, d: int) -> int:
    """a for generic N, valid for g-1 <= d <= 2g-2 (at d = 2g-2, N^-2 K^3 = K generically)."""
    _check_degree(g, d)
    if d > 2 * g - 2:
        raise ValueError("no degree-determined value of a for d > 2g-2")
    return -2 * d + 5 * g - 5


@dataclass(frozen=True)
class ComponentCensus:
    genus: int
    toledo_range: tuple  # closed interval
    maximal_count: int
    smooth_count: int
    w1_nonzero_count: int
    hitchin_count: int
    gothen_degrees: range  # g-1 <= d < 3g-3, the indexing of the component decomposition

    def identity_holds(self) -> bool:
        g = self.genus
        boundary_and_gothen = len(range(g - 1, 3 * g - 3))
        return self.w1_nonzero_count + boundary_and_gothen + self.hitchin_count == self.maximal_count


def component_census(g: int) -> ComponentCensus:
    _check_genus(g)
    p = 2 ** (2 * g)
    c = ComponentCensus(
        genus=g,
        toledo_range=(-(2 * g - 2), 2 * g - 2),
        maximal_count=3 * p + 2 * g - 4,
        smooth_count=p + 2 * g - 3,
        w1_nonzero_count=2 * p - 2,
        hitchin_count=p,
        gothen_degrees=range(g - 1, 3 * g - 3),
    )
    if not c.identity_holds():  # pragma: no cover - arithmetic guard
        raise AssertionError("census identity failed")
    return c


@dataclass(frozen=True)
class FiberModel:
    a: int
    b: int
    description: str
    dimension: int


def fiber_model(a: int, b: int) -> FiberModel:
    if int(a) != a or int(b) != b:
        raise ValueError("a and b must be integers")
    if a <= 0:
        raise ValueError("a must be at least 1")
    if b < 0:
        raise ValueError("b must be nonnegative")
    if a == 1:
        desc = "point" if b == 0 else f"C^{b}"
        return FiberModel(a, b, desc, b)
    return FiberModel(a, b, f"O_P^{a - 1}(1)^+{b}", a + b - 1)


def dimension_check(g: int, d: int) -> bool:
    """g + (a + b - 1) + (3g - 3) == 10g - 10 for g-1 < d <= 2g-2."""
    _check_degree(g, d)
    if not g - 1 < d <= 2 * g - 2:
        raise ValueError(f"dimension check needs g-1 < d <= 2g-2, got d={d}")
    a, b = generic_a(g, d), 2 * d + g - 1
    total = g + fiber_model(a, b).dimension + (3 * g - 3)
    return total == (2 * g - 2) * DIM_SP4R // 2


def census_rows(g: int) -> list:
    """Flat (key, value) rows for tables."""
    c = component_census(g)
    return [
        ("genus", g),
        ("maximal_count", c.maximal_count),
        ("smooth_count", c.smooth_count),
        ("hitchin_count", c.hitchin_count),
        ("w1_nonzero_count", c.w1_nonzero_count),
        ("toledo_min", c.toledo_range[0]),
        ("toledo_max", c.toledo_range[1]),
        ("gothen_degree_min", c.gothen_degrees.start),
        ("gothen_degree_max", c.gothen_degrees.stop - 1),
    ]
