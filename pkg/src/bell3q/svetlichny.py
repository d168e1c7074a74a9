"""Closed-form upper bounds and violation criteria for the Svetlichny operator.

Mirrors the Mermin module: a 3x9 coefficient matrix W pairs with the
correlation matrix T through the singular-value trace inequality,

    max |<Svetlichny operator>|  <=  s1(T) s1(W) + s2(T) s2(W),

for unbiased observables, and the combinations J+- = s1(W) +- s2(W) have a
closed form.  Violation of the classical certificate means exceeding 4.
The bias-only extension on T-states is ``l_max``.
"""

from __future__ import annotations

import numpy as np

from .pauli import CorrelationDecomposition
from .reports import BoundReport, Strengths
from .states import is_tstate
from .mermin import _clamp_square, _i_coefficients, _pair_bound, _t_svals

__all__ = [
    "build_w_matrix",
    "j_plus_minus",
    "svetlichny_bound_unbiased",
    "svetlichny_bound_equal_strengths",
    "svetlichny_sufficient_orthogonal",
    "svetlichny_six_variant_criterion",
    "l_max",
    "svetlichny_bound_tstate",
    "svetlichny_biased_window",
    "svetlichny_bound_x_asymmetric",
    "svetlichny_bound_degenerate_smax",
    "equal_strength_angles_svetlichny",
    "optimal_unbiased_angles_svetlichny",
    "SVETLICHNY_CLASSICAL_BOUND",
]

SVETLICHNY_CLASSICAL_BOUND = 4.0


def _abcd_pm(s: Strengths):
    rx, rxp, ry, ryp, rz, rzp = s.as_array()
    zp, zm = rz + rzp, rz - rzp
    g1, g2, g3, g4 = (rx * ry - rxp * ryp), (rx * ryp + rxp * ry), \
        (rx * ry + rxp * ryp), (rx * ryp - rxp * ry)
    a_p, a_m = g1 * zp + g2 * zm, g1 * zp - g2 * zm
    b_p, b_m = g2 * zp + g1 * zm, g2 * zp - g1 * zm
    c_p, c_m = g3 * zp + g4 * zm, g3 * zp - g4 * zm
    d_p, d_m = g4 * zp + g3 * zm, g4 * zp - g3 * zm
    return a_p, a_m, b_p, b_m, c_p, c_m, d_p, d_m


def build_w_matrix(strengths: Strengths, angles) -> np.ndarray:
    """The 3x9 Svetlichny coefficient matrix in the half-angle frame.

    Same layout as the Mermin V matrix: 2x2 blocks at columns (0, 1) and
    (3, 4), third row structurally zero.
    """
    tx, ty, tz = angles
    cx, sx = np.cos(tx / 2.0), np.sin(tx / 2.0)
    cy, sy = np.cos(ty / 2.0), np.sin(ty / 2.0)
    cz, sz = np.cos(tz / 2.0), np.sin(tz / 2.0)
    a_p, a_m, b_p, b_m, c_p, c_m, d_p, d_m = _abcd_pm(strengths)
    w = np.zeros((3, 9))
    w[0, 0] = a_p * cx * cy * cz
    w[0, 1] = b_p * cx * cy * sz
    w[1, 0] = c_p * sx * cy * cz
    w[1, 1] = d_p * sx * cy * sz
    w[0, 3] = c_m * cx * sy * cz
    w[0, 4] = -d_m * cx * sy * sz
    w[1, 3] = a_m * sx * sy * cz
    w[1, 4] = -b_m * sx * sy * sz
    return w


def _j_coefficients(s: Strengths):
    rx, rxp, ry, ryp, rz, rzp = s.as_array()
    j0 = (rx**2 + rxp**2) * (ry**2 + ryp**2) * (rz**2 + rzp**2)
    jyz_x = rx * rxp * (ry**2 - ryp**2) * (rz**2 - rzp**2)
    jxz_y = ry * ryp * (rx**2 - rxp**2) * (rz**2 - rzp**2)
    jxy_z = rz * rzp * (rx**2 - rxp**2) * (ry**2 - ryp**2)
    return j0, jyz_x, jxz_y, jxy_z


def j_plus_minus(strengths: Strengths, angles, *, absolute: bool = False):
    """(s1(W) + s2(W), s1(W) - s2(W)) in closed form; angles broadcastable."""
    tx, ty, tz = (np.asarray(a, dtype=float) for a in angles)
    j0, jyz_x, jxz_y, jxy_z = _j_coefficients(strengths)
    _, _, _, _, iyz_0, izy_0, i1 = _i_coefficients(strengths)
    rx, rxp = strengths.rx, strengths.rxp

    radicand = (iyz_0 * np.sin(ty) ** 2 + izy_0 * np.sin(tz) ** 2
                + i1**2 * (1.0 - np.cos(2 * ty) * np.cos(2 * tz)))
    radicand = _clamp_square(radicand, "inner radicand of the Svetlichny closed form")

    terms = (jyz_x * np.cos(tx), jxz_y * np.cos(ty), jxy_z * np.cos(tz))
    if absolute:
        terms = tuple(np.abs(term) for term in terms)
    cross = terms[0] + terms[1] + terms[2]
    base = (j0 + 2.0 * cross
            - 8.0 * rx * rxp * i1 * np.cos(tx) * np.cos(ty) * np.cos(tz))
    swing = 4.0 * rx * rxp * np.sin(tx) * np.sqrt(radicand)
    jp2 = _clamp_square(base + swing, "J_plus^2")
    jm2 = _clamp_square(base - swing, "J_minus^2")
    j_plus, j_minus = np.sqrt(jp2), np.sqrt(jm2)
    if np.ndim(j_plus) == 0:
        return float(j_plus), float(j_minus)
    return j_plus, j_minus


def svetlichny_bound_unbiased(t, strengths: Strengths, angles) -> BoundReport:
    """Tight bound for unbiased observables; equals s1(T)s1(W) + s2(T)s2(W)."""
    s1, s2 = _t_svals(t)
    jp, jm = j_plus_minus(strengths, angles)
    return BoundReport(
        bound_value=_pair_bound(s1, s2, jp, jm),
        criterion="svetlichny_unbiased_general",
        achieving_angles=tuple(float(a) for a in angles),
    )


def equal_strength_angles_svetlichny(s1: float, s2: float) -> tuple[float, float, float]:
    """Representative of the optimal-angle family for equal per-side strengths.

    Either cos(ty) cos(tz) = (s1^2 - s2^2)/(s1^2 + s2^2) with tx = pi/2, or
    sin(tx) = 2 s1 s2/(s1^2 + s2^2) with cos(ty) cos(tz) = 0.  The first
    family's symmetric representative is returned; degenerate s1 = s2 gives
    fully orthogonal angles.
    """
    denom = s1 * s1 + s2 * s2
    ratio = 0.0 if denom <= 0 else (s1 * s1 - s2 * s2) / denom
    ty = float(np.arccos(np.sqrt(np.clip(ratio, 0.0, 1.0))))
    return (np.pi / 2, ty, ty)


def svetlichny_bound_equal_strengths(t, rx: float, ry: float, rz: float) -> BoundReport:
    """2 sqrt(2) R_X R_Y R_Z sqrt(s1^2 + s2^2), angle-optimized."""
    s1, s2 = _t_svals(t)
    value = 2.0 * np.sqrt(2.0) * rx * ry * rz * np.sqrt(s1 * s1 + s2 * s2)
    return BoundReport(
        bound_value=float(value),
        criterion="svetlichny_equal_strengths",
        achieving_angles=equal_strength_angles_svetlichny(s1, s2),
        notes="optimal angles form two families; a first-family representative is reported",
    )


def svetlichny_sufficient_orthogonal(t, strengths: Strengths) -> tuple[float, bool]:
    """Violation certificate at orthogonal relative angles: (value, value > 4)."""
    s1, s2 = _t_svals(t)
    st = strengths
    j0, *_ = _j_coefficients(st)
    radical = 4.0 * st.rx * st.rxp * np.sqrt(
        (st.ry**2 * st.rzp**2 + st.ryp**2 * st.rz**2)
        * (st.ry**2 * st.rz**2 + st.ryp**2 * st.rzp**2))
    j_p = np.sqrt(max(j0 + radical, 0.0))
    j_m = np.sqrt(max(j0 - radical, 0.0))
    value = float(0.5 * (j_p + j_m) * s1 + 0.5 * (j_p - j_m) * s2)
    return value, value > SVETLICHNY_CLASSICAL_BOUND


def svetlichny_six_variant_criterion(t, strengths: Strengths, angles) -> tuple[float, bool]:
    """Criterion for violating at least one of the six exchanged operators.

    Absolute-value form of J+- (cross terms only; the triple-cosine term is
    exchange-invariant and keeps its sign).  Coincides with the base bound
    for equal per-side strengths.
    """
    s1, s2 = _t_svals(t)
    jp, jm = j_plus_minus(strengths, angles, absolute=True)
    value = float(_pair_bound(s1, s2, jp, jm))
    return value, value > SVETLICHNY_CLASSICAL_BOUND


def l_max(strengths: Strengths) -> float:
    """Largest bias-only contribution to the Svetlichny expectation on a T-state.

    Multilinear in the biases, hence extremal at biases +-(1 - R).  The sign
    patterns reachable by the six independent signs split into two classes
    whose maxima pair the larger coefficient with the larger Z-side factor;
    matches exhaustive enumeration of all 64 sign choices exactly.
    """
    bx, bxp, by, byp, bz, bzp = strengths.bars
    p, q, r, s = bx * by, bxp * byp, bx * byp, bxp * by
    big, small = bz + bzp, abs(bz - bzp)
    c1 = max(abs(p - q), r + s) * big + min(abs(p - q), r + s) * small
    c2 = max(p + q, abs(r - s)) * big + min(p + q, abs(r - s)) * small
    return float(max(c1, c2))


def svetlichny_bound_tstate(t, strengths: Strengths, angles,
                            decomp: CorrelationDecomposition | None = None) -> BoundReport:
    """Bound for arbitrary observables on a T-state: unbiased part plus l_max."""
    if decomp is not None and not is_tstate(decomp):
        raise ValueError("state is not a T-state: local or bipartite blocks are nonzero")
    base = svetlichny_bound_unbiased(t, strengths, angles)
    return BoundReport(
        bound_value=base.bound_value + l_max(strengths),
        criterion="svetlichny_tstate_general",
        achieving_angles=base.achieving_angles,
    )


def svetlichny_biased_window(p: float) -> tuple[float, float]:
    """Strength window in which only biased observables can violate.

    Requires P = sqrt(s1^2 + s2^2) > sqrt(2).  Returns (r_unbiased, r_biased)
    with r_unbiased = (sqrt(2)/P)^(1/3) and the biased threshold strictly
    below it.
    """
    root2 = np.sqrt(2.0)
    if p <= root2:
        raise ValueError(f"window requires sqrt(s1^2+s2^2) > sqrt(2), got {p!r}")
    r_unbiased = (root2 / p) ** (1.0 / 3.0)
    r_biased = (-3.0 + np.sqrt(3.0) * np.sqrt(2.0 * root2 * p - 1.0)) / (root2 * (p - root2))
    return float(r_unbiased), float(r_biased)


_BRANCHES = ("orthogonal", "mixed", "parallel")


def svetlichny_bound_x_asymmetric(t, rx: float, rxp: float, ry: float, rz: float,
                                  branch: str, tstate: bool = False) -> BoundReport:
    """Bound with unequal strengths on the X side only (R_X >= R_X').

    Three angle regimes:
      orthogonal: all angles pi/2, value 2 R_Y R_Z (R_X s1 + R_X' s2);
      mixed: tx = pi/2, sin(ty) sin(tz) = 2 s1 s2/(s1^2+s2^2),
             value 2 R_Y R_Z sqrt(R_X^2 + R_X'^2) sqrt(s1^2 + s2^2);
      parallel: tx = 0, sin(ty) sin(tz) = |R_X^2 - R_X'^2|/(R_X^2 + R_X'^2),
             value 2 sqrt(2) R_Y R_Z s_max sqrt(R_X^2 + R_X'^2); requires a
             doubly degenerate largest singular value.
    """
    if branch not in _BRANCHES:
        raise ValueError(f"branch must be one of {_BRANCHES}, got {branch!r}")
    if rxp > rx + 1e-12:
        raise ValueError("requires rx >= rxp; swap the X-side labels")
    s1, s2 = _t_svals(t)
    half_pi = np.pi / 2
    if branch == "orthogonal":
        value = 2.0 * ry * rz * (rx * s1 + rxp * s2)
        angles = (half_pi, half_pi, half_pi)
    elif branch == "mixed":
        value = 2.0 * ry * rz * np.sqrt(rx**2 + rxp**2) * np.sqrt(s1**2 + s2**2)
        denom = s1**2 + s2**2
        ratio = 0.0 if denom <= 0 else 2.0 * s1 * s2 / denom
        ty = float(np.arcsin(np.clip(np.sqrt(ratio), 0.0, 1.0)))
        angles = (half_pi, ty, ty)
    else:
        if abs(s1 - s2) > 1e-9 * max(1.0, s1):
            raise ValueError(
                "parallel branch requires the largest singular value to be doubly degenerate")
        value = 2.0 * np.sqrt(2.0) * ry * rz * s1 * np.sqrt(rx**2 + rxp**2)
        denom = rx**2 + rxp**2
        ratio = 0.0 if denom <= 0 else abs(rx**2 - rxp**2) / denom
        ty = float(np.arcsin(np.clip(np.sqrt(ratio), 0.0, 1.0)))
        angles = (0.0, ty, ty)
    criterion = f"svetlichny_x_asymmetric_{branch}"
    if tstate:
        value += 2.0 * (2.0 - rx - rxp) * (1.0 - ry) * (1.0 - rz)
        criterion += "_tstate"
    return BoundReport(bound_value=float(value), criterion=criterion,
                       achieving_angles=angles)


def svetlichny_bound_x_asymmetric_best(t, rx, rxp, ry, rz, tstate: bool = False) -> BoundReport:
    """Largest applicable branch value (aggregation, not a single stated result)."""
    s1, s2 = _t_svals(t)
    branches = ["orthogonal", "mixed"]
    if abs(s1 - s2) <= 1e-9 * max(1.0, s1):
        branches.append("parallel")
    reports = [svetlichny_bound_x_asymmetric(t, rx, rxp, ry, rz, b, tstate) for b in branches]
    best = max(reports, key=lambda r: r.bound_value)
    return BoundReport(bound_value=best.bound_value,
                       criterion=best.criterion + "_best",
                       achieving_angles=best.achieving_angles,
                       notes="maximum over applicable angle branches")


def svetlichny_bound_degenerate_smax(strengths: Strengths, s_max: float,
                                     tstate: bool = False) -> BoundReport:
    """Bound when s1(T) = s2(T), with the X relative angle fixed at 0 or pi.

    Value s_max sqrt(J0 + 2 Gamma1), Gamma1 the sum of the absolute cross
    coefficients plus 4 R_X R_X' R_Y R_Y' R_Z R_Z'; reaches 4 s_max at unit
    strengths.  Optimality over a free X angle is not claimed.
    """
    st = strengths
    j0, jyz_x, jxz_y, jxy_z = _j_coefficients(st)
    gamma1 = (abs(jyz_x) + abs(jxz_y) + abs(jxy_z)
              + 4.0 * st.rx * st.rxp * st.ry * st.ryp * st.rz * st.rzp)
    value = s_max * np.sqrt(j0 + 2.0 * gamma1)
    tx = float(np.arccos(np.sign((st.ry - st.ryp) * (st.rz - st.rzp))))
    ty = float(np.arccos(np.sign((st.rx - st.rxp) * (st.rz - st.rzp))))
    tz = float(np.arccos(np.sign((st.rx - st.rxp) * (st.ry - st.ryp))))
    criterion = "svetlichny_degenerate_smax"
    if tstate:
        value += l_max(st)
        criterion += "_tstate"
    return BoundReport(bound_value=float(value), criterion=criterion,
                       achieving_angles=(tx, ty, tz))


def optimal_unbiased_angles_svetlichny(t, strengths: Strengths, resolution: int = 64,
                                       *, absolute: bool = False):
    """Grid-maximize the closed-form unbiased bound over the angle cube."""
    s1, s2 = _t_svals(t)
    grid = np.linspace(0.0, np.pi, resolution)
    tx, ty, tz = np.meshgrid(grid, grid, grid, indexing="ij", sparse=True)
    jp, jm = j_plus_minus(strengths, (tx, ty, tz), absolute=absolute)
    values = _pair_bound(s1, s2, jp, jm)
    flat = int(np.argmax(values))
    ix, iy, iz = np.unravel_index(flat, values.shape)
    return (float(grid[ix]), float(grid[iy]), float(grid[iz])), float(values[ix, iy, iz])
