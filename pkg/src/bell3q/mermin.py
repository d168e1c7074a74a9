"""Closed-form upper bounds and violation criteria for the Mermin operator.

Everything here is a function of the 3x9 tripartite correlation matrix T
(through its two largest singular values s1 >= s2), the six measurement
strengths and the three relative angles between each party's pair of
measurement directions.  The central object is the 3x9 coefficient matrix V
whose singular values pair with those of T:

    max |<Mermin operator>|  <=  s1(T) s1(V) + s2(T) s2(V)

for unbiased observables, with V built from strengths and half-angles.  The
combinations I+- = s1(V) +- s2(V) have a closed form that avoids the SVD.

For states with maximally mixed single- and two-party marginals (T-states)
an additive bias-only term ``k_max`` extends the bound to arbitrary biased
observables.
"""

from __future__ import annotations

import numpy as np

from .pauli import CorrelationDecomposition, as_t_matrix
from .reports import BoundReport, ConsistencyError, Strengths
from .smallmat import singular_values_3x9
from .states import is_tstate

__all__ = [
    "build_v_matrix",
    "i_plus_minus",
    "mermin_bound_unbiased",
    "mermin_bound_equal_strengths",
    "mermin_sufficient_orthogonal",
    "mermin_six_variant_criterion",
    "k_max",
    "mermin_bound_tstate",
    "mermin_biased_window",
    "mermin_bound_x_asymmetric",
    "mermin_bound_degenerate_smax",
    "optimal_unbiased_angles",
    "equal_strength_angles",
    "MERMIN_CLASSICAL_BOUND",
]

MERMIN_CLASSICAL_BOUND = 2.0
CLAMP_TOL = 1e-10


def _t_svals(t) -> tuple[float, float]:
    trip = singular_values_3x9(as_t_matrix(t))
    return float(trip.values[0]), float(trip.values[1])


def _abcd(s: Strengths) -> tuple[float, float, float, float]:
    rx, rxp, ry, ryp, rz, rzp = s.as_array()
    a = rx * ry * rzp + rx * ryp * rz + rxp * ry * rz - rxp * ryp * rzp
    b = -rx * ry * rzp + rx * ryp * rz + rxp * ry * rz + rxp * ryp * rzp
    c = rx * ry * rzp + rx * ryp * rz - rxp * ry * rz + rxp * ryp * rzp
    d = rx * ry * rzp - rx * ryp * rz + rxp * ry * rz + rxp * ryp * rzp
    return a, b, c, d


def build_v_matrix(strengths: Strengths, angles) -> np.ndarray:
    """The 3x9 coefficient matrix of the Mermin form in the half-angle frame.

    Rows live on the party-X frame (sum, difference, normal); columns on the
    flattened (Y-frame, Z-frame) pairs with the package's 3*j + k convention.
    Only the 2x2 blocks at columns (0, 1) and (3, 4) are populated; the third
    row is structurally zero, so the third singular value is exactly 0.
    """
    tx, ty, tz = angles
    cx, sx = np.cos(tx / 2.0), np.sin(tx / 2.0)
    cy, sy = np.cos(ty / 2.0), np.sin(ty / 2.0)
    cz, sz = np.cos(tz / 2.0), np.sin(tz / 2.0)
    a, b, c, d = _abcd(strengths)
    v = np.zeros((3, 9))
    v[0, 0] = a * cx * cy * cz
    v[0, 1] = b * cx * cy * sz
    v[1, 0] = c * sx * cy * cz
    v[1, 1] = -d * sx * cy * sz
    v[0, 3] = d * cx * sy * cz
    v[0, 4] = -c * cx * sy * sz
    v[1, 3] = -b * sx * sy * cz
    v[1, 4] = -a * sx * sy * sz
    return v


def _i_coefficients(s: Strengths):
    rx, rxp, ry, ryp, rz, rzp = s.as_array()
    i0 = rx**2 * (ry**2 * rzp**2 + ryp**2 * rz**2) + rxp**2 * (ry**2 * rz**2 + ryp**2 * rzp**2)
    ixy_z = rx * rxp * ry * ryp * (rz**2 - rzp**2)
    ixz_y = rx * rxp * rz * rzp * (ry**2 - ryp**2)
    iyz_x = ry * ryp * rz * rzp * (rx**2 - rxp**2)
    iyz_0 = ry**2 * ryp**2 * (rz**4 + rzp**4)
    izy_0 = rz**2 * rzp**2 * (ry**4 + ryp**4)
    i1 = ry * ryp * rz * rzp
    return i0, ixy_z, ixz_y, iyz_x, iyz_0, izy_0, i1


def _clamp_square(value, what: str):
    """Clamp tiny negative squares to 0; anything more negative is a bug."""
    bad = np.min(value) if np.ndim(value) else value
    if bad < -CLAMP_TOL:
        raise ConsistencyError(f"{what} evaluated to {bad:.3e} < -{CLAMP_TOL:.0e}")
    return np.maximum(value, 0.0)


def i_plus_minus(strengths: Strengths, angles, *, absolute: bool = False):
    """(s1(V) + s2(V), s1(V) - s2(V)) in closed form.

    Angles may be scalars or broadcastable arrays.  With ``absolute=True``
    the three angle-cosine cross terms enter with absolute value, which is
    the form the any-of-six-variants criterion uses.
    """
    tx, ty, tz = (np.asarray(a, dtype=float) for a in angles)
    i0, ixy_z, ixz_y, iyz_x, iyz_0, izy_0, i1 = _i_coefficients(strengths)
    rx, rxp = strengths.rx, strengths.rxp

    radicand = (iyz_0 * np.sin(ty) ** 2 + izy_0 * np.sin(tz) ** 2
                + i1**2 * (1.0 - np.cos(2 * ty) * np.cos(2 * tz)))
    radicand = _clamp_square(radicand, "inner radicand of the Mermin closed form")

    terms = (ixy_z * np.cos(tx) * np.cos(ty),
             ixz_y * np.cos(tx) * np.cos(tz),
             iyz_x * np.cos(ty) * np.cos(tz))
    if absolute:
        terms = tuple(np.abs(term) for term in terms)
    cross = terms[0] + terms[1] + terms[2]

    base = i0 + 2.0 * cross
    swing = 2.0 * rx * rxp * np.sin(tx) * np.sqrt(radicand)
    ip2 = _clamp_square(base + swing, "I_plus^2")
    im2 = _clamp_square(base - swing, "I_minus^2")
    i_plus, i_minus = np.sqrt(ip2), np.sqrt(im2)
    if np.ndim(i_plus) == 0:
        return float(i_plus), float(i_minus)
    return i_plus, i_minus


def _pair_bound(s1: float, s2: float, plus, minus):
    return 0.5 * (s1 + s2) * plus + 0.5 * (s1 - s2) * minus


def mermin_bound_unbiased(t, strengths: Strengths, angles) -> BoundReport:
    """Tight bound for unbiased observables at the given strengths and angles.

    Equals s1(T) s1(V) + s2(T) s2(V).
    """
    s1, s2 = _t_svals(t)
    ip, im = i_plus_minus(strengths, angles)
    return BoundReport(
        bound_value=_pair_bound(s1, s2, ip, im),
        criterion="mermin_unbiased_general",
        achieving_angles=tuple(float(a) for a in angles),
    )


def equal_strength_angles(s1: float, s2: float) -> tuple[float, float, float]:
    """Representative of the optimal-angle family for equal per-side strengths.

    The family is sin(tx) * sqrt(1 - cos^2(ty) cos^2(tz)) = 2 s1 s2 / (s1^2 + s2^2);
    the returned representative fixes ty = tz = pi/2.  Degenerate s1 = s2
    lands on fully orthogonal angles; s2 = 0 admits tx = 0.
    """
    denom = s1 * s1 + s2 * s2
    ratio = 0.0 if denom <= 0 else 2.0 * s1 * s2 / denom
    return (float(np.arcsin(np.clip(ratio, 0.0, 1.0))), np.pi / 2, np.pi / 2)


def mermin_bound_equal_strengths(t, rx: float, ry: float, rz: float) -> BoundReport:
    """2 R_X R_Y R_Z sqrt(s1^2 + s2^2), the angle-optimized equal-strength bound."""
    s1, s2 = _t_svals(t)
    value = 2.0 * rx * ry * rz * np.sqrt(s1 * s1 + s2 * s2)
    return BoundReport(
        bound_value=float(value),
        criterion="mermin_equal_strengths",
        achieving_angles=equal_strength_angles(s1, s2),
        notes="optimal angles form a family; the orthogonal representative is reported",
    )


def mermin_sufficient_orthogonal(t, strengths: Strengths) -> tuple[float, bool]:
    """Violation certificate at orthogonal relative angles.

    Returns (value, value > 2).  The value pairs s1 with the (X, Y/Z', Y'/Z)
    strength radical and s2 with its partner; it never exceeds the general
    bound at orthogonal angles, so exceeding 2 certifies a violation.
    """
    s1, s2 = _t_svals(t)
    st = strengths
    a = st.rx * np.sqrt(st.ry**2 * st.rzp**2 + st.ryp**2 * st.rz**2)
    b = st.rxp * np.sqrt(st.ry**2 * st.rz**2 + st.ryp**2 * st.rzp**2)
    value = float(a * s1 + b * s2)
    return value, value > MERMIN_CLASSICAL_BOUND


def mermin_six_variant_criterion(t, strengths: Strengths, angles) -> tuple[float, bool]:
    """Criterion for violating at least one of the six exchanged operators.

    Uses the absolute-value form of I+-: exchanging a party's observables
    flips the sign of that party's angle-cosine cross term, so the largest
    variant bound takes each cross term at its absolute value.  For equal
    per-side strengths all cross terms vanish and the criterion coincides
    exactly with the base bound.
    """
    s1, s2 = _t_svals(t)
    ip, im = i_plus_minus(strengths, angles, absolute=True)
    value = float(_pair_bound(s1, s2, ip, im))
    return value, value > MERMIN_CLASSICAL_BOUND


def k_max(strengths: Strengths) -> float:
    """Largest bias-only contribution to the Mermin expectation on a T-state.

    The contribution is multilinear in the six biases, so its maximum sits
    at the extreme biases +-(1 - R).  The sign patterns fall into two
    coherent classes; each class maximum has a closed form and the result
    matches exhaustive enumeration of all 64 sign choices exactly.
    """
    bx, bxp, by, byp, bz, bzp = strengths.bars
    e1 = bx * (by * bzp + byp * bz) + bxp * abs(by * bz - byp * bzp)
    e2 = bx * abs(by * bzp - byp * bz) + bxp * (by * bz + byp * bzp)
    return float(max(e1, e2))


def mermin_bound_tstate(t, strengths: Strengths, angles,
                        decomp: CorrelationDecomposition | None = None) -> BoundReport:
    """Bound for arbitrary (possibly biased) observables on a T-state.

    Adds the bias-only maximum ``k_max`` to the unbiased bound; biases and
    directions are independent parameters, so both parts are simultaneously
    achievable whenever the unbiased part is.  When ``decomp`` is supplied
    the state is checked to actually be a T-state.
    """
    if decomp is not None and not is_tstate(decomp):
        raise ValueError("state is not a T-state: local or bipartite blocks are nonzero")
    base = mermin_bound_unbiased(t, strengths, angles)
    return BoundReport(
        bound_value=base.bound_value + k_max(strengths),
        criterion="mermin_tstate_general",
        achieving_angles=base.achieving_angles,
    )


def mermin_biased_window(p: float) -> tuple[float, float]:
    """Strength window in which only biased observables can violate.

    For equal strengths R on all six observables and P = sqrt(s1^2 + s2^2),
    the unbiased optimum is 2 R^3 P and the biased T-state optimum adds
    2 (1 - R)^3.  Returns (r_unbiased, r_biased): above r_unbiased the
    unbiased optimum exceeds 2; above the strictly smaller r_biased the
    biased optimum already does.
    """
    if p <= 1.0:
        raise ValueError(f"window requires sqrt(s1^2+s2^2) > 1, got {p!r}")
    r_unbiased = p ** (-1.0 / 3.0)
    r_biased = (-3.0 + np.sqrt(3.0) * np.sqrt(4.0 * p - 1.0)) / (2.0 * (p - 1.0))
    return float(r_unbiased), float(r_biased)


def mermin_bound_x_asymmetric(t, rx: float, rxp: float, ry: float, rz: float,
                              tstate: bool = False) -> BoundReport:
    """Bound with unequal strengths on the X side only (R_X >= R_X').

    Value 2 R_Y R_Z sqrt(R_X^2 s1^2 + R_X'^2 s2^2), valid at every angle
    triple.  The reported angles are the stated optimum family
    sin(ty) sin(tz) = 2 R_X R_X' s1 s2 / (R_X^2 s1^2 + R_X'^2 s2^2), tx = pi/2.
    """
    if rxp > rx + 1e-12:
        raise ValueError("requires rx >= rxp; swap the X-side labels")
    s1, s2 = _t_svals(t)
    value = 2.0 * ry * rz * np.sqrt(rx**2 * s1**2 + rxp**2 * s2**2)
    denom = rx**2 * s1**2 + rxp**2 * s2**2
    ratio = 0.0 if denom <= 0 else 2.0 * rx * rxp * s1 * s2 / denom
    ty = float(np.arcsin(np.clip(np.sqrt(ratio), 0.0, 1.0)))
    criterion = "mermin_x_asymmetric"
    if tstate:
        value += 2.0 * (1.0 - rx) * (1.0 - ry) * (1.0 - rz)
        criterion = "mermin_x_asymmetric_tstate"
    return BoundReport(
        bound_value=float(value),
        criterion=criterion,
        achieving_angles=(np.pi / 2, ty, ty),
        notes="angle family: sin(ty)*sin(tz) fixed; symmetric representative reported",
    )


def mermin_bound_degenerate_smax(strengths: Strengths, s_max: float,
                                 tstate: bool = False) -> BoundReport:
    """Bound when the two largest singular values of T coincide (s1 = s2).

    Value s_max * sqrt(I0 + 2 Gamma0) with
    Gamma0 = R_X R_X' sqrt(R_Y^2 R_Y'^2 (R_Z^4 + R_Z'^4) + R_Z^2 R_Z'^2 (R_Y^4 + R_Y'^4)).
    Valid for angle triples with ty = pi/2 or tz = pi/2 (the slices on which
    the optimization is carried out); reaches 2 sqrt(2) s_max at unit strengths.
    """
    st = strengths
    i0, *_ = _i_coefficients(st)
    gamma0 = st.rx * st.rxp * np.sqrt(
        st.ry**2 * st.ryp**2 * (st.rz**4 + st.rzp**4)
        + st.rz**2 * st.rzp**2 * (st.ry**4 + st.ryp**4))
    value = s_max * np.sqrt(i0 + 2.0 * gamma0)
    # stated optimum: tan(tx) = Rz Rz' (Ry^2 + Ry'^2) / (Ry Ry' (Rz^2 - Rz'^2)),
    # cos(ty) = sign(Rx - Rx'), tz = pi/2
    tx = float(np.arctan2(st.rz * st.rzp * (st.ry**2 + st.ryp**2),
                          st.ry * st.ryp * (st.rz**2 - st.rzp**2)))
    ty = float(np.arccos(np.sign(st.rx - st.rxp)))
    criterion = "mermin_degenerate_smax"
    if tstate:
        value += k_max(st)
        criterion = "mermin_degenerate_smax_tstate"
    return BoundReport(
        bound_value=float(value),
        criterion=criterion,
        achieving_angles=(tx, ty, np.pi / 2),
    )


def optimal_unbiased_angles(t, strengths: Strengths, resolution: int = 64,
                            *, absolute: bool = False) -> tuple[tuple[float, float, float], float]:
    """Grid-maximize the closed-form unbiased bound over the angle cube.

    Returns (angles, bound value).  Used when no closed-form optimal-angle
    result applies to the given strength pattern.
    """
    s1, s2 = _t_svals(t)
    grid = np.linspace(0.0, np.pi, resolution)
    tx, ty, tz = np.meshgrid(grid, grid, grid, indexing="ij", sparse=True)
    ip, im = i_plus_minus(strengths, (tx, ty, tz), absolute=absolute)
    values = _pair_bound(s1, s2, ip, im)
    flat = int(np.argmax(values))
    ix, iy, iz = np.unravel_index(flat, values.shape)
    return (float(grid[ix]), float(grid[iy]), float(grid[iz])), float(values[ix, iy, iz])
