"""General dichotomic qubit observables and Bell-operator expectations.

An observable with outcomes +-1 is parameterized as B*I + R*(sigma . n)
with bias B, strength R >= 0 and unit direction n, subject to R + |B| <= 1
(positivity of the two effects).  Strength 1 with zero bias is projective;
strength 0 is a coin toss with outcome probabilities (1 +- B)/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PAULI, CorrelationDecomposition

__all__ = [
    "GeneralObservable",
    "MeasurementSetting",
    "triple_expectation",
    "mermin_expectation",
    "svetlichny_expectation",
    "variant_expectations",
    "MERMIN_TERMS",
    "SVETLICHNY_TERMS",
    "VARIANT_SWAPS",
]

CONSTRAINT_TOL = 1e-12


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class GeneralObservable:
    bias: float
    strength: float
    direction: np.ndarray

    def __post_init__(self):
        direction = np.asarray(self.direction, dtype=float)
        if direction.shape != (3,):
            raise ValueError("direction must be a 3-vector")
        norm = np.linalg.norm(direction)
        if abs(norm - 1.0) > CONSTRAINT_TOL:
            raise ValueError(f"direction norm {norm!r} is not 1")
        if self.strength < 0:
            raise ValueError("strength must be non-negative")
        # <= with slack so the boundary R + |B| = 1 (extreme biases) is accepted
        if self.strength + abs(self.bias) > 1.0 + CONSTRAINT_TOL:
            raise ValueError(
                f"strength + |bias| = {self.strength + abs(self.bias)!r} exceeds 1")
        direction = direction.copy()
        direction.flags.writeable = False
        object.__setattr__(self, "direction", direction)

    @classmethod
    def sharp(cls, direction) -> "GeneralObservable":
        return cls(bias=0.0, strength=1.0, direction=_unit(direction))

    def matrix(self) -> np.ndarray:
        n = self.direction
        return self.bias * PAULI[0] + self.strength * (
            n[0] * PAULI[1] + n[1] * PAULI[2] + n[2] * PAULI[3])


def _angle_between(a: np.ndarray, b: np.ndarray) -> float:
    # clamp before arccos so numerically parallel vectors cannot produce NaN
    return float(np.arccos(np.clip(a @ b, -1.0, 1.0)))


@dataclass(frozen=True)
class MeasurementSetting:
    """Six observables, two per party, labeled X, X', Y, Y', Z, Z'."""

    x: GeneralObservable
    x_prime: GeneralObservable
    y: GeneralObservable
    y_prime: GeneralObservable
    z: GeneralObservable
    z_prime: GeneralObservable

    @property
    def observables(self) -> tuple[GeneralObservable, ...]:
        return (self.x, self.x_prime, self.y, self.y_prime, self.z, self.z_prime)

    @property
    def relative_angles(self) -> tuple[float, float, float]:
        """(theta_x, theta_y, theta_z), each in [0, pi], from the directions."""
        return (
            _angle_between(self.x.direction, self.x_prime.direction),
            _angle_between(self.y.direction, self.y_prime.direction),
            _angle_between(self.z.direction, self.z_prime.direction),
        )

    @property
    def strengths_array(self) -> np.ndarray:
        return np.array([o.strength for o in self.observables])

    @property
    def biases_array(self) -> np.ndarray:
        return np.array([o.bias for o in self.observables])

    @classmethod
    def from_arrays(cls, biases, strengths, directions) -> "MeasurementSetting":
        obs = [GeneralObservable(bias=float(b), strength=float(r), direction=d)
               for b, r, d in zip(biases, strengths, directions)]
        return cls(*obs)

    def swapped(self, pattern: tuple[int, int, int]) -> "MeasurementSetting":
        """Exchange primed and unprimed observables on the flagged parties."""
        x, xp = (self.x_prime, self.x) if pattern[0] else (self.x, self.x_prime)
        y, yp = (self.y_prime, self.y) if pattern[1] else (self.y, self.y_prime)
        z, zp = (self.z_prime, self.z) if pattern[2] else (self.z, self.z_prime)
        return MeasurementSetting(x, xp, y, yp, z, zp)


def triple_expectation(decomp: CorrelationDecomposition,
                       x_obs: GeneralObservable,
                       y_obs: GeneralObservable,
                       z_obs: GeneralObservable) -> float:
    """<X Y Z> on the state behind ``decomp``, in closed form.

    Eight terms: the pure bias product, three bias*bias*Bloch terms, three
    bias*bipartite terms and the tripartite contraction x^T T (y kron z).
    Agrees with the dense 8x8 trace to machine precision.
    """
    bx, by, bz = x_obs.bias, y_obs.bias, z_obs.bias
    rx, ry, rz = x_obs.strength, y_obs.strength, z_obs.strength
    x, y, z = x_obs.direction, y_obs.direction, z_obs.direction
    t = decomp.t_matrix
    return float(
        bx * by * bz
        + by * bz * rx * (decomp.bloch_a @ x)
        + bx * bz * ry * (decomp.bloch_b @ y)
        + bx * by * rz * (decomp.bloch_c @ z)
        + bz * rx * ry * (x @ decomp.theta_mat @ y)
        + by * rx * rz * (x @ decomp.phi_mat @ z)
        + bx * ry * rz * (y @ decomp.omega_mat @ z)
        + rx * ry * rz * (x @ t @ np.kron(y, z))
    )


# Terms as (x-slot, y-slot, z-slot, sign) with slots indexing
# (X, X', Y, Y', Z, Z').  The first four are XYZ' + XY'Z + X'YZ - X'Y'Z';
# the Svetlichny combination subtracts the complementary four.
MERMIN_TERMS = ((0, 2, 5, 1.0), (0, 3, 4, 1.0), (1, 2, 4, 1.0), (1, 3, 5, -1.0))
SVETLICHNY_TERMS = MERMIN_TERMS + (
    (1, 3, 4, -1.0), (1, 2, 5, -1.0), (0, 3, 5, -1.0), (0, 2, 4, 1.0))

# The six proper per-party exchange patterns.  The identity reproduces the
# base operator and the all-party exchange its partner combination, so the
# six patterns below are the distinct new operators the exchanges generate.
VARIANT_SWAPS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1))


def _operator_expectation(decomp, setting, terms) -> float:
    obs = setting.observables
    return sum(sign * triple_expectation(decomp, obs[a], obs[b], obs[c])
               for a, b, c, sign in terms)


def mermin_expectation(decomp: CorrelationDecomposition,
                       setting: MeasurementSetting) -> float:
    """<XYZ'> + <XY'Z> + <X'YZ> - <X'Y'Z'>."""
    return _operator_expectation(decomp, setting, MERMIN_TERMS)


def svetlichny_expectation(decomp: CorrelationDecomposition,
                           setting: MeasurementSetting) -> float:
    """The eight-term combination whose classical bound is 4."""
    return _operator_expectation(decomp, setting, SVETLICHNY_TERMS)


def variant_expectations(decomp: CorrelationDecomposition,
                         setting: MeasurementSetting,
                         operator_kind: str) -> list[float]:
    """The operator value under the six proper primed/unprimed exchanges."""
    terms = _terms_for(operator_kind)
    return [_operator_expectation(decomp, setting.swapped(p), terms)
            for p in VARIANT_SWAPS]


def _terms_for(operator_kind: str):
    if operator_kind == "mermin":
        return MERMIN_TERMS
    if operator_kind == "svetlichny":
        return SVETLICHNY_TERMS
    raise ValueError(f"unknown operator kind: {operator_kind!r}")
