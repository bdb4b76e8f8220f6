"""Diagonal operators, the fractional resolvent and the imaginary spectral set.

For ``A`` with eigenvalues ``mu_n`` the fractional resolvent
``lambda^(alpha-1) (lambda^alpha - A)^(-1)`` is diagonal. The set
``Sigma_i(A, alpha)`` collects the points ``lambda`` on the imaginary axis with
``lambda^alpha = mu_n`` for some ``n``.

Two conventions for ``lambda^alpha`` are supported (:class:`Branch`):

``MULTIVALUED``
    ``lambda`` solves ``lambda^alpha = mu`` when *some* determination of the
    power does, i.e. ``|lambda| = |mu|^(1/alpha)`` and ``arg lambda = pi/alpha``
    modulo ``2 pi``. This reproduces the worked Dirichlet-Laplacian examples
    (``Sigma_i = {-i n^3 pi}`` for ``alpha = 2/3``).
``PRINCIPAL``
    ``lambda^alpha = |lambda|^alpha exp(i alpha arg lambda)`` with
    ``arg in (-pi, pi]``. Then ``arg lambda^alpha`` never reaches ``pi`` for
    ``alpha < 1``, and the set is empty for negative eigenvalues.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from fracperiod.errors import SingularityError, UnsupportedOperatorError
from fracperiod.fractional_calculus import check_order

#: relative tolerance of the imaginary-axis test
IMAGINARY_TOL = 1.0e-9
#: absolute tolerance on frequency ratios in membership tests
MEMBERSHIP_TOL = 1.0e-9
#: deduplication tolerance on the unit circle
CIRCLE_DEDUP_TOL = 1.0e-9
#: points of e^Sigma closer than this to 1 are identified with 1
UNIT_POINT_TOL = 1.0e-12
#: default number of modes in truncated spectral computations
DEFAULT_MODES = 10


class Branch(enum.Enum):
    MULTIVALUED = "multivalued"
    PRINCIPAL = "principal"


class OperatorKind(enum.Enum):
    EXPLICIT = "explicit"
    DIRICHLET_LAPLACIAN_1D = "dirichlet_laplacian"


@dataclass(frozen=True)
class DiagonalOperator:
    """Operator given by eigenvalues ``mu_n`` attached to mode labels ``n``."""

    eigenvalues: tuple[complex, ...]
    modes: tuple[int, ...]
    kind: OperatorKind = OperatorKind.EXPLICIT
    diffusivity: float | None = None

    def __post_init__(self) -> None:
        if len(self.eigenvalues) < 1:
            raise UnsupportedOperatorError("operator needs at least one mode")
        if len(self.modes) != len(self.eigenvalues):
            raise UnsupportedOperatorError("one mode label per eigenvalue is required")
        if len(set(self.modes)) != len(self.modes):
            raise UnsupportedOperatorError("mode labels must be distinct")

    @classmethod
    def explicit(
        cls, eigenvalues: Iterable[complex], modes: Sequence[int] | None = None
    ) -> DiagonalOperator:
        eigs = tuple(complex(mu) for mu in eigenvalues)
        labels = tuple(modes) if modes is not None else tuple(range(1, len(eigs) + 1))
        return cls(eigs, labels)

    @classmethod
    def dirichlet_laplacian(
        cls, a: float, n_modes: int | None = None, *, modes: Sequence[int] | None = None
    ) -> DiagonalOperator:
        """``a d^2/dx^2`` on ``(0, pi)`` with Dirichlet conditions: ``mu_n = -a n^2``.

        Either the first ``n_modes`` modes or an explicit list of ``modes``.
        """
        if not a > 0.0:
            raise UnsupportedOperatorError(f"diffusivity must be positive: got {a}")
        if modes is None:
            if n_modes is None or n_modes < 1:
                raise UnsupportedOperatorError("operator needs at least one mode")
            modes = range(1, n_modes + 1)
        labels = tuple(int(n) for n in modes)
        if any(n < 1 for n in labels):
            raise UnsupportedOperatorError("Dirichlet modes are numbered from 1")
        eigs = tuple(complex(-a * n * n) for n in labels)
        return cls(eigs, labels, OperatorKind.DIRICHLET_LAPLACIAN_1D, float(a))

    @property
    def size(self) -> int:
        return len(self.eigenvalues)

    @property
    def mu(self) -> np.ndarray:
        return np.array(self.eigenvalues, dtype=np.complex128)

    def is_exponentially_stable(self) -> bool:
        return max(mu.real for mu in self.eigenvalues) < 0.0

    def permuted(self, order: Sequence[int]) -> DiagonalOperator:
        return DiagonalOperator(
            tuple(self.eigenvalues[i] for i in order),
            tuple(self.modes[i] for i in order),
            self.kind,
            self.diffusivity,
        )


def principal_power(lam: complex, alpha: float) -> complex:
    """``|lambda|^alpha exp(i alpha arg lambda)`` with ``arg in (-pi, pi]``."""
    if lam == 0:
        return 0j
    return abs(lam) ** alpha * cmath.exp(1j * alpha * cmath.phase(lam))


def _branch_values(lam: complex, alpha: float) -> list[complex]:
    # all determinations |lam|^alpha exp(i alpha (arg lam + 2 pi k)) that can be
    # distinct modulo 2 pi; enough for rational alpha with small denominator
    r = abs(lam) ** alpha
    arg = cmath.phase(lam)
    kmax = int(math.ceil(1.0 / alpha)) + 1
    return [r * cmath.exp(1j * alpha * (arg + 2.0 * math.pi * k)) for k in range(-kmax, kmax + 1)]


def resolvent_alpha(
    op: DiagonalOperator,
    alpha: float,
    lam: complex,
    *,
    branch: Branch = Branch.PRINCIPAL,
) -> np.ndarray:
    """Diagonal of ``lambda^(alpha-1) (lambda^alpha - A)^(-1)``.

    Values use the principal power. With ``branch=MULTIVALUED`` a mode is also
    declared singular when a non-principal determination of ``lambda^alpha``
    meets its eigenvalue.
    """
    alpha = check_order(alpha)
    lam = complex(lam)
    if lam == 0:
        raise SingularityError(0, "lambda = 0 is a branch point of lambda^alpha")

    power = principal_power(lam, alpha)
    candidates = [power] if branch is Branch.PRINCIPAL else _branch_values(lam, alpha)
    for label, mu in zip(op.modes, op.eigenvalues):
        for p in candidates:
            if abs(p - mu) <= 1.0e-12 * max(abs(mu), abs(p)):
                raise SingularityError(
                    label, f"lambda^alpha = {mu:.6g} is an eigenvalue (mode {label})"
                )

    factor = power / lam  # lambda^(alpha - 1)
    return factor / (power - op.mu)


@dataclass(frozen=True)
class SpectralSet:
    """Finite truncation of ``Sigma_i(A, alpha)``: points on the imaginary axis."""

    points: tuple[complex, ...]
    generated_from: tuple[int, ...]
    include_conjugates: bool = False
    truncation: int = 0
    branch: Branch = Branch.MULTIVALUED

    def __len__(self) -> int:
        return len(self.points)

    @property
    def imag(self) -> np.ndarray:
        return np.array([p.imag for p in self.points])


@dataclass(frozen=True)
class UnitCircleSet:
    points: tuple[complex, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.points)

    def contains(self, z: complex, tol: float = CIRCLE_DEDUP_TOL) -> bool:
        return any(abs(p - z) <= tol for p in self.points)


def _wrap_angle(theta: float) -> float:
    # into (-pi, pi]
    w = math.remainder(theta, 2.0 * math.pi)
    return math.pi if w <= -math.pi else w


def _dedup(points: Iterable[complex], tol: float) -> list[complex]:
    out: list[complex] = []
    for p in points:
        if not any(abs(p - q) <= tol * max(1.0, abs(q)) for q in out):
            out.append(p)
    return out


def sigma_i(
    op: DiagonalOperator,
    alpha: float,
    include_conjugates: bool = True,
    *,
    branch: Branch = Branch.MULTIVALUED,
) -> SpectralSet:
    """Points of the imaginary axis where ``lambda^alpha`` meets an eigenvalue.

    Only negative real eigenvalues are supported. For each mode the candidate
    is ``|mu|^(1/alpha) e^(i theta)`` with ``theta = pi / alpha`` wrapped into
    ``(-pi, pi]``; it is kept if it lies on the imaginary axis.
    """
    alpha = check_order(alpha)
    for label, mu in zip(op.modes, op.eigenvalues):
        if mu.imag != 0.0 or not mu.real < 0.0:
            raise UnsupportedOperatorError(
                f"sigma_i needs negative real eigenvalues; mode {label} has {mu}"
            )

    theta = math.pi / alpha
    if branch is Branch.PRINCIPAL and theta > math.pi:
        # principal powers of lambda have |arg| <= alpha pi < pi
        return SpectralSet((), (), include_conjugates, op.size, branch)
    theta = _wrap_angle(theta)
    direction = cmath.exp(1j * theta)

    points: list[complex] = []
    labels: list[int] = []
    for label, mu in zip(op.modes, op.eigenvalues):
        radius = abs(mu.real) ** (1.0 / alpha)
        lam = radius * direction
        if abs(lam.real) <= IMAGINARY_TOL * abs(lam):
            # on the axis within tolerance: store the exact imaginary point
            points.append(complex(0.0, lam.imag))
            labels.append(label)
            if include_conjugates:
                points.append(complex(0.0, -lam.imag))

    points = _dedup(points, IMAGINARY_TOL)
    return SpectralSet(tuple(points), tuple(labels), include_conjugates, op.size, branch)


def exp_sigma(s: SpectralSet) -> UnitCircleSet:
    """Image ``{e^lambda}`` of a spectral set, deduplicated and sorted by angle."""
    images = [cmath.exp(p) for p in s.points]
    unique = _dedup(images, CIRCLE_DEDUP_TOL)
    unique.sort(key=lambda z: (round(cmath.phase(z), 12), z.real))
    return UnitCircleSet(tuple(unique))


# {{{ hypotheses


class Variant(enum.Enum):
    PERIODIC = "periodic"
    ANTI_PERIODIC = "anti_periodic"


def _is_integer(x: float, tol: float = MEMBERSHIP_TOL) -> bool:
    return abs(x - round(x)) <= tol


def in_two_pi_z(omega: float) -> bool:
    return _is_integer(omega / (2.0 * math.pi))


def in_odd_pi_z(omega: float) -> bool:
    r = omega / math.pi
    return _is_integer(r) and round(r) % 2 != 0


def katznelson_tzafriri_hypothesis(
    s: SpectralSet, forcing_freqs: Iterable[float], variant: Variant = Variant.PERIODIC
) -> bool:
    """Spectral smallness condition for all solutions to be asymptotically
    1-periodic (``Sigma_i in 2 pi i Z``, frequencies in ``2 pi Z``) or
    anti-periodic (odd multiples of ``pi``)."""
    member = in_two_pi_z if variant is Variant.PERIODIC else in_odd_pi_z
    return all(member(p.imag) for p in s.points) and all(member(w) for w in forcing_freqs)


@dataclass(frozen=True)
class MasseraConditions:
    """The four sub-conditions of the Massera-type existence theorem."""

    stable: bool
    sector_free: bool
    closed_away_from_one: bool
    forcing_periodic: bool
    #: distance from 1 to e^Sigma \ {1}; infinite when that set is empty
    min_distance: float

    @property
    def holds(self) -> bool:
        return self.stable and self.sector_free and self.closed_away_from_one and self.forcing_periodic

    def as_dict(self) -> dict:
        return {
            "a_exponentially_stable": self.stable,
            "b_sector_in_resolvent": self.sector_free,
            "c_exp_sigma_minus_one_closed": self.closed_away_from_one,
            "d_forcing_in_2piZ": self.forcing_periodic,
            "min_distance_to_one": None if math.isinf(self.min_distance) else self.min_distance,
            "holds": self.holds,
        }


def distance_from_one(images: UnitCircleSet) -> float:
    rest = [abs(z - 1.0) for z in images.points if abs(z - 1.0) > UNIT_POINT_TOL]
    return min(rest) if rest else math.inf


def massera_conditions(
    op: DiagonalOperator, alpha: float, s: SpectralSet, forcing_freqs: Iterable[float]
) -> MasseraConditions:
    alpha = check_order(alpha)
    stable = op.is_exponentially_stable()
    # {lambda^alpha : Re lambda > 0} is the open sector |arg z| < alpha pi / 2
    sector_free = all(
        mu == 0 or abs(cmath.phase(mu)) >= 0.5 * alpha * math.pi for mu in op.eigenvalues
    )
    dist = distance_from_one(exp_sigma(s))
    return MasseraConditions(
        stable=stable,
        sector_free=sector_free,
        closed_away_from_one=dist > MEMBERSHIP_TOL,
        forcing_periodic=all(in_two_pi_z(w) for w in forcing_freqs),
        min_distance=dist,
    )


def massera_hypothesis(
    op: DiagonalOperator, alpha: float, s: SpectralSet, forcing_freqs: Iterable[float]
) -> bool:
    return massera_conditions(op, alpha, s, forcing_freqs).holds


# }}}
