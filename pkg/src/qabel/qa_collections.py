from __future__ import annotations

from typing import NamedTuple
from typing import TYPE_CHECKING
from typing import TypedDict

if TYPE_CHECKING:
    from typing import Tuple

    from qabel.qa_typing import CheckStatus


class Config(TypedDict, total=False):
    """Config(log_level: str, log_file: str)."""

    log_level: str
    log_file: str


class Tube(NamedTuple):
    """Tube(center: Tuple[complex, ...], axes: Tuple[int, ...], radius).

    :ivar center:  The complex coordinates of the singular set along
        ``axes``.
    :ivar axes:  Indices of the chart coordinates the distance is
        measured in.  A point of a curve uses one axis, a line in
        ``C^3`` uses two.
    :ivar radius:  Points closer than ``radius`` are excised.

    """

    center: Tuple[complex, ...]
    axes: Tuple[int, ...]
    radius: float


class Partial(NamedTuple):
    """Partial(delta: float, value: complex)."""

    delta: float
    value: complex


class Extrapolation(NamedTuple):
    """Extrapolation(value: complex, residual: float, coefficients)."""

    value: complex
    residual: float
    coefficients: Tuple[complex, ...]


class IntegralResult(NamedTuple):
    """IntegralResult(value, error, samples, partials, residual).

    :ivar value:  The integral, or the ``delta -> 0`` extrapolant when
        an excision schedule was used.
    :ivar error:  The error estimate of ``value``.
    :ivar samples:  The number of integrand evaluations.
    :ivar partials:  One :class:`Partial` per excision radius.
    :ivar residual:  The residual of the extrapolation fit, ``0.0``
        without extrapolation.

    """

    value: complex
    error: float
    samples: int
    partials: Tuple[Partial, ...] = ()
    residual: float = 0.0


class DecayFit(NamedTuple):
    """DecayFit(exponent: float, log_power: float, constant: float)."""

    exponent: float
    log_power: float
    constant: float


class S3Constant(NamedTuple):
    """S3Constant(value: float, volume: float, error: float, samples)."""

    value: float
    volume: float
    error: float
    samples: int


class CSPairing(NamedTuple):
    """CSPairing(value: complex, error: float, samples: int, partials).

    :ivar value:  ``integral(tau ^ CS)``.
    :ivar error:  The quadrature error estimate.
    :ivar samples:  The number of integrand evaluations.
    :ivar partials:  Per-radius values when singular sets are excised.

    """

    value: complex
    error: float
    samples: int
    partials: Tuple[Partial, ...] = ()


class LimitReport(NamedTuple):
    """LimitReport(radii, boundary, mass, fit, boundary_limit, pairing).

    :ivar radii:  The tube radii, strictly decreasing.
    :ivar boundary:  The signed boundary integrals, one per radius.
    :ivar mass:  The unsigned boundary integrals, one per radius.
    :ivar fit:  The :class:`DecayFit` of ``mass``.
    :ivar boundary_limit:  The ``eps -> 0`` extrapolant of ``boundary``.
    :ivar pairing:  The extrapolated pairing over the complement of the
        tube.

    """

    radii: Tuple[float, ...]
    boundary: Tuple[complex, ...]
    mass: Tuple[float, ...]
    fit: DecayFit
    boundary_limit: Extrapolation
    pairing: Extrapolation


class Windings(NamedTuple):
    """Windings(m: int, n: int, raw_m: float, raw_n: float)."""

    m: int
    n: int
    raw_m: float
    raw_n: float


class LocalizationResult(NamedTuple):
    """LocalizationResult(lhs, rhs, ratio, error, sign).

    :ivar lhs:  ``(1/3) integral(g* tr((h^-1 dh)^3) ^ d beta)``, times
        ``sign``.
    :ivar rhs:  ``8 pi^2 (integral_Q beta - integral_P beta)``.
    :ivar ratio:  ``lhs / rhs``, or ``nan`` when ``rhs`` is below
        noise.
    :ivar error:  The error estimate of ``lhs``.
    :ivar sign:  The calibrated orientation sign.

    """

    lhs: complex
    rhs: complex
    ratio: complex
    error: float
    sign: int


class CheckRecord(NamedTuple):
    """One row of the verification report.

    :ivar id:  Stable check identifier, e.g. ``group.s3-constant``.
    :ivar anchor:  The short quote of the identity being checked.
    :ivar status:  ``pass``, ``fail`` or ``inconclusive``.
    :ivar measured:  The measured value (real part for complex values).
    :ivar expected:  The expected value.
    :ivar tolerance:  The acceptance tolerance.
    :ivar error:  The numerical error estimate.
    :ivar samples:  The number of samples or evaluation points.
    :ivar seed:  The seed that determines the sample set.
    :ivar runtime_ms:  Wall time, ``0`` unless timings were requested.

    """

    id: str  # noqa: A003
    anchor: str
    status: CheckStatus
    measured: float
    expected: float
    tolerance: float
    error: float
    samples: int
    seed: int
    runtime_ms: int


class SeriesPoint(NamedTuple):
    """SeriesPoint(check, parameter, real, imag).

    One point of an excision or tube-radius study, written by
    ``--series``.

    """

    check: str
    parameter: float
    real: float
    imag: float
