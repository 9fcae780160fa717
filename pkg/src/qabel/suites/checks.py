"""Check records and the runner that turns suite functions into them."""
from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
import math
import time
from typing import TYPE_CHECKING

import numpy as np

from qabel.exceptions import DomainError
from qabel.exceptions import ObstructionSignal
from qabel.exceptions import QuadratureError
from qabel.integrate.quadrature import QuadratureSpec
from qabel.log import logger
from qabel.qa_constants import DEFAULT_CHUNK
from qabel.qa_collections import CheckRecord
from qabel.qa_collections import SeriesPoint

if TYPE_CHECKING:
    from typing import Any
    from typing import Callable
    from typing import Dict
    from typing import List
    from typing import Optional
    from typing import Sequence
    from typing import Tuple
    from typing import TypeVar

    from qabel.qa_typing import CheckStatus
    from qabel.qa_typing import Schedule
    from qabel.settings import Settings

    CheckFunction = Callable[['RunContext'], 'Outcome']
    T = TypeVar('T')

__all__ = (
    'Check',
    'Outcome',
    'RunContext',
    'max_abs',
    'run_checks',
)


@dataclass
class RunContext:
    """Options shared by every check of a run.

    :param settings: The configuration.
    :param seed: The base seed; each check derives its own from it.
    :param tolerance: Overrides every configured tolerance.
    :param samples: Overrides every configured sample count.
    :param timings: Record wall times.

    """

    settings: Settings
    seed: int = 0
    tolerance: Optional[float] = None
    samples: Optional[int] = None
    timings: bool = False
    series: List[SeriesPoint] = field(default_factory=list)
    cache: Dict[str, Any] = field(default_factory=dict, repr=False)

    def rng(self, salt: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def cached(self, key: str, build: Callable[[], T]) -> T:
        """Return the value stored under ``key``, building it once.

        :param key: The cache key.
        :param build: Computes the value.

        """
        if key not in self.cache:
            self.cache[key] = build()
        return self.cache[key]  # type: ignore

    def tol(self, section: str, key: str, fallback: float) -> float:
        """Return the configured tolerance unless ``--tolerance`` is set.

        :param section: The config section.
        :param key: The option name.
        :param fallback: The built-in default.

        """
        if self.tolerance is not None:
            return self.tolerance
        return self.settings.get_float(section, key, fallback)

    def count(self, section: str, key: str, fallback: int) -> int:
        """Return the configured sample count unless ``--samples`` is set.

        :param section: The config section.
        :param key: The option name.
        :param fallback: The built-in default.

        """
        if self.samples is not None:
            return self.samples
        return self.settings.get_int(section, key, fallback)

    def qmc(
        self, section: str, fallback: int, schedule: Schedule = ()
    ) -> QuadratureSpec:
        """Return a QMC spec seeded by the run.

        The sample count is ``[section] samples``; replicates and chunk
        size come from ``[integrate]``.

        :param section: The config section of the check.
        :param fallback: The default sample count.
        :param schedule: Excision radii.

        """
        return QuadratureSpec(
            method='qmc',
            resolution=self.count(section, 'samples', fallback),
            schedule=schedule,
            seed=self.seed,
            replicates=self.settings.get_int('integrate', 'replicates', 8),
            chunk=self.settings.get_int(
                'integrate', 'chunk', DEFAULT_CHUNK
            ),
        )

    def record_series(
        self, check: str, pairs: Sequence[Tuple[float, complex]]
    ) -> None:
        for parameter, value in pairs:
            value = complex(value)
            self.series.append(
                SeriesPoint(check, float(parameter), value.real, value.imag)
            )


@dataclass(frozen=True)
class Outcome:
    """The measurement of one check.

    ``status`` is derived from ``|measured - expected| <= tolerance``
    unless given; a ``nan`` measurement is inconclusive.

    """

    measured: float
    expected: float
    tolerance: float
    error: float = 0.0
    samples: int = 0
    status: Optional[CheckStatus] = None

    @property
    def resolved(self) -> CheckStatus:
        if self.status is not None:
            return self.status
        if math.isnan(self.measured):
            return 'inconclusive'
        if abs(self.measured - self.expected) <= self.tolerance:
            return 'pass'
        return 'fail'


@dataclass(frozen=True)
class Check:
    """Check(id, anchor, function, salt)."""

    id: str  # noqa: A003
    anchor: str
    function: CheckFunction
    salt: int = 0


def max_abs(values: np.ndarray) -> float:
    return float(np.max(np.abs(values), initial=0.0))


def run_checks(
    context: RunContext, checks: Sequence[Check]
) -> List[CheckRecord]:
    """Run ``checks`` in order and return one record each.

    Quadrature errors, domain errors and unexpected obstructions fail
    the check they occur in; the remaining checks still run.

    :param context: The run options.
    :param checks: The checks.

    """
    records = []
    for check in checks:
        logger.info(f'Running {check.id}')
        started = time.perf_counter()
        try:
            outcome = check.function(context)
        except (QuadratureError, DomainError, ObstructionSignal) as error:
            logger.warning(f'{check.id} failed: {error}')
            outcome = Outcome(
                measured=math.nan,
                expected=math.nan,
                tolerance=math.nan,
                status='fail',
            )
        runtime = (
            int(round((time.perf_counter() - started) * 1000))
            if context.timings
            else 0
        )
        status = outcome.resolved
        if status == 'inconclusive':
            logger.warning(f'{check.id} is inconclusive')
        records.append(
            CheckRecord(
                id=check.id,
                anchor=check.anchor,
                status=status,
                measured=float(outcome.measured),
                expected=float(outcome.expected),
                tolerance=float(outcome.tolerance),
                error=float(outcome.error),
                samples=int(outcome.samples),
                seed=context.seed,
                runtime_ms=runtime,
            )
        )
    return records
