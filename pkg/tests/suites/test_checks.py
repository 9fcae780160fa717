from __future__ import annotations

import math
from typing import TYPE_CHECKING

import pytest  # type: ignore

from qabel.exceptions import DomainError
from qabel.exceptions import QuadratureError
from qabel.suites.checks import Check
from qabel.suites.checks import Outcome
from qabel.suites.checks import run_checks

if TYPE_CHECKING:
    from qabel.suites.checks import RunContext


def _failing(context: RunContext) -> Outcome:
    raise QuadratureError('The estimate exceeds the tolerance!')


class TestOutcome:
    @pytest.mark.parametrize(
        ('outcome', 'expected'),
        [
            (Outcome(1.0, 1.0, 0.0), 'pass'),
            (Outcome(1.1, 1.0, 0.05), 'fail'),
            (Outcome(float('nan'), 0.0, 1.0), 'inconclusive'),
            (Outcome(5.0, 0.0, 1.0, status='inconclusive'), 'inconclusive'),
        ],
        ids=lambda arg: f'{arg}',
    )
    def test_resolved(self, outcome: Outcome, expected: str) -> None:
        assert expected == outcome.resolved


class TestRunContext:
    def test_configured_values(self, context: RunContext) -> None:
        assert 1e-12 == context.tol('quaternion', 'tolerance', 1.0)
        assert 100 == context.count('quaternion', 'points', 1)
        assert 3 == context.count('missing', 'points', 3)

    def test_overrides(self, context: RunContext) -> None:
        context.tolerance = 0.5
        context.samples = 9
        assert 0.5 == context.tol('quaternion', 'tolerance', 1.0)
        assert 9 == context.count('quaternion', 'points', 1)

    def test_rng_is_reproducible(self, context: RunContext) -> None:
        first = context.rng(3).normal(size=4)
        assert list(first) == list(context.rng(3).normal(size=4))
        assert list(first) != list(context.rng(4).normal(size=4))

    def test_cached(self, context: RunContext) -> None:
        calls = []

        def build() -> int:
            calls.append(1)
            return 42

        assert 42 == context.cached('answer', build)
        assert 42 == context.cached('answer', build)
        assert 1 == len(calls)

    def test_qmc_spec(self, context: RunContext) -> None:
        spec = context.qmc('tubular', 10, (0.2, 0.1))
        assert 'qmc' == spec.method
        assert 65536 == spec.resolution
        assert (0.2, 0.1) == spec.schedule
        assert 7 == spec.seed
        assert 8 == spec.replicates

    def test_threefold_budget(self, context: RunContext) -> None:
        spec = context.qmc('abel-threefold', 10)
        assert 20000000 == spec.resolution
        context.samples = 4096
        assert 4096 == context.qmc('abel-threefold', 10).resolution

    def test_record_series(self, context: RunContext) -> None:
        context.record_series('demo', [(0.1, 1 + 2j), (0.05, 3.0)])
        assert 2 == len(context.series)
        assert ('demo', 0.1, 1.0, 2.0) == tuple(context.series[0])
        assert 0.0 == context.series[1].imag


class TestRunChecks:
    def test_records(self, context: RunContext) -> None:
        checks = (
            Check('demo.pass', 'a = a', lambda _: Outcome(1.0, 1.0, 0.1)),
            Check('demo.fail', 'a = b', lambda _: Outcome(2.0, 1.0, 0.1)),
        )
        records = run_checks(context, checks)
        assert ['pass', 'fail'] == [record.status for record in records]
        assert ['a = a', 'a = b'] == [record.anchor for record in records]
        assert all(7 == record.seed for record in records)
        assert all(0 == record.runtime_ms for record in records)

    def test_errors_fail_only_their_check(self, context: RunContext) -> None:
        def domain(_: RunContext) -> Outcome:
            raise DomainError('The chart box must have positive volume!')

        checks = (
            Check('demo.quadrature', 'x', _failing),
            Check('demo.domain', 'y', domain),
            Check('demo.ok', 'z', lambda _: Outcome(0.0, 0.0, 0.0)),
        )
        records = run_checks(context, checks)
        assert ['fail', 'fail', 'pass'] == [r.status for r in records]
        assert math.isnan(records[0].measured)

    def test_unexpected_errors_propagate(self, context: RunContext) -> None:
        def broken(_: RunContext) -> Outcome:
            raise KeyError('x')

        with pytest.raises(KeyError):
            run_checks(context, (Check('demo.broken', 'x', broken),))
