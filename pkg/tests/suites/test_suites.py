from __future__ import annotations

from typing import TYPE_CHECKING

import pytest  # type: ignore

from qabel.suites import SUITES
from qabel.suites import VERIFY_ALL
from qabel.suites.checks import run_checks

if TYPE_CHECKING:
    from qabel.suites.checks import RunContext


def test_registry() -> None:
    assert set(VERIFY_ALL) | {'curve', 'threefold'} == set(SUITES)
    ids = [check.id for checks in SUITES.values() for check in checks]
    assert len(ids) == len(set(ids))


@pytest.mark.parametrize(
    'name', ['quaternion', 'forms', 'bundle'], ids=lambda arg: f'{arg}'
)
def test_identity_suites_pass(context: RunContext, name: str) -> None:
    context.samples = 5
    records = run_checks(context, SUITES[name])
    failed = [record.id for record in records if record.status == 'fail']
    assert [] == failed


@pytest.mark.slow
@pytest.mark.parametrize(
    'name',
    ['group', 'chern-simons', 'tubular', 'curve', 'threefold'],
    ids=lambda arg: f'{arg}',
)
def test_acceptance_suites_pass(context: RunContext, name: str) -> None:
    records = run_checks(context, SUITES[name])
    failed = [record.id for record in records if record.status == 'fail']
    assert [] == failed
