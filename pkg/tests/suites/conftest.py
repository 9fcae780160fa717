from __future__ import annotations

from typing import TYPE_CHECKING

import pytest  # type: ignore

from qabel.qa_collections import CheckRecord
from qabel.settings import Settings
from qabel.suites.checks import RunContext

if TYPE_CHECKING:
    from typing import List


@pytest.fixture
def settings() -> Settings:
    """Return the settings freshly read from the packaged config."""
    return Settings()


@pytest.fixture
def context(settings: Settings) -> RunContext:
    return RunContext(settings, seed=7)


@pytest.fixture
def records() -> List[CheckRecord]:
    return [
        CheckRecord(
            'demo.pass', 'a = a', 'pass', 1.0, 1.0, 1e-9, 0.0, 10, 7, 0
        ),
        CheckRecord(
            'demo.fail',
            'b = c',
            'fail',
            float('nan'),
            float('nan'),
            float('nan'),
            0.0,
            0,
            7,
            0,
        ),
    ]
