from __future__ import annotations

import csv
import json
import math
from typing import TYPE_CHECKING

from qabel.qa_collections import SeriesPoint
from qabel.suites.report import exit_code
from qabel.suites.report import render
from qabel.suites.report import render_json
from qabel.suites.report import render_text
from qabel.suites.report import write_series

if TYPE_CHECKING:
    from pathlib import Path
    from typing import List

    from qabel.qa_collections import CheckRecord

SERIES = [
    SeriesPoint('tubular.mass', 0.2, 1.5, 0.0),
    SeriesPoint('tubular.mass', 0.1, 0.75, -0.25),
]


class TestRender:
    def test_json_is_strict(self, records: List[CheckRecord]) -> None:
        rows = json.loads(render_json(records))
        assert ['demo.pass', 'demo.fail'] == [row['id'] for row in rows]
        assert 1.0 == rows[0]['measured']
        assert rows[1]['measured'] is None
        assert 10 == rows[0]['samples']
        assert set(rows[0]) == set(records[0]._fields)

    def test_text_table(self, records: List[CheckRecord]) -> None:
        lines = render_text(records).splitlines()
        assert lines[0].startswith('check')
        assert lines[2].startswith('demo.pass')
        assert ['demo.fail', 'fail', '-', '-', '-'] == lines[3].split()[:5]
        assert '2 checks, 1 failed' == lines[-1]

    def test_render_dispatch(self, records: List[CheckRecord]) -> None:
        assert render_text(records) == render(records, 'text')
        assert render_json(records) == render(records, 'json')


class TestExitCode:
    def test_failed(self, records: List[CheckRecord]) -> None:
        assert 1 == exit_code(records)
        assert 0 == exit_code(records[:1])

    def test_inconclusive_is_not_failure(
        self, records: List[CheckRecord]
    ) -> None:
        record = records[1]._replace(status='inconclusive')
        assert 0 == exit_code([record])


class TestWriteSeries:
    def test_csv(self, tmp_path: Path) -> None:
        path = tmp_path / 'series.csv'
        write_series(path, SERIES)
        with open(path, encoding='utf-8', newline='') as f:
            rows = list(csv.DictReader(f))
        assert 2 == len(rows)
        assert 'tubular.mass' == rows[0]['check']
        assert 0.1 == float(rows[1]['parameter'])
        assert -0.25 == float(rows[1]['imag'])

    def test_json(self, tmp_path: Path) -> None:
        path = tmp_path / 'series.json'
        write_series(path, SERIES)
        rows = json.loads(path.read_text(encoding='utf-8'))
        assert 1.5 == rows[0]['real']
        assert ['check', 'parameter', 'real', 'imag'] == list(rows[0])

    def test_json_without_nan(self, tmp_path: Path) -> None:
        path = tmp_path / 'series.json'
        series = [SeriesPoint('tubular.mass', 0.05, float('nan'), math.inf)]
        write_series(path, series)
        text = path.read_text(encoding='utf-8')
        assert 'NaN' not in text
        assert 'Infinity' not in text
        rows = json.loads(text)
        assert rows[0]['real'] is None
        assert rows[0]['imag'] is None
        assert 0.05 == rows[0]['parameter']
