"""Rendering of check records and series.

The JSON report is an array of records with the fields of
:class:`~qabel.qa_collections.CheckRecord`; ``nan`` becomes ``null`` so
that the output is strict JSON.

"""
from __future__ import annotations

import csv
import json
import math
from typing import TYPE_CHECKING

from qabel.log import logger

if TYPE_CHECKING:
    from pathlib import Path
    from typing import Any
    from typing import Dict
    from typing import List
    from typing import Sequence

    from qabel.qa_collections import CheckRecord
    from qabel.qa_collections import SeriesPoint
    from qabel.qa_typing import OutputFormat

__all__ = (
    'exit_code',
    'record_to_dict',
    'render',
    'render_json',
    'render_text',
    'write_series',
)

_COLUMNS = (
    ('status', 12),
    ('measured', 14),
    ('expected', 14),
    ('tolerance', 12),
    ('error', 12),
    ('samples', 10),
)


def _finite(value: float) -> Any:
    return None if math.isnan(value) or math.isinf(value) else value


def _json_ready(fields: Dict[str, Any]) -> Dict[str, Any]:
    return {
        name: _finite(value) if isinstance(value, float) else value
        for name, value in fields.items()
    }


def record_to_dict(record: CheckRecord) -> Dict[str, Any]:
    """Return ``record`` as a JSON-ready dictionary.

    >>> from qabel.qa_collections import CheckRecord
    >>> record = CheckRecord(
    ...     'x', 'a', 'inconclusive', float('nan'), 0.0, 0.0, 0.0, 0, 1, 0
    ... )
    >>> record_to_dict(record)['measured'] is None
    True

    :param record: The check record.

    """
    return _json_ready(record._asdict())


def render_json(records: Sequence[CheckRecord]) -> str:
    return (
        json.dumps(
            [record_to_dict(record) for record in records],
            indent=2,
            allow_nan=False,
        )
        + '\n'
    )


def _cell(value: Any, width: int) -> str:
    if isinstance(value, float):
        text = '-' if math.isnan(value) else f'{value:.4e}'
        return text.rjust(width)
    if isinstance(value, int):
        return str(value).rjust(width)
    return str(value).ljust(width)


def render_text(records: Sequence[CheckRecord]) -> str:
    """Return the records as a fixed-width table.

    :param records: The check records.

    """
    width = max([len(record.id) for record in records] + [5]) + 2
    header = 'check'.ljust(width) + ''.join(
        name.rjust(size) if name != 'status' else name.ljust(size)
        for name, size in _COLUMNS
    )
    lines: List[str] = [header, '-' * len(header)]
    for record in records:
        cells = [
            _cell(getattr(record, name), size) for name, size in _COLUMNS
        ]
        lines.append(record.id.ljust(width) + ''.join(cells))
    failed = sum(record.status == 'fail' for record in records)
    lines.append(f'{len(records)} checks, {failed} failed')
    return '\n'.join(lines) + '\n'


def render(records: Sequence[CheckRecord], output: OutputFormat) -> str:
    return render_text(records) if output == 'text' else render_json(records)


def exit_code(records: Sequence[CheckRecord]) -> int:
    """Return ``1`` if any check failed, else ``0``.

    >>> exit_code([])
    0

    :param records: The check records.

    """
    return int(any(record.status == 'fail' for record in records))


def write_series(path: Path, series: Sequence[SeriesPoint]) -> None:
    """Write the series as CSV for a ``.csv`` suffix, otherwise JSON.

    The JSON is strict: values that are not finite are written as ``null``.

    :param path: The output file.
    :param series: The recorded points.

    """
    rows = [point._asdict() for point in series]
    if path.suffix.lower() == '.csv':
        with open(path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.DictWriter(
                f, fieldnames=('check', 'parameter', 'real', 'imag')
            )
            writer.writeheader()
            writer.writerows(rows)
    else:
        text = json.dumps(
            [_json_ready(row) for row in rows], indent=2, allow_nan=False
        )
        path.write_text(text + '\n', encoding='utf-8')
    logger.info(f'Wrote {len(rows)} series points to {path}')
