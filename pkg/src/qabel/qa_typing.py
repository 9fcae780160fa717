from __future__ import annotations

from typing import Literal
from typing import Tuple

CheckStatus = Literal['pass', 'fail', 'inconclusive']
ChartName = Literal['hopf', 'euler']
Method = Literal['periodic-grid', 'gauss-grid', 'qmc']
OutputFormat = Literal['json', 'text']
Role = Literal['zero', 'pole']

MultiIndex = Tuple[int, ...]
Schedule = Tuple[float, ...]
