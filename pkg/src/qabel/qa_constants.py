from __future__ import annotations

import math
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from typing import Final

TWO_PI_I: Final[complex] = 2j * math.pi
S3_VOLUME: Final[float] = 2 * math.pi ** 2
S3_CONSTANT: Final[float] = 24 * math.pi ** 2
ABEL_CONSTANT: Final[float] = 8 * math.pi ** 2
SINGULAR_THRESHOLD: Final[float] = 1e-12
DEFAULT_CHUNK: Final[int] = 4096
CS_T_NODES: Final[int] = 32
