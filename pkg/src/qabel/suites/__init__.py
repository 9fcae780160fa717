from __future__ import annotations

from typing import TYPE_CHECKING

from qabel.suites.abel_checks import CURVE_CHECKS
from qabel.suites.abel_checks import THREEFOLD_CHECKS
from qabel.suites.currents import CS_CHECKS
from qabel.suites.currents import TUBULAR_CHECKS
from qabel.suites.identities import BUNDLE_CHECKS
from qabel.suites.identities import FORMS_CHECKS
from qabel.suites.identities import GROUP_CHECKS
from qabel.suites.identities import QUATERNION_CHECKS

if TYPE_CHECKING:
    from typing import Dict
    from typing import Tuple

    from qabel.suites.checks import Check

__all__ = ('SUITES', 'VERIFY_ALL')

SUITES: Dict[str, Tuple[Check, ...]] = {
    'quaternion': QUATERNION_CHECKS,
    'forms': FORMS_CHECKS,
    'group': GROUP_CHECKS,
    'bundle': BUNDLE_CHECKS,
    'chern-simons': CS_CHECKS,
    'tubular': TUBULAR_CHECKS,
    'curve': CURVE_CHECKS,
    'threefold': THREEFOLD_CHECKS,
}

VERIFY_ALL = (
    'quaternion', 'forms', 'group', 'bundle', 'chern-simons', 'tubular'
)
