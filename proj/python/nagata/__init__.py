"""Python bindings for the nagata core library.

A config argument is either a dict in the dataset format or the name of a bundled dataset.
"""

import os as _os

_data = _os.path.join(_os.path.dirname(__file__), "data")
if "NAGATA_DATA" not in _os.environ and _os.path.isdir(_data):
    _os.environ["NAGATA_DATA"] = _data

from ._nagata import *  # noqa: E402,F401,F403
from ._nagata import InconsistencyError, OrbitGuardError  # noqa: E402,F401
