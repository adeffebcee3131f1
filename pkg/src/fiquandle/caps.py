"""Resource caps.

Every enumeration in the package is bounded. Defaults can be overridden per
call, or globally through the ``QF_CAP`` environment variable, which replaces
all of them with a single integer.
"""

import os
from dataclasses import dataclass, replace

from .errors import InputError, ResourceError


@dataclass(frozen=True)
class Caps:
    group: int = 10**6        # closure size for Inn(X)
    elements: int = 10**6     # class enumeration (permutations / matrices)
    basis: int = 2 * 10**5    # chain basis size per degree
    search: int = 10**8       # coloring search nodes

    def scaled_to(self, value: int) -> "Caps":
        return replace(self, group=value, elements=value, basis=value, search=value)


def default_caps() -> Caps:
    raw = os.environ.get("QF_CAP")
    if raw is None or raw == "":
        return Caps()
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"QF_CAP must be an integer, got {raw!r}") from None
    if value <= 0:
        raise InputError(f"QF_CAP must be positive, got {value}")
    return Caps().scaled_to(value)


def check(what: str, size: int, cap: int) -> None:
    if size > cap:
        raise ResourceError(what, size, cap)
