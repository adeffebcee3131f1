"""Uniform access to the two quandle families, indexed by n."""

from __future__ import annotations

from typing import Sequence, Union

from .glclasses import PhiSpec, class_quandle_gl, family_weight, validate_family
from .perm import ClassFamilySpec, ClassQuandle, class_quandle

Family = Union[ClassFamilySpec, Sequence[PhiSpec]]


def is_gl_family(family: Family) -> bool:
    return not isinstance(family, ClassFamilySpec)


def build_quandle(family: Family, n: int, cap: int = 10**6) -> ClassQuandle:
    if isinstance(family, ClassFamilySpec):
        return class_quandle(family, n, cap)
    return class_quandle_gl(family, n, cap)


def weight(family: Family) -> int:
    if isinstance(family, ClassFamilySpec):
        return family.max_weight
    return family_weight(validate_family(family))


def describe(family: Family) -> str:
    if isinstance(family, ClassFamilySpec):
        return str(family)
    specs = validate_family(family)
    return f"GL(q={specs[0].q}):" + "|".join(str(s) for s in specs)
