"""Finite quandles, their homology, link colorings and growth along families
of conjugacy classes in symmetric and general linear groups."""

from .errors import ConsistencyError, InputError, ParseError, QuandleError, ResourceError
from .homology import HomologyGroup, boundary_matrix, homology_group
from .links import LinkDiagram, chi, load_fixture, parse_pd
from .perm import ClassFamilySpec, Partition, class_quandle, parse_family
from .quandle import FiniteQuandle, check_axioms, dihedral_quandle, inn_group, orbits

__version__ = "0.1.0"

__all__ = [
    "ClassFamilySpec", "ConsistencyError", "FiniteQuandle", "HomologyGroup", "InputError",
    "LinkDiagram", "ParseError", "Partition", "QuandleError", "ResourceError",
    "boundary_matrix", "check_axioms", "chi", "class_quandle", "dihedral_quandle",
    "homology_group", "inn_group", "load_fixture", "orbits", "parse_family", "parse_pd",
]
