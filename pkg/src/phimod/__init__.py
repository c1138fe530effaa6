"""Exact arithmetic for rank-two filtered (phi, N, L/K, E)-modules."""

__version__ = "0.1.0"

from .exactfield import FieldElement, FieldSpec, vp  # noqa: E402
from .productring import Mat2F, VecF, VecM, solve_twisted  # noqa: E402
from .extension import ExtensionSpec, GaloisGroupSpec  # noqa: E402
from .phimodule import PhiModule, canonicalize  # noqa: E402
from .filtration import FilteredModule, RankOneModule, twist_shift_weights  # noqa: E402
from .descent import GaloisActionData, build_stable_filtration, normalize_module  # noqa: E402
from .admissibility import check_wa, t_hodge, t_newton  # noqa: E402
from .isoclass import decide_isomorphic, enumerate_family  # noqa: E402

__all__ = [
    "FieldElement", "FieldSpec", "vp", "Mat2F", "VecF", "VecM", "solve_twisted",
    "ExtensionSpec", "GaloisGroupSpec", "PhiModule", "canonicalize",
    "FilteredModule", "RankOneModule", "twist_shift_weights", "GaloisActionData",
    "build_stable_filtration", "normalize_module", "check_wa", "t_hodge",
    "t_newton", "decide_isomorphic", "enumerate_family",
]
