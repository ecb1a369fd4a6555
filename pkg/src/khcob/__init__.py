"""Khovanov homology of link diagrams and the maps induced by cobordism movies."""

__version__ = "0.1.0"

from .cobordism import KJClass, Movie, compare_movies
from .diagram import (
    Diagram,
    Symmetry,
    diagram_symmetries,
    from_braid_closure,
    from_pd_code,
    mirror_diagram,
    orient,
    rational_knot,
)
from .errors import InputError, KhError
from .homology import class_equal_up_to_sign, kh, kh_table
from .moves import Move
from .state import ChainElement

__all__ = [
    "ChainElement", "Diagram", "InputError", "KJClass", "KhError", "Move", "Movie",
    "Symmetry", "class_equal_up_to_sign", "compare_movies", "diagram_symmetries",
    "from_braid_closure", "from_pd_code", "kh", "kh_table", "mirror_diagram", "orient",
    "rational_knot",
]
