"""Core modules: exact arithmetic, category data, presentations and skein evaluation."""

from .category import CategoryData, F, F_closed, sl2_class0
from .cyclo import FieldElem, RingElem, phi_p
from .homology import homology_of, q_invariant_homological
from .linkdiag import FramedLink, standard_link
from .presentation import Presentation, parse
from .skein import RTWValue, SkeinEvaluator

__all__ = [
    'CategoryData',
    'F',
    'F_closed',
    'sl2_class0',
    'FieldElem',
    'RingElem',
    'phi_p',
    'homology_of',
    'q_invariant_homological',
    'FramedLink',
    'standard_link',
    'Presentation',
    'parse',
    'RTWValue',
    'SkeinEvaluator',
]
