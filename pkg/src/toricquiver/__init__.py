"""Quivers and quiver-representation categories attached to regular fans."""

from .category import (
    ConditionReport,
    Generator,
    Morphism,
    RelationWord,
    Representation,
    check_all,
    constant_object,
    evaluate_word,
    hom_dim,
    is_morphism,
    monodromy,
    relations,
)
from .fan import Fan, chart_views, load_fan, maximal_cones
from .quiver import Quiver, build_quiver, export_dot, export_json

__version__ = "0.1.0"
