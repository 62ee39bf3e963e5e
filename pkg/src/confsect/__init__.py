"""Sections of graph configuration spaces, made computable."""

__version__ = "0.1.0"

from .graphs import (  # noqa: F401
    Graph,
    GraphError,
    CoreReduction,
    load_graph,
    euler_characteristic,
    core_reduction,
    classify_core,
    maximal_subtree,
    shortest_distance,
)
from .geometry import (  # noqa: F401
    Point,
    Component,
    GeometryError,
    check_configuration,
    complement_components,
    component_of,
    borders,
    is_simply_connected,
)
