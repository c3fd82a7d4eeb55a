"""Complex-valued volumes of polytopes in the double hyperbolic space DH^n."""

from .boundary import MobiusMap, NormalizationConstant, v_infty, v_infty_2_closed, v_infty_2_polygon
from .errors import (
    CombinatorialChange, DHVolError, IdealVertexOnPath, IllConditioned, NonConverged,
    PointAtInfinityInPolytope,
)
from .minkowski import AmbientVector, LorentzTransform, Tag, minkowski_dot
from .polytope import BoundaryPolytope, HalfSpace, Polytope, restrict_to_boundary
from .quadrature import QuadratureConfig
from .volume import (
    ComplexVolume, EpsilonLadder, closed_form_v1, closed_form_v2, lune_volume, sphere_volume,
    total_volume, volume,
)

__version__ = "0.1.0"

__all__ = [
    "AmbientVector", "BoundaryPolytope", "CombinatorialChange", "ComplexVolume", "DHVolError",
    "EpsilonLadder", "HalfSpace", "IdealVertexOnPath", "IllConditioned", "LorentzTransform",
    "MobiusMap", "NonConverged", "NormalizationConstant", "PointAtInfinityInPolytope", "Polytope",
    "QuadratureConfig", "Tag", "closed_form_v1", "closed_form_v2", "lune_volume",
    "minkowski_dot", "restrict_to_boundary", "sphere_volume", "total_volume", "v_infty",
    "v_infty_2_closed", "v_infty_2_polygon", "volume",
]
