from crwarplab.numeric.frames import Frame, PlaneSpec, gram_schmidt, orthonormal_complement
from crwarplab.numeric.grassmann import DEFAULT_BUDGET, PlaneBudget, min_over_planes
from crwarplab.numeric.taylor import Taylor2

__all__ = [
    "Frame",
    "PlaneSpec",
    "PlaneBudget",
    "DEFAULT_BUDGET",
    "Taylor2",
    "gram_schmidt",
    "min_over_planes",
    "orthonormal_complement",
]
