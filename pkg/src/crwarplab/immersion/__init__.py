from crwarplab.immersion.adapt import AdaptedFrameReport, adapt_frame
from crwarplab.immersion.chart import ImmersionChart, Jet, jet_evaluate
from crwarplab.immersion.sff import (
    SecondFundamentalForm,
    gauss_sectional,
    mean_curvature,
    second_fundamental_form,
    shape_operator,
)

__all__ = [
    "AdaptedFrameReport",
    "ImmersionChart",
    "Jet",
    "SecondFundamentalForm",
    "adapt_frame",
    "gauss_sectional",
    "jet_evaluate",
    "mean_curvature",
    "second_fundamental_form",
    "shape_operator",
]
