"""Plot-ready data: the dominance illustration, dominating-record curves, zeros and limit curve."""
import logging
from typing import Dict, List, Tuple

from ..core.charpoly import zeros_table
from ..core.exceptions import DivergentLimitError
from ..core.records import count_maxima, lift_to_extended, tally
from ..models.domain import Model, RecordTally
from .asymptotics import dom_limits
from .exactlaws import dom_moments

logger = logging.getLogger(__name__)

# eight points of the planar illustration, in arrival order
ILLUSTRATION_POINTS: List[Tuple[float, float]] = [
    (-3.5, 5.5), (-1.0, 3.0), (-1.5, 7.0), (-2.0, 4.5),
    (-5.5, 6.5), (0.5, 6.0), (1.5, 8.0), (-4.5, 2.0),
]

FIGURES = ("dominance", "dom-rec", "zeros")


def dominance_illustration() -> Dict:
    """Record tally of the illustration sequence and the maxima count of its lifted set"""
    t: RecordTally = tally(ILLUSTRATION_POINTS)
    return {"points": [list(p) for p in ILLUSTRATION_POINTS], "tally": t.model_dump(),
            "lifted_maxima": count_maxima(lift_to_extended(ILLUSTRATION_POINTS))}


def dom_curves(d_values=range(2, 8), n_max: int = 30, model: str = "simplex") -> List[Tuple]:
    """(d, n, mean, var) rows of Z_n, closed by a row with n=0 carrying the n -> infinity limits"""
    rows = []
    for d in d_values:
        m = Model.of(model, d)
        for n in range(1, n_max + 1):
            mean, var = dom_moments(m, n)
            rows.append((d, n, float(mean), float(var)))
        try:
            lim = dom_limits(m)
            rows.append((d, 0, lim.mean, lim.var))
        except DivergentLimitError:
            logger.info(f"no finite dominating-record limit for {model} d={d}")
    return rows


def zeros_figure(d_max: int = 50, resolution: int = 256) -> List[Tuple[int, float, float]]:
    return zeros_table(d_max, resolution)
