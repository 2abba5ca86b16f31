"""Online learning from ranking feedback under a Plackett-Luce model."""

from rankfeed._kernels import BACKEND
from rankfeed.ranking_model import ActionSet, RankingParams

__version__ = "0.1.0"
__all__ = ["ActionSet", "BACKEND", "RankingParams", "__version__"]
