from .__version__ import __version__
from .simulator import Simulator, run_campaign

__all__ = ["Simulator", "__version__", "run_campaign"]
