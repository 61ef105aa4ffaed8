from importlib.metadata import PackageNotFoundError, version

from .entanglement import analytic_concurrence, concurrence, target_state
from .explorer import enumerate_recipes, find_optimum, initialization_demo, sweep
from .hamiltonians import CouplingParams
from .processes import ProcessSpec, Recipe, pipeline_operator, run_protocol
from .states import DensityMatrix, PureState

try:
    __version__ = version(__name__)
except PackageNotFoundError:
    # package is not installed
    pass


__all__ = [
    "CouplingParams",
    "DensityMatrix",
    "ProcessSpec",
    "PureState",
    "Recipe",
    "analytic_concurrence",
    "concurrence",
    "enumerate_recipes",
    "find_optimum",
    "initialization_demo",
    "pipeline_operator",
    "run_protocol",
    "sweep",
    "target_state",
]
