"""Extended Cauchy-Rayleigh lifetime distribution toolkit.

Public surface: the distribution itself (:mod:`ecrlab.ecr`), the
special-function kernel (:mod:`ecrlab.specfun`), estimation
(:mod:`ecrlab.inference`), goodness of fit (:mod:`ecrlab.gof`), the
Monte Carlo study engine (:mod:`ecrlab.sim`), data handling
(:mod:`ecrlab.data`), and the command-line front end
(:mod:`ecrlab.cli`).
"""

__version__ = "0.1.0"

from .data import CROWLEY_HU, Dataset, crowley_hu, describe, load_dataset
from .ecr import Params

__all__ = [
    "__version__",
    "CROWLEY_HU",
    "Dataset",
    "Params",
    "crowley_hu",
    "describe",
    "load_dataset",
]
