"""molab: a laboratory for learning families of PDE solution operators.

The package provides a small dense-network core with exact reverse-mode
gradients, five branch/trunk operator architectures built on top of it,
reference solvers and samplers for five parametric 1D PDE families,
binary dataset and checkpoint containers, an AdamW training loop, a
relative-L2 evaluation path, and calculators for the constructive
approximation rates that motivate the architectures.
"""

__version__ = "0.1.0"

from . import net

__all__ = ["__version__", "net"]
