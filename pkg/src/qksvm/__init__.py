"""Quantum fidelity-kernel support vector machines.

Subpackages: ``statevector`` (simulator), ``featuremap`` (encoding
circuits), ``kernel`` (classical and quantum Gram matrices), ``svm`` (SMO
solver), ``dataset``, ``metrics`` and ``experiment`` (pipeline and CLI).
"""

__version__ = "0.1.0"

from ._backend import BACKEND  # noqa: E402,F401
