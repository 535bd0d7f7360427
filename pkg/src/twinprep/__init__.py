"""Remote preparation of two qubit-state instances, with entanglement analysis.

Core layers:
  linalg    small dense Hermitian linear algebra
  states    qubit registers, gates, measurement, partial trace, entropies
  protocol  resource construction, measurement + correction, analytic curves
  ree       relative entropy of entanglement (Frank-Wolfe + oracles)
  locc      multi-party sessions, transcripts, replay, audits
  service   FastAPI wrapper; cli is a thin client of it
"""

from .protocol import ProtocolSpec
from .states import DensityMatrix, StateVector

__version__ = "0.1.0"

__all__ = ["ProtocolSpec", "DensityMatrix", "StateVector", "__version__"]
