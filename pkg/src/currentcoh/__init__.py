"""Second (co)homology of current algebras ``A⊗k`` in exact rational arithmetic."""

from .catalog import lookup
from .comm import CommAlgebra, validate_comm
from .current import CurrentAlgebra, build_current
from .lie import LieAlgebra, cohomology, make_module, validate_lie

__version__ = "0.1.0"

__all__ = ["CommAlgebra", "CurrentAlgebra", "LieAlgebra", "build_current", "cohomology",
           "lookup", "make_module", "validate_comm", "validate_lie"]
