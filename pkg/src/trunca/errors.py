"""Exception taxonomy.

Two families matter to callers: bad input (subclasses of ValueError, e.g. a
Cartan matrix that is not of finite type, or a truncation argument sitting on
a wall where a strict-inequality identity is undefined) and internal
cross-check failures (ConsistencyError), which mean a theorem-backed
invariant failed on data that passed validation — a bug, never a user error.
"""


class CartanMatrixError(ValueError):
    """The given matrix is not a finite-type generalized Cartan matrix."""


class FoldingError(ValueError):
    """The given permutation is not a diagram automorphism."""


class WallError(ValueError):
    """An argument lies on a wall where a strict-sign identity is undefined."""


class LatticeError(ValueError):
    """A lattice specification is malformed (wrong rank, wrong subspace...)."""


class ConsistencyError(RuntimeError):
    """An internal invariant with a proof behind it failed; report a bug."""
