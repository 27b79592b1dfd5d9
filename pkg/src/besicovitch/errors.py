"""Exception types shared across the package."""


class NotPrimeError(ValueError):
    """A modulus that must be prime is not."""


class UnsupportedModulusError(ValueError):
    """The modulus is prime but outside the range an operation supports."""


class ArithmeticInvariantError(ArithmeticError):
    """An identity that holds for every prime modulus failed (implementation bug)."""


class ModelMismatchError(ValueError):
    """The modulus is incompatible with the requested expectation model."""


class DegenerateGeometryError(ValueError):
    """Two lines that should meet in one point are parallel or equal."""


class DegenerateSampleError(ValueError):
    """A statistical routine received data it cannot process."""


class DataIntegrityError(ValueError):
    """Computed complexities disagree with the reference table."""

    def __init__(self, prime, expected, found):
        self.prime = prime
        self.expected = expected
        self.found = found
        super().__init__(
            f"complexity mismatch at d={prime}: reference {expected}, got {found}"
        )


class GridAllocationError(MemoryError):
    """Not enough memory to allocate a multiplicity grid."""
