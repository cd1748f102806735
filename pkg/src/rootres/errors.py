class RootResError(Exception):
    """Base class for validation and precondition failures."""


class InvalidSimplex(RootResError):
    pass


class InvalidMap(RootResError):
    pass


class InvalidModulus(RootResError):
    pass


class CocycleViolation(RootResError):
    def __init__(self, triangle, value):
        self.triangle = triangle
        self.value = value
        super().__init__(f"cocycle condition fails on {triangle!r} (coboundary value {value})")


class InvalidCoordinates(RootResError):
    pass


class MeshTooCoarse(RootResError):
    def __init__(self, simplex, oscillation, limit):
        self.simplex = simplex
        self.oscillation = oscillation
        self.limit = limit
        super().__init__(
            f"oscillation {oscillation:.4g} on {simplex!r} is not below {limit:.4g}")


class MismatchedCover(RootResError):
    pass


class NonComposable(RootResError):
    pass


class DomainMismatch(RootResError):
    pass


class ExplosionGuard(RootResError):
    def __init__(self, stage, size, budget):
        self.stage = stage
        self.size = size
        self.budget = budget
        super().__init__(f"stage {stage} would have {size} simplices (budget {budget})")
