"""Exceptions shared across the package."""


class DataError(Exception):
    """Malformed or inconsistent input data (frames, masks, specs)."""


class DivergenceError(Exception):
    """The solver produced a non-finite objective.

    Carries the iteration index and the last finite objective value so a
    failing run can be diagnosed from the exception alone.
    """

    def __init__(self, iteration: int, last_objective: float):
        self.iteration = iteration
        self.last_objective = last_objective
        super().__init__(
            f"non-finite objective at iteration {iteration}; "
            f"last finite value {last_objective:.6e}"
        )
