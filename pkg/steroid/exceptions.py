from typing import Optional, Tuple


EXIT_VERIFICATION = 1
EXIT_INPUT = 2
EXIT_SYMMETRY = 3


class SteroidError(Exception):
    """Base error. ``exit_code`` is what the command line reports for it."""

    exit_code: int = EXIT_INPUT

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def add_context(self, context: str) -> "SteroidError":
        self.detail = f"{self.detail} ({context})"
        self.args = (self.detail,)
        return self


class ShapeError(SteroidError):
    pass


class RangeError(SteroidError):
    pass


class OrderError(SteroidError):
    pass


class ConstructionError(SteroidError):
    pass


class NumericError(SteroidError):
    pass


class ConvergenceError(SteroidError):
    pass


class ParseError(SteroidError):
    def __init__(self, detail: str, line: Optional[int] = None):
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)
        self.line = line


class SymmetryError(SteroidError):
    exit_code = EXIT_SYMMETRY

    def __init__(
        self,
        detail: str,
        violation: float = 0.0,
        index_pair: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None,
    ):
        if index_pair is not None:
            first, second = index_pair
            detail = f"{detail}: |t{first} - t{second}| = {violation:.3e}"
        super().__init__(detail)
        self.violation = violation
        self.index_pair = index_pair


class VerificationError(SteroidError):
    exit_code = EXIT_VERIFICATION
