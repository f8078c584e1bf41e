from typing import Optional


class BondPortfolioError(Exception):
    pass


class DimensionMismatchError(BondPortfolioError, ValueError):
    pass


class DomainError(BondPortfolioError, ValueError):
    pass


class ZeroValueError(DomainError):
    pass


class InvalidSetError(BondPortfolioError, ValueError):
    pass


class SolverError(BondPortfolioError, RuntimeError):
    def __init__(self, message: str, status: Optional[str] = None):
        super().__init__(message)
        self.status = status


class InfeasibleProblemError(SolverError):
    pass


class BackendUnavailableError(SolverError):
    pass


class DataFormatError(BondPortfolioError, ValueError):
    def __init__(self, message: str, path: Optional[str] = None,
                 row: Optional[int] = None, column: Optional[str] = None):
        location = []
        if path is not None:
            location.append(str(path))
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")
        self.path = path
        self.row = row
        self.column = column


class MalformedProgramError(BondPortfolioError, ValueError):
    pass
