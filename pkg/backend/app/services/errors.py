"""서비스 계층에서 사용하는 예외 정의."""


class OptimizationError(Exception):
    pass


class DegenerateFactor(OptimizationError):
    pass


class NotPositiveDefinite(DegenerateFactor):
    pass


class NonFiniteValue(OptimizationError):
    pass


class NotDescent(OptimizationError):
    pass


class SingularBlock(OptimizationError):
    pass


class CurvatureViolation(OptimizationError):
    pass


class DimensionMismatch(OptimizationError):
    pass


class Infeasible(OptimizationError):
    pass


class RankDeficient(OptimizationError):
    pass


class UnknownFunction(OptimizationError):
    pass


class BadDimension(OptimizationError):
    pass


class ParseError(OptimizationError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyDataset(OptimizationError):
    pass


class ReferenceFailed(OptimizationError):
    pass


class EmptyInput(OptimizationError):
    pass
