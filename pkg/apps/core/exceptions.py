"""
Custom exceptions for the application

Every error knows the CLI exit code it maps to (3 = input error,
2 = inconclusive analysis) and carries an optional remediation hint.
"""

from typing import Optional


class AnalysisError(Exception):
    """Base exception for analysis errors"""
    exit_code = 3

    def __init__(self, message: str, *, hint: Optional[str] = None):
        super().__init__(message)
        self.hint = hint

    def __str__(self):
        message = super().__str__()
        if self.hint:
            return f"{message} (hint: {self.hint})"
        return message


class ValidationError(AnalysisError):
    """Raised when user-supplied options or models are invalid"""
    pass


class NotFoundError(AnalysisError):
    """Raised when a corpus model, variant or variable is not found"""
    pass


class ModelSyntaxError(ValidationError):
    """Raised when an expression or model file cannot be parsed"""

    def __init__(self, message: str, *, line: int = 0, column: int = 0, hint: Optional[str] = None):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}", hint=hint)


class UndeclaredSymbolError(ModelSyntaxError):
    """Raised when an expression references a name that was never declared"""

    def __init__(self, name: str, *, line: int = 0, column: int = 0):
        self.name = name
        super().__init__(f"undeclared symbol '{name}'", line=line, column=column)


class FieldMismatchError(AnalysisError):
    """Raised when operands live over different moduli or truncation orders"""
    exit_code = 2


class NonRationalError(AnalysisError):
    """Raised when a rational-only operation meets a non-rational node"""

    def __init__(self, message: str, *, offenders: tuple = (), hint: Optional[str] = None):
        self.offenders = tuple(offenders)
        super().__init__(message, hint=hint or 'run the model through rationalization first')


class BadSpecializationError(AnalysisError):
    """Raised when a zero divisor shows up at the current specialization point"""
    exit_code = 2


class RetryBudgetExhaustedError(AnalysisError):
    """Raised when every resample within the retry budget was unlucky"""
    exit_code = 2

    def __init__(self, message: str):
        super().__init__(message, hint='unlucky specialization, try another --seed')


class RationalizationError(AnalysisError):
    """Raised when a non-rational model cannot be turned into a rational one"""
    pass


class ExpressionBudgetExceeded(AnalysisError):
    """Raised when symbolic expressions outgrow the configured node budget"""
    exit_code = 2

    def __init__(self, message: str):
        super().__init__(message, hint='use --algorithm probobs for this model')


class AnalysisTimeout(AnalysisError):
    """Raised when an analysis runs past its deadline"""
    exit_code = 2


class InconsistentSpecializationError(AnalysisError):
    """Raised when two specialization points disagree on the classification"""
    exit_code = 2

    def __init__(self, message: str):
        super().__init__(message, hint='rerun with a different --seed or a larger --prime')
