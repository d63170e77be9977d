class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PrecisionError(ArithmeticError):
    """Floating evaluation would lose too many digits to be trusted."""


class SimulationFault(RuntimeError):
    """A simulated quantity left its admissible range beyond rounding noise."""


class CalibrationError(RuntimeError):
    """Clock calibration could not be carried out on the given data."""
