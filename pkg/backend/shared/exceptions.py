from .constants import ExitCode


class QuantumException(Exception):
    """Generic library exception carrying the CLI exit code"""

    def __init__(self, message: str, exit_code: ExitCode = ExitCode.NUMERICAL_FAILURE):
        self.message = message
        self.exit_code = exit_code
        super().__init__(self.message)


def config_error(message: str) -> QuantumException:
    """Precondition or configuration violation (exit code 2)."""
    return QuantumException(message, ExitCode.CONFIG_ERROR)


def numerical_error(message: str) -> QuantumException:
    """Decomposition or integration failure (exit code 3)."""
    return QuantumException(message, ExitCode.NUMERICAL_FAILURE)
