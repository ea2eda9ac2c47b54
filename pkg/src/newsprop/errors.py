"""Exception types shared across the package."""


class DataError(ValueError):
    """Malformed or inconsistent input data (bad TSV row, dangling id, ...)."""


class NonConvergenceError(RuntimeError):
    """An iterative solve hit its term cap before reaching the tolerance."""
