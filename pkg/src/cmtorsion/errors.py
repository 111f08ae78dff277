"""Exception types shared across the package.

The CLI maps these onto process exit codes (domain errors -> 4,
dependency errors -> 3).
"""


class DomainError(ValueError):
    """An input lies outside the domain of an operation."""


class ContractError(DomainError):
    """Inputs contradict a proven structural constraint (caller bug)."""


class DependencyError(RuntimeError):
    """Required precomputed data (e.g. a class-number cache) is unavailable."""


class CacheFormatError(ValueError):
    def __init__(self, path, lineno, message):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


class CacheIntegrityError(ValueError):
    pass
