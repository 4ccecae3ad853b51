"""Exception hierarchy shared across the package."""


class SeqbatchError(Exception):
    """Base class for all seqbatch errors."""


class ManifestError(SeqbatchError):
    """Raised for malformed or invalid corpus manifests."""


class ConfigError(SeqbatchError):
    """Raised for invalid run configurations (CLI exit code 2)."""


class PlanningError(SeqbatchError):
    """Raised when a strategy or batching policy cannot be applied (CLI exit code 3)."""
