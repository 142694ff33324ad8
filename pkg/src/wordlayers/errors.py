"""Exception types raised by the pipeline."""


class WordLayersError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(WordLayersError):
    """Invalid configuration or unknown option."""


class StorageError(WordLayersError):
    """File-system failure while reading inputs or writing outputs."""


class InputError(StorageError):
    """An input source could not be opened or read."""


class OutputError(StorageError):
    """An output file or directory could not be written."""


class AssemblyError(WordLayersError):
    """Multilayer assembly produced an inconsistent graph."""


class EmptyGraphError(WordLayersError):
    """An algorithm that needs at least one node received an empty graph."""
