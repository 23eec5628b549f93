"""Exception hierarchy shared by all subtutor modules.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
anything else -> 4.
"""


class SubtutorError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SubtutorError):
    """Invalid configuration: bad flag values, inconsistent options."""


class DataError(SubtutorError):
    """Invalid or inconsistent input data (files, names, schemas)."""
