"""Exception hierarchy shared by the library and the command line."""


class ConfigError(ValueError):
    """A configuration value violates a documented invariant."""


class ScenarioError(ConfigError):
    """Base class for problems found while reading a scenario file.

    ``key`` and ``line`` locate the offending entry when known.
    """

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        where = []
        if key is not None:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class ScenarioSyntaxError(ScenarioError):
    """The scenario file is not well-formed YAML."""


class UnknownKeyError(ScenarioError):
    """The scenario file contains a key that is not recognised."""


class ScenarioValueError(ScenarioError):
    """A key is missing or holds a value that fails validation."""


class ReplicationError(RuntimeError):
    """Replayed outputs do not match the digests recorded in a manifest."""
