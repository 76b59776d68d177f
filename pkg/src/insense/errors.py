class ConfigurationError(ValueError):
    """Invalid game, scenario, or input-file configuration."""


class ProtocolError(ValueError):
    """A participant sent something the round protocol cannot accept."""


class InvariantViolation(RuntimeError):
    """An internal guarantee of the mechanism was broken."""
