"""Error types shared across the extractor."""


class DataError(Exception):
    """Malformed or inconsistent input data."""


class EncoderUnavailableError(Exception):
    """The text encoder could not be loaded."""
