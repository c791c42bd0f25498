class FigureError(Exception):
    """Base class for figure-generation errors."""


class SchemaMismatch(FigureError):
    """CSV columns do not match the expected subcommand schema."""


class MissingColumn(FigureError):
    """A required column is absent from the CSV."""
