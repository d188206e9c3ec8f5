"""Exception hierarchy.

Everything raised on purpose derives from :class:`PlotkitError`, so the
command line can catch one type and report it; anything else escaping is
a bug.
"""


class PlotkitError(Exception):
    """Base class for all errors raised by plotkit."""


class DataError(PlotkitError):
    """The input file is unreadable, malformed, or has no data rows."""


class SchemaError(PlotkitError):
    """The input is missing columns the figure kind requires."""


class OptionError(PlotkitError):
    """Rendering options are inconsistent with the figure kind."""
