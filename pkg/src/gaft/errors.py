"""Exception types shared across the package."""


class GaftError(Exception):
    pass


class PreconditionError(GaftError, ValueError):
    """An operation was called with arguments outside its contract."""


class ResourceError(GaftError):
    """A configured enumeration or saturation budget was exceeded."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class KappaUnavailable(GaftError):
    pass


class NoFiniteSolutionSet(GaftError):
    def __init__(self, kind_name):
        super().__init__(
            f"no finite solution set: kind {kind_name!r} has infinite kappa "
            "and no user-supplied solution set was given"
        )
        self.kind_name = kind_name


class IllDefinedFunctor(GaftError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NoFactorization(GaftError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CertificationError(GaftError):
    """The constructed arrow failed its own universality certificate."""

    def __init__(self, message, transcript=None):
        super().__init__(message)
        self.transcript = transcript


class KindSyntaxError(GaftError):
    """Positioned diagnostic raised by the kind parser.

    ``code`` is one of ``lexical``, ``syntax``, ``arity``, ``unbound``,
    ``duplicate``.
    """

    def __init__(self, code, message, line, column):
        super().__init__(f"{line}:{column}: {code} error: {message}")
        self.code = code
        self.line = line
        self.column = column
