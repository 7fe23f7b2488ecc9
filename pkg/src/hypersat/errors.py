"""Exception hierarchy shared by all modules.

Every error raised on purpose by the library derives from ``HyperSatError``;
the CLI maps the subclasses onto exit codes.
"""


class HyperSatError(Exception):
    """Base class for library errors."""


class ParseError(HyperSatError):
    def __init__(self, message, offset=None, text=None):
        self.offset = offset
        self.text = text
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class DialectError(ParseError):
    """Input parsed but violates the well-formedness rules of the dialect."""


class InterchangeError(HyperSatError):
    """Malformed or inconsistent interchange file."""


class NotPrenex(HyperSatError):
    pass


class QuantifierUnderTemporal(HyperSatError):
    pass


class MalformedFormula(HyperSatError):
    pass


class NotASentence(HyperSatError):
    pass


class EmptyModel(HyperSatError):
    pass


class UnboundVariable(HyperSatError):
    pass


class NotHyperCTLStar(HyperSatError):
    pass


class MalformedSystem(HyperSatError):
    pass


class InvalidTileSet(HyperSatError):
    pass


class MissingWitness(HyperSatError):
    pass


class BadArgument(HyperSatError):
    pass


class EmptyWord(HyperSatError):
    pass


class NotStrictlyIncreasing(HyperSatError):
    pass


class NotInFragment(HyperSatError):
    pass


class UnsupportedShape(HyperSatError):
    pass


class SortError(HyperSatError):
    pass


class ResourceLimit(HyperSatError):
    """A time, size or candidate cap was hit before an answer was found."""


class AlphabetMismatch(HyperSatError):
    """A trace uses propositions outside the expected alphabet."""


class UniverseMismatch(HyperSatError):
    """A path universe contains paths that do not belong to the system."""
