"""Exception types raised by the dcs package."""


class DCSError(Exception):
    """Base class for every error raised by this package."""


class InputError(DCSError, ValueError):
    """Malformed or invalid input data."""


class ParseError(InputError):
    def __init__(self, line_no, message):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DuplicateEdge(ParseError):
    pass


class SelfLoop(ParseError):
    pass


class BadWeight(ParseError):
    pass


class BadTransform(InputError):
    pass


class EmptyCorpus(InputError):
    pass


class EmptySet(DCSError, ValueError):
    pass


class EmptyGraph(DCSError, ValueError):
    pass


class BadEmbedding(DCSError, ValueError):
    pass


class NoMass(DCSError, ValueError):
    pass


class NotAKKTPoint(DCSError, ValueError):
    pass


class NegativeWeight(DCSError, ValueError):
    pass


class ZeroAffinity(DCSError, ValueError):
    pass


class UndefinedGap(DCSError, ValueError):
    pass


class TooLarge(DCSError, ValueError):
    pass


class NotAClique(DCSError, ValueError):
    pass
