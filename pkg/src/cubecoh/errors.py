"""Exception types shared across the package."""


class CubecohError(Exception):
    """Base class for every error raised by this package."""


class ArsParseError(CubecohError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class NotComposable(CubecohError):
    pass


class DifferentSources(CubecohError):
    pass


class NotConvergent(CubecohError):
    pass


class NotNoetherian(NotConvergent):
    def __init__(self, cycle):
        super().__init__(f"rewriting system has a cycle: {cycle}")
        self.cycle = cycle


class NotConfluent(NotConvergent):
    def __init__(self, vertex, first, second):
        super().__init__(
            f"vertex {vertex} reaches distinct normal forms via {first} and {second}"
        )
        self.vertex = vertex
        self.witnesses = (first, second)


class IndexOutOfRange(CubecohError):
    pass


class IllTyped(CubecohError):
    pass


class DimensionMismatch(CubecohError):
    pass


class FoldMismatch(CubecohError):
    pass


class MissingGenerator(CubecohError):
    pass


class InvalidSection(CubecohError):
    pass
