"""Exception hierarchy.

Everything raised for bad input data derives from :class:`DataError`, which
the command line maps to exit code 2.
"""


class AkemError(Exception):
    """Base class for all errors raised by this package."""


class DataError(AkemError):
    """Input data could not be used."""


class MalformedLine(DataError):
    def __init__(self, line_no, detail="", path=None):
        self.line_no = line_no
        self.path = path
        where = f"{path}:{line_no}" if path else f"line {line_no}"
        super().__init__(f"malformed line at {where}" + (f": {detail}" if detail else ""))


class MissingName(DataError):
    def __init__(self, entity_id):
        self.entity_id = entity_id
        super().__init__(f"entity {entity_id!r} has no 'name' triple")


class MalformedHeader(DataError):
    pass


class DimensionMismatch(DataError):
    def __init__(self, line_no=None, expected=None, got=None):
        self.line_no = line_no
        self.expected = expected
        self.got = got
        msg = "dimension mismatch"
        if line_no is not None:
            msg += f" at line {line_no}"
        if expected is not None:
            msg += f": expected {expected}, got {got}"
        super().__init__(msg)


class NonFiniteValue(DataError):
    def __init__(self, line_no):
        self.line_no = line_no
        super().__init__(f"non-finite or unparsable vector component at line {line_no}")


class EmptyQuery(DataError):
    pass


class EmptyTrainingSet(DataError):
    pass


class VersionMismatch(DataError):
    pass


class CorruptModel(DataError):
    pass


class DuplicateGold(DataError):
    def __init__(self, triple):
        self.triple = triple
        fields = (triple.query_id, triple.mention, triple.entity_id) if hasattr(triple, "entity_id") else tuple(triple)
        super().__init__(f"duplicate gold annotation {fields!r}")
