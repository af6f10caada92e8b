"""Exception hierarchy shared by all modules."""


class RlabError(Exception):
    pass


class ParseError(RlabError, ValueError):
    pass


class DomainError(RlabError, ValueError):
    """A square root argument is certified negative."""


class DivideByZero(RlabError, ZeroDivisionError):
    pass


class PrecisionExhausted(RlabError):
    """Refinement hit the precision cap without deciding."""


class UnsupportedShape(RlabError, ValueError):
    pass


class UnsupportedStructure(RlabError, ValueError):
    pass


class InvalidSpec(RlabError, ValueError):
    pass


class HorizonMismatch(RlabError, ValueError):
    pass


class EmptySet(RlabError, ValueError):
    pass


class CertInvalid(RlabError):
    def __init__(self, inequality: str, detail: str = ""):
        self.inequality = inequality
        super().__init__(f"{inequality} {detail}".strip())


class ConstraintViolated(RlabError):
    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        super().__init__(f"{constraint} {detail}".strip())


class NotFound(RlabError):
    """A bounded search ended without a result."""

    def __init__(self, what: str, cap: int):
        self.cap = cap
        super().__init__(f"{what}: nothing found up to {cap}")
