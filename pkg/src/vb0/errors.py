"""Exception types shared across the package."""


class VB0Error(Exception):
    """Base class for all package errors."""


class GroupValidationError(VB0Error):
    pass


class NonAssociative(GroupValidationError):
    def __init__(self, triple):
        self.triple = triple
        super().__init__(f"multiplication is not associative on {triple}")


class NoIdentity(GroupValidationError):
    def __init__(self, element=None):
        self.element = element
        super().__init__("table has no two-sided identity"
                         + ("" if element is None else f" (first failure at element {element})"))


class NoInverse(GroupValidationError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"element {element} has no inverse")


class CapExceeded(VB0Error):
    """A configured size cap was exceeded; the computation was not attempted."""


class ClosureCapExceeded(CapExceeded):
    pass


class CosetCapExceeded(CapExceeded):
    """Coset enumeration ran out of room. This is not a proof of infinite index."""


class NotNormal(VB0Error):
    pass


class NotAbelian(VB0Error):
    pass


class NotHomomorphism(VB0Error):
    pass


class WordSyntaxError(VB0Error):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")


class VariableReuse(VB0Error):
    def __init__(self, variable):
        self.variable = variable
        super().__init__(f"variable x{variable} occurs more than once")


class MissingAssignment(VB0Error):
    def __init__(self, variable):
        self.variable = variable
        super().__init__(f"no element assigned to x{variable}")


class RelatorNotKilled(VB0Error):
    def __init__(self, relator):
        self.relator = relator
        super().__init__(f"relator {relator} does not evaluate to the identity")


class InconsistentSpan(VB0Error):
    pass


class KappaInconsistent(VB0Error):
    """The commutator map failed to respect a defining relation (engine bug signal)."""


class InternalDisagreement(VB0Error):
    """Two independent routes produced different answers."""


class HypothesisFailed(VB0Error):
    def __init__(self, name, detail=""):
        self.name = name
        super().__init__(f"hypothesis '{name}' does not hold" + (f": {detail}" if detail else ""))


class FormatError(VB0Error):
    pass
