"""Domain errors.

Every error raised by the library derives from DomainError; the CLI maps a
DomainError to exit code 1 and prints the class name on stderr.
"""


class DomainError(Exception):
    """Base class for all library errors."""


# graph construction / I/O
class InvariantViolation(DomainError): pass
class LoopEdge(DomainError): pass
class AntiparallelPair(DomainError): pass
class VertexOutOfRange(DomainError): pass
class HeaderClassMismatch(DomainError): pass
class ParseError(DomainError): pass


# decomposition machinery
class NotEulerian(DomainError): pass
class NotConnected(DomainError): pass
class NotStrong(DomainError): pass
class BadLength(DomainError): pass
class TooLarge(DomainError): pass
class BudgetExceeded(DomainError): pass


# reversal planning
class SizeMismatch(DomainError): pass
class NotSubgraph(DomainError): pass
class ScoreMismatch(DomainError): pass
class NotACycle(DomainError): pass


# groups
class BadAction(DomainError): pass
class EvenOrder(DomainError): pass
class NotGameSubset(DomainError): pass
class ExtraAutomorphisms(DomainError): pass
class EvenOrderSubgroup(DomainError): pass
class BadPrime(DomainError): pass
class NotSubgroup(DomainError): pass
class NotPairSubset(DomainError): pass
class EvenOrderAction(DomainError): pass
class WrongGroup(DomainError): pass


# constructions
class BadK(DomainError): pass
class NotReducible(DomainError): pass
class NotSteiner(DomainError): pass
class TooSmall(DomainError): pass
class NotApplicable(DomainError): pass
class SepExhausted(DomainError): pass
class FiberCountMismatch(DomainError): pass
class EvenSize(DomainError): pass


# morphisms
class BadSize(DomainError): pass
class NotSurjective(DomainError): pass


# cli
class UsageError(DomainError): pass
