#!/usr/bin/env python3
"""Exception hierarchy for the Hurwitz component toolkit.

Every domain error carries a witness dict so the CLI can report the exact
elements, tuples or indices that broke a contract.
"""

from typing import Any, Dict, Optional


class HurwitzError(Exception):
    """Base class for all domain errors"""

    def __init__(self, message: str, witness: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.witness: Dict[str, Any] = dict(witness or {})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "witness": self.witness,
        }

    def __str__(self) -> str:
        if not self.witness:
            return self.message
        details = ", ".join(f"{k}={v}" for k, v in sorted(self.witness.items()))
        return f"{self.message} ({details})"


class BudgetExceeded(HurwitzError):
    """A state, element or matrix budget was passed; witness holds partial progress"""


class InvalidPermutation(HurwitzError):
    pass


class NotAGroup(HurwitzError):
    def __init__(self, axiom: str, message: str, witness: Optional[Dict[str, Any]] = None):
        witness = dict(witness or {})
        witness["axiom"] = axiom
        super().__init__(message, witness)
        self.axiom = axiom


class NotClosedUnderConjugation(HurwitzError):
    pass


class NotAnAction(HurwitzError):
    pass


class NotConjugationClosed(HurwitzError):
    pass


class IndexOutOfRange(HurwitzError):
    pass


class NotGroupOrigin(HurwitzError):
    pass


class KDoesNotNormalize(HurwitzError):
    pass


class NotSingleClass(HurwitzError):
    pass


class NotGenerating(HurwitzError):
    pass


class NotClosedUnderPowering(HurwitzError):
    pass


class GcdViolation(HurwitzError):
    pass


class TupleLeftCatalog(HurwitzError):
    """A mapped tuple has no component in the catalog (catalog/filter mismatch)"""


class ValidationFailure(HurwitzError):
    pass


class EmptySubset(HurwitzError):
    pass


class NotNormal(HurwitzError):
    pass


class NotGenerator(HurwitzError):
    pass


class NotInSubgroup(HurwitzError):
    pass


class IncompatiblePartition(HurwitzError):
    pass


class InternalMismatch(HurwitzError):
    """Two independent computations disagreed; always an implementation bug"""


class ClassCountMismatch(HurwitzError):
    pass


class NotAdmissible(HurwitzError):
    pass


class SpecFormatError(HurwitzError):
    pass


class ConfigError(HurwitzError):
    pass
