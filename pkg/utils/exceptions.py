"""
Custom exceptions for the fanifold mirror engine
"""

from typing import List, Optional, Sequence


class FanifoldMirrorError(Exception):
    """Base exception for all fanifold mirror errors"""
    pass


class LatticeError(FanifoldMirrorError):
    """Integer lattice operation received inconsistent input"""
    pass


class FanError(FanifoldMirrorError):
    """Base exception for fan errors"""
    pass


class ConeNotInFanError(FanError):
    """A cone was referenced that is not a member of the fan"""

    def __init__(self, ray_indices: Sequence[int], fan_name: Optional[str] = None):
        self.ray_indices = tuple(ray_indices)
        self.fan_name = fan_name
        where = f" of fan '{fan_name}'" if fan_name else ""
        super().__init__(f"Cone {list(self.ray_indices)} is not a cone{where}")


class FanValidationError(FanError):
    """Fan failed validation; carries the violations found"""

    def __init__(self, message: str, violations: Optional[List] = None):
        super().__init__(message)
        self.violations = list(violations or [])


class IsomorphismSearchError(FanError):
    """Isomorphism search was asked to run outside its supported size"""
    pass


class FanifoldError(FanifoldMirrorError):
    """Base exception for fanifold errors"""
    pass


class CoverConstructionError(FanifoldError):
    """Barycentric cover cannot be built for this fanifold"""
    pass


class DiagramError(FanifoldMirrorError):
    """Gluing diagram cannot be built or queried"""
    pass


class DocumentError(FanifoldMirrorError):
    """Base exception for document input/output"""
    pass


class DocumentParseError(DocumentError):
    """Document text is malformed"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{location}: {message}"
        super().__init__(message)


class ConfigurationError(FanifoldMirrorError):
    """Configuration is invalid or missing"""
    pass
