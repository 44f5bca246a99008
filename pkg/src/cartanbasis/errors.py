"""Exception types raised by cartanbasis."""


class CartanBasisError(Exception):
    """Base class for all package errors."""


class NonUnitaryInput(CartanBasisError, ValueError):
    pass


class InequalityTableUnavailable(CartanBasisError, RuntimeError):
    pass


class NoIntersection(CartanBasisError):
    def __init__(self, message, max_duration=None):
        super().__init__(message)
        self.max_duration = max_duration


class TruncationTooSmall(CartanBasisError, ValueError):
    pass


class StateIdentificationAmbiguous(CartanBasisError):
    pass


class NoSignChange(CartanBasisError, ValueError):
    pass


class FlatLandscape(CartanBasisError):
    pass


class StepTooLarge(CartanBasisError, ValueError):
    pass


class ExcessiveLeakage(CartanBasisError):
    def __init__(self, leakage):
        super().__init__(f"leakage {leakage:.3g} too large to unitarize reliably")
        self.leakage = leakage


class SynthesisFailed(CartanBasisError):
    def __init__(self, best_infidelity, restarts, decomposition=None):
        super().__init__(
            f"synthesis failed: best infidelity {best_infidelity:.3e} after {restarts} restarts"
        )
        self.best_infidelity = best_infidelity
        self.restarts = restarts
        self.decomposition = decomposition


class ParseError(CartanBasisError, ValueError):
    def __init__(self, message, line, column, expected=None):
        loc = f"line {line}, column {column}"
        detail = f"{message} at {loc}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)
        self.line = line
        self.column = column
        self.expected = expected


class UnsupportedGate(CartanBasisError, ValueError):
    def __init__(self, name, line=None, column=None):
        super().__init__(f"unsupported gate {name!r}")
        self.name = name
        self.line = line
        self.column = column


class LoweringFailed(CartanBasisError):
    def __init__(self, edge, gate, cause=None):
        super().__init__(f"cannot lower {gate!r} on edge {edge}: {cause}")
        self.edge = edge
        self.gate = gate


class StageError(CartanBasisError):
    def __init__(self, stage, artifact, cause):
        super().__init__(f"[{stage}] {artifact}: {cause}")
        self.stage = stage
        self.artifact = artifact
        self.cause = cause
