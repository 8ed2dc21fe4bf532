from __future__ import annotations


class GraphFormatError(ValueError):
    def __init__(self, message: str, *, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class InconsistentRotation(ValueError):
    pass


class PlanarityViolation(ValueError):
    pass


class NotInClass(ValueError):
    def __init__(self, predicate: str, detail: str = "") -> None:
        message = f"graph is not in class: {predicate} fails"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)
        self.predicate = predicate


class ColoringConflict(ValueError):
    pass


class GlueConflict(ValueError):
    pass


class PropertyViolation(ValueError):
    def __init__(self, prop: int, ear: int, detail: str) -> None:
        super().__init__(f"property {prop} violated by ear {ear}: {detail}")
        self.prop = prop
        self.ear = ear


class EarWithoutInterior(ValueError):
    pass


class NoConfiguration(RuntimeError):
    pass


class NoCaseApplies(RuntimeError):
    pass


class ClassViolation(RuntimeError):
    pass


class LiftVerificationError(RuntimeError):
    pass
