from __future__ import annotations

import dataclasses
import typing


@dataclasses.dataclass(frozen=True)
class SourcePosition:
    file: str
    line: int
    col: int

    @staticmethod
    def at(text: str, offset: int, file: str = "<input>") -> SourcePosition:
        """
        @param offset: character offset into text
        @return: 1-based line and column of offset
        """
        line = text.count("\n", 0, offset) + 1
        col = offset - (text.rfind("\n", 0, offset) + 1) + 1
        return SourcePosition(file, line, col)

    def __str__(self):
        return f"{self.file}:{self.line}:{self.col}"


class EzQhdlError(Exception):
    """
    Root of all user-facing errors. The CLI maps these to exit code 1.
    """
    pass


class QHDLError(EzQhdlError):

    def __init__(self, message: str, position: typing.Optional[SourcePosition] = None):
        super().__init__(message)
        self.message = message
        self.position = position

    def __str__(self):
        if self.position is None:
            return self.message

        return f"{self.position}: {self.message}"


class LexicalError(QHDLError):
    pass


class QHDLSyntaxError(QHDLError):
    pass


class DesignError(QHDLError):
    """
    Parse-time validation failures (port ordering, duplicate names, unknown entities).
    """
    pass


class NetlistError(QHDLError):
    pass


class CircuitError(EzQhdlError):
    pass


class AlgebraError(EzQhdlError):
    pass


class SpaceMismatchError(AlgebraError):
    pass


class FeedbackError(AlgebraError):
    """
    Raised when 1 - S_kl is singular, i.e. the feedback loop is not well posed.
    """
    pass


class BindingError(EzQhdlError):
    pass


class CompileError(EzQhdlError):
    pass


class SimulationError(EzQhdlError):
    pass


class ReductionError(EzQhdlError):
    pass


class ModelFormatError(EzQhdlError):
    pass


class SynthesisDefect(RuntimeError):
    """
    Internal inconsistency of the synthesis bookkeeping. Never caused by user input.
    """
    pass
