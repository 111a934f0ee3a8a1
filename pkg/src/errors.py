#!/usr/bin/env python3
"""
⚠️ Error types for cohomog7
Every failure the library can raise, with a stable code and the CLI exit status it maps to.
"""

from typing import Any, Dict, List, Optional


class Cohomog7Error(Exception):
    """Base exception for all cohomog7 errors"""
    code = "error"
    exit_code = 1

    def __init__(self, message: str, code: Optional[str] = None, data: Optional[Dict[str, Any]] = None):
        self.message = message
        if code is not None:
            self.code = code
        self.data = data or {}
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        return {'code': self.code, 'message': self.message, 'data': self.data}


class InvalidInputError(Cohomog7Error):
    """Malformed value handed to an operation"""
    code = "invalid-input"
    exit_code = 1


class ParameterParseError(InvalidInputError):
    """A parameter or group string does not match the grammar"""
    code = "parse-error"

    def __init__(self, message: str, text: str, line: Optional[int] = None):
        data: Dict[str, Any] = {'text': text}
        if line is not None:
            data['line'] = line
            message = f"line {line}: {message}"
        super().__init__(message, data=data)
        self.text = text
        self.line = line


class HypothesesNotMetError(Cohomog7Error):
    """A lemma was asked to conclude while one of its hypotheses is false"""
    code = "hypotheses-not-met"
    exit_code = 1

    def __init__(self, hypothesis: str, detail: str = ""):
        message = f"hypothesis not met: {hypothesis}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message, data={'hypothesis': hypothesis})
        self.hypothesis = hypothesis


class InvalidParametersError(Cohomog7Error):
    """Parameter tuple violates the restrictions of its family"""
    code = "invalid-parameters"
    exit_code = 2

    def __init__(self, label: str, violations: List[Any]):
        summary = "; ".join(v.message for v in violations)
        super().__init__(
            f"{label} is not a valid parameter tuple: {summary}",
            data={'violations': [v.to_dict() for v in violations]}
        )
        self.violations = violations


class ConsistencyError(Cohomog7Error):
    """Two independent computations of the same quantity disagree"""
    code = "internal-consistency"
    exit_code = 3
