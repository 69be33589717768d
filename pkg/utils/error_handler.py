"""
Error Handling and Monitoring for the Fermionic Entanglement Toolkit
Domain exception hierarchy plus error/performance recording decorators
"""

import threading
import time
import traceback
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field
from functools import wraps
from typing import Any, Callable, Deque, Dict, List, Optional

from .common import setup_logging, get_current_timestamp


class EntanglementError(Exception):
    """Base class for every error raised by the toolkit"""

    def __init__(self, message: str = "", **context: Any):
        super().__init__(message or self.__class__.__name__)
        self.context: Dict[str, Any] = context

    @property
    def code(self) -> str:
        return self.__class__.__name__

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable error object"""
        return {
            "error": self.code,
            "message": str(self),
            "context": {k: _jsonable(v) for k, v in self.context.items()},
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


class InputValidationError(EntanglementError):
    """Invalid input: a precondition of an operation does not hold"""


class NotSquare(InputValidationError):
    pass


class NotHermitian(InputValidationError):
    pass


class NegativeEigenvalue(InputValidationError):
    pass


class DimensionMismatch(InputValidationError):
    pass


class NegativeProductEigenvalue(InputValidationError):
    pass


class InvalidQuantumNumbers(InputValidationError):
    pass


class OddDimension(InputValidationError):
    """Single-particle dimension is not even (two_s must be odd)"""


class NotOrthonormal(InputValidationError):
    pass


class RepeatedIndex(InputValidationError):
    pass


class DimensionTooLarge(InputValidationError):
    pass


class ParameterOutOfRange(InputValidationError):
    pass


class UnknownFamily(InputValidationError):
    pass


class InvalidTrace(InputValidationError):
    pass


class SupportLeak(InputValidationError):
    """Density matrix has weight outside the antisymmetric sector"""


class NotPure(InputValidationError):
    pass


class InvalidOrder(InputValidationError):
    """Entropic order below 1"""


class UnsupportedParticleCount(InputValidationError):
    pass


class WrongDimension(InputValidationError):
    pass


class InvalidDimensions(InputValidationError):
    pass


class ParseError(InputValidationError):
    pass


class InvalidState(InputValidationError):
    pass


class ComputationError(EntanglementError):
    """Internal numerical failure"""


class ConvergenceFailure(ComputationError):
    pass


class PropertyViolation(ComputationError):
    """A property that must hold for every valid input was observed to fail"""


class NonMonotoneWarning(UserWarning):
    """Detection region of an indicator is not a single upper interval"""


SEVERITIES = ('low', 'medium', 'high', 'critical')


@dataclass
class ErrorEvent:
    """One recorded failure of a toolkit operation"""
    timestamp: float
    component: str
    code: str
    message: str
    severity: str
    context: Dict[str, Any] = field(default_factory=dict)
    stack_trace: str = ""


@dataclass
class PerformanceMetric:
    """Wall time of one monitored call"""
    timestamp: float
    component: str
    operation: str
    duration_ms: float
    success: bool


class ErrorHandler:
    """Thread-safe store of error events and call timings for one component"""

    SLOW_OPERATION_MS = 5000.0
    MAX_RECORDS = 1000  # oldest events and timings are dropped first

    def __init__(self, component: str):
        self.component = component
        self.logger = setup_logging(f"error_handler.{component}")
        self._events: Deque[ErrorEvent] = deque(maxlen=self.MAX_RECORDS)
        self._timings: Deque[PerformanceMetric] = deque(maxlen=self.MAX_RECORDS)
        self._lock = threading.Lock()

    def handle_error(self, error: Exception, context: Optional[Dict[str, Any]] = None,
                     severity: str = 'medium') -> ErrorEvent:
        """
        Record an exception and log it at a level matching its severity.

        Toolkit errors contribute their own context and code; other exceptions are
        recorded under their class name.
        """
        if severity not in SEVERITIES:
            severity = 'medium'
        merged = dict(context or {})
        if isinstance(error, EntanglementError):
            merged.update({k: _jsonable(v) for k, v in error.context.items()})
            code = error.code
        else:
            code = type(error).__name__

        event = ErrorEvent(timestamp=get_current_timestamp(), component=self.component,
                           code=code, message=str(error), severity=severity,
                           context=merged, stack_trace=traceback.format_exc())
        with self._lock:
            self._events.append(event)

        emit = {
            'critical': self.logger.critical,
            'high': self.logger.error,
            'medium': self.logger.warning,
        }.get(severity, self.logger.info)
        emit("error_recorded", error_type=code, message=event.message, severity=severity,
             **merged)
        return event

    def record_performance(self, operation: str, duration_ms: float, success: bool = True):
        metric = PerformanceMetric(timestamp=get_current_timestamp(), component=self.component,
                                   operation=operation, duration_ms=duration_ms, success=success)
        with self._lock:
            self._timings.append(metric)

        if success and duration_ms <= self.SLOW_OPERATION_MS:
            self.logger.debug("operation_timed", operation=operation,
                              duration_ms=round(duration_ms, 2))
        else:
            self.logger.warning("slow_or_failed_operation", operation=operation,
                                duration_ms=round(duration_ms, 2), success=success)

    def get_error_summary(self) -> Dict[str, Any]:
        with self._lock:
            events = list(self._events)
        summary: Dict[str, Any] = {
            "total_errors": len(events),
            "error_types": dict(Counter(e.code for e in events)),
            "severity_breakdown": dict(Counter(e.severity for e in events)),
        }
        if events:
            summary["most_recent_error"] = events[-1].code
        return summary

    def get_performance_summary(self) -> Dict[str, Any]:
        with self._lock:
            timings = list(self._timings)
        if not timings:
            return {"total_operations": 0}

        by_operation: Dict[str, List[PerformanceMetric]] = defaultdict(list)
        for metric in timings:
            by_operation[metric.operation].append(metric)

        operation_stats = {}
        for operation, calls in by_operation.items():
            durations = [c.duration_ms for c in calls]
            operation_stats[operation] = {
                "count": len(calls),
                "avg_duration_ms": sum(durations) / len(calls),
                "max_duration_ms": max(durations),
                "success_rate": sum(c.success for c in calls) / len(calls),
            }
        return {
            "total_operations": len(timings),
            "success_rate": sum(m.success for m in timings) / len(timings),
            "operation_stats": operation_stats,
        }


_handlers: Dict[str, ErrorHandler] = {}
_handlers_lock = threading.Lock()


def get_error_handler(component: str) -> ErrorHandler:
    """Shared ErrorHandler of a component, created on first use"""
    with _handlers_lock:
        if component not in _handlers:
            _handlers[component] = ErrorHandler(component)
        return _handlers[component]


def error_handler_decorator(component: str, severity: str = 'medium'):
    """
    Record any exception escaping the wrapped function, then re-raise it.

    Input validation errors are recorded as 'low' whatever the default severity.
    """
    def decorator(func: Callable):
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except Exception as exc:
                level = 'low' if isinstance(exc, InputValidationError) else severity
                call = {"function": func.__qualname__, "call_args": repr(args)[:200],
                        "call_kwargs": repr(kwargs)[:200]}
                get_error_handler(component).handle_error(exc, call, level)
                raise
        return wrapper
    return decorator


def performance_monitor(component: str):
    """Time every call of the wrapped function, successful or not"""
    def decorator(func: Callable):
        @wraps(func)
        def wrapper(*args, **kwargs):
            started = time.perf_counter()
            ok = False
            try:
                result = func(*args, **kwargs)
                ok = True
                return result
            finally:
                get_error_handler(component).record_performance(
                    func.__name__, (time.perf_counter() - started) * 1000.0, ok)
        return wrapper
    return decorator
