"""
Analysis options
"""

from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional

from django.conf import settings

from apps.core.exceptions import ValidationError

ALGORITHMS = ('fispo', 'probobs')

# Option name -> settings name holding its default
SETTING_DEFAULTS = {
    'seed': ('OBSRANK_DEFAULT_SEED', 20231),
    'prime': ('OBSRANK_DEFAULT_PRIME', 2**62 - 57),
    'max_lie': ('OBSRANK_MAX_LIE_ORDER', 40),
    'node_budget': ('OBSRANK_NODE_BUDGET', 2_000_000),
    'taylor_order': ('OBSRANK_TAYLOR_ORDER', 4),
    'retry_budget': ('OBSRANK_RETRY_BUDGET', 3),
    'sample_bound': ('OBSRANK_SAMPLE_BOUND', 2**20),
}


def parse_number(text: Any) -> Fraction:
    """
    Exact value of '2', '0.5', '1/3' or '2.5e-3'
    """
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"'{text}' is not a number")


def parse_cap(text: Any) -> Optional[int]:
    """
    Derivative cap: a non-negative integer or 'inf' (None)
    """
    if text is None or str(text).strip().lower() in ('inf', 'infinity'):
        return None
    try:
        cap = int(str(text).strip())
    except ValueError:
        raise ValidationError(f"'{text}' is not a derivative count")
    if cap < 0:
        raise ValidationError(f"Derivative count must be non-negative, got {cap}")
    return cap


@dataclass(frozen=True)
class AnalysisOptions:
    """
    Everything that steers one analysis.

    None means "use the configured default" for the numeric settings;
    from_settings fills them in.
    """
    algorithm: str = 'probobs'
    unknown_derivs: Mapping[str, Optional[int]] = field(default_factory=dict)
    known_input_cap: Optional[int] = None
    fix: Mapping[str, Fraction] = field(default_factory=dict)
    seed: Optional[int] = None
    prime: Optional[int] = None
    max_lie: Optional[int] = None
    min_lie: Optional[int] = None
    node_budget: Optional[int] = None
    taylor_order: Optional[int] = None
    taylor_center: Mapping[str, Fraction] = field(default_factory=dict)
    retry_budget: Optional[int] = None
    sample_bound: Optional[int] = None
    truncation_order: Optional[int] = None
    time_budget: Optional[float] = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(f"Unknown algorithm '{self.algorithm}'", hint=' or '.join(ALGORITHMS))
        for name in ('known_input_cap', 'min_lie', 'retry_budget'):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValidationError(f"{name} must be non-negative, got {value}")
        for name in ('max_lie', 'node_budget', 'taylor_order', 'truncation_order'):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValidationError(f"{name} must be positive, got {value}")
        if self.sample_bound is not None and self.sample_bound < 2:
            raise ValidationError("sample_bound must be at least 2")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValidationError("time_budget must be positive")
        for name, cap in self.unknown_derivs.items():
            if cap is not None and cap < 0:
                raise ValidationError(f"Derivative count for {name} must be non-negative, got {cap}")

    @classmethod
    def from_settings(cls, **overrides) -> 'AnalysisOptions':
        """
        Options with every unset default read from settings
        """
        return cls(**{key: value for key, value in overrides.items() if value is not None}).resolved()

    def resolved(self) -> 'AnalysisOptions':
        missing = {name: getattr(settings, setting, default)
                   for name, (setting, default) in SETTING_DEFAULTS.items() if getattr(self, name) is None}
        return replace(self, **missing) if missing else self

    def with_changes(self, **changes) -> 'AnalysisOptions':
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        data = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, Mapping):
                value = {k: (str(v) if isinstance(v, Fraction) else v) for k, v in value.items()}
            data[f.name] = value
        return data
