import os
from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import UsageError


@dataclass(frozen=True)
class EngineConfig:
    """
    Safety bounds and parallelism shared by the CLI and the web service.
    """
    max_box_budget: int = 16
    max_order: Fraction = Fraction(12)
    max_rank: int = 4
    jobs: int = 1
    default_format: str = 'json'

    ENV_KEYS = {
        'BETTI_MAX_BOX_BUDGET': 'max_box_budget',
        'BETTI_MAX_ORDER': 'max_order',
        'BETTI_MAX_RANK': 'max_rank',
        'BETTI_JOBS': 'jobs',
    }

    @classmethod
    def from_env(cls, environ=None):
        """
        Defaults overridden by optional BETTI_* environment variables.
        """
        environ = os.environ if environ is None else environ
        overrides = {}
        for key, field in cls.ENV_KEYS.items():
            raw = environ.get(key)
            if raw is None or raw.strip() == '':
                continue
            try:
                value = Fraction(raw.strip()) if field == 'max_order' else int(raw)
            except ValueError:
                raise UsageError(f"{key} must be a number, got {raw!r}")
            if value < (1 if field in ('jobs', 'max_rank') else 0):
                raise UsageError(f"{key} out of range: {raw!r}")
            overrides[field] = value
        return cls(**overrides)

    def with_overrides(self, **changes):
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def as_flask_config(self):
        return {
            'MAX_BOX_BUDGET': self.max_box_budget,
            'MAX_ORDER': self.max_order,
            'MAX_RANK': self.max_rank,
            'JOBS': self.jobs,
            'JSON_SORT_KEYS': False,
        }
