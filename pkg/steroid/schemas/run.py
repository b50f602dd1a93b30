from enum import Enum
from pathlib import Path
from typing import Optional, Tuple

from pydantic import BaseModel, model_validator

from .decomposition import DecomposeOptions, HeadMode


class Command(str, Enum):
    decompose = "decompose"
    embed = "embed"
    verify = "verify"
    generate = "generate"


class ReportFormat(str, Enum):
    text = "text"
    rows = "rows"


class RunConfig(BaseModel):
    command: Command
    input_path: Optional[Path] = None
    decomposition_path: Optional[Path] = None
    output_path: Optional[Path] = None
    tau: Optional[float] = None
    max_tail_iters: Optional[int] = None
    head: Optional[HeadMode] = None
    seed: Optional[int] = None
    dim: Optional[int] = None
    order: Optional[int] = None
    int_range: Optional[Tuple[int, int]] = None
    report_format: ReportFormat = ReportFormat.rows

    @model_validator(mode='after')
    def validate_values(self):
        if self.tau is not None and self.tau <= 0:
            raise ValueError('tau must be positive')
        if self.max_tail_iters is not None and self.max_tail_iters < 0:
            raise ValueError('max-iters must be non-negative')
        if self.seed is not None and not 0 <= self.seed < 2 ** 64:
            raise ValueError('seed must be an unsigned 64-bit integer')
        if self.int_range is not None and self.int_range[0] > self.int_range[1]:
            raise ValueError('int-range must be LOW HIGH with LOW <= HIGH')
        for name in ('dim', 'order'):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f'{name} must be positive')
        return self

    def decompose_options(self) -> DecomposeOptions:
        return DecomposeOptions.from_settings(
            tau=self.tau,
            max_tail_iters=self.max_tail_iters,
            head=self.head,
        )
