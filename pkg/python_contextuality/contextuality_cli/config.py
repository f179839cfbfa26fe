from __future__ import annotations

import argparse
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from exgraph import DEFAULT_SDP_GAP_TOL
from mnchv_analysis import DEFAULT_SIGNIFICANCE
from probability_table import Inequality, InvalidArgumentError

from .documents import STDIO

SUBCOMMANDS = ("bounds", "predict", "simulate", "analyze", "combine", "report")
FORMATS = ("json", "markdown", "csv", "realization")
DEFAULT_MEAN_COUNTS = 1e6


@dataclass(frozen=True)
class RunConfig:
    """Everything one run depends on; equal configs give byte-identical output."""

    subcommand: str
    inequality: Optional[Inequality] = None
    inputs: Tuple[str, ...] = ()
    output: str = STDIO
    seed: int = 0
    tol: float = DEFAULT_SDP_GAP_TOL
    significance: float = DEFAULT_SIGNIFICANCE
    mean_counts: float = DEFAULT_MEAN_COUNTS
    noise: str = "none"
    output_format: str = "json"
    realization: Optional[str] = None
    dataset: Optional[str] = None

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise InvalidArgumentError(f"Unknown subcommand '{self.subcommand}'")
        if self.output_format not in FORMATS:
            raise InvalidArgumentError(f"Unknown output format '{self.output_format}'")
        if self.seed < 0:
            raise InvalidArgumentError(f"--seed must be non-negative, got {self.seed}")
        if not self.tol > 0.0:
            raise InvalidArgumentError(f"--tol must be positive, got {self.tol}")
        if not self.significance > 0.0:
            raise InvalidArgumentError(
                f"--significance must be positive, got {self.significance}"
            )
        if not self.mean_counts > 0.0 or math.isinf(self.mean_counts):
            raise InvalidArgumentError(
                f"--mean-counts must be a positive number, got {self.mean_counts}"
            )

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "RunConfig":
        inputs = getattr(args, "inputs", None) or ()
        if isinstance(inputs, str):
            inputs = (inputs,)
        return cls(
            subcommand=args.command,
            inequality=getattr(args, "inequality", None),
            inputs=tuple(inputs),
            output=getattr(args, "out", STDIO),
            seed=getattr(args, "seed", 0),
            tol=getattr(args, "tol", DEFAULT_SDP_GAP_TOL),
            significance=getattr(args, "significance", DEFAULT_SIGNIFICANCE),
            mean_counts=getattr(args, "mean_counts", DEFAULT_MEAN_COUNTS),
            noise=getattr(args, "noise", "none"),
            output_format=getattr(args, "format", "json"),
            realization=getattr(args, "realization", None),
            dataset=getattr(args, "dataset", None),
        )


__all__ = ["DEFAULT_MEAN_COUNTS", "FORMATS", "SUBCOMMANDS", "RunConfig"]
