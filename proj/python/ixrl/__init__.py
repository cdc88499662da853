"""Interestingness analysis and highlight summaries for tabular RL agents.

Thin wrapper over the compiled core. File-producing calls mirror the
``ixrl`` command-line tool and return parsed JSON where useful.
"""

from __future__ import annotations

import json
import os
from typing import Iterable, Optional

from ._core import (  # noqa: F401
    ConfigError,
    Error,
    Game,
    IntegrityError,
    IoError,
    NumericError,
    ProvenanceError,
    SchemaError,
    UsageError,
    describe,
    encode,
    evenness,
    jsd,
    outliers,
    softmax,
    techniques,
)
from . import _core

__all__ = [
    "Game", "train", "analyze", "summarize", "digest", "evenness", "jsd", "outliers", "softmax",
    "encode", "describe", "techniques", "Error", "ConfigError", "UsageError", "NumericError",
    "IoError", "SchemaError", "ProvenanceError", "IntegrityError",
]


def train(out: os.PathLike | str, profile: str = "optimized", seed: int = 1,
          episodes_train: Optional[int] = None, episodes_test: Optional[int] = None,
          config: os.PathLike | str = "") -> dict:
    """Train one agent; writes trace.tsv, dataset.json and performance.json into ``out``."""
    trace, dataset, perf, trace_hash = _core._train(
        os.fspath(out), profile, seed, episodes_train, episodes_test, os.fspath(config))
    with open(perf, encoding="utf-8") as f:
        performance = json.load(f)
    return {"trace": str(trace), "dataset": str(dataset), "performance": performance,
            "trace_hash": trace_hash}


def analyze(input: os.PathLike | str, out: os.PathLike | str | None = None, phase: str = "all",
            config: os.PathLike | str = "") -> dict:
    """Analyze a dataset snapshot or trace; optionally save the report to ``out``."""
    text = _core._analyze(os.fspath(input), phase, os.fspath(config))
    if out is not None:
        _core._save_report(text, os.fspath(out))
    return json.loads(text)


def summarize(trace: os.PathLike | str, report: os.PathLike | str, out: os.PathLike | str,
              techniques: Iterable[str] = (), phase: str = "test", ppm: bool = True) -> list[dict]:
    """Select and render highlights; returns one manifest dict per technique."""
    manifests, _frames = _core._summarize(os.fspath(trace), os.fspath(report), list(techniques),
                                          phase, os.fspath(out), ppm)
    return [json.loads(m) for m in manifests]


def digest(report: os.PathLike | str, rows: int = 10) -> str:
    """Plain-text digest of a saved report."""
    return _core._digest(os.fspath(report), rows)
