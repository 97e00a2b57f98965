#!/usr/bin/env python3
"""Deterministic report emission: JSON documents and pandas CSV tables."""

import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, TextIO

import pandas as pd

from hurwitz_config import RunConfig
from hurwitz_errors import HurwitzError

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.12g"


def fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _plain(value: Any) -> Any:
    if isinstance(value, Fraction):
        return fraction_text(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if hasattr(value, "item") and callable(value.item):
        return value.item()
    return value


def render_json(payload: Dict[str, Any]) -> str:
    return json.dumps(_plain(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n", float_format=CSV_FLOAT_FORMAT)


def write_text(text: str, path: Optional[str], stream: Optional[TextIO] = None) -> None:
    if path is None:
        (stream or sys.stdout).write(text)
        return
    try:
        target = Path(path)
        if target.parent and not target.parent.exists():
            target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as exc:
        raise HurwitzError(f"Failed to write report to {path}: {exc.strerror}", {"path": str(path)}) from exc
    logger.info(f"Wrote {len(text)} bytes to {path}")


def emit_report(payload: Dict[str, Any], config: RunConfig, frame: Optional[pd.DataFrame] = None,
                stream: Optional[TextIO] = None) -> str:
    """Write payload as JSON, or frame as CSV when the configured format is csv"""
    if config.output_format == "csv" and frame is not None:
        text = render_csv(frame)
    else:
        if config.output_format == "csv":
            logger.warning("This report has no tabular form; writing JSON instead")
        text = render_json(payload)
    write_text(text, config.output_path, stream)
    return text
