"""
Report - Check records, suite reports and their serialization.

A check ties one statistic to one claim tag. A suite report is a list of
checks plus the configuration echo needed to reproduce it.

JSON layout written by `write_report`:

    {"suite": ..., "config": {...}, "seed": ...,
     "checks": [{"name", "claim", "statistic", "threshold", "pass",
                 "informational", "details"}, ...],
     "pass": ..., "wall_time_s": ...}
"""

import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

from .errors import ReportIOError

logger = logging.getLogger(__name__)

REPORT_FORMATS = ("json", "csv-summary")


@dataclass
class CheckResult:
    """
    Outcome of one verification check.

    Informational checks are recorded but never fail a report.
    """

    name: str
    claim: str
    statistic: float | None
    threshold: float | None
    passed: bool
    details: dict = field(default_factory=dict)
    informational: bool = False

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "claim": self.claim,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "pass": self.passed,
            "informational": self.informational,
            "details": self.details,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CheckResult":
        return cls(
            name=data["name"],
            claim=data["claim"],
            statistic=data.get("statistic"),
            threshold=data.get("threshold"),
            passed=bool(data["pass"]),
            details=data.get("details", {}),
            informational=bool(data.get("informational", False)),
        )


@dataclass
class CheckReport:
    """A group of checks produced by one certification routine."""

    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def get(self, name: str) -> CheckResult | None:
        for check in self.checks:
            if check.name == name:
                return check
        return None

    def __iter__(self):
        return iter(self.checks)

    def __len__(self) -> int:
        return len(self.checks)


@dataclass
class VerifyReport:
    """Machine-readable record of one suite run."""

    suite: str
    config: dict
    seed: int | None
    checks: list[CheckResult] = field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    @property
    def failed_checks(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed and not c.informational]

    def get(self, name: str) -> CheckResult | None:
        for check in self.checks:
            if check.name == name:
                return check
        return None

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config,
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
            "pass": self.passed,
            "wall_time_s": self.wall_time_s,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VerifyReport":
        return cls(
            suite=data["suite"],
            config=data.get("config", {}),
            seed=data.get("seed"),
            checks=[CheckResult.from_dict(c) for c in data.get("checks", [])],
            wall_time_s=float(data.get("wall_time_s", 0.0)),
        )

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "VerifyReport":
        return cls.from_dict(json.loads(text))

    def outcome(self) -> dict:
        """Everything except wall time; equal across reruns with the same inputs."""
        data = self.to_dict()
        data.pop("wall_time_s")
        return data


def render_csv_summary(report: VerifyReport) -> str:
    """One row per check."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["name", "claim", "statistic", "threshold", "pass", "informational"])
    for check in report.checks:
        writer.writerow([
            check.name,
            check.claim,
            "" if check.statistic is None else repr(check.statistic),
            "" if check.threshold is None else repr(check.threshold),
            check.passed,
            check.informational,
        ])
    return buffer.getvalue()


def write_report(
    report: VerifyReport,
    format: Literal["json", "csv-summary"] = "json",
    path: str | Path | None = None,
) -> None:
    """
    Serialize a report.

    Args:
        report: Report to write
        format: "json" or "csv-summary"
        path: Destination file; None or "-" writes to stdout

    Raises:
        ValueError: If the format is unknown
        ReportIOError: If the destination cannot be written
    """
    if format == "json":
        text = report.to_json() + "\n"
    elif format == "csv-summary":
        text = render_csv_summary(report)
    else:
        raise ValueError(f"Unknown report format: {format}")

    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return

    try:
        Path(path).write_text(text)
    except OSError as e:
        raise ReportIOError(f"Cannot write report to {path}: {e}") from e
    logger.debug(f"Wrote {format} report for suite '{report.suite}' to {path}")
