"""Run catalog checks at a base lattice and its refinement."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from ..errors import UnknownCheckError
from .checks import CHECKS
from .config import VerifyConfig
from .report import CheckReport, Measurement, format_table

__all__ = ["run_check", "run_suite", "SuiteSummary", "judge"]


def _drift(a: float, b: float) -> float:
    if a == b:
        return 1.0
    if not (math.isfinite(a) and math.isfinite(b)) or a <= 0 or b <= 0:
        return math.inf
    return max(a / b, b / a)


def judge(levels: list[Measurement], bound: float) -> tuple[dict[str, float], bool, list[str]]:
    """Drift per constant and the verdict with its reasons."""
    base, fine = levels[0], levels[-1]
    drift, reasons = {}, []
    for key, value in base.constants.items():
        other = fine.constants.get(key, math.nan)
        for lvl, v in ((0, value), (1, other)):
            if not math.isfinite(v):
                reasons.append(f"constant {key} not finite at level {lvl}")
        drift[key] = _drift(value, other)
        if drift[key] > bound:
            reasons.append(f"constant {key} drifts by {drift[key]:.4f} > {bound}")
    for lvl, meas in enumerate(levels):
        for name, (err, tol) in meas.identities.items():
            if not err <= tol:
                reasons.append(f"identity {name} error {err:.3e} > {tol:.1e} at level {lvl}")
    return drift, not reasons, reasons


def run_check(check_id: str, config: VerifyConfig | None = None) -> CheckReport:
    """Run one check at the configured lattices and at their refinement.

    Raises
    ------
    UnknownCheckError
        If ``check_id`` is not in the catalog.
    """
    config = config or VerifyConfig()
    try:
        spec = CHECKS[check_id]
    except KeyError:
        raise UnknownCheckError(f"unknown check {check_id!r}; known: {', '.join(sorted(CHECKS))}") from None
    start = time.perf_counter()
    levels = [spec.run(config, 0), spec.run(config, 1)]
    drift, passed, reasons = judge(levels, config.drift_bound)
    return CheckReport(
        check=spec.id,
        description=spec.description,
        family=list(spec.family),
        seeds=list(config.seeds),
        levels=levels,
        drift=drift,
        passed=passed,
        reasons=reasons,
        seconds=time.perf_counter() - start,
    )


@dataclass
class SuiteSummary:
    reports: list[CheckReport]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    @property
    def exit_status(self) -> int:
        return 0 if self.passed else 1

    def table(self) -> str:
        return format_table(self.reports)


def run_suite(config: VerifyConfig | None = None, progress=None) -> SuiteSummary:
    """Run the selected checks (all by default) in id order.

    ``progress`` is called with each finished report, if given.
    """
    config = config or VerifyConfig()
    ids = sorted(config.checks) if config.checks else sorted(CHECKS)
    for cid in ids:
        if cid not in CHECKS:
            raise UnknownCheckError(f"unknown check {cid!r}")
    reports = []
    for cid in ids:
        report = run_check(cid, config)
        reports.append(report)
        if progress is not None:
            progress(report)
    return SuiteSummary(reports)
