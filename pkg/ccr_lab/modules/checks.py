from dataclasses import dataclass, replace
import logging
import math


@dataclass(frozen=True)
class CheckRecord:
    """One measured defect against its threshold."""
    name: str
    defect: float
    threshold: float
    passed: bool
    suite: str = ""
    detail: str = ""
    seconds: float = 0.0

    @classmethod
    def measure(cls, name: str, defect: float, threshold: float, detail: str = "") -> "CheckRecord":
        defect = float(defect)
        # NaN never passes
        passed = not math.isnan(defect) and defect <= threshold
        if not passed:
            logging.error(f"Check {name} failed: defect {defect:.3e} > threshold {threshold:.1e} {detail}".rstrip())
        return cls(name=name, defect=defect, threshold=float(threshold), passed=passed, detail=detail)

    @classmethod
    def assertion(cls, name: str, holds: bool, detail: str = "") -> "CheckRecord":
        """A yes/no check, recorded as defect 0 or 1 against threshold 0."""
        return cls.measure(name, 0.0 if holds else 1.0, 0.0, detail)

    def stamped(self, suite: str, seconds: float) -> "CheckRecord":
        return replace(self, suite=suite, seconds=seconds)
