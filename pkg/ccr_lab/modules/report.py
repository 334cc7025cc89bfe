"""
Run configuration and verification reports.

A run configuration is one JSON file; complex matrices are split into real
and imaginary parts. Reports are written as one JSON object per check per
line plus a trailing summary line.
"""
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional
import hashlib
import json
import logging
import math
from numbers import Real

from .checks import CheckRecord
from .test_space import POSITIVITY_TOLERANCE, TestSpace, space_from_matrices

REQUIRED_KEYS = ("dim", "truncation", "w2_real", "w2_imag")
OPTIONAL_KEYS = (
    "tolerance", "involution_real", "involution_imag", "components",
    "seed", "probe_degree", "name", "weyl_degrees",
)


@dataclass(frozen=True)
class RunConfig:
    dim: int
    truncation: int
    w2_real: List[List[float]]
    w2_imag: List[List[float]]
    tolerance: float = POSITIVITY_TOLERANCE
    involution_real: Optional[List[List[float]]] = None
    involution_imag: Optional[List[List[float]]] = None
    components: Optional[List[str]] = None
    seed: int = 0
    probe_degree: int = 0
    name: str = "config"
    weyl_degrees: List[int] = field(default_factory=lambda: [4, 6, 8])

    def space(self) -> TestSpace:
        return space_from_matrices(
            self.w2_real, self.w2_imag, self.involution_real, self.involution_imag,
            self.components, self.tolerance, self.name,
        )

    def with_overrides(self, truncation: Optional[int] = None, seed: Optional[int] = None,
                       probe_degree: Optional[int] = None) -> "RunConfig":
        values = asdict(self)
        if truncation is not None:
            values["truncation"] = truncation
        if seed is not None:
            values["seed"] = seed
        if probe_degree is not None:
            values["probe_degree"] = probe_degree
        return validate_config(values)

    def config_hash(self) -> str:
        canonical = json.dumps(asdict(self), sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _check_matrix(name: str, value: Any, dim: int) -> None:
    if value is None:
        return
    if (not isinstance(value, list) or len(value) != dim
            or any(not isinstance(row, list) or len(row) != dim for row in value)):
        raise ValueError(f"shape: {name} must be a {dim}x{dim} matrix")


def validate_config(data: Dict[str, Any]) -> RunConfig:
    """Check keys, shapes and test-space invariants; raise ValueError naming the failure."""
    if not isinstance(data, dict):
        raise ValueError("configuration root must be a JSON object")
    missing = [key for key in REQUIRED_KEYS if key not in data]
    if missing:
        raise ValueError(f"missing configuration keys: {', '.join(missing)}")
    unknown = sorted(set(data) - set(REQUIRED_KEYS) - set(OPTIONAL_KEYS))
    if unknown:
        raise ValueError(f"unknown configuration keys: {', '.join(unknown)}")
    dim = data["dim"]
    if not _is_int(dim) or dim < 1:
        raise ValueError(f"dim must be a positive integer, got {dim!r}")
    for name in ("w2_real", "w2_imag", "involution_real", "involution_imag"):
        _check_matrix(name, data.get(name), dim)
    for name in ("truncation", "seed", "probe_degree"):
        value = data.get(name, 0)
        if not _is_int(value) or value < 0:
            raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
    tolerance = data.get("tolerance", POSITIVITY_TOLERANCE)
    if not isinstance(tolerance, Real) or isinstance(tolerance, bool) or not 0 < tolerance < math.inf:
        raise ValueError(f"tolerance must be a positive number, got {tolerance!r}")
    if not isinstance(data.get("name", ""), str):
        raise ValueError(f"name must be a string, got {data['name']!r}")
    weyl_degrees = data.get("weyl_degrees", [])
    if not isinstance(weyl_degrees, list) or not all(_is_int(n) and n >= 0 for n in weyl_degrees):
        raise ValueError(f"weyl_degrees must be a list of non-negative integers, got {weyl_degrees!r}")
    components = data.get("components")
    if components is not None:
        if not isinstance(components, list) or not all(isinstance(label, str) for label in components):
            raise ValueError(f"components must be a list of strings, got {components!r}")
        if len(components) != dim:
            raise ValueError(f"components must label all {dim} basis indices")
    config = RunConfig(**data)
    for record in config.space().validate():
        if not record.passed:
            raise ValueError(f"invariant violation: {record.name} (defect {record.defect:.3e})")
    return config


def load_config(path) -> RunConfig:
    path = Path(path)
    with path.open("r", encoding="utf-8") as f:
        data = json.load(f)
    config = validate_config(data)
    logging.info(f"Loaded configuration {config.name} from {path} (dim={config.dim}, N={config.truncation})")
    return config


def _json_number(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return format(value, ".17g")


def _json_line(record: Dict[str, Any]) -> str:
    """Flat JSON object with floats printed to 17 significant digits."""
    parts = []
    for key, value in record.items():
        encoded = _json_number(value) if isinstance(value, float) else json.dumps(value, ensure_ascii=False)
        parts.append(f"{json.dumps(key)}:{encoded}")
    return "{" + ",".join(parts) + "}"


@dataclass
class Report:
    config_hash: str
    records: List[CheckRecord] = field(default_factory=list)

    def extend(self, records: List[CheckRecord]) -> None:
        self.records.extend(records)

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def lines(self) -> List[str]:
        lines = [
            _json_line({
                "suite": r.suite, "name": r.name, "config_hash": self.config_hash,
                "defect": r.defect, "threshold": r.threshold, "passed": r.passed, "detail": r.detail,
            })
            for r in self.records
        ]
        failed = sum(not r.passed for r in self.records)
        lines.append(_json_line({
            "summary": True, "config_hash": self.config_hash, "checks": len(self.records),
            "failed": failed, "exit_status": self.exit_code,
        }))
        return lines

    def write_jsonl(self, path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as f:
            f.write("\n".join(self.lines()) + "\n")

    def table(self) -> str:
        width = max([len(f"{r.suite}.{r.name}") for r in self.records] + [5])
        rows = [f"{'check':<{width}}  {'defect':>12}  {'threshold':>10}  {'status':>6}  {'seconds':>8}"]
        for r in self.records:
            status = "pass" if r.passed else "FAIL"
            rows.append(f"{r.suite + '.' + r.name:<{width}}  {r.defect:>12.3e}  {r.threshold:>10.1e}  {status:>6}  {r.seconds:>8.3f}")
        rows.append(f"{len(self.records)} checks, {sum(not r.passed for r in self.records)} failed")
        return "\n".join(rows)
