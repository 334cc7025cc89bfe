"""
Verification suites and the shared state of one run.

A suite is a named generator of CheckRecords. Modules under ccr_lab.suites
expose `Suite` instances that the CLI discovers and registers by name.
"""
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Tuple
import logging
import time

import numpy as np

from .checks import CheckRecord
from .fock import FockSpace, build_fock
from .gns import GnsSpace, build_gns
from .report import RunConfig
from .wightman_functional import WightmanFunctional


class SuiteContext:
    """Configuration, test space and lazily built constructions shared by the suites of a run."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.space = config.space()
        self.functional = WightmanFunctional(self.space)
        self._gns: Dict[int, GnsSpace] = {}
        self._fock: Dict[int, FockSpace] = {}

    @property
    def degree(self) -> int:
        return self.config.truncation

    def rng(self) -> np.random.Generator:
        """A fresh generator per suite so that `all` reproduces the single-suite runs."""
        return np.random.default_rng(self.config.seed)

    def require_degree(self, minimum: int, suite: str) -> None:
        if self.degree < minimum:
            raise ValueError(f"suite {suite} needs truncation >= {minimum}, got {self.degree}")

    def gns(self, degree: Optional[int] = None) -> GnsSpace:
        degree = self.degree if degree is None else degree
        if degree not in self._gns:
            self._gns[degree] = build_gns(self.functional, degree, self.config.tolerance)
        return self._gns[degree]

    def fock(self, degree: Optional[int] = None) -> FockSpace:
        degree = self.degree if degree is None else degree
        if degree not in self._fock:
            self._fock[degree] = build_fock(self.space, degree)
        return self._fock[degree]

    def field_pair(self) -> Tuple[np.ndarray, np.ndarray]:
        """First two hermitian basis vectors; a one-dimensional space pairs e1 with itself."""
        basis = self.space.hermitian_basis
        return basis[0], basis[1] if len(basis) > 1 else basis[0]

    def unit_hermitian(self, rng: np.random.Generator) -> np.ndarray:
        h = self.space.random_hermitian(rng)
        return h / np.linalg.norm(h)


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    checks: Callable[[SuiteContext], Iterator[CheckRecord]]

    def run(self, context: SuiteContext) -> List[CheckRecord]:
        logging.info(f"Running suite {self.name} on {context.space.name} (N={context.degree})")
        records = []
        started = time.perf_counter()
        for record in self.checks(context):
            now = time.perf_counter()
            records.append(record.stamped(self.name, now - started))
            started = now
        failed = sum(not r.passed for r in records)
        logging.info(f"Suite {self.name} finished: {len(records)} checks, {failed} failed")
        return records
