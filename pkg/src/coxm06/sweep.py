"""Theorem-verification sweeps: class generation and a parallel driver."""
from __future__ import annotations

import itertools
import json
import multiprocessing as mp
from dataclasses import dataclass

from .lattice import PAIRS, DivisorClass, gclass, iter_generator_sums
from .oracle import verify_theorem


@dataclass(frozen=True)
class SweepConfig:
    mode: str = "combinations"  # or "box"
    max_total: int = 2
    box: tuple = (2, 1, 0)  # d_max, m_max, mline_max
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in ("combinations", "box"):
            raise ValueError(f"unknown sweep mode {self.mode!r}")
        if self.max_total < 0 or min(self.box) < 0 or self.jobs < 1:
            raise ValueError("sweep bounds must be nonnegative and jobs >= 1")


def classes_from_combinations(max_total: int) -> list:
    """Distinct classes of sums of 1..max_total generators, in a fixed order."""
    seen = set()
    for gens in iter_generator_sums(max_total):
        D = DivisorClass.zero()
        for g in gens:
            D = D + gclass(g)
        seen.add(D)
    return sorted(seen, key=lambda D: D.vector())


def classes_from_box(d_max: int, m_max: int, mline_max: int) -> list:
    """Every class with 0 <= d <= d_max, 0 <= m_i <= m_max, 0 <= m_ij <= mline_max."""
    out = []
    for d in range(d_max + 1):
        for m in itertools.product(range(m_max + 1), repeat=5):
            for ml in itertools.product(range(mline_max + 1), repeat=len(PAIRS)):
                out.append(DivisorClass(d, m, ml))
    return out


def sweep_classes(cfg: SweepConfig) -> list:
    if cfg.mode == "combinations":
        return classes_from_combinations(cfg.max_total)
    return classes_from_box(*cfg.box)


def _verify_record(D: DivisorClass) -> dict:
    return verify_theorem(D).to_dict()


def run_verify(classes, jobs: int = 1, emit=None) -> dict:
    """Verify each class; emit(record) is called in input order from this
    process only.  Returns the summary record."""
    total = passed = 0
    failures = []

    def handle(rec):
        nonlocal total, passed
        total += 1
        if rec["pass"]:
            passed += 1
        else:
            failures.append(rec["class"])
        if emit is not None:
            emit(rec)

    classes = list(classes)
    if jobs > 1 and len(classes) > 1:
        with mp.get_context("fork").Pool(jobs) as pool:
            for rec in pool.imap(_verify_record, classes, chunksize=16):
                handle(rec)
    else:
        for D in classes:
            handle(_verify_record(D))
    return {"summary": True, "total": total, "passed": passed,
            "failed": total - passed, "failures": failures}


def format_record(rec: dict, fmt: str) -> str:
    if fmt == "records":
        return json.dumps(rec, sort_keys=True)
    if rec.get("summary"):
        return f"verified {rec['total']} classes: {rec['passed']} pass, {rec['failed']} fail"
    flag = "PASS" if rec["pass"] else "FAIL"
    return (f"{flag} {rec['class']}  h0={rec['h0']} monomials={rec['n_monomials']} "
            f"rank={rec['rank']}")

