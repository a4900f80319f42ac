"""Report assembly and serialization (JSON primary, CSV for flat spectra)."""

from __future__ import annotations

import csv
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Any

import numpy as np

from . import __version__
from .field import FieldSpec
from .space import ProjectiveSpace

SCHEMA_VERSION = 1


def jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


@dataclass
class Report:
    command: str
    config: dict
    gf: FieldSpec | None = None
    results: dict = field(default_factory=dict)
    verdicts: dict[str, bool | None] = field(default_factory=dict)
    spectra: dict[str, dict[int, int]] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    @contextmanager
    def phase(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = round(time.perf_counter() - start, 6)

    def verdict(self, name: str, passed: bool | None) -> None:
        self.verdicts[name] = None if passed is None else bool(passed)

    @property
    def passed(self) -> bool:
        return all(v is not False for v in self.verdicts.values())

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "schema": SCHEMA_VERSION,
            "version": __version__,
            "command": self.command,
            "config": self.config,
            "field": None if self.gf is None else {
                "p": self.gf.p, "h": self.gf.h, "q": self.gf.q,
                "modulus": list(self.gf.modulus),
            },
            "results": self.results,
            "spectra": self.spectra,
            "verdicts": self.verdicts,
            "passed": self.passed,
        }
        if timings:
            out["timings"] = self.timings
        return jsonable(out)

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True) + "\n"

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["spectrum", "value", "multiplicity"])
            for name in sorted(self.spectra):
                for value, mult in sorted(self.spectra[name].items()):
                    writer.writerow([name, value, mult])


def strip_timings(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timings"}


def point_record(space: ProjectiveSpace, index: int) -> dict:
    return {"index": int(index), "coords": space.points[index].tolist()}


# -- family files ----------------------------------------------------------------

class FamilyFileError(ValueError):
    pass


def read_family_file(fh: IO[str], space: ProjectiveSpace) -> np.ndarray:
    """Hyperplane mask from a text file: one hyperplane per line as N+1
    field-element indices; ``#`` starts a comment."""
    mask = np.zeros(space.n_hyperplanes, dtype=bool)
    for lineno, raw in enumerate(fh, 1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            coords = [int(tok) for tok in text.split()]
        except ValueError as exc:
            raise FamilyFileError(f"line {lineno}: {exc}") from None
        if len(coords) != space.N + 1:
            raise FamilyFileError(f"line {lineno}: expected {space.N + 1} coordinates, got {len(coords)}")
        if any(not 0 <= c < space.q for c in coords):
            raise FamilyFileError(f"line {lineno}: coordinates must lie in [0, {space.q})")
        if not any(coords):
            raise FamilyFileError(f"line {lineno}: the zero vector is not a hyperplane")
        mask[space.index_of([coords])[0]] = True
    return mask


def write_family_file(fh: IO[str], space: ProjectiveSpace, mask: np.ndarray, comment: str = "") -> None:
    if comment:
        for line in comment.splitlines():
            fh.write(f"# {line}\n")
    for h in np.nonzero(mask)[0]:
        fh.write(" ".join(str(int(c)) for c in space.hyperplanes[h]) + "\n")
