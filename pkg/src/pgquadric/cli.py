"""Command-line front end.

Exit codes: 0 when every verdict passes, 1 when some verdict fails,
2 on configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass

import numpy as np

from .constructions import (
    exhaustive_switch_search, hyperoval_regular, hyperoval_translation, solids_disjoint_from,
)
from .families import (
    BLACK, CounterexampleAlert, HyperplaneFamily, black_flat_values, check_condition_I,
    check_condition_II, codim2_black_spectrum, colour_points, family_from_classification,
    odd_q_spectrum, red_line_census, sampled_condition_II, section_tallies,
    theorem_conclusion_check, verify_counting_identities,
)
from .field import FieldError, field_make, prime_power
from .quadrics import (
    UnclassifiableSection, nucleus, point_set, size_parabolic, standard_parabolic,
)
from .report import FamilyFileError, Report, point_record, read_family_file
from .space import BITMAP_POINT_BOUND, ProjectiveSpace

log = logging.getLogger("pgquadric")

WORKERS_ENV = "PGQUADRIC_WORKERS"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    n: int
    p: int
    h: int
    sign: int
    emit_json: str | None
    emit_csv: str | None
    violation_cap: int
    workers: int
    memory_bound: int
    extra: dict

    @property
    def q(self) -> int:
        return self.p**self.h

    def echo(self) -> dict:
        return {"command": self.command, "n": self.n, "q": self.q, "p": self.p, "h": self.h,
                "sign": "+" if self.sign == 1 else "-", "violation_cap": self.violation_cap,
                **{k: v for k, v in sorted(self.extra.items()) if k != "emit_jsonl"}}


def _parse_q(text: str) -> tuple[int, int]:
    try:
        if "^" in text:
            p, h = (int(x) for x in text.split("^"))
            if h < 1:
                raise ValueError
            q = p**h
        else:
            q = int(text)
        return prime_power(q)
    except (ValueError, FieldError):
        raise argparse.ArgumentTypeError(f"{text!r} is not a prime power") from None


def _parse_sign(text: str) -> int:
    if text in ("+", "+1", "1", "plus", "hyperbolic"):
        return 1
    if text in ("-", "-1", "minus", "elliptic"):
        return -1
    raise argparse.ArgumentTypeError("sign must be + or -")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="half the projective dimension")
    common.add_argument("--q", type=_parse_q, default=(2, 1), help="field order, e.g. 4 or 2^2")
    common.add_argument("--sign", type=_parse_sign, default=1, help="+ (hyperbolic) or - (elliptic)")
    common.add_argument("--emit-json", metavar="PATH")
    common.add_argument("--emit-csv", metavar="PATH")
    common.add_argument("--violation-cap", type=int, default=100)
    common.add_argument("--workers", type=int, default=None,
                        help=f"worker threads (default ${WORKERS_ENV} or 1)")
    common.add_argument("--memory-bound", type=int, default=BITMAP_POINT_BOUND,
                        help="largest point count for which incidence bitmaps are built")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="pgquadric", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("census", parents=[common], help="classify hyperplanes and colour points")
    ct = sub.add_parser("check-theorem", parents=[common],
                        help="conditions (I)/(II) and the conclusion check on a family")
    src = ct.add_mutually_exclusive_group()
    src.add_argument("--family", metavar="FILE", help="family file (one hyperplane per line)")
    src.add_argument("--construct", choices=["quadric", "hyperoval"], default="quadric")
    ct.add_argument("--sample-flats", type=int, default=0,
                    help="check condition (II) on this many random flats instead of all")
    ho = sub.add_parser("hyperoval", parents=[common], help="solids disjoint from a hyperoval")
    ho.add_argument("--translation", type=int, metavar="K", default=None,
                    help="use the translation hyperoval t -> t^(2^K)")
    sub.add_parser("odd-spectrum", parents=[common], help="codimension-2 spectrum for odd q")
    sw = sub.add_parser("switch-search", parents=[common], help="exhaustive PG(4,2) switch search")
    sw.add_argument("--emit-jsonl", metavar="PATH", help="one JSON verdict per candidate")
    sub.add_parser("identities", parents=[common], help="double-counting identities")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    p, h = args.q
    workers = args.workers
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    extra = {k: getattr(args, k) for k in ("family", "construct", "sample_flats", "translation",
                                           "emit_jsonl") if getattr(args, k, None) is not None}
    cfg = RunConfig(args.command, args.n, p, h, args.sign, args.emit_json, args.emit_csv,
                    args.violation_cap, workers, args.memory_bound, extra)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    even = cfg.p == 2
    if cfg.workers < 1:
        raise ConfigError("--workers must be positive")
    if cfg.violation_cap < 0:
        raise ConfigError("--violation-cap must be non-negative")
    if cfg.command in ("census", "check-theorem", "identities", "hyperoval") and not even:
        raise ConfigError(f"{cfg.command} needs even q")
    if cfg.command == "odd-spectrum" and even:
        raise ConfigError("odd-spectrum needs odd q")
    if cfg.command in ("check-theorem", "identities", "census", "odd-spectrum") and cfg.n < 2:
        raise ConfigError("n must be at least 2")
    if cfg.command == "hyperoval":
        cfg.n = 2
        cfg.sign = -1
    if cfg.command == "switch-search" and (cfg.n, cfg.q) != (2, 2):
        raise ConfigError("switch-search runs in PG(4,2) only (--n 2 --q 2)")
    if cfg.command == "check-theorem" and cfg.extra.get("construct") == "hyperoval" \
            and "family" not in cfg.extra and (cfg.n, cfg.sign) != (2, -1):
        raise ConfigError("a hyperoval family needs --n 2 --sign -")


def _space(cfg: RunConfig) -> ProjectiveSpace:
    field = field_make(cfg.p, cfg.h)
    return ProjectiveSpace(2 * cfg.n, field, bitmap_bound=cfg.memory_bound, workers=cfg.workers)


def _quadric(cfg: RunConfig, space: ProjectiveSpace):
    form = standard_parabolic(cfg.n, space.field)
    return form, point_set(form, space)


def _colouring(report: Report, F: HyperplaneFamily, cfg: RunConfig):
    col = colour_points(F, cfg.n, cfg.sign, cap=cfg.violation_cap)
    cI = check_condition_I(col)
    report.results["colouring"] = {
        "family": F.label, "family_size": len(F), "values": col.values,
        "r": col.r, "w": col.w, "b": col.b, "h": col.h,
        "n_violations": col.n_violations, "violating_points": col.violations,
    }
    report.spectra["per_point"] = col.histogram
    report.verdict("condition_I", cI.passed)
    return col


def _condition_II(report: Report, F: HyperplaneFamily, cfg: RunConfig, samples: int = 0):
    if samples:
        cII, spec = sampled_condition_II(F, samples)
    else:
        cII, spec = check_condition_II(F, cap=cfg.violation_cap)
    report.results["condition_II"] = cII.details
    report.spectra["per_flat"] = spec.values
    report.verdict("condition_II", cII.passed)
    return cII


def _conclusion(report: Report, F: HyperplaneFamily, cfg: RunConfig) -> None:
    try:
        verdict = theorem_conclusion_check(F, cfg.n, cfg.sign)
    except CounterexampleAlert as alert:
        report.results["conclusion"] = {"branch": None, "counterexample_alert": alert.details}
        report.verdict("conclusion", False)
        return
    report.results["conclusion"] = verdict.details
    report.verdict("conclusion", verdict.passed)


def cmd_census(cfg: RunConfig, report: Report) -> None:
    with report.phase("build"):
        space = _space(cfg)
        form, Q = _quadric(cfg, space)
    with report.phase("classify"):
        H, T, M = family_from_classification(space, Q, cfg.n, cfg.sign)
    q, n = cfg.q, cfg.n
    expected = (q**n * (q**n + cfg.sign) // 2, size_parabolic(n, q), q**n * (q**n - cfg.sign) // 2)
    report.results["census"] = {
        "points": space.n_points, "quadric_points": int(Q.sum()),
        "nucleus": point_record(space, nucleus(form, space)),
        H.label: len(H), "T": len(T), M.label: len(M),
        "expected": {H.label: expected[0], "T": expected[1], M.label: expected[2]},
    }
    report.verdict("quadric_size", int(Q.sum()) == size_parabolic(n, q))
    report.verdict("family_sizes", (len(H), len(T), len(M)) == expected)
    with report.phase("colour"):
        col = _colouring(report, H, cfg)
    report.verdict("one_red_point", col.r == 1)
    report.verdict("black_is_quadric", bool(np.array_equal(col.mask(BLACK), Q)))
    report.results["section_tallies"] = section_tallies(col, H, T, M)


def cmd_identities(cfg: RunConfig, report: Report) -> None:
    with report.phase("build"):
        space = _space(cfg)
        _, Q = _quadric(cfg, space)
        H, _, _ = family_from_classification(space, Q, cfg.n, cfg.sign)
    with report.phase("identities"):
        col = _colouring(report, H, cfg)
        if col.n_violations == 0:
            ids = verify_counting_identities(col)
            report.results["identities"] = ids.details
            report.verdict("identities", ids.passed)


def cmd_check_theorem(cfg: RunConfig, report: Report) -> None:
    with report.phase("build"):
        space = _space(cfg)
        if "family" in cfg.extra:
            try:
                with open(cfg.extra["family"]) as fh:
                    mask = read_family_file(fh, space)
            except OSError as exc:
                raise ConfigError(str(exc)) from None
            F = HyperplaneFamily(space, mask, "file")
        elif cfg.extra.get("construct") == "hyperoval":
            F = solids_disjoint_from(hyperoval_regular(space.field), space)
        else:
            _, Q = _quadric(cfg, space)
            F = family_from_classification(space, Q, cfg.n, cfg.sign)[0]
    if not len(F):
        raise ConfigError("the family is empty")
    with report.phase("condition_I"):
        col = _colouring(report, F, cfg)
    with report.phase("condition_II"):
        cII = _condition_II(report, F, cfg, cfg.extra.get("sample_flats", 0))
    if col.n_violations == 0:
        with report.phase("identities"):
            ids = verify_counting_identities(col)
            report.results["identities"] = ids.details
            report.verdict("identities", ids.passed)
        if col.b == size_parabolic(cfg.n, cfg.q) and cII.passed and not cfg.extra.get("sample_flats"):
            with report.phase("black_flats"):
                spec = codim2_black_spectrum(space, col.mask(BLACK))
            report.spectra["black_per_flat"] = spec.values
            report.verdict("black_flat_values", spec.support() <= black_flat_values(cfg.n, cfg.q))
        if cII.passed and not cfg.extra.get("sample_flats"):
            with report.phase("conclusion"):
                _conclusion(report, F, cfg)


def cmd_hyperoval(cfg: RunConfig, report: Report) -> None:
    with report.phase("build"):
        space = _space(cfg)
        k = cfg.extra.get("translation")
        try:
            oval = hyperoval_regular(space.field) if k is None else hyperoval_translation(space.field, k)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        F = solids_disjoint_from(oval, space)
    q = cfg.q
    report.results["hyperoval"] = {
        "kind": oval.kind, "points": [point_record(space, i) for i in oval.embedded(space)],
        "family_size": len(F), "expected_family_size": q * q * (q * q - q) // 2,
    }
    report.verdict("family_size", len(F) == q * q * (q * q - q) // 2)
    with report.phase("condition_I"):
        col = _colouring(report, F, cfg)
    report.verdict("census", (col.r, col.w, col.b) == (q + 2, q * q - 1, q**4 + q**3))
    with report.phase("condition_II"):
        cII = _condition_II(report, F, cfg)
    with report.phase("line_census"):
        lines = red_line_census(col)
        report.results["line_census"] = lines.details
        report.verdict("line_census", lines.passed)
    if col.n_violations == 0:
        ids = verify_counting_identities(col)
        report.results["identities"] = ids.details
        report.verdict("identities", ids.passed)
        if cII.passed:
            with report.phase("conclusion"):
                _conclusion(report, F, cfg)


def cmd_odd_spectrum(cfg: RunConfig, report: Report) -> None:
    with report.phase("build"):
        space = _space(cfg)
        _, Q = _quadric(cfg, space)
    with report.phase("spectrum"):
        res = odd_q_spectrum(space, Q, cfg.n, cfg.sign)
    report.results["odd_spectrum"] = res.verdict.details
    report.spectra["per_flat"] = res.spectrum.values
    report.verdict("odd_spectrum", res.verdict.passed)


def cmd_switch_search(cfg: RunConfig, report: Report) -> None:
    with report.phase("build"):
        space = _space(cfg)
    with report.phase("search"):
        res = exhaustive_switch_search(space)
    report.results["switch_search"] = res.summary()
    report.results["switch_search"]["passing_masks"] = res.passing
    report.verdict("candidates", res.candidates == 2**15)
    report.verdict("standard_passes", res.standard_passes)
    path = cfg.extra.get("emit_jsonl")
    if path:
        with open(path, "w") as fh:
            res.write_jsonl(fh)


COMMANDS = {
    "census": cmd_census,
    "check-theorem": cmd_check_theorem,
    "hyperoval": cmd_hyperoval,
    "odd-spectrum": cmd_odd_spectrum,
    "switch-search": cmd_switch_search,
    "identities": cmd_identities,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
        report = Report(cfg.command, cfg.echo())
        report.gf = field_make(cfg.p, cfg.h)
        COMMANDS[cfg.command](cfg, report)
    except (ConfigError, FieldError, FamilyFileError, MemoryError) as exc:
        print(f"pgquadric: error: {exc}", file=sys.stderr)
        return 2
    except UnclassifiableSection as exc:
        print(f"pgquadric: {exc}", file=sys.stderr)
        return 1
    if cfg.emit_json:
        report.write_json(cfg.emit_json)
    if cfg.emit_csv:
        report.write_csv(cfg.emit_csv)
    if not cfg.emit_json:
        sys.stdout.write(report.to_json())
    else:
        status = "PASS" if report.passed else "FAIL"
        print(f"{cfg.command}: {status} " + " ".join(
            f"{k}={'-' if v is None else ('ok' if v else 'FAIL')}" for k, v in report.verdicts.items()))
    log.info("timings: %s", report.timings)
    return 0 if report.passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
