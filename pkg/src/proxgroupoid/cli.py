"""Command-line entry point: ``proxgroupoid {analyze,classify,axioms}``.

Exit codes: 0 success or matched, 1 unmatched or axiom failure, 2 usage or
input error.  JSON output is deterministic for identical inputs and flags.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import asdict, dataclass, field

from . import __version__
from .errors import ProximityError
from .feature import ProbeSet
from .groupoid import OPS, get_op, make_groupoid
from .ingest import TileSpec, image_space, load_image, region_summary, tile
from .pattern import DEFAULT_THRESHOLD, classify, patterns_for
from .proximity import (
    DESCRIPTIVE_METRICS,
    SPATIAL_METRICS,
    descriptively_near,
    merge_reports,
    near,
    random_space,
    validate_axioms,
)

SCHEMA_VERSION = 1

ANALYZE_CSV = ["tile", "row", "col", "height", "width", "carrier_size", "total", "regular_count", "pattern_size"]
CLASSIFY_CSV = [
    "reference", "candidate", "matched", "matched_count", "total", "fraction", "threshold",
    "salient", "candidate_tile", "reference_tile",
]
AXIOMS_CSV = ["system", "axiom", "verdict", "checked", "space", "witness_a", "witness_b", "witness_c"]


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    tile: str = "32x32"
    stride: str | None = None
    precision: int = 2
    op: str = "min"
    tolerance: float = 0.0
    threshold: float = DEFAULT_THRESHOLD
    format: str = "json"
    output: str | None = None
    seed: int = 0
    size: int | None = None
    spaces: int = 200
    large_spaces: int = 5
    budget: int = 1000
    exhaustive: bool = False
    break_symmetry: bool = False

    def validate(self) -> None:
        if not 0 <= self.precision <= 6:
            raise ValueError("--precision must lie in 0..6")
        if self.tolerance < 0:
            raise ValueError("--tolerance must be >= 0")
        if not 0 <= self.threshold <= 1:
            raise ValueError("--threshold must lie in [0, 1]")
        if self.size is not None and not 1 <= self.size <= 20:
            raise ValueError("--size must lie in 1..20")
        if self.exhaustive and self.size is not None and self.size > 10:
            raise ValueError("--exhaustive needs --size <= 10")

    def tile_spec(self) -> TileSpec:
        return TileSpec.parse(self.tile, self.stride)


def _image_groupoids(path: str, config: RunConfig):
    image = load_image(path)
    space = image_space(image, ProbeSet.intensity(config.precision))
    tiles = tile(image, config.tile_spec(), space)
    op = get_op(config.op)
    return image, tiles, [make_groupoid(t, op=op) for t in tiles]


def _header(config: RunConfig) -> dict:
    cfg = asdict(config)
    cfg.pop("output")
    return {"schema_version": SCHEMA_VERSION, "tool_version": __version__, "command": config.command, "config": cfg}


# -- analyze ------------------------------------------------------------------------


def cmd_analyze(config: RunConfig) -> dict:
    """Tile one image, build a groupoid per tile and every tile-generated pattern."""
    if len(config.inputs) != 1:
        raise ValueError("analyze takes exactly one image")
    image, tiles, groupoids = _image_groupoids(config.inputs[0], config)
    patterns = patterns_for(groupoids, config.tolerance)

    tile_rows = []
    for t, g, p in zip(tiles, groupoids, patterns):
        row = region_summary(t)
        row.update(g.summary())
        row["regular"] = row["regular_count"] == row["carrier_size"]
        row["pattern_size"] = len(p)
        tile_rows.append(row)

    distinct: dict[frozenset, dict] = {}
    for t, p in zip(tiles, patterns):
        members = [m.source.index for m in p]
        entry = distinct.setdefault(frozenset(members), {"members": members, "generators": []})
        entry["generators"].append(t.index)
    pattern_rows = [dict(e, size=len(e["members"])) for e in distinct.values()]

    report = _header(config)
    report.update(
        image={"name": image.name, "width": image.width, "height": image.height},
        tiles=tile_rows,
        patterns=pattern_rows,
    )
    return report


def _analyze_csv(report: dict) -> list[list]:
    rows = [ANALYZE_CSV]
    for t in report["tiles"]:
        rows.append([
            t["index"], t["origin"][0], t["origin"][1], t["dims"][0], t["dims"][1],
            t["carrier_size"], t["total"], t["regular_count"], t["pattern_size"],
        ])
    return rows


# -- classify ----------------------------------------------------------------------


def _pattern_ref(p) -> dict:
    g = p.generator.source
    return {"generator": g.index, "origin": list(g.origin), "members": [m.source.index for m in p]}


def cmd_classify(config: RunConfig) -> tuple[dict, int]:
    """Classify the second image against the first; returns (report, exit code)."""
    if len(config.inputs) != 2:
        raise ValueError("classify takes a reference image and a candidate image")
    ref_path, cand_path = config.inputs
    ref_img, _, ref_groupoids = _image_groupoids(ref_path, config)
    cand_img, _, cand_groupoids = _image_groupoids(cand_path, config)
    verdict = classify(
        patterns_for(cand_groupoids, config.tolerance),
        patterns_for(ref_groupoids, config.tolerance),
        config.threshold,
        config.tolerance,
        image_id=cand_img.name,
        reference_id=ref_img.name,
    )
    report = _header(config)
    report.update(
        reference=ref_img.name,
        candidate=cand_img.name,
        matched=verdict.matched,
        matched_reference=verdict.reference_id,
        score=verdict.score.to_dict() if verdict.score else None,
        witness=None
        if verdict.witness is None
        else {"candidate": _pattern_ref(verdict.witness[0]), "reference": _pattern_ref(verdict.witness[1])},
    )
    return report, 0 if verdict.matched else 1


def _classify_csv(report: dict) -> list[list]:
    s = report["score"] or {}
    w = report["witness"] or {}
    return [CLASSIFY_CSV, [
        report["reference"], report["candidate"], report["matched"],
        s.get("matched", ""), s.get("total", ""), s.get("fraction", ""), report["config"]["threshold"],
        s.get("salient", ""),
        w.get("candidate", {}).get("generator", ""), w.get("reference", {}).get("generator", ""),
    ]]


# -- axioms ------------------------------------------------------------------------

def _broken(base):
    def rel(A, B):
        return base(A, B) and len(A) <= len(B)

    return rel


def run_axioms(config: RunConfig) -> tuple[list[dict], int]:
    rng = random.Random(config.seed)

    def jobs_for(metrics, distinct):
        jobs = []
        for _ in range(config.spaces):
            n = config.size or rng.randint(1, 6)
            space = random_space(rng, n, config.precision, metrics, distinct)
            jobs.append((space, config.exhaustive or n <= 6))
        if config.size is None:
            for _ in range(config.large_spaces):
                space = random_space(rng, rng.randint(7, 20), config.precision, metrics, distinct)
                jobs.append((space, False))
        return jobs

    plan = {
        "spatial": jobs_for(SPATIAL_METRICS, False),
        "descriptive": jobs_for(DESCRIPTIVE_METRICS, True),
    }
    results = []
    for system in ("spatial", "descriptive"):
        base = near if system == "spatial" else descriptively_near
        relation = _broken(base) if config.break_symmetry else None
        merged, first_bad = None, {}
        for k, (space, exhaustive) in enumerate(plan[system]):
            run = validate_axioms(
                space, system, config.budget,
                relation=relation, exhaustive=exhaustive, seed=rng.randrange(2**32),
            )
            for r in run:
                if not r.passed and r.axiom not in first_bad:
                    first_bad[r.axiom] = k
            merged = run if merged is None else merge_reports(merged, run)
        for r in merged:
            d = r.to_dict()
            d["system"] = system
            d["space"] = first_bad.get(r.axiom)
            results.append(d)
    return results, len(plan["spatial"])


def cmd_axioms(config: RunConfig) -> tuple[dict, int]:
    results, count = run_axioms(config)
    passed = sum(r["verdict"] == "pass" for r in results)
    report = _header(config)
    report.update(spaces=count, results=results, passed=passed, total=len(results))
    return report, 0 if passed == len(results) else 1


def _axioms_csv(report: dict) -> list[list]:
    rows = [AXIOMS_CSV]
    for r in report["results"]:
        w = r["witness"] or {}
        rows.append([
            r["system"], r["axiom"], r["verdict"], r["checked"],
            "" if r["space"] is None else r["space"],
            *(" ".join(map(str, w.get(k, []))) for k in "ABC"),
        ])
    return rows


# -- plumbing ----------------------------------------------------------------------


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    rows = {"analyze": _analyze_csv, "classify": _classify_csv, "axioms": _axioms_csv}[report["command"]](report)
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="proxgroupoid", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--precision", type=int, default=2, help="decimal places kept by quantization (0-6)")

    imaging = argparse.ArgumentParser(add_help=False)
    imaging.add_argument("--tile", default="32x32", help="tile size WxH")
    imaging.add_argument("--stride", help="stride SXxSY (default: tile size)")
    imaging.add_argument("--op", choices=sorted(OPS), default="min")
    imaging.add_argument("--tolerance", type=float, default=0.0)

    p = sub.add_parser("analyze", parents=[common, imaging], help="groupoids and patterns of one image")
    p.add_argument("inputs", nargs=1, metavar="IMAGE")

    p = sub.add_parser("classify", parents=[common, imaging], help="classify CANDIDATE against REFERENCE")
    p.add_argument("inputs", nargs=2, metavar="IMAGE", help="REFERENCE CANDIDATE")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)

    p = sub.add_parser("axioms", parents=[common], help="check the proximity axioms on random spaces")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, help="fixed number of points per space")
    p.add_argument("--spaces", type=int, default=200)
    p.add_argument("--large-spaces", type=int, default=5, help="extra sampled spaces with 7-20 points")
    p.add_argument("--budget", type=int, default=1000, help="sampled triples per large space")
    p.add_argument("--exhaustive", action="store_true", help="enumerate all subset triples")
    p.add_argument("--break-symmetry", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(**{k: v for k, v in vars(args).items() if v is not None or k == "stride"})
    try:
        config.validate()
        if config.command == "analyze":
            report, code = cmd_analyze(config), 0
        elif config.command == "classify":
            report, code = cmd_classify(config)
        else:
            report, code = cmd_axioms(config)
    except (ProximityError, ValueError) as exc:
        print(f"proxgroupoid: error: {exc}", file=sys.stderr)
        return 2
    text = render(report, config.format)
    if config.output:
        try:
            with open(config.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"proxgroupoid: error: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
