"""Command-line front end.

Usage: ``hilbcount <command> [--config FILE] [--out DIR] [overrides]``.
The config is TOML with one table per concern; command-line flags override
it.  Every command writes ``summary.json`` plus its records as JSON lines.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import tomli
import tomli_w

from . import hilbert, malle, pointcount
from .errors import ConfigError, DeltaTooSmall, HilbcountError, InfeasibleData, SearchExhausted
from .modp import split_prime
from .numfield import NumberField
from .polyring import PolyParseError, parse_poly
from .specfrob import RegularModel, c2_model, s3_model

COMMANDS = ("count-points", "count-spec-points", "det-cover", "tau", "hilbert", "census", "grunwald", "fit")

# allowed keys per table, with the accepted python types
SCHEMA: dict[str, dict[str, tuple]] = {
    "field": {"def_poly": (list,), "precision_cap": (int,)},
    "model": {
        "preset": (str,), "polynomial": (str,), "group_order": (int,), "model_degree": (int,),
        "class_table": (list,), "branch_count": (int,), "genus": (int,), "name": (str,),
    },
    "run": {
        "seed": (int,), "workers": (int,), "prime_bound": (int,), "fingerprint_bound": (int,),
    },
    "frobenius": {"rows": (list,), "text": (str,)},
    "count-points": {"polynomial": (str,), "B": (int, float), "naive": (bool,)},
    "count-spec-points": {"polynomial": (str,), "B": (int, float)},
    "det-cover": {"polynomial": (str,), "B": (int, float), "D": (int,), "P_cap": (int,), "hensel_cap": (int,)},
    "tau": {"prime": (int,), "types": (list,)},
    "hilbert": {"B": (int, float), "jordan": (bool,)},
    "census": {"y": (int, float), "delta": (int, float)},
    "grunwald": {"max_solutions": (int,), "height_cap": (int,)},
    "fit": {"polynomial": (str,), "Bs": (list,), "mode": (str,)},
}


def _locate(text: str, table: str | None, key: str) -> tuple[int | None, int | None]:
    """Line and column (1-based) of ``key`` inside ``[table]`` (or the top level)."""
    current = None
    for n, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if s.startswith("[") and not s.startswith("[["):
            current = s.strip("[]").strip().strip('"')
            if table is None and current == key:
                return n, line.index("[") + 1
            continue
        if current == table:
            bare = s.split("=", 1)[0].strip().strip('"')
            if "=" in s and bare == key:
                return n, line.index(s.split("=", 1)[0].strip()) + 1
    return None, None


@dataclass
class RunConfig:
    """Parsed and validated configuration; ``to_toml`` and ``from_toml`` round-trip."""

    tables: dict[str, dict[str, Any]] = dc_field(default_factory=dict)

    @classmethod
    def from_toml(cls, text: str) -> "RunConfig":
        try:
            raw = tomli.loads(text)
        except tomli.TOMLDecodeError as exc:
            msg = str(exc)
            line = col = None
            if "(at line " in msg:
                tail = msg.rsplit("(at line ", 1)[1].rstrip(")")
                a, _, b = tail.partition(", column ")
                line, col = int(a), int(b)
                msg = msg.rsplit(" (at line", 1)[0]
            raise ConfigError(f"config syntax error: {msg}", line, col) from exc
        for table, body in raw.items():
            if table not in SCHEMA:
                raise ConfigError(f"unknown table [{table}]", *_locate(text, None, table))
            if not isinstance(body, dict):
                raise ConfigError(f"[{table}] must be a table", *_locate(text, None, table))
            for key, value in body.items():
                allowed = SCHEMA[table].get(key)
                if allowed is None:
                    raise ConfigError(f"unknown key '{key}' in [{table}]", *_locate(text, table, key))
                if isinstance(value, bool) and bool not in allowed:
                    raise ConfigError(f"'{key}' in [{table}] has the wrong type", *_locate(text, table, key))
                if not isinstance(value, allowed):
                    raise ConfigError(f"'{key}' in [{table}] has the wrong type", *_locate(text, table, key))
        return cls(raw)

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        return cls.from_toml(Path(path).read_text())

    def to_toml(self) -> str:
        return tomli_w.dumps(self.tables)

    def get(self, table: str, key: str, default=None):
        return self.tables.get(table, {}).get(key, default)

    def set(self, table: str, key: str, value) -> None:
        if value is not None:
            self.tables.setdefault(table, {})[key] = value

    # -- builders --------------------------------------------------------------------------

    def number_field(self) -> NumberField:
        return NumberField(self.get("field", "def_poly", [0, 1]), self.get("field", "precision_cap", 256))

    def model(self) -> RegularModel:
        K = self.number_field()
        preset = self.get("model", "preset")
        poly = self.get("model", "polynomial")
        if poly is None:
            preset = (preset or "C2").upper()
            if preset == "C2":
                return c2_model(K)
            if preset == "S3":
                return s3_model(K)
            raise ConfigError(f"unknown model preset '{preset}'", *_locate_cfg(self, "model", "preset"))
        need = ("group_order", "model_degree", "class_table", "branch_count", "genus")
        missing = [k for k in need if self.get("model", k) is None]
        if missing:
            raise ConfigError(f"[model] needs {', '.join(missing)} with a custom polynomial")
        return RegularModel(
            K, poly, self.get("model", "group_order"), self.get("model", "model_degree"),
            [tuple(r) for r in self.get("model", "class_table")], self.get("model", "branch_count"),
            self.get("model", "genus"), name=self.get("model", "name", ""),
        )

    def frobenius(self, K: NumberField) -> hilbert.FrobeniusData:
        if self.get("frobenius", "text"):
            return hilbert.FrobeniusData.parse(K, self.get("frobenius", "text"))
        rows = self.get("frobenius", "rows", [])
        return hilbert.FrobeniusData.from_rows(K, [(int(p), t) for p, t in rows])


def _locate_cfg(cfg: RunConfig, table: str, key: str):
    return _locate(cfg.to_toml(), table, key)


# -- output --------------------------------------------------------------------------------


class Output:
    def __init__(self, directory: str | Path):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)

    def jsonl(self, name: str, rows) -> None:
        with open(self.dir / name, "w") as fh:
            for row in rows:
                fh.write(json.dumps(row, sort_keys=True) + "\n")

    def summary(self, data: dict) -> None:
        (self.dir / "summary.json").write_text(json.dumps(data, sort_keys=True, indent=2) + "\n")

    def csv(self, header: Sequence[str], rows) -> None:
        with open(self.dir / "points.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)


def _coords(x) -> list[int]:
    return [int(c) for c in x.coords]


def _poly(cfg: RunConfig, table: str, K: NumberField, default: str):
    text = cfg.get(table, "polynomial", default)
    return text, parse_poly(text, K)


# -- commands ------------------------------------------------------------------------------


def cmd_count_points(cfg: RunConfig, out: Output) -> dict:
    K = cfg.number_field()
    text, F = _poly(cfg, "count-points", K, "X2^2 - X1^3")
    B = cfg.get("count-points", "B", 100)
    res = (pointcount.count_points_naive if cfg.get("count-points", "naive", False) else pointcount.count_points)(K, F, B)
    out.jsonl("points.jsonl", ({"x1": _coords(a), "x2": _coords(b)} for a, b in res.points))
    out.csv(["x1", "x2"], ([" ".join(map(str, _coords(a))), " ".join(map(str, _coords(b)))] for a, b in res.points))
    return {"polynomial": text, "B": B, "count": res.count, "boundary_included": len(res.boundary_included)}


def cmd_count_spec_points(cfg: RunConfig, out: Output) -> dict:
    K = cfg.number_field()
    text, F = _poly(cfg, "count-spec-points", K, "Y^2 - T")
    B = cfg.get("count-spec-points", "B", 100)
    res = pointcount.count_specialization_points(K, F, B)
    out.jsonl("points.jsonl", ({"t": _coords(t), "roots": [_coords(y) for y in ys]} for t, ys in res.hits))
    out.csv(["t", "roots"], ([" ".join(map(str, _coords(t))), len(ys)] for t, ys in res.hits))
    return {"polynomial": text, "B": B, "count": res.count, "roots_checked": res.roots_checked,
            "liouville_violations": len(res.liouville_violations)}


def cmd_det_cover(cfg: RunConfig, out: Output) -> dict:
    K = cfg.number_field()
    text, F = _poly(cfg, "det-cover", K, "X2^2 - X1^3")
    B = cfg.get("det-cover", "B", 100)
    rep = pointcount.detmethod_cover(
        K, F, B, D=cfg.get("det-cover", "D"), P_cap=cfg.get("det-cover", "P_cap"),
        hensel_cap=cfg.get("det-cover", "hensel_cap", pointcount.DEFAULT_HENSEL_CAP),
    )
    out.jsonl("cover.jsonl", (r.to_json() for r in rep.records))
    summary = rep.summary()
    summary.update(polynomial=text, B=B, aux_polys=[G.to_str() for G in rep.aux_polys])
    return summary


def cmd_tau(cfg: RunConfig, out: Output) -> dict:
    model = cfg.model()
    p = cfg.get("tau", "prime", 13)
    types = cfg.get("tau", "types") or sorted(str(c) for c in model.cycle_types)
    ideal = hilbert.default_ideal(model.field, p)
    res = hilbert.tau_cosets(model, ideal, types)
    out.jsonl("tau.jsonl", ({"residue": r if isinstance(r, int) else list(r)} for r in res.residues))
    return res.to_json()


def cmd_hilbert(cfg: RunConfig, out: Output) -> dict:
    model = cfg.model()
    data = cfg.frobenius(model.field)
    B = cfg.get("hilbert", "B", 1000)
    plan = hilbert.plan_hilbert(model, data, jordan=cfg.get("hilbert", "jordan", True))
    run = hilbert.HilbertRun(model, B, plan, cfg.get("run", "prime_bound", 200), cfg.get("run", "fingerprint_bound", 200))
    recs = sorted(run, key=lambda r: r.sort_key())
    out.jsonl("hilbert.jsonl", (r.to_json() for r in recs))
    return {"B": B, "model": model.name, "plan": plan.to_json(), "emitted": len(recs),
            "stats": dict(run.stats.__dict__)}


def cmd_census(cfg: RunConfig, out: Output) -> dict:
    model = cfg.model()
    data = cfg.frobenius(model.field)
    rep = malle.count_fields(
        model, cfg.get("census", "y", 10**4), cfg.get("census", "delta"), data,
        cfg.get("run", "prime_bound", 200), cfg.get("run", "fingerprint_bound", 200),
        cfg.get("run", "workers", 1),
    )
    out.jsonl("census.jsonl", (r.to_json() for r in rep.ordered_records()))
    out.csv(["y", "distinct"], rep.fit_points)
    summary = rep.summary()
    summary["model"] = model.name
    return summary


def cmd_grunwald(cfg: RunConfig, out: Output) -> dict:
    model = cfg.model()
    data = cfg.frobenius(model.field)
    res = malle.grunwald_search(
        model, data, cfg.get("grunwald", "max_solutions", 3), cfg.get("grunwald", "height_cap", 500),
        cfg.get("run", "prime_bound", 200), cfg.get("run", "fingerprint_bound", 200),
    )
    out.jsonl("grunwald.jsonl", (r.to_json() for r in res.solutions))
    return {"solutions": [_coords(r.t0) for r in res.solutions], "height_reached": res.height_reached,
            "below_p0": res.below_p0, "scanned": res.scanned, "prescriptions": data.to_rows()}


def cmd_fit(cfg: RunConfig, out: Output) -> dict:
    K = cfg.number_field()
    mode = cfg.get("fit", "mode", "points")
    text, F = _poly(cfg, "fit", K, "X2^2 - X1^3" if mode == "points" else "Y^2 - T")
    Bs = cfg.get("fit", "Bs", [100, 1000, 10000])
    counter = pointcount.count_points if mode == "points" else pointcount.count_specialization_points
    Ns = [counter(K, F, B).count for B in Bs]
    out.jsonl("fit.jsonl", ({"B": B, "N": N} for B, N in zip(Bs, Ns)))
    out.csv(["B", "N"], zip(Bs, Ns))
    slope = pointcount.fit_slope(Bs, Ns) if all(Ns) else None
    return {"polynomial": text, "mode": mode, "Bs": Bs, "Ns": Ns, "slope": slope,
            "reference_exponent": K.degree / F.d}


HANDLERS = {
    "count-points": cmd_count_points, "count-spec-points": cmd_count_spec_points,
    "det-cover": cmd_det_cover, "tau": cmd_tau, "hilbert": cmd_hilbert, "census": cmd_census,
    "grunwald": cmd_grunwald, "fit": cmd_fit,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hilbcount", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="TOML config file")
    ap.add_argument("--out", default=".", help="output directory (default: current)")
    ap.add_argument("--B", type=float, help="height bound")
    ap.add_argument("--y", type=float, help="discriminant norm budget")
    ap.add_argument("--delta", type=float)
    ap.add_argument("--D", type=int, help="auxiliary polynomial degree")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--workers", type=int)
    ap.add_argument("--prime-bound", type=int)
    ap.add_argument("--precision-cap", type=int)
    return ap


def _as_number(x: float | None):
    if x is None:
        return None
    return int(x) if float(x).is_integer() else x


def run(command: str, cfg: RunConfig, out_dir: str | Path = ".") -> int:
    """Execute one command; returns the process exit code."""
    seed = cfg.get("run", "seed", 0)
    random.seed(seed)
    np.random.seed(seed % 2**32)
    out = Output(out_dir)
    try:
        summary = HANDLERS[command](cfg, out)
    except (InfeasibleData, SearchExhausted) as exc:
        print(f"hilbcount: infeasible: {exc}", file=sys.stderr)
        return 2
    except (HilbcountError, PolyParseError, ValueError) as exc:
        print(f"hilbcount: error: {exc}", file=sys.stderr)
        return 1
    summary = {"command": command, "seed": seed, "result": summary}
    out.summary(summary)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.load(args.config) if args.config else RunConfig()
    except ConfigError as exc:
        print(f"hilbcount: config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"hilbcount: cannot read config: {exc}", file=sys.stderr)
        return 1
    table = args.command
    if args.B is not None:
        key = {"count-points": "count-points", "count-spec-points": "count-spec-points",
               "det-cover": "det-cover", "hilbert": "hilbert"}.get(table)
        if key:
            cfg.set(key, "B", _as_number(args.B))
        elif table == "grunwald":
            cfg.set("grunwald", "height_cap", int(args.B))
    cfg.set("census", "y", _as_number(args.y))
    cfg.set("census", "delta", _as_number(args.delta))
    cfg.set("det-cover", "D", args.D)
    cfg.set("run", "seed", args.seed)
    cfg.set("run", "workers", args.workers)
    cfg.set("run", "prime_bound", args.prime_bound)
    cfg.set("field", "precision_cap", args.precision_cap)
    return run(args.command, cfg, args.out)


if __name__ == "__main__":
    sys.exit(main())
