"""Command-line interface: ``ngrings <command> [options]``.

Exit status is 0 on success, 2 when some verdict is Unknown and 1 on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import cone_rules as cr
from .demazure import (
    GORENSTEIN,
    NOT_NG,
    UNKNOWN,
    DemazurePair,
    NGVerdict,
    invariants,
    necessary_ng,
    ng_decide,
    veronese,
)
from .divisors import (
    CurveMismatch,
    ProjectiveLine,
    SchemaError,
    divisor_from_json,
    fraction_str,
    normalize,
)
from .hypersurface import ring_from_json, veronese_ng
from .resolution import (
    NotNegativeDefinite,
    PreconditionError,
    ResolutionGraph,
    Unsupported,
    abs_det,
    blow_down,
    cycle_pa,
    fundamental_cycle,
    is_negative_definite,
    mowy_ng,
    star_graph,
)
from .tables import TABLES

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    cap: int | None = None
    fmt: str = "table"
    start: int = 1
    stop: int = 30
    table: str | None = None
    action: str | None = None

    def __post_init__(self):
        if self.cap is not None and self.cap <= 0:
            raise SchemaError("--cap must be positive")
        if self.fmt not in ("table", "json"):
            raise SchemaError("--format must be 'table' or 'json'")
        if self.start < 1 or self.stop < self.start:
            raise SchemaError("need 1 <= --from <= --to")


def _load(path):
    if path is None:
        raise SchemaError("this command needs --input <path>")
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from None


def _pair(obj):
    curve, D = divisor_from_json(obj)
    return DemazurePair(curve, D)


def _jsonable(x):
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _render_table(cols, rows):
    cells = [[str(_jsonable(r.get(c, ""))) for c in cols] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines)


def _render_kv(obj, indent=0):
    pad = " " * indent
    out = []
    for k, v in obj.items():
        if isinstance(v, dict):
            out.append(f"{pad}{k}:")
            out.append(_render_kv(v, indent + 2))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            out.append(f"{pad}{k}:")
            for item in v:
                out.append(f"{pad}  - " + ", ".join(f"{a}={_jsonable(b)}" for a, b in item.items()))
        else:
            out.append(f"{pad}{k}: {_jsonable(v)}")
    return "\n".join(out)


def _symbolic_ng(pair) -> NGVerdict:
    """Verdict for curves where multiplication maps are not available."""
    nec = necessary_ng(pair)
    if nec.status == "pass" and nec.reason == "Gorenstein":
        return NGVerdict(GORENSTEIN).cite("gorenstein: K_C + Frc(D) ~ aD")
    if nec.status == "fail":
        return NGVerdict(NOT_NG).cite("necessary condition fails", reason=nec.reason)
    return NGVerdict(UNKNOWN).cite(
        "trace ideal not computable on this curve model",
        necessary=nec.status, reason=nec.reason)


def _ng_for(pair, cap):
    if isinstance(pair.curve, ProjectiveLine):
        return ng_decide(pair, cap)
    return _symbolic_ng(pair)


def cmd_analyze(cfg):
    pair = _pair(_load(cfg.input))
    prof = invariants(pair).to_json()
    ng = _ng_for(pair, cfg.cap)
    prof["ng"] = ng.to_json()
    unknown = ng.verdict == UNKNOWN or "unknown" in prof
    return prof, unknown


def cmd_ng(cfg):
    obj = _load(cfg.input)
    if isinstance(obj, dict) and ("preset" in obj or "custom" in obj):
        ring = ring_from_json(obj)
        d = int(obj.get("d", 1))
        v = veronese_ng(ring, d, cfg.cap)
    else:
        v = _ng_for(_pair(obj), cfg.cap)
    return v.to_json(), v.verdict == UNKNOWN


def cmd_resolve(cfg):
    obj = _load(cfg.input)
    if isinstance(obj, dict) and "vertices" in obj:
        graph = ResolutionGraph.from_json(obj)
    else:
        pair = _pair(obj)
        graph = star_graph(normalize(pair.D), pair.curve.genus)
    out = {"graph": graph.to_json(), "negative_definite": is_negative_definite(graph)}
    if out["negative_definite"]:
        Z = fundamental_cycle(graph)
        out["fundamental_cycle"] = Z.to_json()
        out["p_a"] = cycle_pa(graph, Z)
        out["abs_det"] = abs_det(graph)
        minimal = blow_down(graph)
        out["minimal_graph"] = minimal.to_json()
        if minimal.vertices:
            Zm = fundamental_cycle(minimal)
            out["minimal_fundamental_cycle"] = Zm.to_json()
            pa = cycle_pa(minimal, Zm)
        else:
            pa = 0
        out["nearly_gorenstein"] = mowy_ng(minimal) if pa == 0 else None
    return out, False


def cmd_scan(cfg):
    obj = _load(cfg.input)
    rows = []
    if isinstance(obj, dict) and ("preset" in obj or "custom" in obj):
        ring = ring_from_json(obj)
        for d in range(cfg.start, cfg.stop + 1):
            rows.append({"d": d, "verdict": veronese_ng(ring, d, cfg.cap).verdict})
    else:
        pair = _pair(obj)
        for d in range(cfg.start, cfg.stop + 1):
            rows.append({"d": d, "verdict": _ng_for(veronese(pair, d), cfg.cap).verdict})
    unknown = any(r["verdict"] == UNKNOWN for r in rows)
    return {"columns": ["d", "verdict"], "rows": rows}, unknown


def cmd_cone(cfg):
    inp = cr.SymbolicConeInput.from_json(_load(cfg.input))
    action = cfg.action or "classify"
    if action == "classify":
        v = cr.classify_cone(inp)
        return v.to_json(), v.verdict == UNKNOWN
    if action == "ag":
        v = cr.almost_gorenstein_g2(inp)
        return v.to_json(), v.verdict == UNKNOWN
    rep = cr.compare_ng_ag_g2(inp)
    return rep.to_json(), rep.category == UNKNOWN


def cmd_reproduce(cfg):
    cols, rows, summary = TABLES[cfg.table](cfg.cap)
    unknown = any(UNKNOWN in map(str, r.values()) for r in rows)
    return {"table": cfg.table, "columns": cols, "rows": rows, "summary": summary}, unknown


COMMANDS = {
    "analyze": cmd_analyze,
    "ng": cmd_ng,
    "resolve": cmd_resolve,
    "veronese-scan": cmd_scan,
    "cone": cmd_cone,
    "reproduce": cmd_reproduce,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON input file")
    common.add_argument("--cap", type=int, help="degree cap for the decision procedures")
    common.add_argument("--format", dest="fmt", choices=["table", "json"], default="table")

    p = argparse.ArgumentParser(prog="ngrings", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="invariants, singularity type and verdict")
    sub.add_parser("ng", parents=[common], help="nearly Gorenstein verdict with evidence")
    sub.add_parser("resolve", parents=[common], help="star-shaped resolution graph")
    scan = sub.add_parser("veronese-scan", parents=[common], help="verdict for each Veronese degree")
    scan.add_argument("--from", dest="start", type=int, default=1)
    scan.add_argument("--to", dest="stop", type=int, default=30)
    cone = sub.add_parser("cone", parents=[common], help="rule engine for cone singularities")
    cone.add_argument("action", choices=["classify", "ag", "compare"])
    rep = sub.add_parser("reproduce", parents=[common], help="regenerate a named table")
    rep.add_argument("table", choices=sorted(TABLES))
    return p


def _emit(result, cfg, out):
    if cfg.fmt == "json":
        out.write(json.dumps(_jsonable(result), indent=2, sort_keys=False) + "\n")
        return
    if "rows" in result:
        out.write(_render_table(result["columns"], result["rows"]) + "\n")
        for k, v in result.get("summary", {}).items():
            shown = "{" + ", ".join(map(str, v)) + "}" if isinstance(v, list) else v
            out.write(f"{k}: {shown}\n")
        return
    out.write(_render_kv(result) + "\n")


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        result, unknown = COMMANDS[cfg.command](cfg)
    except (SchemaError, CurveMismatch) as exc:
        err.write(f"error: invalid input: {exc}\n")
        return EXIT_ERROR
    except cr.ConeInputError as exc:
        err.write(f"error: inconsistent flags: {exc}\n")
        return EXIT_ERROR
    except (NotNegativeDefinite, Unsupported, PreconditionError) as exc:
        err.write(f"error: resolution: {exc}\n")
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR
    _emit(result, cfg, out)
    return EXIT_UNKNOWN if unknown else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(command=args.command, input=args.input, cap=args.cap, fmt=args.fmt,
                        start=getattr(args, "start", 1), stop=getattr(args, "stop", 30),
                        table=getattr(args, "table", None), action=getattr(args, "action", None))
    except SchemaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
