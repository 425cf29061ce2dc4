"""Command-line harness: spec files, graph inputs, caching, reports.

Every report is a JSON envelope ``{"payload": ..., "telemetry": ...}``.
Payloads are deterministic functions of the inputs and budgets;
telemetry (timing, state counts, cache status) is free to vary and is
excluded from any byte-comparison. Exit codes: 0 success, 1 validation
mismatch, 2 input error, 3 resource-budget exhaustion.
"""

from __future__ import annotations

import argparse
import hashlib
import importlib.resources
import json
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .errors import BudgetError, ConfigurationError, DomainError, GraphFormatError
from .games import DEFAULT_MAX_STATES, cops_robber_wins, spoiler_wins
from .graphs import Graph, canonical_form, emit_graph6, hom_count, parse_graph6, parse_graph_json
from .power import (
    check_monotonicity,
    compare_to_treewidth,
    enumerate_power,
    validate_hom_closedness,
    validate_soundness,
    validate_theorem2,
    write_power_csv,
)
from .refinement import GfwlSpec, distinguish

PRESET_NAMES = ("fwl_k", "local_fwl_k", "drfwl2_delta", "fwl_plus_k_t")


def preset_path(name: str) -> Path:
    """Filesystem path of a shipped spec preset."""
    if name not in PRESET_NAMES:
        raise ConfigurationError(f"unknown preset {name!r}; choices: {', '.join(PRESET_NAMES)}")
    return Path(str(importlib.resources.files("wlpower") / "presets" / f"{name}.json"))


@dataclass
class RunConfig:
    """One resolved invocation: command, inputs, budgets, channels."""

    command: str
    spec_path: str | None = None
    graph_inputs: list[str] = field(default_factory=list)
    max_states: int = DEFAULT_MAX_STATES
    max_nodes: int | None = None
    time_limit_ms: int | None = None
    output: str | None = None
    csv_path: str | None = None
    cache_dir: str | None = None
    suite: str | None = None
    k: int | None = None
    max_patterns: int | None = None
    spec_small_path: str | None = None
    spec_large_path: str | None = None

    def validate(self) -> None:
        for name in ("max_states", "max_nodes", "time_limit_ms", "max_patterns"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ConfigurationError(f"budget {name} must be strictly positive, got {value}")


# ---------------------------------------------------------------------------
# Input loading


def load_spec(value: str) -> GfwlSpec:
    """Load a spec from a JSON file path or a shipped preset name."""
    path = Path(value)
    if not path.exists() and value in PRESET_NAMES:
        path = preset_path(value)
    if not path.exists():
        raise ConfigurationError(f"spec file not found: {value}")
    try:
        obj = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"{path}: unreadable spec file: {exc}") from exc
    if not isinstance(obj, dict):
        raise ConfigurationError(f"{path}: spec file must hold a JSON object")
    return GfwlSpec.from_json_dict(obj)


def load_graph(value: str) -> Graph:
    """Load a graph from a .g6 file (first line), a .json edge-list
    file, or an inline graph6 string."""
    path = Path(value)
    if path.exists():
        try:
            text = path.read_text()
        except OSError as exc:
            raise GraphFormatError(f"{value}: unreadable file: {exc}") from exc
        if path.suffix == ".json":
            try:
                return parse_graph_json(text)
            except GraphFormatError as exc:
                raise GraphFormatError(f"{value}: {exc}") from exc
        for lineno, line in enumerate(text.splitlines(), start=1):
            if line.strip():
                try:
                    return parse_graph6(line.strip())
                except GraphFormatError as exc:
                    raise GraphFormatError(f"{value}:{lineno}: {exc}") from exc
        raise GraphFormatError(f"{value}: no graph line found")
    if value.endswith((".g6", ".json")) or os.sep in value:
        raise GraphFormatError(f"graph file not found: {value}")
    return parse_graph6(value)


# ---------------------------------------------------------------------------
# Cache


def _graph_digest(g: Graph) -> str:
    try:
        return canonical_form(g).decode("ascii")
    except BudgetError:
        return "raw:" + emit_graph6(g)  # beyond canonicalization budget


def cache_key(op: str, spec: GfwlSpec | None, graphs: list[Graph], params: dict) -> str:
    material = json.dumps(
        {
            "tool": __version__,
            "op": op,
            "spec": spec.to_json_dict() if spec is not None else None,
            "graphs": [_graph_digest(g) for g in graphs],
            "params": params,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(material.encode()).hexdigest()


def cache_lookup(cache_dir: str, key: str) -> dict | None:
    path = Path(cache_dir) / f"{key}.json"
    if not path.exists():
        return None
    try:
        record = json.loads(path.read_text())
        if record["version"] != __version__:
            return None
        return record["payload"]
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"warning: ignoring corrupt cache entry {path}: {exc}", file=sys.stderr)
        return None


def cache_store(cache_dir: str, key: str, payload: dict) -> None:
    directory = Path(cache_dir)
    directory.mkdir(parents=True, exist_ok=True)
    record = json.dumps({"version": __version__, "payload": payload}, sort_keys=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(record)
        os.replace(tmp, directory / f"{key}.json")
    except OSError:
        os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# Command execution


def _deadline_check(config: RunConfig, start: float):
    if config.time_limit_ms is None:
        return None

    def check() -> None:
        elapsed_ms = (time.perf_counter() - start) * 1000
        if elapsed_ms > config.time_limit_ms:
            raise BudgetError(
                "time limit exceeded", stats={"elapsed_ms": int(elapsed_ms)}
            )

    return check


def _compute_payload(config: RunConfig, start: float) -> tuple[dict, dict]:
    """Returns (payload, extra_telemetry) for the configured command."""
    command = config.command
    time_check = _deadline_check(config, start)
    if command == "distinguish":
        spec = load_spec(config.spec_path)
        g, h = (load_graph(v) for v in config.graph_inputs)
        payload = {
            "command": command,
            "spec": spec.to_json_dict(),
            "g": emit_graph6(g),
            "h": emit_graph6(h),
            "distinguished": distinguish(spec, g, h),
        }
        return payload, {}
    if command == "cops":
        spec = load_spec(config.spec_path)
        g = load_graph(config.graph_inputs[0])
        verdict = cops_robber_wins(spec, g, max_states=config.max_states, want_certificate=False)
        payload = {
            "command": command,
            "spec": spec.to_json_dict(),
            "graph": emit_graph6(g),
            "winner": verdict.winner,
        }
        return payload, {"states_explored": verdict.states_explored}
    if command == "ef":
        spec = load_spec(config.spec_path)
        g, h = (load_graph(v) for v in config.graph_inputs)
        verdict = spoiler_wins(spec, g, h, max_states=config.max_states, want_certificate=False)
        payload = {
            "command": command,
            "spec": spec.to_json_dict(),
            "g": emit_graph6(g),
            "h": emit_graph6(h),
            "winner": verdict.winner,
        }
        return payload, {"states_explored": verdict.states_explored}
    if command == "hom":
        pattern, target = (load_graph(v) for v in config.graph_inputs)
        payload = {
            "command": command,
            "pattern": emit_graph6(pattern),
            "target": emit_graph6(target),
            "count": hom_count(pattern, target),
        }
        return payload, {}
    if command == "power":
        spec = load_spec(config.spec_path)
        report = enumerate_power(
            spec, config.max_nodes, max_states=config.max_states, time_check=time_check
        )
        if config.csv_path:
            with open(config.csv_path, "w", newline="") as handle:
                write_power_csv(report, handle)
        payload = {"command": command, **report.payload_dict()}
        return payload, {"per_graph": report.per_graph_stats}
    if command == "validate":
        report = _run_suite(config, time_check)
        payload = {"command": command, **report.to_json_dict()}
        return payload, {}
    raise ConfigurationError(f"unknown command {command!r}")


def _run_suite(config: RunConfig, time_check):
    suite = config.suite
    if suite == "treewidth":
        return compare_to_treewidth(config.k, config.max_nodes, max_states=config.max_states)
    if suite == "theorem2":
        spec = load_spec(config.spec_path)
        return validate_theorem2(
            spec, config.max_nodes, max_states=config.max_states, time_check=time_check
        )
    if suite == "soundness":
        spec = load_spec(config.spec_path)
        return validate_soundness(
            spec,
            config.max_nodes,
            config.max_patterns,
            max_states=config.max_states,
            time_check=time_check,
        )
    if suite == "monotonicity":
        small = load_spec(config.spec_small_path)
        large = load_spec(config.spec_large_path)
        return check_monotonicity(
            small, large, config.max_nodes, max_states=config.max_states, time_check=time_check
        )
    if suite == "hom_closed":
        spec = load_spec(config.spec_path)
        return validate_hom_closedness(spec, config.max_nodes)
    raise ConfigurationError(f"unknown validation suite {suite!r}")


_CACHED_COMMANDS = ("distinguish", "cops", "ef", "hom", "power")


def _cache_key_for(config: RunConfig) -> str | None:
    if config.command not in _CACHED_COMMANDS:
        return None
    spec = load_spec(config.spec_path) if config.spec_path else None
    graphs = [load_graph(v) for v in config.graph_inputs]
    params: dict = {}
    if config.command in ("cops", "ef", "power"):
        params["max_states"] = config.max_states
    if config.command == "power":
        params["max_nodes"] = config.max_nodes
    return cache_key(config.command, spec, graphs, params)


def _emit(config: RunConfig, envelope: dict) -> None:
    text = json.dumps(envelope, indent=2, sort_keys=True) + "\n"
    if config.output:
        Path(config.output).write_text(text)
    else:
        sys.stdout.write(text)


def run(config: RunConfig) -> int:
    """Execute one command; emits the report and returns the exit code."""
    start = time.perf_counter()
    try:
        config.validate()
        cache_dir = os.environ.get("WLPOWER_CACHE") or config.cache_dir
        key = _cache_key_for(config) if cache_dir else None
        cache_status = "off" if cache_dir is None else "miss"
        payload = None
        extra: dict = {}
        if key is not None:
            payload = cache_lookup(cache_dir, key)
            if payload is not None:
                cache_status = "hit"
        if payload is None:
            payload, extra = _compute_payload(config, start)
            if key is not None:
                cache_store(cache_dir, key, payload)
    except (GraphFormatError, ConfigurationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    telemetry = {
        "millis": int(round((time.perf_counter() - start) * 1000)),
        "cache": cache_status,
        "tool_version": __version__,
        **extra,
    }
    _emit(config, {"payload": payload, "telemetry": telemetry})
    if config.command == "validate" and not payload["passed"]:
        return 1
    if config.command == "power" and not payload["complete"]:
        return 3
    return 0


# ---------------------------------------------------------------------------
# Argument parsing


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES,
                        help="state budget per game solve")
    parser.add_argument("--time-limit-ms", type=int, default=None,
                        help="wall-clock budget, checked between work items")
    parser.add_argument("--out", default=None, help="report file (default: stdout)")
    parser.add_argument("--cache-dir", default=None,
                        help="verdict cache directory (WLPOWER_CACHE overrides)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wlpower",
        description="Refinement specs, pebble games, and counting-power reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distinguish", help="joint color refinement on a graph pair")
    p.add_argument("--spec", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    _add_common(p)

    p = sub.add_parser("cops", help="decide the pursuit game on a query graph")
    p.add_argument("--spec", required=True)
    p.add_argument("--g", required=True)
    _add_common(p)

    p = sub.add_parser("ef", help="decide the bijection game on a graph pair")
    p.add_argument("--spec", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    _add_common(p)

    p = sub.add_parser("hom", help="count homomorphisms pattern -> target")
    p.add_argument("--pattern", required=True)
    p.add_argument("--target", required=True)
    _add_common(p)

    p = sub.add_parser("power", help="enumerate the counting-power set")
    p.add_argument("--spec", required=True)
    p.add_argument("--max-nodes", type=int, required=True)
    p.add_argument("--csv", default=None, help="also write the per-graph CSV summary here")
    _add_common(p)

    p = sub.add_parser("validate", help="run a validation suite")
    p.add_argument(
        "--suite",
        required=True,
        choices=["theorem2", "treewidth", "soundness", "monotonicity", "hom_closed"],
    )
    p.add_argument("--spec", default=None)
    p.add_argument("--spec-small", default=None)
    p.add_argument("--spec-large", default=None)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--max-patterns", type=int, default=6)
    _add_common(p)

    return parser


_SUITE_DEFAULT_NODES = {
    "treewidth": 7,
    "theorem2": 4,
    "soundness": 5,
    "monotonicity": 6,
    "hom_closed": 4,
}


def build_config(args: argparse.Namespace) -> RunConfig:
    graphs: list[str] = []
    if args.command in ("distinguish", "ef"):
        graphs = [args.g, args.h]
    elif args.command == "cops":
        graphs = [args.g]
    elif args.command == "hom":
        graphs = [args.pattern, args.target]
    config = RunConfig(
        command=args.command,
        spec_path=getattr(args, "spec", None),
        graph_inputs=graphs,
        max_states=args.max_states,
        max_nodes=getattr(args, "max_nodes", None),
        time_limit_ms=args.time_limit_ms,
        output=args.out,
        csv_path=getattr(args, "csv", None),
        cache_dir=args.cache_dir,
        suite=getattr(args, "suite", None),
        k=getattr(args, "k", None),
        max_patterns=getattr(args, "max_patterns", None),
        spec_small_path=getattr(args, "spec_small", None),
        spec_large_path=getattr(args, "spec_large", None),
    )
    if config.command == "validate" and config.max_nodes is None:
        config.max_nodes = _SUITE_DEFAULT_NODES[config.suite]
    if config.command == "validate":
        missing = []
        if config.suite in ("theorem2", "soundness", "hom_closed") and not config.spec_path:
            missing.append("--spec")
        if config.suite == "monotonicity" and not (
            config.spec_small_path and config.spec_large_path
        ):
            missing.append("--spec-small/--spec-large")
        if missing:
            raise ConfigurationError(
                f"suite {config.suite} requires {', '.join(missing)}"
            )
    return config


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = build_config(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
