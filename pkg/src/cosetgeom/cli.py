"""Command-line front end: scenario resolution, JSON reports, caching.

Every subcommand writes one schema-versioned JSON report whose embedded
scenario block pins all inputs that influence the numbers (group, subgroup,
radius, schedules, margins).  Worker count and cache location never change
a report byte: parallel sections gather results in input order and the
cache stores exactly what a cold build produces.

Exit codes: 0 for a conclusive run, 2 when the result is Inconclusive or a
constant failed to stabilize, 1 for configuration or computation errors.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .cayley import DEFAULT_VERTEX_BUDGET, Ball, PathInBall, cached_ball
from .cosetgraph import (
    DEFAULT_TRUST_MARGIN,
    CosetPatch,
    build_coset_patch,
    degree_profile,
    project_path,
)
from .dot import export_dot
from .ends import INCONCLUSIVE, ends_report
from .errors import ConfigError, CosetGeomError, NotStabilizedError
from .groups import (
    GroupSpec,
    evaluate_word,
    group_for,
    parse_group_spec,
    parse_word,
    render_word,
)
from .homotopy import build_ladder, build_ray_system, verify_ladder
from .lifting import approximate_lift, compute_f, compute_m, lift_constants
from .metrics import (
    commensuration_verdict,
    default_radii,
    default_test_elements,
    hausdorff_profile,
)
from .subgroups import (
    DEFAULT_MEMBERSHIP_RADIUS,
    SubgroupSpec,
    VERTEX,
    vertex_subgroup,
    word_subgroup,
)

SCHEMA = "cosetgeom.report.v1"
CACHE_ENV = "COSETGEOM_CACHE"

STATUS_OK = "ok"
STATUS_INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------- scenario


def parse_subgroup_spec(spec: GroupSpec, text: str) -> SubgroupSpec:
    text = text.strip()
    if text == "vertex":
        return vertex_subgroup()
    if text.startswith("words:"):
        body = text[len("words:") :]
        radius = DEFAULT_MEMBERSHIP_RADIUS
        if "@" in body:
            body, _, radius_text = body.rpartition("@")
            try:
                radius = int(radius_text)
            except ValueError:
                raise ConfigError(
                    f"bad membership radius {radius_text!r} in {text!r}"
                ) from None
        words = [parse_word(spec, tok) for tok in body.split(",") if tok.strip()]
        if not words:
            raise ConfigError(f"no generator words in {text!r}")
        return word_subgroup(words, radius)
    raise ConfigError(f"unknown subgroup syntax {text!r} (use vertex or words:...)")


def render_subgroup_spec(spec: GroupSpec, q: SubgroupSpec) -> str:
    if q.mode == VERTEX:
        return "vertex"
    body = ",".join(render_word(spec, w) for w in q.words)
    return f"words:{body}@{q.membership_radius}"


def parse_schedule(text: str) -> List[Tuple[int, int]]:
    out = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        inner, sep, outer = token.partition(":")
        if not sep:
            raise ConfigError(f"bad annulus token {token!r} (expected r:R)")
        try:
            out.append((int(inner), int(outer)))
        except ValueError:
            raise ConfigError(f"bad annulus token {token!r}") from None
    if not out:
        raise ConfigError(f"empty schedule {text!r}")
    return out


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"bad integer list {text!r}") from None


def load_config(path: str) -> Dict[str, Dict[str, str]]:
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    return {section: dict(parser[section]) for section in parser.sections()}


class Settings:
    """Resolved options: flags override the config file, which overrides
    built-in defaults; the [<command>] section overrides [scenario]."""

    def __init__(self, args: argparse.Namespace, config: Dict[str, Dict[str, str]]):
        self.command = args.command
        self._args = vars(args)
        self._config = config

    def get(self, key: str, default=None):
        value = self._args.get(key)
        if value is not None:
            return value
        for section in (self.command, "scenario"):
            table = self._config.get(section)
            if table is not None and key in table:
                return table[key]
        return default

    def get_int(self, key: str, default: Optional[int] = None) -> Optional[int]:
        value = self.get(key)
        if value is None:
            return default
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ConfigError(f"option {key} must be an integer, got {value!r}") from None

    def get_bool(self, key: str, default: bool = False) -> bool:
        value = self.get(key)
        if value is None:
            return default
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in ("1", "true", "yes", "on"):
            return True
        if text in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"option {key} must be a boolean, got {value!r}")

    def require(self, key: str) -> str:
        value = self.get(key)
        if value is None:
            raise ConfigError(f"missing required option --{key.replace('_', '-')}")
        return value


class Scenario:
    """Everything a handler needs, resolved once."""

    def __init__(self, settings: Settings):
        self.settings = settings
        self.spec = parse_group_spec(settings.require("group"))
        self.q = parse_subgroup_spec(self.spec, settings.get("subgroup", "vertex"))
        self.radius = settings.get_int("radius")
        if self.radius is None:
            raise ConfigError("missing required option --radius")
        if self.radius < 0:
            raise ConfigError("radius must be nonnegative")
        self.workers = max(1, settings.get_int("workers", os.cpu_count() or 1))
        self.cache_dir = settings.get("cache_dir", os.environ.get(CACHE_ENV))
        self.max_vertices = settings.get_int("max_vertices", DEFAULT_VERTEX_BUDGET)
        self.trust_margin = settings.get_int("trust_margin", DEFAULT_TRUST_MARGIN)
        self._ball: Optional[Ball] = None
        self._patch: Optional[CosetPatch] = None

    @property
    def ball(self) -> Ball:
        if self._ball is None:
            self._ball = cached_ball(
                self.spec, self.radius, self.cache_dir, self.max_vertices
            )
        return self._ball

    @property
    def patch(self) -> CosetPatch:
        if self._patch is None:
            self._patch = build_coset_patch(
                self.spec, self.q, self.ball, self.trust_margin
            )
        return self._patch

    def map_ordered(self, fn: Callable, items: Sequence) -> List:
        items = list(items)
        if self.workers <= 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, items))

    def block(self, **extras) -> dict:
        base = {
            "group": self.spec.describe(),
            "subgroup": render_subgroup_spec(self.spec, self.q),
            "radius": self.radius,
            "max_vertices": self.max_vertices,
        }
        base.update(extras)
        return base

    def word(self, key: str) -> Tuple[int, ...]:
        return parse_word(self.spec, self.settings.require(key))

    def letter_name(self, letter: int) -> str:
        return render_word(self.spec, (letter,))


# ---------------------------------------------------------------- handlers

Handler = Callable[[Scenario], Tuple[dict, dict, str, Optional[str]]]


def cmd_ball(sc: Scenario):
    ball = sc.ball
    result = {
        "n_vertices": ball.n_vertices,
        "sphere_sizes": ball.sphere_sizes(),
    }
    dot = export_dot(ball) if sc.settings.get("dot") else None
    return sc.block(), result, STATUS_OK, dot


def cmd_coset_graph(sc: Scenario):
    patch = sc.patch
    profile = degree_profile(patch)
    result = {
        "n_cosets": patch.n_cosets,
        "n_trusted": profile.n_trusted,
        "max_trusted_degree": profile.max_degree,
        "degree_histogram": [list(row) for row in profile.histogram],
        "per_label_max_targets": [
            [sc.letter_name(letter), count] for letter, count in profile.per_label
        ],
    }
    if sc.settings.get_bool("dump"):
        group = group_for(sc.spec)
        result["cosets"] = [
            {
                "id": cid,
                "key": patch.keys[cid].hex(),
                "witness": group.render(patch.ball.elements[patch.witness[cid]]),
                "dist": patch.dist[cid],
                "trusted": patch.trusted[cid],
            }
            for cid in range(patch.n_cosets)
        ]
        result["edges"] = [
            [cid, sc.letter_name(letter), target]
            for cid in range(patch.n_cosets)
            for letter, targets in patch.adj[cid].items()
            for target in targets
        ]
    dot = export_dot(patch) if sc.settings.get("dot") else None
    return sc.block(trust_margin=sc.trust_margin), result, STATUS_OK, dot


def _profile_payload(profile) -> dict:
    return {
        "element": profile.g_text,
        "values": [
            {
                "radius": v.radius,
                "k_forward": v.k_forward,
                "k_backward": v.k_backward,
                "k": v.k,
                "exact": v.exact,
            }
            for v in profile.values
        ],
        "k_values": list(profile.k_values()),
        "verdict": profile.verdict,
    }


def cmd_hausdorff(sc: Scenario):
    g = evaluate_word(sc.spec, sc.word("element"))
    radii_text = sc.settings.get("radii")
    radii = parse_int_list(radii_text) if radii_text else default_radii(sc.ball.radius)
    profile = hausdorff_profile(sc.spec, sc.q, g, radii, sc.ball)
    status = STATUS_INCONCLUSIVE if profile.verdict == INCONCLUSIVE else STATUS_OK
    scenario = sc.block(
        element=sc.settings.require("element"),
        profile_radii=list(radii),
        window=profile.window,
        margin=profile.margin,
    )
    return scenario, _profile_payload(profile), status, None


def cmd_commensurate(sc: Scenario):
    tests = default_test_elements(sc.spec)
    extra = sc.settings.get("elements")
    if extra:
        for token in extra.split(","):
            token = token.strip()
            if token:
                word = parse_word(sc.spec, token)
                tests.append((token, evaluate_word(sc.spec, word)))
    radii = default_radii(sc.ball.radius)
    ball = sc.ball

    def run(item):
        _, g = item
        return hausdorff_profile(sc.spec, sc.q, g, radii, ball)

    profiles = sc.map_ordered(run, tests)
    overall = commensuration_verdict(profiles)
    result = {
        "verdict": overall.verdict,
        "profiles": [_profile_payload(p) for p in overall.profiles],
    }
    status = STATUS_INCONCLUSIVE if overall.verdict == INCONCLUSIVE else STATUS_OK
    scenario = sc.block(profile_radii=list(radii), window=profiles[0].window)
    return scenario, result, status, None


def _ends_payload(report) -> dict:
    return {
        "graph": report.graph_kind,
        "horizon": report.horizon,
        "schedule": [list(row) for row in report.schedule],
        "counts": list(report.counts),
        "classification": report.classification,
        "count": report.count,
        "label": report.label(),
    }


def _run_ends(sc: Scenario, graph):
    schedule_text = sc.settings.get("schedule")
    schedule = parse_schedule(schedule_text) if schedule_text else None
    report = ends_report(graph, schedule)
    status = (
        STATUS_INCONCLUSIVE if report.classification == INCONCLUSIVE else STATUS_OK
    )
    scenario = sc.block(schedule=[list(row) for row in report.schedule])
    return scenario, _ends_payload(report), status


def cmd_ends(sc: Scenario):
    scenario, result, status = _run_ends(sc, sc.ball)
    return scenario, result, status, None


def cmd_filtered_ends(sc: Scenario):
    scenario, result, status = _run_ends(sc, sc.patch)
    scenario["trust_margin"] = sc.trust_margin
    return scenario, result, status, None


def _scan_payload(scan) -> dict:
    return {
        "name": scan.name,
        "radii": list(scan.radii),
        "values": list(scan.values),
        "stable": scan.stable,
    }


def cmd_constants(sc: Scenario):
    radii_text = sc.settings.get("radii")
    radii = parse_int_list(radii_text) if radii_text else None
    scans = compute_f(sc.spec, sc.q, sc.ball, radii)
    f_payload = [_scan_payload(scans[s]) for s in sc.spec.letters]
    scenario = sc.block(scan_radii=list(scans[sc.spec.letters[0]].radii))
    unstable = [scan.name for scan in scans.values() if not scan.stable]
    if unstable:
        result = {
            "confidence": "NotStabilized",
            "f_scans": f_payload,
            "unstable": sorted(unstable),
        }
        return scenario, result, STATUS_INCONCLUSIVE, None
    constants = lift_constants(sc.spec, sc.q, sc.ball, radii)
    m_scan = compute_m(sc.spec, sc.q, sc.ball, constants.f, radii)
    result = {
        "confidence": constants.confidence,
        "f_per_letter": [
            [sc.letter_name(letter), value] for letter, value in constants.f_per_letter
        ],
        "f": constants.f,
        "m": constants.m,
        "l": constants.l,
        "f_scans": f_payload,
        "m_scan": _scan_payload(m_scan),
    }
    return scenario, result, STATUS_OK, None


def cmd_lift(sc: Scenario):
    word = sc.word("path")
    base_text = sc.settings.get("base", "1")
    base_el = evaluate_word(sc.spec, parse_word(sc.spec, base_text))
    base = sc.ball.vertex(base_el)
    if base is None:
        raise ConfigError(f"base element {base_text!r} lies outside the ball")
    try:
        constants = lift_constants(sc.spec, sc.q, sc.ball)
    except NotStabilizedError as exc:
        scenario = sc.block(path=render_word(sc.spec, word), base=base_text)
        result = {
            "confidence": "NotStabilized",
            "constant": exc.name,
            "values": list(exc.values),
        }
        return scenario, result, STATUS_INCONCLUSIVE, None
    lpath = project_path(sc.patch, PathInBall(base, word))
    lift = approximate_lift(
        sc.spec, sc.q, sc.ball, sc.patch, lpath, base, constants
    )
    replay = project_path(sc.patch, PathInBall(base, lift.word))
    group = group_for(sc.spec)
    result = {
        "lambda_path": {
            "cosets": list(lpath.cosets),
            "letters": [sc.letter_name(letter) for letter in lpath.letters],
        },
        "lift_word": render_word(sc.spec, lift.word),
        "blocks": [render_word(sc.spec, block) for block in lift.blocks],
        "block_lengths": list(lift.block_lengths()),
        "f_per_letter": [
            [sc.letter_name(letter), value] for letter, value in constants.f_per_letter
        ],
        "end_element": group.render(sc.ball.elements[lift.end]),
        "projects_back": replay == lpath,
    }
    scenario = sc.block(path=render_word(sc.spec, word), base=base_text)
    return scenario, result, STATUS_OK, None


def cmd_rays(sc: Scenario):
    kind = sc.settings.get("graph", "ball")
    if kind == "ball":
        graph = sc.ball
    elif kind == "patch":
        graph = sc.patch
    else:
        raise ConfigError(f"unknown ray graph {kind!r} (use ball or patch)")
    system = build_ray_system(graph)
    reaching = sum(
        1 for ray in system.rays if system.shell[ray[-1]] == system.horizon
    )
    longest = max((len(ray) - 1 for ray in system.rays), default=0)
    result = {
        "graph": system.graph_kind,
        "horizon": system.horizon,
        "n_vertices": system.n_vertices,
        "n_reaching_horizon": reaching,
        "n_stuck": system.n_vertices - reaching,
        "longest_ray_edges": longest,
    }
    return sc.block(graph=kind), result, STATUS_OK, None


def cmd_ladder(sc: Scenario):
    prefix = sc.word("prefix")
    crossing_word = sc.word("crossing")
    if len(crossing_word) != 1:
        raise ConfigError("crossing must be a single letter")
    crossing = crossing_word[0]
    scenario = sc.block(
        prefix=render_word(sc.spec, prefix),
        crossing=sc.letter_name(crossing),
    )
    try:
        constants = lift_constants(sc.spec, sc.q, sc.ball)
    except NotStabilizedError as exc:
        result = {
            "confidence": "NotStabilized",
            "constant": exc.name,
            "values": list(exc.values),
        }
        return scenario, result, STATUS_INCONCLUSIVE, None
    ladder = build_ladder(sc.spec, sc.q, sc.ball, prefix, crossing, constants)
    report = verify_ladder(sc.spec, ladder)
    loops = [
        {
            "index": i,
            "word": render_word(sc.spec, ladder.loop_word(i)),
            "length": len(ladder.loop_word(i)),
        }
        for i in range(ladder.n_loops)
    ]
    result = {
        "constants": {
            "f": constants.f,
            "m": constants.m,
            "l": constants.l,
            "confidence": constants.confidence,
        },
        "n_loops": ladder.n_loops,
        "loops": loops,
        "max_loop_length": max((loop["length"] for loop in loops), default=0),
        "rung_lengths": [len(rung) for rung in ladder.rungs],
        "output_word": render_word(sc.spec, ladder.output_word()),
        "target_coset_key": ladder.target_key.hex(),
        "verified": report.ok,
        "violations": [
            {"loop": v.loop, "kind": v.kind, "detail": v.detail}
            for v in report.violations
        ],
    }
    return scenario, result, STATUS_OK, None


def cmd_export(sc: Scenario):
    what = sc.settings.get("what", "patch")
    if what == "ball":
        graph = sc.ball
        edges = sum(len(row) for row in graph.adj)
        nodes = graph.n_vertices
    elif what == "patch":
        graph = sc.patch
        edges = sum(
            len(targets)
            for cid in range(graph.n_cosets)
            for targets in graph.adj[cid].values()
        )
        nodes = graph.n_cosets
    else:
        raise ConfigError(f"unknown export target {what!r} (use ball or patch)")
    sc.settings.require("dot")
    result = {"graph": what, "nodes": nodes, "edges": edges}
    return sc.block(what=what), result, STATUS_OK, export_dot(graph)


HANDLERS: Dict[str, Handler] = {
    "ball": cmd_ball,
    "coset-graph": cmd_coset_graph,
    "hausdorff": cmd_hausdorff,
    "commensurate": cmd_commensurate,
    "ends": cmd_ends,
    "filtered-ends": cmd_filtered_ends,
    "constants": cmd_constants,
    "lift": cmd_lift,
    "rays": cmd_rays,
    "ladder": cmd_ladder,
    "export": cmd_export,
}


# ---------------------------------------------------------------- plumbing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cosetgeom",
        description="Finite-radius geometry of coset graphs: balls, ends, "
        "commensuration evidence, lifts, and ladder certificates.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="INI config file; flags override it")
        p.add_argument("--group", help="free:k | abelian:k | bs:m,n | hnn:k,rows")
        p.add_argument("--subgroup", help="vertex | words:w1,w2@radius")
        p.add_argument("--radius", type=int, help="ball radius")
        p.add_argument("--workers", type=int, help="thread count for parallel parts")
        p.add_argument("--cache-dir", dest="cache_dir", help="ball cache directory")
        p.add_argument(
            "--max-vertices", dest="max_vertices", type=int, help="ball vertex budget"
        )
        p.add_argument("--out", help="report path (default stdout)")
        return p

    p = add("ball", "build a Cayley ball and report its size profile")
    p.add_argument("--stats", action="store_true", help="accepted for compatibility")
    p.add_argument("--dot", help="write the ball as DOT")

    p = add("coset-graph", "project the ball onto its coset-graph patch")
    p.add_argument("--trust-margin", dest="trust_margin", type=int)
    p.add_argument("--dump", action="store_const", const="true", default=None)
    p.add_argument("--dot", help="write the patch as DOT")

    p = add("hausdorff", "profile the Hausdorff distance between Q and gQ")
    p.add_argument("--element", help="translating element g, e.g. t or x^2")
    p.add_argument("--radii", help="comma-separated profile radii")

    p = add("commensurate", "aggregate commensuration evidence over generators")
    p.add_argument("--elements", help="extra test words, comma-separated")

    p = add("ends", "count sphere-touching annulus components of the ball")
    p.add_argument("--schedule", help="annuli as r:R,r:R,...")

    p = add("filtered-ends", "count annulus components of the coset graph")
    p.add_argument("--schedule", help="annuli as r:R,r:R,...")
    p.add_argument("--trust-margin", dest="trust_margin", type=int)

    p = add("constants", "compute and certify the transfer constants F, M, L")
    p.add_argument("--radii", help="two or more scan radii, comma-separated")

    p = add("lift", "project a word to the coset graph and lift it back")
    p.add_argument("--path", help="word to project and re-lift, e.g. x^2.t")
    p.add_argument("--base", help="base element word (default identity)")

    p = add("rays", "build outward escape rays and report coverage")
    p.add_argument("--graph", help="ball or patch (default ball)")

    p = add("ladder", "build and verify a homotopy ladder certificate")
    p.add_argument("--prefix", help="Q-letter prefix word, e.g. x^12")
    p.add_argument("--crossing", help="crossing letter, e.g. t")

    p = add("export", "write a graph as deterministic DOT")
    p.add_argument("--what", help="ball or patch (default patch)")
    p.add_argument("--dot", help="output DOT path (required)")

    return parser


def emit(payload: dict, out_path: Optional[str]) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config) if args.config else {}
        settings = Settings(args, config)
        scenario = Scenario(settings)
        handler = HANDLERS[args.command]
        block, result, status, dot_text = handler(scenario)
        payload = {
            "schema": SCHEMA,
            "command": args.command,
            "scenario": block,
            "result": result,
            "status": status,
        }
        emit(payload, settings.get("out"))
        dot_path = settings.get("dot")
        if dot_text is not None and dot_path:
            with open(dot_path, "w") as fh:
                fh.write(dot_text)
    except CosetGeomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0 if status == STATUS_OK else 2


if __name__ == "__main__":
    sys.exit(main())
