"""Command-line front end: ``emonet synth | analyze | export``.

``analyze`` writes an analysis bundle, a directory of JSON files from which
every figure can be redrawn without refitting::

    run.json            flags that shaped the run
    filter_report.json  session counts at each cleaning step
    network.json        aggregated word network
    metrics.json        locality / globality (and NMI, active count)
    layouts.json        MDS coordinates for words (and communities)
    decomposition.json  pi, p(i|k), stationary distribution   (single alpha)
    partition.json      hard community labels per word        (single alpha)
    omega.json          strengths between active communities  (single alpha)
    sweep.json          active counts per alpha and seed      (--alpha-sweep)
    stats.json          two-dataset comparison                (--compare)

Exit status is 0 on success, 2 for usage errors, and one code per failing
stage otherwise (see ``EXIT_CODES``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from statistics import median
from typing import Sequence

import numpy as np

from . import __version__
from .export import layout_svg, network_dot, network_graphml, omega_dot, community_label
from .graph import SemanticNetwork, dissimilarity, markov_model
from .ingest import TASKS, aggregate, parse_sessions, run_filters, write_sessions
from .lexicon import EmotionLexicon, builtin_lexicon, load_lexicon
from .mdmc import (
    CommunityNetwork,
    DecomposeConfig,
    active_count,
    alpha_sweep,
    decompose_best,
    hard_assign,
    omega,
)
from .mds import Layout, classical_mds, omega_layout
from .metrics import across_pair_scores, locality_report, wheel_nmi, within_pair_scores
from .stats import chi_square_homogeneity, paired_t_test, score_histogram
from .synth import PlantedModel, generate

EXIT_CODES = {
    "usage": 2,
    "ingest": 3,
    "filter": 4,
    "graph": 5,
    "decompose": 6,
    "metrics": 7,
    "export": 8,
}
FORMATS = ("json", "dot", "graphml", "svg")


class StageError(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.code = EXIT_CODES[stage]


class _Stage:
    """Context manager that re-raises any failure tagged with its stage."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, kind, exc, tb):
        if exc is None or isinstance(exc, StageError):
            return False
        raise StageError(self.name, f"{type(exc).__name__}: {exc}") from exc


def default_seed() -> int:
    raw = os.environ.get("EMONET_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise StageError("usage", f"EMONET_SEED must be an integer, got {raw!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n"


def _write(path: Path, text: str) -> None:
    path.write_text(text, encoding="utf-8")


def _float_list(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _formats(text: str) -> list[str]:
    out = [f.strip() for f in text.split(",") if f.strip()]
    bad = [f for f in out if f not in FORMATS]
    if bad or not out:
        raise argparse.ArgumentTypeError(f"formats must be drawn from {','.join(FORMATS)}")
    return out


def _lexicon(path: str | None) -> EmotionLexicon:
    return builtin_lexicon() if path is None else load_lexicon(path)


# ---------------------------------------------------------------- synth

def cmd_synth(args) -> int:
    with _Stage("usage"):
        lexicon = _lexicon(args.lexicon)
        model = PlantedModel(
            base_within=args.base_within,
            base_opposite=args.base_opposite,
            base_other=args.base_other,
            noise_sd=args.noise_sd,
            careless_rate=args.careless_rate,
            seed=args.seed,
            pair_sd=args.pair_sd,
            lexicon=lexicon,
        )
        sessions = generate(model, args.participants, args.task)
    with _Stage("export"):
        write_sessions(sessions, args.out, lexicon)
    with _Stage("filter"):
        _, report = run_filters(sessions, args.threshold)
    print(_dump(report.to_dict()), end="")
    return 0


# ---------------------------------------------------------------- analyze

def _load_network(path: str, lexicon: EmotionLexicon, task: str | None, threshold: float, impute: bool):
    with _Stage("ingest"):
        sessions = parse_sessions(path, lexicon)
        if task is not None:
            sessions = [s for s in sessions if s.task == task]
        if not sessions:
            raise ValueError(f"no sessions for task {task!r} in {path}")
    with _Stage("filter"):
        kept, report = run_filters(sessions, threshold)
        if not kept:
            raise ValueError("every session was filtered out")
    with _Stage("ingest"):
        net = aggregate(kept, lexicon, impute=impute)
    return kept, report, net


def _compare(kept_a, net_a, kept_b, net_b, lexicon: EmotionLexicon) -> dict:
    wheel = lexicon.wheel
    chi = chi_square_homogeneity(score_histogram(kept_a), score_histogram(kept_b))
    loc = paired_t_test(within_pair_scores(net_a, wheel), within_pair_scores(net_b, wheel))
    glob = paired_t_test(across_pair_scores(net_a, wheel), across_pair_scores(net_b, wheel))
    return {
        "score_histograms": [score_histogram(kept_a).tolist(), score_histogram(kept_b).tolist()],
        "chi_square": chi.to_dict("chi-square homogeneity"),
        "locality_t": loc.to_dict("paired t, within-petal pairs"),
        "globality_t": glob.to_dict("paired t, opposite-petal pairs"),
    }


def cmd_analyze(args) -> int:
    lexicon = _lexicon(args.lexicon)
    out = Path(args.out)
    with _Stage("export"):
        out.mkdir(parents=True, exist_ok=True)
    seeds = list(range(args.seed, args.seed + args.seeds))
    alphas = args.alpha_sweep
    with _Stage("decompose"):
        base = DecomposeConfig(k_max=args.k_max, alpha=args.alpha, seed=args.seed, prune_eps=args.prune_eps)
        for a in alphas or ():
            DecomposeConfig(alpha=a)

    kept, report, net = _load_network(args.input, lexicon, args.task, args.threshold, args.impute_missing)
    files: dict[str, object] = {
        "run.json": {
            "version": __version__,
            "task": args.task,
            "damping": args.damping,
            "k_max": args.k_max,
            "alpha": None if alphas else args.alpha,
            "alpha_sweep": alphas,
            "seeds": seeds,
            "prune_eps": args.prune_eps,
            "nmi_domain": args.nmi_domain,
            "impute_missing": args.impute_missing,
            "threshold": args.threshold,
        },
        "filter_report.json": report.to_dict(),
        "network.json": net.to_dict(),
    }

    with _Stage("graph"):
        model = markov_model(net, damping=args.damping)

    with _Stage("metrics"):
        metrics: dict[str, object] = {"locality": locality_report(net, lexicon.wheel).to_dict()}
        layouts: dict[str, object] = {"words": classical_mds(dissimilarity(net), dims=2).to_dict()}

    if alphas:
        with _Stage("decompose"):
            rows = alpha_sweep(model, args.k_max, alphas, seeds, base)
        table = [
            {
                "alpha": a,
                "median_active": float(median(r.active_count for r in rows if r.alpha == a)),
                "median_labels": float(median(len(set(r.labels)) for r in rows if r.alpha == a)),
            }
            for a in alphas
        ]
        files["sweep.json"] = {"rows": [r.to_dict() for r in rows], "summary": table}
        for row in table:
            print(f"alpha={row['alpha']:g}\tmedian_active={row['median_active']:g}"
                  f"\tmedian_labels={row['median_labels']:g}")
    else:
        with _Stage("decompose"):
            dec = decompose_best(model, base, seeds)
            part = hard_assign(dec)
            labels = [part[i] for i in range(net.n)]
            cn = omega(dec, model)
        with _Stage("metrics"):
            metrics["active_count"] = active_count(dec)
            metrics["nmi"] = {
                "domain": args.nmi_domain,
                "method": "arithmetic",
                "value": wheel_nmi(part, lexicon, args.nmi_domain),
            }
            if len(cn.communities) >= 2:
                layouts["communities"] = omega_layout(cn).to_dict()
        files["decomposition.json"] = dec.to_dict()
        files["partition.json"] = {"words": list(net.words), "labels": labels, "active_count": active_count(dec)}
        files["omega.json"] = cn.to_dict(net.words)
        print(f"active communities: {active_count(dec)}  NMI({args.nmi_domain}) = {metrics['nmi']['value']:.4f}")

    files["metrics.json"] = metrics
    files["layouts.json"] = layouts

    if args.compare:
        kept_b, report_b, net_b = _load_network(args.compare, lexicon, args.compare_task, args.threshold,
                                                args.impute_missing)
        with _Stage("metrics"):
            stats = _compare(kept, net, kept_b, net_b, lexicon)
            stats["filter_report_compare"] = report_b.to_dict()
            stats["locality_compare"] = locality_report(net_b, lexicon.wheel).to_dict()
        files["stats.json"] = stats

    with _Stage("export"):
        for name, obj in files.items():
            _write(out / name, _dump(obj))
        write_exports(out, [f for f in args.export if f != "json"], lexicon)
    return 0


# ---------------------------------------------------------------- export

def _read_json(path: Path):
    if not path.exists():
        raise FileNotFoundError(f"bundle file {path} is missing")
    return json.loads(path.read_text(encoding="utf-8"))


def write_exports(bundle: Path, formats: Sequence[str], lexicon: EmotionLexicon) -> list[Path]:
    """Render DOT / GraphML / SVG files from the JSON files in ``bundle``."""
    written: list[Path] = []
    if not formats:
        return written
    net = SemanticNetwork.from_dict(_read_json(bundle / "network.json"))
    groups = None
    if (bundle / "partition.json").exists():
        groups = _read_json(bundle / "partition.json")["labels"]
    cn = None
    if (bundle / "omega.json").exists():
        cn = CommunityNetwork.from_dict(_read_json(bundle / "omega.json"))
    layouts = _read_json(bundle / "layouts.json")
    colors = [lexicon.color(lexicon.id_of(w)) if w in lexicon else "#888888" for w in net.words]

    def emit(name: str, text: str) -> None:
        _write(bundle / name, text)
        written.append(bundle / name)

    if "dot" in formats:
        emit("network.dot", network_dot(net, colors, groups))
        if cn is not None:
            emit("omega.dot", omega_dot(cn, net.words))
    if "graphml" in formats:
        emit("network.graphml", network_graphml(net, groups))
    if "svg" in formats:
        words = _layout(layouts["words"])
        emit("network.svg", layout_svg(words, list(net.words), colors, title="word layout"))
        if cn is not None and "communities" in layouts:
            names = [community_label(cn, k, net.words) for k in range(len(cn.communities))]
            emit("omega.svg", layout_svg(_layout(layouts["communities"]), names, title="community layout"))
    return written


def _layout(data: dict) -> Layout:
    return Layout(np.asarray(data["coords"], dtype=float), np.asarray(data["eigenvalues"], dtype=float),
                  float(data["stress_note"]))


def cmd_export(args) -> int:
    bundle = Path(args.bundle)
    with _Stage("export"):
        if not (bundle / "network.json").exists():
            raise FileNotFoundError(f"{bundle} is not an analysis bundle (network.json missing)")
        for path in write_exports(bundle, [f for f in args.export if f != "json"], _lexicon(args.lexicon)):
            print(path)
    return 0


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emonet", description="Emotion-word networks and their communities.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    seed = default_seed()

    s = sub.add_parser("synth", help="simulate rating sessions with a planted petal structure")
    s.add_argument("--out", required=True, help="CSV file to write")
    s.add_argument("--participants", type=int, default=480)
    s.add_argument("--task", choices=TASKS, default="similarity")
    s.add_argument("--seed", type=int, default=seed)
    s.add_argument("--noise-sd", type=float, default=1.0)
    s.add_argument("--pair-sd", type=float, default=1.2)
    s.add_argument("--careless-rate", type=float, default=0.05)
    s.add_argument("--base-within", type=float, default=6.0)
    s.add_argument("--base-opposite", type=float, default=1.0)
    s.add_argument("--base-other", type=float, default=2.5)
    s.add_argument("--threshold", type=float, default=0.4, help="double-pass r threshold for the summary")
    s.add_argument("--lexicon", help="word table (TSV); defaults to the built-in 48 words")
    s.set_defaults(func=cmd_synth)

    a = sub.add_parser("analyze", help="filter, aggregate, decompose and measure one dataset")
    a.add_argument("input", help="rating CSV")
    a.add_argument("--out", required=True, help="bundle directory")
    a.add_argument("--task", choices=TASKS, help="keep only sessions of this task")
    a.add_argument("--compare", help="second rating CSV for the chi-square and paired t tests")
    a.add_argument("--compare-task", choices=TASKS, help="task filter for --compare")
    a.add_argument("--k-max", type=int, default=10)
    grp = a.add_mutually_exclusive_group()
    grp.add_argument("--alpha", type=float, default=0.001)
    grp.add_argument("--alpha-sweep", type=_float_list, help="comma-separated alphas, e.g. .001,.01,.1,1")
    a.add_argument("--seeds", type=int, default=10, help="EM restarts; seeds run from --seed upward")
    a.add_argument("--seed", type=int, default=seed)
    a.add_argument("--damping", type=float, default=0.15)
    a.add_argument("--prune-eps", type=float, default=1e-6)
    a.add_argument("--threshold", type=float, default=0.4, help="double-pass r threshold")
    a.add_argument("--nmi-domain", choices=("petal24", "all48"), default="petal24")
    a.add_argument("--export", type=_formats, default=["json", "svg"],
                   help="comma-separated formats from json,dot,graphml,svg")
    a.add_argument("--impute-missing", action="store_true", help="fill unrated pairs with the global mean")
    a.add_argument("--lexicon")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("export", help="render DOT / GraphML / SVG files from a bundle")
    e.add_argument("bundle")
    e.add_argument("--export", type=_formats, default=["dot", "graphml", "svg"])
    e.add_argument("--lexicon")
    e.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if getattr(args, "seeds", 1) < 1:
            parser.error("--seeds must be at least 1")
        return args.func(args)
    except StageError as err:
        print(f"emonet: {err}", file=sys.stderr)
        return err.code


if __name__ == "__main__":
    sys.exit(main())
