"""Command-line interface: ingest, shape, profile, diagnose, synth.

Every command writes into ``--out`` through a staging directory, so either
all outputs appear or none do, and records a ``manifest.json`` with the
run configuration and SHA-256 digests of its inputs.
"""

import argparse
import hashlib
import json
import os
import shutil
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Dict, List, Optional

from . import __version__
from .config import ENV_VAR, RunConfig, resolve
from .diagnostics import (
    LOG_BASE, Binning, ReferenceDistribution, diagnose, rank, write_reports_csv,
)
from .lexical import dump_events, load_term_list, token_events
from .metrics import read_shapes, shape, write_shapes_csv, write_shapes_jsonl
from .profile import (
    classify, dumps_spec, profile, render_markdown, render_text,
    scatter_points, scatter_spec, write_table_csv,
)
from .synth import PRESETS, generate, load_spec, preset
from .tagging import import_tags
from .transcript import MappingConfig, corpus_counts, read_corpus, write_corpus


class CommandError(Exception):
    pass


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


class Staging:
    """Collects outputs in a temp dir and moves them into place on success."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        os.makedirs(out_dir, exist_ok=True)
        self.tmp = tempfile.mkdtemp(prefix=".convshape-", dir=out_dir)
        self.names: List[str] = []

    def open(self, name: str):
        self.names.append(name)
        return open(os.path.join(self.tmp, name), "w", encoding="utf-8", newline="")

    def commit(self) -> None:
        for name in self.names:
            os.replace(os.path.join(self.tmp, name), os.path.join(self.out_dir, name))
        shutil.rmtree(self.tmp, ignore_errors=True)

    def abort(self) -> None:
        shutil.rmtree(self.tmp, ignore_errors=True)


def _header(cfg: RunConfig) -> str:
    return f"convshape {__version__} config_digest={cfg.digest()} log_base={LOG_BASE}"


def _write_manifest(stage: Staging, command: str, cfg: RunConfig, inputs: List[str], extra=None):
    manifest = {
        "command": command,
        "version": __version__,
        "config_digest": cfg.digest(),
        "config": cfg.to_dict(),
        "inputs": [{"path": p, "sha256": _sha256(p)} for p in inputs],
        "outputs": sorted(stage.names),
    }
    if extra:
        manifest.update(extra)
    with stage.open("manifest.json") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- config assembly ---------------------------------------------------------

def _config(args) -> RunConfig:
    cfg = resolve(args.config)
    tok = cfg.tokenizer
    if getattr(args, "stopwords", None):
        tok = replace(tok, stopwords=load_term_list(args.stopwords))
    if getattr(args, "exclusions", None):
        tok = replace(tok, exclusions=load_term_list(args.exclusions))
    if getattr(args, "no_stem", False):
        tok = replace(tok, stem=False)
    binning = cfg.binning
    if getattr(args, "bins", None) is not None or getattr(args, "alpha", None) is not None:
        binning = Binning(
            bins=args.bins if args.bins is not None else binning.bins,
            alpha=args.alpha if args.alpha is not None else binning.alpha,
        )
    return cfg.updated(
        tokenizer=tok,
        binning=binning,
        inputs=list(args.input) if getattr(args, "input", None) else None,
        mapping=getattr(args, "mapping", None),
        tags=getattr(args, "tags", None),
        reference=getattr(args, "reference", None),
        out=args.out,
        seed=getattr(args, "seed", None),
        format=getattr(args, "format", None),
        emit_plot=True if getattr(args, "emit_plot", False) else None,
        balance_band=getattr(args, "epsilon", None),
        workers=getattr(args, "workers", None),
    )


def _load_corpus(path: str, cfg: RunConfig):
    mapping = MappingConfig.load(cfg.mapping) if cfg.mapping else None
    dialogues = read_corpus(path, mapping)
    if cfg.tags:
        with open(cfg.tags, encoding="utf-8") as fh:
            dialogues = import_tags(dialogues, fh)
    return dialogues


def _shape_one(job):
    dialogue, tokenizer, policy = job
    return shape(dialogue, tokenizer, policy)


def _compute_shapes(dialogues, cfg: RunConfig):
    dialogues = sorted(dialogues, key=lambda d: d.id)
    jobs = [(d, cfg.tokenizer, cfg.question_policy) for d in dialogues]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(_shape_one, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers))))
    return [_shape_one(j) for j in jobs]


# -- commands ----------------------------------------------------------------

def cmd_ingest(args) -> int:
    cfg = _config(args)
    if len(cfg.inputs) != 1:
        raise CommandError("ingest takes exactly one --input")
    dialogues = _load_corpus(cfg.inputs[0], cfg)
    stage = Staging(cfg.out)
    try:
        with stage.open("corpus.jsonl") as fh:
            write_corpus(dialogues, fh)
        inputs = cfg.inputs + [p for p in (cfg.mapping, cfg.tags) if p]
        _write_manifest(stage, "ingest", cfg, inputs, {"counts": corpus_counts(dialogues)})
    except BaseException:
        stage.abort()
        raise
    stage.commit()
    return 0


def cmd_shape(args) -> int:
    cfg = _config(args)
    dialogues = []
    for path in cfg.inputs:
        dialogues += _load_corpus(path, cfg)
    vectors = _compute_shapes(dialogues, cfg)
    stage = Staging(cfg.out)
    try:
        if cfg.format == "json":
            with stage.open("shapes.jsonl") as fh:
                write_shapes_jsonl(vectors, fh, {"config_digest": cfg.digest()})
        else:
            with stage.open("shapes.csv") as fh:
                write_shapes_csv(vectors, fh, _header(cfg))
        if args.dump_events:
            with stage.open("events.jsonl") as fh:
                for d in sorted(dialogues, key=lambda d: d.id):
                    dump_events(token_events(d, cfg.tokenizer), fh, d.id)
        inputs = cfg.inputs + [p for p in (cfg.mapping, cfg.tags) if p]
        _write_manifest(stage, "shape", cfg, inputs, {"counts": corpus_counts(dialogues)})
    except BaseException:
        stage.abort()
        raise
    stage.commit()
    return 0


def _profiles_from_shapes(paths: List[str]):
    groups: Dict[str, list] = {}
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            for v in read_shapes(fh):
                groups.setdefault(v.dataset, []).append(v)
    return [profile(sorted(groups[k], key=lambda v: v.dialogue_id), k) for k in groups]


def cmd_profile(args) -> int:
    cfg = _config(args)
    profiles = _profiles_from_shapes(cfg.inputs)
    if not profiles:
        raise CommandError("no dialogues in shape files")
    digest = cfg.digest()
    labels = [classify(p, cfg.balance_band, cfg.topic_field) for p in profiles]
    stage = Staging(cfg.out)
    try:
        if cfg.format == "md":
            with stage.open("profiles.md") as fh:
                fh.write(f"<!-- {_header(cfg)} -->\n")
                fh.write(render_markdown(profiles))
        elif cfg.format == "json":
            with stage.open("profiles.json") as fh:
                doc = {
                    "config_digest": digest,
                    "profiles": [
                        {**p.to_dict(), "driver": lab.driver.value, "topic": lab.topic.value}
                        for p, lab in zip(profiles, labels)
                    ],
                }
                json.dump(doc, fh, indent=2, sort_keys=True)
                fh.write("\n")
        else:
            with stage.open("profiles.csv") as fh:
                write_table_csv(profiles, fh, _header(cfg))
        with stage.open("types.csv") as fh:
            fh.write(f"# {_header(cfg)}\n")
            fh.write("dataset,driver,topic\n")
            for p, lab in zip(profiles, labels):
                fh.write(f"{p.dataset},{lab.driver.value},{lab.topic.value}\n")
        if cfg.emit_plot:
            pts = scatter_points(profiles, args.x, args.y)
            with stage.open("dialogue_types.vl.json") as fh:
                fh.write(dumps_spec(scatter_spec(pts, args.x, args.y, usermeta={"config_digest": digest})))
        _write_manifest(stage, "profile", cfg, cfg.inputs)
    except BaseException:
        stage.abort()
        raise
    stage.commit()
    sys.stdout.write(render_text(profiles))
    return 0


def _load_reference(cfg: RunConfig) -> ReferenceDistribution:
    path = cfg.reference
    if path.endswith(".json"):
        return ReferenceDistribution.load(path)
    vectors = _compute_shapes(_load_corpus(path, cfg), cfg)
    if not vectors:
        raise CommandError(f"reference corpus {path} is empty")
    return ReferenceDistribution.build(vectors, cfg.binning, label=os.path.basename(path))


def cmd_diagnose(args) -> int:
    cfg = _config(args)
    if not cfg.reference:
        raise CommandError("diagnose needs --reference")
    reference = _load_reference(cfg)
    reports = []
    model_means = []
    for path in cfg.inputs:
        groups: Dict[str, list] = {}
        for v in _compute_shapes(_load_corpus(path, cfg), cfg):
            groups.setdefault(v.dataset or os.path.basename(path), []).append(v)
        for label, vectors in groups.items():
            reports.append(diagnose(vectors, reference, cfg.rules, model=label))
            model_means.append((label, vectors))
    if not reports:
        raise CommandError("no model dialogues to diagnose")
    ranked = rank(reports)
    digest = cfg.digest()
    stage = Staging(cfg.out)
    try:
        with stage.open("reports.json") as fh:
            doc = {
                "config_digest": digest,
                "log_base": LOG_BASE,
                "reference": {"label": reference.label, "n_dialogues": reference.n_dialogues,
                              "self_entropy": reference.self_entropy()},
                "reports": [r.to_dict() for r in ranked],
            }
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        with stage.open("reports.csv") as fh:
            write_reports_csv(ranked, fh, _header(cfg))
        if args.save_reference:
            with stage.open("reference.json") as fh:
                json.dump(reference.to_dict(), fh, indent=2, sort_keys=True)
                fh.write("\n")
        if cfg.emit_plot:
            pts = []
            for label, vs in sorted(model_means, key=lambda item: item[0]):
                p = profile(vs, label)
                pts.append((label, p.mean("flow_A"), p.mean("avg_q")))
            spec = scatter_spec(pts, "flow_A", "avg_q", title="Model types",
                                usermeta={"config_digest": digest})
            with stage.open("model_types.vl.json") as fh:
                fh.write(dumps_spec(spec))
        inputs = cfg.inputs + [p for p in (cfg.reference, cfg.mapping, cfg.tags) if p]
        _write_manifest(stage, "diagnose", cfg, inputs)
    except BaseException:
        stage.abort()
        raise
    stage.commit()
    for i, r in enumerate(ranked, 1):
        sys.stdout.write(f"{i}\t{r.model}\t{r.total:.4f}\t{r.label}\n")
    return 0


def cmd_synth(args) -> int:
    cfg = _config(args)
    spec = load_spec(args.generator) if args.generator else preset(args.preset)
    if args.n is not None:
        spec = replace(spec, n_dialogues=args.n)
    dialogues = generate(spec, cfg.seed)
    stage = Staging(cfg.out)
    try:
        with stage.open("corpus.jsonl") as fh:
            write_corpus(dialogues, fh)
        _write_manifest(stage, "synth", cfg, [args.generator] if args.generator else [],
                        {"generator": spec.to_dict(), "counts": corpus_counts(dialogues)})
    except BaseException:
        stage.abort()
        raise
    stage.commit()
    return 0


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convshape",
        description="Initiative and collaboration metrics for two-party dialogue corpora.",
        epilog=f"Environment: {ENV_VAR} names a default RunConfig JSON file used when --config is absent.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help=f"RunConfig JSON (default: ${ENV_VAR})")
    common.add_argument("--out", required=True, help="output directory")

    tok = argparse.ArgumentParser(add_help=False)
    tok.add_argument("--mapping", help="MappingConfig JSON for non-canonical input records")
    tok.add_argument("--tags", help="JSON-lines tag file {dialogue_id, turn, tag}")
    tok.add_argument("--stopwords", help="stopword list, one term per line")
    tok.add_argument("--exclusions", help="extra excluded terms, one per line")
    tok.add_argument("--no-stem", action="store_true", help="disable plural stemming")
    tok.add_argument("--workers", type=int, help="worker processes for shape computation")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common, tok], help="convert a source corpus to canonical JSON lines")
    p.add_argument("--input", action="append", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("shape", parents=[common, tok], help="per-dialogue shape vectors")
    p.add_argument("--input", action="append", required=True, help="canonical corpus (repeatable)")
    p.add_argument("--format", choices=["csv", "json"], help="csv (default) or json lines")
    p.add_argument("--dump-events", action="store_true", help="also write token events")
    p.set_defaults(func=cmd_shape)

    p = sub.add_parser("profile", parents=[common], help="dataset profiles and dialogue types")
    p.add_argument("--input", action="append", required=True, help="shape file (repeatable)")
    p.add_argument("--format", choices=["csv", "json", "md"])
    p.add_argument("--epsilon", type=float, help="balance band for dialogue types (default 0.1)")
    p.add_argument("--emit-plot", action="store_true", help="write a Vega-Lite scatter spec")
    p.add_argument("--x", default="delta_i", help="scatter x field (default delta_i)")
    p.add_argument("--y", default="delta_q", help="scatter y field (default delta_q)")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("diagnose", parents=[common, tok], help="score model corpora against a reference")
    p.add_argument("--input", action="append", required=True, help="model corpus (repeatable)")
    p.add_argument("--reference", required=True, help="reference corpus JSONL or saved reference.json")
    p.add_argument("--bins", type=int, help="histogram bins (default 20)")
    p.add_argument("--alpha", type=float, help="additive smoothing (default 1)")
    p.add_argument("--emit-plot", action="store_true", help="write a Vega-Lite model scatter spec")
    p.add_argument("--save-reference", action="store_true", help="also write reference.json")
    p.add_argument("--format", choices=["csv", "json"], help="accepted for symmetry; both are written")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic corpus")
    p.add_argument("--preset", choices=PRESETS, default="reference")
    p.add_argument("--generator", help="generator spec JSON (overrides --preset)")
    p.add_argument("--seed", type=int)
    p.add_argument("--n", type=int, help="number of dialogues")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CommandError, ValueError, KeyError, OSError) as exc:
        err = {"error": type(exc).__name__, "command": args.command, "message": str(exc)}
        sys.stderr.write(json.dumps(err) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
