"""``censorlens`` command-line entry point."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .corpus import (LABEL_NAMES, CensorshipStatus, Corpus, CorpusError, balance,
                     ingest, topic_summary, write_corpus)
from .decoder import (DAY, DecodeError, PlatformSim, apply_statuses, decode_snapshots,
                      read_snapshots, Collector, write_snapshots)
from .evaluation import (KappaUndefined, feature_class_report, fleiss_kappa, kappa_interpretation,
                         kfold_cv, parallel_coordinates_svg, read_annotations, write_report)
from .features import FeatureExtractor, Standardizer, read_feature_csv, write_feature_csv
from .lexicons import ResourceError, Resources, demo_resource_dir
from .mlp import MlpConfig, TrainingError, train
from .selection import FeatureSet, select_features
from .synth import TextGenerator

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger("censorlens")

class Manifest:
    """Records what one command ran with and every file it wrote."""

    def __init__(self, command: str, args: dict, seed: Optional[int] = None):
        self.data = {
            "command": command,
            "config": {k: (str(v) if isinstance(v, Path) else v) for k, v in args.items()
                       if not callable(v)},
            "seed": seed,
            "version": __version__,
            "resources": {},
            "outputs": [],
            "started": datetime.now(timezone.utc).isoformat(),
        }

    def output(self, path) -> str:
        self.data["outputs"].append(str(path))
        return str(path)

    def resources(self, res: Resources) -> None:
        self.data["resources"] = dict(res.digests)

    def write(self, path) -> None:
        self.data["finished"] = datetime.now(timezone.utc).isoformat()
        Path(path).write_text(json.dumps(self.data, indent=1, ensure_ascii=False) + "\n",
                              encoding="utf-8")


def manifest_path(primary) -> Path:
    primary = Path(primary)
    return primary.with_name(primary.name + ".manifest.json")


def parse_hidden(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(h) for h in text)
    try:
        sizes = tuple(int(h) for h in str(text).split(",") if h.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad hidden layer list: {text!r}")
    if not sizes or any(h < 1 for h in sizes):
        raise argparse.ArgumentTypeError(f"bad hidden layer list: {text!r}")
    return sizes


def read_terms(path) -> tuple[list[str], dict[str, str]]:
    """Terms file: ``term[<TAB>topic]`` per line."""
    terms, topics = [], {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        term, _, topic = line.partition("\t")
        terms.append(term.strip())
        topics[term.strip()] = topic.strip() or term.strip()
    if not terms:
        raise ValueError(f"{path}: no search terms")
    return terms, topics


def resolve_resources(path) -> Path:
    return demo_resource_dir() if path in (None, "demo") else Path(path)


def labelled_rows(table, names: Optional[Sequence[str]] = None):
    X = table.columns(names) if names is not None else table.matrix
    try:
        y = np.array([LABEL_NAMES.index(lbl) for lbl in table.labels], dtype=np.int64)
    except ValueError as exc:
        raise ValueError(f"feature file has a label outside {LABEL_NAMES}") from exc
    return X, y


# -- stages -------------------------------------------------------------------

def stage_simulate(terms_path, seed, rate, out, posts=1000, user_rate=0.05, days=30.0,
                   resources=None, snapshots=None, manifest: Optional[Manifest] = None) -> Corpus:
    terms, topics = read_terms(terms_path)
    res = Resources.load(resolve_resources(resources))
    gen = TextGenerator(res)
    sim = PlatformSim.random(posts, terms, seed, censor_rate=rate, user_delete_rate=user_rate,
                             span=days * DAY, text_fn=gen.sim_text, topics=topics)
    collector = Collector(sim, terms, seed=seed)
    corpus = collector.run(horizon=(days + 16) * DAY)
    write_corpus(corpus, out)
    if manifest:
        manifest.output(out)
        manifest.resources(res)
    if snapshots:
        write_snapshots(collector.snapshots, snapshots)
        if manifest:
            manifest.output(snapshots)
    logger.info("collected %d posts: %d censored, %d uncensored, %d user-deleted, %d pending",
                len(corpus), corpus.count(CensorshipStatus.CENSORED),
                corpus.count(CensorshipStatus.UNCENSORED),
                corpus.count(CensorshipStatus.USER_DELETED), corpus.count(CensorshipStatus.PENDING))
    return corpus


def stage_extract(corpus_path, resources, out, do_balance=False, seed=0,
                  manifest: Optional[Manifest] = None) -> None:
    res_dir = resolve_resources(resources)
    res = Resources.load(res_dir)
    corpus = ingest(corpus_path).labelled()
    if do_balance:
        corpus = balance(corpus, seed)
    if not corpus.posts:
        raise CorpusError(f"{corpus_path}: no censored/uncensored posts to extract")
    fx = FeatureExtractor(res)
    X = fx.matrix(corpus.posts)
    write_feature_csv(out, fx.registry.names, X, [p.status.value for p in corpus.posts],
                      [p.id for p in corpus.posts])
    if manifest:
        manifest.resources(res)
        manifest.output(out)


def stage_select(feats, target, trials, seed, out, manifest_name=None) -> FeatureSet:
    table = read_feature_csv(feats)
    X, y = labelled_rows(table)
    fs = select_features(Standardizer.fit(X).transform(X), y, trials=trials, subset_size=target,
                         seed=seed, names=table.names)
    fs.save(out, manifest=manifest_name)
    return fs


def _selected(table, features_path):
    if features_path is None:
        return table.names, "all"
    return FeatureSet.load(features_path).names, Path(features_path).stem


def stage_train(feats, features_path, hidden, epochs, seed, out, manifest_name=None):
    table = read_feature_csv(feats)
    names, _ = _selected(table, features_path)
    X, y = labelled_rows(table, names)
    std = Standardizer.fit(X)
    config = MlpConfig(hidden_layers=hidden, epochs=epochs, seed=seed)
    model = train(std.transform(X), y, config, standardizer=std, feature_names=list(names))
    model.save(out, manifest=manifest_name)
    return model


def stage_eval(feats, features_path, hidden, epochs, k, seed, out=None, text=None,
               manifest_name=None, dataset=""):
    table = read_feature_csv(feats)
    names, label = _selected(table, features_path)
    X, y = labelled_rows(table, names)
    config = MlpConfig(hidden_layers=hidden, epochs=epochs, seed=seed)
    report = kfold_cv(X, y, k, config, seed, features=label, dataset=dataset)
    if out:
        write_report(report, out, text, manifest=manifest_name)
    return report


def stage_report(feats, top, svg=None, csv_out=None):
    table = read_feature_csv(feats)
    X, y = labelled_rows(table)
    Xs = Standardizer.fit(X).transform(X)
    rep = feature_class_report(Xs, y, table.names, top)
    if svg:
        Path(svg).write_text(parallel_coordinates_svg(rep.parallel), encoding="utf-8")
    if csv_out:
        rep.write_csv(csv_out)
    return rep


# -- command handlers ---------------------------------------------------------

def cmd_simulate(args):
    m = Manifest("simulate", vars(args), args.seed)
    stage_simulate(args.terms, args.seed, args.rate, args.out, args.posts, args.user_rate,
                   args.days, args.resources, args.snapshots, m)
    m.write(manifest_path(args.out))


def cmd_decode(args):
    m = Manifest("decode", vars(args))
    statuses = decode_snapshots(read_snapshots(args.snapshots))
    corpus = apply_statuses(ingest(args.posts), statuses)
    write_corpus(corpus, m.output(args.out))
    m.write(manifest_path(args.out))


def cmd_ingest(args):
    m = Manifest("ingest", vars(args), args.seed if args.balance else None)
    corpus = ingest(args.inp)
    if args.balance:
        corpus = balance(corpus, args.seed)
    write_corpus(corpus, m.output(args.out))
    for topic, c, u in topic_summary(corpus):
        print(f"{topic}\t{c}\t{u}")
    m.write(manifest_path(args.out))


def cmd_extract(args):
    m = Manifest("extract", vars(args), args.seed)
    stage_extract(args.corpus, args.resources, args.out, args.balance, args.seed, m)
    m.write(manifest_path(args.out))


def cmd_select(args):
    m = Manifest("select", vars(args), args.seed)
    mp = manifest_path(args.out)
    fs = stage_select(args.feats, args.target, args.trials, args.seed, m.output(args.out), mp.name)
    print(f"selected {len(fs.names)} features")
    m.write(mp)


def cmd_train(args):
    m = Manifest("train", vars(args), args.seed)
    mp = manifest_path(args.out)
    stage_train(args.feats, args.features, args.hidden, args.epochs, args.seed,
                m.output(args.out), mp.name)
    m.write(mp)


def cmd_eval(args):
    m = Manifest("eval", vars(args), args.seed)
    out = args.out
    mp = manifest_path(out) if out else None
    if out:
        m.output(out)
    if args.text:
        m.output(args.text)
    report = stage_eval(args.feats, args.features, args.hidden, args.epochs, args.k, args.seed,
                        out, args.text, mp.name if mp else None)
    sys.stdout.write(report.table())
    if mp:
        m.write(mp)


def cmd_report(args):
    m = Manifest("report", vars(args))
    for p in (args.svg, args.csv):
        if p:
            m.output(p)
    rep = stage_report(args.feats, args.top, args.svg, args.csv)
    for i, (name, c, u, d) in enumerate(rep.rows, 1):
        print(f"{i:2d}  {name:40s} censored={c:+.3f} uncensored={u:+.3f} diff={d:+.3f}")
    if args.svg or args.csv:
        m.write(manifest_path(args.svg or args.csv))


def cmd_kappa(args):
    kappa = fleiss_kappa(read_annotations(args.inp))
    print(f"fleiss_kappa\t{kappa:.4f}\t{kappa_interpretation(kappa)}")


PIPELINE_DEFAULTS = {
    "terms": None,
    "posts": 4000,
    "rate": 0.023,
    "user-rate": 0.05,
    "days": 30.0,
    "resources": "demo",
    "target": 20,
    "trials": 30,
    "hidden": "20,20,20",
    "epochs": 800,
    "k": 10,
    "top": 10,
    "out-dir": "run",
}


def cmd_pipeline(args):
    config_path = Path(args.config)
    cfg = dict(PIPELINE_DEFAULTS)
    cfg.update(tomllib.loads(config_path.read_text(encoding="utf-8")))
    unknown = set(cfg) - set(PIPELINE_DEFAULTS) - {"seed", "sweep"}
    if unknown:
        raise ValueError(f"{config_path}: unknown config keys {sorted(unknown)}")
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    base = config_path.parent

    def rel(p):
        return None if p is None else str(p) if Path(p).is_absolute() else str(base / p)

    out_dir = Path(args.out_dir) if args.out_dir else Path(rel(cfg["out-dir"]))
    out_dir.mkdir(parents=True, exist_ok=True)
    terms = rel(cfg["terms"]) if cfg["terms"] else str(demo_resource_dir() / "terms.txt")
    resources = cfg["resources"] if cfg["resources"] == "demo" else rel(cfg["resources"])
    m = Manifest("pipeline", {**cfg, "config_file": str(config_path)}, seed)
    mname = "manifest.json"

    raw = out_dir / "collected.jsonl"
    stage_simulate(terms, seed, float(cfg["rate"]), m.output(raw), int(cfg["posts"]),
                   float(cfg["user-rate"]), float(cfg["days"]), resources,
                   m.output(out_dir / "snapshots.jsonl"), m)
    balanced = out_dir / "corpus.jsonl"
    write_corpus(balance(ingest(raw).labelled(), seed), m.output(balanced))
    feats = out_dir / "features.csv"
    stage_extract(balanced, resources, m.output(feats), manifest=None)
    m.resources(Resources.load(resolve_resources(resources)))
    bfs = out_dir / "bfs.json"
    stage_select(feats, int(cfg["target"]), int(cfg["trials"]), seed, m.output(bfs), mname)
    hidden = parse_hidden(cfg["hidden"])
    stage_train(feats, bfs, hidden, int(cfg["epochs"]), seed, m.output(out_dir / "model.json"), mname)
    runs = cfg.get("sweep") or [{}]
    for i, run in enumerate(runs):
        suffix = "" if len(runs) == 1 else f"_{i}"
        report = stage_eval(feats, bfs, parse_hidden(run.get("hidden", hidden)),
                            int(run.get("epochs", cfg["epochs"])), int(cfg["k"]), seed,
                            m.output(out_dir / f"report{suffix}.json"),
                            m.output(out_dir / f"report{suffix}.txt"), mname, dataset="scraped")
        sys.stdout.write(report.table())
    stage_report(feats, int(cfg["top"]), m.output(out_dir / "features_top.svg"),
                 m.output(out_dir / "features_top.csv"))
    m.write(out_dir / mname)


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="censorlens", description=__doc__)
    parser.add_argument("--version", action="version", version=f"censorlens {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="collect a corpus from the offline platform simulator")
    p.add_argument("--terms", required=True, help="search terms file (term<TAB>topic)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--rate", type=float, default=0.023, help="fraction of posts the platform censors")
    p.add_argument("--user-rate", type=float, default=0.05, help="fraction deleted by their authors")
    p.add_argument("--posts", type=int, default=1000)
    p.add_argument("--days", type=float, default=30.0, help="publication window in days")
    p.add_argument("--resources", default="demo", help="resource directory for post text")
    p.add_argument("--snapshots", help="also write the check log here")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("decode", help="label posts from a front-end/API snapshot log")
    p.add_argument("--snapshots", required=True)
    p.add_argument("--posts", required=True, help="corpus file with the posts to label")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("ingest", help="validate, filter and dedupe a corpus file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--balance", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("extract", help="compute the feature matrix")
    p.add_argument("--corpus", required=True)
    p.add_argument("--resources", required=True, help="resource directory, or 'demo'")
    p.add_argument("--out", required=True)
    p.add_argument("--balance", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("select", help="random-subset feature selection")
    p.add_argument("--feats", required=True)
    p.add_argument("--target", type=int, default=77)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_select)

    for name, hidden, helptext in (("train", "20,20,20", "train an MLP on all rows"),
                                   ("eval", "60,60,60", "k-fold cross-validation")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--feats", required=True)
        p.add_argument("--features", help="feature set JSON (default: all columns)")
        p.add_argument("--hidden", type=parse_hidden, default=parse_hidden(hidden))
        p.add_argument("--epochs", type=int, default=800)
        p.add_argument("--seed", type=int, required=True)
        if name == "train":
            p.add_argument("--out", required=True)
            p.set_defaults(func=cmd_train)
        else:
            p.add_argument("--k", type=int, default=10)
            p.add_argument("--out", help="JSON report path")
            p.add_argument("--text", help="text table path")
            p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="features with the largest class-mean differences")
    p.add_argument("--feats", required=True)
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--svg")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("kappa", help="Fleiss' kappa of an annotation batch")
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("pipeline", help="simulate, extract, select, train and evaluate")
    p.add_argument("--config", required=True, help="TOML file; keys are the flag names")
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_pipeline)
    return parser


STAGE_ERRORS = (CorpusError, DecodeError, ResourceError, TrainingError, KappaUndefined,
                ValueError, KeyError, OSError)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except STAGE_ERRORS as exc:
        print(f"censorlens {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
