"""Command line interface: ``akem {build-kb,train,link,evaluate,features}``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .candidates import DEFAULT_FUZZY_THRESHOLD, DEFAULT_MAX_HITS
from .embeddings import SimilarityMode
from .errors import AkemError
from .evaluation import evaluate
from .features import FEATURE_NAMES, format_feature_row
from .filtering import DEFAULT_ALPHA, DEFAULT_K, FilterParams
from .io import read_labeled, read_links, read_queries
from .kb import build_alias_dictionary, load_kb
from .modelio import save_model
from .pipeline import load_context, run_link
from .scoring import MartParams, SvrParams, build_training_set, train_bundle

logger = logging.getLogger("akem")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

GLOBAL_DEFAULTS = {
    "seed": 42,
    "alpha": DEFAULT_ALPHA,
    "k": DEFAULT_K,
    "fuzzy_threshold": DEFAULT_FUZZY_THRESHOLD,
    "max_hits": DEFAULT_MAX_HITS,
    "sim2_mode": SimilarityMode.COSINE.value,
    "verbose": 0,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_global_flags(parser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    g = parser.add_argument_group("pipeline options")
    g.add_argument("--seed", type=int, default=default, help="training seed (default 42)")
    g.add_argument("--alpha", type=float, default=default, help="cumulative score threshold (default 0.3)")
    g.add_argument("--k", type=int, default=default, help="candidates considered per mention (default 3)")
    g.add_argument("--fuzzy-threshold", type=float, default=default,
                   help="minimum bigram Jaccard for fuzzy candidates (default 0.5)")
    g.add_argument("--max-hits", type=int, default=default, help="candidates retrieved per mention (default 10)")
    g.add_argument("--sim2-mode", choices=[m.value for m in SimilarityMode], default=default,
                   help="embedding similarity: cosine, or paper (dot product over the sum of norms)")
    g.add_argument("-v", "--verbose", action="count", default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="akem", description="Entity recognition and linking for short queries.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("build-kb", help="dump the expanded alias dictionary")
    _add_global_flags(p, suppress=True)
    p.add_argument("--kb", required=True, help="knowledge base triple TSV")
    p.add_argument("--out", help="output TSV (default stdout)")

    p = sub.add_parser("train", help="train the SVR and MART scorers")
    _add_global_flags(p, suppress=True)
    p.add_argument("--labeled", required=True, help="TSV: query_id, query, gold_entity_id")
    p.add_argument("--kb", required=True)
    p.add_argument("--embeddings", help="word vectors in text format")
    p.add_argument("--out", required=True, help="model bundle to write")
    p.add_argument("--svr-c", type=float, default=SvrParams.C)
    p.add_argument("--svr-epsilon", type=float, default=SvrParams.epsilon)
    p.add_argument("--svr-epochs", type=int, default=SvrParams.epochs)
    p.add_argument("--trees", type=int, default=MartParams.n_trees)
    p.add_argument("--depth", type=int, default=MartParams.max_depth)
    p.add_argument("--min-leaf", type=int, default=MartParams.min_leaf)
    p.add_argument("--learning-rate", type=float, default=MartParams.learning_rate)

    p = sub.add_parser("link", help="link queries to entities")
    _add_global_flags(p, suppress=True)
    p.add_argument("--kb", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--model", required=True, help="model bundle from 'train'")
    p.add_argument("--queries", required=True, help="TSV: query_id, query")
    p.add_argument("--out", help="output TSV (default stdout)")
    p.add_argument("--workers", type=int, default=1, help="threads used for linking")

    p = sub.add_parser("evaluate", help="score predicted links against gold")
    _add_global_flags(p, suppress=True)
    p.add_argument("--gold", required=True, help="TSV: query_id, mention, entity_id")
    p.add_argument("--pred", required=True, help="TSV: query_id, mention, entity_id")
    p.add_argument("--per-query", action="store_true", help="also print per-query P/R/F1")

    p = sub.add_parser("features", help="dump candidate feature vectors")
    _add_global_flags(p, suppress=True)
    p.add_argument("--kb", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--queries", required=True)
    p.add_argument("--out")
    return parser


def _resolve(args) -> argparse.Namespace:
    for key, default in GLOBAL_DEFAULTS.items():
        if getattr(args, key, None) is None:
            setattr(args, key, default)
    return args


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _filter_params(args) -> FilterParams:
    try:
        return FilterParams(alpha=args.alpha, k=args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _context(args):
    return load_context(args.kb, args.embeddings, mode=args.sim2_mode,
                        fuzzy_threshold=args.fuzzy_threshold, max_hits=args.max_hits)


def cmd_build_kb(args) -> int:
    aliases = build_alias_dictionary(load_kb(args.kb))
    _emit("".join(line + "\n" for line in aliases.dump_lines()), args.out)
    return EXIT_OK


def cmd_train(args) -> int:
    try:
        svr_params = SvrParams(C=args.svr_c, epsilon=args.svr_epsilon, epochs=args.svr_epochs, seed=args.seed)
        mart_params = MartParams(n_trees=args.trees, max_depth=args.depth, min_leaf=args.min_leaf,
                                 learning_rate=args.learning_rate, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ctx = _context(args)
    examples, report = build_training_set(read_labeled(args.labeled), ctx)
    print(report.summary(), file=sys.stderr)
    for qid, eid in report.missed:
        logger.info("gold link never retrieved: %s -> %s", qid, eid)
    bundle = train_bundle(examples, svr_params, mart_params)
    save_model(args.out, bundle)
    print(f"trained on {len(examples)} examples; wrote {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_link(args) -> int:
    params = _filter_params(args)
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    text = run_link(args.kb, args.embeddings, args.model, args.queries, params,
                    mode=args.sim2_mode, fuzzy_threshold=args.fuzzy_threshold,
                    max_hits=args.max_hits, workers=args.workers)
    _emit(text, args.out)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    report = evaluate(read_links(args.gold), read_links(args.pred))
    lines = [report.format()]
    if args.per_query:
        lines.append("query_id\tprecision\trecall\tf1")
        lines.extend(f"{q}\t{p:.4f}\t{r:.4f}\t{f:.4f}" for q, (p, r, f) in report.per_query.items())
    print("\n".join(lines))
    return EXIT_OK


def cmd_features(args) -> int:
    ctx = _context(args)
    rows = ["query_id\tmention\tentity_id\t" + "\t".join(FEATURE_NAMES)]
    for qid, query in sorted(read_queries(args.queries), key=lambda q: q[0]):
        for ref, fv in ctx.featurize(query):
            rows.append(format_feature_row(qid, ref, fv))
    _emit("".join(r + "\n" for r in rows), args.out)
    return EXIT_OK


COMMANDS = {
    "build-kb": cmd_build_kb,
    "train": cmd_train,
    "link": cmd_link,
    "evaluate": cmd_evaluate,
    "features": cmd_features,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _resolve(parser.parse_args(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"akem: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        name = exc.filename if exc.filename is not None else ""
        print(f"akem: error: {name}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_DATA
    except AkemError as exc:
        print(f"akem: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
