"""Command-line pipeline: fetch -> clean -> graph -> analyze -> compare -> export.

Stages hand off through files (corpus JSONL, document store, graph
JSON, report JSON) so any stage can be rerun with different settings
without refetching.  Every primary output embeds a provenance block
with the resolved configuration and seed.

Exit codes: 0 success, 1 usage error, 2 data error, 3 network/IO error.
"""

from __future__ import annotations

import argparse
import datetime
import logging
import sys
from pathlib import Path

import requests

import semnet
from semnet.cooccur import GraphBuildConfig, build_graph, count_cooccurrences, read_graph, write_graph
from semnet.errors import DataError, RetriableFetchError
from semnet.ingest import (
    CorpusManifest,
    fetch_reviews,
    filter_substantive,
    load_corpus,
    manifest_path_for,
    persist_corpus,
)
from semnet.metrics import betweenness_centrality, degree_centrality, louvain
from semnet.report import (
    analyze_corpus,
    compare,
    export_comparison,
    export_csv_tables,
    export_gexf,
    export_json,
    format_comparison_table,
    load_report,
)
from semnet.sentiment import SentimentLexicon, default_identity_sets, load_identity_sets
from semnet.textpipe import (
    PipelineConfig,
    builtin_data_path,
    clean_document,
    load_conflation_lexicon,
    load_stoplist,
    read_documents,
    write_documents,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

log = logging.getLogger("semnet")


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; our contract reserves 2 for data errors
    def error(self, message):
        raise _UsageError(message)


def _parse_when(value: str) -> int:
    """Accept a UNIX timestamp or an ISO date (midnight UTC)."""
    try:
        return int(value)
    except ValueError:
        pass
    try:
        moment = datetime.datetime.fromisoformat(value)
    except ValueError:
        raise _UsageError(f"cannot parse time {value!r}; use UNIX seconds or YYYY-MM-DD")
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=datetime.timezone.utc)
    return int(moment.timestamp())


def _require_input(path: str, stage: str, produced_by: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise DataError(
            f"stage '{stage}' is missing its input {path!r}; run 'semnet {produced_by}' first"
        )
    return p


def _pipeline_config(args) -> PipelineConfig:
    standard = load_stoplist(args.stoplist or builtin_data_path("standard_stopwords.txt"))
    technical = load_stoplist(
        args.technical_stoplist or builtin_data_path("technical_stopwords.txt")
    )
    conflation = load_conflation_lexicon(
        args.conflation or builtin_data_path("conflation_lexicon.txt")
    )
    return PipelineConfig(
        standard_stoplist=standard,
        technical_stoplist=technical,
        conflation_lexicon=conflation,
        min_token_len=args.min_token_len,
    )


def _graph_config(args) -> GraphBuildConfig:
    return GraphBuildConfig(
        window_sentences=args.window,
        min_node_freq=args.min_node_freq,
        min_edge_weight=args.min_edge_weight,
    )


def _provenance(args, keys) -> dict:
    config = {key: getattr(args, key) for key in keys}
    return {"tool": "semnet", "version": semnet.__version__, "config": config}


def _load_corpus_lenient(path: Path) -> tuple[CorpusManifest, list]:
    """Load a corpus; synthesize a manifest when the sidecar is absent.

    Lets `analyze` run on bare JSONL fixtures that were not produced by
    `semnet fetch`.
    """
    import json

    from semnet.errors import CorpusCorruptionError
    from semnet.ingest import RawReview

    if manifest_path_for(path).exists():
        return load_corpus(path)
    reviews = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                reviews.append(RawReview(**record))
            except (ValueError, TypeError) as exc:
                raise CorpusCorruptionError(f"{path}:{lineno}: bad review record ({exc})")
    if not reviews:
        raise CorpusCorruptionError(f"{path}: no reviews found")
    timestamps = [r.created_at for r in reviews]
    manifest = CorpusManifest(
        app_id=reviews[0].app_id,
        collection_window=[min(timestamps), max(timestamps)],
        filter_min_chars=0,
        review_count_raw=len(reviews),
        review_count_validated=len(reviews),
        provenance={"synthesized": "no manifest sidecar found"},
    )
    return manifest, reviews


def _cmd_fetch(args) -> int:
    window = (args.window_start, args.window_end)
    if window[0] > window[1]:
        raise _UsageError("--from must not be after --to")
    raw = list(
        fetch_reviews(
            args.app_id, window, language=args.language, page_limit=args.page_limit
        )
    )
    validated = [r for r in raw if filter_substantive(r, args.min_chars)]
    manifest = CorpusManifest(
        app_id=args.app_id,
        collection_window=list(window),
        filter_min_chars=args.min_chars,
        review_count_raw=len(raw),
        review_count_validated=len(validated),
        provenance=_provenance(
            args, ["app_id", "language", "min_chars", "page_limit"]
        ),
    )
    persist_corpus(validated, manifest, args.out)
    log.info("fetched %d reviews, kept %d substantive", len(raw), len(validated))
    print(f"wrote {len(validated)} reviews to {args.out}")
    return EXIT_OK


def _cmd_clean(args) -> int:
    corpus_path = _require_input(args.corpus, "clean", "fetch")
    _, reviews = _load_corpus_lenient(corpus_path)
    config = _pipeline_config(args)
    documents = [clean_document(review, config) for review in reviews]
    documents = [doc for doc in documents if doc.sentences]
    write_documents(
        documents,
        args.out,
        provenance=_provenance(args, ["corpus", "min_token_len", "stoplist", "technical_stoplist", "conflation"]),
    )
    print(f"wrote {len(documents)} cleaned documents to {args.out}")
    return EXIT_OK


def _cmd_graph(args) -> int:
    docs_path = _require_input(args.documents, "graph", "clean")
    documents = read_documents(docs_path)
    config = _graph_config(args)
    counts = count_cooccurrences(documents, config.window_sentences)
    graph = build_graph(counts, config)
    write_graph(
        graph,
        args.out,
        provenance=_provenance(args, ["documents", "window", "min_node_freq", "min_edge_weight"]),
    )
    print(f"wrote graph with {graph.vertex_count} nodes, {graph.edge_count} edges to {args.out}")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    corpus_path = _require_input(args.corpus, "analyze", "fetch")
    manifest, reviews = _load_corpus_lenient(corpus_path)
    result = analyze_corpus(
        reviews,
        manifest,
        pipeline_config=_pipeline_config(args),
        graph_config=_graph_config(args),
        sentiment_lexicon=SentimentLexicon.load(
            args.lexicon or builtin_data_path("sentiment_lexicon.tsv")
        ),
        identity_sets=(
            load_identity_sets(args.identity_sets) if args.identity_sets else default_identity_sets()
        ),
        seed=args.seed,
        resolution=args.resolution,
        top_k=args.top_k,
        modularity_weighted=not args.unweighted_modularity,
    )
    export_json(result.report, args.out)
    report = result.report
    print(f"wrote report to {args.out}")
    print(
        f"graph: {report.vertices} nodes, {report.edges} edges, "
        f"{report.community_count} communities"
    )
    return EXIT_OK


def _cmd_compare(args) -> int:
    report_a = load_report(_require_input(args.report_a, "compare", "analyze"))
    report_b = load_report(_require_input(args.report_b, "compare", "analyze"))
    comparison = compare(report_a, report_b)
    label_a, label_b = Path(args.report_a).stem, Path(args.report_b).stem
    if label_a == label_b:
        label_a, label_b = "A", "B"
    print(format_comparison_table(comparison, label_a, label_b))
    if args.out:
        export_comparison(comparison, args.out)
        print(f"wrote comparison to {args.out}")
    return EXIT_OK


def _cmd_export(args) -> int:
    graph = read_graph(_require_input(args.graph, "export", "graph"))
    partition = None
    if graph.vertex_count > 0 and graph.edge_count > 0:
        partition = louvain(
            graph,
            resolution=args.resolution,
            seed=args.seed,
            weighted=not args.unweighted_modularity,
        )
    centralities = {
        "degree": degree_centrality(graph),
        "betweenness": betweenness_centrality(graph),
    }
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    gexf_path = out_dir / "graph.gexf"
    export_gexf(graph, partition, centralities, gexf_path)
    nodes_path, edges_path = export_csv_tables(graph, partition, centralities, out_dir)
    print(f"wrote {gexf_path}, {nodes_path}, {edges_path}")
    return EXIT_OK


def _add_pipeline_flags(parser):
    parser.add_argument("--min-token-len", type=int, default=3, help="shortest token kept")
    parser.add_argument("--stoplist", help="standard stop-list file (default: bundled)")
    parser.add_argument(
        "--technical-stoplist", help="technical-noise stop-list file (default: bundled)"
    )
    parser.add_argument("--conflation", help="conflation lexicon file (default: bundled)")


def _add_graph_flags(parser):
    parser.add_argument("--window", type=int, default=3, help="sliding window size in sentences")
    parser.add_argument("--min-node-freq", type=int, default=5, help="minimum lemma frequency")
    parser.add_argument("--min-edge-weight", type=int, default=2, help="minimum edge weight")


def _add_analysis_flags(parser):
    parser.add_argument("--seed", type=int, default=0, help="seed for community detection")
    parser.add_argument("--resolution", type=float, default=1.0, help="modularity resolution")
    parser.add_argument("--top-k", type=int, default=25, help="rows in centrality tables")
    parser.add_argument(
        "--unweighted-modularity",
        action="store_true",
        help="treat every edge as weight 1 for community detection",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="semnet", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", help="collect reviews from the public endpoint")
    p.add_argument("--app-id", type=int, required=True)
    p.add_argument("--from", dest="window_start", type=_parse_when, required=True)
    p.add_argument("--to", dest="window_end", type=_parse_when, required=True)
    p.add_argument("--language", default="english")
    p.add_argument("--min-chars", type=int, default=50, help="substantive-content threshold")
    p.add_argument("--page-limit", type=int, default=100)
    p.add_argument("--out", required=True, help="corpus JSONL path")
    p.set_defaults(func=_cmd_fetch)

    p = sub.add_parser("clean", help="turn a corpus into cleaned documents")
    p.add_argument("--corpus", required=True)
    _add_pipeline_flags(p)
    p.add_argument("--out", required=True, help="document store JSON path")
    p.set_defaults(func=_cmd_clean)

    p = sub.add_parser("graph", help="build the co-occurrence graph")
    p.add_argument("--documents", required=True)
    _add_graph_flags(p)
    p.add_argument("--out", required=True, help="graph JSON path")
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("analyze", help="full pipeline: corpus to network report")
    p.add_argument("--corpus", required=True)
    _add_pipeline_flags(p)
    _add_graph_flags(p)
    _add_analysis_flags(p)
    p.add_argument("--lexicon", help="sentiment lexicon TSV (default: bundled)")
    p.add_argument("--identity-sets", help="identity term sets file (default: bundled)")
    p.add_argument("--out", required=True, help="report JSON path")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("compare", help="compare two network reports")
    p.add_argument("report_a")
    p.add_argument("report_b")
    p.add_argument("--out", help="optional comparison JSON path")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("export", help="export a graph as GEXF and CSV tables")
    p.add_argument("--graph", required=True)
    _add_analysis_flags(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help and friends
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (RetriableFetchError, requests.RequestException) as exc:
        print(f"network error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
