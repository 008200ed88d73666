"""Per-corpus network reports, two-corpus comparison, and exports.

Reports serialize to canonical JSON (sorted keys, fixed indent, no
timestamps) so a rerun with the same inputs and seed is byte-identical.
Exports cover GEXF 1.3 for external visualization plus CSV node/edge
tables.
"""

from __future__ import annotations

import csv
import hashlib
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import semnet
from semnet.cooccur import GraphBuildConfig, SemanticGraph, build_graph, count_cooccurrences
from semnet.errors import (
    CorpusCorruptionError,
    EmptyCorpusError,
    UndefinedMetricError,
)
from semnet.ingest import CorpusManifest, RawReview
from semnet.metrics import (
    CentralityTable,
    CommunityPartition,
    average_path_length,
    betweenness_centrality,
    bridging_concepts,
    degree_centrality,
    density,
    louvain,
    modularity_of,
)
from semnet.sentiment import (
    IdentityTermSet,
    SentimentLexicon,
    community_sentiment,
    default_identity_sets,
    identity_alignment,
)
from semnet.textpipe import Document, PipelineConfig, clean_document

REPORT_SCHEMA_VERSION = 1
COMPARISON_SCHEMA_VERSION = 1
DEFAULT_TOP_K = 25

NETWORK_TYPE_RULE = (
    "higher density and shorter average path length -> 'Highly Interconnected'; "
    "higher modularity -> 'Compartmentalized' (suppressed when the same network "
    "already qualified as highly interconnected); ties leave labels absent. "
    "Interpretive rule, not a published criterion."
)

_METRIC_NAMES = ("density", "average_path_length", "modularity")


def canonical_json(obj) -> str:
    """Stable serialization: sorted keys, two-space indent, UTF-8."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=2) + "\n"


def _fingerprint(lines: Sequence[str]) -> dict:
    """Content hash of an effective config, independent of file paths."""
    blob = "\n".join(lines).encode("utf-8")
    return {"entries": len(lines), "sha256": hashlib.sha256(blob).hexdigest()}


def config_fingerprints(
    pipeline_config: PipelineConfig,
    sentiment_lexicon: SentimentLexicon,
    identity_sets: Sequence[IdentityTermSet],
) -> dict:
    return {
        "standard_stoplist": _fingerprint(sorted(pipeline_config.standard_stoplist)),
        "technical_stoplist": _fingerprint(sorted(pipeline_config.technical_stoplist)),
        "conflation_lexicon": _fingerprint(
            [f"{k} {v}" for k, v in sorted(pipeline_config.conflation_lexicon.items())]
        ),
        "sentiment_lexicon": _fingerprint(
            [f"{k}\t{v!r}" for k, v in sorted(sentiment_lexicon.entries.items())]
        ),
        "identity_sets": _fingerprint(
            [f"{s.name}: {', '.join(sorted(s.terms))}" for s in identity_sets]
        ),
    }


@dataclass
class NetworkReport:
    """Everything the comparator and the exports need about one corpus."""

    corpus: dict
    config: dict
    vertices: int
    edges: int
    density: float | None
    average_path_length: float | None
    modularity: float | None
    community_count: int
    undefined: dict
    metric_modes: dict
    degree_top: list
    betweenness_top: list
    bridging: list
    community_sentiment: dict
    identity_alignment: list
    provenance: dict

    def to_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "provenance": self.provenance,
            "corpus": self.corpus,
            "config": self.config,
            "graph": {"vertices": self.vertices, "edges": self.edges},
            "metrics": {
                "density": self.density,
                "average_path_length": self.average_path_length,
                "modularity": self.modularity,
                "community_count": self.community_count,
            },
            "undefined": self.undefined,
            "metric_modes": self.metric_modes,
            "degree_top": self.degree_top,
            "betweenness_top": self.betweenness_top,
            "bridging_concepts": self.bridging,
            "community_sentiment": self.community_sentiment,
            "identity_alignment": self.identity_alignment,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "NetworkReport":
        try:
            if doc["schema_version"] != REPORT_SCHEMA_VERSION:
                raise CorpusCorruptionError(
                    f"unsupported report schema_version {doc['schema_version']!r}"
                )
            metrics = doc["metrics"]
            return cls(
                corpus=doc["corpus"],
                config=doc["config"],
                vertices=doc["graph"]["vertices"],
                edges=doc["graph"]["edges"],
                density=metrics["density"],
                average_path_length=metrics["average_path_length"],
                modularity=metrics["modularity"],
                community_count=metrics["community_count"],
                undefined=doc["undefined"],
                metric_modes=doc["metric_modes"],
                degree_top=doc["degree_top"],
                betweenness_top=doc["betweenness_top"],
                bridging=doc["bridging_concepts"],
                community_sentiment=doc["community_sentiment"],
                identity_alignment=doc["identity_alignment"],
            )
        except (KeyError, TypeError) as exc:
            raise CorpusCorruptionError(f"incomplete network report: {exc}")


@dataclass
class AnalysisResult:
    """Report plus the intermediate artifacts exports are built from."""

    documents: list[Document]
    graph: SemanticGraph
    partition: CommunityPartition | None
    degree: CentralityTable
    betweenness: CentralityTable
    report: NetworkReport


def analyze_corpus(
    reviews: Sequence[RawReview],
    manifest: CorpusManifest,
    *,
    pipeline_config: PipelineConfig | None = None,
    graph_config: GraphBuildConfig | None = None,
    sentiment_lexicon: SentimentLexicon | None = None,
    identity_sets: Sequence[IdentityTermSet] | None = None,
    seed: int = 0,
    resolution: float = 1.0,
    top_k: int = DEFAULT_TOP_K,
    modularity_weighted: bool = True,
) -> AnalysisResult:
    """Run clean -> graph -> metrics -> sentiment over one corpus."""
    pipeline_config = pipeline_config or PipelineConfig.default()
    graph_config = graph_config or GraphBuildConfig()
    sentiment_lexicon = sentiment_lexicon or SentimentLexicon.default()
    identity_sets = list(identity_sets) if identity_sets is not None else default_identity_sets()

    documents = [clean_document(review, pipeline_config) for review in reviews]
    documents = [doc for doc in documents if doc.sentences]
    if not documents:
        raise EmptyCorpusError(
            "no review survived cleaning; nothing to analyze "
            f"(started from {len(reviews)} reviews)"
        )

    counts = count_cooccurrences(documents, graph_config.window_sentences)
    graph = build_graph(counts, graph_config)

    undefined: dict[str, str] = {}

    def _try(metric_name, fn):
        try:
            return fn()
        except UndefinedMetricError as exc:
            undefined[metric_name] = str(exc)
            return None

    graph_density = _try("density", lambda: density(graph))
    path_length = _try("average_path_length", lambda: average_path_length(graph))

    partition = None
    if graph.vertex_count > 0 and graph.edge_count > 0:
        partition = louvain(graph, resolution=resolution, seed=seed, weighted=modularity_weighted)
        modularity = partition.modularity
        community_count = partition.community_count
    else:
        undefined["modularity"] = "graph has no edges to partition"
        modularity = None
        community_count = 0

    degree = degree_centrality(graph)
    betweenness = betweenness_centrality(graph)

    bridging = []
    sentiment_by_community: dict = {}
    if partition is not None:
        bridging = [
            {"lemma": lemma, "betweenness": score, "communities": list(communities)}
            for lemma, score, communities in bridging_concepts(graph, partition, top_k)
        ]
        sentiment_by_community = {
            str(community): {"mean_valence": mean, "support": support}
            for community, (mean, support) in community_sentiment(
                documents, graph, partition, sentiment_lexicon
            ).items()
        }

    alignment = [
        {"name": row.name, "matching_docs": row.matching_docs, "mean_valence": row.mean_valence}
        for row in identity_alignment(documents, identity_sets, sentiment_lexicon)
    ]

    def _top(table: CentralityTable) -> list:
        return [
            {"lemma": graph.lemmas[v], "score": table.scores[v]} for v in table.ranking[:top_k]
        ]

    config_echo = {
        "window_sentences": graph_config.window_sentences,
        "min_node_freq": graph_config.min_node_freq,
        "min_edge_weight": graph_config.min_edge_weight,
        "min_token_len": pipeline_config.min_token_len,
        "seed": seed,
        "resolution": resolution,
        "top_k": top_k,
        "modularity_weighted": modularity_weighted,
        "data": config_fingerprints(pipeline_config, sentiment_lexicon, identity_sets),
    }
    report = NetworkReport(
        corpus={
            "app_id": manifest.app_id,
            "collection_window": list(manifest.collection_window),
            "filter_min_chars": manifest.filter_min_chars,
            "review_count_raw": manifest.review_count_raw,
            "review_count_validated": manifest.review_count_validated,
            "document_count": len(documents),
        },
        config=config_echo,
        vertices=graph.vertex_count,
        edges=graph.edge_count,
        density=graph_density,
        average_path_length=path_length,
        modularity=modularity,
        community_count=community_count,
        undefined=undefined,
        metric_modes={
            "average_path_length": "unweighted hop distance over the largest connected component",
            "betweenness": "unweighted shortest paths, unnormalized, endpoints excluded",
            "degree": "unweighted",
            "modularity": "weighted" if modularity_weighted else "unweighted",
            "community_detection": f"louvain seed={seed} resolution={resolution!r}",
        },
        degree_top=_top(degree),
        betweenness_top=_top(betweenness),
        bridging=bridging,
        community_sentiment=sentiment_by_community,
        identity_alignment=alignment,
        provenance={"tool": "semnet", "version": semnet.__version__},
    )
    return AnalysisResult(
        documents=documents,
        graph=graph,
        partition=partition,
        degree=degree,
        betweenness=betweenness,
        report=report,
    )


def build_report(reviews, manifest, **kwargs) -> NetworkReport:
    """analyze_corpus, keeping only the report."""
    return analyze_corpus(reviews, manifest, **kwargs).report


@dataclass
class ComparativeReport:
    a_summary: dict
    b_summary: dict
    deltas: dict
    relative_density: dict
    network_types: dict

    def to_dict(self) -> dict:
        return {
            "schema_version": COMPARISON_SCHEMA_VERSION,
            "a": self.a_summary,
            "b": self.b_summary,
            "deltas": self.deltas,
            "relative_density": self.relative_density,
            "network_types": self.network_types,
        }


def _metric_summary(report: NetworkReport) -> dict:
    return {
        "app_id": report.corpus.get("app_id"),
        "vertices": report.vertices,
        "edges": report.edges,
        "density": report.density,
        "average_path_length": report.average_path_length,
        "modularity": report.modularity,
        "community_count": report.community_count,
    }


def compare(a: NetworkReport, b: NetworkReport) -> ComparativeReport:
    """Side-by-side deltas plus the headline relative-density figure.

    Deltas are a minus b; the relative density difference is
    (d_a - d_b) / d_b, reported at full precision and rounded to whole
    percent for the headline.  Undefined metrics yield None deltas.
    """
    deltas = {}
    for name in _METRIC_NAMES:
        va, vb = getattr(a, name), getattr(b, name)
        deltas[name] = None if va is None or vb is None else va - vb

    if a.density is not None and b.density is not None and b.density > 0:
        fraction = (a.density - b.density) / b.density
        relative = {
            "fraction": fraction,
            "percent": fraction * 100.0,
            "percent_rounded": round(fraction * 100.0),
        }
    else:
        relative = {"fraction": None, "percent": None, "percent_rounded": None}

    labels = _network_type_labels(a, b)
    return ComparativeReport(
        a_summary=_metric_summary(a),
        b_summary=_metric_summary(b),
        deltas=deltas,
        relative_density=relative,
        network_types={"a": labels[0], "b": labels[1], "rule": NETWORK_TYPE_RULE},
    )


def _network_type_labels(a: NetworkReport, b: NetworkReport) -> tuple[str | None, str | None]:
    interconnected = None
    if None not in (a.density, b.density, a.average_path_length, b.average_path_length):
        if a.density > b.density and a.average_path_length < b.average_path_length:
            interconnected = 0
        elif b.density > a.density and b.average_path_length < a.average_path_length:
            interconnected = 1
    compartmentalized = None
    if None not in (a.modularity, b.modularity):
        if a.modularity > b.modularity:
            compartmentalized = 0
        elif b.modularity > a.modularity:
            compartmentalized = 1
    labels: list[str | None] = [None, None]
    if interconnected is not None:
        labels[interconnected] = "Highly Interconnected"
    if compartmentalized is not None and compartmentalized != interconnected:
        labels[compartmentalized] = "Compartmentalized"
    return labels[0], labels[1]


def _fmt(value, spec: str) -> str:
    return "n/a" if value is None else format(value, spec)


def format_comparison_table(comparison: ComparativeReport, label_a: str = "A", label_b: str = "B") -> str:
    """Human-readable comparison in the style of a topology metrics table."""
    a, b = comparison.a_summary, comparison.b_summary
    deltas = comparison.deltas
    types = comparison.network_types
    width = max(20, len(label_a) + 2, len(label_b) + 2)
    rows = [
        ("metric", label_a, label_b, f"delta ({label_a}-{label_b})"),
        (
            "graph density",
            _fmt(a["density"], ".3f"),
            _fmt(b["density"], ".3f"),
            _fmt(deltas["density"], ".3f"),
        ),
        (
            "avg. path length",
            _fmt(a["average_path_length"], ".2f"),
            _fmt(b["average_path_length"], ".2f"),
            _fmt(deltas["average_path_length"], ".2f"),
        ),
        (
            "modularity",
            _fmt(a["modularity"], ".2f"),
            _fmt(b["modularity"], ".2f"),
            _fmt(deltas["modularity"], ".2f"),
        ),
        (
            "network type",
            types["a"] or "-",
            types["b"] or "-",
            "",
        ),
    ]
    lines = ["".join(f"{cell:<{width + 4}}" for cell in row).rstrip() for row in rows]
    lines.append(_headline(comparison, label_a, label_b))
    return "\n".join(lines)


def _headline(comparison: ComparativeReport, label_a: str, label_b: str) -> str:
    pct = comparison.relative_density["percent_rounded"]
    if pct is None:
        return "relative density difference: undefined"
    if pct > 0:
        return f"relative density: {label_a} ≈{pct}% higher than {label_b}"
    if pct < 0:
        return f"relative density: {label_a} ≈{-pct}% lower than {label_b}"
    return f"relative density: {label_a} ≈0% difference from {label_b}"


def export_json(report: NetworkReport, path) -> None:
    Path(path).write_text(canonical_json(report.to_dict()), encoding="utf-8")


def load_report(path) -> NetworkReport:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise CorpusCorruptionError(f"{path}: bad report JSON ({exc})")
    return NetworkReport.from_dict(doc)


def export_comparison(comparison: ComparativeReport, path) -> None:
    Path(path).write_text(canonical_json(comparison.to_dict()), encoding="utf-8")


def export_gexf(
    graph: SemanticGraph,
    partition: CommunityPartition | None,
    centralities: Mapping[str, CentralityTable],
    path,
) -> None:
    """GEXF 1.3 with frequency/community/centrality node attributes.

    No timestamps are written, so identical inputs give identical
    bytes.
    """
    root = ET.Element("gexf", {"xmlns": "http://gexf.net/1.3", "version": "1.3"})
    meta = ET.SubElement(root, "meta")
    ET.SubElement(meta, "creator").text = f"semnet {semnet.__version__}"
    graph_el = ET.SubElement(root, "graph", {"defaultedgetype": "undirected"})
    attributes = ET.SubElement(graph_el, "attributes", {"class": "node"})

    attr_defs = [("frequency", "integer")]
    if partition is not None:
        attr_defs.append(("community", "integer"))
    for name in sorted(centralities):
        attr_defs.append((name, "double"))
    attr_ids = {}
    for i, (title, kind) in enumerate(attr_defs):
        attr_ids[title] = str(i)
        ET.SubElement(attributes, "attribute", {"id": str(i), "title": title, "type": kind})

    nodes_el = ET.SubElement(graph_el, "nodes")
    for v in range(graph.vertex_count):
        node_el = ET.SubElement(nodes_el, "node", {"id": str(v), "label": graph.lemmas[v]})
        values = ET.SubElement(node_el, "attvalues")
        ET.SubElement(
            values, "attvalue", {"for": attr_ids["frequency"], "value": str(graph.frequencies[v])}
        )
        if partition is not None:
            ET.SubElement(
                values,
                "attvalue",
                {"for": attr_ids["community"], "value": str(partition.assignment[v])},
            )
        for name in sorted(centralities):
            ET.SubElement(
                values,
                "attvalue",
                {"for": attr_ids[name], "value": repr(float(centralities[name].scores[v]))},
            )
    edges_el = ET.SubElement(graph_el, "edges")
    for i, ((a, b), weight) in enumerate(sorted(graph.edges.items())):
        ET.SubElement(
            edges_el,
            "edge",
            {"id": str(i), "source": str(a), "target": str(b), "weight": str(weight)},
        )
    tree = ET.ElementTree(root)
    ET.indent(tree, space="  ")
    tree.write(path, encoding="utf-8", xml_declaration=True)


NODES_CSV_COLUMNS = ["lemma", "id", "frequency", "community", "degree", "betweenness"]
EDGES_CSV_COLUMNS = ["source", "target", "weight"]


def export_csv_tables(
    graph: SemanticGraph,
    partition: CommunityPartition | None,
    centralities: Mapping[str, CentralityTable],
    out_dir,
) -> tuple[Path, Path]:
    """Write nodes.csv and edges.csv into `out_dir`; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    nodes_path = out_dir / "nodes.csv"
    edges_path = out_dir / "edges.csv"
    degree = centralities.get("degree")
    betweenness = centralities.get("betweenness")
    with nodes_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(NODES_CSV_COLUMNS)
        for v in range(graph.vertex_count):
            writer.writerow(
                [
                    graph.lemmas[v],
                    v,
                    graph.frequencies[v],
                    "" if partition is None else partition.assignment[v],
                    "" if degree is None else int(degree.scores[v]),
                    "" if betweenness is None else repr(betweenness.scores[v]),
                ]
            )
    with edges_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EDGES_CSV_COLUMNS)
        for (a, b), weight in sorted(graph.edges.items()):
            writer.writerow([a, b, weight])
    return nodes_path, edges_path


def read_csv_tables(out_dir) -> SemanticGraph:
    """Rebuild a SemanticGraph from exported nodes.csv/edges.csv."""
    out_dir = Path(out_dir)
    with (out_dir / "nodes.csv").open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        rows = sorted(reader, key=lambda r: int(r["id"]))
    if [int(r["id"]) for r in rows] != list(range(len(rows))):
        raise CorpusCorruptionError("nodes.csv ids are not dense")
    lemmas = tuple(r["lemma"] for r in rows)
    frequencies = tuple(int(r["frequency"]) for r in rows)
    edges = {}
    with (out_dir / "edges.csv").open("r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            a, b, weight = int(row["source"]), int(row["target"]), int(row["weight"])
            key = (a, b) if a < b else (b, a)
            edges[key] = weight
    return SemanticGraph(lemmas=lemmas, frequencies=frequencies, edges=edges)
