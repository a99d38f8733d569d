"""Autoregressive graph generation toolkit: sequence codecs, datasets,
rule-based baselines and MMD evaluation, backed by the C++ core."""

from graphgen._core import (  # noqa: F401
    Graph,
    ba_fit,
    ba_sample,
    bandwidth,
    betweenness_values,
    bfs_ordering,
    clustering_values,
    closeness_values,
    decode_dag,
    decode_sequence,
    degree_values,
    density,
    encode_directed,
    encode_sequence,
    er_fit,
    er_sample,
    estimate_m,
    evaluate,
    extract_ego,
    gen_community_small,
    gen_grid,
    gen_grid_small,
    orbit_counts,
    permute_adjacency,
    read_graphs,
    sample_from_checkpoint,
    split,
    topological_ordering,
    transitivity,
    write_graphs,
)

__all__ = [
    "Graph",
    "ba_fit",
    "ba_sample",
    "bandwidth",
    "betweenness_values",
    "bfs_ordering",
    "clustering_values",
    "closeness_values",
    "decode_dag",
    "decode_sequence",
    "degree_values",
    "density",
    "encode_directed",
    "encode_sequence",
    "er_fit",
    "er_sample",
    "estimate_m",
    "evaluate",
    "extract_ego",
    "gen_community_small",
    "gen_grid",
    "gen_grid_small",
    "orbit_counts",
    "permute_adjacency",
    "read_graphs",
    "sample_from_checkpoint",
    "split",
    "topological_ordering",
    "transitivity",
    "write_graphs",
]

__version__ = "0.1.0"
