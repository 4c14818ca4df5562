"""Python bindings for the fuel node-embedding library."""

import json

from ._core import (
    FuelError,
    Graph,
    Split,
    __version__,
    ari,
    calinski_harabasz,
    conv_bases,
    cs_closed_form,
    cs_monte_carlo,
    edge_homophily,
    gen_synthetic,
    kmeans,
    lcs_closed_form,
    load_dataset,
    make_graph,
    nmi,
    probe,
    save_dataset,
    train_step1,
    train_step2,
)
from . import _core


def embed(config):
    """Run both training steps from a config dict (same keys as ``fuel embed --config``).

    Returns ``(exit_code, report)``; artifacts go to ``config["output_dir"]``.
    """
    code, report = _core._embed(json.dumps(config))
    return code, json.loads(report)


def theory(n=5, n0=5, step=0.05, samples=100_000, seed=0):
    """Ordering check plus Monte-Carlo oracle; returns ``(exit_code, report)``."""
    code, report = _core._theory(n, n0, step, samples, seed)
    return code, json.loads(report)


__all__ = [
    "FuelError", "Graph", "Split", "__version__", "ari", "calinski_harabasz", "conv_bases",
    "cs_closed_form", "cs_monte_carlo", "edge_homophily", "embed", "gen_synthetic", "kmeans",
    "lcs_closed_form", "load_dataset", "make_graph", "nmi", "probe", "save_dataset", "theory",
    "train_step1", "train_step2",
]
