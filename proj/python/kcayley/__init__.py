"""Cayley transforms, van Daele K-theory and Kasparov cycles on finite matrix models."""

import json

from ._kcayley import (
    KCayleyError,
    __version__,
    bott_projector,
    boundary_cycle,
    cayley,
    cayley_inv,
    chiral_winding,
    circle_index,
    clifford,
    edge_invariants,
    graded_cayley,
    graded_cayley_inv,
    graded_tensor,
    graph_projection,
    product_rep,
    run_cli,
    vd_boundary,
    winding_number,
)


def run(command, suite="", **flags):
    """Run a CLI command in-process; returns (report dict, exit code)."""
    text, code = run_cli(command, suite, {k: str(v) for k, v in flags.items()})
    return json.loads(text), code


__all__ = [
    "KCayleyError",
    "__version__",
    "bott_projector",
    "boundary_cycle",
    "cayley",
    "cayley_inv",
    "chiral_winding",
    "circle_index",
    "clifford",
    "edge_invariants",
    "graded_cayley",
    "graded_cayley_inv",
    "graded_tensor",
    "graph_projection",
    "product_rep",
    "run",
    "run_cli",
    "vd_boundary",
    "winding_number",
]
