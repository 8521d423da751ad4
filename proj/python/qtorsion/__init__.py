"""Fractional torsion on compact metric graphs."""

from ._core import (
    BoundsPair,
    EigenPair,
    MetricGraph,
    RigidityResult,
    SolverOptions,
    SpectralBasis,
    builtin_graph,
    builtin_names,
    cut_cycle,
    double_edges,
    fd_rigidity,
    flower_rigidity,
    glue_vertices,
    interval_rigidity_dn,
    load_graph,
    parse_graph,
    paper_bounds,
    rigidity,
    rigidity_to_tail,
    run_cli,
    scan_first_n,
    scan_spectrum,
    simple_bounds,
    torsion_at,
    unfold_to_cycle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
