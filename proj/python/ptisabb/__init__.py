"""Asymmetric DCOP solvers: PT-ISABB, its local-elimination and no-inference
variants, a chain branch-and-bound baseline and a brute-force oracle."""

from ._core import (
    Instance,
    InstanceError,
    SearchSpaceTooLarge,
    csv_header,
    generate_max_dcsp,
    generate_random_adcop,
    pseudo_tree_dot,
    read_instance,
    run_experiment,
    separators,
    solve,
    write_instance,
)

__all__ = [
    "Instance",
    "InstanceError",
    "SearchSpaceTooLarge",
    "csv_header",
    "generate_max_dcsp",
    "generate_random_adcop",
    "pseudo_tree_dot",
    "read_instance",
    "run_experiment",
    "separators",
    "solve",
    "write_instance",
]
