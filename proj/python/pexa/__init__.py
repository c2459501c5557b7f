"""Weakest pre-expectations, predicate abstraction and performance model
checking for pGCL models."""

from ._core import (  # noqa: F401
    PgclModelError,
    PgclParseError,
    __version__,
    check_di,
    check_ip,
    cubes,
    export_mdp,
    export_mdp_prism,
    mc,
    rabin_paper_queries,
    rabin_simulate,
    validate,
    wp,
    wp_bounded,
)
