"""Numerical verification of Poisson groupoids on generalized double Bruhat cells."""

import json

from ._dbc import (
    ConfigError,
    DomainEscape,
    Error,
    IndexMismatch,
    InvariantViolation,
    IoError,
    NotComposable,
    NotInCell,
    NotInDressingDomain,
    NotInOpenCell,
    RankDeficient,
    dress,
    gauss_decompose,
    pi_st_at,
    run_json,
    suite_names,
    torus_sqrt,
    tstar_mult,
    tstar_source,
    tstar_target,
    weyl_representative,
)


def run(**kwargs):
    """Run verification suites and return the parsed report list."""
    return json.loads(run_json(**kwargs))


__all__ = [
    "ConfigError",
    "DomainEscape",
    "Error",
    "IndexMismatch",
    "InvariantViolation",
    "IoError",
    "NotComposable",
    "NotInCell",
    "NotInDressingDomain",
    "NotInOpenCell",
    "RankDeficient",
    "dress",
    "gauss_decompose",
    "pi_st_at",
    "run",
    "run_json",
    "suite_names",
    "torus_sqrt",
    "tstar_mult",
    "tstar_source",
    "tstar_target",
    "weyl_representative",
]
