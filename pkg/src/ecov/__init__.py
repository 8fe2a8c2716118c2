"""Equal coverings of finite groups: tables, lattices, decisions, invariants."""

from __future__ import annotations

from .analysis import (
    StructureReport,
    is_abelian,
    is_cyclic,
    is_nilpotent,
    is_p_group,
    is_simple,
    structure_report,
)
from .census import CatalogEntry, CensusResult, CensusRow, catalog, emit, run_census
from .covering import (
    INFINITY,
    Certificate,
    CertificateReport,
    Decision,
    SigmaResult,
    decide,
    decide_with_hints,
    epsilon,
    equal_covering_exhaustive,
    equal_partition_exists,
    load_hints,
    qualifying_divisors,
    rho,
    sigma,
    verify_certificate,
)
from .errors import (
    EcovError,
    InconclusiveHints,
    ResourceLimitExceeded,
    RulesInconclusive,
    SpecError,
)
from .groups import (
    GroupSpec,
    GroupTable,
    TableReport,
    build_group,
    direct_product,
    element_order,
    exponent,
    parse_group_spec,
    quotient,
    semidirect_product,
    spec_order,
    verify_table,
)
from .lattice import (
    FULL_LATTICE_LIMIT,
    Subgroup,
    SubgroupLattice,
    conjugacy_classes_of_subgroups,
    enumerate_subgroups,
    get_lattice,
    is_normal,
    lattice_to_json,
    maximal_subgroups,
    normal_closure,
    normal_subgroups,
    normal_subgroups_direct,
    subgroups_of_order,
)

__version__ = "0.1.0"

__all__ = [
    "CatalogEntry",
    "CensusResult",
    "CensusRow",
    "Certificate",
    "CertificateReport",
    "Decision",
    "EcovError",
    "FULL_LATTICE_LIMIT",
    "GroupSpec",
    "GroupTable",
    "INFINITY",
    "InconclusiveHints",
    "ResourceLimitExceeded",
    "RulesInconclusive",
    "SigmaResult",
    "SpecError",
    "StructureReport",
    "Subgroup",
    "SubgroupLattice",
    "TableReport",
    "build_group",
    "catalog",
    "conjugacy_classes_of_subgroups",
    "decide",
    "decide_with_hints",
    "direct_product",
    "element_order",
    "emit",
    "enumerate_subgroups",
    "epsilon",
    "equal_covering_exhaustive",
    "equal_partition_exists",
    "exponent",
    "get_lattice",
    "is_abelian",
    "is_cyclic",
    "is_normal",
    "is_nilpotent",
    "is_p_group",
    "is_simple",
    "lattice_to_json",
    "load_hints",
    "maximal_subgroups",
    "normal_closure",
    "normal_subgroups",
    "normal_subgroups_direct",
    "parse_group_spec",
    "qualifying_divisors",
    "quotient",
    "rho",
    "run_census",
    "semidirect_product",
    "sigma",
    "spec_order",
    "structure_report",
    "subgroups_of_order",
    "verify_certificate",
    "verify_table",
]
