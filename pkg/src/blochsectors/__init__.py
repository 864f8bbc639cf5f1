"""Bloch sector-length distributions of pure multipartite qudit states."""

from .closed_forms import (
    SectorPolynomial,
    bell_family_nsector_exact,
    bell_product_sectors_exact,
    ghz_sectors_exact,
    poly_tensor,
    product_sectors_exact,
)
from .errors import ConsistencyError, DomainError, SizeError
from .qstate import (
    DensityOperator,
    PartySubset,
    PureState,
    make_bell_product,
    make_ghz,
    make_product,
    purity,
    random_state,
    reduce,
    state_from_spec,
    tensor,
)
from .sector_engine import (
    InversionMap,
    PurityTable,
    SectorDistribution,
    n_sector_via_projector,
    purity_table,
    sectors_from_purities,
)

__version__ = "0.1.0"
