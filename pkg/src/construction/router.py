import logging
from typing import Optional

from src.conic import SolverSettings
from src.construction.cutting_plane import robust_construct_cutting_plane
from src.construction.dual_construction import as_polyhedral, robust_construct_dual
from src.construction.holdings import HoldingsSet, ObjectiveSpec
from src.construction.linearized_construction import robust_construct_linearized
from src.construction.robust_solution import ConstructionMethod, RobustSolution
from src.errors import DomainError
from src.instruments import CashFlowMatrix, MarketState
from src.uncertainty import UncertaintySet

logger = logging.getLogger(__name__)


def robust_construct(
    cf: CashFlowMatrix,
    m_nom: MarketState,
    obj: ObjectiveSpec,
    hset: HoldingsSet,
    uset: UncertaintySet,
    method: ConstructionMethod = ConstructionMethod.DUAL,
    settings: Optional[SolverSettings] = None
) -> RobustSolution:
    """Robust construction by the requested method; sets without a polyhedral form
    go to the cutting-plane method instead of the dual one."""
    if method is ConstructionMethod.DUAL:
        if as_polyhedral(uset) is not None:
            return robust_construct_dual(cf, m_nom, obj, hset, uset, settings=settings)
        logger.warning("%r has no polyhedral form; using the cutting-plane method", uset)
        method = ConstructionMethod.CUTTING_PLANE

    if method is ConstructionMethod.CUTTING_PLANE:
        return robust_construct_cutting_plane(cf, m_nom, obj, hset, uset, settings=settings)
    if method is ConstructionMethod.LINEARIZED:
        return robust_construct_linearized(cf, m_nom, obj, hset, uset, settings=settings)
    raise DomainError(f"unsupported construction method {method.value}")
