import logging
from typing import List, Optional, Tuple

import numpy as np

from src.analysis.worst_case_result import WorstCaseMethod, WorstCaseResult
from src.conic import (
    Affine,
    ConeKind,
    ConeProgram,
    SolverSettings,
    add_lse_epigraph,
    solve,
)
from src.errors import ZeroValueError
from src.instruments import (
    CONTINUOUS,
    CashFlowMatrix,
    CompoundingConvention,
    MarketState,
    Portfolio,
    delta,
    log_discount_factors,
    log_value,
    portfolio_value,
    sensitivities,
    taylor_delta,
)
from src.uncertainty import ScenarioHull, UncertaintySet

logger = logging.getLogger(__name__)


def _check_inputs(cf: CashFlowMatrix, m_nom: MarketState, port: Portfolio,
                  uset: UncertaintySet) -> None:
    m_nom.check_dims(cf)
    port.check_dims(cf)
    uset.check_point(m_nom)


def held_terms(cf: CashFlowMatrix, port: Portfolio) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(bond, 0-based period, h_i c_{i,t}) of every term with positive weight, bond-major."""
    weights = port.h[:, None] * cf.c
    bonds, periods = np.nonzero(weights > 0)
    return bonds, periods, weights[bonds, periods]


def term_weights(cf: CashFlowMatrix, m: MarketState, port: Portfolio,
                 conv: CompoundingConvention = CONTINUOUS) -> np.ndarray:
    """n x T share of portfolio value carried by each term at m."""
    pv = port.h[:, None] * cf.c * np.exp(log_discount_factors(cf, m, conv))
    return pv / pv.sum()


def worst_case_exact(
    cf: CashFlowMatrix,
    m_nom: MarketState,
    port: Portfolio,
    uset: UncertaintySet,
    conv: CompoundingConvention = CONTINUOUS,
    use_shortcut: bool = True,
    settings: Optional[SolverSettings] = None
) -> WorstCaseResult:
    """Minimum over the set of the change in log value.

    minimize tau subject to log sum_k exp(-t_k (y_t + s_i) + log(h_i c_{i,t}) - log V_nom) <= tau
    and (y, s) in the set. Periodic compounding bounds each exponent by an auxiliary
    g_k >= -t_k log(1 + y_t + s_i).
    """
    _check_inputs(cf, m_nom, port, uset)
    log_nominal = log_value(cf, m_nom, port, conv)
    if not np.isfinite(log_nominal):
        raise ZeroValueError("nominal portfolio value is zero")
    nominal_value = float(np.exp(log_nominal))

    top = uset.maximum_element() if use_shortcut else None
    if top is not None:
        return WorstCaseResult(
            delta_wc=delta(cf, top, m_nom, port, conv),
            argmin_state=top,
            method=WorstCaseMethod.ANALYTIC_BOX,
            solver_status='analytic',
            nominal_value=nominal_value,
            term_weights=term_weights(cf, top, port, conv)
        )

    T = cf.T
    bonds, periods, weights = held_terms(cf, port)

    prog = ConeProgram('worst_case_exact')
    x = prog.add_variables(uset.dim, 'state')
    tau = prog.add_variable('tau')
    set_blocks = uset.add_to_program(prog, x)

    if conv.is_continuous:
        exponents = [
            Affine({x[t]: -(t + 1.0), x[T + i]: -(t + 1.0)})
            for i, t in zip(bonds, periods)
        ]
    else:
        g = prog.add_variables(len(weights), 'log_discount')
        rows = []
        for k, (i, t) in enumerate(zip(bonds, periods)):
            rows.extend([
                Affine.var(g[k], -1.0 / (t + 1.0)),
                Affine.constant(1.0),
                Affine({x[t]: 1.0, x[T + i]: 1.0}, 1.0),
            ])
        prog.add_constraint(ConeKind.EXPONENTIAL, rows, 'periodic_discount')
        exponents = [Affine.var(gk) for gk in g]

    terms = [(expr, float(np.log(w) - log_nominal)) for expr, w in zip(exponents, weights)]
    add_lse_epigraph(prog, terms, Affine.var(tau), 'value')
    prog.set_objective(Affine.var(tau))

    result = solve(prog, settings).raise_for_status('worst-case analysis')
    worst = uset.to_state(result.values(x))
    delta_wc = delta(cf, worst, m_nom, port, conv)
    logger.debug("exact worst case over %r: %.8f (solver %.8f)", uset, delta_wc, result.objective)

    return WorstCaseResult(
        delta_wc=delta_wc,
        argmin_state=worst,
        method=WorstCaseMethod.EXACT,
        solver_status=result.status.value,
        nominal_value=nominal_value,
        set_duals={block.name: result.dual(block) for block in set_blocks},
        term_weights=term_weights(cf, worst, port, conv)
    )


def worst_case_linearized(
    cf: CashFlowMatrix,
    m_nom: MarketState,
    port: Portfolio,
    uset: UncertaintySet,
    use_shortcut: bool = True,
    settings: Optional[SolverSettings] = None
) -> WorstCaseResult:
    """Minimum over the set of the first-order change d^T ((y, s) - (y_nom, s_nom))."""
    _check_inputs(cf, m_nom, port, uset)
    sens = sensitivities(cf, m_nom, port)
    nominal_value = portfolio_value(cf, m_nom, port)

    top = uset.maximum_element() if use_shortcut else None
    if top is not None:
        return WorstCaseResult(
            delta_wc=taylor_delta(sens, top, m_nom),
            argmin_state=top,
            method=WorstCaseMethod.ANALYTIC_BOX,
            solver_status='analytic',
            nominal_value=nominal_value
        )

    d = sens.stacked
    prog = ConeProgram('worst_case_linearized')
    x = prog.add_variables(uset.dim, 'state')
    set_blocks = uset.add_to_program(prog, x)
    prog.set_objective(Affine.dot(d, x, -float(d @ m_nom.stacked())))

    result = solve(prog, settings).raise_for_status('linearized worst-case analysis')
    worst = uset.to_state(result.values(x))
    return WorstCaseResult(
        delta_wc=taylor_delta(sens, worst, m_nom),
        argmin_state=worst,
        method=WorstCaseMethod.LINEARIZED,
        solver_status=result.status.value,
        nominal_value=nominal_value,
        set_duals={block.name: result.dual(block) for block in set_blocks}
    )


def worst_case_scenarios(
    cf: CashFlowMatrix,
    m_nom: MarketState,
    port: Portfolio,
    hull: ScenarioHull,
    method: WorstCaseMethod = WorstCaseMethod.EXACT,
    conv: CompoundingConvention = CONTINUOUS,
    settings: Optional[SolverSettings] = None
) -> WorstCaseResult:
    """Scenario analysis: vertex enumeration for the linearized change, a full solve for the exact one."""
    _check_inputs(cf, m_nom, port, hull)
    scenarios: List[MarketState] = hull.scenarios()

    if method is WorstCaseMethod.LINEARIZED:
        sens = sensitivities(cf, m_nom, port)
        values = [taylor_delta(sens, m, m_nom) for m in scenarios]
        k = int(np.argmin(values))
        return WorstCaseResult(
            delta_wc=float(values[k]),
            argmin_state=scenarios[k],
            method=WorstCaseMethod.SCENARIO_ENUM,
            solver_status='enumerated',
            nominal_value=portfolio_value(cf, m_nom, port)
        )

    if hull.K == 1:
        only = scenarios[0]
        return WorstCaseResult(
            delta_wc=delta(cf, only, m_nom, port, conv),
            argmin_state=only,
            method=WorstCaseMethod.SCENARIO_ENUM,
            solver_status='enumerated',
            nominal_value=portfolio_value(cf, m_nom, port, conv),
            term_weights=term_weights(cf, only, port, conv)
        )

    # the worst point may sit inside the hull, not at a vertex
    return worst_case_exact(cf, m_nom, port, hull, conv, use_shortcut=False, settings=settings)
