import argparse
import logging
import os
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional, Sequence

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from config.settings import (
    DATA_DIR,
    DEFAULT_ALPHAS,
    DEFAULT_LAMBDAS,
    DEFAULT_SEED,
    DEFAULT_WORKERS,
    LOG_FORMAT,
    LOG_LEVEL,
    OUT_DIR,
    RESULTS_FILE,
    VERIFY_INSTANCES,
)
from src.analysis import WorstCaseResult, worst_case_exact, worst_case_linearized
from src.checks import run_invariant_suite
from src.conic import SolverSettings
from src.construction import (
    ConstructionMethod,
    HoldingsSet,
    ObjectiveSpec,
    RobustSolution,
    robust_construct,
)
from src.data import (
    MarketDataset,
    ResultsFile,
    format_number,
    format_percent,
    format_table,
    lambda_key,
    load_dataset,
    percent_key,
    read_results,
)
from src.errors import BondPortfolioError, SolverError
from src.instruments import bond_durations
from src.uncertainty import UncertaintySet, box_from_history, ellipsoid_from_history

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3

CONSTRUCTION_METHODS = {
    'dual': ConstructionMethod.DUAL,
    'cutting-plane': ConstructionMethod.CUTTING_PLANE,
    'linearized': ConstructionMethod.LINEARIZED,
}


def parse_float_list(text: str) -> List[float]:
    try:
        values = [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a comma-separated list of numbers")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='robust-bond',
        description="Worst-case analysis and robust construction of long-only bond portfolios"
    )
    parser.add_argument('--data-dir', default=DATA_DIR, help="directory with universe/history/weights files")
    parser.add_argument('--out-dir', default=OUT_DIR, help="directory for reports and the results file")
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED)
    parser.add_argument('--tol', type=float, default=None, help="requested solver tolerance")
    parser.add_argument('--log-level', default=LOG_LEVEL,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    parser.add_argument('--workers', type=int, default=DEFAULT_WORKERS,
                        help="threads for independent alpha/lambda solves")

    sub = parser.add_subparsers(dest='command', required=True)

    sub.add_parser('price', help="price the universe and the nominal portfolio")

    p_wc = sub.add_parser('worst-case', help="worst-case change of the nominal portfolio")
    p_wc.add_argument('--alpha', type=parse_float_list, default=list(DEFAULT_ALPHAS),
                      help="confidence levels, comma-separated")
    p_wc.add_argument('--method', choices=['exact', 'linearized', 'both'], default='both')
    p_wc.add_argument('--uncertainty', choices=['ellipsoid', 'box'], default='ellipsoid')

    p_con = sub.add_parser('construct', help="robust portfolios for a sweep of lambda")
    p_con.add_argument('--lambda', dest='lambdas', type=parse_float_list,
                       default=list(DEFAULT_LAMBDAS), help="robustness weights, comma-separated")
    p_con.add_argument('--method', choices=sorted(CONSTRUCTION_METHODS), default='dual')
    p_con.add_argument('--alpha', type=float, default=DEFAULT_ALPHAS[0])
    p_con.add_argument('--uncertainty', choices=['ellipsoid', 'box'], default='ellipsoid')

    p_ver = sub.add_parser('verify', help="run the invariant suite on random instances")
    p_ver.add_argument('--instances', type=int, default=VERIFY_INSTANCES)

    sub.add_parser('history', help="historical means and nominal key rates and spreads")
    return parser


class BondApp:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.out_dir = Path(args.out_dir)
        self.settings = SolverSettings() if args.tol is None else SolverSettings().with_tolerance(args.tol)
        self.results = ResultsFile()
        self._dataset: Optional[MarketDataset] = None
        self._dataset_lock = threading.Lock()

    @property
    def dataset(self) -> MarketDataset:
        # workers share one load
        with self._dataset_lock:
            if self._dataset is None:
                self._dataset = load_dataset(self.args.data_dir)
            return self._dataset

    def run(self) -> int:
        handler = {
            'price': self.price,
            'worst-case': self.worst_case,
            'construct': self.construct,
            'verify': self.verify,
            'history': self.history,
        }[self.args.command]
        code = handler()
        self._write_results()
        return code

    def _map(self, fn: Callable, items: Sequence) -> list:
        if self.args.workers <= 1 or len(items) <= 1:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.args.workers) as pool:
            return list(pool.map(fn, items))

    def _write_results(self) -> None:
        path = self.out_dir / RESULTS_FILE
        merged = ResultsFile()
        if path.exists():
            merged.values.update(read_results(path))
        merged.values.update(self.results.values)
        merged.write(path)

    def _write_report(self, name: str, text: str) -> None:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        (self.out_dir / name).write_text(text, encoding='utf-8')

    def _uncertainty_set(self, alpha: float) -> UncertaintySet:
        ds = self.dataset
        if self.args.uncertainty == 'box':
            return box_from_history(ds.panel, ds.Z, ds.T, ds.conv)
        return ellipsoid_from_history(ds.panel, alpha, ds.Z, ds.T, ds.conv)

    def price(self) -> int:
        ds = self.dataset
        ppy = ds.conv.periods_per_year
        durations = bond_durations(ds.cf, ds.m_nom, ds.conv) / ppy
        rows = []
        for i, record in enumerate(ds.universe.records):
            rows.append([
                record.bond_id,
                record.rating,
                format_number(record.periods_to_maturity / ppy, 2),
                format_number(record.coupon_rate, 3),
                record.coupon_frequency,
                format_number(ds.prices[i], 2),
                format_number(durations[i], 2),
                format_percent(ds.weights[i]),
            ])
            self.results.add(f'price.bond.{i}.price', ds.prices[i])
            self.results.add(f'price.bond.{i}.duration_years', durations[i])

        text = format_table(
            ['bond', 'rating', 'maturity', 'coupon', 'distribution', 'price', 'duration', 'weight'],
            rows, title=f"Bond universe: n={ds.n}, T={ds.T}"
        )
        text += f"portfolio value {format_number(ds.budget, 2)}\n"
        self.results.add('price.portfolio.value', ds.budget)
        self.results.add('price.universe.n', ds.n)
        self.results.add('price.universe.T', ds.T)
        self._write_report('prices.txt', text)
        print(text, end='')
        return EXIT_OK

    def _analyze(self, case) -> WorstCaseResult:
        method, alpha = case
        ds = self.dataset
        uset = self._uncertainty_set(alpha)
        if method == 'exact':
            return worst_case_exact(ds.cf, ds.m_nom, ds.portfolio, uset, ds.conv, settings=self.settings)
        return worst_case_linearized(ds.cf, ds.m_nom, ds.portfolio, uset, settings=self.settings)

    def worst_case(self) -> int:
        ds = self.dataset
        methods = ['exact', 'linearized'] if self.args.method == 'both' else [self.args.method]
        cases = [(method, alpha) for alpha in self.args.alpha for method in methods]
        outcomes = self._map(self._analyze, cases)

        rows = []
        curves = []
        for (method, alpha), result in zip(cases, outcomes):
            key = f'wc.{method}.alpha{percent_key(alpha)}'
            self.results.add(f'{key}.delta', result.delta_wc)
            self.results.add(f'{key}.relative_change', result.relative_change)
            rows.append([method, format_percent(alpha, 0), format_number(result.delta_wc),
                         format_percent(result.relative_change)])
            curves.append((f'{method}@{format_percent(alpha, 0)}', result.annualized_state(ds.conv)))

        text = format_table(['method', 'alpha', 'delta', 'change'], rows,
                            title=f"Worst-case change ({self.args.uncertainty} uncertainty)")
        print(text, end='')
        self._write_report('worst_case.txt', text + '\n' + self._state_table(curves))
        return EXIT_OK

    def _state_table(self, curves) -> str:
        ds = self.dataset
        headers = ['period'] + [name for name, _ in curves]
        yields = [[str(t)] + [format_percent(y[t - 1], 4) for _, (y, _) in curves]
                  for t in range(1, ds.T + 1)]
        spreads = [[bond_id] + [format_percent(s[i], 4) for _, (_, s) in curves]
                   for i, bond_id in enumerate(ds.universe.ids)]
        return (format_table(headers, yields, title="Worst annualized yield curve")
                + '\n' + format_table(['bond'] + headers[1:], spreads,
                                      title="Worst annualized spreads"))

    def _construct_one(self, lam: float) -> RobustSolution:
        ds = self.dataset
        uset = self._uncertainty_set(self.args.alpha)
        hset = HoldingsSet.for_portfolio(ds.cf, ds.m_nom, ds.portfolio)
        obj = ObjectiveSpec.turnover(ds.portfolio.h, lam)
        method = CONSTRUCTION_METHODS[self.args.method]
        return robust_construct(ds.cf, ds.m_nom, obj, hset, uset, method, self.settings)

    def construct(self) -> int:
        ds = self.dataset
        lambdas = sorted(self.args.lambdas)
        solutions = self._map(self._construct_one, lambdas)

        rows = []
        weights = []
        for lam, sol in zip(lambdas, solutions):
            key = f'construct.{self.args.method.replace("-", "_")}.lambda{lambda_key(lam)}'
            turnover = sol.turnover(ds.portfolio.h)
            value_weights = sol.value_weights(ds.prices)
            self.results.add(f'{key}.turnover', turnover)
            self.results.add(f'{key}.delta_wc', sol.delta_wc)
            self.results.add(f'{key}.objective', sol.objective_value)
            self.results.add(f'{key}.converged', sol.converged)
            for i, w in enumerate(value_weights):
                self.results.add(f'{key}.weight.{i}', w)
            rows.append([
                format_number(lam, 2),
                format_number(turnover),
                format_percent(sol.worst_case.relative_change),
                format_number(sol.objective_value),
                sol.method.value,
            ])
            weights.append(value_weights)

        text = format_table(['lambda', 'turnover', 'worst change', 'objective', 'method'], rows,
                            title=f"Robust construction ({self.args.method}, {self.args.uncertainty})")
        matrix = np.column_stack([ds.weights] + weights)
        weight_rows = [[bond_id] + [format_percent(w) for w in matrix[i]]
                       for i, bond_id in enumerate(ds.universe.ids)]
        weight_text = format_table(['bond', 'nominal'] + [f'lambda={lam:g}' for lam in lambdas],
                                   weight_rows, title="Value weights")
        print(text, end='')
        self._write_report('construct.txt', text + '\n' + weight_text)
        return EXIT_OK

    def verify(self) -> int:
        report = run_invariant_suite(self.args.instances, self.args.seed, self.settings)
        rows = []
        for check in report.checks:
            status = 'ok' if check.passed else ('error' if check.error else 'FAIL')
            rows.append([check.name, f'{check.worst:.3e}', f'{check.tolerance:.0e}',
                         str(check.cases), status])
            self.results.add(f'verify.{check.name}.worst', f'{check.worst:.3e}')
            self.results.add(f'verify.{check.name}.passed', check.passed)
            if check.error:
                print(f"{check.name}: {check.error}")
        text = format_table(['check', 'worst', 'tolerance', 'cases', 'status'], rows,
                            title=f"Invariant suite, {self.args.instances} instances, seed {self.args.seed}")
        print(text, end='')
        self._write_report('verify.txt', text)
        self.results.add('verify.passed', report.passed)
        return EXIT_OK if report.passed else EXIT_VERIFY_FAILED

    def history(self) -> int:
        panel = self.dataset.panel
        mean, last = panel.mean(), panel.last()
        rows = []
        for j, column in enumerate(panel.columns):
            rows.append([column, format_percent(mean[j], 3), format_percent(last[j], 3)])
            self.results.add(f'history.mean.{column}', mean[j])
            self.results.add(f'history.nominal.{column}', last[j])
        self.results.add('history.observations', panel.N)
        text = format_table(['column', 'mean', 'nominal'], rows,
                            title=f"History: {panel.N} observations")
        print(text, end='')
        self._write_report('history.txt', text)
        return EXIT_OK


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)

    try:
        return BondApp(args).run()
    except SolverError as e:
        print(f"Solver error: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except BondPortfolioError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
