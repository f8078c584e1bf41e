"""Plain-text tables and the key=value results file.

Reports carry no timestamps or timings, so identical inputs give identical bytes.
Result keys are dotted lowercase paths, for example

    price.bond.3.price=98.123456
    wc.exact.alpha50.relative_change=-0.293400
    construct.dual.lambda5.turnover=0.041200
"""
from pathlib import Path
from typing import Dict, List, Mapping, Sequence, Union

import numpy as np

from config.settings import PERCENT_DECIMALS, REPORT_DECIMALS


def format_number(value: float, decimals: int = REPORT_DECIMALS) -> str:
    if not np.isfinite(value):
        return str(float(value))
    text = f"{value:.{decimals}f}"
    # no negative zero in reports
    return text[1:] if text.startswith('-') and float(text) == 0 else text


def format_percent(fraction: float, decimals: int = PERCENT_DECIMALS) -> str:
    return f"{format_number(100.0 * fraction, decimals)}%"


def format_table(headers: Sequence[str], rows: Sequence[Sequence], title: str = '') -> str:
    """Right-aligned columns, first column left-aligned."""
    cells: List[List[str]] = [[str(h) for h in headers]]
    for row in rows:
        cells.append([c if isinstance(c, str) else format_number(c) for c in row])
    widths = [max(len(r[j]) for r in cells) for j in range(len(headers))]

    def line(row):
        parts = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        return '  '.join(parts).rstrip()

    out = []
    if title:
        out.append(title)
    out.append(line(cells[0]))
    out.append('  '.join('-' * w for w in widths))
    out.extend(line(r) for r in cells[1:])
    return '\n'.join(out) + '\n'


def percent_key(value: float) -> str:
    """0.5 -> '50', 0.99 -> '99', 0.995 -> '99_5'."""
    text = f"{100.0 * value:.4f}".rstrip('0').rstrip('.')
    return text.replace('.', '_')


def lambda_key(value: float) -> str:
    return f"{value:g}".replace('.', '_')


class ResultsFile:
    """Ordered key=value results; keys are written sorted."""

    def __init__(self):
        self.values: Dict[str, str] = {}

    def add(self, key: str, value, decimals: int = REPORT_DECIMALS) -> None:
        if isinstance(value, (bool, np.bool_)):
            self.values[key] = 'true' if value else 'false'
        elif isinstance(value, (int, np.integer)):
            self.values[key] = str(int(value))
        elif isinstance(value, (float, np.floating)):
            self.values[key] = format_number(float(value), decimals)
        else:
            self.values[key] = str(value)

    def update(self, values: Mapping[str, object]) -> None:
        for key, value in values.items():
            self.add(key, value)

    def render(self) -> str:
        return ''.join(f"{key}={self.values[key]}\n" for key in sorted(self.values))

    def write(self, path: Union[str, Path]) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.render(), encoding='utf-8')


def read_results(path: Union[str, Path]) -> Dict[str, str]:
    values = {}
    for line in Path(path).read_text(encoding='utf-8').splitlines():
        if line.strip():
            key, _, value = line.partition('=')
            values[key] = value
    return values
