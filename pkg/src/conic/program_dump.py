"""Plain-text program dump.

    conic-program 1
    name <name>
    dims <num_vars> <num_rows> <nnz> <num_blocks>
    objective <constant>
    c <col> <value>                    one line per nonzero objective entry
    G <row> <col> <value>              COO triplets of the stacked constraint map
    g <row> <value>                    one line per nonzero offset
    cone <kind> <dim> <name>           blocks in row order

Rows are 0-based, values are written with repr() so a load reproduces them
exactly. Each block means G x + g in K for its cone kind.
"""
from pathlib import Path
from typing import Union

import numpy as np

from src.conic.affine import Affine
from src.conic.cone_program import ConeKind, ConeProgram
from src.errors import DataFormatError

FORMAT_VERSION = 1


def dump_program(prog: ConeProgram, path: Union[str, Path]) -> None:
    c, c0 = prog.objective_vector()
    G, g = prog.constraint_matrix()
    G = G.tocoo()
    order = np.lexsort((G.col, G.row))

    lines = [
        f"conic-program {FORMAT_VERSION}",
        f"name {prog.name}",
        f"dims {prog.num_vars} {prog.num_rows} {G.nnz} {len(prog.blocks)}",
        f"objective {float(c0)!r}",
    ]
    lines += [f"c {j} {float(c[j])!r}" for j in np.flatnonzero(c)]
    lines += [f"G {G.row[k]} {G.col[k]} {float(G.data[k])!r}" for k in order]
    lines += [f"g {r} {float(g[r])!r}" for r in np.flatnonzero(g)]
    lines += [f"cone {b.kind.value} {b.dim} {b.name}" for b in prog.blocks]

    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_program(path: Union[str, Path]) -> ConeProgram:
    path = Path(path)
    text = path.read_text(encoding="utf-8").splitlines()
    if not text or text[0].split() != ["conic-program", str(FORMAT_VERSION)]:
        raise DataFormatError("not a conic program dump", path=str(path), row=1)

    prog = ConeProgram()
    num_vars = num_rows = None
    objective = {}
    constant = 0.0
    rows = {}
    offsets = {}
    cones = []

    for lineno, line in enumerate(text[1:], start=2):
        parts = line.split(maxsplit=3) if line.startswith("cone ") else line.split()
        if not parts:
            continue
        try:
            tag = parts[0]
            if tag == "name":
                prog.name = line[5:]
            elif tag == "dims":
                num_vars, num_rows = int(parts[1]), int(parts[2])
            elif tag == "objective":
                constant = float(parts[1])
            elif tag == "c":
                objective[int(parts[1])] = float(parts[2])
            elif tag == "G":
                rows.setdefault(int(parts[1]), {})[int(parts[2])] = float(parts[3])
            elif tag == "g":
                offsets[int(parts[1])] = float(parts[2])
            elif tag == "cone":
                cones.append((ConeKind(parts[1]), int(parts[2]), parts[3] if len(parts) > 3 else ""))
            else:
                raise ValueError(f"unknown record '{tag}'")
        except (ValueError, IndexError) as e:
            raise DataFormatError(str(e), path=str(path), row=lineno) from e

    if num_vars is None:
        raise DataFormatError("missing dims record", path=str(path))
    if sum(dim for _, dim, _ in cones) != num_rows:
        raise DataFormatError("cone dimensions do not add up to the row count", path=str(path))

    prog.add_variables(num_vars)
    prog.set_objective(Affine(objective, constant))
    row = 0
    for kind, dim, name in cones:
        block_rows = [Affine(rows.get(r), offsets.get(r, 0.0)) for r in range(row, row + dim)]
        prog.add_constraint(kind, block_rows, name)
        row += dim
    return prog
