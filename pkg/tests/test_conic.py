import numpy as np
import pytest

from src.conic import (
    Affine,
    ConeKind,
    ConeProgram,
    SolveStatus,
    add_lse_epigraph,
    add_relative_entropy,
    add_second_order_cone,
    dump_program,
    load_program,
    solve,
)
from src.errors import DataFormatError, InfeasibleProblemError, MalformedProgramError


def test_affine_arithmetic():
    x = np.array([2.0, -1.0, 4.0])
    expr = 3.0 * Affine.var(0) - Affine.dot([1.0, 2.0], [1, 2]) + 5.0
    assert expr.evaluate(x) == pytest.approx(6.0 + 1.0 - 8.0 + 5.0)
    assert (-expr).evaluate(x) == pytest.approx(-expr.evaluate(x))
    assert (1.0 - Affine.total([0, 1])).evaluate(x) == pytest.approx(0.0)


def test_numpy_scalar_multiplies_affine():
    expr = np.float64(2.0) * Affine.var(0)
    assert isinstance(expr, Affine)
    assert expr.coefs == {0: 2.0}


def test_linear_program_and_multiplier():
    prog = ConeProgram('lp')
    x = prog.add_variable('x')
    block = prog.add_nonneg([Affine.var(x) - 1.0], 'lower')
    prog.set_objective(Affine.var(x))
    result = solve(prog).raise_for_status()
    assert result.value(Affine.var(x)) == pytest.approx(1.0, abs=1e-7)
    assert result.dual(block)[0] == pytest.approx(1.0, abs=1e-6)


def test_log_sum_exp_epigraph():
    prog = ConeProgram('lse')
    tau = prog.add_variable('tau')
    add_lse_epigraph(prog, [(Affine.constant(0.0), np.log(2.0)),
                            (Affine.constant(0.0), np.log(3.0))], Affine.var(tau))
    prog.set_objective(Affine.var(tau))
    result = solve(prog).raise_for_status()
    assert result.objective == pytest.approx(np.log(5.0), abs=1e-6)


def test_relative_entropy_cone():
    prog = ConeProgram('relent')
    r = prog.add_variable('r')
    add_relative_entropy(prog, 2.0, 1.0, Affine.var(r))
    prog.set_objective(Affine.var(r))
    result = solve(prog).raise_for_status()
    assert result.objective == pytest.approx(2.0 * np.log(2.0), abs=1e-6)


def test_second_order_cone():
    prog = ConeProgram('soc')
    t = prog.add_variable('t')
    add_second_order_cone(prog, Affine.var(t), [3.0, 4.0])
    prog.set_objective(Affine.var(t))
    result = solve(prog).raise_for_status()
    assert result.objective == pytest.approx(5.0, abs=1e-6)


def test_infeasible_program_raises():
    prog = ConeProgram('infeasible')
    x = prog.add_variable()
    prog.add_nonneg([Affine.var(x) - 1.0, -Affine.var(x)])
    prog.set_objective(Affine.var(x))
    result = solve(prog)
    assert result.status is SolveStatus.INFEASIBLE
    with pytest.raises(InfeasibleProblemError):
        result.raise_for_status()


def test_malformed_blocks_rejected():
    prog = ConeProgram()
    x = prog.add_variable()
    with pytest.raises(MalformedProgramError):
        prog.add_constraint(ConeKind.EXPONENTIAL, [Affine.var(x), 1.0])
    with pytest.raises(MalformedProgramError):
        prog.add_nonneg([Affine.var(x + 3)])
    with pytest.raises(MalformedProgramError):
        add_lse_epigraph(prog, [], Affine.var(x))


def test_cone_residuals_flag_violations():
    prog = ConeProgram()
    x = prog.add_variables(2)
    prog.add_nonneg([Affine.var(x[0])], 'pos')
    add_relative_entropy(prog, Affine.var(x[1]), 1.0, 0.0, 'ent')
    residuals = prog.cone_residuals(np.array([-0.5, 2.0]))
    assert residuals['pos'] == pytest.approx(0.5)
    assert residuals['ent'] > 0
    assert prog.cone_residuals(np.array([0.5, 1.0]))['ent'] == pytest.approx(0.0, abs=1e-12)


def test_dump_and_load_reproduce_program(tmp_path):
    prog = ConeProgram('roundtrip')
    x = prog.add_variables(2, 'x')
    prog.add_equality([Affine.total(x) - 1.0], 'sum')
    add_relative_entropy(prog, Affine.var(x[0]), 0.3, Affine.var(x[1], 0.1), 'ent')
    prog.set_objective(Affine.dot([1.0 / 3.0, 2.0], x, 0.25))

    path = tmp_path / 'prog.txt'
    dump_program(prog, path)
    loaded = load_program(path)

    assert loaded.name == 'roundtrip'
    assert [(b.name, b.kind, b.dim) for b in loaded.blocks] == \
        [(b.name, b.kind, b.dim) for b in prog.blocks]
    c, c0 = prog.objective_vector()
    c_loaded, c0_loaded = loaded.objective_vector()
    np.testing.assert_array_equal(c, c_loaded)
    assert c0 == c0_loaded
    G, g = prog.constraint_matrix()
    G_loaded, g_loaded = loaded.constraint_matrix()
    np.testing.assert_array_equal(G.toarray(), G_loaded.toarray())
    np.testing.assert_array_equal(g, g_loaded)


def test_load_rejects_foreign_file(tmp_path):
    path = tmp_path / 'bad.txt'
    path.write_text("not a program\n")
    with pytest.raises(DataFormatError):
        load_program(path)
