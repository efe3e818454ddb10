import numpy as np
import pytest

from heat_potentials import soe_bootstrap
from heat_potentials.soe import load_soe_table, read_soe_asset
from heat_potentials.soe_bootstrap import (
    _error,
    _expand,
    _jacobian,
    _params,
    _split,
    _table,
    level_exchange,
    sup_error,
    write_asset,
)


def _shipped(n):
    table = load_soe_table(n)
    return table.weights, table.nodes, sup_error(table.weights, table.nodes)


def test_written_asset_reads_back_unchanged(tmp_path):
    tables = {n: _shipped(n) for n in (8, 12, 16)}
    path = tmp_path / "soe.txt"
    write_asset(tables, path)
    rewritten, shipped = read_soe_asset(path), read_soe_asset()
    for n in (8, 12, 16):
        np.testing.assert_array_equal(rewritten[n], shipped[n])


def test_header_reports_the_achieved_errors(tmp_path):
    path = tmp_path / "soe.txt"
    write_asset({8: _shipped(8)}, path)
    header = [line for line in path.read_text().splitlines() if line.startswith("#")]
    assert header[-1].startswith("# achieved sup-norm error on r in [0, 30]: n=8 2.")
    assert header[-1].endswith("e-08")


def test_sup_error_matches_the_shipped_header():
    _, _, error = _shipped(8)
    assert error == pytest.approx(2.285e-8, rel=2e-2)


def test_split_and_expand_keep_the_node_set():
    _, nodes, _ = _shipped(12)
    pairs, reals = _split(nodes)
    assert np.all(pairs.imag > 0)
    assert 2 * pairs.size + reals.size == 12
    _, expanded = _expand(pairs, np.ones(pairs.size), reals, np.ones(reals.size))
    np.testing.assert_allclose(np.sort_complex(expanded), np.sort_complex(nodes), atol=1e-12)


def test_main_writes_requested_orders(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(soe_bootstrap, "bootstrap_order", _shipped)
    out = tmp_path / "soe.txt"
    soe_bootstrap.main(["--out", str(out), "--orders", "8", "12"])
    assert sorted(read_soe_asset(out)) == [8, 12]
    assert "Time taken" in capsys.readouterr().out


def test_parameter_packing_keeps_the_table():
    weights, nodes, _ = _shipped(16)
    params, n_pairs = _params(weights, nodes)
    assert n_pairs == 7
    packed_weights, packed_nodes = _table(params, n_pairs)
    np.testing.assert_array_equal(packed_weights, weights)
    np.testing.assert_array_equal(packed_nodes, nodes)


def test_exchange_jacobian_matches_differences():
    weights, nodes, _ = _shipped(8)
    params, n_pairs = _params(weights, nodes)
    r = np.array([0.05, 0.7, 1.9, 3.2])
    step = 1e-6
    columns = []
    for j in range(params.size):
        shift = np.zeros(params.size)
        shift[j] = step
        columns.append((_error(params + shift, n_pairs, r) - _error(params - shift, n_pairs, r)) / (2 * step))
    np.testing.assert_allclose(_jacobian(params, n_pairs, r), np.column_stack(columns), rtol=1e-6, atol=1e-8)


def test_level_exchange_never_raises_the_error():
    weights, nodes, error = _shipped(8)
    levelled = level_exchange(weights, nodes, iterations=3)
    assert sup_error(*levelled) <= error * 1.01


def test_shipped_order_sixteen_is_levelled_below_1e_13():
    _, _, error = _shipped(16)
    assert error <= 1e-13
