"""Offline generator for the sum-of-exponentials coefficient asset.

Run once, then commit the output:

    PYTHONPATH=src python -m heat_potentials.soe_bootstrap [--out PATH] [--orders 8 12 16]

Pipeline: Caratheodory-Fejer rational approximation of e^z on (-inf, 0] after the
Moebius map z = 9 ((w - 1) / (w + 1))^2, nodes t_k = sqrt(z_k) and weights
w_k = -sqrt(pi) c_k / sqrt(z_k), then a variable-projection refit of the nodes, a
Lawson reweighting of the linear weights towards the minimax fit and finally a
levelling exchange on the extrema of the error curve. Errors are measured in extended
precision; see ``soe_error``.
"""

from __future__ import annotations

import argparse
from pathlib import Path
from time import time

import numpy as np
from scipy import linalg, optimize

from configuration import GREEN, RESET, SOE_TABLE_PATH, YELLOW
from heat_potentials.soe import SUPPORTED_ORDERS, soe_error, soe_residual

CF_DEGREE = 75
CF_SAMPLES = 1024
CF_SCALE = 9.0

_FIT_GRID = 20.0 * np.linspace(0.0, 1.0, 3001) ** 1.5
_CHECK_GRID = np.linspace(0.0, 30.0, 100001)
_EXCHANGE_GRID = 30.0 * np.linspace(0.0, 1.0, 4001) ** 1.3
_REAL_NODE_TOL = 1e-12


def caratheodory_fejer(n: int, degree: int = CF_DEGREE, samples: int = CF_SAMPLES, scale: float = CF_SCALE):
    """Poles z_k and residues c_k of the type (n, n) CF approximant of e^z on the negative axis."""
    w = np.exp(2j * np.pi * np.arange(samples) / samples)
    x = w.real
    with np.errstate(divide="ignore", over="ignore"):
        f = np.exp(scale * (x - 1.0) / (x + 1.0 + 1e-16))
    c = np.real(np.fft.fft(f))[: degree + 1] / samples

    values, vectors = linalg.eigh(linalg.hankel(c[1 : degree + 1]))
    order = np.argsort(-np.abs(values))
    m = order[n]
    sigma = abs(values[m])
    u = vectors[:, m]
    v = u * np.sign(values[m])

    approx = np.polynomial.polynomial.polyval(w, c)
    remainder = approx - sigma * w**degree * np.polyval(u[::-1], w) / np.polyval(v, w)

    roots = np.roots(v)
    poles = roots[np.abs(roots) > 1.0]
    if poles.size != n:
        raise RuntimeError(f"expected {n} exterior poles, found {poles.size}")

    numerator = np.real(np.fft.fft(remainder * np.polyval(np.poly(poles), w)))[: n + 1] / samples
    residues = np.array(
        [np.polyval(numerator[::-1], q) / np.prod(np.delete(q - poles, i)) for i, q in enumerate(poles)]
    )
    ratio = (poles - 1.0) / (poles + 1.0)
    z = scale * ratio**2
    dz = 4.0 * scale * (poles - 1.0) / (poles + 1.0) ** 3
    return z, residues * dz, sigma


def cf_soe(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Raw SOE weights and nodes from the CF poles (complex sum, no pairing applied)."""
    z, c, _ = caratheodory_fejer(n)
    nodes = np.sqrt(z)
    weights = -np.sqrt(np.pi) * c / nodes
    return weights, nodes


def _split(nodes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pairs = nodes[nodes.imag > _REAL_NODE_TOL]
    reals = nodes[np.abs(nodes.imag) <= _REAL_NODE_TOL].real
    return pairs[np.argsort(pairs.imag)], np.sort(reals)


def _design(pairs: np.ndarray, reals: np.ndarray, r: np.ndarray) -> np.ndarray:
    e = np.exp(-2.0 * np.multiply.outer(r, pairs))
    return np.hstack([2.0 * e.real, -2.0 * e.imag, np.exp(-2.0 * np.multiply.outer(r, reals))])


def _unpack(x: np.ndarray, n_pairs: int) -> tuple[np.ndarray, np.ndarray]:
    pair_weights = x[:n_pairs] + 1j * x[n_pairs : 2 * n_pairs]
    return pair_weights, x[2 * n_pairs :]


def _expand(pairs, pair_weights, reals, real_weights) -> tuple[np.ndarray, np.ndarray]:
    nodes = [node for p in pairs for node in (p, np.conj(p))] + list(reals)
    weights = [weight for w in pair_weights for weight in (w, np.conj(w))] + list(real_weights)
    return np.asarray(weights, dtype=complex), np.asarray(nodes, dtype=complex)


def sup_error(weights: np.ndarray, nodes: np.ndarray, grid: np.ndarray = _CHECK_GRID) -> float:
    return soe_error(weights, nodes, grid)


def lawson_weights(pairs: np.ndarray, reals: np.ndarray, iterations: int = 80):
    """Linear weights for fixed nodes, reweighted towards the minimax error."""
    design = _design(pairs, reals, _FIT_GRID)
    target = np.exp(-(_FIT_GRID**2))
    rho = np.ones_like(_FIT_GRID)
    best = (np.inf, None)
    for _ in range(iterations):
        x = np.linalg.lstsq(design * rho[:, None], target * rho, rcond=None)[0]
        residual = np.abs(design @ x - target)
        pair_weights, real_weights = _unpack(x, pairs.size)
        weights, nodes = _expand(pairs, pair_weights, reals, real_weights)
        error = sup_error(weights, nodes)
        if error < best[0]:
            best = (error, (weights, nodes))
        rho = rho * np.sqrt(np.maximum(residual / residual.max(), 1e-3))
        rho /= np.sqrt(np.mean(rho**2))
    return best


def varpro_nodes(pairs: np.ndarray, reals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares refit of the nodes with the weights eliminated by a linear solve."""
    target = np.exp(-(_FIT_GRID**2))
    n_pairs = pairs.size

    def residual(params):
        p = params[:n_pairs] + 1j * params[n_pairs : 2 * n_pairs]
        design = _design(p, params[2 * n_pairs :], _FIT_GRID)
        x = np.linalg.lstsq(design, target, rcond=None)[0]
        return design @ x - target

    start = np.concatenate([pairs.real, pairs.imag, reals])
    fit = optimize.least_squares(residual, start, method="lm", xtol=1e-15, ftol=1e-15, max_nfev=4000)
    params = fit.x
    return params[:n_pairs] + 1j * params[n_pairs : 2 * n_pairs], params[2 * n_pairs :]


def _params(weights: np.ndarray, nodes: np.ndarray) -> tuple[np.ndarray, int]:
    """Flat (Re t, Im t, Re w, Im w) per pair with Im t > 0, then (t, w) per real node."""
    upper = nodes.imag > _REAL_NODE_TOL
    real = np.flatnonzero(np.abs(nodes.imag) <= _REAL_NODE_TOL)
    real = real[np.argsort(nodes[real].real)]
    quads = np.column_stack([nodes[upper].real, nodes[upper].imag, weights[upper].real, weights[upper].imag])
    duos = np.column_stack([nodes[real].real, weights[real].real])
    return np.concatenate([quads.ravel(), duos.ravel()]), int(upper.sum())


def _table(params: np.ndarray, n_pairs: int) -> tuple[np.ndarray, np.ndarray]:
    quads = params[: 4 * n_pairs].reshape(-1, 4)
    duos = params[4 * n_pairs :].reshape(-1, 2)
    return _expand(quads[:, 0] + 1j * quads[:, 1], quads[:, 2] + 1j * quads[:, 3], duos[:, 0], duos[:, 1])


def _jacobian(params: np.ndarray, n_pairs: int, r: np.ndarray) -> np.ndarray:
    """d error(r) / d params, one row per point."""
    r = np.asarray(r, dtype=float)[:, None]
    a, b, A, B = params[: 4 * n_pairs].reshape(-1, 4).T
    e, c, s = np.exp(-2.0 * a * r), np.cos(2.0 * b * r), np.sin(2.0 * b * r)
    pair_columns = np.stack(
        [-4.0 * r * e * (A * c + B * s), 4.0 * r * e * (B * c - A * s), 2.0 * e * c, 2.0 * e * s], 2
    )
    t, w = params[4 * n_pairs :].reshape(-1, 2).T
    decay = np.exp(-2.0 * t * r)
    real_columns = np.stack([-2.0 * r * w * decay, decay], 2)
    return np.hstack([pair_columns.reshape(r.shape[0], -1), real_columns.reshape(r.shape[0], -1)])


def _error(params: np.ndarray, n_pairs: int, r) -> np.ndarray:
    return np.asarray(soe_residual(*_table(params, n_pairs), np.atleast_1d(r)), dtype=float)


def _extrema(params: np.ndarray, n_pairs: int) -> tuple[np.ndarray, np.ndarray]:
    """Largest |error| of every sign run on the exchange grid, sharpened by a bounded search."""
    grid = _EXCHANGE_GRID
    error = _error(params, n_pairs, grid)
    points, values = [], []
    for run in np.split(np.arange(grid.size), np.flatnonzero(np.diff(np.sign(error)) != 0) + 1):
        k = run[np.argmax(np.abs(error[run]))]
        point, value = grid[k], error[k]
        if 0 < k < grid.size - 1:
            found = optimize.minimize_scalar(
                lambda r: -abs(_error(params, n_pairs, r)[0]),
                bounds=(grid[k - 1], grid[k + 1]),
                method="bounded",
                options={"xatol": 1e-12},
            )
            sharpened = _error(params, n_pairs, found.x)[0]
            if abs(sharpened) > abs(value):
                point, value = found.x, sharpened
        points.append(point)
        values.append(value)
    return np.array(points), np.array(values)


def level_exchange(
    weights: np.ndarray, nodes: np.ndarray, iterations: int = 60, gamma: float = 0.85
) -> tuple[np.ndarray, np.ndarray]:
    """Least-change exchange on all parameters: pull every extremum of the error curve to ``gamma`` times the largest.

    A step is kept only when the largest extremum drops; a rejected step moves ``gamma`` towards 1.
    """
    params, n_pairs = _params(weights, nodes)
    current = float(np.max(np.abs(_extrema(params, n_pairs)[1])))
    for _ in range(iterations):
        points, errors = _extrema(params, n_pairs)
        level = gamma * np.max(np.abs(errors))
        jacobian = _jacobian(params, n_pairs, points)
        scale = np.linalg.norm(jacobian, axis=0)
        scale[scale == 0] = 1.0
        system = np.vstack([jacobian / scale, 1e-9 * np.eye(params.size)])
        rhs = np.concatenate([np.sign(errors) * level - errors, np.zeros(params.size)])
        step = np.linalg.lstsq(system, rhs, rcond=None)[0] / scale
        for alpha in 0.5 ** np.arange(6):
            trial = params + alpha * step
            error = float(np.max(np.abs(_extrema(trial, n_pairs)[1])))
            if error < current:
                params, current = trial, error
                break
        else:
            gamma = min(0.99, gamma + 0.5 * (1.0 - gamma))
    return _table(params, n_pairs)


def bootstrap_order(n: int) -> tuple[np.ndarray, np.ndarray, float]:
    _, raw_nodes = cf_soe(n)
    pairs, reals = _split(raw_nodes)
    candidates = [lawson_weights(pairs, reals)]
    try:
        candidates.append(lawson_weights(*varpro_nodes(pairs, reals)))
    except (np.linalg.LinAlgError, ValueError) as error:
        print(f"{YELLOW}[soe] order {n}: node refit skipped ({error}){RESET}", flush=True)
    error, (weights, nodes) = min(candidates, key=lambda item: item[0])
    levelled = level_exchange(weights, nodes)
    levelled_error = sup_error(*levelled)
    if levelled_error < error:
        (weights, nodes), error = levelled, levelled_error
    return weights, nodes, error


def write_asset(tables: dict[int, tuple[np.ndarray, np.ndarray, float]], path: Path) -> None:
    lines = [
        "# Sum-of-exponentials approximation of exp(-r^2) ~ sum_k w_k exp(-2 t_k r)",
        "# columns: n k Re(w_k) Im(w_k) Re(t_k) Im(t_k)",
        "# generated by: python -m heat_potentials.soe_bootstrap",
        "# achieved sup-norm error on r in [0, 30]: "
        + ", ".join(f"n={n} {error:.5g}" for n, (_, _, error) in sorted(tables.items())),
    ]
    for n, (weights, nodes, _) in sorted(tables.items()):
        for k, (w, t) in enumerate(zip(weights, nodes)):
            lines.append(f"{n} {k} {w.real:.17g} {w.imag:.17g} {t.real:.17g} {t.imag:.17g}")
    path.write_text("\n".join(lines) + "\n")


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(description="Regenerate the SOE coefficient asset.")
    parser.add_argument("--out", type=Path, default=SOE_TABLE_PATH)
    parser.add_argument("--orders", type=int, nargs="+", default=list(SUPPORTED_ORDERS))
    args = parser.parse_args(argv)

    start = time()
    tables = {}
    for n in args.orders:
        tables[n] = bootstrap_order(n)
        print(f"{GREEN}[soe] order {n}: sup error {tables[n][2]:.4e}{RESET}", flush=True)
    write_asset(tables, args.out)
    print(f"Time taken: {round(time() - start, 2)} s, written to {args.out}")


if __name__ == "__main__":
    main()
