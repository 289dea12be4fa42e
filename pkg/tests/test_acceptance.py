"""Acceptance suite: one test group per criterion, with a summary line each.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary lists
``criterion n PASS|FAIL`` for every criterion.
"""

import subprocess
import sys
import time
from functools import lru_cache

import numpy as np
import pytest

from localspline.blend import apply_blend, build_blend
from localspline.bounds import (
    coefficient_bound,
    empirical_sup_error,
    error_bound,
    local_molecule_bound,
    mesh_stats_for,
    molecule_bound,
    region_of,
)
from localspline.bspline import single_bspline, truncated_power_oracle
from localspline.data import HermiteData
from localspline.grid import midpoint_knots
from localspline.quasi import apply_quasi
from localspline.symfun import symm_identity_check
from localspline.vandermonde import NodeSpec, confluent_det, confluent_det_closed_form
from support import exact_data, monomial, oracle_cases, random_corpus, sine, write_corpus

ORDERS = (3, 4, 5)
GRIDS_PER_ORDER = 20
PROBES = np.linspace(0.0, 1.0, 1000)


@lru_cache(maxsize=None)
def sweep(m: int):
    """20 random strictly increasing grids on [0, 1] with ``N`` in ``[3m-3, 50]``."""
    rng = np.random.default_rng(2024 + m)
    out = []
    for _ in range(GRIDS_PER_ORDER):
        N = int(rng.integers(3 * m - 3, 51))
        y = np.concatenate([[0.0], np.sort(rng.uniform(0.0, 1.0, N - 1)), [1.0]])
        out.append((y, build_blend(y, m)))
    return out


def random_data(y, m, rng):
    return HermiteData(rng.normal(size=y.size), rng.normal(size=m - 1), rng.normal(size=m - 1))


# criterion 1


@pytest.mark.parametrize("m", ORDERS)
def test_c1_polynomial_reproduction(m, acceptance):
    worst_q = worst_p = 0.0
    for y, op in sweep(m):
        for deg in range(m):
            p = monomial(deg)
            data = exact_data(y, m, p)
            ref = p(PROBES)
            scale = np.max(np.abs(ref))
            worst_q = max(worst_q, np.max(np.abs(apply_quasi(op.quasi, data)(PROBES) - ref)) / scale)
            worst_p = max(worst_p, np.max(np.abs(apply_blend(op, data)(PROBES) - ref)) / scale)
    ok = max(worst_q, worst_p) <= 1e-8
    acceptance(1, "polynomial reproduction", f"m={m}", ok, f"Q {worst_q:.1e}, P {worst_p:.1e} (tol 1e-8)")
    assert ok


# criterion 2


@pytest.mark.parametrize("m", ORDERS)
def test_c2_interpolation(m, acceptance):
    rng = np.random.default_rng(m)
    worst = 0.0
    for y, op in sweep(m):
        data = random_data(y, m, rng)
        s = apply_blend(op, data)
        worst = max(worst, np.max(np.abs(s(y) - data.values)) / np.max(np.abs(data.values)))
    ok = worst <= 1e-9
    acceptance(2, "interpolation", f"m={m}", ok, f"{worst:.1e} (tol 1e-9)")
    assert ok


# criterion 3


def _smooth(x, n=0):
    # sin(3x + 1), with derivatives
    return 3.0**n * np.sin(3 * np.asarray(x, dtype=float) + 1 + n * np.pi / 2)


@pytest.mark.parametrize("source", ["exact", "divided-difference"])
@pytest.mark.parametrize("m", ORDERS)
def test_c3_hermite_endpoints(m, source, acceptance):
    worst = 0.0
    for y, op in sweep(m):
        if source == "exact":
            data = exact_data(y, m, _smooth)
        else:
            data = HermiteData.from_samples(y, _smooth(y), m)
        s = apply_blend(op, data)
        for l in range(1, m):
            for end, want in ((y[0], data.derivs_a[l - 1]), (y[-1], data.derivs_b[l - 1])):
                worst = max(worst, abs(s.derivative(end, l) - want) / (abs(want) + 1))
    ok = worst <= 1e-7
    acceptance(3, "Hermite endpoint conditions", f"m={m} {source}", ok, f"{worst:.1e} (tol 1e-7)")
    assert ok


# criterion 4


def interior_error(y, s, m, samples=40):
    x = midpoint_knots(y, m)
    N = y.size - 1
    worst = 0.0
    for i in range(N + 1):
        if region_of(i, N, m) == "V":
            worst = max(worst, empirical_sup_error(np.sin, s, (x[i], x[i + 1]), samples))
    return worst


@pytest.mark.parametrize("m", [3, 4])
def test_c4_convergence_order(m, acceptance):
    start = time.perf_counter()
    errors = []
    for N in (16, 32, 64, 128):
        y = np.linspace(0.0, 2 * np.pi, N + 1)
        errors.append(interior_error(y, apply_blend(build_blend(y, m), exact_data(y, m, sine)), m))
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    elapsed = time.perf_counter() - start
    ok = bool(np.all((orders >= m - 0.5) & (orders <= m + 0.7))) and elapsed < 10
    text = ", ".join(f"{o:.2f}" for o in orders)
    acceptance(4, "convergence order", f"m={m}", ok, f"orders {text} in {elapsed:.1f}s")
    assert ok


# criterion 5


@pytest.mark.parametrize("m", ORDERS)
def test_c5_quasi_coefficients_and_molecules(m, acceptance):
    worst_c = worst_M = 0.0
    for y, op in sweep(m):
        stats = mesh_stats_for(y, m)
        for mol in op.quasi.molecules.values():
            worst_c = max(worst_c, np.max(np.abs(mol.coefficients)) / coefficient_bound(stats))
            worst_M = max(worst_M, np.max(np.abs(mol.evaluate(op.quasi.x, PROBES))) / molecule_bound(stats))
    ok = worst_c <= 1 and worst_M <= 1
    acceptance(5, "bound validity", f"m={m} |a|,|M|", ok, f"max/bound {worst_c:.1e}, {worst_M:.1e}")
    assert ok


@pytest.mark.parametrize("m", ORDERS)
def test_c5_interior_local_molecules(m, acceptance):
    worst = 0.0
    for y, op in sweep(m):
        loc = op.local
        for i in range(1, loc.N):
            worst = max(worst, np.max(np.abs(loc.molecules[i].evaluate(loc.t, PROBES))))
    ok = worst <= 1.0
    acceptance(5, "bound validity", f"m={m} interior |L|<=1", ok, f"max |L| {worst:.3f}")
    assert ok


@pytest.mark.parametrize("m", ORDERS)
def test_c5_boundary_local_molecules(m, acceptance):
    worst_L = worst_b = 0.0
    for y, op in sweep(m):
        loc = op.local
        stats = mesh_stats_for(y, m)
        bound = local_molecule_bound(stats, boundary=True)
        for l in range(m):
            for item in (-l, loc.N + l):
                val = np.max(np.abs(loc.molecules[item].evaluate(loc.t, PROBES)))
                worst_L = max(worst_L, val / bound)
        coefs = np.concatenate([loc.left_coefficients.ravel(), loc.right_coefficients.ravel()])
        worst_b = max(worst_b, np.max(np.abs(coefs)) / stats.tau)
    ok = worst_L <= 1 and worst_b <= 1
    acceptance(5, "bound validity", f"m={m} boundary |L|,|b|", ok, f"max/bound {worst_L:.1e}, {worst_b:.1e}")
    assert ok


@pytest.mark.parametrize("m", ORDERS)
def test_c5_boundary_coefficient_structure(m, acceptance):
    first_ok = True
    worst = 0.0
    for y, op in sweep(m):
        loc = op.local
        first_ok &= loc.b(0, 0) == 1.0
        for l in range(1, m):
            for k in range(l):
                worst = max(worst, abs(loc.b(-l, k)))
    ok = first_ok and worst <= 1e-14
    acceptance(5, "bound validity", f"m={m} b00=1, b(-l,k<l)=0", ok, f"b00 exact {first_ok}, max {worst:.1e}")
    assert ok


# criterion 6


@pytest.mark.parametrize("m", ORDERS)
def test_c6_bspline_oracle(m, acceptance):
    worst = 0.0
    for span, x in oracle_cases(m, np.random.default_rng(600 + m)):
        a, b = single_bspline(span, [x])[0], truncated_power_oracle(span, x)
        worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1e-300))
    ok = worst <= 1e-10
    acceptance(6, "oracle equivalences", f"B-spline m={m}", ok, f"{worst:.1e} (tol 1e-10)")
    assert ok


def test_c6_determinants(acceptance):
    # every confluency pattern of dimension 1..6, nodes in a local frame
    rng = np.random.default_rng(66)
    worst = 0.0
    count = 0

    def patterns(dim):
        if dim == 0:
            yield ()
            return
        for first in range(1, dim + 1):
            for rest in patterns(dim - first):
                yield (first - 1,) + rest

    for dim in range(1, 7):
        for pattern in patterns(dim):
            k = len(pattern)
            for _ in range(10):
                zs = np.linspace(-1, 1, k) + rng.uniform(-0.3, 0.3, k) * 2 / max(k - 1, 1)
                spec = NodeSpec(list(zip(zs, pattern)))
                a, b = confluent_det(spec), confluent_det_closed_form(spec)
                worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
                count += 1
    ok = worst <= 1e-12
    acceptance(6, "oracle equivalences", "determinants", ok, f"{worst:.1e} over {count} (tol 1e-12)")
    assert ok


@pytest.mark.parametrize("m", ORDERS)
def test_c6_symmetric_identity(m, acceptance):
    rng = np.random.default_rng(700 + m)
    worst = 0.0
    for _ in range(100):
        x, y = rng.uniform(-2, 2, (2, m - 1))
        lhs, rhs = symm_identity_check(list(x), list(y))
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
    ok = worst <= 1e-10
    acceptance(6, "oracle equivalences", f"symmetric identity m={m}", ok, f"{worst:.1e} (tol 1e-10)")
    assert ok


# criterion 7


@pytest.mark.parametrize("m", ORDERS)
def test_c7_locality(m, acceptance):
    rng = np.random.default_rng(77 + m)
    changed_outside = 0
    checks = 0
    for y, op in sweep(m)[:10]:
        N = y.size - 1
        base = random_data(y, m, rng)
        s0 = apply_blend(op, base)
        i = int(rng.integers(1, N))
        bumped = base.values.copy()
        bumped[i] += 1.0
        s1 = apply_blend(op, HermiteData(bumped, base.derivs_a, base.derivs_b))
        lo, hi = y[max(0, i - 2 * m)], y[min(N, i + 2 * m)]
        pieces = [p for p in ((0.0, lo), (hi, 1.0)) if p[1] > p[0]]
        if not pieces:
            continue
        widths = np.array([b - a for a, b in pieces])
        counts = np.maximum(1, np.round(500 * widths / widths.sum()).astype(int))
        probes = np.concatenate([rng.uniform(a, b, c) for (a, b), c in zip(pieces, counts)])
        probes = probes[(probes < lo) | (probes > hi)]
        changed_outside += int(np.count_nonzero(s1(probes) != s0(probes)))
        checks += probes.size
    ok = changed_outside == 0 and checks > 0
    acceptance(7, "locality", f"m={m}", ok, f"{changed_outside} of {checks} probes changed")
    assert ok


# criterion 8


def _criterion8_grids(m):
    for N in (16, 32, 64, 128):
        yield np.linspace(0.0, 2 * np.pi, N + 1)
    for y, _ in sweep(m):
        yield y


@pytest.mark.parametrize("m", [3, 4])
def test_c8_empirical_below_bound(m, acceptance):
    worst = 0.0
    intervals = 0
    for y in _criterion8_grids(m):
        s = apply_blend(build_blend(y, m), exact_data(y, m, sine))
        stats = mesh_stats_for(y, m)
        x = midpoint_knots(y, m)
        N = y.size - 1
        for i in range(N + 1):
            if region_of(i, N, m) != "V":
                continue
            bound = error_bound(stats, m, i, 1.0)
            worst = max(worst, empirical_sup_error(np.sin, s, (x[i], x[i + 1]), 40) / bound)
            intervals += 1
    ok = worst <= 1.0
    acceptance(8, "empirical vs V bound", f"m={m}", ok, f"max error/bound {worst:.1e} over {intervals} intervals")
    assert ok


# criterion 9


def _cli(*args):
    proc = subprocess.run([sys.executable, "-m", "localspline.cli", *args], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


@pytest.mark.parametrize("m", [3, 4, 5])
def test_c9_stream_matches_batch(m, tmp_path, acceptance):
    y, f = random_corpus(1000, seed=90 + m)
    path = write_corpus(tmp_path / "corpus.csv", y, f)
    batch = _cli("--in", path, "-m", str(m), "--per-interval", "5")
    stream = _cli("--in", path, "-m", str(m), "--per-interval", "5", "--mode", "stream")
    ok = batch == stream and batch.count("\n") == 1 + 999 * 5 + 1
    acceptance(9, "CLI end-to-end", f"stream==batch m={m}", ok, f"{batch.count(chr(10))} lines, identical={batch == stream}")
    assert ok


def test_c9_square_reproduced(tmp_path, acceptance):
    y = np.sort(np.random.default_rng(9).uniform(0, 3, 30))
    y[0], y[-1] = 0.0, 3.0
    path = write_corpus(tmp_path / "square.csv", y, y**2)
    derivs = tmp_path / "derivs.csv"
    derivs.write_text("end,order,value\na,1,0\na,2,2\nb,1,6\nb,2,2\n")
    out = _cli("--in", path, "-m", "3", "--eval-count", "1000", "--derivs", str(derivs))
    xv = np.array([[float(v) for v in line.split(",")] for line in out.splitlines()[1:]])
    worst = np.max(np.abs(xv[:, 1] - xv[:, 0] ** 2)) / 9.0
    ok = worst <= 1e-8 and xv.shape == (1000, 2)
    acceptance(9, "CLI end-to-end", "x^2 reproduced", ok, f"{worst:.1e} (tol 1e-8)")
    assert ok
