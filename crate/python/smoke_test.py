"""Builds the `ctl` extension module and exercises it from Python.

Usage: python3 python/smoke_test.py [--no-build]
"""

import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_module() -> Path:
    if "--no-build" not in sys.argv:
        subprocess.run(["cargo", "build", "-p", "ctl-py"], cwd=ROOT, check=True)
    lib = ROOT / "target" / "debug" / "libctl.so"
    dest = Path(tempfile.mkdtemp()) / "ctl.so"
    shutil.copy(lib, dest)
    return dest.parent


def main() -> None:
    sys.path.insert(0, str(build_module()))
    import ctl

    x = ctl.DarbouxPoint(0.0, [1.0, 2.0], [3.0, 4.0])
    assert x.n == 2 and x.to_list() == [0.0, 1.0, 2.0, 3.0, 4.0]
    assert ctl.eta(x) == [1.0, -3.0, -4.0, 0.0, 0.0]
    assert ctl.reeb(2)[0] == 1.0
    assert ctl.volume_form_coefficient(x) == -2.0

    y = ctl.discrete_legendre(x)
    assert y.to_list() == [-11.0, -3.0, -4.0, 1.0, 2.0]
    assert ctl.discrete_legendre(x, [1]).to_list() == [-3.0, -3.0, 2.0, 1.0, 4.0]

    start = ctl.DarbouxPoint(0.0, [1.0], [0.0])
    times, states = ctl.integrate_flow(start, math.pi / 2, dt=1e-4)
    end = ctl.discrete_legendre(start).to_list()
    assert abs(times[-1] - math.pi / 2) < 1e-15
    assert max(abs(a - b) for a, b in zip(states[-1], end)) < 1e-8
    exact = ctl.closed_form_orbit(start, math.pi / 2).to_list()
    assert max(abs(a - b) for a, b in zip(exact, end)) < 1e-12

    frozen = ctl.DarbouxPoint(0.0, [1.0, 1.0], [1.0, 1.0])
    assert ctl.killing_residual("epsilon", "total-norm", x) < 1e-9
    assert abs(ctl.killing_residual("gtd_partial", "const:1", frozen) - 2.0) < 1e-12
    assert ctl.isometry_residual("gtd_total", "const:1", x) < 1e-10

    w = ctl.Omega("q:1")
    assert w.poisson_residual(x) == 3.0
    assert len(ctl.Omega.invariant_registry()) == 10

    assert abs(ctl.ideal_gas_curvature(2.0, 1.0, 1.5) - 6.144) < 1e-12
    report = ctl.curvature_report(3.0, 1.0, 1.5)
    assert report["rel_error"] < 1e-3 and not report["near_singularity"]
    rows = ctl.rho_scan(1.5, 0.2, 4.0, 200)
    assert sum(r["near_singularity"] for r in rows) >= 1

    e = ctl.Expression("2^3^2", [])
    assert e.eval([]) == 512.0
    assert str(ctl.Expression("-2^2", [])) == "(-(2 ^ 2))"
    try:
        ctl.Expression("c*ln(u)", ["u", "v"])
    except ValueError as err:
        assert "'c'" in str(err)
    else:
        raise AssertionError("unknown identifier accepted")
    try:
        ctl.Expression("sqrt(u)", ["u"]).eval([-1.0])
    except ArithmeticError:
        pass
    else:
        raise AssertionError("domain error not raised")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
