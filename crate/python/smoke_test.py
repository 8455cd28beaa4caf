"""Smoke test for the slsq_py extension module."""

import cmath
import json
import math

import slsq_py


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    q = math.pi / 4
    r = slsq_py.r_trig(q, q, 0.0)
    perm = {(0, 0): 1, (1, 2): 1, (2, 1): 1, (3, 3): -1}
    for i in range(4):
        for j in range(4):
            assert close(r[i][j], perm.get((i, j), 0)), (i, j, r[i][j])

    xp, xm = slsq_py.zhukovski(1.0, 0.0, 1.0)
    assert close(xp, cmath.exp(0.5j)) and close(xm, cmath.exp(-0.5j))

    a = slsq_py.magnon_labels(0.8, 1.0, 2.0)
    b = slsq_py.magnon_labels(-0.5, 1.0, 2.0)
    c = slsq_py.magnon_labels(1.7, 1.0, 2.0)
    closed = slsq_py.r_closed(a, b)
    solved = slsq_py.r_solve(a, b)
    scale = solved[0][0] / closed[0][0]
    assert all(close(scale * x, y, 1e-10) for rc, rs in zip(closed, solved) for x, y in zip(rc, rs))
    assert slsq_py.ybe_residual(a, b, c) < 1e-10

    _, m = slsq_py.dispersion(0.3, math.pi / 4, 1.0)
    assert m == 0

    for suite in slsq_py.SUITES:
        report = json.loads(slsq_py.verify(suite, samples=3, seed=1))
        assert report["passed"], suite
        print(f"{suite:8s} max residual {report['max_residual']:.3e}")

    try:
        slsq_py.verify("nonsense")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown suite accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
