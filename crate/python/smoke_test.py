"""Smoke test for the `gsb` Python module.

Build and install first:  pip install -e crates/py --no-build-isolation
Then run:                 python python/smoke_test.py
"""

import cmath
import math

import gsb


def close(a, b, tol):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    circle = gsb.GroupSpec("torus:1")
    su2 = gsb.GroupSpec("su2")
    assert su2.dim == 3 and su2.rank == 1
    assert close(su2.volume, 16 * math.pi**2, 1e-14)
    assert close(circle.delta_sq, 0.0, 0.0)

    # C_t e^{ix} = e^{-t/2} e^{iz}, evaluated at z = x + iy
    f = gsb.CoefVec.character(circle, "n=(1)")
    big = f.transform(1.0)
    x, y = 0.4, 0.3
    want = math.exp(-0.5) * cmath.exp(1j * complex(x, y))
    assert close(big([x], [y]), want, 1e-13)

    # unitarity and the exact inverse
    norm, gap = big.l2_norm()
    assert close(norm, f.l2_norm(), 1e-6), (norm, f.l2_norm(), gap)
    assert close(big.inverse()([x]), f([x]), 1e-13)

    # SU(2) matrix entry: isometry, Sobolev isometry, reproducing identity
    e = gsb.CoefVec.matrix_entry(su2, "m=2", 0, 1)
    E = e.transform(1.0)
    assert close(E.l2_norm()[0], e.l2_norm(), 1e-3)
    assert close(E.sobolev_norm(1, 2.0)[0], e.sobolev_norm(1, 2.0), 1e-3)
    identity = [[1, 0], [0, 1]]
    value, reproduced, residual = E.reproduce(identity, [0.3, -0.2, 0.5])
    assert residual <= 1e-3, residual

    # two routes to the Sobolev kernel agree
    g = (identity, [0.2, 0.1, -0.4])
    h = (identity, [-0.3, 0.5, 0.2])
    a = gsb.sobolev_kernel(su2, 1.0, 1, 2.0, g, h)
    b = gsb.sobolev_kernel(su2, 1.0, 1, 2.0, g, h, route="integral")
    assert close(a, b, 1e-6), (a, b)

    # symbol: degree n, top coefficient t^{-2n}
    coefs = gsb.symbol(su2, 2.0, 3.0, 2)
    assert len(coefs) == 3 and coefs[-1] == 2.0**-4

    # inversion of χ_2 at the identity
    chi = gsb.CoefVec.character(su2, "m=2").transform(1.0)
    val, stabilized, trace, _ = chi.invert_at(identity)
    assert abs(val - 2.0) <= 1e-2 and stabilized and trace[-1][0] == 10.0

    gaps = [r[3] for r in gsb.lattice_limit(circle, [1.0, 4.0, 16.0, 64.0])]
    assert all(b < a for a, b in zip(gaps, gaps[1:])) and gaps[-1] < 1e-6

    try:
        gsb.GroupSpec("so3")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown group accepted")

    print("gsb smoke test passed")


if __name__ == "__main__":
    main()
