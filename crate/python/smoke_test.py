"""Smoke test for the mpghz extension module.

Build and import with either

    maturin develop --release

or, without maturin,

    cargo build -p multiport-ghz-py --release
    cp target/release/libmpghz.so python/mpghz.so
    python python/smoke_test.py
"""

import cmath
import json
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import mpghz


def close(a, b, tol=1e-10):
    return abs(a - b) < tol


def main():
    dft2 = mpghz.build_dft(2)
    assert close(dft2[1][1], -1 / math.sqrt(2))
    assert close(mpghz.perm([[1, 1], [1, -1]]), 0)

    w = cmath.exp(2j * math.pi / 3)
    unnormalized = [[w ** (k * l) for l in range(3)] for k in range(3)]
    assert close(mpghz.perm(unnormalized), -3)
    assert close(mpghz.perm(unnormalized, method="naive"), -3)

    state = mpghz.Scheme("odd", 3).postselect()
    assert close(state.probability, 1 / 12)
    assert state.support() == ["mmm", "hhh"]
    fidelity, phase = state.ghz_fidelity()
    assert fidelity > 1 - 1e-10 and abs(phase) < 1e-10

    for n in range(2, 6):
        p = mpghz.Scheme("pbs", n).postselect().probability
        assert close(p, mpghz.closed_form("P_PBS", n))

    assert mpghz.Scheme.odd_input(6).postselect().probability < 1e-10
    assert mpghz.internal_survivors("odd", 4) == [1, 3]
    assert mpghz.ztl_allowed([3, 0, 0]) and not mpghz.ztl_allowed([2, 1, 0])

    dist = mpghz.Scheme("2n", 2).full_distribution()
    assert close(sum(p for _, p in dist), 1.0)

    report = json.loads(mpghz.run("even", 4))
    total = sum(a["re"] ** 2 + a["im"] ** 2 for a in report["amplitudes"])
    assert abs(total - report["success_probability"]) < 1e-12

    try:
        mpghz.Scheme("odd", 8)
    except ValueError:
        pass
    else:
        raise AssertionError("odd scheme accepted n = 8")

    print("mpghz smoke test passed")


if __name__ == "__main__":
    main()
