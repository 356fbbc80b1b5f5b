"""Smoke test for the localtr_py extension module.

Build and run via ./run_smoke.sh, or by hand:

    cargo build --release -p localtr-py
    cp ../target/release/liblocaltr_py.so localtr_py.so
    python3 smoke_test.py
"""

import json
from fractions import Fraction

import localtr_py as lt


def frac(s: str) -> Fraction:
    return Fraction(s)


def main() -> None:
    # psi-class intersection numbers
    assert frac(lt.psi(0, [0, 0, 0])) == 1
    assert frac(lt.psi(1, [1])) == Fraction(1, 24)
    assert frac(lt.psi(2, [4])) == Fraction(1, 1152)

    # recursion on the Airy curve: omega_{1,1} = -(1/16) z^-4 dz
    curve = lt.airy_curve(1, 1)
    form = json.loads(lt.omega(curve, 1, 1))
    [entry] = form["entries"]
    assert entry["exponents"] == [-4]
    assert entry["value"][0] == "-1/16"

    # graph sum on the same curve: coefficient of dxi_1 is -1/48
    exp = json.loads(lt.graph_sum(curve, 1, 1))
    [entry] = exp["entries"]
    assert entry["leaves"] == [[1, 1]]
    assert entry["value"][0] == "-1/48"

    # stationary CP1 invariants against the independent oracle
    for g, a in [(0, [0, 0, 0]), (1, [2]), (1, [3, 1]), (2, [4])]:
        assert frac(lt.stationary(g, a)) == frac(lt.oracle(g, a)), (g, a)
    assert frac(lt.stationary(1, [2])) == Fraction(1, 24)

    # dictionary round trip on the Norbury-Scott curve
    ns = lt.ns_curve(10)
    r = lt.dictionary_from_curve(ns)
    assert json.loads(r)["N"] == 2

    # bundled check suite
    passed, lines = lt.run_check("airy")
    assert passed, lines

    print("smoke test passed")


if __name__ == "__main__":
    main()
