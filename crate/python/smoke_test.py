"""Smoke test for the dwork_zeta_py extension module.

Build first, e.g.
    cargo build --release -p dwork-zeta-py --features extension-module
    cp target/release/libdwork_zeta_py.so python/dwork_zeta_py.so
or `maturin develop -m crates/python/Cargo.toml`.
"""

import json
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import dwork_zeta_py as dz


def main():
    t = dz.teichmuller(5, 3, 2)
    assert t.value == 57, t
    assert t ** 5 == t

    x = dz.PadicInt(13, 6, 10)
    assert (x * x.inverse()).value == 1
    assert x.valuation() == (0, False)

    g = dz.gamma_p(13, 6, 1, 2)
    assert (g * g).centered_lift() == -1
    assert g == dz.gamma_p(13, 6, 1, 2, morita=True)

    assert dz.count_points("x1^3+x2^3+x3^3", 5, 2) == 36

    z = dz.zeta_direct("x1^3+x2^3+x3^3", 5, 8)
    assert z.numerator == [1, 0, 5], z
    assert z.counts == [(1, 6), (2, 36)]
    assert z.verified()

    w = dz.zeta_dwork4(13, 2)
    assert len(w.numerator) == 22
    assert w.predicted_count(2) == 31640
    rep = json.loads(w.verify())
    assert rep["weil_ok"] and rep["functional_equation_ok"]

    q = dz.zeta_diagonal(13, 3, 4)
    assert q.predicted_count(1) == dz.count_points("x1^4+x2^4+x3^4", 13, 1)

    assert dz.newton_slopes(5, [1, 0, 5]) == ["1/2", "1/2"]

    try:
        dz.zeta_dwork4(13, 5)
    except ValueError as e:
        assert "singular" in str(e)
    else:
        raise AssertionError("singular parameter accepted")

    for cid, name, ok, detail in dz.run_selftest([1, 9]):
        assert ok, (cid, name, detail)

    print("smoke test ok")


if __name__ == "__main__":
    main()
