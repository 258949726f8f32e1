"""Smoke test for the Python bindings. Run after installing crates/python."""

import tiling_owf_py as t


def main():
    ts = t.TileSet.example()
    assert ts.expand("T1 T2") == "T3 T4"
    assert len(ts.board("T1 T2")) == 2

    m = t.Machine.builtin("not")
    assert m.run("0101", 2) == "1001"
    red = t.Machine.builtin("increment").force_length().compile()
    assert red.tile_count() > 0
    f = t.Machine.builtin("increment").force_length()
    assert red.run("011", 8) == f.run("011", 7)

    assert t.gf2_mul(4, 0b0010, 0b1001) == 0b0001
    assert t.gf2_mul(4, 7, t.gf2_inv(4, 7)) == 1
    assert t.gf2_modulus(8) == "x^8+x^4+x^3+x+1"

    _, mean = t.sibling_stats("pair:zero", 3)
    assert mean == "7/8"

    mu = t.Measure(["1/3", "1/6", "1/2"])
    r = mu.round()
    assert r.values() == ["1/4", "1/2"]
    assert r.check(mu) == []
    for x in range(len(mu)):
        assert r.decode(r.encode(x)) == x

    u = t.Measure.uniform(4)
    assert u.round().values() == ["1/4", "1/2", "3/4"]
    print("smoke: ok")


if __name__ == "__main__":
    main()
