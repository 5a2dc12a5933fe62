"""Smoke test for the sepgraph_py extension.

Build and install first:  pip install --no-build-isolation ./crates/python
Then run:                 python3 python/smoke_test.py
"""

import sepgraph_py as sg


def main() -> None:
    e23 = sg.Graph.catalog("emn_2_3")
    r = e23.check_condition_n()
    assert r["verdict"] is False and r["witness"]["verified"], r

    ex = sg.Graph.catalog("running_example")
    r = ex.check_condition_n()
    assert r["verdict"] and len(r["branching"]) == 4, r
    assert r["local"]["u3"][0] == "1"

    d = ex.decompose()
    assert d["branch_free"] == ["u13", "u4", "u5", "u9"], d
    assert d["strata"] == [["u13", "u4", "u9"], ["u5"]], d

    br = ex.branching_subgraph()
    types = dict(br.classify_edges())
    assert (types["b2_3"], types["g1_10"], types["b6_1"]) == ("2", "3a", "3b")
    o = br.synthesize_orientation()
    assert o.kind() == "proper"
    assert br.parse_orientation(o.to_text()).signs() == o.signs()

    e22 = sg.Graph.catalog("emn_2_2")
    pats = e22.patterns("w", 1)
    assert len(pats) == 4 and all(p.depth == 1 for p in pats)
    xi = e22.configuration("u", 3, ["f0^-1.e0"])
    moved = xi.act("f0^-1.e0")
    moved.validate()
    assert moved.base == "u" and "1" in moved

    sw = e22.stabilizer_witness(8)
    assert sw["valid"] and sw["fixed"] and sw["free"], sw["problems"]

    loop = sg.Graph.parse("vertex v\nedge e : v -> v @ c\n")
    members, ratio = loop.folner(loop.constant_orientation(-1), "v", 8, "e^-1")
    assert len(members) == 8 and ratio <= 1 / 8 + 1e-12

    sq = sg.Graph.catalog("two_squares")
    assert sq.presentation(simplified=True) == "<u, v | 2*v = 2*u>"
    verdict, ce = sq.check_monoid("unperforation", 8)
    assert verdict == "false" and ce == {"n": 2, "a": "u", "b": "v"}, (verdict, ce)

    try:
        e22.is_admissible("e0.nope")
    except ValueError:
        pass
    else:
        raise AssertionError("bad literal accepted")

    print("sepgraph_py smoke test passed:", ex)


if __name__ == "__main__":
    main()
