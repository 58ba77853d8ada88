"""Smoke test for the pyordinal extension module.

Build and install first:  pip install /root/crate/crates/python --no-build-isolation
(or `maturin develop` inside crates/python).
"""

import json
import pathlib
import sys
import tempfile

import pyordinal as po

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def main():
    g = po.Game.load(str(DATA / "leading.json"))
    assert g == po.Game.sample("leading")
    assert g.players == ["a", "b"]
    assert g.actions("b") == ["L", "C", "R"]

    pr = po.solve(g, "pr")
    assert pr["rounds"][pr["fixed_point_round"]] == {"a": ["M"], "b": ["L"]}
    assert pr["rounds"][1] == {"a": ["T", "M"], "b": ["L", "C"]}
    yr = po.solve(po.Game.sample("battle_of_sexes"), "yr")
    assert ["D", "L"] not in yr["rounds"][yr["fixed_point_round"]]

    rel = po.relations(g)
    assert all(c["holds"] for c in rel["claims"])

    w = po.witness(g, "pes")
    rep = w.check("pes")
    assert rep["holds"] and rep["equal_everywhere"]
    again = po.PossibilityStructure.from_json(w.to_json())
    assert again.check("pes")["holds"]

    s = po.PossibilityStructure.load(str(DATA / "bos_struct.json"))
    assert s.check("opt", depth=4)["equal_everywhere"]

    k = po.KnowledgeStructure.load(str(DATA / "knowledge_bos.json"))
    assert k.wt_check()["holds"]
    assert k.knows("a", [0, 2]) == [0, 2]
    assert po.KnowledgeStructure.load(str(DATA / "tiny_product.json")).product_check()["holds"]

    lim = po.limit(po.Game.sample("admissible_not_maxmin"), [1, 2, 4])
    assert lim["holds"] and lim["monotone"]
    assert po.concave_transform(g, 2).payoff("a", ["T", "L"]) == "7/15"
    assert po.limiting_game(g).payoff("b", ["D", "L"]) == "0"

    r = po.Game.random([3, 2], seed=5, generic=True)
    assert r.is_generic()
    with tempfile.TemporaryDirectory() as d:
        p = pathlib.Path(d) / "g.json"
        p.write_text(r.to_json())
        assert po.Game.load(str(p)) == r

    try:
        po.solve(g, "nash")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown concept accepted")

    print(json.dumps({"smoke": "ok", "pr_rounds": pr["fixed_point_round"]}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
