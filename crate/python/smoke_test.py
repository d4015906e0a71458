"""Smoke test for the pyhireg extension module."""

import json

import pyhireg


def main():
    g = pyhireg.build("gamma", 3)
    assert g.order() == 64 and len(g) == 64
    assert g.srg_parameters() == (64, 28, 12, 12)
    h = pyhireg.Graph.from_graph6(g.to_graph6())
    assert h.edges() == g.edges()
    assert pyhireg.Graph(3, [(0, 1), (1, 2), (0, 2)]).to_graph6() == "Bw"

    p = pyhireg.structure_constants("rho", 4)
    assert p == pyhireg.expected_constants(4)
    assert len(pyhireg.structure_constants("sigma", 3)) == 5

    certified, wl_rank, orbits, separated = pyhireg.certify_orbitals(4)
    assert certified and (wl_rank, orbits, separated) == (3, 4, 4)

    assert len(pyhireg.graph_types(3, 5)) == 148
    assert len(pyhireg.graph_types(3, 5, filtered=True)) == 4

    reports = [json.loads(r) for r in pyhireg.check_regularity(pyhireg.Graph(5, [(i, (i + 1) % 5) for i in range(5)]), 2, 3)]
    assert all(r["status"] in ("constant", "vacuous") for r in reports)

    code, out, _ = pyhireg.run_cli(["verify", "--m", "4", "--check", "not-2-homog"])
    assert code == 0 and json.loads(out)["results"][0]["values"]["values"] == [6, 5]

    try:
        pyhireg.build("gamma", 1)
    except ValueError:
        pass
    else:
        raise AssertionError("m = 1 accepted")
    print("pyhireg", pyhireg.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
