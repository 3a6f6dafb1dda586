"""Smoke test for the pysymjoin extension module."""

import json

import pysymjoin as sj


def main():
    rp2 = sj.Complex.rp2()
    assert rp2.alexander_dual() == rp2
    h = rp2.homology()
    assert h["betti"] == [0, 0, 0], h
    assert h["torsion"][1] == [2], h
    assert rp2.verify_connectivity(0)
    assert not rp2.verify_connectivity(1)

    k = sj.Complex(4, [[1, 2], [1, 3], [2, 3], [4]])
    assert [1, 2] in k and [1, 4] not in k
    assert sj.Complex.from_json(k.to_json()) == k

    bier = sj.fixture("bier_m4")
    assert bier.unavoidable()["verdict"]
    assert sj.JoinComplex.deleted(bier).homology()["betti"] == [0, 0, 1]

    tiny = sj.JoinComplex.symmetrized(sj.fixture("two_points"))
    summary = tiny.morse()
    assert summary["matching_valid"] and summary["acyclic"], summary
    assert summary["connectivity"] == -1, summary
    assert len(tiny.to_dot().splitlines()) > 2
    assert sj.JoinComplex.from_json(tiny.to_json()).cells() == tiny.cells()

    avoidable = sj.Family([sj.Complex.skeleton(6, 2), sj.Complex.skeleton(6, 2)])
    assert avoidable.is_balanced(1)
    cert = avoidable.unavoidable(1)
    assert cert["verdict"] is False and "partition" in cert["witness"], cert
    assert sj.deficiency(6, 2, 1) == 0

    triple = sj.fixture("rp2_triple")
    assert triple.unavoidable()["verdict"]
    cell = [[7, 8, 9], [3, 4], [1, 2]]
    assert not triple.join_contains(cell)
    assert sj.fixture("skeleta_triple").join_contains(cell)
    assert sj.passport(9, cell) == [5, 6, None]

    try:
        sj.Complex(3, [[4]])
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range vertex accepted")

    print(json.dumps({"rp2": h["torsion"], "tiny": summary["critical_counts"]}))
    print("smoke test: PASS")


if __name__ == "__main__":
    main()
