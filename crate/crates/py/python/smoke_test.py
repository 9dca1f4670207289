"""Smoke test for the ruled_strata extension module.

Build and install first, e.g. ``maturin develop -m crates/py/Cargo.toml``.
"""

import ruled_strata as rs


def main() -> None:
    a = rs.H2Class(1, 0)
    f = rs.H2Class(0, 1)
    assert a.intersect(f) == 1
    b = rs.H2Class.stratum(2)
    assert b.coeffs == (1, -2)
    assert b.intersect(b) == -4
    assert b.area("5/2") == "3/2"
    assert rs.admissible_strata("7/2") == [0, 1, 2, 3, 4]
    assert rs.strata_codim(1) == (2, 2)
    assert rs.strata_codim(2, "nontrivial") == (8, 4)
    assert rs.link_dimension(3, 1) == 7

    space, notes = rs.chain_to_lens([-3, -1])
    assert space.pq == (2, 1) and notes == []
    assert space == rs.Space.lens(2, 1)
    assert rs.link_adjacent(1).equivalent(rs.Space.lens(2, 1))
    assert rs.lens_equivalent(rs.Space.lens(5, 2), rs.Space.lens(5, 3))
    assert not rs.lens_equivalent(rs.Space.lens(7, 1), rs.Space.lens(7, 2))
    assert rs.blow_down([-2, -1, -2]) == [0]
    stated, derived = rs.link_nontrivial(2)
    assert stated.pq == (9, 1)

    v = rs.Rank2Bundle(-2, 0)
    plumbed = v.twist_by_attaching().plumb_with_ly()
    assert plumbed.degrees == (-1, 0)
    assert plumbed.identify_pullback().tag == "BlowdownPullback"

    assert rs.count_preimages("phi30", [1 + 0.3j, 0.2 - 1j, 0.7 + 0.1j]) == (4, False)

    checks = rs.verify_identities(samples=50, seed=7)
    assert checks and all(c["pass"] for c in checks), checks

    assert rs.links_report(2, 0)["link"]["tag"] == "S5"
    assert rs.plumb_report([-3, -1])["agrees"] is True
    rows = rs.decompositions_report(2)["strata"]
    assert any(r["shape"] == ["0(1,1)"] and r["isotropy"] == 2 for r in rows)
    assert [r["k"] for r in rs.strata_report("2")["rows"]] == [0, 1, 2]

    try:
        rs.links_report(4, 1)
    except ValueError as e:
        assert "supported" in str(e)
    else:
        raise AssertionError("expected ValueError")

    print("smoke test passed")


if __name__ == "__main__":
    main()
