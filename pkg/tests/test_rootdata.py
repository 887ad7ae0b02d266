import json
import random

import pytest

from zipstrata.rootdata import (
    RootDataError,
    build_generic,
    build_gl,
    is_compact,
    load_generic_json,
    pairing,
)


def test_build_gl_4_2():
    rs, lat, I = build_gl(4, 2)
    assert len(rs.positive_roots) == 6
    assert sorted(I) == [1, 3]
    assert rs.ambient_dim == 4 and rs.rank == 3


def test_build_gl_3_2():
    _, _, I = build_gl(3, 2)
    assert sorted(I) == [1]


def test_build_gl_2_1():
    rs, _, I = build_gl(2, 1)
    assert [r.coords for r in rs.positive_roots] == [(1, -1)]
    assert I == frozenset()


@pytest.mark.parametrize("n,r", [(4, 0), (4, 4), (4, 7), (1, 1)])
def test_build_gl_rejects_bad_r(n, r):
    with pytest.raises(RootDataError):
        build_gl(n, r)


def test_positive_roots_are_nonneg_simple_combinations():
    rs, _, _ = build_gl(5, 2)
    for root in rs.positive_roots:
        assert all(c >= 0 for c in root.simple_coords)


def test_generic_a2_has_three_positive_roots():
    rs, _ = build_generic([[2, -1], [-1, 2]])
    assert len(rs.positive_roots) == 3


def test_generic_b2_has_four_positive_roots():
    # classical count for B_2
    rs, _ = build_generic([[2, -1], [-2, 2]])
    assert len(rs.positive_roots) == 4


def test_generic_a1_degenerate():
    rs, _ = build_generic([[2]])
    assert len(rs.positive_roots) == 1


@pytest.mark.parametrize(
    "cartan",
    [
        [[2, -1], [-3, 2]],  # G_2-like but... fine type, so use affine instead
        [[2, -2], [-2, 2]],  # affine A_1: not finite type
        [[2, 0], [-1, 2]],  # asymmetric zero pattern
        [[1, 0], [0, 2]],  # bad diagonal
        [[2, 1], [1, 2]],  # positive off-diagonal
    ],
)
def test_generic_rejects_nonfinite_or_malformed(cartan):
    if cartan == [[2, -1], [-3, 2]]:
        # G_2 is finite type; it must be accepted, with 6 positive roots
        rs, _ = build_generic(cartan)
        assert len(rs.positive_roots) == 6
        return
    with pytest.raises(RootDataError):
        build_generic(cartan)


def test_lattice_consistency_is_enforced():
    with pytest.raises(RootDataError):
        build_generic(
            [[2, -1], [-1, 2]],
            {"dim": 2, "pairing": [[2, -1], [-1, 2]], "root_embedding": [[1, 1], [0, 1]]},
        )


def test_pairing_gl_examples():
    rs, lat, _ = build_gl(3, 2)
    e12 = rs.root_from_coords((1, -1, 0))
    e13 = rs.root_from_coords((1, 0, -1))
    assert pairing(lat, (0, 1, 1), e12) == -1
    assert pairing(lat, (0, 1, 1), e13) == -1


def test_pairing_negates_and_is_additive():
    rs, lat, _ = build_gl(4, 2)
    rng = random.Random(7)
    for _ in range(50):
        lam = tuple(rng.randrange(-5, 6) for _ in range(4))
        mu = tuple(rng.randrange(-5, 6) for _ in range(4))
        root = rng.choice(rs.roots)
        assert pairing(lat, lam, -root) == -pairing(lat, lam, root)
        both = tuple(a + b for a, b in zip(lam, mu))
        assert pairing(lat, both, root) == pairing(lat, lam, root) + pairing(lat, mu, root)


def test_pairing_matches_coordinate_difference():
    rs, lat, _ = build_gl(5, 2)
    lam = (3, -1, 4, 1, -5)
    for root in rs.positive_roots:
        i = root.coords.index(1)
        j = root.coords.index(-1)
        assert pairing(lat, lam, root) == lam[i] - lam[j]


def test_is_compact_22(zd22):
    rs = zd22.rs
    alpha1 = rs.simple(1)
    e13 = rs.root_from_coords((1, 0, -1, 0))
    assert is_compact(rs, alpha1, zd22.I)
    assert not is_compact(rs, e13, zd22.I)


def test_nothing_compact_for_empty_I():
    rs, _, _ = build_gl(3, 1)
    for root in rs.roots:
        assert not is_compact(rs, root, frozenset())


def test_noncompact_positive_count_is_rs():
    for n, r in [(4, 2), (5, 2), (5, 3), (6, 1)]:
        rs, _, I = build_gl(n, r)
        noncompact = [a for a in rs.positive_roots if not is_compact(rs, a, I)]
        assert len(noncompact) == r * (n - r)


def test_simple_reflections_permute_positive_roots():
    # s_alpha permutes Phi, and permutes Phi+ minus {alpha}
    for builder in (lambda: build_gl(4, 2)[0], lambda: build_generic([[2, -1], [-2, 2]])[0]):
        rs = builder()
        from zipstrata.weyl import WeylGroup

        W = WeylGroup(rs)
        for k in rs.delta_indices():
            s = W.simple(k)
            images = {s.apply(a).coords for a in rs.roots}
            assert images == {a.coords for a in rs.roots}
            others = [a for a in rs.positive_roots if a.coords != rs.simple(k).coords]
            assert all(s.apply(a).is_positive for a in others)
            assert s.apply(rs.simple(k)).coords == (-rs.simple(k)).coords


def test_json_roundtrip_loader():
    doc = {
        "cartan": [[2, -1], [-1, 2]],
        "lattice": {
            "dim": 2,
            "pairing": [[2, -1], [-1, 2]],
            "root_embedding": [[1, 0], [0, 1]],
        },
    }
    rs, lat = load_generic_json(json.dumps(doc))
    assert len(rs.positive_roots) == 3
    assert lat.dim == 2
