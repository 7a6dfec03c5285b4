import itertools

import pytest

from teamsem.structures import (Permutation, Relation, Structure,
                                automorphisms, check_magma_hypothesis,
                                gen_cycle, gen_single_cycle, gen_two_cycles,
                                is_connected, parse_model, render_model)


def test_gen_cycle_symmetric_counts():
    assert len(gen_cycle(4, symmetric=True).relations["E"].tuples) == 8


def test_gen_cycle_degenerate():
    assert gen_cycle(2, symmetric=True).relations["E"].tuples == \
        frozenset({("v0", "v1"), ("v1", "v0")})


def test_gen_cycle_directed():
    assert gen_cycle(3, symmetric=False).relations["E"].tuples == \
        frozenset({("v0", "v1"), ("v1", "v2"), ("v2", "v0")})


def test_gen_cycle_too_short():
    with pytest.raises(ValueError):
        gen_cycle(1)


def test_cycle_families_have_matching_domains():
    for n in range(5):
        assert len(gen_two_cycles(n).domain) == len(gen_single_cycle(n).domain) \
            == 2 ** (n + 2)


def test_two_cycles_structure():
    a1 = gen_two_cycles(1)
    assert len(a1.domain) == 8
    assert not is_connected(a1)
    assert is_connected(gen_single_cycle(1))


def test_is_connected_trivia():
    single = Structure(("a",), {"E": Relation(2, frozenset())})
    assert is_connected(single)
    two = Structure(("a", "b"), {"E": Relation(2, frozenset())})
    assert not is_connected(two)
    with pytest.raises(ValueError):
        is_connected(single, "missing")


def test_automorphisms_empty_signature():
    s = Structure(("a", "b", "c"))
    autos = automorphisms(s)
    assert len(autos) == 6
    assert autos[0].is_identity()


def test_automorphisms_square_cycle_brute_force_oracle():
    s = gen_cycle(4, symmetric=True)
    edges = s.relations["E"].tuples
    expected = 0
    for images in itertools.permutations(s.domain):
        mapping = dict(zip(s.domain, images))
        if all((mapping[a], mapping[b]) in edges for a, b in edges):
            expected += 1
    assert expected == 8  # dihedral group of the square
    assert len(automorphisms(s)) == expected


def test_automorphisms_group_laws():
    autos = automorphisms(gen_cycle(4, symmetric=True))
    pool = set(autos)
    assert any(p.is_identity() for p in autos)
    for p in autos:
        assert p.inverse() in pool
        for q in autos:
            assert p.compose(q) in pool


def test_automorphisms_respect_constants():
    s = Structure(("a", "b", "c"), constants={"c0": "a"})
    autos = automorphisms(s)
    assert all(p("a") == "a" for p in autos)
    assert len(autos) == 2


def test_automorphism_domain_cap():
    with pytest.raises(ValueError):
        automorphisms(Structure(tuple("abcdefghi")))


def test_magma_hypothesis_symmetric_group():
    s = Structure(("a", "b", "c"))
    report = check_magma_hypothesis(s, automorphisms(s))
    assert report.holds()


def test_magma_hypothesis_identity_only():
    s = Structure(("a", "b"))
    report = check_magma_hypothesis(s, [Permutation.identity(s.domain)])
    assert not report.holds()
    assert "moving" in report.details


def test_magma_hypothesis_rotations():
    s = gen_cycle(4, symmetric=True)
    rotations = []
    d = s.domain
    for shift in range(4):
        rotations.append(Permutation(d, tuple(d[(i + shift) % 4] for i in range(4))))
    report = check_magma_hypothesis(s, rotations)
    assert not report.holds()


def test_magma_hypothesis_rejects_non_automorphism():
    s = gen_cycle(3, symmetric=False)
    bad = Permutation(s.domain, (s.domain[1], s.domain[0], s.domain[2]))
    with pytest.raises(ValueError):
        check_magma_hypothesis(s, [bad])


def test_model_round_trip():
    s = Structure(("a", "b"), {"E": Relation(2, frozenset({("a", "b")}))},
                  {"c0": "a"})
    assert parse_model(render_model(s)) == s


def test_model_parse_errors():
    with pytest.raises(ValueError, match="domain"):
        parse_model("rel E/2: (a,b)\n")
    with pytest.raises(ValueError, match="arity"):
        parse_model("domain: a b\nrel E/2: (a)\n")


def test_model_parse_comments_and_blank_lines():
    text = "# cycle\ndomain: a b\n\nrel E/2: (a,b) (b,a)  # edges\n"
    s = parse_model(text)
    assert s.domain == ("a", "b")
    assert s.relations["E"].tuples == frozenset({("a", "b"), ("b", "a")})


def test_one_element_model_warns():
    with pytest.warns(UserWarning):
        parse_model("domain: a\n")


def test_structure_validation():
    with pytest.raises(ValueError):
        Structure(())
    with pytest.raises(ValueError):
        Structure(("a",), {"E": Relation(2, frozenset({("a", "z")}))})
    with pytest.raises(ValueError):
        Structure(("a",), constants={"c": "z"})
