import pytest

from sepsys.core import is_nested, trivial_witnesses
from sepsys.examples import (
    CERTIFIERS,
    NAMES,
    UnknownExample,
    certify,
    gen,
    inconsistentpair_elements,
    ray_certificate,
    splittingnotclosed2_level,
    trivialproj_level,
)
from sepsys.inverse import limit
from sepsys.testkit import BadParams


def failing(checks):
    return [c.name for c in checks if not c.ok]


class TestLevels:
    def test_trivialproj_witness(self):
        S = trivialproj_level(3)
        assert [S.labels[w] for w in trivial_witnesses(S, S.index["s"])] == ["r3"]

    def test_splittingnotclosed2_starts_at_four(self):
        with pytest.raises(BadParams):
            splittingnotclosed2_level(3)

    def test_trivialproj_levels_nested(self):
        assert all(is_nested(L) for L in gen("trivialproj", depth=5).levels)


class TestGen:
    def test_depths(self):
        assert len(gen("trivialproj", depth=3).poset) == 3
        assert len(gen("ray", depth=3).poset) == 5

    def test_bad_params(self):
        with pytest.raises(BadParams):
            gen("trivialproj", depth=0)
        with pytest.raises(BadParams):
            gen("trivialproj", k=3)
        with pytest.raises(BadParams):
            gen("ray", depth=3, k=5)

    def test_unknown(self):
        with pytest.raises(UnknownExample):
            gen("nothing")


class TestCertificates:
    @pytest.mark.parametrize("name, params", [
        ("trivialproj", {"depth": 6}),
        ("splittingnotclosed", {"depth": 5}),
        ("splittingnotclosed2", {"depth": 5}),
        ("ray", {"depth": 5}),
        ("inconsistentpair", {}),
    ])
    def test_all_checks_pass(self, name, params):
        checks = certify(name, **params)
        assert checks and not failing(checks)

    def test_every_name_has_a_certifier(self):
        assert set(NAMES) == set(CERTIFIERS)

    def test_ray_chain_in_orientation(self):
        c = ray_certificate(depth=4)
        assert set(c["chain"]) <= c["orientation"] and c["target"] not in c["orientation"]

    def test_inconsistentpair_elements(self):
        lim = limit(gen("inconsistentpair"))
        s, s2 = inconsistentpair_elements(lim)
        assert lim.S.lt(s, s2)
