import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import NAMES, algebra, s, walks
from stralg.presentation import Letter
from stralg.strings import (
    StringError,
    common_left_substring,
    concat_left,
    distinguishing_word,
    end_marker,
    h_equivalent,
    invert,
    mk_string,
    parse_string,
    relative_theta,
    render,
    string_signs,
    zero_string,
)


def test_mk_string_accepts_A1a0(g0):
    x = mk_string(g0, [Letter("a0"), Letter("a1", True)])
    assert len(x) == 2 and render(x) == "A1a0"


def test_relation_factor_is_named(g0):
    with pytest.raises(StringError, match="relation factor a3a2"):
        mk_string(g0, [Letter("a2"), Letter("a3")])


def test_cancellation_is_named(g0):
    with pytest.raises(StringError, match="cancellation"):
        mk_string(g0, [Letter("a1"), Letter("a1", True)])


def test_token_and_capitalised_literals_agree(g0):
    assert parse_string(g0, "a1'.a0") == parse_string(g0, "A1a0")
    assert render(parse_string(g0, "A1a0"), capitalised=False) == "a1'.a0"


def test_signs(g0):
    assert string_signs(s(g0, "A1a0")) == {"theta": -1, "delta": 0}
    assert s(g0, "A2A1").delta == 1
    with pytest.raises(StringError):
        zero_string(g0, "v0", 1).theta


def test_concat_left(g0):
    a0 = s(g0, "a0")
    assert concat_left(s(g0, "A1"), a0) == s(g0, "A1a0")
    assert concat_left(zero_string(g0, *end_marker(a0)), a0) == a0


def test_common_left_substring(g0):
    assert common_left_substring(s(g0, "a3A1a0"), s(g0, "A2A1a0")) == s(g0, "A1a0")
    x = s(g0, "a3A1a0")
    assert common_left_substring(x, x) == x
    assert common_left_substring(x, s(g0, "A1a0")) == s(g0, "A1a0")
    assert relative_theta(x, s(g0, "A1a0")) == -1


def test_invert(g0):
    assert invert(s(g0, "A1a0")) == s(g0, "A0a1")


def test_h_equivalence_witness(gp):
    f, longer = s(gp, "f"), s(gp, "feDf")
    assert not h_equivalent(f, longer)
    u = distinguishing_word(f, longer)
    assert render(f.extend(u)) == "acf"
    assert longer.extend(u) is None
    assert h_equivalent(f, f)


@pytest.mark.parametrize("name", NAMES)
@settings(max_examples=100)
@given(data=st.data())
def test_invert_is_an_involution(name, data):
    x = data.draw(walks(algebra(name), 10))
    assert invert(invert(x)) == x


@pytest.mark.parametrize("name", NAMES)
@settings(max_examples=100)
@given(data=st.data())
def test_factorial_language(name, data):
    x = data.draw(walks(algebra(name), 10))
    for k in range(len(x)):
        assert mk_string(x.spec, x.letters[:k], x.origin) == x.prefix(k)


@pytest.mark.parametrize("name", NAMES)
@settings(max_examples=100)
@given(data=st.data())
def test_concat_is_associative(name, data):
    spec = algebra(name)
    x = data.draw(walks(spec, 5))
    vx = data.draw(walks(spec, 4, base=x))
    uvx = data.draw(walks(spec, 4, base=vx))
    v = vx.letters[len(x):]
    u = uvx.letters[len(vx):]
    if not v or not u:
        return
    v_str = mk_string(spec, v)
    u_str = mk_string(spec, u)
    uv = mk_string(spec, v + u)
    assert concat_left(u_str, concat_left(v_str, x)) == concat_left(uv, x) == uvx


@pytest.mark.parametrize("name", NAMES)
@settings(max_examples=100)
@given(data=st.data())
def test_mixed_left_factor_keeps_h_class(name, data):
    spec = algebra(name)
    x = data.draw(walks(spec, 5))
    yx = data.draw(walks(spec, 6, base=x))
    y = yx.letters[len(x):]
    if not y or mk_string(spec, y).delta != 0:
        return
    assert h_equivalent(mk_string(spec, y), yx)
