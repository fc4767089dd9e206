import pytest
from hypothesis import given
from hypothesis import strategies as st

from peorl.action_language import (
    Atom,
    Const,
    LawKind,
    ParseError,
    Var,
    parse_action_description,
    parse_atoms,
    pretty_print,
    validate,
)
from peorl.domains import NAMES, domain_text

HEADER = """
sort dir = {e, s, w, n}.
sort row = 1..3.
sort col = 1..3.
sort cell = row * col.
fluent pos : cell.
fluent dooropen.
action move(dir).
"""


def test_dynamic_law_with_arithmetic():
    d = parse_action_description(HEADER + "move(e) causes pos(X, Y+1) if pos(X, Y).")
    (law,) = d.laws
    assert law.kind is LawKind.DYNAMIC
    assert str(law.action) == "move(e)"
    assert law.head == Atom("pos", (), (Var("X"), Var("Y", 1)))
    assert law.body == (Atom("pos", (), (Var("X"), Var("Y"))),)


def test_inertial_law():
    (law,) = parse_action_description(HEADER + "inertial dooropen.").laws
    assert law.kind is LawKind.INERTIAL and law.fluent == "dooropen"


def test_declarations_only_gives_no_laws():
    d = parse_action_description(HEADER)
    assert d.laws == ()
    assert [s.name for s in d.sorts] == ["dir", "row", "col", "cell"]
    assert parse_action_description("").laws == ()


def test_boolean_shorthand():
    d = parse_action_description(HEADER)
    assert parse_atoms(d, "dooropen, ~dooropen") == (Atom("dooropen"), Atom("dooropen", (), False))


def test_comments_and_whitespace_are_ignored():
    a = parse_action_description(HEADER + "inertial pos. % trailing comment\n% full line\n")
    b = parse_action_description(HEADER + "inertial   pos .")
    assert a == b


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("move(e) causes pos(X, Z) if pos(X, Y).", "unsafe variable"),
        ("default ~dooropen.\ndefault dooropen.", "duplicate default"),
        ("move(up) causes dooropen.", "not in sort"),
    ],
)
def test_validate_reports_one_diagnostic(text, fragment):
    d = parse_action_description(HEADER + text)
    diags = validate(d)
    assert len(diags) == 1
    assert fragment in diags[0].message


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("jump causes dooropen.", "undeclared symbol"),
        ("move(e, w) causes dooropen.", "arity mismatch"),
    ],
)
def test_signature_errors_are_rejected_at_parse_time(text, fragment):
    with pytest.raises(ParseError) as info:
        parse_action_description(HEADER + text)
    diag = info.value.diagnostics[0]
    assert fragment in diag.message
    assert diag.line == HEADER.count("\n") + 1


@pytest.mark.parametrize("name", NAMES)
def test_shipped_domains_validate(name):
    assert validate(parse_action_description(domain_text(name))) == []


@pytest.mark.parametrize("name", NAMES)
def test_pretty_print_round_trips_shipped_domains(name):
    d = parse_action_description(domain_text(name))
    text = pretty_print(d)
    assert parse_action_description(text) == d
    assert pretty_print(parse_action_description(text)) == text


def test_single_law_is_byte_stable():
    d = parse_action_description(HEADER + "nonexecutable move(e) if pos(X, 3).")
    assert pretty_print(d) == pretty_print(d)
    assert pretty_print(d).splitlines()[-1] == "nonexecutable move(e) if pos(X, 3)."


@pytest.mark.parametrize(
    "text",
    [
        HEADER + "move(e) causes pos(X, Y+1) if pos(X, Y)",  # missing period
        HEADER + "move(e) causes causes pos(1, 1).",
        HEADER + "sort = 1..2.",
        HEADER + "inertial pos.\nmove(e) causes @.",
    ],
)
def test_syntax_errors_carry_positions(text):
    with pytest.raises(ParseError) as info:
        parse_action_description(text)
    assert info.value.diagnostics
    lines = text.split("\n")
    for d in info.value.diagnostics:
        assert 1 <= d.line <= len(lines) + 1
        assert 0 <= d.offset <= len(text)


def test_parse_is_deterministic():
    text = domain_text("taxi1")
    assert parse_action_description(text) == parse_action_description(text)


# -- randomized round trip ------------------------------------------------------

ENUM = ("a", "b", "c")


@st.composite
def descriptions(draw):
    """Random valid descriptions over a fixed vocabulary of sorts and declarations."""
    hi = draw(st.integers(1, 4))
    n_bool = draw(st.integers(1, 3))
    n_val = draw(st.integers(0, 2))
    lines = [f"sort n0 = 0..{hi}.", "sort e0 = {a, b, c}.", "sort c0 = n0 * n0."]
    bools = [f"p{i}" for i in range(n_bool)]
    vals = [f"v{i}" for i in range(n_val)]
    lines += [f"fluent {p}." for p in bools]
    lines += [f"fluent {v} : e0." for v in vals]
    lines += ["fluent h0(n0) : e0.", "fluent q0 : c0.", "action a0.", "action a1(n0)."]

    def literal():
        kind = draw(st.sampled_from(["bool", "val", "h"] if vals else ["bool", "h"]))
        if kind == "bool":
            return draw(st.sampled_from(["", "~"])) + draw(st.sampled_from(bools))
        if kind == "val":
            return f"{draw(st.sampled_from(vals))} = {draw(st.sampled_from(ENUM))}"
        return f"h0({draw(st.integers(0, hi))}) = {draw(st.sampled_from(ENUM))}"

    def body():
        items = draw(st.lists(st.just(None), max_size=3))
        return "" if not items else " if " + ", ".join(literal() for _ in items)

    for _ in range(draw(st.integers(0, 8))):
        kind = draw(st.sampled_from(["inertial", "dynamic", "dynamic_var", "nonexec", "static", "shift"]))
        if kind == "inertial":
            lines.append(f"inertial {draw(st.sampled_from(bools + vals))}.")
        elif kind == "dynamic":
            lines.append(f"a0 causes {literal()}{body()}.")
        elif kind == "dynamic_var":
            lines.append(f"a1(X) causes h0(X) = {draw(st.sampled_from(ENUM))}{body()}.")
        elif kind == "nonexec":
            lines.append(f"nonexecutable a1({draw(st.integers(0, hi))}){body()}.")
        elif kind == "static":
            lines.append(f"{literal()}{body()}.")
        else:
            k = draw(st.integers(1, 2))
            lines.append(f"a1(X) causes q0(X, Y+{k}) if q0(X, Y).")
    if draw(st.booleans()):
        lines.append(f"default ~{bools[0]}.")
    return "\n".join(lines) + "\n"


@given(descriptions())
def test_round_trip_random_descriptions(text):
    d = parse_action_description(text)
    printed = pretty_print(d)
    again = parse_action_description(printed)
    assert again == d
    assert pretty_print(again) == printed


def test_constants_keep_their_types():
    d = parse_action_description(HEADER + "move(e) causes pos(2, 3).")
    assert d.laws[0].head.value == (Const(2), Const(3))
