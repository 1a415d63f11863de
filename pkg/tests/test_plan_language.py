import pytest
from hypothesis import given
from hypothesis import strategies as st

from edgebot.plan import (
    ActionKind,
    EmptyEntity,
    ParseError,
    Plan,
    SubTask,
    normalize_entity,
    parse_plan,
    serialize_plan,
)


class TestNormalizeEntity:
    def test_hyphenated_mixed_case(self):
        assert normalize_entity("Vending-Machine") == "vending machine"

    def test_leading_article_stripped(self):
        assert normalize_entity("the kids room") == "kids room"

    @pytest.mark.parametrize(
        "raw,expected",
        [
            ("  Meeting   Room ", "meeting room"),
            ("teddy_bear", "teddy bear"),
            ("vending – machine", "vending machine"),  # en dash variant
            ("a banana", "banana"),
            ("an Apple", "apple"),
            ("the blue-box", "blue box"),
        ],
    )
    def test_normalization_rules(self, raw, expected):
        assert normalize_entity(raw) == expected

    def test_articles_only_raises(self):
        with pytest.raises(EmptyEntity):
            normalize_entity("the the")

    def test_blank_raises(self):
        with pytest.raises(EmptyEntity):
            normalize_entity("   ")

    def test_article_only_raises(self):
        with pytest.raises(EmptyEntity):
            normalize_entity("the")

    @given(st.text(alphabet="abcdefgh -_", min_size=1))
    def test_idempotent(self, raw):
        try:
            once = normalize_entity(raw)
        except EmptyEntity:
            return
        assert normalize_entity(once) == once


class TestParsePlan:
    def test_single_navigate(self):
        plan = parse_plan("navigate(garage)")
        assert plan.subtasks == (SubTask(ActionKind.NAVIGATE, "garage"),)

    def test_four_step_manipulation(self):
        text = "navigate(vending-machine)\ngrab(bottle)\nnavigate(office)\ndrop()"
        plan = parse_plan(text)
        assert plan.lines() == [
            "navigate(vending machine)",
            "grab(bottle)",
            "navigate(office)",
            "drop()",
        ]

    def test_prose_rejected(self):
        with pytest.raises(ParseError) as err:
            parse_plan("Sorry, I cannot operate the robot, but here is a guide...")
        assert err.value.line_number == 1
        assert err.value.reason == "malformed_line"

    def test_empty_input(self):
        with pytest.raises(ParseError) as err:
            parse_plan("")
        assert err.value.reason == "empty_input"

    def test_blank_lines_skipped(self):
        plan = parse_plan("\n  navigate(kitchen)  \n\n drop() \n")
        assert len(plan) == 2

    def test_case_insensitive_action(self):
        assert parse_plan("NAVIGATE(Kitchen)").subtasks[0].target == "kitchen"

    def test_unknown_action(self):
        with pytest.raises(ParseError) as err:
            parse_plan("fly(kitchen)")
        assert err.value.reason == "unknown_action"

    def test_drop_with_argument(self):
        with pytest.raises(ParseError) as err:
            parse_plan("drop(bottle)")
        assert err.value.reason == "unexpected_argument"

    def test_navigate_without_argument(self):
        with pytest.raises(ParseError) as err:
            parse_plan("navigate()")
        assert err.value.reason == "missing_argument"

    def test_one_bad_line_fails_whole_parse(self):
        with pytest.raises(ParseError) as err:
            parse_plan("navigate(kitchen)\nand then have a rest\ndrop()")
        assert err.value.line_number == 2


class TestSerializePlan:
    def test_single(self):
        assert serialize_plan(Plan((SubTask(ActionKind.NAVIGATE, "kitchen"),))) == (
            "navigate(kitchen)"
        )

    def test_composition(self):
        plan = Plan((SubTask(ActionKind.GRAB, "teddy bear"), SubTask(ActionKind.DROP)))
        assert serialize_plan(plan) == "grab(teddy bear)\ndrop()"

    def test_empty_plan_serializes_empty(self):
        assert serialize_plan(Plan(())) == ""


class TestSubTaskInvariants:
    def test_navigate_requires_target(self):
        with pytest.raises(ValueError):
            SubTask(ActionKind.NAVIGATE)

    def test_drop_forbids_target(self):
        with pytest.raises(ValueError):
            SubTask(ActionKind.DROP, "bottle")


_entity = st.text(
    alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=8
).flatmap(
    lambda w: st.lists(st.just(w), min_size=1, max_size=1).map(lambda ws: " ".join(ws))
)


def _subtasks():
    nav = _entity.filter(lambda e: e not in ("the", "a", "an")).map(
        lambda e: SubTask(ActionKind.NAVIGATE, e)
    )
    grab = _entity.filter(lambda e: e not in ("the", "a", "an")).map(
        lambda e: SubTask(ActionKind.GRAB, e)
    )
    return st.one_of(nav, grab, st.just(SubTask(ActionKind.DROP)))


class TestRoundTrip:
    @given(st.lists(_subtasks(), min_size=1, max_size=8))
    def test_parse_inverts_serialize(self, subtasks):
        plan = Plan(tuple(subtasks))
        assert parse_plan(serialize_plan(plan)) == plan

    @given(
        st.text(min_size=1, max_size=60).filter(
            lambda s: s.strip()
            and s.strip().split("(")[0].strip().lower()
            not in ("navigate", "grab", "drop")
        )
    )
    def test_rejects_lines_with_unknown_leading_token(self, line):
        with pytest.raises(ParseError):
            parse_plan(line)
