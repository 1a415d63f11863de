import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from edgebot.kb import (
    DuplicateName,
    EntrySource,
    KBEntry,
    KBMode,
    Pose,
    kb_init,
    kb_insert,
    kb_lookup,
    kb_snapshot,
    kb_to_document,
    wrap_angle,
)

HOME = ["living room", "kitchen", "kids room"]
OFFICE = ["lounge", "lobby", "office", "meeting room"]


def _entries(names):
    return [
        KBEntry(name, Pose(float(i), 0.0), EntrySource.INITIAL)
        for i, name in enumerate(names)
    ]


class TestPose:
    def test_theta_normalized(self):
        assert Pose(0, 0, 3 * math.pi).theta == pytest.approx(math.pi)

    def test_negative_pi_maps_to_pi(self):
        assert Pose(0, 0, -math.pi).theta == pytest.approx(math.pi)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            Pose(float("nan"), 0.0)

    @given(st.floats(-100, 100))
    def test_wrap_angle_range(self, theta):
        wrapped = wrap_angle(theta)
        assert -math.pi < wrapped <= math.pi


class TestInit:
    def test_home_landmarks(self):
        kb = kb_init(_entries(HOME), KBMode.FIXED)
        assert kb_snapshot(kb) == HOME

    def test_office_landmarks(self):
        kb = kb_init(_entries(OFFICE), KBMode.GROWING)
        assert kb_snapshot(kb) == OFFICE

    def test_empty_kb(self):
        kb = kb_init([], KBMode.GROWING)
        assert kb_snapshot(kb) == []
        assert kb_lookup(kb, "anything") is None

    def test_duplicate_name(self):
        with pytest.raises(DuplicateName):
            kb_init(_entries(["kitchen", "kitchen"]), KBMode.FIXED)


class TestInsert:
    def test_growing_accepts_detection(self):
        kb = kb_init(_entries(HOME), KBMode.GROWING)
        pose = Pose(1.0, 2.0, 0.5)
        assert kb_insert(kb, "teddy bear", pose, 42.0) is True
        assert kb_lookup(kb, "teddy bear") == pose

    def test_fixed_rejects_new_name(self):
        kb = kb_init(_entries(HOME), KBMode.FIXED)
        assert kb_insert(kb, "banana", Pose(0, 0), 1.0) is False
        assert kb_snapshot(kb) == HOME

    def test_fixed_rejects_existing_name(self):
        kb = kb_init(_entries(HOME), KBMode.FIXED)
        before = kb_lookup(kb, "kitchen")
        assert kb_insert(kb, "kitchen", Pose(9, 9), 1.0) is False
        assert kb_lookup(kb, "kitchen") == before

    def test_last_write_wins(self):
        kb = kb_init([], KBMode.GROWING)
        p1, p2 = Pose(1, 1), Pose(2, 2)
        assert kb_insert(kb, "laptop", p1, 1.0)
        assert kb_insert(kb, "laptop", p2, 2.0)
        assert kb_lookup(kb, "laptop") == p2

    def test_initial_entries_never_overwritten(self):
        kb = kb_init(_entries(HOME), KBMode.GROWING)
        before = kb_lookup(kb, "kitchen")
        assert kb_insert(kb, "kitchen", Pose(9, 9), 5.0) is False
        assert kb_lookup(kb, "kitchen") == before


class TestLookup:
    def test_present(self):
        kb = kb_init(_entries(HOME), KBMode.FIXED)
        assert kb_lookup(kb, "kitchen") == Pose(1.0, 0.0)

    def test_missing_on_fixed(self):
        kb = kb_init(_entries(HOME), KBMode.FIXED)
        assert kb_lookup(kb, "banana") is None

    def test_missing_on_empty(self):
        kb = kb_init([], KBMode.GROWING)
        assert kb_lookup(kb, "kitchen") is None


class TestSnapshot:
    def test_detected_after_initial_in_detection_order(self):
        kb = kb_init(_entries(HOME), KBMode.GROWING)
        kb_insert(kb, "banana", Pose(1, 1), 10.0)
        kb_insert(kb, "laptop", Pose(2, 2), 20.0)
        assert kb_snapshot(kb) == HOME + ["banana", "laptop"]

    def test_reinsert_keeps_first_detection_order(self):
        kb = kb_init(_entries(HOME), KBMode.GROWING)
        kb_insert(kb, "banana", Pose(1, 1), 10.0)
        kb_insert(kb, "laptop", Pose(2, 2), 20.0)
        kb_insert(kb, "banana", Pose(3, 3), 30.0)  # pose updates, order holds
        assert kb_snapshot(kb) == HOME + ["banana", "laptop"]
        assert kb_lookup(kb, "banana") == Pose(3, 3)

    def test_fixed_snapshot_constant(self):
        kb = kb_init(_entries(OFFICE), KBMode.FIXED)
        for name in ("banana", "teddy bear", "lounge"):
            kb_insert(kb, name, Pose(5, 5), 1.0)
        assert kb_snapshot(kb) == OFFICE

    def test_document_shape(self):
        kb = kb_init(_entries(HOME), KBMode.GROWING)
        kb_insert(kb, "banana", Pose(1, 2, 0.3), 10.0)
        doc = kb_to_document(kb)
        assert doc[-1] == {
            "name": "banana",
            "x": 1.0,
            "y": 2.0,
            "theta": 0.3,
            "source": "detected",
            "detected_at": 10.0,
        }
        assert all(e["source"] == "initial" for e in doc[:3])


_ops = st.lists(
    st.tuples(
        st.sampled_from(["banana", "laptop", "teddy bear", "kitchen", "cup"]),
        st.floats(-5, 5, allow_nan=False),
        st.floats(-5, 5, allow_nan=False),
    ),
    max_size=30,
)


class TestProperties:
    @given(_ops)
    def test_growing_monotone_key_set(self, ops):
        kb = kb_init(_entries(HOME), KBMode.GROWING)
        seen = set(kb_snapshot(kb))
        for t, (name, x, y) in enumerate(ops):
            kb_insert(kb, name, Pose(x, y), float(t))
            now = set(kb_snapshot(kb))
            assert seen <= now
            seen = now

    @given(_ops)
    def test_fixed_key_set_immutable(self, ops):
        kb = kb_init(_entries(HOME), KBMode.FIXED)
        for t, (name, x, y) in enumerate(ops):
            assert kb_insert(kb, name, Pose(x, y), float(t)) is False
        assert kb_snapshot(kb) == HOME

    @given(_ops)
    def test_lookup_after_insert(self, ops):
        kb = kb_init([], KBMode.GROWING)
        for t, (name, x, y) in enumerate(ops):
            pose = Pose(x, y)
            accepted = kb_insert(kb, name, pose, float(t))
            assert accepted is True
            assert kb_lookup(kb, name) == pose

    @given(_ops)
    def test_snapshot_deterministic(self, ops):
        def build():
            kb = kb_init(_entries(HOME), KBMode.GROWING)
            for t, (name, x, y) in enumerate(ops):
                kb_insert(kb, name, Pose(x, y), float(t))
            return kb_snapshot(kb)

        assert build() == build()
