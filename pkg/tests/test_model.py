import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paperloop import model
from paperloop.model import (
    Attribution,
    LifecycleEvent,
    StatusState,
    SubmissionKind,
    TRANSITION_TABLE,
    add_revision,
    assign_doi,
    create_submission,
    transition,
)

ATTR = Attribution(ai_developer="M1")


def make(kind=SubmissionKind.PROPOSAL, body="An idea.\nWith details."):
    return create_submission(kind, body, ATTR)


class TestCreate:
    def test_initial_state(self):
        sub = make()
        assert sub.status == StatusState.SUBMITTED
        assert len(sub.versions) == 1
        assert sub.versions[0].version == 1

    def test_empty_body_rejected(self):
        with pytest.raises(model.EmptyBody):
            create_submission(SubmissionKind.PAPER, "", ATTR)

    def test_ids_unique_over_many_creations(self):
        seen = set()
        for _ in range(10_000):
            sub = make()
            assert sub.id not in seen
            seen.add(sub.id)

    def test_attribution_requires_developer(self):
        with pytest.raises(model.ModelError):
            Attribution(ai_developer="")


class TestRevision:
    def test_revision_appends_and_resubmits(self):
        sub = make()
        transition(sub, LifecycleEvent.SCAN_PASSED)
        transition(sub, LifecycleEvent.REVIEW_COMPLETE)
        add_revision(sub, "Better idea.", "Thanks, fixed.")
        assert [v.version for v in sub.versions] == [1, 2]
        assert sub.status == StatusState.RESUBMITTED
        assert sub.latest_version.response_letter == "Thanks, fixed."

    def test_revising_terminal_state_fails(self):
        sub = make()
        sub.status = StatusState.ACCEPTED
        with pytest.raises(model.IllegalState):
            add_revision(sub, "nope")

    def test_five_sequential_revisions_number_1_to_6(self):
        sub = make()
        for _ in range(5):
            transition(sub, LifecycleEvent.SCAN_PASSED)
            transition(sub, LifecycleEvent.REVIEW_COMPLETE)
            add_revision(sub, "revised " + "x" * sub.latest_version.version)
        assert [v.version for v in sub.versions] == [1, 2, 3, 4, 5, 6]

    def test_response_letter_forbidden_on_v1(self):
        with pytest.raises(model.ModelError):
            model.SubmissionVersion(
                version=1, body="x", created_at=model.utc_now(), response_letter="hi"
            )


class TestTransition:
    def test_scan_passed_from_submitted(self):
        sub = make()
        assert transition(sub, LifecycleEvent.SCAN_PASSED) == StatusState.UNDER_REVIEW

    def test_external_threshold_upgrades(self):
        sub = make()
        sub.status = StatusState.PROVISIONALLY_ACCEPTED
        assert (
            transition(sub, LifecycleEvent.EXTERNAL_THRESHOLD_MET)
            == StatusState.ACCEPTED
        )

    def test_exhaustive_sweep_matches_table(self):
        # Brute force over all 8x7 pairs: success exactly on declared edges,
        # and failures never mutate the submission.
        for state in StatusState:
            for event in LifecycleEvent:
                sub = make()
                sub.status = state
                if (state, event) in TRANSITION_TABLE:
                    assert transition(sub, event) == TRANSITION_TABLE[(state, event)]
                else:
                    with pytest.raises(model.IllegalTransition):
                        transition(sub, event)
                    assert sub.status == state

    def test_quarantine_only_from_submitted_or_resubmitted(self):
        sources = {
            s for (s, e) in TRANSITION_TABLE
            if TRANSITION_TABLE[(s, e)] == StatusState.QUARANTINED
        }
        assert sources == {StatusState.SUBMITTED, StatusState.RESUBMITTED}

    @settings(max_examples=200)
    @given(st.lists(st.sampled_from(list(LifecycleEvent)), max_size=30))
    def test_random_event_sequences_stay_in_declared_states(self, events):
        sub = make()
        for event in events:
            before = sub.status
            try:
                transition(sub, event)
            except model.IllegalTransition:
                assert sub.status == before
            else:
                assert TRANSITION_TABLE[(before, event)] == sub.status
            assert isinstance(sub.status, StatusState)


class TestDoi:
    def test_format(self):
        sub = make()
        sub.status = StatusState.UNDER_REVIEW
        transition(sub, LifecycleEvent.REVIEW_COMPLETE)
        add_revision(sub, "v2 body")
        sub.status = StatusState.ACCEPTED
        doi = assign_doi(sub)
        assert doi == f"10.99999/aixiv.{sub.id}.v2"
        assert re.fullmatch(r"10\.99999/aixiv\.[0-9a-f]{12}\.v\d+", doi)

    def test_second_assignment_errors(self):
        sub = make()
        sub.status = StatusState.PROVISIONALLY_ACCEPTED
        assign_doi(sub)
        with pytest.raises(model.AlreadyAssigned):
            assign_doi(sub)

    def test_rejected_submission_cannot_get_doi(self):
        sub = make()
        sub.status = StatusState.REJECTED
        with pytest.raises(model.IllegalState):
            assign_doi(sub)
