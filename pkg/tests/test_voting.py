import itertools
import json

import pytest

from conftest import as_reply, fast_retry, make_gateway, vote_doc
from paperloop import schemas
from paperloop.gateway import (
    BackendError,
    LLMGateway,
    ModelPanel,
    ScriptedBackend,
    SchemaViolation,
)
from paperloop.model import (
    Attribution,
    IllegalState,
    LifecycleEvent,
    StatusState,
    SubmissionKind,
    SubmissionVersion,
    utc_now,
)
from paperloop.store import SubmissionStore
from paperloop.voting import (
    DuplicateModel,
    VoteDecision,
    WrongPanelSize,
    cast_vote,
    record_external_review,
    run_panel,
    tally,
)

PANEL = ModelPanel(("m1", "m2", "m3", "m4", "m5"))


def version(body="Title\nA document.", letter=None):
    v = 2 if letter else 1
    return SubmissionVersion(version=v, body=body, created_at=utc_now(), response_letter=letter)


def vote(model_id, decision="accept"):
    return VoteDecision(
        model_id=model_id,
        decision=decision,
        confidence=0.5,
        reasons=(),
        scores={k: 5 for k in schemas.PROPOSAL_SCORE_KEYS},
        used_lit_search=False,
    )


class TestCastVote:
    def test_valid_proposal_vote(self):
        gw = make_gateway(as_reply(vote_doc("proposal", confidence=0.8)))
        decision = cast_vote(version(), SubmissionKind.PROPOSAL, "m1", gw)
        assert decision.decision == "accept"
        assert decision.confidence == 0.8
        assert set(decision.scores) == set(schemas.PROPOSAL_SCORE_KEYS)

    def test_paper_keys_for_proposal_kind_rejected(self):
        gw = make_gateway(as_reply(vote_doc("paper")))
        with pytest.raises(SchemaViolation):
            cast_vote(version(), SubmissionKind.PROPOSAL, "m1", gw)

    def test_confidence_out_of_range_rejected(self):
        gw = make_gateway(as_reply(vote_doc("proposal", confidence=1.3)))
        with pytest.raises(SchemaViolation):
            cast_vote(version(), SubmissionKind.PROPOSAL, "m1", gw)

    def test_revision_carries_letter_into_prompt(self):
        seen = []

        def reply(request):
            seen.append(request.prompt_text)
            return as_reply(vote_doc("paper"))

        cast_vote(version(letter="We fixed it."), SubmissionKind.PAPER, "m1", make_gateway(reply))
        assert "We fixed it." in seen[0]


class TestTally:
    def test_three_accepts_accepted(self):
        outcome = tally([vote("m1"), vote("m2"), vote("m3"), vote("m4", "reject"), vote("m5", "reject")])
        assert outcome.accepted and outcome.accept_count == 3

    def test_two_accepts_rejected(self):
        outcome = tally([vote("m1"), vote("m2"), vote("m3", "reject"), vote("m4", "reject"), vote("m5", "reject")])
        assert not outcome.accepted

    def test_all_32_patterns(self):
        for pattern in itertools.product(("accept", "reject"), repeat=5):
            votes = [vote(f"m{i}", d) for i, d in enumerate(pattern)]
            outcome = tally(votes)
            assert outcome.accepted == (pattern.count("accept") >= 3)

    def test_permutation_invariance(self):
        votes = [vote("m1"), vote("m2", "reject"), vote("m3"), vote("m4", "reject"), vote("m5")]
        for perm in itertools.permutations(votes):
            assert tally(list(perm)).accepted

    def test_monotone_in_accepts(self):
        for pattern in itertools.product(("accept", "reject"), repeat=5):
            base = tally([vote(f"m{i}", d) for i, d in enumerate(pattern)])
            for flip in range(5):
                if pattern[flip] == "reject":
                    flipped = list(pattern)
                    flipped[flip] = "accept"
                    more = tally([vote(f"m{i}", d) for i, d in enumerate(flipped)])
                    assert more.accepted >= base.accepted

    def test_wrong_size_and_duplicates(self):
        with pytest.raises(WrongPanelSize):
            tally([vote("m1")])
        with pytest.raises(DuplicateModel):
            tally([vote("m1"), vote("m1"), vote("m3"), vote("m4"), vote("m5")])


class TestRunPanel:
    def test_majority_accept(self):
        def reply(request):
            decision = "accept" if request.model_id in ("m1", "m2", "m3") else "reject"
            return as_reply(vote_doc("proposal", decision))

        outcome = run_panel(version(), SubmissionKind.PROPOSAL, PANEL, make_gateway(reply))
        assert outcome.accepted and outcome.accept_count == 3

    def test_backend_failures_count_as_reject(self):
        def reply(request):
            if request.model_id in ("m1", "m2"):
                return as_reply(vote_doc("proposal", "accept"))
            raise BackendError("down")

        gw = LLMGateway(ScriptedBackend(reply), retry=fast_retry(1))
        outcome = run_panel(version(), SubmissionKind.PROPOSAL, PANEL, gw)
        assert not outcome.accepted
        assert sum(v.failed for v in outcome.votes) == 3

    def test_reproducible_with_stub(self):
        gw = make_gateway(as_reply(vote_doc("proposal")))
        a = run_panel(version(), SubmissionKind.PROPOSAL, PANEL, gw)
        b = run_panel(version(), SubmissionKind.PROPOSAL, PANEL, gw)
        assert a == b


class TestExternalUpgrade:
    def provisional(self, tmp_path):
        store = SubmissionStore(tmp_path)
        sub = store.create(SubmissionKind.PROPOSAL, "body", Attribution(ai_developer="d"))
        store.apply_event(sub.id, LifecycleEvent.SCAN_PASSED)
        store.apply_event(sub.id, LifecycleEvent.VOTE_ACCEPT)
        return store, sub

    def test_threshold_met_fires_upgrade(self, tmp_path):
        store, sub = self.provisional(tmp_path)
        record_external_review(store, sub.id, "a1", "accept")
        record_external_review(store, sub.id, "a2", "accept")
        progress = record_external_review(store, sub.id, "a3", "reject")
        assert progress.threshold_met
        assert store.get(sub.id).status == StatusState.ACCEPTED

    def test_same_agent_counted_once(self, tmp_path):
        store, sub = self.provisional(tmp_path)
        record_external_review(store, sub.id, "a1", "accept")
        progress = record_external_review(store, sub.id, "a1", "accept")
        assert progress.distinct_reviewers == 1
        assert not progress.threshold_met

    def test_requires_provisional_status(self, tmp_path):
        store = SubmissionStore(tmp_path)
        sub = store.create(SubmissionKind.PROPOSAL, "body", Attribution(ai_developer="d"))
        with pytest.raises(IllegalState):
            record_external_review(store, sub.id, "a1", "accept")

    def test_reject_majority_does_not_upgrade(self, tmp_path):
        store, sub = self.provisional(tmp_path)
        record_external_review(store, sub.id, "a1", "reject")
        record_external_review(store, sub.id, "a2", "reject")
        progress = record_external_review(store, sub.id, "a3", "accept")
        assert not progress.threshold_met
        assert store.get(sub.id).status == StatusState.PROVISIONALLY_ACCEPTED
