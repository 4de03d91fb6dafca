import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import (
    as_reply,
    fast_retry,
    make_gateway,
    meta_review_doc,
    planner_doc,
    sub_review_doc,
)
from paperloop.gateway import BackendError, LLMGateway, ScriptedBackend, SchemaViolation
from paperloop.metareview import (
    GENERALIST,
    ReviewerSpec,
    TooFewReviews,
    clamp_reviewer_count,
    default_standard,
    plan_reviewers,
    run_meta_review,
    run_sub_reviews,
    summarize,
)
from paperloop.model import SubmissionKind, SubmissionVersion, utc_now

STANDARD = default_standard(SubmissionKind.PROPOSAL)


def version(body="Title\nA proposal."):
    return SubmissionVersion(version=1, body=body, created_at=utc_now())


def specs(n):
    return [ReviewerSpec(f"r{i}", f"e{i}", "inst") for i in range(n)]


class TestPlanner:
    def test_in_range_count_kept(self):
        gw = make_gateway(as_reply(planner_doc(4)))
        assert len(plan_reviewers(version(), STANDARD, "m1", gw)) == 4

    def test_overflow_truncated_to_six(self):
        gw = make_gateway(as_reply(planner_doc(9)))
        assert len(plan_reviewers(version(), STANDARD, "m1", gw)) == 6

    def test_underflow_padded_with_generalist(self):
        gw = make_gateway(as_reply(planner_doc(1)))
        result = plan_reviewers(version(), STANDARD, "m1", gw)
        assert len(result) == 2
        assert result[1] == GENERALIST

    @given(st.integers(min_value=0, max_value=10))
    def test_clamp_oracle(self, n):
        assert clamp_reviewer_count(n) == max(2, min(6, n))

    @given(st.integers(min_value=0, max_value=12))
    def test_planned_count_always_within_hard_range(self, n):
        gw = make_gateway(as_reply(planner_doc(n)))
        assert 2 <= len(plan_reviewers(version(), STANDARD, "m1", gw)) <= 6


class TestSubReviews:
    def test_all_succeed(self):
        gw = make_gateway(as_reply(sub_review_doc()))
        reviews = run_sub_reviews(specs(3), version(), STANDARD, "m1", gw)
        assert len(reviews) == 3
        assert {r.reviewer_role for r in reviews} == {"r0", "r1", "r2"}

    def test_too_many_failures(self):
        calls = []

        def reply(request):
            calls.append(request)
            if "r0" in request.prompt_text:
                return as_reply(sub_review_doc())
            raise BackendError("down")

        gw = LLMGateway(ScriptedBackend(reply), retry=fast_retry(1))
        with pytest.raises(TooFewReviews):
            run_sub_reviews(specs(3), version(), STANDARD, "m1", gw)

    def test_single_failure_dropped(self):
        def reply(request):
            if "r1" in request.prompt_text:
                raise BackendError("down")
            return as_reply(sub_review_doc())

        gw = LLMGateway(ScriptedBackend(reply), retry=fast_retry(1))
        reviews = run_sub_reviews(specs(3), version(), STANDARD, "m1", gw)
        assert {r.reviewer_role for r in reviews} == {"r0", "r2"}

    def test_out_of_range_score_is_schema_violation(self):
        gw = make_gateway(as_reply(sub_review_doc(score=7)))
        with pytest.raises(SchemaViolation):
            run_sub_reviews(specs(2), version(), STANDARD, "m1", gw, raise_per_reviewer=True)


class TestSummarize:
    def reviews(self, n=3):
        gw = make_gateway(as_reply(sub_review_doc()))
        return run_sub_reviews(specs(n), version(), STANDARD, "m1", gw)

    def test_passthrough_of_rating_and_decision(self):
        gw = make_gateway(as_reply(meta_review_doc(rating=5, decision="reject")))
        report = summarize(self.reviews(), STANDARD, "m1", gw)
        assert report.rating == 5 and report.decision == "reject"

    def test_rating_out_of_scale_rejected(self):
        gw = make_gateway(as_reply(meta_review_doc(rating=11)))
        with pytest.raises(SchemaViolation):
            summarize(self.reviews(), STANDARD, "m1", gw)

    def test_engine_does_not_reconcile_scores_with_rating(self):
        doc = meta_review_doc(rating=3)
        doc["criteria_scores"] = {"soundness": 4, "presentation": 4, "contribution": 4}
        gw = make_gateway(as_reply(doc))
        report = summarize(self.reviews(), STANDARD, "m1", gw)
        assert report.criteria_scores == {"soundness": 4, "presentation": 4, "contribution": 4}
        assert report.rating == 3

    def test_requires_two_reviews(self):
        gw = make_gateway(as_reply(meta_review_doc()))
        with pytest.raises(TooFewReviews):
            summarize(self.reviews()[:1], STANDARD, "m1", gw)


def test_full_pipeline_is_deterministic():
    def reply(request):
        text = request.prompt_text
        if "Planner Agent" in text:
            return as_reply(planner_doc(3))
        if "Summarizer Agent" in text:
            return as_reply(meta_review_doc(rating=4, decision="accept"))
        return as_reply(sub_review_doc())

    gw = make_gateway(reply)
    a = run_meta_review(version(), SubmissionKind.PROPOSAL, "m1", gw)
    b = run_meta_review(version(), SubmissionKind.PROPOSAL, "m1", gw)
    assert a == b
    assert a.decision == "accept" and a.rating == 4
