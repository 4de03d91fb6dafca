import base64
import json
import re
import threading

import pytest
from fastapi.testclient import TestClient

from conftest import (
    as_reply,
    clean_pdf,
    make_gateway,
    paper_review_doc,
    proposal_review_doc,
    vote_doc,
)
from paperloop.guard import AttackCategory, synthesize_attack
from paperloop.service.app import create_app
from paperloop.service.config import ServiceConfig, load_config
from paperloop.store import SubmissionStore


def scripted_reply(request):
    """Deterministic service stub: reviews for all kinds, 3-of-5 accepts."""
    text = request.prompt_text
    if '"decision"' in text and '"scores"' in text:
        accept = request.model_id in ("model-a", "model-b", "model-c")
        kind = "proposal" if '"feasibility"' in text else "paper"
        return as_reply(vote_doc(kind, "accept" if accept else "reject"))
    if "methodological_quality" in text:
        return as_reply(proposal_review_doc())
    return as_reply(paper_review_doc())


def build_client(tmp_path, **config_overrides):
    defaults = dict(data_dir=tmp_path / "data", auto_review_on_submit=False)
    defaults.update(config_overrides)
    config = ServiceConfig(**defaults)
    app = create_app(config, gateway=make_gateway(scripted_reply))
    return TestClient(app)


def submit(client, body="Title line\nA proposal body.", kind="proposal"):
    response = client.post(
        "/submissions",
        json={"kind": kind, "body": body, "attribution": {"ai_developer": "agent-1"}},
    )
    assert response.status_code == 201, response.text
    return response.json()


def run_review(client, sid, mode="single"):
    response = client.post(f"/submissions/{sid}/reviews?mode={mode}")
    assert response.status_code == 202, response.text
    rid = response.json()["review_id"]
    client.app.state.service.jobs.wait(rid)
    return rid


class TestSubmit:
    def test_clean_text_proposal(self, tmp_path):
        client = build_client(tmp_path)
        created = submit(client)
        assert created["status"] == "under_review"
        assert client.get(f"/submissions/{created['id']}").json()["kind"] == "proposal"

    def test_empty_body_400(self, tmp_path):
        client = build_client(tmp_path)
        response = client.post(
            "/submissions",
            json={"kind": "proposal", "body": "", "attribution": {"ai_developer": "a"}},
        )
        assert response.status_code == 400

    def test_oversize_413(self, tmp_path):
        client = build_client(tmp_path, max_body_bytes=64)
        response = client.post(
            "/submissions",
            json={"kind": "paper", "body": "x" * 100, "attribution": {"ai_developer": "a"}},
        )
        assert response.status_code == 413

    def test_bad_kind_400(self, tmp_path):
        client = build_client(tmp_path)
        response = client.post(
            "/submissions",
            json={"kind": "poem", "body": "x", "attribution": {"ai_developer": "a"}},
        )
        assert response.status_code == 400

    def test_clean_pdf_accepted(self, tmp_path):
        client = build_client(tmp_path)
        response = client.post(
            "/submissions",
            json={
                "kind": "paper",
                "pdf_base64": base64.b64encode(clean_pdf()).decode(),
                "attribution": {"ai_developer": "a"},
            },
        )
        assert response.status_code == 201
        body = response.json()
        assert body["status"] == "under_review"
        assert body["scan_report"]["flagged"] is False

    def test_attack_pdf_quarantined_422(self, tmp_path):
        client = build_client(tmp_path)
        attacked = synthesize_attack(clean_pdf(), AttackCategory.WHITE_TEXT, 3)
        response = client.post(
            "/submissions",
            json={
                "kind": "paper",
                "pdf_base64": base64.b64encode(attacked).decode(),
                "attribution": {"ai_developer": "a"},
            },
        )
        assert response.status_code == 422
        body = response.json()
        assert body["status"] == "quarantined"
        assert "WhiteText" in body["scan_report"]["categories"]
        detail = client.get(f"/submissions/{body['id']}")
        assert detail.json()["status"] == "quarantined"

    def test_auto_review_on_submit(self, tmp_path):
        client = build_client(tmp_path, auto_review_on_submit=True)
        created = submit(client)
        client.app.state.service.jobs.wait(created["review_id"])
        assert (
            client.get(f"/submissions/{created['id']}").json()["status"]
            == "revision_requested"
        )


class TestReviews:
    def test_single_review_retrievable(self, tmp_path):
        client = build_client(tmp_path)
        sid = submit(client)["id"]
        rid = run_review(client, sid)
        status = client.get(f"/submissions/{sid}/reviews/{rid}").json()
        assert status["status"] == "done"
        assert status["report"]["summary"]
        assert client.get(f"/submissions/{sid}").json()["status"] == "revision_requested"

    def test_meta_review_retrievable(self, tmp_path):
        client = build_client(tmp_path)
        sid = submit(client)["id"]
        rid = run_review(client, sid, mode="meta")
        status = client.get(f"/submissions/{sid}/reviews/{rid}").json()
        assert status["status"] == "failed" or "rating" in status.get("report", {})

    def test_unknown_submission_404(self, tmp_path):
        client = build_client(tmp_path)
        assert client.post("/submissions/nope/reviews").status_code == 404

    def test_review_after_decision_409(self, tmp_path):
        client = build_client(tmp_path)
        sid = submit(client)["id"]
        client.post(f"/submissions/{sid}/decision")
        assert client.post(f"/submissions/{sid}/reviews").status_code == 409

    def test_bad_mode_400(self, tmp_path):
        client = build_client(tmp_path)
        sid = submit(client)["id"]
        assert client.post(f"/submissions/{sid}/reviews?mode=chaotic").status_code == 400


class TestRevise:
    def revision_requested(self, client):
        sid = submit(client)["id"]
        run_review(client, sid)
        return sid

    def test_revision_with_letter(self, tmp_path):
        client = build_client(tmp_path, auto_rereview=False)
        sid = self.revision_requested(client)
        response = client.post(
            f"/submissions/{sid}/versions",
            json={"body": "Title line\nRevised body.", "response_letter": "We fixed it."},
        )
        assert response.status_code == 201
        assert response.json()["version"] == 2
        detail = client.get(f"/submissions/{sid}").json()
        assert detail["status"] == "resubmitted"
        assert detail["versions"][1]["response_letter"] == "We fixed it."

    def test_revise_on_quarantined_409(self, tmp_path):
        client = build_client(tmp_path)
        attacked = synthesize_attack(clean_pdf(), AttackCategory.METADATA, 1)
        created = client.post(
            "/submissions",
            json={
                "kind": "paper",
                "pdf_base64": base64.b64encode(attacked).decode(),
                "attribution": {"ai_developer": "a"},
            },
        ).json()
        response = client.post(
            f"/submissions/{created['id']}/versions", json={"body": "new"}
        )
        assert response.status_code == 409

    def test_concurrent_revisions_one_wins(self, tmp_path):
        client = build_client(tmp_path, auto_rereview=False)
        sid = self.revision_requested(client)
        barrier = threading.Barrier(2)
        codes = []

        def attempt(n):
            barrier.wait()
            response = client.post(
                f"/submissions/{sid}/versions", json={"body": f"revision {n}"}
            )
            codes.append(response.status_code)

        threads = [threading.Thread(target=attempt, args=(i,)) for i in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(codes) == [201, 409]
        assert len(client.get(f"/submissions/{sid}").json()["versions"]) == 2


class TestDecision:
    def test_majority_accept_assigns_doi(self, tmp_path):
        client = build_client(tmp_path)
        sid = submit(client)["id"]
        response = client.post(f"/submissions/{sid}/decision")
        assert response.status_code == 200
        body = response.json()
        assert body["status"] == "provisionally_accepted"
        assert re.fullmatch(rf"10\.99999/aixiv\.{sid}\.v1", body["doi"])
        assert body["outcome"]["accepted"] is True

    def test_majority_reject(self, tmp_path):
        def all_reject(request):
            text = request.prompt_text
            if '"decision"' in text and '"scores"' in text:
                return as_reply(vote_doc("proposal", "reject"))
            return as_reply(proposal_review_doc())

        config = ServiceConfig(data_dir=tmp_path / "d", auto_review_on_submit=False)
        client = TestClient(create_app(config, gateway=make_gateway(all_reject)))
        sid = submit(client)["id"]
        body = client.post(f"/submissions/{sid}/decision").json()
        assert body["status"] == "rejected" and body["doi"] is None

    def test_decision_on_quarantined_409(self, tmp_path):
        client = build_client(tmp_path)
        attacked = synthesize_attack(clean_pdf(), AttackCategory.INVISIBLE_CHARS, 2)
        created = client.post(
            "/submissions",
            json={
                "kind": "paper",
                "pdf_base64": base64.b64encode(attacked).decode(),
                "attribution": {"ai_developer": "a"},
            },
        ).json()
        assert client.post(f"/submissions/{created['id']}/decision").status_code == 409


class TestEngagement:
    def test_like_twice_no_dedup(self, tmp_path):
        client = build_client(tmp_path)
        sid = submit(client)["id"]
        client.post(f"/submissions/{sid}/likes")
        assert client.post(f"/submissions/{sid}/likes").json()["likes"] == 2

    def test_comment_appends(self, tmp_path):
        client = build_client(tmp_path)
        sid = submit(client)["id"]
        response = client.post(
            f"/submissions/{sid}/comments", json={"author": "h1", "body": "nice method"}
        )
        assert response.status_code == 201
        assert response.json()["comment"]["body"] == "nice method"
        detail = client.get(f"/submissions/{sid}").json()
        assert [c["body"] for c in detail["comments"]] == ["nice method"]

    def test_engagement_404(self, tmp_path):
        client = build_client(tmp_path)
        assert client.post("/submissions/missing/likes").status_code == 404
        assert (
            client.post("/submissions/missing/comments", json={"body": "x"}).status_code
            == 404
        )


class TestFeed:
    def test_pagination_25_items_3_pages(self, tmp_path):
        client = build_client(tmp_path)
        ids = [submit(client, body=f"Doc {i}\nbody")["id"] for i in range(25)]
        page1 = client.get("/feed?page=1").json()
        assert page1["pages"] == 3 and page1["total"] == 25
        assert len(page1["items"]) == 10
        # newest first: the last submission leads the feed
        assert page1["items"][0]["id"] == ids[-1]
        page3 = client.get("/feed?page=3").json()
        assert len(page3["items"]) == 5

    def test_feed_item_shape(self, tmp_path):
        client = build_client(tmp_path)
        sid = submit(client, body="A Great Title\nbody text")["id"]
        client.post(f"/submissions/{sid}/likes")
        (item,) = client.get("/feed").json()["items"]
        assert item["title"] == "A Great Title"
        assert item["status"] == "under_review"
        assert item["likes"] == 1

    def test_page_zero_400(self, tmp_path):
        client = build_client(tmp_path)
        assert client.get("/feed?page=0").status_code == 400


class TestTools:
    def test_manifest_unique_names_and_schemas(self, tmp_path):
        client = build_client(tmp_path)
        tools = client.get("/tools").json()["tools"]
        names = [t["name"] for t in tools]
        assert len(names) == len(set(names))
        assert {"upload", "retrieve", "review", "discuss"} <= set(names)
        assert all("input_schema" in t and "output_schema" in t for t in tools)

    def test_dispatch_parity_with_rest(self, tmp_path):
        client = build_client(tmp_path)
        via_tool = client.post(
            "/tools/upload",
            json={
                "kind": "proposal",
                "body": "T\nbody",
                "attribution": {"ai_developer": "agent"},
            },
        )
        assert via_tool.status_code == 201
        sid = via_tool.json()["id"]
        assert (
            client.post("/tools/retrieve", json={"id": sid}).json()
            == client.get(f"/submissions/{sid}").json()
        )
        discussed = client.post(
            "/tools/discuss", json={"id": sid, "author": "h", "body": "hello"}
        )
        assert discussed.json()["comment_count"] == 1

    def test_invalid_input_rejected_before_dispatch(self, tmp_path):
        client = build_client(tmp_path)
        response = client.post("/tools/upload", json={"kind": "proposal"})
        assert response.status_code == 400
        assert "invalid tool input" in response.text

    def test_unknown_tool_404(self, tmp_path):
        client = build_client(tmp_path)
        assert client.post("/tools/nuke", json={}).status_code == 404


class TestReplay:
    def test_event_log_reconstructs_state(self, tmp_path):
        client = build_client(tmp_path, auto_rereview=False)
        sid = submit(client)["id"]
        run_review(client, sid)
        client.post(
            f"/submissions/{sid}/versions",
            json={"body": "T\nv2", "response_letter": "done"},
        )
        client.post(f"/submissions/{sid}/decision")
        client.post(f"/submissions/{sid}/likes")
        client.post(f"/submissions/{sid}/comments", json={"body": "gg"})
        live = client.app.state.service.store
        replayed = SubmissionStore(tmp_path / "data")
        assert replayed.snapshot_bytes() == live.snapshot_bytes()
        assert replayed.get(sid).status.value == "provisionally_accepted"


class TestConfig:
    def test_yaml_plus_env_overrides(self, tmp_path):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("port: 9000\npage_size: 7\n", encoding="utf-8")
        config = load_config(cfg, env={"PAPERLOOP_PAGE_SIZE": "3"})
        assert config.port == 9000
        assert config.page_size == 3

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "cfg.yaml"
        cfg.write_text("warp_factor: 9\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_config(cfg)

    def test_fixture_backend_requires_dir(self):
        with pytest.raises(ValueError):
            ServiceConfig(backend="fixture").validate()
