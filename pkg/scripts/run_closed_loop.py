"""Run the full submission lifecycle end to end against the demo stub.

Creates a throwaway store, submits a proposal, runs a single review, a
revision, a meta review, and the five-model acceptance panel, printing
each state transition. No network access is needed: the gateway is the
deterministic scripted demo backend.

Usage: python3 scripts/run_closed_loop.py [--data-dir DIR]
"""

import argparse
import json
import tempfile
from pathlib import Path

from paperloop.service.app import ServiceState
from paperloop.service.config import ServiceConfig
from paperloop.service.stubs import demo_gateway

PROPOSAL = """\
Adaptive Sparse Training for Low-Resource Translation
We propose a curriculum that anneals the sparsity mask of a transformer
during fine-tuning, trading FLOPs for BLEU on low-resource pairs. The
plan covers three language pairs, two baselines, and an ablation over
mask update frequency.
"""

REVISION = PROPOSAL + "\nRevision: added a fourth language pair and a\ncompute-matched dense baseline, as requested by the review.\n"


def show(label: str, state: ServiceState, sid: str) -> None:
    sub = state.store.get(sid)
    print(f"  {label:<28} status={sub.status.value} version={sub.latest_version.version}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data-dir", default=None, help="store directory (default: temp dir)")
    args = ap.parse_args()
    data_dir = Path(args.data_dir) if args.data_dir else Path(tempfile.mkdtemp(prefix="paperloop-"))

    config = ServiceConfig(
        data_dir=data_dir, auto_review_on_submit=False, auto_rereview=False
    )
    state = ServiceState(config, gateway=demo_gateway())
    print(f"store: {data_dir}")

    _, created = state.op_submit(
        {
            "kind": "proposal",
            "body": PROPOSAL,
            "attribution": {"ai_developer": "demo-agent", "initiating_human": "demo"},
        }
    )
    sid = created["id"]
    show("submitted + scanned", state, sid)

    _, rev = state.op_review(sid, "single", use_rag=False)
    state.jobs.wait(rev["review_id"])
    report = state.op_review_status(sid, rev["review_id"])["report"]
    print(f"  review summary: {report['summary'][:70]}")
    show("review complete", state, sid)

    state.op_revise(sid, {"body": REVISION, "response_letter": "Added the requested baseline."})
    show("revision submitted", state, sid)

    _, meta = state.op_review(sid, "meta", use_rag=False)
    state.jobs.wait(meta["review_id"])
    meta_report = state.op_review_status(sid, meta["review_id"])["report"]
    print(f"  meta rating: {meta_report['rating']}/10 decision={meta_report['decision']}")
    show("meta review complete", state, sid)

    decision = state.op_decide(sid)
    votes = decision["outcome"]["votes"]
    accepts = sum(1 for v in votes if v["decision"] == "accept")
    print(f"  panel: {accepts}/{len(votes)} accept  doi={decision['doi']}")
    show("panel decided", state, sid)

    print(json.dumps({"id": sid, "status": decision["status"], "doi": decision["doi"]}))
    state.jobs.shutdown()


if __name__ == "__main__":
    main()
