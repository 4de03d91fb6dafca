import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/client.js";
import { DetailStore } from "../src/store.js";
import { reviewReportLines } from "../src/views.js";
import { makeFixtureServer } from "./fixtureServer.js";

const BASE = "http://api.test";
const SID = "sub0001";

describe("submission detail", () => {
  it("lists exactly the stored versions in order, with the response letter", async () => {
    const server = makeFixtureServer();
    const store = new DetailStore(new ApiClient(BASE, server.fetch), SID);
    const view = await store.load();
    expect(view.versions.map((v) => v.version)).toEqual([1, 2]);
    expect(view.versions[0]!.responseLetter).toBeNull();
    expect(view.versions[1]!.responseLetter).toBe("Addressed all points.");
    expect(view.selectedVersion).toBe(2);
  });

  it("shows single, meta, and vote tabs from the fixture", async () => {
    const server = makeFixtureServer();
    const client = new ApiClient(BASE, server.fetch);
    const store = new DetailStore(client, SID);
    const view = await store.load();
    expect(view.reviewTabs.single).toHaveLength(1);
    expect(view.reviewTabs.meta).toHaveLength(1);
    expect(view.reviewTabs.votes).toHaveLength(1);
    expect(view.reviewTabs.votes[0]!.acceptCount).toBe(3);
    expect(view.reviewTabs.votes[0]!.accepted).toBe(true);
    expect(view.statusBadge).toBe("provisionally_accepted");
    expect(view.doi).toBe("10.99999/aixiv.sub0001.v2");

    const meta = await client.getReview(SID, view.reviewTabs.meta[0]!.reviewId);
    const lines = reviewReportLines(meta);
    expect(lines.some((l) => l.startsWith("Rating:"))).toBe(true);
  });

  it("only issues requests on the documented REST surface", async () => {
    const server = makeFixtureServer();
    const client = new ApiClient(BASE, server.fetch);
    const store = new DetailStore(client, SID);
    await store.load();
    await store.addComment("reader", "great work");
    await store.like();
    const allowed = [
      /^GET \/feed(\?page=\d+)?$/,
      /^GET \/submissions\/[^/]+$/,
      /^GET \/submissions\/[^/]+\/reviews\/[^/]+$/,
      /^POST \/submissions\/[^/]+\/comments$/,
      /^POST \/submissions\/[^/]+\/likes$/,
    ];
    for (const line of server.requests) {
      expect(allowed.some((re) => re.test(line)), line).toBe(true);
    }
  });
});

describe("engagement round trips", () => {
  it("a posted comment appears at the thread tail and bumps the count", async () => {
    const server = makeFixtureServer();
    const store = new DetailStore(new ApiClient(BASE, server.fetch), SID);
    const view = await store.load();
    const before = view.comments.length;
    await store.addComment("reader", "nice method");
    expect(view.comments).toHaveLength(before + 1);
    const tail = view.comments[view.comments.length - 1]!;
    expect(tail).toMatchObject({ author: "reader", body: "nice method", pending: false });
    // converges with a full refresh
    const refreshed = await store.refresh();
    expect(refreshed.comments).toHaveLength(before + 1);
    expect(refreshed.comments[refreshed.comments.length - 1]!.body).toBe("nice method");
  });

  it("a like increments the count by one", async () => {
    const server = makeFixtureServer();
    const store = new DetailStore(new ApiClient(BASE, server.fetch), SID);
    const view = await store.load();
    const before = view.likeCount;
    await store.like();
    expect(view.likeCount).toBe(before + 1);
    expect((await store.refresh()).likeCount).toBe(before + 1);
  });

  it("rolls back the optimistic comment on an injected 404", async () => {
    const server = makeFixtureServer();
    const store = new DetailStore(new ApiClient(BASE, server.fetch), SID);
    const view = await store.load();
    const before = view.comments.length;
    server.injectFault({ method: "POST", pathSuffix: "/comments", status: 404 });
    await store.addComment("reader", "will be rolled back");
    expect(view.comments).toHaveLength(before);
    expect(view.comments.some((c) => c.body === "will be rolled back")).toBe(false);
    expect(store.toasts.at(-1)).toMatchObject({ level: "error" });
    // server state untouched: refresh shows the same thread
    expect((await store.refresh()).comments).toHaveLength(before);
  });

  it("rolls back an optimistic like on failure", async () => {
    const server = makeFixtureServer();
    const store = new DetailStore(new ApiClient(BASE, server.fetch), SID);
    const view = await store.load();
    const before = view.likeCount;
    server.injectFault({ method: "POST", pathSuffix: "/likes", status: 500 });
    await store.like();
    expect(view.likeCount).toBe(before);
    expect(store.toasts.at(-1)).toMatchObject({ level: "error" });
  });
});
