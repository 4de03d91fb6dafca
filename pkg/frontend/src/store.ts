/** UI state stores: API responses plus pending optimistic operations.
 *
 * A full refresh() always converges to server state — optimistic
 * entries only exist between a user action and the server's reply, and
 * a failed action rolls its entry back and surfaces a toast.
 */

import { ApiClient, ApiError } from "./client.js";
import {
  toFeedView,
  toSubmissionDetailView,
  type FeedView,
  type SubmissionDetailView,
} from "./views.js";

export interface Toast {
  level: "error" | "info";
  message: string;
}

export class FeedStore {
  view: FeedView | null = null;
  connectivityBanner: string | null = null;

  constructor(private readonly client: ApiClient) {}

  async load(page = 1): Promise<FeedView | null> {
    try {
      this.view = toFeedView(await this.client.getFeed(page));
      this.connectivityBanner = null;
    } catch (err) {
      this.connectivityBanner =
        err instanceof ApiError && err.status === 0
          ? "Cannot reach the API."
          : `Feed failed to load (${err instanceof ApiError ? err.status : "?"}).`;
    }
    return this.view;
  }
}

export class DetailStore {
  view: SubmissionDetailView | null = null;
  toasts: Toast[] = [];

  constructor(
    private readonly client: ApiClient,
    readonly submissionId: string,
  ) {}

  async load(): Promise<SubmissionDetailView> {
    this.view = toSubmissionDetailView(await this.client.getSubmission(this.submissionId));
    return this.view;
  }

  /** Alias that makes the convergence contract explicit. */
  refresh(): Promise<SubmissionDetailView> {
    return this.load();
  }

  private requireView(): SubmissionDetailView {
    if (!this.view) throw new Error("detail view not loaded");
    return this.view;
  }

  async addComment(author: string, body: string): Promise<void> {
    const view = this.requireView();
    const optimistic = {
      author,
      body,
      createdAt: new Date().toISOString(),
      pending: true,
    };
    view.comments.push(optimistic);
    try {
      const response = await this.client.postComment(this.submissionId, author, body);
      const index = view.comments.indexOf(optimistic);
      view.comments.splice(index, 1, {
        author: response.comment.author,
        body: response.comment.body,
        createdAt: response.comment.created_at,
        pending: false,
      });
    } catch (err) {
      const index = view.comments.indexOf(optimistic);
      if (index >= 0) view.comments.splice(index, 1);
      this.toasts.push({
        level: "error",
        message: `Comment failed (${err instanceof ApiError ? err.status : "network"}); discarded.`,
      });
    }
  }

  async like(): Promise<void> {
    const view = this.requireView();
    const before = view.likeCount;
    view.likeCount = before + 1;
    try {
      const response = await this.client.postLike(this.submissionId);
      view.likeCount = response.likes;
    } catch (err) {
      view.likeCount = before;
      this.toasts.push({
        level: "error",
        message: `Like failed (${err instanceof ApiError ? err.status : "network"}).`,
      });
    }
  }
}

/** Polls a submission's status on a fixed interval until stopped. */
export class StatusPoller {
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly client: ApiClient,
    private readonly submissionId: string,
    private readonly onStatus: (status: string) => void,
    private readonly intervalMs = 2000,
  ) {}

  async pollOnce(): Promise<void> {
    const detail = await this.client.getSubmission(this.submissionId);
    this.onStatus(detail.status);
  }

  start(): void {
    if (this.timer) return;
    this.timer = setInterval(() => {
      void this.pollOnce().catch(() => undefined);
    }, this.intervalMs);
  }

  stop(): void {
    if (this.timer) clearInterval(this.timer);
    this.timer = null;
  }
}
