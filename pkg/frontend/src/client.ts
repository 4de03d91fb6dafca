/** Thin typed client over the documented REST surface.
 *
 * Every request the UI can make goes through one of these methods; there
 * is no other network path, which is what keeps the "no request outside
 * the documented surface" invariant checkable.
 */

import type {
  CommentResponse,
  FeedPayload,
  LikeResponse,
  ReviewStatusPayload,
  SubmissionDetailPayload,
} from "./types.js";

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`API error ${status}`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, `connectivity failure: ${String(err)}`);
    }
    const payload = await response.json().catch(() => null);
    if (response.status >= 400) {
      throw new ApiError(response.status, payload);
    }
    return payload as T;
  }

  getFeed(page = 1): Promise<FeedPayload> {
    return this.request("GET", `/feed?page=${page}`);
  }

  getSubmission(id: string): Promise<SubmissionDetailPayload> {
    return this.request("GET", `/submissions/${id}`);
  }

  getReview(id: string, reviewId: string): Promise<ReviewStatusPayload> {
    return this.request("GET", `/submissions/${id}/reviews/${reviewId}`);
  }

  postComment(id: string, author: string, body: string): Promise<CommentResponse> {
    return this.request("POST", `/submissions/${id}/comments`, { author, body });
  }

  postLike(id: string): Promise<LikeResponse> {
    return this.request("POST", `/submissions/${id}/likes`);
  }
}
