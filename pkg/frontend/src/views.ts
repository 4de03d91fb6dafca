/** Pure projections from API payloads to renderable view models. */

import {
  isDeclaredStatus,
  type FeedItem,
  type FeedPayload,
  type ReviewStatusPayload,
  type SubmissionDetailPayload,
} from "./types.js";

export interface FeedItemView {
  id: string;
  kindBadge: "proposal" | "paper";
  titleLine: string;
  statusBadge: string;
  likeCount: number;
  commentCount: number;
}

export interface FeedView {
  items: FeedItemView[];
  page: number;
  pages: number;
  total: number;
  /** Shown when the feed has no items at all. */
  emptyMessage: string | null;
}

export function toFeedItemView(item: FeedItem): FeedItemView {
  if (!isDeclaredStatus(item.status)) {
    throw new Error(`undeclared status ${JSON.stringify(item.status)}`);
  }
  return {
    id: item.id,
    kindBadge: item.kind,
    titleLine: item.title,
    statusBadge: item.status,
    likeCount: item.likes,
    commentCount: item.comment_count,
  };
}

export function toFeedView(payload: FeedPayload): FeedView {
  return {
    items: payload.items.map(toFeedItemView),
    page: payload.page,
    pages: payload.pages,
    total: payload.total,
    emptyMessage: payload.total === 0 ? "No submissions yet." : null,
  };
}

export interface VersionView {
  version: number;
  body: string;
  responseLetter: string | null;
}

export interface ReviewTabView {
  reviewId: string;
  mode: "single" | "meta";
  status: string;
}

export interface VoteTabView {
  accepted: boolean;
  acceptCount: number;
  votes: { modelId: string; decision: string }[];
}

export interface CommentView {
  author: string;
  body: string;
  createdAt: string;
  /** True while an optimistic comment awaits server confirmation. */
  pending: boolean;
}

export interface SubmissionDetailView {
  id: string;
  kindBadge: "proposal" | "paper";
  statusBadge: string;
  doi: string | null;
  likeCount: number;
  /** Exactly the stored versions, in stored order. */
  versions: VersionView[];
  selectedVersion: number;
  reviewTabs: { single: ReviewTabView[]; meta: ReviewTabView[]; votes: VoteTabView[] };
  comments: CommentView[];
}

export function toSubmissionDetailView(
  payload: SubmissionDetailPayload,
): SubmissionDetailView {
  if (!isDeclaredStatus(payload.status)) {
    throw new Error(`undeclared status ${JSON.stringify(payload.status)}`);
  }
  const versions = payload.versions.map((v) => ({
    version: v.version,
    body: v.body,
    responseLetter: v.response_letter,
  }));
  for (let i = 1; i < versions.length; i++) {
    if (versions[i]!.version <= versions[i - 1]!.version) {
      throw new Error("versions out of order in API payload");
    }
  }
  const tabs = (mode: "single" | "meta") =>
    payload.reviews
      .filter((r) => r.mode === mode)
      .map((r) => ({ reviewId: r.review_id, mode: r.mode, status: r.status }));
  return {
    id: payload.id,
    kindBadge: payload.kind,
    statusBadge: payload.status,
    doi: payload.doi,
    likeCount: payload.likes,
    versions,
    selectedVersion: versions.length ? versions[versions.length - 1]!.version : 0,
    reviewTabs: {
      single: tabs("single"),
      meta: tabs("meta"),
      votes: payload.panel_outcomes.map((o) => ({
        accepted: o.accepted,
        acceptCount: o.accept_count,
        votes: o.votes.map((v) => ({ modelId: v.model_id, decision: v.decision })),
      })),
    },
    comments: payload.comments.map((c) => ({
      author: c.author,
      body: c.body,
      createdAt: c.created_at,
      pending: false,
    })),
  };
}

export function reviewReportLines(payload: ReviewStatusPayload): string[] {
  if (payload.status !== "done" || !payload.report) {
    return [`review ${payload.review_id}: ${payload.status}`];
  }
  const report = payload.report as Record<string, unknown>;
  const lines: string[] = [];
  if (typeof report.summary === "string") lines.push(report.summary);
  if (typeof report.rating === "number") lines.push(`Rating: ${report.rating}/10`);
  if (typeof report.decision === "string") lines.push(`Decision: ${report.decision}`);
  return lines;
}
