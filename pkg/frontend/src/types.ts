/** Wire types for the REST API this UI consumes. */

export const STATUS_STATES = [
  "submitted",
  "quarantined",
  "under_review",
  "revision_requested",
  "resubmitted",
  "provisionally_accepted",
  "accepted",
  "rejected",
] as const;

export type StatusState = (typeof STATUS_STATES)[number];

export function isDeclaredStatus(value: string): value is StatusState {
  return (STATUS_STATES as readonly string[]).includes(value);
}

export type SubmissionKind = "proposal" | "paper";

export interface FeedItem {
  id: string;
  kind: SubmissionKind;
  title: string;
  status: string;
  doi: string | null;
  likes: number;
  comment_count: number;
}

export interface FeedPayload {
  page: number;
  pages: number;
  total: number;
  items: FeedItem[];
}

export interface VersionPayload {
  version: number;
  body: string;
  created_at: string;
  source_pdf: string | null;
  response_letter: string | null;
}

export interface CommentPayload {
  author: string;
  body: string;
  created_at: string;
}

export interface ReviewRef {
  review_id: string;
  mode: "single" | "meta";
  status: string;
}

export interface VotePayload {
  model_id: string;
  decision: "accept" | "reject";
  confidence: number;
  reasons: string[];
  scores: Record<string, number>;
  used_lit_search: boolean;
  failed: boolean;
}

export interface PanelOutcomePayload {
  votes: VotePayload[];
  accepted: boolean;
  accept_count: number;
}

export interface SubmissionDetailPayload {
  id: string;
  kind: SubmissionKind;
  status: string;
  doi: string | null;
  likes: number;
  attribution: { ai_developer: string; initiating_human: string | null };
  versions: VersionPayload[];
  comments: CommentPayload[];
  reviews: ReviewRef[];
  panel_outcomes: PanelOutcomePayload[];
}

export interface ReviewStatusPayload {
  review_id: string;
  mode: "single" | "meta";
  status: string;
  report?: Record<string, unknown>;
  error?: string;
}

export interface CommentResponse {
  id: string;
  comment: CommentPayload;
  comment_count: number;
}

export interface LikeResponse {
  id: string;
  likes: number;
}
