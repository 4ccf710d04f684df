/**
 * Wire types shared with the scoring service. The service is the authority;
 * these mirror its JSON bodies field for field so a captured payload can be
 * replayed byte-equivalently.
 */

export type Archetype =
  | "WhacAMole"
  | "AudioChoice"
  | "VisualSearchPairs"
  | "FillMissingLetter"
  | "DeleteExtraLetter"
  | "FindSentenceError"
  | "ReorderLetters"
  | "ReorderSyllables"
  | "SeparateWords"
  | "MemorySequence"
  | "Dictation";

/** One stimulus of a question: what is correct, what is bait, what to show. */
export interface StimulusItem {
  targets: string[];
  distractors?: string[];
  prompt_audio?: string;
  /** Pre-rendered text stimulus (word with a gap, fused sentence, ...). */
  display?: string;
  /** How long a memorized stimulus stays visible before it is hidden. */
  display_ms?: number;
}

export interface QuestionSpec {
  qid: number;
  archetype: Archetype;
  time_limit_s: number | null;
  indicators: string[];
  items: StimulusItem[];
}

/** GET /v1/manifest/{variant} */
export interface VariantManifest {
  version: number;
  variant: string;
  question_ids: number[];
  feature_count: number;
  questions: QuestionSpec[];
}

export type EventKind =
  | "ClickTarget"
  | "ClickDistractor"
  | "ClickNeutral"
  | "SubmitText"
  | "QuestionStart"
  | "QuestionEnd";

export interface WireEvent {
  qid: number;
  item: number;
  /** Milliseconds since session start; non-decreasing within the stream. */
  t: number;
  kind: EventKind;
  payload?: string | null;
}

export interface EventBatch {
  seq: number;
  events: WireEvent[];
}

export interface ParticipantIn {
  participant_id: string;
  gender: "Female" | "Male";
  native: boolean;
  lang_fail: boolean;
  age: number;
}

export interface SessionCreated {
  session_id: string;
  variant: string;
  feature_count: number;
  question_ids: number[];
}

export interface AppendAck {
  session_id: string;
  seq: number;
  accepted: number;
  duplicate: boolean;
  total_events: number;
}

export interface PredictionOut {
  score: number;
  flagged: boolean;
  threshold: number;
  model_version: string;
  variant: string;
}

export interface FinalizeResponse {
  session_id: string;
  status: string;
  prediction: PredictionOut;
  feature_vector: number[];
}

export interface SessionStatusOut {
  session_id: string;
  status: string;
  variant: string;
  created_at: number;
  event_count: number;
  batch_count: number;
  prediction: PredictionOut | null;
}

export interface ErrorBody {
  code: string;
  message: string;
  details: Record<string, unknown>;
}
