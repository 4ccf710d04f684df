/**
 * Session state machine. Single-threaded, one active question at a time:
 * questions run in ascending qid order, every interaction is stamped and
 * buffered while its question is open, and each question's events leave as
 * one ordered batch when the bracket closes. Interactions outside an open
 * bracket are a caller bug and throw instead of producing a mis-attributed
 * event.
 */

import { classifyClick } from "./classify.js";
import type {
  EventKind,
  QuestionSpec,
  VariantManifest,
  WireEvent,
} from "./types.js";

/** The whole test ends after this long, answered or not. */
export const SESSION_CAP_MS = 15 * 60 * 1000;

export class EngineStateError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EngineStateError";
  }
}

export interface EngineOptions {
  manifest: VariantManifest;
  /** Receives each question's events as one batch, in order. */
  enqueue: (events: WireEvent[]) => void;
  /** Millisecond clock; injectable so drivers can run on virtual time. */
  now?: () => number;
  sessionCapMs?: number;
}

export class SessionEngine {
  private readonly questions: QuestionSpec[];
  private readonly enqueue: (events: WireEvent[]) => void;
  private readonly clock: () => number;
  private readonly capMs: number;

  private cursor = 0;
  private openQuestion: QuestionSpec | null = null;
  private startedAt: number | null = null;
  private lastT = 0;
  private buffer: WireEvent[] = [];
  private readonly log: WireEvent[] = [];
  private fallbacks: string[] = [];

  constructor(options: EngineOptions) {
    this.questions = [...options.manifest.questions].sort((a, b) => a.qid - b.qid);
    this.enqueue = options.enqueue;
    this.clock = options.now ?? (() => Date.now());
    this.capMs = options.sessionCapMs ?? SESSION_CAP_MS;
  }

  start(): void {
    if (this.startedAt !== null) throw new EngineStateError("session already started");
    this.startedAt = this.clock();
  }

  get done(): boolean {
    return this.cursor >= this.questions.length;
  }

  get current(): QuestionSpec | null {
    return this.openQuestion;
  }

  elapsedMs(): number {
    if (this.startedAt === null) return 0;
    return this.clock() - this.startedAt;
  }

  get capReached(): boolean {
    return this.elapsedMs() >= this.capMs;
  }

  /** Every event emitted so far, in order; the session's intended stream. */
  get events(): readonly WireEvent[] {
    return this.log;
  }

  /**
   * Open the next question. When the session cap has passed, the question is
   * bracketed empty instead (zero measures) and false is returned, so a
   * capped session still finalizes with every question accounted for.
   */
  beginQuestion(): boolean {
    if (this.startedAt === null) throw new EngineStateError("session not started");
    if (this.openQuestion !== null) {
      throw new EngineStateError("previous question still open");
    }
    if (this.done) throw new EngineStateError("no questions left");
    const spec = this.questions[this.cursor]!;
    this.emit(spec.qid, 0, "QuestionStart");
    if (this.capReached) {
      this.closeQuestion(spec);
      return false;
    }
    this.openQuestion = spec;
    return true;
  }

  /** Label a clicked symbol against the open question and emit the event. */
  clickSymbol(itemIndex: number, symbol: string): EventKind {
    const spec = this.requireOpen("click");
    const item = this.requireItem(spec, itemIndex);
    const kind = classifyClick(item, symbol);
    this.emit(spec.qid, itemIndex, kind, symbol);
    return kind;
  }

  submitText(itemIndex: number, text: string): void {
    const spec = this.requireOpen("submit");
    this.requireItem(spec, itemIndex);
    this.emit(spec.qid, itemIndex, "SubmitText", text);
  }

  /**
   * Record that an audio prompt could not be played and a text fallback was
   * shown. Carried on the closing bracket's payload, which the grader
   * ignores, so the annotation never shifts a measure.
   */
  noteAudioFallback(audioId: string): void {
    this.requireOpen("annotate");
    this.fallbacks.push(audioId);
  }

  endQuestion(): void {
    const spec = this.requireOpen("close");
    this.openQuestion = null;
    this.closeQuestion(spec);
  }

  /** Bracket every remaining question empty; used on cap or early abort. */
  finishRemaining(): void {
    if (this.openQuestion !== null) this.endQuestion();
    while (!this.done) {
      const spec = this.questions[this.cursor]!;
      this.emit(spec.qid, 0, "QuestionStart");
      this.closeQuestion(spec);
    }
  }

  private closeQuestion(spec: QuestionSpec): void {
    const note = this.fallbacks.length > 0 ? `audio_fallback:${this.fallbacks.join(",")}` : undefined;
    this.fallbacks = [];
    this.emit(spec.qid, 0, "QuestionEnd", note);
    this.cursor += 1;
    const batch = this.buffer;
    this.buffer = [];
    this.enqueue(batch);
  }

  private requireOpen(action: string): QuestionSpec {
    if (this.openQuestion === null) {
      throw new EngineStateError(`${action} with no open question`);
    }
    return this.openQuestion;
  }

  private requireItem(spec: QuestionSpec, itemIndex: number) {
    const item = spec.items[itemIndex];
    if (item === undefined) {
      throw new EngineStateError(
        `question ${spec.qid} has no item ${itemIndex} (0..${spec.items.length - 1})`,
      );
    }
    return item;
  }

  private emit(qid: number, item: number, kind: EventKind, payload?: string): void {
    // Stamps are clamped non-decreasing; the server rejects regressions.
    const t = Math.max(this.lastT, Math.round(this.elapsedMs()));
    this.lastT = t;
    const event: WireEvent = { qid, item, t, kind, payload: payload ?? null };
    this.buffer.push(event);
    this.log.push(event);
  }
}
