/**
 * Offline mirror of the server's feature extraction. Used by the headless
 * driver to verify that the vector the service stores for a session equals
 * the one implied by the intended event list, element for element.
 *
 * Arithmetic is plain IEEE double division on integer counts, the same
 * operations the server performs, so equality is exact, not approximate.
 */

import { canonicalize } from "./classify.js";
import type {
  ParticipantIn,
  QuestionSpec,
  VariantManifest,
  WireEvent,
} from "./types.js";

export interface QuestionMeasures {
  qid: number;
  clicks: number;
  hits: number;
  misses: number;
  score: number;
  accuracy: number;
  missrate: number;
}

export class GradingError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "GradingError";
  }
}

/** Grade one question's events; the stream must bracket the question once. */
export function gradeQuestion(events: WireEvent[], spec: QuestionSpec): QuestionMeasures {
  let clicks = 0;
  let misses = 0;
  const itemHits = spec.items.map(() => 0);
  let state: "before" | "inside" | "after" = "before";
  for (const event of events) {
    if (event.qid !== spec.qid) {
      throw new GradingError(`event for question ${event.qid} graded against ${spec.qid}`);
    }
    if (event.kind === "QuestionStart") {
      if (state !== "before") throw new GradingError(`question ${spec.qid}: duplicate start`);
      state = "inside";
    } else if (event.kind === "QuestionEnd") {
      if (state !== "inside") {
        throw new GradingError(`question ${spec.qid}: end without open bracket`);
      }
      state = "after";
    } else {
      if (state !== "inside") {
        throw new GradingError(
          `question ${spec.qid}: event at t=${event.t} outside the question bracket`,
        );
      }
      const item = spec.items[event.item];
      if (item === undefined) {
        throw new GradingError(`question ${spec.qid}: item index ${event.item} out of range`);
      }
      if (event.kind === "ClickTarget") {
        clicks += 1;
        itemHits[event.item]! += 1;
      } else if (event.kind === "ClickDistractor") {
        clicks += 1;
        misses += 1;
      } else if (event.kind === "ClickNeutral") {
        clicks += 1;
      } else {
        const canon = canonicalize(event.payload ?? "");
        const accepted = item.targets.some((t) => canonicalize(t) === canon);
        if (accepted) itemHits[event.item]! += 1;
        else misses += 1;
      }
    }
  }
  if (state === "inside") throw new GradingError(`question ${spec.qid}: bracket never closed`);
  const hits = itemHits.reduce((a, b) => a + b, 0);
  return {
    qid: spec.qid,
    clicks,
    hits,
    misses,
    score: hits,
    accuracy: clicks > 0 ? hits / clicks : 0,
    missrate: clicks > 0 ? misses / clicks : 0,
  };
}

/** [gender, native, lang_fail, age]: Female 0 / Male 1, booleans as 0/1. */
export function demographicFeatures(participant: ParticipantIn): number[] {
  return [
    participant.gender === "Female" ? 0 : 1,
    participant.native ? 1 : 0,
    participant.lang_fail ? 1 : 0,
    participant.age,
  ];
}

/**
 * The full model input: 4 demographic entries, then one 6-measure block per
 * question in ascending qid order.
 */
export function featureVector(
  participant: ParticipantIn,
  events: WireEvent[],
  manifest: VariantManifest,
): number[] {
  const values = demographicFeatures(participant);
  for (const qid of manifest.question_ids) {
    const spec = manifest.questions.find((q) => q.qid === qid);
    if (spec === undefined) throw new GradingError(`manifest is missing question ${qid}`);
    const m = gradeQuestion(events.filter((e) => e.qid === qid), spec);
    values.push(m.clicks, m.hits, m.misses, m.score, m.accuracy, m.missrate);
  }
  if (values.length !== manifest.feature_count) {
    throw new GradingError(
      `vector length ${values.length} does not match variant width ${manifest.feature_count}`,
    );
  }
  return values;
}
