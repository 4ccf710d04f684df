/**
 * Headless scripted player. Drives a SessionEngine through the whole test on
 * a virtual clock with no DOM and no audio, producing the same event stream
 * a human following the script would. Used by the fidelity test and usable
 * as a smoke driver against a live service.
 */

import { SessionEngine } from "./engine.js";
import type { EventKind, VariantManifest, WireEvent } from "./types.js";

export type ScriptStep =
  | { action: "click"; item: number; symbol: string; dtMs: number }
  | { action: "submit"; item: number; text: string; dtMs: number }
  | { action: "audioFallback"; audioId: string }
  | { action: "wait"; dtMs: number };

/** Steps per qid; unlisted questions are bracketed with no interaction. */
export type Script = Record<number, ScriptStep[]>;

export interface PlayOutcome {
  events: WireEvent[];
  clicksByKind: Record<EventKind, number>;
}

/** Archetypes answered by clicking stimuli rather than submitting text. */
const CLICK_ARCHETYPES = new Set([
  "WhacAMole",
  "AudioChoice",
  "VisualSearchPairs",
  "FillMissingLetter",
  "FindSentenceError",
]);

/**
 * Build a deterministic full-coverage script from a manifest: every question
 * gets a target interaction, most get a distractor or a wrong submission,
 * text answers exercise whitespace and case normalization, and the first
 * audio prompt is marked as a fallback to cover the annotation path.
 */
export function scriptForManifest(manifest: VariantManifest): Script {
  const script: Script = {};
  let fallbackUsed = false;
  for (const spec of manifest.questions) {
    const steps: ScriptStep[] = [];
    spec.items.forEach((item, index) => {
      if (!fallbackUsed && item.prompt_audio !== undefined) {
        steps.push({ action: "audioFallback", audioId: item.prompt_audio });
        fallbackUsed = true;
      }
      const target = item.targets[0]!;
      if (CLICK_ARCHETYPES.has(spec.archetype)) {
        steps.push({ action: "click", item: index, symbol: target, dtMs: 700 });
        if (item.distractors !== undefined) {
          steps.push({ action: "click", item: index, symbol: item.distractors[0]!, dtMs: 450 });
        }
        steps.push({ action: "click", item: index, symbol: "·", dtMs: 300 });
        steps.push({ action: "click", item: index, symbol: target, dtMs: 500 });
      } else if (index % 3 === 2) {
        steps.push({ action: "submit", item: index, text: "qqq zz", dtMs: 2100 });
      } else {
        const jitter = index % 2 === 0 ? `  ${target.toUpperCase()} ` : `${target}  `;
        steps.push({ action: "submit", item: index, text: jitter, dtMs: 1800 });
      }
    });
    script[spec.qid] = steps;
  }
  return script;
}

export function runScript(
  manifest: VariantManifest,
  script: Script,
  enqueue: (events: WireEvent[]) => void,
): PlayOutcome {
  let virtualNow = 0;
  const engine = new SessionEngine({
    manifest,
    enqueue,
    now: () => virtualNow,
  });
  const clicksByKind: Record<EventKind, number> = {
    ClickTarget: 0,
    ClickDistractor: 0,
    ClickNeutral: 0,
    SubmitText: 0,
    QuestionStart: 0,
    QuestionEnd: 0,
  };
  engine.start();
  while (!engine.done) {
    virtualNow += 1200; // settle time between questions
    if (!engine.beginQuestion()) continue;
    const qid = engine.current!.qid;
    for (const step of script[qid] ?? []) {
      if (step.action === "wait") {
        virtualNow += step.dtMs;
      } else if (step.action === "audioFallback") {
        engine.noteAudioFallback(step.audioId);
      } else if (step.action === "click") {
        virtualNow += step.dtMs;
        const kind = engine.clickSymbol(step.item, step.symbol);
        clicksByKind[kind] += 1;
      } else {
        virtualNow += step.dtMs;
        engine.submitText(step.item, step.text);
        clicksByKind.SubmitText += 1;
      }
    }
    engine.endQuestion();
  }
  return { events: [...engine.events], clicksByKind };
}
