/**
 * Client-side grading of a single interaction. The manifest is known to the
 * browser, so a click can be labeled target/distractor/neutral the moment it
 * happens; the server re-derives measures from the raw stream and remains
 * authoritative.
 */

import type { EventKind, StimulusItem } from "./types.js";

/**
 * Label a clicked symbol against one stimulus item. Matching is exact:
 * click stimuli are short strings straight from the manifest, rendered
 * verbatim, so any normalization would only blur the classes.
 */
export function classifyClick(item: StimulusItem, symbol: string): EventKind {
  if (item.targets.includes(symbol)) return "ClickTarget";
  if (item.distractors !== undefined && item.distractors.includes(symbol)) {
    return "ClickDistractor";
  }
  return "ClickNeutral";
}

/** Trim, collapse interior whitespace, lowercase. Accents are preserved. */
export function canonicalize(text: string): string {
  return text.split(/\s+/).filter((part) => part.length > 0).join(" ").toLowerCase();
}

/** Whether a submission would grade as a hit for the item. */
export function submissionCorrect(item: StimulusItem, text: string): boolean {
  const canon = canonicalize(text);
  return item.targets.some((target) => canonicalize(target) === canon);
}
