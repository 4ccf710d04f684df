import type { Archetype } from "../types.js";
import {
  renderAudioChoice,
  renderDeleteExtraLetter,
  renderDictation,
  renderFillMissingLetter,
  renderFindSentenceError,
  renderMemorySequence,
  renderReorderLetters,
  renderReorderSyllables,
  renderSeparateWords,
  renderVisualSearchPairs,
  renderWhacAMole,
  type Renderer,
} from "./renderers.js";

/** Exhaustive by construction; a new archetype fails to compile here. */
export const RENDERERS: Record<Archetype, Renderer> = {
  WhacAMole: renderWhacAMole,
  AudioChoice: renderAudioChoice,
  VisualSearchPairs: renderVisualSearchPairs,
  FillMissingLetter: renderFillMissingLetter,
  DeleteExtraLetter: renderDeleteExtraLetter,
  FindSentenceError: renderFindSentenceError,
  ReorderLetters: renderReorderLetters,
  ReorderSyllables: renderReorderSyllables,
  SeparateWords: renderSeparateWords,
  MemorySequence: renderMemorySequence,
  Dictation: renderDictation,
};
