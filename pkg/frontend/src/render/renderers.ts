/**
 * One renderer per question archetype. Renderers own presentation only:
 * every interaction goes through the engine, which classifies and stamps it,
 * so nothing here can emit an event outside the open question window.
 *
 * Drag-style tasks (reordering, word separation) collect the arrangement
 * locally and emit a single SubmitText when the participant releases it;
 * intermediate tile moves are not interaction events.
 */

import { playPrompt } from "../audio.js";
import type { SessionEngine } from "../engine.js";
import type { QuestionSpec, StimulusItem } from "../types.js";
import { button, el, mulberry32, shuffled } from "./dom.js";

export interface RenderContext {
  engine: SessionEngine;
  assetBase: string;
  /** Called once when the participant (or the clock) finishes the question. */
  onDone: () => void;
}

export type Renderer = (spec: QuestionSpec, ctx: RenderContext) => HTMLElement;

async function prompt(root: HTMLElement, item: StimulusItem, ctx: RenderContext): Promise<void> {
  if (item.prompt_audio === undefined) return;
  const result = await playPrompt(ctx.assetBase, item.prompt_audio);
  if (!result.played) {
    ctx.engine.noteAudioFallback(item.prompt_audio);
    root.prepend(el("p", "prompt-fallback", promptFallbackText(item)));
  }
}

function promptFallbackText(item: StimulusItem): string {
  const goal = item.targets.join(", ");
  return item.display !== undefined
    ? `Instrucción de audio no disponible. Estímulo: ${item.display} (${goal})`
    : `Instrucción de audio no disponible. Busca: ${goal}`;
}

function choiceSymbols(item: StimulusItem, seed: number): string[] {
  return shuffled([...item.targets, ...(item.distractors ?? [])], seed);
}

/** Click targets as they pop up on a grid; distractors pop too. */
export const renderWhacAMole: Renderer = (spec, ctx) => {
  const root = el("div", "q whac-a-mole");
  const item = spec.items[0]!;
  void prompt(root, item, ctx);
  const board = el("div", "board");
  root.append(board);
  const cells = Array.from({ length: 9 }, () => el("div", "cell"));
  cells.forEach((c) => board.append(c));
  const rand = mulberry32(spec.qid * 7919);
  const pool = [...item.targets, ...(item.distractors ?? [])];
  const popper = setInterval(() => {
    const cell = cells[Math.floor(rand() * cells.length)]!;
    const symbol = pool[Math.floor(rand() * pool.length)]!;
    cell.replaceChildren(
      button(symbol, "mole", () => {
        ctx.engine.clickSymbol(0, symbol);
        cell.replaceChildren();
      }),
    );
    setTimeout(() => cell.replaceChildren(), 900);
  }, 650);
  const limit = (spec.time_limit_s ?? 30) * 1000;
  setTimeout(() => {
    clearInterval(popper);
    ctx.onDone();
  }, limit);
  return root;
};

/** Hear a sound, click the written form among lures. */
export const renderAudioChoice: Renderer = (spec, ctx) => {
  const root = el("div", "q audio-choice");
  let index = 0;
  const showItem = () => {
    const item = spec.items[index]!;
    const pane = el("div", "choices");
    void prompt(pane, item, ctx);
    for (const symbol of choiceSymbols(item, spec.qid * 31 + index)) {
      pane.append(
        button(symbol, "choice", () => {
          ctx.engine.clickSymbol(index, symbol);
          index += 1;
          if (index >= spec.items.length) ctx.onDone();
          else showItem();
        }),
      );
    }
    root.replaceChildren(pane);
  };
  showItem();
  return root;
};

/** Find the matching symbol in a field of visually confusable ones. */
export const renderVisualSearchPairs: Renderer = (spec, ctx) => {
  const root = el("div", "q visual-search");
  const item = spec.items[0]!;
  void prompt(root, item, ctx);
  const field = el("div", "field");
  const symbols: string[] = [];
  const rand = mulberry32(spec.qid * 104729);
  const pool = [...(item.distractors ?? []), ...item.targets];
  for (let i = 0; i < 24; i++) symbols.push(pool[Math.floor(rand() * pool.length)]!);
  for (const target of item.targets) symbols.push(target); // at least one present
  for (const symbol of shuffled(symbols, spec.qid)) {
    field.append(button(symbol, "pair", () => ctx.engine.clickSymbol(0, symbol)));
  }
  root.append(field, button("Listo", "done", ctx.onDone));
  return root;
};

/** A word with a gap; click the letter that completes it. */
export const renderFillMissingLetter: Renderer = (spec, ctx) => {
  const root = el("div", "q fill-letter");
  let index = 0;
  const showItem = () => {
    const item = spec.items[index]!;
    const pane = el("div");
    void prompt(pane, item, ctx);
    pane.append(el("p", "stimulus", item.display ?? ""));
    for (const letter of choiceSymbols(item, spec.qid * 13 + index)) {
      pane.append(
        button(letter, "choice", () => {
          ctx.engine.clickSymbol(index, letter);
          index += 1;
          if (index >= spec.items.length) ctx.onDone();
          else showItem();
        }),
      );
    }
    root.replaceChildren(pane);
  };
  showItem();
  return root;
};

/** A word with one letter too many; click the intruder to remove it. */
export const renderDeleteExtraLetter: Renderer = (spec, ctx) => {
  const root = el("div", "q delete-letter");
  let index = 0;
  const showItem = () => {
    const item = spec.items[index]!;
    const word = item.display ?? "";
    const pane = el("div");
    void prompt(pane, item, ctx);
    const strip = el("div", "letters");
    word.split("").forEach((letter, position) => {
      strip.append(
        button(letter, "letter", () => {
          const repaired = word.slice(0, position) + word.slice(position + 1);
          ctx.engine.submitText(index, repaired);
          index += 1;
          if (index >= spec.items.length) ctx.onDone();
          else showItem();
        }),
      );
    });
    pane.append(strip);
    root.replaceChildren(pane);
  };
  showItem();
  return root;
};

/** A sentence with a wrong word; click the correct replacement. */
export const renderFindSentenceError: Renderer = (spec, ctx) => {
  const root = el("div", "q sentence-error");
  let index = 0;
  const showItem = () => {
    const item = spec.items[index]!;
    const pane = el("div");
    void prompt(pane, item, ctx);
    pane.append(el("p", "stimulus", item.display ?? ""));
    for (const candidate of choiceSymbols(item, spec.qid * 17 + index)) {
      pane.append(
        button(candidate, "choice", () => {
          ctx.engine.clickSymbol(index, candidate);
          index += 1;
          if (index >= spec.items.length) ctx.onDone();
          else showItem();
        }),
      );
    }
    root.replaceChildren(pane);
  };
  showItem();
  return root;
};

/** Tile arranger shared by the two reorder tasks and word separation. */
function tileArranger(
  spec: QuestionSpec,
  ctx: RenderContext,
  tilesFor: (item: StimulusItem) => string[],
  join: (parts: string[]) => string,
): HTMLElement {
  const root = el("div", "q arranger");
  let index = 0;
  const showItem = () => {
    const item = spec.items[index]!;
    const pane = el("div");
    void prompt(pane, item, ctx);
    const arrangement: string[] = [];
    const answer = el("p", "arrangement", "");
    const bank = el("div", "bank");
    for (const tile of shuffled(tilesFor(item), spec.qid * 37 + index)) {
      bank.append(
        // Click-to-place is the keyboard alternative to dragging; either way
        // only the released arrangement is submitted, as one event.
        button(tile, "tile", () => {
          arrangement.push(tile);
          answer.textContent = join(arrangement);
        }),
      );
    }
    pane.append(
      bank,
      answer,
      button("Soltar", "done", () => {
        ctx.engine.submitText(index, join(arrangement));
        index += 1;
        if (index >= spec.items.length) ctx.onDone();
        else showItem();
      }),
    );
    root.replaceChildren(pane);
  };
  showItem();
  return root;
}

export const renderReorderLetters: Renderer = (spec, ctx) =>
  tileArranger(spec, ctx, (item) => (item.display ?? item.targets[0]!).split(""), (p) => p.join(""));

export const renderReorderSyllables: Renderer = (spec, ctx) =>
  tileArranger(
    spec,
    ctx,
    (item) => (item.display ?? "").split("-").filter((s) => s.length > 0),
    (p) => p.join(""),
  );

/** A fused sentence; click between letters to cut it into words. */
export const renderSeparateWords: Renderer = (spec, ctx) => {
  const root = el("div", "q separate-words");
  const item = spec.items[0]!;
  void prompt(root, item, ctx);
  const fused = item.display ?? "";
  const cuts = new Set<number>();
  const line = el("p", "stimulus");
  const redraw = () => {
    line.replaceChildren();
    fused.split("").forEach((letter, position) => {
      line.append(el("span", "letter", letter));
      if (position < fused.length - 1) {
        const gap = button(cuts.has(position) ? " " : "·", "gap", () => {
          if (cuts.has(position)) cuts.delete(position);
          else cuts.add(position);
          redraw();
        });
        line.append(gap);
      }
    });
  };
  redraw();
  root.append(
    line,
    button("Soltar", "done", () => {
      let assembled = "";
      fused.split("").forEach((letter, position) => {
        assembled += letter;
        if (cuts.has(position)) assembled += " ";
      });
      ctx.engine.submitText(0, assembled);
      ctx.onDone();
    }),
  );
  return root;
};

/** Memorize a briefly shown sequence, then type it back. */
export const renderMemorySequence: Renderer = (spec, ctx) => {
  const root = el("div", "q memory-sequence");
  let index = 0;
  const showItem = () => {
    const item = spec.items[index]!;
    const pane = el("div");
    void prompt(pane, item, ctx);
    const stimulus = el("p", "stimulus", item.display ?? "");
    pane.append(stimulus);
    setTimeout(() => {
      stimulus.textContent = "· · ·"; // hidden after the display window
      const input = el("input") as HTMLInputElement;
      input.type = "text";
      pane.append(
        input,
        button("Enviar", "done", () => {
          ctx.engine.submitText(index, input.value);
          index += 1;
          if (index >= spec.items.length) ctx.onDone();
          else showItem();
        }),
      );
    }, item.display_ms ?? 3000);
    root.replaceChildren(pane);
  };
  showItem();
  return root;
};

/** Hear a word or sentence, type it. */
export const renderDictation: Renderer = (spec, ctx) => {
  const root = el("div", "q dictation");
  let index = 0;
  const showItem = () => {
    const item = spec.items[index]!;
    const pane = el("div");
    void prompt(pane, item, ctx);
    const input = el("input") as HTMLInputElement;
    input.type = "text";
    pane.append(
      input,
      button("Enviar", "done", () => {
        ctx.engine.submitText(index, input.value);
        index += 1;
        if (index >= spec.items.length) ctx.onDone();
        else showItem();
      }),
    );
    root.replaceChildren(pane);
  };
  showItem();
  return root;
};
