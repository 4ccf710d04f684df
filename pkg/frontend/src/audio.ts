/**
 * Prompt audio resolution. Manifest entries carry asset ids, not URLs; ids
 * map onto a static asset directory served next to the app. The repo ships
 * synthesized placeholder tones under assets/audio, one per prompt id.
 */

export function audioUrl(assetBase: string, audioId: string): string {
  return `${assetBase.replace(/\/$/, "")}/${audioId}.wav`;
}

export interface PlayResult {
  played: boolean;
  /** Set when the asset failed to load and the caller must show text. */
  fallback?: string;
}

/**
 * Try to play a prompt. On any load or playback failure the caller gets a
 * fallback marker: render the prompt as visible text and annotate the event
 * stream via the engine.
 */
export function playPrompt(assetBase: string, audioId: string): Promise<PlayResult> {
  return new Promise((resolve) => {
    const element = new Audio(audioUrl(assetBase, audioId));
    element.addEventListener("ended", () => resolve({ played: true }));
    element.addEventListener("error", () => resolve({ played: false, fallback: audioId }));
    element.play().catch(() => resolve({ played: false, fallback: audioId }));
  });
}
