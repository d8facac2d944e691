// Transcript rendering: tutor bubbles carry the scaffold badge and
// keyword emphasis; the visible text always equals the turn text.

import { renderBadge } from "./badges.js";
import { parseMarkedText, renderSegments, segmentsFromSpans } from "./markup.js";
import type { Scaffold, Span } from "./types.js";

export interface TranscriptEntry {
  speaker: "Student" | "Tutor";
  text: string;
  scaffold: Scaffold | null;
  markedText?: string;
  highlights?: Span[];
  audioUrl?: string | null;
}

export function renderEntry(doc: Document, entry: TranscriptEntry): HTMLElement {
  const bubble = doc.createElement("div");
  bubble.className = `turn turn-${entry.speaker.toLowerCase()}`;

  if (entry.speaker === "Tutor" && entry.scaffold) {
    bubble.appendChild(renderBadge(doc, entry.scaffold));
  }

  const body = doc.createElement("p");
  body.className = "turn-text";
  const segments = entry.markedText
    ? parseMarkedText(entry.markedText)
    : entry.highlights && entry.highlights.length
      ? segmentsFromSpans(entry.text, entry.highlights)
      : [{ text: entry.text, emphasized: false }];
  body.appendChild(renderSegments(doc, segments));
  bubble.appendChild(body);

  if (entry.audioUrl) {
    const button = doc.createElement("button");
    button.className = "play-audio";
    button.type = "button";
    button.textContent = "🔊";
    button.addEventListener("click", () => {
      void new Audio(entry.audioUrl!).play().catch(() => undefined);
    });
    bubble.appendChild(button);
  }
  return bubble;
}
