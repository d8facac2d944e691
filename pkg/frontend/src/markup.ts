// Keyword-emphasis markup: the service marks tutor text either as
// character spans or as <hl>...</hl> tagged text. Both forms reduce to
// the same segment list; joining the segments always restores the plain
// text exactly.

import type { Span } from "./types.js";

export interface Segment {
  text: string;
  emphasized: boolean;
}

const OPEN = "<hl>";
const CLOSE = "</hl>";

export function stripTags(marked: string): string {
  return marked.split(OPEN).join("").split(CLOSE).join("");
}

export function parseMarkedText(marked: string): Segment[] {
  const segments: Segment[] = [];
  let rest = marked;
  while (rest.length > 0) {
    const start = rest.indexOf(OPEN);
    if (start < 0) {
      segments.push({ text: rest, emphasized: false });
      break;
    }
    if (start > 0) {
      segments.push({ text: rest.slice(0, start), emphasized: false });
    }
    const afterOpen = rest.slice(start + OPEN.length);
    const end = afterOpen.indexOf(CLOSE);
    if (end < 0) {
      // Unbalanced tag: treat the remainder as plain text.
      segments.push({ text: afterOpen, emphasized: false });
      break;
    }
    segments.push({ text: afterOpen.slice(0, end), emphasized: true });
    rest = afterOpen.slice(end + CLOSE.length);
  }
  return segments.filter((s) => s.text.length > 0);
}

export function segmentsFromSpans(text: string, spans: Span[]): Segment[] {
  const segments: Segment[] = [];
  let cursor = 0;
  for (const [start, end] of spans) {
    if (start > cursor) {
      segments.push({ text: text.slice(cursor, start), emphasized: false });
    }
    if (end > start) {
      segments.push({ text: text.slice(start, end), emphasized: true });
    }
    cursor = Math.max(cursor, end);
  }
  if (cursor < text.length) {
    segments.push({ text: text.slice(cursor), emphasized: false });
  }
  return segments;
}

export function plainText(segments: Segment[]): string {
  return segments.map((s) => s.text).join("");
}

export function renderSegments(doc: Document, segments: Segment[]): DocumentFragment {
  const fragment = doc.createDocumentFragment();
  for (const segment of segments) {
    if (segment.emphasized) {
      const mark = doc.createElement("mark");
      mark.className = "hl";
      mark.textContent = segment.text;
      fragment.appendChild(mark);
    } else {
      fragment.appendChild(doc.createTextNode(segment.text));
    }
  }
  return fragment;
}
