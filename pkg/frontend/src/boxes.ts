// Bounding-box overlays: boxes arrive in normalized [0,1] image
// coordinates and are positioned with percentages so they track the
// rendered image size without any resize handling.

import type { EventView } from "./types.js";

export interface OverlayStyle {
  left: string;
  top: string;
  width: string;
  height: string;
}

export function overlayStyle(box: [number, number, number, number]): OverlayStyle {
  const [xMin, yMin, xMax, yMax] = box;
  const pct = (v: number) => `${(v * 100).toFixed(2)}%`;
  return {
    left: pct(xMin),
    top: pct(yMin),
    width: pct(xMax - xMin),
    height: pct(yMax - yMin),
  };
}

export function renderOverlays(
  doc: Document,
  container: HTMLElement,
  events: EventView[],
  activeEventId: string | null,
): void {
  container.querySelectorAll(".event-box").forEach((el) => el.remove());
  for (const event of events) {
    const el = doc.createElement("div");
    const style = overlayStyle(event.box);
    el.className = "event-box" + (event.event_id === activeEventId ? " active" : "");
    el.dataset.eventId = event.event_id;
    el.style.left = style.left;
    el.style.top = style.top;
    el.style.width = style.width;
    el.style.height = style.height;
    if (event.caption) {
      el.title = event.caption;
    }
    container.appendChild(el);
  }
}
