// Child-friendly badge per tutoring move, shown on every tutor turn.

import type { Scaffold } from "./types.js";

export interface Badge {
  icon: string;
  label: string;
  className: string;
}

const BADGES: Record<Scaffold, Badge> = {
  FeedingBack: { icon: "👍", label: "Feedback", className: "badge-feedingback" },
  Hints: { icon: "💡", label: "Hint", className: "badge-hints" },
  Instructing: { icon: "🧭", label: "Instruction", className: "badge-instructing" },
  Explaining: { icon: "📖", label: "Explanation", className: "badge-explaining" },
  Modeling: { icon: "🗣️", label: "Modeling", className: "badge-modeling" },
  Questioning: { icon: "❓", label: "Question", className: "badge-questioning" },
  SocialEmotional: { icon: "💖", label: "Encouragement", className: "badge-socialemotional" },
};

export function badgeFor(scaffold: Scaffold): Badge {
  return BADGES[scaffold];
}

export function renderBadge(doc: Document, scaffold: Scaffold): HTMLElement {
  const badge = badgeFor(scaffold);
  const el = doc.createElement("span");
  el.className = `badge ${badge.className}`;
  el.dataset.scaffold = scaffold;
  el.textContent = `${badge.icon} ${badge.label}`;
  el.title = scaffold;
  return el;
}
