// Scaffolding-distribution report rendering: one horizontal bar chart
// per cohort, bar lengths proportional to the reported percentages.

import { badgeFor } from "./badges.js";
import type { Scaffold, ScaffoldReport } from "./types.js";

export const SCAFFOLD_ORDER: Scaffold[] = [
  "FeedingBack",
  "Explaining",
  "Hints",
  "SocialEmotional",
  "Questioning",
  "Instructing",
  "Modeling",
];

export interface BarModel {
  scaffold: Scaffold;
  count: number;
  percentage: number;
}

export interface CohortChart {
  cohort: string;
  total: number;
  bars: BarModel[];
  percentageSum: number;
}

export function chartsFromReport(report: ScaffoldReport): CohortChart[] {
  return Object.entries(report.cohorts).map(([cohort, body]) => {
    const bars = SCAFFOLD_ORDER.map((scaffold) => ({
      scaffold,
      count: body.counts[scaffold] ?? 0,
      percentage: body.percentages[scaffold] ?? 0,
    }));
    return {
      cohort,
      total: body.total,
      bars,
      percentageSum: bars.reduce((sum, bar) => sum + bar.percentage, 0),
    };
  });
}

export function isEmptyReport(report: ScaffoldReport): boolean {
  return report.total_labels === 0;
}

function formatPercent(value: number): string {
  return Number.isInteger(value) ? `${value}%` : `${value.toFixed(1)}%`;
}

export function renderAnalytics(
  doc: Document,
  root: HTMLElement,
  report: ScaffoldReport,
): void {
  root.textContent = "";
  if (isEmptyReport(report)) {
    const empty = doc.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "No labeled utterances yet. Run some sessions, then analyze their logs.";
    root.appendChild(empty);
    return;
  }
  for (const chart of chartsFromReport(report)) {
    const section = doc.createElement("section");
    section.className = "cohort-chart";
    section.dataset.cohort = chart.cohort;

    const heading = doc.createElement("h3");
    heading.textContent = `${chart.cohort} (${chart.total} tutor moves)`;
    section.appendChild(heading);

    for (const bar of chart.bars) {
      const row = doc.createElement("div");
      row.className = "bar-row";
      row.dataset.scaffold = bar.scaffold;

      const label = doc.createElement("span");
      label.className = "bar-label";
      const badge = badgeFor(bar.scaffold);
      label.textContent = `${badge.icon} ${badge.label}`;
      row.appendChild(label);

      const track = doc.createElement("div");
      track.className = "bar-track";
      const fill = doc.createElement("div");
      fill.className = `bar-fill ${badge.className}`;
      fill.style.width = `${bar.percentage}%`;
      track.appendChild(fill);
      row.appendChild(track);

      const value = doc.createElement("span");
      value.className = "bar-value";
      value.textContent = formatPercent(bar.percentage);
      row.appendChild(value);

      section.appendChild(row);
    }

    const legend = doc.createElement("p");
    legend.className = "legend-total";
    legend.textContent = `Total: ${formatPercent(chart.percentageSum)}`;
    section.appendChild(legend);

    root.appendChild(section);
  }
}
