// Entry point: hash routing between the live session screen and the
// analytics viewer.

import { ApiClient } from "./api.js";
import { renderAnalytics } from "./analytics.js";
import { SessionScreen } from "./session.js";
import type { ScaffoldReport } from "./types.js";

function buildAnalyticsScreen(root: HTMLElement): void {
  root.textContent = "";
  const intro = document.createElement("p");
  intro.className = "analytics-intro";
  intro.textContent =
    "Load a scaffolding analytics report (the JSON emitted by the log analyzer).";
  root.appendChild(intro);

  const controls = document.createElement("div");
  controls.className = "analytics-controls";
  const fileInput = document.createElement("input");
  fileInput.type = "file";
  fileInput.accept = "application/json";
  controls.appendChild(fileInput);
  const urlInput = document.createElement("input");
  urlInput.type = "text";
  urlInput.placeholder = "...or a report URL";
  urlInput.className = "report-url";
  controls.appendChild(urlInput);
  const loadButton = document.createElement("button");
  loadButton.textContent = "Load";
  controls.appendChild(loadButton);
  root.appendChild(controls);

  const chartRoot = document.createElement("div");
  chartRoot.className = "charts";
  root.appendChild(chartRoot);

  const showError = (message: string) => {
    chartRoot.textContent = "";
    const error = document.createElement("p");
    error.className = "empty-state";
    error.textContent = message;
    chartRoot.appendChild(error);
  };

  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    file
      .text()
      .then((text) => renderAnalytics(document, chartRoot, JSON.parse(text) as ScaffoldReport))
      .catch((error) => showError(`Could not read report: ${String(error)}`));
  });
  loadButton.addEventListener("click", () => {
    if (!urlInput.value) return;
    fetch(urlInput.value)
      .then((response) => response.json())
      .then((report) => renderAnalytics(document, chartRoot, report as ScaffoldReport))
      .catch((error) => showError(`Could not fetch report: ${String(error)}`));
  });
}

function route(): void {
  const sessionRoot = document.getElementById("session-screen")!;
  const analyticsRoot = document.getElementById("analytics-screen")!;
  const hash = window.location.hash;
  const showAnalytics = hash.startsWith("#/analytics");
  sessionRoot.hidden = showAnalytics;
  analyticsRoot.hidden = !showAnalytics;
  document.querySelectorAll("nav a").forEach((a) => {
    a.classList.toggle(
      "current",
      (a as HTMLAnchorElement).hash.startsWith("#/analytics") === showAnalytics,
    );
  });
}

function boot(): void {
  const api = new ApiClient();
  const sessionRoot = document.getElementById("session-screen")!;
  const screen = new SessionScreen(sessionRoot, api, document, (sessionId) => {
    window.history.replaceState(null, "", `#/session/${sessionId}`);
  });
  buildAnalyticsScreen(document.getElementById("analytics-screen")!);
  window.addEventListener("hashchange", route);
  route();

  const match = window.location.hash.match(/^#\/session\/(.+)$/);
  if (match && match[1]) {
    void screen.resume(match[1]).catch(() => {
      window.history.replaceState(null, "", "#/session");
    });
  }
}

boot();
