// Live session screen: scene/language pickers, the picture with event
// overlays, the transcript, and the turn input (text or microphone).
//
// Exactly one turn is ever in flight; each submission carries an
// idempotency token that is reused verbatim when the user retries after
// a retryable failure, so the server never records the turn twice.

import { ApiClient, ApiError, newTurnToken } from "./api.js";
import { renderOverlays } from "./boxes.js";
import { renderEntry } from "./transcript.js";
import type { SceneView, TurnOutcome } from "./types.js";

type ScreenState = "setup" | "ready" | "inflight" | "retry" | "closed";

interface PendingTurn {
  kind: "text" | "audio";
  payload: string;
  token: string;
}

const LANGUAGES = ["EN", "ZH", "MS", "TA"];

export class SessionScreen {
  state: ScreenState = "setup";
  sessionId: string | null = null;
  private pending: PendingTurn | null = null;
  private matchedWords = new Set<string>();
  private studentTurns = 0;
  private recorder: MediaRecorder | null = null;
  private chunks: Blob[] = [];

  private setup!: HTMLElement;
  private stage!: HTMLElement;
  private imageWrap!: HTMLElement;
  private image!: HTMLImageElement;
  private transcript!: HTMLElement;
  private form!: HTMLFormElement;
  private input!: HTMLInputElement;
  private sendButton!: HTMLButtonElement;
  private micButton!: HTMLButtonElement;
  private status!: HTMLElement;
  private phaseChip!: HTMLElement;
  private summary!: HTMLElement;
  private scene: SceneView | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private doc: Document = document,
    private onSessionStarted: (sessionId: string) => void = () => undefined,
  ) {
    this.build();
  }

  private el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className: string,
    parent: HTMLElement,
  ): HTMLElementTagNameMap[K] {
    const node = this.doc.createElement(tag);
    node.className = className;
    parent.appendChild(node);
    return node;
  }

  private build(): void {
    this.root.textContent = "";
    this.setup = this.el("div", "setup", this.root);
    const sceneLabel = this.el("label", "picker-label", this.setup);
    sceneLabel.textContent = "Picture ";
    const scenePicker = this.el("select", "scene-picker", sceneLabel);
    const langLabel = this.el("label", "picker-label", this.setup);
    langLabel.textContent = "Language ";
    const languagePicker = this.el("select", "language-picker", langLabel);
    for (const language of LANGUAGES) {
      const option = this.doc.createElement("option");
      option.value = language;
      option.textContent = language;
      languagePicker.appendChild(option);
    }
    const start = this.el("button", "start", this.setup);
    start.textContent = "Start session";
    start.addEventListener("click", () => {
      void this.start(scenePicker.value, languagePicker.value);
    });

    this.stage = this.el("div", "stage", this.root);
    this.stage.hidden = true;
    this.phaseChip = this.el("span", "phase-chip", this.stage);
    this.imageWrap = this.el("div", "image-wrap", this.stage);
    this.image = this.el("img", "scene-image", this.imageWrap);
    this.image.alt = "scene";
    this.transcript = this.el("div", "transcript", this.stage);
    this.form = this.el("form", "turn-form", this.stage);
    this.form.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.submitText(this.input.value);
    });
    this.input = this.el("input", "turn-input", this.form);
    this.input.placeholder = "Say or type what you see...";
    this.sendButton = this.el("button", "send", this.form);
    this.sendButton.type = "submit";
    this.sendButton.textContent = "Send";
    this.micButton = this.el("button", "mic", this.form);
    this.micButton.type = "button";
    this.micButton.textContent = "🎤";
    this.micButton.addEventListener("click", () => void this.toggleRecording());
    if (typeof MediaRecorder === "undefined") {
      this.micButton.hidden = true;
    }
    this.status = this.el("div", "status", this.stage);
    this.summary = this.el("div", "summary", this.stage);
    this.summary.hidden = true;

    void this.loadScenes(scenePicker);
  }

  private async loadScenes(picker: HTMLSelectElement): Promise<void> {
    try {
      const { scenes } = await this.api.listScenes();
      picker.textContent = "";
      for (const scene of scenes) {
        const option = this.doc.createElement("option");
        option.value = scene.scene_id;
        option.textContent = scene.scene_id;
        picker.appendChild(option);
      }
    } catch (error) {
      this.showStatus(`Could not load scenes: ${String(error)}`, false);
    }
  }

  async start(sceneId: string, language: string): Promise<void> {
    const created = await this.api.createSession(sceneId, language);
    this.sessionId = created.session_id;
    this.scene = created.scene;
    this.matchedWords.clear();
    this.studentTurns = 0;
    this.setup.hidden = true;
    this.stage.hidden = false;
    this.summary.hidden = true;
    this.transcript.textContent = "";
    this.image.src = created.scene.image_url;
    const active = created.scene.events.find((e) => e.active);
    renderOverlays(this.doc, this.imageWrap, created.scene.events, active?.event_id ?? null);
    this.appendTutor(created.action.text, created.action.scaffold, created.marked_text,
                     created.audio_url);
    this.setPhase(created.phase);
    this.toState("ready");
    this.onSessionStarted(created.session_id);
  }

  async resume(sessionId: string): Promise<void> {
    const view = await this.api.getSession(sessionId);
    this.sessionId = view.session_id;
    this.scene = view.scene;
    this.matchedWords.clear();
    this.studentTurns = 0;
    this.setup.hidden = true;
    this.stage.hidden = false;
    this.transcript.textContent = "";
    this.image.src = view.scene.image_url;
    renderOverlays(this.doc, this.imageWrap, view.scene.events, view.active_event_id);
    for (const turn of view.turns) {
      if (turn.speaker === "Tutor") {
        this.appendTutor(turn.text, turn.scaffold!, undefined, turn.audio_url);
      } else {
        this.appendStudent(turn.text);
        this.studentTurns += 1;
        turn.evaluation?.matched_targets.forEach((w) => this.matchedWords.add(w));
      }
    }
    this.setPhase(view.phase);
    if (view.phase === "Closed") {
      this.finish(null);
    } else {
      this.toState("ready");
    }
  }

  async submitText(text: string): Promise<void> {
    if (this.state !== "ready" || !text.trim()) return;
    this.pending = { kind: "text", payload: text.trim(), token: newTurnToken() };
    this.input.value = "";
    await this.send();
  }

  async submitAudio(audioRef: string): Promise<void> {
    if (this.state !== "ready") return;
    this.pending = { kind: "audio", payload: audioRef, token: newTurnToken() };
    await this.send();
  }

  async retry(): Promise<void> {
    if (this.state !== "retry" || !this.pending) return;
    await this.send();
  }

  private async send(): Promise<void> {
    if (!this.sessionId || !this.pending) return;
    this.toState("inflight");
    this.showStatus("Thinking...", false);
    const { kind, payload, token } = this.pending;
    try {
      const outcome =
        kind === "text"
          ? await this.api.postTextTurn(this.sessionId, payload, token)
          : await this.api.postAudioTurn(this.sessionId, payload, token);
      this.pending = null;
      this.applyOutcome(outcome);
    } catch (error) {
      if (error instanceof ApiError && error.retryable) {
        this.toState("retry");
        this.showStatus("The tutor is unavailable right now.", true);
      } else {
        this.pending = null;
        this.toState("ready");
        this.showStatus(`That didn't work: ${String(error)}`, false);
      }
    }
  }

  private applyOutcome(outcome: TurnOutcome): void {
    this.showStatus("", false);
    this.appendStudent(outcome.transcript);
    this.studentTurns += 1;
    outcome.evaluation.matched_targets.forEach((w) => this.matchedWords.add(w));
    this.setPhase(outcome.phase);
    if (this.scene) {
      renderOverlays(this.doc, this.imageWrap, this.scene.events, outcome.active_event_id);
    }
    if (outcome.phase === "Closed") {
      // The closing message is not part of the persisted transcript, so
      // it lives on the summary card rather than in the turn list.
      this.finish(outcome.action.text);
    } else {
      this.appendTutor(
        outcome.action.text,
        outcome.action.scaffold,
        outcome.marked_text,
        outcome.audio_url,
      );
      this.toState("ready");
    }
  }

  private appendTutor(
    text: string,
    scaffold: TurnOutcome["action"]["scaffold"],
    markedText?: string,
    audioUrl?: string | null,
  ): void {
    this.transcript.appendChild(
      renderEntry(this.doc, {
        speaker: "Tutor",
        text,
        scaffold,
        markedText,
        audioUrl,
      }),
    );
    this.transcript.scrollTop = this.transcript.scrollHeight;
  }

  private appendStudent(text: string): void {
    this.transcript.appendChild(
      renderEntry(this.doc, { speaker: "Student", text, scaffold: null }),
    );
    this.transcript.scrollTop = this.transcript.scrollHeight;
  }

  private finish(closingText: string | null): void {
    this.toState("closed");
    this.summary.hidden = false;
    this.summary.textContent = "";
    const heading = this.el("h3", "summary-title", this.summary);
    heading.textContent = "Session complete! 🎉";
    if (closingText) {
      const farewell = this.el("p", "summary-closing", this.summary);
      farewell.textContent = closingText;
    }
    const stats = this.el("p", "summary-stats", this.summary);
    stats.textContent =
      `You took ${this.studentTurns} turns and used ` +
      `${this.matchedWords.size} target words` +
      (this.matchedWords.size
        ? `: ${Array.from(this.matchedWords).sort().join(", ")}`
        : ".");
  }

  private toState(state: ScreenState): void {
    this.state = state;
    const closed = state === "closed";
    const busy = state === "inflight" || state === "retry";
    this.input.disabled = closed || busy;
    this.sendButton.disabled = closed || busy;
    this.micButton.disabled = closed || busy;
  }

  private setPhase(phase: string): void {
    this.phaseChip.textContent = phase;
    this.phaseChip.dataset.phase = phase;
  }

  private showStatus(message: string, withRetry: boolean): void {
    this.status.textContent = "";
    if (message) {
      const text = this.el("span", "status-text", this.status);
      text.textContent = message;
    }
    if (withRetry) {
      const button = this.el("button", "retry", this.status);
      button.type = "button";
      button.textContent = "Try again";
      button.addEventListener("click", () => void this.retry());
    }
  }

  private async toggleRecording(): Promise<void> {
    if (this.recorder && this.recorder.state === "recording") {
      this.recorder.stop();
      return;
    }
    try {
      const stream = await navigator.mediaDevices.getUserMedia({ audio: true });
      this.chunks = [];
      this.recorder = new MediaRecorder(stream);
      this.recorder.addEventListener("dataavailable", (event) => {
        if (event.data.size > 0) this.chunks.push(event.data);
      });
      this.recorder.addEventListener("stop", () => {
        stream.getTracks().forEach((track) => track.stop());
        this.micButton.classList.remove("recording");
        const blob = new Blob(this.chunks, {
          type: this.recorder?.mimeType || "audio/webm",
        });
        void this.api
          .uploadAudio(blob)
          .then((ref) => this.submitAudio(ref))
          .catch((error) =>
            this.showStatus(`Recording failed, please type instead: ${String(error)}`, false),
          );
      });
      this.recorder.start();
      this.micButton.classList.add("recording");
    } catch (error) {
      this.showStatus(`Microphone unavailable, please type instead: ${String(error)}`, false);
    }
  }
}
