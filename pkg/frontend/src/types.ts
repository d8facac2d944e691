// Payload shapes of the tutoring service REST API.

export type Phase =
  | "Opening"
  | "GuidedDescription"
  | "VocabularyEnrichment"
  | "StoryCreation"
  | "Closed";

export type Scaffold =
  | "FeedingBack"
  | "Hints"
  | "Instructing"
  | "Explaining"
  | "Modeling"
  | "Questioning"
  | "SocialEmotional";

export type Span = [number, number];

export interface EventView {
  event_id: string;
  box: [number, number, number, number];
  salience: number;
  caption: string | null;
  active: boolean;
}

export interface SceneView {
  scene_id: string;
  language: string;
  image_url: string;
  global_narrative: string;
  events: EventView[];
}

export interface ActionView {
  text: string;
  scaffold: Scaffold;
  highlights: Span[];
  phase_after: Phase;
  target_key: string | null;
}

export interface EvaluationView {
  coverage: number;
  matched_targets: string[];
  specificity_ok: boolean;
  off_topic: boolean;
  affect: string;
  sentence_ok: boolean;
  vague_targets: string[];
}

export interface CreatedSession {
  session_id: string;
  phase: Phase;
  action: ActionView;
  audio_url: string | null;
  marked_text: string;
  duration_ms: number;
  scene: SceneView;
}

export interface TurnOutcome {
  session_id: string;
  phase: Phase;
  transcript: string;
  action: ActionView;
  evaluation: EvaluationView;
  audio_url: string | null;
  marked_text: string;
  duration_ms: number;
  active_event_id: string;
}

export interface TurnView {
  turn_index: number;
  speaker: "Student" | "Tutor";
  text: string;
  audio_ref: string | null;
  audio_url: string | null;
  scaffold: Scaffold | null;
  evaluation: EvaluationView | null;
  timestamp: number;
}

export interface SessionView {
  session_id: string;
  language: string;
  scene_id: string;
  phase: Phase;
  max_turns: number;
  active_event_id: string;
  turns: TurnView[];
  scene: SceneView;
}

export interface ScaffoldReport {
  total_labels: number;
  skipped_sessions: string[];
  cohorts: {
    [cohort: string]: {
      total: number;
      counts: { [scaffold: string]: number };
      percentages: { [scaffold: string]: number };
    };
  };
}
