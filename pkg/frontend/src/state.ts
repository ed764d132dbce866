// Wizard state: the draft profile being edited, the quiz draft, and
// navigation.  Drafts persist through a pluggable store (localStorage
// in the browser) so a reload never loses work in progress.

import type { PersonalityPayload, ProfilePayload } from "./api.js";

export interface DraftStore {
  get(key: string): string | null;
  set(key: string, value: string): void;
  remove(key: string): void;
}

export class MemoryStore implements DraftStore {
  private map = new Map<string, string>();
  get(key: string) {
    return this.map.get(key) ?? null;
  }
  set(key: string, value: string) {
    this.map.set(key, value);
  }
  remove(key: string) {
    this.map.delete(key);
  }
}

export interface ProfileDraft {
  skills: string[];
  behaviours: Array<{ aspect: string; style: string }>;
  knowledge: Record<string, string>;
  knownTools: string[];
  wishedFunctionalities: string[];
  personality: PersonalityPayload | null;
}

export function emptyDraft(): ProfileDraft {
  return {
    skills: [],
    behaviours: [],
    knowledge: {},
    knownTools: [],
    wishedFunctionalities: [],
    personality: null,
  };
}

export const WIZARD_STEPS = [
  "skills-behaviours",
  "knowledge-levels",
  "tools",
  "personality",
] as const;

export type WizardStep = (typeof WIZARD_STEPS)[number];

const DRAFT_KEY = "at.wizard.draft";
const QUIZ_KEY = "at.wizard.quiz";
const STEP_KEY = "at.wizard.step";

export class WizardState {
  stepIndex = 0;
  draft: ProfileDraft = emptyDraft();
  quizAnswers: Record<number, "a" | "b"> = {};
  dirty = false;

  constructor(private store: DraftStore = new MemoryStore()) {
    this.restore();
  }

  get step(): WizardStep {
    return WIZARD_STEPS[this.stepIndex] ?? "skills-behaviours";
  }

  /** Navigation is free: partial data is allowed on every step. */
  next(): void {
    if (this.stepIndex < WIZARD_STEPS.length - 1) {
      this.stepIndex += 1;
      this.persist();
    }
  }

  previous(): void {
    if (this.stepIndex > 0) {
      this.stepIndex -= 1;
      this.persist();
    }
  }

  goTo(index: number): void {
    if (index >= 0 && index < WIZARD_STEPS.length) {
      this.stepIndex = index;
      this.persist();
    }
  }

  update(mutate: (draft: ProfileDraft) => void): void {
    mutate(this.draft);
    // Set-valued fields are kept in the server's canonical order, so
    // what the wizard displays is byte-for-byte what a reload shows.
    this.draft.skills.sort();
    this.draft.knownTools.sort();
    this.draft.wishedFunctionalities.sort();
    this.dirty = true;
    this.persist();
  }

  setQuizAnswer(itemId: number, choice: "a" | "b"): void {
    // exactly one choice per item: re-answering replaces
    this.quizAnswers[itemId] = choice;
    this.persist();
  }

  clearQuiz(): void {
    this.quizAnswers = {};
    this.persist();
  }

  /** Server round trip: what the wizard displays is what gets saved. */
  toProfilePayload(): ProfilePayload {
    return {
      skills: [...this.draft.skills],
      knowledge: Object.entries(this.draft.knowledge).map(([topic, level]) => ({
        topic,
        level,
      })),
      behaviours: this.draft.behaviours.map((b) => ({ ...b })),
      personality: this.draft.personality ? { ...this.draft.personality } : null,
      tools: {
        known_tools: [...this.draft.knownTools],
        wished_functionalities: [...this.draft.wishedFunctionalities],
      },
      extensions: {},
    };
  }

  loadFromProfile(profile: ProfilePayload): void {
    this.draft = {
      skills: [...profile.skills],
      behaviours: profile.behaviours.map((b) => ({ ...b })),
      knowledge: Object.fromEntries(profile.knowledge.map((k) => [k.topic, k.level])),
      knownTools: [...profile.tools.known_tools],
      wishedFunctionalities: [...profile.tools.wished_functionalities],
      personality: profile.personality ? { ...profile.personality } : null,
    };
    this.dirty = false;
    this.persist();
  }

  markSaved(): void {
    this.dirty = false;
    this.persist();
  }

  persist(): void {
    this.store.set(DRAFT_KEY, JSON.stringify(this.draft));
    this.store.set(QUIZ_KEY, JSON.stringify(this.quizAnswers));
    this.store.set(STEP_KEY, String(this.stepIndex));
  }

  restore(): void {
    const draft = this.store.get(DRAFT_KEY);
    if (draft) {
      try {
        this.draft = { ...emptyDraft(), ...(JSON.parse(draft) as ProfileDraft) };
      } catch {
        this.draft = emptyDraft();
      }
    }
    const quiz = this.store.get(QUIZ_KEY);
    if (quiz) {
      try {
        this.quizAnswers = JSON.parse(quiz) as Record<number, "a" | "b">;
      } catch {
        this.quizAnswers = {};
      }
    }
    const step = Number(this.store.get(STEP_KEY) ?? "0");
    this.stepIndex = Number.isInteger(step) && step >= 0 && step < WIZARD_STEPS.length ? step : 0;
  }

  discard(): void {
    this.store.remove(DRAFT_KEY);
    this.store.remove(QUIZ_KEY);
    this.store.remove(STEP_KEY);
    this.draft = emptyDraft();
    this.quizAnswers = {};
    this.stepIndex = 0;
    this.dirty = false;
  }
}
