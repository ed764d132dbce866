import { describe, expect, it } from "vitest";
import { answeredCount, isComplete, missingItems, QUIZ_SIZE } from "../src/quiz.js";
import { QUIZ_ITEMS } from "../src/quizItems.js";
import { MemoryStore, WizardState } from "../src/state.js";
import { splitPrompt } from "../src/views.js";

describe("quiz item data", () => {
  it("ships all 44 items with 11 per axis", () => {
    expect(QUIZ_ITEMS.length).toBe(QUIZ_SIZE);
    const perAxis = new Map<string, number>();
    for (const item of QUIZ_ITEMS) {
      perAxis.set(item.axis, (perAxis.get(item.axis) ?? 0) + 1);
    }
    expect([...perAxis.values()]).toEqual([11, 11, 11, 11]);
  });

  it("prompts split into stem and two options", () => {
    for (const item of QUIZ_ITEMS) {
      const [stem, a, b] = splitPrompt(item.prompt);
      expect(stem.length).toBeGreaterThan(0);
      expect(a).not.toBe("option a");
      expect(b).not.toBe("option b");
    }
  });
});

describe("completeness gating", () => {
  it("flags missing items until all 44 answered", () => {
    const answers: Record<number, "a" | "b"> = {};
    expect(isComplete(answers)).toBe(false);
    for (let i = 1; i <= QUIZ_SIZE; i++) answers[i] = "a";
    expect(missingItems(answers)).toEqual([]);
    expect(isComplete(answers)).toBe(true);
  });

  it("reports which items are missing", () => {
    const answers: Record<number, "a" | "b"> = {};
    for (let i = 1; i <= QUIZ_SIZE; i++) answers[i] = "b";
    delete answers[13];
    delete answers[40];
    expect(missingItems(answers)).toEqual([13, 40]);
    expect(answeredCount(answers)).toBe(42);
  });
});

describe("one choice per item", () => {
  it("re-answering replaces the previous choice", () => {
    const state = new WizardState(new MemoryStore());
    state.setQuizAnswer(5, "a");
    state.setQuizAnswer(5, "b");
    expect(state.quizAnswers[5]).toBe("b");
    expect(Object.keys(state.quizAnswers).length).toBe(1);
  });
});
