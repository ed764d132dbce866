// Quiz submission gating: the instrument is only scorable complete, so
// the UI refuses to submit partial sheets.

import { QUIZ_ITEMS } from "./quizItems.js";

export const QUIZ_SIZE = 44;

export function missingItems(answers: Record<number, "a" | "b">): number[] {
  return QUIZ_ITEMS.filter((item) => !(item.id in answers)).map((item) => item.id);
}

export function isComplete(answers: Record<number, "a" | "b">): boolean {
  return missingItems(answers).length === 0;
}

export function answeredCount(answers: Record<number, "a" | "b">): number {
  return QUIZ_SIZE - missingItems(answers).length;
}
