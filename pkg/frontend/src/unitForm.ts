// Unit form model: text areas in, typed payload out, with the
// client-side checks that catch obvious mistakes before the server
// round trip (the server remains the validation authority).

import type { UnitPayload } from "./api.js";

export interface GroupForm {
  membersText: string; // one student name per line
  teamCount: number;
}

export interface UnitForm {
  title: string;
  domainProject: string;
  clientNeeds: string;
  lectureHours: number;
  practicalHours: number;
  sessionDuration: number;
  groups: GroupForm[];
  resources: Array<{ label: string; locator: string }>;
  methodId: string;
}

export function emptyUnitForm(): UnitForm {
  return {
    title: "",
    domainProject: "",
    clientNeeds: "",
    lectureHours: 0,
    practicalHours: 20,
    sessionDuration: 2,
    groups: [{ membersText: "", teamCount: 1 }],
    resources: [],
    methodId: "maetic",
  };
}

export function groupMembers(group: GroupForm): string[] {
  return group.membersText
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
}

/** field id -> message; empty object when the form may be submitted. */
export function unitFormErrors(form: UnitForm): Record<string, string> {
  const errors: Record<string, string> = {};
  if (!form.title.trim()) errors["title"] = "Give the unit a title.";
  if (!(form.practicalHours > 0)) errors["practical_hours"] = "Practical hours must be positive.";
  if (!(form.sessionDuration > 0)) errors["session_duration"] = "Session duration must be positive.";
  if (form.sessionDuration > form.practicalHours) {
    errors["session_duration"] = "A session cannot be longer than the practical hours.";
  }
  if (form.lectureHours < 0) errors["lecture_hours"] = "Lecture hours cannot be negative.";
  form.groups.forEach((group, index) => {
    const members = groupMembers(group);
    const key = `groups.${index}`;
    if (group.teamCount < 0 || !Number.isInteger(group.teamCount)) {
      errors[key] = "Team count must be a whole number (0 = not my group).";
    } else if (group.teamCount > members.length) {
      errors[key] = `Only ${members.length} students: cannot make ${group.teamCount} teams.`;
    }
    if (new Set(members).size !== members.length) {
      errors[key] = "Duplicate student names in this group.";
    }
  });
  if (!form.groups.some((g) => g.teamCount > 0)) {
    errors["groups"] = "Mark at least one group as yours (team count above zero).";
  }
  form.resources.forEach((resource, index) => {
    if (!resource.locator.trim()) {
      errors[`resources.${index}`] = "A resource needs a locator.";
    }
  });
  return errors;
}

export function toUnitPayload(form: UnitForm): UnitPayload {
  return {
    title: form.title,
    domain_project: form.domainProject,
    client_needs: form.clientNeeds,
    lecture_hours: form.lectureHours,
    practical_hours: form.practicalHours,
    session_duration: form.sessionDuration,
    groups: form.groups.map((g) => ({
      members: groupMembers(g),
      team_count: g.teamCount,
    })),
    resources: form.resources.map((r) => ({ ...r })),
    method_id: form.methodId,
  };
}

export function fromUnitPayload(unit: UnitPayload): UnitForm {
  return {
    title: unit.title,
    domainProject: unit.domain_project,
    clientNeeds: unit.client_needs,
    lectureHours: unit.lecture_hours,
    practicalHours: unit.practical_hours,
    sessionDuration: unit.session_duration,
    groups: unit.groups.map((g) => ({
      membersText: g.members.join("\n"),
      teamCount: g.team_count,
    })),
    resources: unit.resources.map((r) => ({ ...r })),
    methodId: unit.method_id,
  };
}
