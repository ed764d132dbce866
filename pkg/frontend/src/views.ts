// Screens and rendering.  All behaviour that is worth testing lives in
// api/state/quiz/unitForm; this module only binds it to the DOM.

import {
  ApiClient,
  ApiError,
  blogLinks,
  type DeviceListing,
  type JobPayload,
  type PersonalityPayload,
  type UnitPayload,
  type Violation,
} from "./api.js";
import { answeredCount, isComplete, QUIZ_SIZE } from "./quiz.js";
import { QUIZ_ITEMS } from "./quizItems.js";
import { WizardState, WIZARD_STEPS } from "./state.js";
import {
  emptyUnitForm,
  fromUnitPayload,
  toUnitPayload,
  unitFormErrors,
  type UnitForm,
} from "./unitForm.js";

type Attrs = Record<string, string | boolean | ((event: Event) => void)>;
type Child = Node | string | null | undefined;

function h(tag: string, attrs: Attrs = {}, ...children: Child[]): HTMLElement {
  const el = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (typeof value === "function") {
      el.addEventListener(key.replace(/^on/, ""), value);
    } else if (typeof value === "boolean") {
      if (value) el.setAttribute(key, "");
    } else {
      el.setAttribute(key, value);
    }
  }
  for (const child of children) {
    if (child == null) continue;
    el.append(typeof child === "string" ? document.createTextNode(child) : child);
  }
  return el;
}

const KNOWLEDGE_LEVELS = ["none", "little", "working", "expert"];
const AXES: Array<{ key: keyof Omit<PersonalityPayload, "strengths">; poles: [string, string] }> = [
  { key: "perception", poles: ["sensory", "intuitive"] },
  { key: "input", poles: ["visual", "verbal"] },
  { key: "reasoning", poles: ["inductive", "deductive"] },
  { key: "processing", poles: ["active", "reflexive"] },
  { key: "understanding", poles: ["sequential", "global"] },
];
const BEHAVIOUR_STYLES = ["directive", "participative", "delegative"];

function csv(values: string[]): string {
  return values.join(", ");
}

function parseCsv(text: string): string[] {
  return text
    .split(",")
    .map((v) => v.trim())
    .filter((v) => v.length > 0);
}

export type Route =
  | { screen: "auth" }
  | { screen: "wizard" }
  | { screen: "quiz" }
  | { screen: "units" }
  | { screen: "unit"; unitId: string };

export class App {
  route: Route = { screen: "auth" };
  private root: HTMLElement | null = null;
  private violations: Violation[] = [];
  private notice = "";
  private unitForm: UnitForm = emptyUnitForm();
  private unitFormErrors: Record<string, string> = {};
  private units: UnitPayload[] = [];
  private profileStandard = true;
  private job: JobPayload | null = null;
  private listing: DeviceListing | null = null;
  private viewerContent: string | null = null;
  private polling = false;

  constructor(
    readonly client: ApiClient,
    readonly wizard: WizardState,
    private tokenStore: { get(): string | null; set(token: string | null): void }
  ) {}

  mount(root: HTMLElement): void {
    this.root = root;
    this.client.token = this.tokenStore.get();
    this.route = this.client.token ? { screen: "wizard" } : { screen: "auth" };
    if (this.client.token) void this.loadProfileIntoWizard();
    this.render();
  }

  go(route: Route): void {
    this.route = route;
    this.violations = [];
    this.notice = "";
    this.render();
  }

  // -- data loading ----------------------------------------------------------

  private async loadProfileIntoWizard(): Promise<void> {
    try {
      const profile = await this.client.getProfile();
      this.profileStandard = profile.standard === true;
      if (!this.profileStandard || !this.wizard.dirty) {
        this.wizard.loadFromProfile(profile);
      }
      this.render();
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        this.tokenStore.set(null);
        this.client.token = null;
        this.go({ screen: "auth" });
      }
    }
  }

  private async refreshUnits(): Promise<void> {
    this.units = (await this.client.listUnits()).units;
    const profile = await this.client.getProfile();
    this.profileStandard = profile.standard === true;
    this.render();
  }

  // -- rendering ---------------------------------------------------------------

  render(): void {
    if (!this.root) return;
    this.root.replaceChildren(this.renderNav(), this.renderScreen());
  }

  private renderNav(): HTMLElement {
    if (!this.client.token) return h("nav", { class: "nav" }, h("strong", {}, "Assistance tool"));
    return h(
      "nav",
      { class: "nav" },
      h("strong", {}, "Assistance tool"),
      h("a", { href: "#", onclick: (e) => { e.preventDefault(); this.go({ screen: "wizard" }); } }, "My profile"),
      h("a", { href: "#", onclick: (e) => { e.preventDefault(); void this.openUnits(); } }, "Teaching units"),
      h("a", { href: "#", onclick: (e) => { e.preventDefault(); this.logout(); } }, "Log out")
    );
  }

  private logout(): void {
    this.tokenStore.set(null);
    this.client.token = null;
    this.wizard.discard();
    this.go({ screen: "auth" });
  }

  private renderScreen(): HTMLElement {
    switch (this.route.screen) {
      case "auth":
        return this.renderAuth();
      case "wizard":
        return this.renderWizard();
      case "quiz":
        return this.renderQuiz();
      case "units":
        return this.renderUnits();
      case "unit":
        return this.renderUnitDetail(this.route.unitId);
    }
  }

  // -- auth -----------------------------------------------------------------

  private renderAuth(): HTMLElement {
    const status = h("p", { class: "error", "data-role": "auth-error" });
    const field = (id: string, label: string, type = "text") =>
      h("label", {}, label, h("input", { id, type }));
    const value = (id: string) => (document.getElementById(id) as HTMLInputElement).value;

    const doRegister = async () => {
      try {
        await this.client.register(
          value("reg-name"), value("reg-surname"), value("reg-email"), value("reg-password")
        );
        status.textContent = "Registered. You can log in now.";
        status.className = "ok";
      } catch (error) {
        status.textContent = error instanceof Error ? error.message : String(error);
      }
    };
    const doLogin = async () => {
      try {
        await this.client.login(value("login-email"), value("login-password"));
        this.tokenStore.set(this.client.token);
        await this.loadProfileIntoWizard();
        this.go({ screen: "wizard" });
      } catch {
        status.textContent = "Login failed: check email and password.";
      }
    };

    return h(
      "main",
      { class: "screen" },
      h("h1", {}, "Welcome"),
      h(
        "section",
        { class: "card" },
        h("h2", {}, "Log in"),
        field("login-email", "Email"),
        field("login-password", "Password", "password"),
        h("button", { id: "login-submit", onclick: () => void doLogin() }, "Log in")
      ),
      h(
        "section",
        { class: "card" },
        h("h2", {}, "Register"),
        field("reg-name", "First name"),
        field("reg-surname", "Surname"),
        field("reg-email", "Email"),
        field("reg-password", "Password", "password"),
        h("button", { id: "register-submit", onclick: () => void doRegister() }, "Register")
      ),
      status
    );
  }

  // -- profile wizard -----------------------------------------------------------

  private violationFor(field: string): HTMLElement | null {
    const hits = this.violations.filter((v) => v.field === field || v.field.startsWith(field + "."));
    if (hits.length === 0) return null;
    return h("p", { class: "error", "data-violation": field }, hits.map((v) => `${v.rule}: ${v.detail}`).join("; "));
  }

  private renderWizard(): HTMLElement {
    const state = this.wizard;
    const stepTitle = ["Skills and behaviours", "Knowledge levels", "Tools", "Personality type"][state.stepIndex];

    const steps = h(
      "ol",
      { class: "steps" },
      ...WIZARD_STEPS.map((name, index) =>
        h(
          "li",
          {
            class: index === state.stepIndex ? "current" : "",
            onclick: () => { state.goTo(index); this.render(); },
          },
          name
        )
      )
    );

    const body = [
      () => this.renderSkillsStep(),
      () => this.renderKnowledgeStep(),
      () => this.renderToolsStep(),
      () => this.renderPersonalityStep(),
    ][state.stepIndex]!();

    const save = async () => {
      this.violations = [];
      try {
        await this.client.putProfile(state.toProfilePayload());
        state.markSaved();
        this.notice = "Profile saved.";
        this.profileStandard = false;
      } catch (error) {
        if (error instanceof ApiError && error.status === 422) {
          this.violations = error.violations();
          this.notice = "";
        } else {
          this.notice = error instanceof Error ? error.message : String(error);
        }
      }
      this.render();
    };

    return h(
      "main",
      { class: "screen" },
      h("h1", {}, "Teacher profile"),
      steps,
      h("h2", {}, stepTitle),
      this.notice ? h("p", { class: "ok" }, this.notice) : null,
      this.violations.length
        ? h("p", { class: "error" }, "The profile was not saved; fix the fields below.")
        : null,
      body,
      h(
        "div",
        { class: "actions" },
        h("button", { onclick: () => { state.previous(); this.render(); }, disabled: state.stepIndex === 0 }, "Back"),
        h("button", { onclick: () => { state.next(); this.render(); }, disabled: state.stepIndex === WIZARD_STEPS.length - 1 }, "Next"),
        h("button", { id: "wizard-save", class: "primary", onclick: () => void save() }, "Save profile"),
        h("button", { id: "wizard-skip", onclick: () => void this.openUnits() }, "Skip for now")
      )
    );
  }

  private renderSkillsStep(): HTMLElement {
    const state = this.wizard;
    const behaviour = state.draft.behaviours.find((b) => b.aspect === "group_management");
    return h(
      "section",
      { class: "card" },
      h(
        "label",
        {},
        "Skills (comma separated, e.g. organize, negotiate, coach, motivate)",
        h("input", {
          id: "skills",
          value: csv(state.draft.skills),
          onchange: (e) =>
            state.update((d) => { d.skills = parseCsv((e.target as HTMLInputElement).value); }),
        })
      ),
      this.violationFor("skills"),
      h(
        "label",
        {},
        "How do you manage groups?",
        h(
          "select",
          {
            id: "behaviour-group-management",
            onchange: (e) => {
              const style = (e.target as HTMLSelectElement).value;
              state.update((d) => {
                d.behaviours = d.behaviours.filter((b) => b.aspect !== "group_management");
                if (style) d.behaviours.push({ aspect: "group_management", style });
              });
            },
          },
          h("option", { value: "", selected: !behaviour }, "(not set)"),
          ...BEHAVIOUR_STYLES.map((style) =>
            h("option", { value: style, selected: behaviour?.style === style }, style)
          )
        )
      ),
      this.violationFor("behaviours")
    );
  }

  private renderKnowledgeStep(): HTMLElement {
    const state = this.wizard;
    const topics = Object.keys(state.draft.knowledge);
    const rows = topics.map((topic) =>
      h(
        "label",
        {},
        `Your knowledge of ${topic.replace(/_/g, " ")}`,
        h(
          "select",
          {
            "data-topic": topic,
            onchange: (e) =>
              state.update((d) => { d.knowledge[topic] = (e.target as HTMLSelectElement).value; }),
          },
          ...KNOWLEDGE_LEVELS.map((level) =>
            h("option", { value: level, selected: state.draft.knowledge[topic] === level }, level)
          )
        )
      )
    );
    return h(
      "section",
      { class: "card" },
      topics.length === 0
        ? h("p", {}, "Log in to load the topic list, or save once to initialize it.")
        : null,
      ...rows,
      this.violationFor("knowledge")
    );
  }

  private renderToolsStep(): HTMLElement {
    const state = this.wizard;
    return h(
      "section",
      { class: "card" },
      h(
        "label",
        {},
        "Tools you are used to (comma separated, e.g. chat, word_processor, spreadsheet)",
        h("input", {
          id: "known-tools",
          value: csv(state.draft.knownTools),
          onchange: (e) =>
            state.update((d) => { d.knownTools = parseCsv((e.target as HTMLInputElement).value); }),
        })
      ),
      this.violationFor("tools.known_tools"),
      h(
        "label",
        {},
        "Functionalities you wish for (e.g. data_storage)",
        h("input", {
          id: "wished-functionalities",
          value: csv(state.draft.wishedFunctionalities),
          onchange: (e) =>
            state.update((d) => {
              d.wishedFunctionalities = parseCsv((e.target as HTMLInputElement).value);
            }),
        })
      ),
      this.violationFor("tools.wished_functionalities"),
      h(
        "label",
        {},
        "Look & feel of the generated device",
        h(
          "select",
          { id: "look-and-feel", disabled: true },
          h("option", { selected: true }, "standard (only theme for now)")
        )
      )
    );
  }

  private renderPersonalityStep(): HTMLElement {
    const state = this.wizard;
    const personality = state.draft.personality;
    const selects = AXES.map(({ key, poles }) =>
      h(
        "label",
        {},
        `${key}: ${poles[0]} or ${poles[1]}?`,
        h(
          "select",
          {
            "data-axis": key,
            onchange: (e) => {
              const value = (e.target as HTMLSelectElement).value;
              state.update((d) => {
                if (!value) return;
                const base: PersonalityPayload =
                  d.personality ??
                  ({ perception: "", input: "", reasoning: "", processing: "", understanding: "", strengths: {} } as PersonalityPayload);
                base[key] = value;
                d.personality = base;
              });
            },
          },
          h("option", { value: "", selected: !personality || !personality[key] }, "(not set)"),
          ...poles.map((pole) =>
            h("option", { value: pole, selected: personality?.[key] === pole }, pole)
          )
        )
      )
    );
    const strengths = personality && Object.keys(personality.strengths).length
      ? h(
          "p",
          { id: "strengths" },
          "Quiz strengths: " +
            Object.entries(personality.strengths)
              .map(([axis, strength]) => `${axis}=${strength}`)
              .join(", ")
        )
      : null;
    return h(
      "section",
      { class: "card" },
      h("p", {}, "Declare the five axes yourself, or take the questionnaire (it covers four axes; reasoning stays self-declared)."),
      ...selects,
      strengths,
      this.violationFor("personality"),
      h("button", { id: "open-quiz", onclick: () => this.go({ screen: "quiz" }) }, "Take the 44-question quiz")
    );
  }

  // -- quiz -----------------------------------------------------------------

  private renderQuiz(): HTMLElement {
    const state = this.wizard;
    const counter = h(
      "p",
      { id: "quiz-progress" },
      `${answeredCount(state.quizAnswers)} of ${QUIZ_SIZE} answered`
    );
    const reasoningSelect = h(
      "select",
      { id: "quiz-reasoning" },
      h("option", { value: "" }, "(choose)"),
      h("option", { value: "inductive" }, "inductive"),
      h("option", { value: "deductive" }, "deductive")
    ) as HTMLSelectElement;
    const submit = h("button", { id: "quiz-submit", class: "primary", disabled: true }, "Submit quiz") as HTMLButtonElement;
    const status = h("p", { class: "error", id: "quiz-error" });

    const refreshGate = () => {
      counter.textContent = `${answeredCount(state.quizAnswers)} of ${QUIZ_SIZE} answered`;
      submit.disabled = !(isComplete(state.quizAnswers) && reasoningSelect.value !== "");
    };
    reasoningSelect.addEventListener("change", refreshGate);

    submit.addEventListener("click", () => {
      void (async () => {
        try {
          const personality = await this.client.submitQuiz(
            state.quizAnswers,
            reasoningSelect.value as "inductive" | "deductive"
          );
          state.update((d) => { d.personality = personality; });
          state.markSaved(); // the quiz endpoint already persisted the merge
          state.goTo(3);
          this.go({ screen: "wizard" });
        } catch (error) {
          status.textContent = error instanceof Error ? error.message : String(error);
        }
      })();
    });

    const items = QUIZ_ITEMS.map((item) => {
      const [stem, aText, bText] = splitPrompt(item.prompt);
      const option = (choice: "a" | "b", text: string) =>
        h(
          "label",
          { class: "choice" },
          h("input", {
            type: "radio",
            name: `q${item.id}`,
            value: choice,
            checked: state.quizAnswers[item.id] === choice,
            onchange: () => { state.setQuizAnswer(item.id, choice); refreshGate(); },
          }),
          ` (${choice}) ${text}`
        );
      return h(
        "fieldset",
        { class: "quiz-item", "data-item": String(item.id) },
        h("legend", {}, `${item.id}. ${stem}`),
        option("a", aText),
        option("b", bText)
      );
    });

    refreshGate();
    return h(
      "main",
      { class: "screen" },
      h("h1", {}, "Learning-style questionnaire"),
      h("p", {}, "Answer every item; pick the option closer to how you actually are."),
      counter,
      ...items,
      h("label", {}, "Your reasoning style (not covered by the quiz)", reasoningSelect),
      submit,
      status,
      h("button", { onclick: () => this.go({ screen: "wizard" }) }, "Back to profile")
    );
  }

  // -- units ----------------------------------------------------------------

  private async openUnits(): Promise<void> {
    this.go({ screen: "units" });
    await this.refreshUnits();
  }

  private renderUnits(): HTMLElement {
    const banner = this.profileStandard
      ? h(
          "p",
          { class: "banner", id: "standard-banner" },
          "No profile saved: a standard device will be produced."
        )
      : null;

    const list = this.units.length
      ? h(
          "ul",
          { id: "unit-list" },
          ...this.units.map((unit) =>
            h(
              "li",
              {},
              h(
                "a",
                {
                  href: "#",
                  onclick: (e) => {
                    e.preventDefault();
                    this.unitForm = fromUnitPayload(unit);
                    this.job = null;
                    this.listing = null;
                    this.viewerContent = null;
                    this.go({ screen: "unit", unitId: unit.unit_id ?? "" });
                    void this.tryLoadListing(unit.unit_id ?? "");
                  },
                },
                `${unit.unit_id}: ${unit.title}`
              )
            )
          )
        )
      : h("p", {}, "No teaching units yet.");

    return h(
      "main",
      { class: "screen" },
      h("h1", {}, "Teaching units"),
      banner,
      list,
      h("h2", {}, "New unit"),
      this.renderUnitForm()
    );
  }

  private renderUnitForm(): HTMLElement {
    const form = this.unitForm;
    const err = (key: string) =>
      this.unitFormErrors[key]
        ? h("p", { class: "error", "data-form-error": key }, this.unitFormErrors[key])
        : this.violationFor(key);

    const number = (id: string, label: string, get: () => number, set: (v: number) => void) =>
      h(
        "label",
        {},
        label,
        h("input", {
          id,
          type: "number",
          step: "0.5",
          value: String(get()),
          onchange: (e) => set(Number((e.target as HTMLInputElement).value)),
        })
      );

    const groups = form.groups.map((group, index) =>
      h(
        "fieldset",
        { class: "group" },
        h("legend", {}, `Group ${index + 1}`),
        h(
          "label",
          {},
          "Students (one per line)",
          h("textarea", {
            rows: "5",
            "data-group": String(index),
            onchange: (e) => { group.membersText = (e.target as HTMLTextAreaElement).value; },
          }, group.membersText)
        ),
        number(`team-count-${index}`, "Teams in this group (0 = not my group)",
          () => group.teamCount, (v) => { group.teamCount = v; }),
        err(`groups.${index}`),
        h("button", { onclick: () => { form.groups.splice(index, 1); this.render(); } }, "Remove group")
      )
    );

    const resources = form.resources.map((resource, index) =>
      h(
        "fieldset",
        { class: "resource" },
        h("label", {}, "Label", h("input", {
          value: resource.label,
          onchange: (e) => { resource.label = (e.target as HTMLInputElement).value; },
        })),
        h("label", {}, "Locator (URL)", h("input", {
          value: resource.locator,
          onchange: (e) => { resource.locator = (e.target as HTMLInputElement).value; },
        })),
        err(`resources.${index}`),
        h("button", { onclick: () => { form.resources.splice(index, 1); this.render(); } }, "Remove resource")
      )
    );

    const submit = async () => {
      this.unitFormErrors = unitFormErrors(form);
      this.violations = [];
      if (Object.keys(this.unitFormErrors).length > 0) {
        this.render();
        return;
      }
      try {
        const { unit_id } = await this.client.createUnit(toUnitPayload(form));
        this.unitForm = emptyUnitForm();
        this.job = null;
        this.listing = null;
        this.go({ screen: "unit", unitId: unit_id });
      } catch (error) {
        if (error instanceof ApiError && error.status === 422) {
          this.violations = error.violations();
          this.render();
        } else {
          this.notice = error instanceof Error ? error.message : String(error);
          this.render();
        }
      }
    };

    return h(
      "section",
      { class: "card", id: "unit-form" },
      h("label", {}, "Title", h("input", {
        id: "unit-title",
        value: form.title,
        onchange: (e) => { form.title = (e.target as HTMLInputElement).value; },
      })),
      err("title"),
      h("label", {}, "Target domain project", h("input", {
        id: "unit-domain",
        value: form.domainProject,
        onchange: (e) => { form.domainProject = (e.target as HTMLInputElement).value; },
      })),
      h("label", {}, "Client needs", h("input", {
        id: "unit-needs",
        value: form.clientNeeds,
        onchange: (e) => { form.clientNeeds = (e.target as HTMLInputElement).value; },
      })),
      number("unit-lecture-hours", "Lecture hours", () => form.lectureHours, (v) => { form.lectureHours = v; }),
      err("lecture_hours"),
      number("unit-practical-hours", "Practical hours", () => form.practicalHours, (v) => { form.practicalHours = v; }),
      err("practical_hours"),
      number("unit-session-duration", "Session duration (h)", () => form.sessionDuration, (v) => { form.sessionDuration = v; }),
      err("session_duration"),
      ...groups,
      err("groups"),
      h("button", { onclick: () => { form.groups.push({ membersText: "", teamCount: 0 }); this.render(); } }, "Add group"),
      ...resources,
      h("button", { onclick: () => { form.resources.push({ label: "", locator: "" }); this.render(); } }, "Add resource"),
      h("div", { class: "actions" },
        h("button", { id: "unit-submit", class: "primary", onclick: () => void submit() }, "Create unit"))
    );
  }

  // -- generation and device preview ------------------------------------------

  private async tryLoadListing(unitId: string): Promise<void> {
    try {
      this.listing = await this.client.deviceListing(unitId);
    } catch {
      this.listing = null;
    }
    this.render();
  }

  private async startGeneration(unitId: string): Promise<void> {
    this.polling = true;
    this.job = null;
    this.listing = null;
    this.render();
    try {
      const { job_id } = await this.client.generate(unitId);
      this.job = await this.client.pollJob(job_id);
      if (this.job.state === "done") {
        this.listing = await this.client.deviceListing(unitId);
      }
    } catch (error) {
      this.job = {
        job_id: "",
        unit_id: unitId,
        state: "failed",
        result: null,
        error: error instanceof Error ? error.message : String(error),
      };
    }
    this.polling = false;
    this.render();
  }

  private async openDeviceFile(unitId: string, path: string): Promise<void> {
    this.viewerContent = await this.client.deviceFile(unitId, path);
    this.render();
  }

  private renderUnitDetail(unitId: string): HTMLElement {
    const banner = this.profileStandard
      ? h("p", { class: "banner", id: "standard-banner" },
          "No profile saved: a standard device will be produced.")
      : null;

    let status: HTMLElement | null = null;
    if (this.polling) {
      status = h("p", { id: "job-progress", class: "progress" }, "Generating the device...");
    } else if (this.job?.state === "failed") {
      status = h(
        "div",
        {},
        h("p", { class: "error", id: "job-error" }, `Generation failed: ${this.job.error ?? "unknown"}`),
        h("button", { id: "job-retry", onclick: () => void this.startGeneration(unitId) }, "Retry")
      );
    }

    let device: HTMLElement | null = null;
    if (this.listing) {
      const blogs = blogLinks(this.listing).map((path) =>
        h(
          "li",
          {},
          h("a", {
            href: "#",
            class: "blog-link",
            onclick: (e) => { e.preventDefault(); void this.openDeviceFile(unitId, path); },
          }, path.split("/")[1] ?? path)
        )
      );
      const pages = this.listing.files
        .filter((f) => f.startsWith("esuitcase/"))
        .map((path) =>
          h(
            "li",
            {},
            h("a", {
              href: "#",
              class: "esuitcase-link",
              onclick: (e) => { e.preventDefault(); void this.openDeviceFile(unitId, path); },
            }, path.replace("esuitcase/", ""))
          )
        );
      device = h(
        "section",
        { class: "card", id: "device" },
        h("h2", {}, "Generated device"),
        h("h3", {}, "E-suitcase"),
        h("ul", { id: "esuitcase-pages" }, ...pages),
        h("h3", {}, "Team blogs"),
        h("ul", { id: "blog-links" }, ...blogs),
        h("h3", {}, "Toolbox"),
        h("div", { id: "toolbox" }, h("button", {
          onclick: () => void this.openToolbox(unitId),
        }, "Show toolbox manifest"))
      );
    }

    const viewer = this.viewerContent
      ? h("section", { class: "card" },
          h("h3", {}, "Preview"),
          Object.assign(h("iframe", { id: "viewer", sandbox: "" }), { srcdoc: this.viewerContent }))
      : null;

    return h(
      "main",
      { class: "screen" },
      h("h1", {}, `Unit ${unitId}`),
      banner,
      h("button", {
        id: "generate",
        class: "primary",
        disabled: this.polling,
        onclick: () => void this.startGeneration(unitId),
      }, "Generate the device"),
      status,
      device,
      viewer,
      h("button", { onclick: () => void this.openUnits() }, "Back to units")
    );
  }

  private async openToolbox(unitId: string): Promise<void> {
    const manifest = await this.client.deviceFile(unitId, "toolbox.manifest");
    const rows = manifest
      .split("\n")
      .filter((line) => line.trim())
      .map((line) => {
        const [tool, locator, source] = line.split("|").map((p) => p.trim());
        return h("tr", {},
          h("td", {}, tool ?? ""),
          h("td", {}, h("a", { href: locator ?? "#" }, locator ?? "")),
          h("td", {}, source ?? ""));
      });
    const table = h(
      "table",
      { id: "toolbox-table" },
      h("tr", {}, h("th", {}, "Tool"), h("th", {}, "Locator"), h("th", {}, "Source")),
      ...rows
    );
    const container = document.getElementById("toolbox");
    if (container) container.replaceChildren(table);
  }
}

/** "stem — (a) first; (b) second." -> [stem, first, second] */
export function splitPrompt(prompt: string): [string, string, string] {
  const match = prompt.match(/^(.*?)—\s*\(a\)\s*(.*?);\s*\(b\)\s*(.*)$/s);
  if (!match) return [prompt, "option a", "option b"];
  const strip = (s: string) => s.trim().replace(/\.$/, "");
  return [match[1]!.trim(), strip(match[2]!), strip(match[3]!)];
}
