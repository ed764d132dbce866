// Integration against the real server: the wizard round trip, the quiz,
// and the generation screen flow, end to end over HTTP.

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, blogLinks, DOCUMENTED_ENDPOINTS } from "../src/api.js";
import { MemoryStore, WizardState } from "../src/state.js";

const PORT = 8480 + (process.pid % 37);
const BASE = `http://127.0.0.1:${PORT}`;
const REPO_ROOT = join(__dirname, "..", "..");

let server: ChildProcess;
let dataDir: string;

async function waitForServer(): Promise<void> {
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/api/profile`);
      if (response.status > 0) return;
    } catch {
      if (Date.now() > deadline) throw new Error("server did not come up");
      await new Promise((r) => setTimeout(r, 200));
    }
  }
}

beforeAll(async () => {
  dataDir = mkdtempSync(join(tmpdir(), "at-webui-"));
  server = spawn(
    "python3",
    ["-m", "uvicorn", "--factory", "--port", String(PORT), "--log-level", "warning", "atkit.service:create_app"],
    { cwd: REPO_ROOT, env: { ...process.env, AT_DATA_DIR: dataDir }, stdio: "inherit" }
  );
  await waitForServer();
}, 40_000);

afterAll(() => {
  server?.kill();
  rmSync(dataDir, { recursive: true, force: true });
});

function jonesDraftInputs(state: WizardState): void {
  state.update((d) => {
    d.skills = ["coach", "motivate"];
    d.behaviours = [{ aspect: "group_management", style: "directive" }];
    d.knowledge = {
      active_pedagogy: "working",
      group_pedagogy: "working",
      project_pedagogy: "working",
      maetic: "little",
    };
    d.knownTools = ["chat", "word_processor", "spreadsheet"];
    d.wishedFunctionalities = ["data_storage"];
    d.personality = {
      perception: "intuitive",
      input: "verbal",
      reasoning: "deductive",
      processing: "active",
      understanding: "sequential",
      strengths: {},
    };
  });
}

const unitPayload = {
  title: "Web programming",
  domain_project: "A dynamic web site",
  client_needs: "Catalogue and ordering",
  lecture_hours: 14,
  practical_hours: 26,
  session_duration: 2,
  groups: [
    { members: Array.from({ length: 25 }, (_, i) => `Student g1-${String(i + 1).padStart(3, "0")}`), team_count: 5 },
    { members: Array.from({ length: 25 }, (_, i) => `Student g2-${String(i + 1).padStart(3, "0")}`), team_count: 0 },
    { members: Array.from({ length: 25 }, (_, i) => `Student g3-${String(i + 1).padStart(3, "0")}`), team_count: 0 },
    { members: Array.from({ length: 25 }, (_, i) => `Student g4-${String(i + 1).padStart(3, "0")}`), team_count: 0 },
  ],
  resources: [{ label: "Handbook", locator: "https://resources.example/handbook" }],
  method_id: "maetic",
};

describe("live server", () => {
  const client = new ApiClient(BASE);

  it("registers and logs in", async () => {
    await client.register("M", "Jones", "jones@example.edu", "pw-123");
    const uid = await client.login("jones@example.edu", "pw-123");
    expect(uid).toBeGreaterThan(0);
  });

  it("wizard round trip: save, reload, same displayed values", async () => {
    const entered = new WizardState(new MemoryStore());
    jonesDraftInputs(entered);
    await client.putProfile(entered.toProfilePayload());
    entered.markSaved();

    // "reload": a fresh wizard repopulated from GET /api/profile
    const reloaded = new WizardState(new MemoryStore());
    const fromServer = await client.getProfile();
    expect(fromServer.standard).toBe(false);
    reloaded.loadFromProfile(fromServer);
    expect(reloaded.draft).toEqual(entered.draft);
  });

  it("all-a quiz displays active/sensory/visual/sequential with strong strengths", async () => {
    const answers = Object.fromEntries(
      Array.from({ length: 44 }, (_, i) => [i + 1, "a"])
    ) as Record<number, "a" | "b">;
    const personality = await client.submitQuiz(answers, "deductive");
    expect(personality.processing).toBe("active");
    expect(personality.perception).toBe("sensory");
    expect(personality.input).toBe("visual");
    expect(personality.understanding).toBe("sequential");
    expect(personality.reasoning).toBe("deductive");
    expect(personality.strengths).toEqual({
      perception: "strong",
      input: "strong",
      processing: "strong",
      understanding: "strong",
    });
    // what the personality step would display after the quiz
    const state = new WizardState(new MemoryStore());
    state.loadFromProfile(await client.getProfile());
    expect(state.draft.personality).toEqual(personality);
  });

  it("generation screen reaches done and lists 5 blog links", async () => {
    // restore the worked-example profile (the quiz test above replaced
    // the personality; most recent submission wins by design)
    const entered = new WizardState(new MemoryStore());
    jonesDraftInputs(entered);
    await client.putProfile(entered.toProfilePayload());

    const { unit_id } = await client.createUnit(unitPayload);
    const { job_id } = await client.generate(unit_id);

    // two tabs polling the same job both converge
    const [first, second] = await Promise.all([
      client.pollJob(job_id, { intervalMs: 50 }),
      client.pollJob(job_id, { intervalMs: 80 }),
    ]);
    expect(first.state).toBe("done");
    expect(second.state).toBe("done");

    const listing = await client.deviceListing(unit_id);
    const links = blogLinks(listing);
    expect(links.length).toBe(5);
    expect(listing.files).toContain("toolbox.manifest");
    expect(listing.files.some((f) => f.startsWith("esuitcase/"))).toBe(true);

    const page = await client.deviceFile(unit_id, "esuitcase/present-maetic.html");
    expect(page).toContain('data-modality="audio"');
    const manifest = await client.deviceFile(unit_id, "toolbox.manifest");
    expect(manifest).toMatch(/spreadsheet \| .* \| directive/);
  }, 30_000);

  it("invalid unit surfaces violations for inline display", async () => {
    try {
      await client.createUnit({ ...unitPayload, session_duration: 99 });
      expect.unreachable("server accepted an invalid unit");
    } catch (error: any) {
      expect(error.status).toBe(422);
      expect(error.violations().some((v: any) => v.field === "session_duration")).toBe(true);
    }
  });

  it("the whole session only touched documented endpoints", () => {
    expect(client.requestLog.length).toBeGreaterThan(10);
    for (const request of client.requestLog) {
      const documented = DOCUMENTED_ENDPOINTS.some(
        (e) => e.method === request.method && e.pattern.test(request.path)
      );
      expect(documented, `${request.method} ${request.path}`).toBe(true);
    }
  });
});
