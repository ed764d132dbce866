// Typed client over the service HTTP API.  This module is the ONLY
// place requests leave the browser: every call lands in `requestLog`,
// which the API-surface test checks against the documented endpoint
// list.

export interface PersonalityPayload {
  perception: string;
  input: string;
  reasoning: string;
  processing: string;
  understanding: string;
  strengths: Record<string, string>;
}

export interface ProfilePayload {
  uid?: number;
  skills: string[];
  knowledge: Array<{ topic: string; level: string }>;
  behaviours: Array<{ aspect: string; style: string }>;
  personality: PersonalityPayload | null;
  tools: { known_tools: string[]; wished_functionalities: string[] };
  extensions: Record<string, string>;
  standard?: boolean;
}

export interface GroupPayload {
  members: string[];
  team_count: number;
}

export interface UnitPayload {
  unit_id?: string;
  title: string;
  domain_project: string;
  client_needs: string;
  lecture_hours: number;
  practical_hours: number;
  session_duration: number;
  group_count?: number;
  groups: GroupPayload[];
  resources: Array<{ label: string; locator: string }>;
  method_id: string;
}

export interface JobPayload {
  job_id: string;
  unit_id: string;
  state: "queued" | "running" | "done" | "failed";
  result: string | null;
  error: string | null;
}

export interface DeviceListing {
  unit_id: string;
  files: string[];
}

export interface Violation {
  field: string;
  rule: string;
  detail: string;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown
  ) {
    super(`HTTP ${status}: ${typeof detail === "string" ? detail : JSON.stringify(detail)}`);
  }

  violations(): Violation[] {
    const d = this.detail as { violations?: Violation[] } | undefined;
    return d && Array.isArray(d.violations) ? d.violations : [];
  }
}

export interface LoggedRequest {
  method: string;
  path: string;
}

export class ApiClient {
  token: string | null = null;
  readonly requestLog: LoggedRequest[] = [];

  constructor(
    private baseUrl: string = "",
    private fetchImpl: typeof fetch = fetch.bind(globalThis)
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    raw = false
  ): Promise<T> {
    this.requestLog.push({ method, path });
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      let detail: unknown;
      try {
        detail = ((await response.json()) as { detail?: unknown }).detail;
      } catch {
        detail = response.statusText;
      }
      throw new ApiError(response.status, detail);
    }
    if (response.status === 204) return undefined as T;
    if (raw) return (await response.text()) as T;
    return (await response.json()) as T;
  }

  register(name: string, surname: string, email: string, password: string) {
    return this.request<{ uid: number }>("POST", "/api/register", {
      name,
      surname,
      email,
      password,
    });
  }

  async login(email: string, password: string): Promise<number> {
    const out = await this.request<{ token: string; uid: number }>("POST", "/api/login", {
      email,
      password,
    });
    this.token = out.token;
    return out.uid;
  }

  getProfile() {
    return this.request<ProfilePayload>("GET", "/api/profile");
  }

  putProfile(profile: ProfilePayload) {
    return this.request<void>("PUT", "/api/profile", profile);
  }

  submitQuiz(answers: Record<number, "a" | "b">, reasoning: "inductive" | "deductive") {
    const body = {
      answers: Object.fromEntries(
        Object.entries(answers).map(([id, choice]) => [String(id), choice])
      ),
      reasoning,
    };
    return this.request<PersonalityPayload>("POST", "/api/profile/quiz", body);
  }

  listUnits() {
    return this.request<{ units: UnitPayload[] }>("GET", "/api/units");
  }

  createUnit(unit: UnitPayload) {
    return this.request<{ unit_id: string }>("POST", "/api/units", unit);
  }

  getUnit(unitId: string) {
    return this.request<UnitPayload>("GET", `/api/units/${encodeURIComponent(unitId)}`);
  }

  updateUnit(unitId: string, unit: UnitPayload) {
    return this.request<void>("PUT", `/api/units/${encodeURIComponent(unitId)}`, unit);
  }

  deleteUnit(unitId: string) {
    return this.request<void>("DELETE", `/api/units/${encodeURIComponent(unitId)}`);
  }

  generate(unitId: string) {
    return this.request<{ job_id: string }>(
      "POST",
      `/api/units/${encodeURIComponent(unitId)}/generate`
    );
  }

  getJob(jobId: string) {
    return this.request<JobPayload>("GET", `/api/jobs/${encodeURIComponent(jobId)}`);
  }

  deviceListing(unitId: string) {
    return this.request<DeviceListing>("GET", `/api/device/${encodeURIComponent(unitId)}`);
  }

  deviceFile(unitId: string, path: string) {
    return this.request<string>(
      "GET",
      `/api/device/${encodeURIComponent(unitId)}/${path}`,
      undefined,
      true
    );
  }

  /** Poll a job until done/failed.  1 s interval with gentle backoff. */
  async pollJob(
    jobId: string,
    options: { intervalMs?: number; backoff?: number; timeoutMs?: number } = {}
  ): Promise<JobPayload> {
    const { intervalMs = 1000, backoff = 1.25, timeoutMs = 120_000 } = options;
    const deadline = Date.now() + timeoutMs;
    let wait = intervalMs;
    for (;;) {
      const job = await this.getJob(jobId);
      if (job.state === "done" || job.state === "failed") return job;
      if (Date.now() > deadline) throw new Error(`job ${jobId} still ${job.state}`);
      await new Promise((resolve) => setTimeout(resolve, wait));
      wait = Math.min(wait * backoff, 5000);
    }
  }
}

/** Blog index pages, one per team, derived from a device listing. */
export function blogLinks(listing: DeviceListing): string[] {
  return listing.files
    .filter((f) => /^blogs\/[^/]+\/index\.html$/.test(f))
    .sort();
}

/** The documented endpoint surface; used by tests and nothing else. */
export const DOCUMENTED_ENDPOINTS: Array<{ method: string; pattern: RegExp }> = [
  { method: "POST", pattern: /^\/api\/register$/ },
  { method: "POST", pattern: /^\/api\/login$/ },
  { method: "GET", pattern: /^\/api\/profile$/ },
  { method: "PUT", pattern: /^\/api\/profile$/ },
  { method: "POST", pattern: /^\/api\/profile\/quiz$/ },
  { method: "GET", pattern: /^\/api\/units$/ },
  { method: "POST", pattern: /^\/api\/units$/ },
  { method: "GET", pattern: /^\/api\/units\/[^/]+$/ },
  { method: "PUT", pattern: /^\/api\/units\/[^/]+$/ },
  { method: "DELETE", pattern: /^\/api\/units\/[^/]+$/ },
  { method: "POST", pattern: /^\/api\/units\/[^/]+\/generate$/ },
  { method: "GET", pattern: /^\/api\/jobs\/[^/]+$/ },
  { method: "GET", pattern: /^\/api\/device\/[^/]+$/ },
  { method: "GET", pattern: /^\/api\/device\/[^/]+\/.+$/ },
];
