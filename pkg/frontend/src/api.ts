/** Thin typed client over the HTTP API. All platform logic lives server-side;
 * this file only shuttles JSON and raises typed errors. */

import type {
  AssociationDoc,
  CartEntryWire,
  ConsultDoc,
  ProfileDoc,
  ProfileHitDoc,
  ResourceHitDoc,
  Scope,
  SearchResponse,
  SessionDoc,
  SubjectDoc,
  SubjectListDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  token: string | null = null;

  constructor(
    public readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const payload = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const code = payload?.code ?? "HttpError";
      const message = payload?.message ?? response.statusText;
      throw new ApiError(response.status, code, message);
    }
    return payload as T;
  }

  register(displayName: string, email: string): Promise<ProfileDoc> {
    return this.request("POST", "/api/members", { display_name: displayName, email });
  }

  async login(email: string): Promise<SessionDoc> {
    const session = await this.request<SessionDoc>("POST", "/api/sessions", { email });
    this.token = session.token;
    return session;
  }

  roots(): Promise<SubjectListDoc> {
    return this.request("GET", "/api/taxonomy/roots");
  }

  children(subjectId: string): Promise<SubjectListDoc> {
    return this.request("GET", `/api/taxonomy/${subjectId}/children`);
  }

  path(subjectId: string): Promise<SubjectListDoc> {
    return this.request("GET", `/api/taxonomy/${subjectId}/path`);
  }

  view(scope: Scope): Promise<SubjectListDoc & { scope: Scope }> {
    return this.request("GET", `/api/taxonomy/view?scope=${scope}`);
  }

  addSubject(label: string, parent: string | null): Promise<{ taxonomy_version: number; subject: SubjectDoc }> {
    return this.request("POST", "/api/taxonomy/subjects", { label, parent });
  }

  profile(memberId: string): Promise<ProfileDoc> {
    return this.request("GET", `/api/members/${memberId}/profile`);
  }

  declareMembership(memberId: string, subject: string, scope: "working_context" | "secondary_interests"): Promise<ProfileDoc> {
    return this.request("POST", `/api/members/${memberId}/memberships`, { subject, scope });
  }

  revokeMembership(memberId: string, subject: string): Promise<ProfileDoc> {
    return this.request("DELETE", `/api/members/${memberId}/memberships/${subject}`);
  }

  createDiscussion(title: string, body: string, subjects: string[]): Promise<{ id: string }> {
    return this.request("POST", "/api/discussions", { title, body, subjects });
  }

  consult(resourceId: string): Promise<ConsultDoc> {
    return this.request("GET", `/api/resources/${resourceId}`);
  }

  reply(resourceId: string, body: string): Promise<{ reply: { id: string } }> {
    return this.request("POST", `/api/resources/${resourceId}/replies`, { body });
  }

  spread(resourceId: string, subject: string): Promise<{ association: AssociationDoc }> {
    return this.request("POST", `/api/resources/${resourceId}/subjects`, { subject });
  }

  removeAssociation(resourceId: string, subject: string): Promise<unknown> {
    return this.request("DELETE", `/api/resources/${resourceId}/subjects/${subject}`);
  }

  searchResources(cart: CartEntryWire[], scope: Scope): Promise<SearchResponse<ResourceHitDoc>> {
    return this.request("POST", "/api/search/resources", { cart, scope });
  }

  searchProfiles(cart: CartEntryWire[], scope: Scope): Promise<SearchResponse<ProfileHitDoc>> {
    return this.request("POST", "/api/search/profiles", { cart, scope });
  }
}
