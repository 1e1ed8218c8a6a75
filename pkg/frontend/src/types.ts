/** Wire types mirroring the service's JSON documents. */

export type Scope = "working_context" | "secondary_interests" | "all";

export interface SubjectDoc {
  id: string;
  label: string;
  parent: string | null;
  level: number;
  status: "active" | "deprecated";
  created_by: string;
  created_at: number;
}

export interface MembershipEntry {
  subject: string;
  scope: "working_context" | "secondary_interests";
  stale: boolean;
}

export interface ProfileDoc {
  id: string;
  display_name: string;
  email: string;
  country: string | null;
  biography: string | null;
  working_context: string[];
  secondary_interests: string[];
  memberships: MembershipEntry[];
}

export interface SessionDoc {
  token: string;
  member: string;
  issued_at: number;
  expires_at: number;
}

export interface ResourceDoc {
  id: string;
  kind: "discussion" | "document" | "weblink";
  author: string;
  title: string;
  created_at: number;
  body: string | null;
  url: string | null;
  attachment_ref: string | null;
  last_activity?: number;
}

export interface ReplyDoc {
  id: string;
  discussion: string;
  author: string;
  body: string;
  created_at: number;
}

export interface AssociationDoc {
  resource: string;
  subject: string;
  associated_by: string;
  origin: "authored" | "spread";
  associated_at: number;
}

export interface ConsultDoc {
  taxonomy_version: number;
  resource: ResourceDoc;
  replies: ReplyDoc[];
  associations: AssociationDoc[];
  last_activity: number;
}

export interface SubjectListDoc {
  taxonomy_version: number;
  subjects: SubjectDoc[];
}

export interface CartEntryWire {
  subject: string;
  active: boolean;
}

export interface ResourceHitDoc {
  resource: ResourceDoc;
  matched_subjects: string[];
  last_activity: number;
}

export interface ProfileHitDoc {
  member: { id: string; display_name: string; country: string | null };
  matched_subjects: string[];
}

export interface SearchResponse<H> {
  taxonomy_version: number;
  target: "resources" | "profiles";
  scope: Scope;
  cart: CartEntryWire[];
  hits: H[];
}

export interface ErrorDoc {
  code: string;
  message: string;
}
