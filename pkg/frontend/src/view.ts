/** Pure helpers over a set of subjects (the member's scoped view or the
 * full classification): parent/child navigation, breadcrumbs, and the
 * leaf-level test that decides bubbles vs. multi-select rendering. */

import type { SubjectDoc } from "./types.js";

export interface TaxonomyView {
  version: number;
  subjects: Map<string, SubjectDoc>;
}

export function buildView(version: number, subjects: SubjectDoc[]): TaxonomyView {
  return { version, subjects: new Map(subjects.map((s) => [s.id, s])) };
}

export function childrenOf(view: TaxonomyView, parent: string | null): SubjectDoc[] {
  const out: SubjectDoc[] = [];
  for (const subject of view.subjects.values()) {
    if (subject.parent === parent) out.push(subject);
  }
  out.sort((a, b) => a.label.toLowerCase().localeCompare(b.label.toLowerCase()));
  return out;
}

export function pathOf(view: TaxonomyView, id: string): SubjectDoc[] {
  const chain: SubjectDoc[] = [];
  let current: SubjectDoc | undefined = view.subjects.get(id);
  while (current) {
    chain.unshift(current);
    current = current.parent === null ? undefined : view.subjects.get(current.parent);
  }
  return chain;
}

/** True when every child of `parent` is itself childless (within the view):
 * the drill-down has reached the community level and renders a multi-select
 * instead of bubbles. */
export function isLeafLevel(view: TaxonomyView, parent: string | null): boolean {
  const children = childrenOf(view, parent);
  if (children.length === 0) return true;
  return children.every((child) => childrenOf(view, child.id).length === 0);
}
