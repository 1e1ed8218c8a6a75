/** The single-page client: bubble drill-down over the scoped classification,
 * a persistent search cart, tabbed message/profile results, a write/index
 * composer, a profile editor, and spread/remove controls on discussions.
 *
 * Pure API client: every matching, visibility and validation decision comes
 * from the service; this file only renders state and relays actions. */

import { ApiClient, ApiError } from "./api.js";
import {
  CartAction,
  CartItem,
  applyCartAction,
  queryPayload,
  replayCart,
} from "./cart.js";
import { packCircles } from "./layout.js";
import type {
  ConsultDoc,
  ProfileDoc,
  ProfileHitDoc,
  ResourceHitDoc,
  Scope,
  SubjectDoc,
} from "./types.js";
import { TaxonomyView, buildView, childrenOf, isLeafLevel, pathOf } from "./view.js";

export type Tab = "search" | "messages" | "profiles";
export type ComposerTab = "write" | "index";

interface ComposerState {
  tab: ComposerTab;
  title: string;
  body: string;
  subjects: Set<string>;
  error: string | null;
  open: boolean;
}

export class App {
  tab: Tab = "search";
  scope: Scope = "all";
  view: TaxonomyView = buildView(0, []);
  full: TaxonomyView = buildView(0, []);
  current: string | null = null;
  cartLog: CartAction[] = [];
  cart: CartItem[] = [];
  resourceHits: ResourceHitDoc[] = [];
  profileHits: ProfileHitDoc[] = [];
  thread: ConsultDoc | null = null;
  profile: ProfileDoc | null = null;
  editingProfile = false;
  notice: string | null = null;
  composer: ComposerState = {
    tab: "write",
    title: "",
    body: "",
    subjects: new Set(),
    error: null,
    open: false,
  };
  private pending: Promise<unknown> = Promise.resolve();
  private armedRemoval: string | null = null;

  constructor(
    public readonly root: HTMLElement,
    public readonly client: ApiClient,
    public readonly member: string,
  ) {}

  /** Chain an async action so tests can await quiescence via settled(). */
  track<T>(work: Promise<T>): Promise<T> {
    this.pending = this.pending.then(() => work.catch(() => undefined));
    return work;
  }

  async settled(): Promise<void> {
    let last;
    do {
      last = this.pending;
      await last;
    } while (last !== this.pending);
  }

  async start(): Promise<void> {
    await this.reloadTaxonomy();
    this.profile = await this.client.profile(this.member);
    await this.runSearch();
    this.render();
  }

  async reloadTaxonomy(): Promise<void> {
    const scoped = await this.client.view(this.scope);
    this.view = buildView(scoped.taxonomy_version, scoped.subjects);
    const roots = await this.client.roots();
    const everything: SubjectDoc[] = [...roots.subjects];
    const queue = [...roots.subjects];
    while (queue.length) {
      const next = queue.shift()!;
      const children = await this.client.children(next.id);
      everything.push(...children.subjects);
      queue.push(...children.subjects);
    }
    this.full = buildView(roots.taxonomy_version, everything);
    if (this.current !== null && !this.view.subjects.has(this.current)) {
      this.current = null;
    }
  }

  // -- cart ----------------------------------------------------------------

  dispatchCart(action: CartAction): Promise<void> {
    this.cartLog.push(action);
    this.cart = replayCart(this.cartLog);
    this.render();
    return this.track(this.runSearch().then(() => this.render()));
  }

  addToCart(subject: SubjectDoc): Promise<void> {
    return this.dispatchCart({
      kind: "add",
      subject: subject.id,
      label: subject.label,
      path: pathOf(this.view, subject.id).map((s) => s.label),
    });
  }

  // -- queries ---------------------------------------------------------------

  private async doSearch(): Promise<void> {
    const payload = queryPayload(this.cart);
    if (this.tab === "profiles") {
      const response = await this.client.searchProfiles(payload, this.scope);
      this.profileHits = response.hits;
      this.checkVersion(response.taxonomy_version);
    } else {
      const response = await this.client.searchResources(payload, this.scope);
      this.resourceHits = response.hits;
      this.checkVersion(response.taxonomy_version);
    }
  }

  async runSearch(): Promise<void> {
    try {
      await this.doSearch();
      this.notice = null;
    } catch (error) {
      if (error instanceof ApiError && error.code === "SubjectOutOfScope") {
        // flag everything the scoped view no longer contains, then retry once
        const flagged: string[] = [];
        for (const item of this.cart) {
          if (!item.outOfScope && !this.view.subjects.has(item.subject)) {
            this.cartLog.push({ kind: "flagOutOfScope", subject: item.subject });
            flagged.push(item.label);
          }
        }
        this.cart = replayCart(this.cartLog);
        if (flagged.length) {
          await this.doSearch();
          this.notice = `Deactivated (outside your ${this.scope} view): ${flagged.join(", ")}`;
          return;
        }
      }
      throw error;
    }
  }

  private checkVersion(version: number): void {
    if (version !== this.view.version) {
      this.track(this.reloadTaxonomy().then(() => this.render()));
    }
  }

  async switchTab(tab: Tab): Promise<void> {
    this.tab = tab;
    this.render();
    await this.track(this.runSearch().then(() => this.render()));
  }

  async switchScope(scope: Scope): Promise<void> {
    this.scope = scope;
    await this.track(
      this.reloadTaxonomy()
        .then(() => this.runSearch())
        .then(() => this.render()),
    );
  }

  async openThread(resourceId: string): Promise<void> {
    this.thread = await this.client.consult(resourceId);
    this.armedRemoval = null;
    this.render();
  }

  // -- rendering ----------------------------------------------------------------

  render(): void {
    this.root.innerHTML = "";
    this.root.appendChild(this.renderHeader());
    const main = el("main", { id: "main" });
    const panel = el("section", { id: "main-panel" });
    if (this.tab === "search") panel.appendChild(this.renderSearchPanel());
    if (this.tab === "messages") panel.appendChild(this.renderMessages());
    if (this.tab === "profiles") panel.appendChild(this.renderProfiles());
    main.appendChild(panel);
    main.appendChild(this.renderCartColumn());
    this.root.appendChild(main);
    if (this.composer.open) this.root.appendChild(this.renderComposer());
    if (this.editingProfile && this.profile) this.root.appendChild(this.renderProfileEditor());
    if (this.thread) this.root.appendChild(this.renderThread());
  }

  private renderHeader(): HTMLElement {
    const header = el("header", { id: "top" });
    const tabs = el("nav", { id: "tabs" });
    for (const tab of ["search", "messages", "profiles"] as Tab[]) {
      const button = el("button", { "data-tab": tab, class: this.tab === tab ? "active" : "" });
      button.textContent = tab === "search" ? "Search" : tab === "messages" ? "Messages" : "Profiles";
      button.addEventListener("click", () => void this.switchTab(tab));
      tabs.appendChild(button);
    }
    header.appendChild(tabs);

    const scope = el("select", { id: "scope-filter" }) as HTMLSelectElement;
    for (const value of ["working_context", "secondary_interests", "all"]) {
      const option = el("option", { value }) as HTMLOptionElement;
      option.textContent = value.replace("_", " ");
      option.selected = value === this.scope;
      scope.appendChild(option);
    }
    scope.addEventListener("change", () => void this.switchScope(scope.value as Scope));
    header.appendChild(scope);

    const compose = el("button", { id: "open-composer" });
    compose.textContent = "Write a message";
    compose.addEventListener("click", () => {
      this.composer.open = !this.composer.open;
      this.render();
    });
    header.appendChild(compose);

    const editProfile = el("button", { id: "open-profile" });
    editProfile.textContent = "My profile";
    editProfile.addEventListener("click", () => {
      this.editingProfile = !this.editingProfile;
      this.render();
    });
    header.appendChild(editProfile);

    if (this.notice) {
      const notice = el("div", { id: "notice", role: "status" });
      notice.textContent = this.notice;
      header.appendChild(notice);
    }
    return header;
  }

  private renderSearchPanel(): HTMLElement {
    const panel = el("div", { id: "search-panel" });

    const breadcrumb = el("nav", { id: "breadcrumb" });
    const home = el("button", { "data-crumb-id": "" });
    home.textContent = "all subjects";
    home.addEventListener("click", () => {
      this.current = null;
      this.render();
    });
    breadcrumb.appendChild(home);
    if (this.current !== null) {
      for (const ancestor of pathOf(this.view, this.current)) {
        const crumb = el("button", { "data-crumb-id": ancestor.id });
        crumb.textContent = ancestor.label;
        crumb.addEventListener("click", () => {
          this.current = ancestor.id;
          this.render();
        });
        breadcrumb.appendChild(crumb);
      }
    }
    panel.appendChild(breadcrumb);

    const children = childrenOf(this.view, this.current);
    if (!isLeafLevel(this.view, this.current)) {
      const bubblePanel = el("div", { id: "bubble-panel" });
      const circles = packCircles(children.length, 640, 48);
      children.forEach((subject, index) => {
        const bubble = el("button", {
          class: "bubble",
          "data-subject-id": subject.id,
          draggable: "true",
          style: `left:${circles[index].x - 48}px; top:${circles[index].y - 48}px;`,
          title: "click: add to cart, double-click: open",
        });
        bubble.textContent = subject.label;
        bubble.addEventListener("click", () => void this.addToCart(subject));
        bubble.addEventListener("dblclick", () => {
          this.current = subject.id;
          this.render();
        });
        bubble.addEventListener("dragstart", (event) => {
          (event as DragEvent).dataTransfer?.setData("text/subject", subject.id);
        });
        bubblePanel.appendChild(bubble);
      });
      panel.appendChild(bubblePanel);
    } else {
      // community level: a multi-selection list instead of bubbles
      const select = el("select", { id: "leaf-select", multiple: "multiple", size: "8" }) as HTMLSelectElement;
      for (const leaf of children) {
        const option = el("option", { value: leaf.id, "data-subject-id": leaf.id }) as HTMLOptionElement;
        option.textContent = leaf.label;
        select.appendChild(option);
      }
      select.addEventListener("change", () => {
        for (const option of Array.from(select.selectedOptions)) {
          const subject = this.view.subjects.get(option.value);
          if (subject) void this.addToCart(subject);
        }
      });
      panel.appendChild(select);
    }

    panel.appendChild(this.renderNewSubjectForm("search"));
    return panel;
  }

  private renderCartColumn(): HTMLElement {
    const column = el("aside", { id: "cart-column" });
    const heading = el("h2");
    heading.textContent = "Search cart";
    column.appendChild(heading);
    const list = el("ul", { id: "cart" });
    list.addEventListener("dragover", (event) => event.preventDefault());
    list.addEventListener("drop", (event) => {
      const id = (event as DragEvent).dataTransfer?.getData("text/subject");
      const subject = id ? this.view.subjects.get(id) : undefined;
      if (subject) void this.addToCart(subject);
      event.preventDefault();
    });
    this.cart.forEach((item, index) => {
      const entry = el("li", {
        "data-subject-id": item.subject,
        class: `cart-item${item.active ? "" : " inactive"}${item.outOfScope ? " flagged" : ""}`,
        draggable: "true",
      });
      entry.addEventListener("dragend", (event) => {
        // sliding the bubble out of the column removes it
        const dropped = (event as DragEvent).dataTransfer?.dropEffect;
        if (dropped === "none") void this.dispatchCart({ kind: "remove", subject: item.subject });
      });

      const toggle = el("button", { class: "cart-toggle", title: "select / deselect" });
      toggle.textContent = item.active ? "●" : "○";
      toggle.addEventListener("click", () => void this.dispatchCart({ kind: "toggle", subject: item.subject }));
      entry.appendChild(toggle);

      const label = el("span", { class: "cart-label", title: item.path.join(" / ") });
      label.textContent = item.label;
      entry.appendChild(label);

      if (item.outOfScope) {
        const flag = el("span", { class: "cart-flag" });
        flag.textContent = "out of scope";
        entry.appendChild(flag);
      }

      const up = el("button", { class: "cart-move-up", title: "move up" });
      up.textContent = "↑";
      up.addEventListener("click", () => void this.dispatchCart({ kind: "move", subject: item.subject, to: index - 1 }));
      entry.appendChild(up);

      const down = el("button", { class: "cart-move-down", title: "move down" });
      down.textContent = "↓";
      down.addEventListener("click", () => void this.dispatchCart({ kind: "move", subject: item.subject, to: index + 1 }));
      entry.appendChild(down);

      const remove = el("button", { class: "cart-remove", title: "remove from cart" });
      remove.textContent = "×";
      remove.addEventListener("click", () => void this.dispatchCart({ kind: "remove", subject: item.subject }));
      entry.appendChild(remove);

      list.appendChild(entry);
    });
    column.appendChild(list);
    return column;
  }

  private renderMessages(): HTMLElement {
    const panel = el("div", { id: "results-messages" });
    if (this.resourceHits.length === 0) {
      const empty = el("p", { class: "empty" });
      empty.textContent = "No messages match the current cart.";
      panel.appendChild(empty);
    }
    for (const hit of this.resourceHits) {
      const article = el("article", { "data-resource-id": hit.resource.id, class: "hit" });
      const title = el("button", { class: "hit-title" });
      title.textContent = `${hit.resource.title} (${hit.resource.kind})`;
      title.addEventListener("click", () => void this.track(this.openThread(hit.resource.id)));
      article.appendChild(title);
      const matched = el("span", { class: "hit-matched" });
      matched.textContent = hit.matched_subjects
        .map((s) => this.view.subjects.get(s)?.label ?? s)
        .join(", ");
      article.appendChild(matched);
      panel.appendChild(article);
    }
    return panel;
  }

  private renderProfiles(): HTMLElement {
    const panel = el("div", { id: "results-profiles" });
    for (const hit of this.profileHits) {
      const card = el("article", { "data-member-id": hit.member.id, class: "hit" });
      const name = el("span", { class: "hit-title" });
      name.textContent = hit.member.display_name + (hit.member.country ? ` (${hit.member.country})` : "");
      card.appendChild(name);
      const matched = el("span", { class: "hit-matched" });
      matched.textContent = hit.matched_subjects
        .map((s) => this.view.subjects.get(s)?.label ?? s)
        .join(", ");
      card.appendChild(matched);
      panel.appendChild(card);
    }
    return panel;
  }

  private renderComposer(): HTMLElement {
    const composer = el("section", { id: "composer" });
    const tabs = el("nav", { id: "composer-tabs" });
    for (const tab of ["write", "index"] as ComposerTab[]) {
      const button = el("button", {
        "data-composer-tab": tab,
        class: this.composer.tab === tab ? "active" : "",
      });
      button.textContent = tab === "write" ? "Write" : "Index";
      button.addEventListener("click", () => {
        this.composer.tab = tab;
        this.render();
      });
      tabs.appendChild(button);
    }
    composer.appendChild(tabs);

    if (this.composer.tab === "write") {
      const title = el("input", { id: "composer-title", placeholder: "Title" }) as HTMLInputElement;
      title.value = this.composer.title;
      title.addEventListener("input", () => {
        this.composer.title = title.value;
        this.syncComposerSubmit();
      });
      composer.appendChild(title);
      const body = el("textarea", { id: "composer-body", placeholder: "Share the experience…" }) as HTMLTextAreaElement;
      body.value = this.composer.body;
      body.addEventListener("input", () => {
        this.composer.body = body.value;
        this.syncComposerSubmit();
      });
      composer.appendChild(body);
    } else {
      const index = el("div", { id: "composer-index" });
      const hint = el("p");
      hint.textContent = "Index this message in your own communities:";
      index.appendChild(hint);
      for (const entry of this.ownCommunities()) {
        const row = el("label", { class: "index-option" });
        const box = el("input", {
          type: "checkbox",
          "data-subject-id": entry.id,
        }) as HTMLInputElement;
        box.checked = this.composer.subjects.has(entry.id);
        box.addEventListener("change", () => {
          if (box.checked) this.composer.subjects.add(entry.id);
          else this.composer.subjects.delete(entry.id);
          this.syncComposerSubmit();
        });
        row.appendChild(box);
        row.appendChild(document.createTextNode(" " + entry.label));
        index.appendChild(row);
      }
      index.appendChild(this.renderNewSubjectForm("composer"));
      composer.appendChild(index);
    }

    const error = el("p", { id: "composer-error", role: "alert" });
    error.textContent = this.composer.error ?? "";
    composer.appendChild(error);

    const submit = el("button", { id: "composer-submit" }) as HTMLButtonElement;
    submit.textContent = "Post message";
    submit.disabled = !this.composerReady();
    submit.addEventListener("click", () => void this.track(this.submitComposer()));
    composer.appendChild(submit);
    return composer;
  }

  private composerReady(): boolean {
    return (
      this.composer.title.trim().length > 0 &&
      this.composer.body.trim().length > 0 &&
      this.composer.subjects.size > 0
    );
  }

  private syncComposerSubmit(): void {
    const submit = this.root.querySelector<HTMLButtonElement>("#composer-submit");
    if (submit) submit.disabled = !this.composerReady();
  }

  private ownCommunities(): SubjectDoc[] {
    if (!this.profile) return [];
    const declared = [...this.profile.working_context, ...this.profile.secondary_interests];
    const stale = new Set(this.profile.memberships.filter((m) => m.stale).map((m) => m.subject));
    return declared
      .filter((id) => !stale.has(id))
      .map((id) => this.full.subjects.get(id))
      .filter((s): s is SubjectDoc => s !== undefined)
      .sort((a, b) => a.label.localeCompare(b.label));
  }

  private async submitComposer(): Promise<void> {
    try {
      const created = await this.client.createDiscussion(
        this.composer.title,
        this.composer.body,
        [...this.composer.subjects],
      );
      this.composer = { tab: "write", title: "", body: "", subjects: new Set(), error: null, open: false };
      this.tab = "messages";
      await this.runSearch();
      await this.openThread(created.id);
    } catch (error) {
      if (error instanceof ApiError) {
        this.composer.error = `${error.code}: ${error.message}`;
        this.render();
        return;
      }
      throw error;
    }
  }

  private renderProfileEditor(): HTMLElement {
    const profile = this.profile!;
    const editor = el("section", { id: "profile-editor" });
    const heading = el("h2");
    heading.textContent = `${profile.display_name} — memberships`;
    editor.appendChild(heading);

    for (const scope of ["working_context", "secondary_interests"] as const) {
      const block = el("div", { id: `memberships-${scope}` });
      const label = el("h3");
      label.textContent = scope === "working_context" ? "Working context" : "Secondary interests";
      block.appendChild(label);
      const list = el("ul");
      for (const entry of profile.memberships.filter((m) => m.scope === scope)) {
        const item = el("li", { "data-subject-id": entry.subject, class: entry.stale ? "stale" : "" });
        const subject = this.full.subjects.get(entry.subject);
        item.appendChild(text(subject?.label ?? entry.subject));
        if (entry.stale) item.appendChild(el("span", { class: "stale-badge" }, "needs re-declaration"));
        const revoke = el("button", { class: "revoke-membership" }, "leave");
        revoke.addEventListener("click", () =>
          void this.track(
            this.client
              .revokeMembership(this.member, entry.subject)
              .then((updated) => {
                this.profile = updated;
                return this.reloadTaxonomy();
              })
              .then(() => this.render()),
          ),
        );
        item.appendChild(revoke);
        list.appendChild(item);
      }
      block.appendChild(list);

      const pick = el("select", { class: "declare-select", "data-scope": scope }) as HTMLSelectElement;
      pick.appendChild(el("option", { value: "" }, "— pick a community —") as HTMLOptionElement);
      for (const leaf of this.declarableCommunities()) {
        const option = el("option", { value: leaf.id }) as HTMLOptionElement;
        option.textContent = pathOf(this.full, leaf.id).map((s) => s.label).join(" / ");
        pick.appendChild(option);
      }
      const join = el("button", { class: "declare-membership", "data-scope": scope }, "join");
      join.addEventListener("click", () => {
        if (!pick.value) return;
        void this.track(
          this.client
            .declareMembership(this.member, pick.value, scope)
            .then((updated) => {
              this.profile = updated;
              return this.reloadTaxonomy();
            })
            .then(() => this.runSearch())
            .then(() => this.render()),
        );
      });
      block.appendChild(pick);
      block.appendChild(join);
      editor.appendChild(block);
    }

    editor.appendChild(this.renderNewSubjectForm("profile"));
    return editor;
  }

  /** Leaves of the full classification: what a member may declare. */
  private declarableCommunities(): SubjectDoc[] {
    const leaves: SubjectDoc[] = [];
    for (const subject of this.full.subjects.values()) {
      if (childrenOf(this.full, subject.id).length === 0) leaves.push(subject);
    }
    leaves.sort((a, b) => a.label.localeCompare(b.label));
    return leaves;
  }

  private renderThread(): HTMLElement {
    const view = this.thread!;
    const panel = el("section", { id: "thread", "data-resource-id": view.resource.id });
    const close = el("button", { id: "thread-close" }, "close");
    close.addEventListener("click", () => {
      this.thread = null;
      this.render();
    });
    panel.appendChild(close);
    panel.appendChild(el("h2", {}, view.resource.title));
    if (view.resource.body) panel.appendChild(el("p", { class: "thread-body" }, view.resource.body));
    if (view.resource.url) {
      const anchor = el("a", { href: view.resource.url }, view.resource.url);
      panel.appendChild(anchor);
    }

    const replies = el("ul", { id: "thread-replies" });
    for (const reply of view.replies) {
      replies.appendChild(el("li", { "data-reply-id": reply.id }, reply.body));
    }
    panel.appendChild(replies);

    const replyBox = el("textarea", { id: "reply-body" }) as HTMLTextAreaElement;
    panel.appendChild(replyBox);
    const replyButton = el("button", { id: "reply-submit" }, "reply");
    replyButton.addEventListener("click", () =>
      void this.track(
        this.client
          .reply(view.resource.id, replyBox.value)
          .then(() => this.openThread(view.resource.id)),
      ),
    );
    panel.appendChild(replyButton);

    const subjects = el("ul", { id: "thread-subjects" });
    const isAuthor = view.resource.author === this.member;
    for (const association of view.associations) {
      const item = el("li", {
        "data-association-subject": association.subject,
        class: `assoc-${association.origin}`,
      });
      item.appendChild(text(this.full.subjects.get(association.subject)?.label ?? association.subject));
      if (isAuthor) {
        // regulation: only the author ever sees a removal control
        const remove = el("button", { class: "remove-association" });
        remove.textContent =
          this.armedRemoval === association.subject ? "click again to remove" : "remove";
        remove.addEventListener("click", () => {
          if (this.armedRemoval !== association.subject) {
            this.armedRemoval = association.subject;
            this.render();
            return;
          }
          this.armedRemoval = null;
          void this.track(
            this.client
              .removeAssociation(view.resource.id, association.subject)
              .then(() => this.openThread(view.resource.id))
              .catch((error) => this.showThreadError(error)),
          );
        });
        item.appendChild(remove);
      }
      subjects.appendChild(item);
    }
    panel.appendChild(subjects);

    // spreading is open to every member who can see the thread
    const spreadPick = el("select", { id: "spread-select" }) as HTMLSelectElement;
    spreadPick.appendChild(el("option", { value: "" }, "— spread to —") as HTMLOptionElement);
    const tagged = new Set(view.associations.map((a) => a.subject));
    for (const subject of [...this.view.subjects.values()].sort((a, b) => a.label.localeCompare(b.label))) {
      if (tagged.has(subject.id)) continue;
      const option = el("option", { value: subject.id }) as HTMLOptionElement;
      option.textContent = subject.label;
      spreadPick.appendChild(option);
    }
    panel.appendChild(spreadPick);
    const spreadButton = el("button", { id: "spread-submit" }, "add subject");
    spreadButton.addEventListener("click", () => {
      if (!spreadPick.value) return;
      void this.track(
        this.client
          .spread(view.resource.id, spreadPick.value)
          .then(() => this.openThread(view.resource.id))
          .catch((error) => this.showThreadError(error)),
      );
    });
    panel.appendChild(spreadButton);
    panel.appendChild(el("p", { id: "thread-error", role: "alert" }, ""));
    panel.appendChild(this.renderNewSubjectForm("thread"));
    return panel;
  }

  private showThreadError(error: unknown): void {
    if (error instanceof ApiError) {
      const box = this.root.querySelector("#thread-error");
      if (box) box.textContent = `${error.code}: ${error.message}`;
      return;
    }
    throw error;
  }

  /** The "add a new subject" affordance, available while filling a profile,
   * classifying a message, searching, and consulting a thread. */
  private renderNewSubjectForm(context: "profile" | "composer" | "search" | "thread"): HTMLElement {
    const form = el("div", { class: "new-subject-form", "data-context": context });
    const label = el("input", { class: "new-subject-label", placeholder: "new subject" }) as HTMLInputElement;
    const parent = el("select", { class: "new-subject-parent" }) as HTMLSelectElement;
    for (const subject of [...this.full.subjects.values()].sort((a, b) => a.level - b.level || a.label.localeCompare(b.label))) {
      if (subject.level >= 4) continue;
      const option = el("option", { value: subject.id }) as HTMLOptionElement;
      option.textContent = pathOf(this.full, subject.id).map((s) => s.label).join(" / ");
      parent.appendChild(option);
    }
    const submit = el("button", { class: "new-subject-submit" }, "add subject");
    const error = el("span", { class: "new-subject-error", role: "alert" }, "");
    submit.addEventListener("click", () =>
      void this.track(
        this.client
          .addSubject(label.value, parent.value || null)
          .then(() => this.reloadTaxonomy())
          .then(() => {
            label.value = "";
            this.render();
          })
          .catch((failure) => {
            if (failure instanceof ApiError) error.textContent = `${failure.code}: ${failure.message}`;
            else throw failure;
          }),
      ),
    );
    form.append(label, parent, submit, error);
    return form;
  }
}

export async function startApp(root: HTMLElement, client: ApiClient, member: string): Promise<App> {
  const app = new App(root, client, member);
  await app.start();
  return app;
}

// -- tiny DOM helpers ---------------------------------------------------------

function el(tag: string, attrs: Record<string, string> = {}, textContent?: string): HTMLElement {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (textContent !== undefined) node.textContent = textContent;
  return node;
}

function text(value: string): Text {
  return document.createTextNode(value);
}
