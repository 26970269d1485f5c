/**
 * Review queue single-page app.
 *
 * One ReviewApp instance owns one root element and renders three regions:
 * the queue (filter + page of pairs), the detail editor for the selected
 * pair, and a retryable error banner. All validation goes through the
 * server's /api/lexicon/check; the client holds no idiom list.
 *
 * Submit gating invariant: a non-force revision request is never issued
 * while the latest validation of the current draft shows one or more idiom
 * spans, or while validation is pending or stale (network failure). The
 * force toggle only overrides detected spans, never a stale validation.
 */
import {
  ApiError,
  ConflictError,
  Pair,
  PairStatus,
  ReviewApi,
  ValidationError,
} from "./api.js";
import { renderHighlighted } from "./highlight.js";

export interface AppOptions {
  annotator: string;
  pageSize?: number;
  debounceMs?: number;
}

type Filter = PairStatus | "all";

export class ReviewApp {
  private readonly doc: Document;
  private readonly pageSize: number;
  private readonly debounceMs: number;
  private readonly annotator: string;

  private filter: Filter = "all";
  private offset = 0;
  private total = 0;
  private page: Pair[] = [];
  private selected: Pair | null = null;

  private draftSpanCount = 0;
  private validationPending = false;
  private validationStale = false;
  private checkSeq = 0;
  private debounceTimer: ReturnType<typeof setTimeout> | null = null;
  private lastAction: (() => Promise<void>) | null = null;

  // regions, created once in constructor
  private banner!: HTMLDivElement;
  private bannerMessage!: HTMLSpanElement;
  private list!: HTMLUListElement;
  private pageInfo!: HTMLSpanElement;
  private prevButton!: HTMLButtonElement;
  private nextButton!: HTMLButtonElement;
  private detail!: HTMLDivElement;
  private sourceView!: HTMLDivElement;
  private statusChip!: HTMLSpanElement;
  private draftInput!: HTMLTextAreaElement;
  private draftSpans!: HTMLDivElement;
  private validationWarning!: HTMLDivElement;
  private forceToggle!: HTMLInputElement;
  private submitButton!: HTMLButtonElement;
  private approveButton!: HTMLButtonElement;
  private rejectInfo!: HTMLDivElement;
  private conflictDialog!: HTMLDivElement;
  private conflictMine!: HTMLDivElement;
  private conflictTheirs!: HTMLDivElement;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ReviewApi,
    options: AppOptions,
  ) {
    this.doc = root.ownerDocument;
    this.annotator = options.annotator;
    this.pageSize = options.pageSize ?? 10;
    this.debounceMs = options.debounceMs ?? 300;
    this.buildSkeleton();
  }

  /** Fetch the first page; safe to call again as "reload". */
  async start(): Promise<void> {
    await this.loadPage();
  }

  // -- skeleton --------------------------------------------------------

  private el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    id?: string,
    className?: string,
  ): HTMLElementTagNameMap[K] {
    const node = this.doc.createElement(tag);
    if (id) node.id = id;
    if (className) node.className = className;
    return node;
  }

  private buildSkeleton(): void {
    this.banner = this.el("div", "error-banner", "banner hidden");
    this.bannerMessage = this.el("span", "error-message");
    const retry = this.el("button", "error-retry");
    retry.textContent = "retry";
    retry.addEventListener("click", () => void this.retryLast());
    this.banner.append(this.bannerMessage, retry);

    const queue = this.el("div", undefined, "queue");
    const filter = this.el("select", "status-filter");
    for (const value of ["all", "machine", "revised", "approved", "flagged"]) {
      const option = this.el("option");
      option.value = value;
      option.textContent = value;
      filter.appendChild(option);
    }
    filter.addEventListener("change", () => {
      this.filter = filter.value as Filter;
      this.offset = 0;
      void this.loadPage();
    });
    this.list = this.el("ul", "pair-list");
    this.prevButton = this.el("button", "prev-page");
    this.prevButton.textContent = "prev";
    this.prevButton.addEventListener("click", () => void this.turnPage(-1));
    this.nextButton = this.el("button", "next-page");
    this.nextButton.textContent = "next";
    this.nextButton.addEventListener("click", () => void this.turnPage(1));
    this.pageInfo = this.el("span", "page-info");
    const pager = this.el("div", undefined, "pager");
    pager.append(this.prevButton, this.pageInfo, this.nextButton);
    queue.append(filter, this.list, pager);

    this.detail = this.el("div", "detail", "detail hidden");
    this.sourceView = this.el("div", "source-view");
    this.statusChip = this.el("span", "status-chip");
    this.draftInput = this.el("textarea", "draft");
    this.draftInput.addEventListener("input", () => this.onDraftEdited());
    this.draftSpans = this.el("div", "draft-spans");
    this.validationWarning = this.el("div", "validation-warning", "hidden");
    this.validationWarning.textContent =
      "validation unavailable; submit blocked until the check succeeds";
    this.forceToggle = this.el("input", "force-toggle");
    this.forceToggle.type = "checkbox";
    this.forceToggle.addEventListener("change", () => this.updateSubmitState());
    const forceLabel = this.el("label");
    forceLabel.append(this.forceToggle, this.doc.createTextNode(" force (keeps pair flagged)"));
    this.submitButton = this.el("button", "submit-revision");
    this.submitButton.textContent = "submit revision";
    this.submitButton.addEventListener("click", () => void this.submit());
    this.approveButton = this.el("button", "approve");
    this.approveButton.textContent = "approve";
    this.approveButton.addEventListener("click", () => void this.approve());
    this.rejectInfo = this.el("div", "reject-info", "hidden");

    this.conflictDialog = this.el("div", "conflict-dialog", "hidden");
    const mineTitle = this.el("div", undefined, "conflict-title");
    mineTitle.textContent = "your draft";
    const theirsTitle = this.el("div", undefined, "conflict-title");
    theirsTitle.textContent = "current on server";
    this.conflictMine = this.el("div", "conflict-mine");
    this.conflictTheirs = this.el("div", "conflict-theirs");
    const takeServer = this.el("button", "conflict-take-server");
    takeServer.textContent = "load server version";
    takeServer.addEventListener("click", () => this.adoptServerVersion());
    this.conflictDialog.append(
      mineTitle, this.conflictMine, theirsTitle, this.conflictTheirs, takeServer,
    );

    this.detail.append(
      this.sourceView, this.statusChip, this.draftInput, this.draftSpans,
      this.validationWarning, forceLabel, this.submitButton, this.approveButton,
      this.rejectInfo, this.conflictDialog,
    );
    this.root.append(this.banner, queue, this.detail);
  }

  // -- queue -----------------------------------------------------------

  private async loadPage(): Promise<void> {
    this.lastAction = () => this.loadPage();
    let pageData;
    try {
      pageData = await this.api.listPairs({
        status: this.filter === "all" ? undefined : this.filter,
        offset: this.offset,
        limit: this.pageSize,
      });
    } catch (error) {
      this.showBanner(error);
      return;
    }
    this.hideBanner();
    this.page = pageData.pairs;
    this.total = pageData.total;
    this.renderList();
    if (this.selected) {
      const refreshed = this.page.find((pair) => pair.id === this.selected!.id);
      if (refreshed) this.applyPair(refreshed, { keepDraft: true });
    }
  }

  private renderList(): void {
    this.list.textContent = "";
    if (this.page.length === 0) {
      const empty = this.el("li", "empty-state");
      empty.textContent = "no pairs";
      this.list.appendChild(empty);
    }
    for (const pair of this.page) {
      const item = this.el("li", undefined, "pair-item");
      item.dataset.id = pair.id;
      const chip = this.el("span", undefined, `chip chip-${pair.status}`);
      chip.textContent = pair.status;
      const label = this.el("span", undefined, "pair-source");
      label.textContent = pair.source;
      item.append(chip, label);
      item.addEventListener("click", () => void this.select(pair.id));
      this.list.appendChild(item);
    }
    const last = Math.min(this.offset + this.page.length, this.total);
    this.pageInfo.textContent = this.total === 0
      ? "0 of 0"
      : `${this.offset + 1}-${last} of ${this.total}`;
    this.prevButton.disabled = this.offset === 0;
    this.nextButton.disabled = this.offset + this.pageSize >= this.total;
  }

  private async turnPage(direction: 1 | -1): Promise<void> {
    const next = this.offset + direction * this.pageSize;
    if (next < 0 || next >= this.total) return;
    this.offset = next;
    await this.loadPage();
  }

  // -- selection and validation ----------------------------------------

  async select(id: string): Promise<void> {
    this.lastAction = () => this.select(id);
    let pair;
    try {
      pair = await this.api.getPair(id);
    } catch (error) {
      this.showBanner(error);
      return;
    }
    this.hideBanner();
    this.applyPair(pair, { keepDraft: false });
    this.detail.classList.remove("hidden");
    this.forceToggle.checked = false;
    this.rejectInfo.classList.add("hidden");
    this.conflictDialog.classList.add("hidden");
    this.scheduleValidation();
  }

  private applyPair(pair: Pair, { keepDraft }: { keepDraft: boolean }): void {
    this.selected = pair;
    this.sourceView.textContent = "";
    this.sourceView.appendChild(renderHighlighted(this.doc, pair.source, pair.idioms));
    this.statusChip.textContent = pair.status;
    this.statusChip.className = `chip chip-${pair.status}`;
    if (!keepDraft) {
      this.draftInput.value = pair.target;
    }
  }

  private onDraftEdited(): void {
    this.rejectInfo.classList.add("hidden");
    this.scheduleValidation();
  }

  private scheduleValidation(): void {
    this.validationPending = true;
    this.updateSubmitState();
    if (this.debounceTimer !== null) clearTimeout(this.debounceTimer);
    this.debounceTimer = setTimeout(() => void this.validateDraft(), this.debounceMs);
  }

  private async validateDraft(): Promise<void> {
    const seq = ++this.checkSeq;
    const text = this.draftInput.value;
    let spans;
    try {
      spans = await this.api.checkText(text);
    } catch {
      if (seq !== this.checkSeq) return;
      this.validationStale = true;
      this.validationPending = false;
      this.validationWarning.classList.remove("hidden");
      this.updateSubmitState();
      return;
    }
    // a newer check or an edited draft supersedes this response
    if (seq !== this.checkSeq || text !== this.draftInput.value) return;
    this.validationStale = false;
    this.validationPending = false;
    this.validationWarning.classList.add("hidden");
    this.draftSpanCount = spans.length;
    this.draftSpans.textContent = "";
    this.draftSpans.appendChild(renderHighlighted(this.doc, text, spans));
    this.updateSubmitState();
  }

  private updateSubmitState(): void {
    const blockedBySpans = this.draftSpanCount > 0 && !this.forceToggle.checked;
    this.submitButton.disabled =
      this.selected === null ||
      this.validationPending ||
      this.validationStale ||
      blockedBySpans;
    this.approveButton.disabled = this.selected === null;
  }

  // -- mutations ---------------------------------------------------------

  private async submit(): Promise<void> {
    if (!this.selected || this.submitButton.disabled) return;
    const pair = this.selected;
    this.lastAction = () => this.submit();
    try {
      const updated = await this.api.submitRevision(pair.id, {
        target: this.draftInput.value,
        annotator: this.annotator,
        version: pair.version,
        force: this.forceToggle.checked || undefined,
      });
      this.hideBanner();
      this.applyPair(updated, { keepDraft: false });
      this.forceToggle.checked = false;
      this.conflictDialog.classList.add("hidden");
      this.scheduleValidation();
      await this.loadPage();
    } catch (error) {
      this.handleMutationError(error);
    }
  }

  private async approve(): Promise<void> {
    if (!this.selected) return;
    const pair = this.selected;
    this.lastAction = () => this.approve();
    try {
      const updated = await this.api.approve(pair.id, this.annotator, pair.version);
      this.hideBanner();
      this.applyPair(updated, { keepDraft: false });
      this.scheduleValidation();
      await this.loadPage();
    } catch (error) {
      this.handleMutationError(error);
    }
  }

  private handleMutationError(error: unknown): void {
    if (error instanceof ConflictError) {
      this.conflictMine.textContent = this.draftInput.value;
      this.conflictTheirs.textContent = error.current.target;
      this.conflictDialog.dataset.version = String(error.current.version);
      this.conflictDialog.dataset.target = error.current.target;
      this.conflictDialog.classList.remove("hidden");
      return;
    }
    if (error instanceof ValidationError) {
      this.rejectInfo.textContent = "";
      const title = this.el("span");
      title.textContent = `${error.message}: `;
      this.rejectInfo.appendChild(title);
      for (const idiom of error.idioms) {
        const mark = this.el("mark", undefined, "idiom");
        mark.textContent = idiom;
        this.rejectInfo.appendChild(mark);
      }
      this.rejectInfo.classList.remove("hidden");
      return;
    }
    this.showBanner(error);
  }

  /** Merge resolution: adopt the server's version counter and target. */
  private adoptServerVersion(): void {
    if (!this.selected) return;
    const target = this.conflictDialog.dataset.target ?? this.selected.target;
    const version = Number(this.conflictDialog.dataset.version ?? this.selected.version);
    this.selected = { ...this.selected, target, version };
    this.draftInput.value = target;
    this.conflictDialog.classList.add("hidden");
    this.scheduleValidation();
  }

  // -- error banner ------------------------------------------------------

  private showBanner(error: unknown): void {
    const message = error instanceof ApiError ? error.message : String(error);
    this.bannerMessage.textContent = message;
    this.banner.classList.remove("hidden");
  }

  private hideBanner(): void {
    this.banner.classList.add("hidden");
  }

  private async retryLast(): Promise<void> {
    if (this.lastAction) await this.lastAction();
  }
}
