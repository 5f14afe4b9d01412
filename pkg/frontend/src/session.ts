/** The label loop: fetch an item, take one label, submit, advance.
 *
 * All UI state lives in a single immutable `SessionState` value that is a pure
 * function of the API responses seen so far plus the one in-flight submission.
 * There is no client-side label cache: the server is the only source of truth,
 * and re-fetching reproduces the view.
 */

import { ApiError, type ApiClient } from "./api.js";
import type { ItemView, Label } from "./types.js";

export type Phase =
  | "idle" // before start()
  | "loading" // fetching the next item
  | "labeling" // item on screen, waiting for a choice
  | "submitting" // label POST in flight
  | "done"; // queue exhausted

export interface SessionState {
  phase: Phase;
  annotator: string;
  item: ItemView | null;
  /** Counters from the most recent /api/items/next response. */
  labeled: number;
  remaining: number;
  /** Retry-banner text; null when the last request succeeded. */
  error: string | null;
  /** The label whose submission failed and is waiting for retry. */
  pendingLabel: Label | null;
}

type Listener = (state: SessionState) => void;

export class AnnotationSession {
  private state: SessionState;
  private listeners: Listener[] = [];

  constructor(
    private readonly api: ApiClient,
    annotator: string,
  ) {
    this.state = {
      phase: "idle",
      annotator,
      item: null,
      labeled: 0,
      remaining: 0,
      error: null,
      pendingLabel: null,
    };
  }

  getState(): SessionState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((fn) => fn !== listener);
    };
  }

  async start(): Promise<void> {
    if (this.state.phase !== "idle") return;
    await this.fetchNext();
  }

  /** Submit a label for the displayed item.
   *
   * A no-op unless an item is on screen and nothing is in flight, so a rapid
   * double click (or held-down key) produces exactly one submission.
   */
  async choose(label: Label): Promise<void> {
    if (this.state.phase !== "labeling" || this.state.item === null) return;
    await this.submit(label);
  }

  /** Re-run whichever request failed: the submission if one is pending, else the fetch. */
  async retry(): Promise<void> {
    if (this.state.error === null) return;
    if (this.state.pendingLabel !== null && this.state.item !== null) {
      await this.submit(this.state.pendingLabel);
    } else {
      await this.fetchNext();
    }
  }

  private async submit(label: Label): Promise<void> {
    const item = this.state.item;
    if (item === null) return;
    this.setState({ phase: "submitting", pendingLabel: label, error: null });
    try {
      await this.api.submitLabel(this.state.annotator, item.query_id, label);
    } catch (exc) {
      // Keep the item and the chosen label so retry() can resubmit; the item
      // is never skipped on failure.
      this.setState({ phase: "labeling", error: describe(exc) });
      return;
    }
    this.setState({ pendingLabel: null });
    await this.fetchNext();
  }

  private async fetchNext(): Promise<void> {
    this.setState({ phase: "loading", error: null, item: null });
    let next;
    try {
      next = await this.api.nextItem(this.state.annotator);
    } catch (exc) {
      this.setState({ error: describe(exc) });
      return;
    }
    if (next.item === null) {
      this.setState({ phase: "done", labeled: next.labeled, remaining: 0 });
    } else {
      this.setState({
        phase: "labeling",
        item: next.item,
        labeled: next.labeled,
        remaining: next.remaining,
      });
    }
  }

  private setState(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }
}

function describe(exc: unknown): string {
  if (exc instanceof ApiError) {
    return exc.status === 0 ? exc.message : `server error (${exc.status}): ${exc.message}`;
  }
  return String(exc);
}
