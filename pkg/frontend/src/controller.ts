/** Session controller: the single place that talks to the service.
 *
 * The UI holds no authoritative state; every render comes from the last
 * server response. One mutation may be in flight at a time (inputs are
 * dropped while busy), which also keeps the service's 409 path quiet.
 */

import type { ApiClient } from "./api.js";
import { ApiError } from "./api.js";
import type { SessionEvent, SessionState } from "./types.js";

export type StateListener = (state: SessionState, warning?: string) => void;

export class SessionController {
  private _state: SessionState;
  private _busy = false;
  private listeners: StateListener[] = [];
  lastWarning: string | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly sessionId: string,
    initial: SessionState,
  ) {
    this._state = initial;
  }

  get state(): SessionState {
    return this._state;
  }

  get busy(): boolean {
    return this._busy;
  }

  onChange(listener: StateListener): void {
    this.listeners.push(listener);
  }

  private emit(warning?: string): void {
    this.lastWarning = warning ?? null;
    for (const listener of this.listeners) listener(this._state, warning);
  }

  /** Send one event; returns false when dropped because a call is in flight. */
  async send(event: SessionEvent): Promise<boolean> {
    if (this._busy) return false;
    this._busy = true;
    try {
      const resp = await this.api.sendEvent(this.sessionId, event);
      this._state = resp.state;
      this.emit(resp.warning);
      return true;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // Lost a race with another writer: resync instead of guessing.
        await this.refresh();
        return false;
      }
      throw err;
    } finally {
      this._busy = false;
    }
  }

  async refresh(): Promise<SessionState> {
    this._state = await this.api.getState(this.sessionId);
    this.emit();
    return this._state;
  }

  async export() {
    return this.api.exportSession(this.sessionId);
  }
}
