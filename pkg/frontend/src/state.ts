// View state lives in the URL so any view is shareable and reload-stable.

export interface ViewState {
  task: string | null;
  tau: number;
  limit: number;
}

export const DEFAULT_TAU = 0.4;
export const DEFAULT_LIMIT = 10;

export function clampTau(tau: number): number {
  if (!Number.isFinite(tau) || tau < 0) return 0;
  if (tau > 2) return 2;
  return tau;
}

export function encodeViewState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.task) params.set("task", state.task);
  params.set("tau", String(state.tau));
  if (state.limit !== DEFAULT_LIMIT) params.set("limit", String(state.limit));
  return params.toString();
}

export function decodeViewState(query: string): ViewState {
  const params = new URLSearchParams(query);
  const rawTau = params.get("tau");
  const rawLimit = params.get("limit");
  const tau = rawTau === null ? DEFAULT_TAU : clampTau(Number(rawTau));
  let limit = rawLimit === null ? DEFAULT_LIMIT : Number(rawLimit);
  if (!Number.isInteger(limit) || limit < 1) limit = DEFAULT_LIMIT;
  return { task: params.get("task"), tau, limit };
}
