// Single view-state store. Overlays only ever come from DONE jobs; the loaded
// base network is immutable; the worksheet survives re-solves of the base.

import type {
  CompareRow,
  JobView,
  NetworkPayload,
  Progress,
  SolveResult,
  Upgrade,
} from "./types.js";

export type OverlayMode = "rho" | "wq";

export interface ViewState {
  apiBase: string;
  network: NetworkPayload | null;
  networkError: string | null;
  activeSolveJobId: string | null;
  solveProgress: Progress | null;
  solveResult: SolveResult | null;
  solveError: string | null;
  overlayMode: OverlayMode;
  worksheet: Upgrade[];
  activeCompareJobId: string | null;
  compareRows: CompareRow[] | null;
  compareError: string | null;
}

export function initialState(apiBase: string): ViewState {
  return {
    apiBase,
    network: null,
    networkError: null,
    activeSolveJobId: null,
    solveProgress: null,
    solveResult: null,
    solveError: null,
    overlayMode: "rho",
    worksheet: [],
    activeCompareJobId: null,
    compareRows: null,
    compareError: null,
  };
}

type Listener = (state: ViewState) => void;

export class Store {
  private listeners: Listener[] = [];

  constructor(public state: ViewState) {}

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const fn of this.listeners) fn(this.state);
  }

  /** Loading a network clears derived result state but keeps the worksheet. */
  loadNetwork(network: NetworkPayload): void {
    this.update({
      network,
      networkError: null,
      activeSolveJobId: null,
      solveProgress: null,
      solveResult: null,
      solveError: null,
      activeCompareJobId: null,
      compareRows: null,
      compareError: null,
    });
  }

  networkFailed(message: string): void {
    // no partial render: a malformed file leaves the previous network cleared
    this.update({ network: null, networkError: message, solveResult: null });
  }

  startSolve(jobId: string): void {
    // a re-solve intentionally does NOT touch the worksheet
    this.update({
      activeSolveJobId: jobId,
      solveProgress: null,
      solveResult: null,
      solveError: null,
    });
  }

  /** Ignores updates for superseded jobs (stale poll responses). */
  applySolveUpdate(jobId: string, view: JobView): boolean {
    if (this.state.activeSolveJobId !== jobId) return false;
    this.update({ solveProgress: view.progress });
    return true;
  }

  finishSolve(jobId: string, result: SolveResult): void {
    if (this.state.activeSolveJobId !== jobId) return;
    this.update({ solveResult: result, solveError: null });
  }

  failSolve(jobId: string, message: string): void {
    if (this.state.activeSolveJobId !== jobId) return;
    this.update({ solveError: message, solveResult: null });
  }

  setWorksheet(upgrades: Upgrade[]): void {
    this.update({ worksheet: upgrades });
  }

  startCompare(jobId: string): void {
    this.update({ activeCompareJobId: jobId, compareError: null });
  }

  finishCompare(jobId: string, rows: CompareRow[]): void {
    if (this.state.activeCompareJobId !== jobId) return;
    this.update({ compareRows: rows, compareError: null });
  }

  failCompare(jobId: string, message: string): void {
    if (this.state.activeCompareJobId !== jobId) return;
    this.update({ compareError: message });
  }
}
