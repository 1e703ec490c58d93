// Wiring: file load -> dry-run validation -> map; solve -> poll -> overlay;
// worksheet -> compare -> table + charts. One solve and one compare in
// flight at most; superseded polls are discarded by job-id.

import { ApiClient, ApiError } from "./api.js";
import { pollJob } from "./poll.js";
import { initialState, Store } from "./state.js";
import type { NetworkPayload } from "./types.js";
import {
  renderCompare,
  renderError,
  renderHeadline,
  renderLegend,
  renderMap,
  renderProgress,
  renderWorksheet,
} from "./render.js";
import {
  addDcfc,
  baseOnlyRows,
  fillFromRanking,
  removeStation,
  tableToCsv,
  worksheetScenario,
} from "./worksheet.js";

const DEFAULT_BASE = "http://127.0.0.1:8080";

const store = new Store(initialState(DEFAULT_BASE));
const api = new ApiClient(DEFAULT_BASE);

const byId = (id: string) => document.getElementById(id) as HTMLElement;

function describeError(e: unknown): string {
  if (e instanceof ApiError) return e.message;
  return e instanceof Error ? e.message : String(e);
}

async function loadNetworkFile(file: File): Promise<void> {
  let payload: NetworkPayload;
  try {
    payload = JSON.parse(await file.text());
  } catch (e) {
    store.networkFailed(`not valid JSON: ${describeError(e)}`);
    return;
  }
  try {
    await api.validateNetwork(payload); // server-side dry run; field errors surface here
  } catch (e) {
    store.networkFailed(describeError(e));
    return;
  }
  store.loadNetwork(payload);
}

let lastSolvedJobId: string | null = null; // feeds the rankings endpoint

async function runSolve(): Promise<void> {
  const network = store.state.network;
  if (!network || store.state.activeSolveJobId) return;
  let jobId: string;
  try {
    ({ job_id: jobId } = await api.solve(network));
  } catch (e) {
    store.update({ solveError: describeError(e) });
    return;
  }
  store.startSolve(jobId);
  const final = await pollJob(api, jobId, {
    isStale: (id) => store.state.activeSolveJobId !== id,
    onUpdate: (view) => store.applySolveUpdate(jobId, view),
  });
  if (final === null) return; // superseded
  if (final.status === "FAILED") {
    store.failSolve(jobId, final.error ?? "solve failed");
  } else {
    try {
      store.finishSolve(jobId, await api.solveResult(jobId));
      lastSolvedJobId = jobId;
    } catch (e) {
      store.failSolve(jobId, describeError(e));
    }
  }
  store.update({ activeSolveJobId: store.state.activeSolveJobId === jobId ? null : store.state.activeSolveJobId });
}

async function cancelSolve(): Promise<void> {
  const jobId = store.state.activeSolveJobId;
  if (!jobId) return;
  try {
    await api.cancelJob(jobId);
  } catch {
    // already finished; the poller will pick the terminal state up
  }
}

async function fillTopN(criterion: "utilization" | "queue_delay"): Promise<void> {
  const result = store.state.solveResult;
  const jobId = lastSolvedJobId;
  if (!result || !jobId) return;
  const n = Number((byId("top-n") as HTMLInputElement).value) || 5;
  try {
    const ranking = await api.rankings(jobId, criterion, "LEVEL2", n);
    store.setWorksheet(fillFromRanking(ranking.station_ids, n));
  } catch (e) {
    renderError(byId("worksheet-error"), describeError(e));
  }
}

async function runCompare(): Promise<void> {
  const network = store.state.network;
  if (!network || store.state.worksheet.length === 0 || store.state.activeCompareJobId) return;
  let jobId: string;
  try {
    ({ job_id: jobId } = await api.compare(network, [worksheetScenario(store.state.worksheet)]));
  } catch (e) {
    store.update({ compareError: describeError(e) });
    return;
  }
  store.startCompare(jobId);
  const final = await pollJob(api, jobId, {
    isStale: (id) => store.state.activeCompareJobId !== id,
  });
  if (final === null) return;
  if (final.status === "FAILED") {
    store.failCompare(jobId, final.error ?? "comparison failed");
  } else {
    try {
      store.finishCompare(jobId, (await api.compareResult(jobId)).rows);
    } catch (e) {
      store.failCompare(jobId, describeError(e));
    }
  }
  store.update({ activeCompareJobId: store.state.activeCompareJobId === jobId ? null : store.state.activeCompareJobId });
}

function exportCsv(): void {
  const rows = store.state.compareRows ?? (store.state.solveResult ? baseOnlyRows(store.state.solveResult) : null);
  if (!rows) return;
  const table = renderCompare(byId("compare-output"), rows);
  if (!table) return;
  const blob = new Blob([tableToCsv(table)], { type: "text/csv" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = "comparison.csv";
  link.click();
  URL.revokeObjectURL(link.href);
}

function rerender(): void {
  const s = store.state;
  renderError(byId("network-error"), s.networkError);
  renderError(byId("solve-error"), s.solveError);
  renderError(byId("compare-error"), s.compareError);

  if (s.network) {
    renderMap(byId("map"), s.network, s.solveResult, s.overlayMode, (id) => {
      store.setWorksheet(addDcfc(store.state.worksheet, id));
    });
    renderLegend(byId("legend"), s.overlayMode, s.solveResult !== null);
  } else {
    byId("map").textContent = "";
    byId("legend").textContent = "";
  }

  const solving = s.activeSolveJobId !== null;
  renderProgress(byId("progress"), s.solveProgress, solving ? "solving" : "");
  renderHeadline(byId("headline"), s.solveResult);
  renderWorksheet(byId("worksheet"), s.worksheet, (id) => {
    store.setWorksheet(removeStation(store.state.worksheet, id));
  });
  renderCompare(
    byId("compare-output"),
    s.compareRows ?? (s.solveResult ? baseOnlyRows(s.solveResult) : null),
  );

  (byId("solve-btn") as HTMLButtonElement).disabled = !s.network || solving;
  (byId("cancel-btn") as HTMLButtonElement).disabled = !solving;
  const compareBtn = byId("compare-btn") as HTMLButtonElement;
  compareBtn.disabled = !s.network || s.worksheet.length === 0 || s.activeCompareJobId !== null;
  compareBtn.title = s.worksheet.length === 0 ? "Add at least one upgrade first" : "";
  (byId("export-btn") as HTMLButtonElement).disabled = !s.compareRows && !s.solveResult;
  const topDisabled = !s.solveResult;
  (byId("top-util-btn") as HTMLButtonElement).disabled = topDisabled;
  (byId("top-delay-btn") as HTMLButtonElement).disabled = topDisabled;
}

function init(): void {
  store.subscribe(rerender);

  const baseInput = byId("api-base") as HTMLInputElement;
  baseInput.value = DEFAULT_BASE;
  baseInput.addEventListener("change", () => {
    api.setBase(baseInput.value);
    store.update({ apiBase: baseInput.value });
  });

  (byId("network-file") as HTMLInputElement).addEventListener("change", (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (file) void loadNetworkFile(file);
  });

  byId("solve-btn").addEventListener("click", () => void runSolve());
  byId("cancel-btn").addEventListener("click", () => void cancelSolve());
  byId("top-util-btn").addEventListener("click", () => void fillTopN("utilization"));
  byId("top-delay-btn").addEventListener("click", () => void fillTopN("queue_delay"));
  byId("compare-btn").addEventListener("click", () => void runCompare());
  byId("export-btn").addEventListener("click", exportCsv);
  (byId("overlay-mode") as HTMLSelectElement).addEventListener("change", (ev) => {
    store.update({ overlayMode: (ev.target as HTMLSelectElement).value as "rho" | "wq" });
  });

  rerender();
}

document.addEventListener("DOMContentLoaded", init);
