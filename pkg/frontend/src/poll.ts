// Job polling: 500 ms period with gentle backoff, responses for superseded
// jobs discarded by job-id check.

import type { ApiClient } from "./api.js";
import type { JobView } from "./types.js";

export interface PollOptions {
  intervalMs?: number;
  backoff?: number;
  maxIntervalMs?: number;
  /** Abandon the loop when the job is no longer the active one. */
  isStale?: (jobId: string) => boolean;
  onUpdate?: (view: JobView) => void;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

/**
 * Polls until the job reaches DONE or FAILED and returns the final view.
 * Returns null when the job became stale (superseded) mid-poll.
 */
export async function pollJob(
  api: ApiClient,
  jobId: string,
  opts: PollOptions = {},
): Promise<JobView | null> {
  const base = opts.intervalMs ?? 500;
  const backoff = opts.backoff ?? 1.5;
  const max = opts.maxIntervalMs ?? 5000;
  const sleep = opts.sleep ?? defaultSleep;
  let interval = base;
  let lastIteration = -1;

  for (;;) {
    if (opts.isStale?.(jobId)) return null;
    const view = await api.job(jobId);
    if (opts.isStale?.(jobId)) return null; // superseded while the request flew
    opts.onUpdate?.(view);
    if (view.status === "DONE" || view.status === "FAILED") return view;
    // back off while nothing moves; reset on visible progress
    if (view.progress.iteration > lastIteration) {
      lastIteration = view.progress.iteration;
      interval = base;
    } else {
      interval = Math.min(interval * backoff, max);
    }
    await sleep(interval);
  }
}
