// End-to-end client flows against the mocked service: solve-and-poll,
// rankings round-trip, cancellation wiring, stale-response discipline.

import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { pollJob } from "../src/poll.js";
import { initialState, Store } from "../src/state.js";
import { fillFromRanking } from "../src/worksheet.js";
import type { NetworkPayload } from "../src/types.js";
import { MockService, RANKING_UTILIZATION_LEVEL2, SOLVE_RESULT } from "./mock_server.js";

const NETWORK: NetworkPayload = {
  distance_mode: "matrix",
  nodes: [{ id: "n1", x: 0, y: 0, ev_count: 3 }],
  stations: [
    { id: "s1", x: 1, y: 0, chargers: 2, charger_class: "LEVEL2" },
    { id: "s2", x: 2, y: 0, chargers: 1, charger_class: "LEVEL2" },
    { id: "s3", x: 3, y: 0, chargers: 1, charger_class: "DCFC" },
  ],
  travel_matrix: [[0.01, 0.02, 0.03]],
};

const instantSleep = () => Promise.resolve();

function makeClient(service: MockService): ApiClient {
  return new ApiClient("http://mock", service.fetch);
}

describe("solve flow", () => {
  it("submits, streams progress, and fetches the result once DONE", async () => {
    const service = new MockService();
    const api = makeClient(service);
    const { job_id } = await api.solve(NETWORK);

    const iterations: number[] = [];
    const final = await pollJob(api, job_id, {
      sleep: instantSleep,
      onUpdate: (view) => iterations.push(view.progress.iteration),
    });
    expect(final?.status).toBe("DONE");
    expect(iterations).toEqual([...iterations].sort((a, b) => a - b));

    const result = await api.solveResult(job_id);
    expect(result).toEqual(SOLVE_RESULT);
    const posts = service.requests.filter((r) => r.method === "POST");
    expect(posts[0].path).toBe("/v1/solve");
    expect(posts[0].body).toMatchObject({ network: NETWORK });
  });

  it("surfaces validation failures with field paths", async () => {
    const service = new MockService();
    const api = makeClient(service);
    const bad = { ...NETWORK, nodes: [] };
    await expect(api.validateNetwork(bad)).rejects.toThrowError(ApiError);
    await expect(api.validateNetwork(bad)).rejects.toThrowError(/nodes/);
  });
});

describe("top-N buttons", () => {
  it("fill the worksheet in exactly the server ranking order", async () => {
    const service = new MockService();
    const api = makeClient(service);
    const { job_id } = await api.solve(NETWORK);
    await pollJob(api, job_id, { sleep: instantSleep });

    const ranking = await api.rankings(job_id, "utilization", "LEVEL2", 2);
    const worksheet = fillFromRanking(ranking.station_ids, 2);
    expect(worksheet.map((u) => u.station_id)).toEqual(RANKING_UTILIZATION_LEVEL2);

    const request = service.requests.find((r) => r.path.includes("/rankings"));
    expect(request?.path).toContain("criterion=utilization");
    expect(request?.path).toContain("charger_class=LEVEL2");
  });
});

describe("cancellation", () => {
  it("issues DELETE for the active job id", async () => {
    const service = new MockService();
    service.pollsUntilDone = 1000; // keep it running
    const api = makeClient(service);
    const { job_id } = await api.solve(NETWORK);

    await api.cancelJob(job_id);
    const deletes = service.requests.filter((r) => r.method === "DELETE");
    expect(deletes).toHaveLength(1);
    expect(deletes[0].path).toBe(`/v1/jobs/${job_id}`);

    const final = await pollJob(api, job_id, { sleep: instantSleep });
    expect(final?.status).toBe("FAILED");
    expect(final?.error).toBe("cancelled");
  });
});

describe("stale poll discipline", () => {
  it("abandons polling when the job is superseded", async () => {
    const service = new MockService();
    service.pollsUntilDone = 1000;
    const api = makeClient(service);
    const { job_id } = await api.solve(NETWORK);

    let polls = 0;
    const final = await pollJob(api, job_id, {
      sleep: instantSleep,
      isStale: () => {
        polls += 1;
        return polls > 3; // superseded after a few rounds
      },
    });
    expect(final).toBeNull();
  });

  it("the store ignores updates for superseded job ids", () => {
    const store = new Store(initialState("http://mock"));
    store.startSolve("job-new");
    const accepted = store.applySolveUpdate("job-old", {
      job_id: "job-old",
      kind: "SOLVE",
      status: "RUNNING",
      progress: { iteration: 5, epsilon: 1.0, wardrop_gap: null },
      error: null,
    });
    expect(accepted).toBe(false);
    expect(store.state.solveProgress).toBeNull();
  });
})

describe("view-state invariants", () => {
  it("renders overlays only from DONE results", () => {
    const store = new Store(initialState("http://mock"));
    store.startSolve("job-1");
    expect(store.state.solveResult).toBeNull(); // nothing to overlay while running
    store.finishSolve("job-1", SOLVE_RESULT);
    expect(store.state.solveResult).toEqual(SOLVE_RESULT);
  });

  it("worksheet survives a re-solve of the base", () => {
    const store = new Store(initialState("http://mock"));
    store.setWorksheet([{ station_id: "s2", dcfc_count: 1 }]);
    store.startSolve("job-2");
    store.finishSolve("job-2", SOLVE_RESULT);
    expect(store.state.worksheet).toEqual([{ station_id: "s2", dcfc_count: 1 }]);
  });

  it("loading a network never carries stale results along", () => {
    const store = new Store(initialState("http://mock"));
    store.startSolve("job-3");
    store.finishSolve("job-3", SOLVE_RESULT);
    store.loadNetwork(NETWORK);
    expect(store.state.solveResult).toBeNull();
    expect(store.state.network).toEqual(NETWORK);
  });

  it("a failed file load leaves an error banner and no partial render", () => {
    const store = new Store(initialState("http://mock"));
    store.networkFailed("nodes: must be a non-empty list");
    expect(store.state.network).toBeNull();
    expect(store.state.networkError).toContain("nodes");
  });
});
