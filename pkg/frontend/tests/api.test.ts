import { describe, expect, it } from "vitest";

import { Api, ApiFailure, describeFailure } from "../src/api";

interface Call {
  url: string;
  init?: RequestInit;
}

function fakeFetch(status: number, payload: unknown, calls: Call[] = []) {
  const fetchImpl = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, init });
    return {
      ok: status >= 200 && status < 300,
      status,
      json: async () => payload,
    } as Response;
  };
  return { fetchImpl, calls };
}

describe("api client", () => {
  it("posts JSON to the endpoint path and returns the parsed body", async () => {
    const design = {
      quasipolynomial: { n: 1, m: 0, a: [-1], b: [1], tau: 1 },
      residuals: [0, 0],
      condition_estimate: 4,
      solved_parameter: null,
    };
    const { fetchImpl, calls } = fakeFetch(200, design);
    const api = new Api("http://svc", fetchImpl);
    const got = await api.genericMid({ n: 1, m: 0, tau: 1, s0: 0 });
    expect(got).toEqual(design);
    expect(calls[0].url).toBe("http://svc/design/generic-mid");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({ n: 1, m: 0, tau: 1, s0: 0 });
  });

  it("maps non-2xx responses to ApiFailure with the error document", async () => {
    const { fetchImpl } = fakeFetch(422, {
      code: "no_admissible_point",
      message: "no dominant real root is admissible at this delay",
    });
    const api = new Api("", fetchImpl);
    const err = await api
      .controlMid({ n: 2, m: 0, a: [39.478, 0], given: { tau: 0.2 } })
      .then(() => null)
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiFailure);
    const failure = err as ApiFailure;
    expect(failure.status).toBe(422);
    expect(failure.error.code).toBe("no_admissible_point");
    expect(failure.message).toContain("no_admissible_point");
  });

  it("health uses GET", async () => {
    const { fetchImpl, calls } = fakeFetch(200, { status: "ok", version: "0.1.0", backend: "python" });
    const api = new Api("", fetchImpl);
    const health = await api.health();
    expect(health.backend).toBe("python");
    expect(calls[0].init?.method).toBeUndefined();
  });

  it("threads the abort signal through to fetch", async () => {
    const { fetchImpl, calls } = fakeFetch(200, { t: [], y: [], h: 0.1 });
    const api = new Api("", fetchImpl);
    const controller = new AbortController();
    await api.simulate(
      { q: { n: 1, m: 0, a: [1], b: [0], tau: 1 }, ic: { constant: 1 }, T: 1 },
      controller.signal,
    );
    expect(calls[0].init?.signal).toBe(controller.signal);
  });
});

describe("describeFailure", () => {
  it("includes the divergence time for blow_up errors", () => {
    const failure = new ApiFailure(422, {
      code: "blow_up",
      message: "trajectory magnitude exceeded 1e300 at t = 193",
      details: { time: 193.2 },
    });
    expect(describeFailure(failure)).toContain("193.2");
  });
  it("falls back to the message for plain errors", () => {
    expect(describeFailure(new Error("socket closed"))).toBe("socket closed");
    expect(describeFailure("boom")).toBe("boom");
  });
});
