import { describe, expect, it } from "vitest";

import { PanelRequest, SUPERSEDED, toCsv } from "../src/util";

const sleep = (ms: number) => new Promise((resolve) => setTimeout(resolve, ms));

describe("PanelRequest", () => {
  it("a newer request supersedes the one in flight", async () => {
    const panel = new PanelRequest();
    const first = panel.run(async (signal) => {
      await sleep(40);
      return signal.aborted ? "was aborted" : "finished";
    });
    await sleep(5);
    const second = panel.run(async () => "fresh");
    expect(await first).toBe(SUPERSEDED);
    expect(await second).toBe("fresh");
  });

  it("aborts the stale request's signal", async () => {
    const panel = new PanelRequest();
    let seen: AbortSignal | null = null;
    void panel.run(async (signal) => {
      seen = signal;
      await sleep(50);
      return 1;
    });
    await sleep(5);
    void panel.run(async () => 2);
    expect(seen!.aborted).toBe(true);
    panel.abort();
  });

  it("errors from the current request propagate", async () => {
    const panel = new PanelRequest();
    await expect(panel.run(async () => Promise.reject(new Error("bad")))).rejects.toThrow("bad");
  });

  it("errors from a superseded request are swallowed", async () => {
    const panel = new PanelRequest();
    const first = panel.run(async () => {
      await sleep(30);
      throw new Error("stale failure");
    });
    await sleep(5);
    const second = panel.run(async () => "ok");
    expect(await first).toBe(SUPERSEDED);
    expect(await second).toBe("ok");
  });
});

describe("toCsv", () => {
  it("joins header and rows with trailing newline", () => {
    expect(toCsv(["t", "y"], [[0, 1], [0.5, -2]])).toBe("t,y\n0,1\n0.5,-2\n");
  });
  it("renders null as an empty cell", () => {
    expect(toCsv(["a", "b"], [[null, 3]])).toBe("a,b\n,3\n");
  });
});
