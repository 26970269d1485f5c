import { afterEach, describe, expect, it, vi } from "vitest";
import {
  ApiError,
  ConflictError,
  ReviewApi,
  ValidationError,
} from "../src/api.js";
import { FakeService } from "./fakeservice.js";

const LEXICON = ["亡羊补牢", "以牙还牙"];

function makeService(): FakeService {
  return new FakeService(
    [
      { id: "p1", source: "他想以牙还牙。", target: "他想报复。" },
      { id: "p2", source: "亡羊补牢为时不晚。", target: "现在改正为时不晚。" },
      { id: "p3", source: "普通句子。", target: "普通句子。", status: "revised" },
    ],
    LEXICON,
  );
}

function install(service: FakeService): ReviewApi {
  vi.stubGlobal("fetch", service.fetch);
  return new ReviewApi("");
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("listPairs", () => {
  it("returns the page and total, and forwards query params", async () => {
    const service = makeService();
    const api = install(service);
    const page = await api.listPairs({ status: "revised", offset: 0, limit: 2 });
    expect(page.total).toBe(1);
    expect(page.pairs.map((p) => p.id)).toEqual(["p3"]);
    expect(service.log).toEqual(["GET /api/pairs?status=revised&offset=0&limit=2"]);
  });

  it("omits the query string when no filters are given", async () => {
    const service = makeService();
    const api = install(service);
    const page = await api.listPairs();
    expect(page.total).toBe(3);
    expect(service.log).toEqual(["GET /api/pairs"]);
  });
});

describe("getPair", () => {
  it("returns the wire shape", async () => {
    const api = install(makeService());
    const pair = await api.getPair("p1");
    expect(pair.id).toBe("p1");
    expect(pair.idioms).toEqual([{ idiom: "以牙还牙", start: 2, end: 6 }]);
    expect(pair.status).toBe("machine");
    expect(pair.version).toBe(0);
    expect(pair.revisions).toEqual([]);
  });

  it("maps 404 to ApiError with the server message", async () => {
    const api = install(makeService());
    const error = await api.getPair("nope").catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error).not.toBeInstanceOf(ConflictError);
    expect(error.status).toBe(404);
    expect(error.message).toBe("unknown pair: nope");
  });
});

describe("submitRevision", () => {
  it("applies a clean revision and returns the updated pair", async () => {
    const api = install(makeService());
    const updated = await api.submitRevision("p1", {
      target: "他想还击。",
      annotator: "ann",
      version: 0,
    });
    expect(updated.target).toBe("他想还击。");
    expect(updated.status).toBe("revised");
    expect(updated.version).toBe(1);
    expect(updated.revisions.length).toBe(1);
    expect(updated.revisions[0]?.old_target).toBe("他想报复。");
  });

  it("maps 409 to ConflictError carrying the server's current pair", async () => {
    const api = install(makeService());
    const error = await api
      .submitRevision("p1", { target: "x", annotator: "ann", version: 7 })
      .catch((e) => e);
    expect(error).toBeInstanceOf(ConflictError);
    expect(error.status).toBe(409);
    expect(error.current.target).toBe("他想报复。");
    expect(error.current.version).toBe(0);
  });

  it("maps 422 to ValidationError listing the offending idioms", async () => {
    const api = install(makeService());
    const error = await api
      .submitRevision("p1", { target: "他想以牙还牙。", annotator: "ann", version: 0 })
      .catch((e) => e);
    expect(error).toBeInstanceOf(ValidationError);
    expect(error.status).toBe(422);
    expect(error.idioms).toEqual(["以牙还牙"]);
  });

  it("posts JSON with the force flag when set", async () => {
    const service = makeService();
    const api = install(service);
    const updated = await api.submitRevision("p1", {
      target: "他想以牙还牙。",
      annotator: "ann",
      version: 0,
      force: true,
    });
    expect(updated.status).toBe("flagged");
    expect(service.lastRevisionBody).toEqual({
      target: "他想以牙还牙。",
      annotator: "ann",
      version: 0,
      force: true,
    });
  });
});

describe("approve", () => {
  it("approves a clean pair", async () => {
    const api = install(makeService());
    const updated = await api.approve("p3", "ann", 0);
    expect(updated.status).toBe("approved");
    expect(updated.version).toBe(1);
  });

  it("rejects an idiomatic target with the idiom list", async () => {
    const service = makeService();
    service.pairs.get("p3")!.target = "他要以牙还牙。";
    const api = install(service);
    const error = await api.approve("p3", "ann", 0).catch((e) => e);
    expect(error).toBeInstanceOf(ValidationError);
    expect(error.idioms).toEqual(["以牙还牙"]);
  });
});

describe("checkText", () => {
  it("returns the detected spans", async () => {
    const api = install(makeService());
    const spans = await api.checkText("先亡羊补牢再以牙还牙");
    expect(spans).toEqual([
      { idiom: "亡羊补牢", start: 1, end: 5 },
      { idiom: "以牙还牙", start: 6, end: 10 },
    ]);
  });

  it("tolerates a body without an idioms field", async () => {
    vi.stubGlobal("fetch", async () => new Response("{}", { status: 200 }));
    const api = new ReviewApi("");
    expect(await api.checkText("x")).toEqual([]);
  });

  it("URL-encodes the text parameter", async () => {
    const service = makeService();
    const api = install(service);
    await api.checkText("a&b=c");
    expect(service.log[0]).toBe("GET /api/lexicon/check?text=a%26b%3Dc");
  });
});

describe("transport failures", () => {
  it("wraps a rejected fetch in ApiError", async () => {
    vi.stubGlobal("fetch", async () => {
      throw new TypeError("fetch failed");
    });
    const api = new ReviewApi("");
    const error = await api.stats().catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBeUndefined();
    expect(error.message).toContain("network failure");
  });

  it("falls back to a status message when the error body is not JSON", async () => {
    vi.stubGlobal(
      "fetch",
      async () => new Response("<html>boom</html>", { status: 500 }),
    );
    const api = new ReviewApi("");
    const error = await api.stats().catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.message).toBe("HTTP 500");
  });
});

describe("stats", () => {
  it("returns counts per status", async () => {
    const api = install(makeService());
    expect(await api.stats()).toEqual({
      machine: 2,
      revised: 1,
      approved: 0,
      flagged: 0,
      total: 3,
    });
  });
});
