import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, canSubmit, health, translate } from "../src/api.js";
import fixtures from "./fixtures/responses.json";

const payload = (fixtures as Array<{ response: unknown }>)[0]!.response;

function mockFetch(impl: (input: RequestInfo | URL, init?: RequestInit) => Promise<Response>) {
  const spy = vi.fn(impl);
  vi.stubGlobal("fetch", spy);
  return spy;
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("canSubmit", () => {
  it("rejects empty and whitespace-only input", () => {
    expect(canSubmit("")).toBe(false);
    expect(canSubmit("   \t ")).toBe(false);
    expect(canSubmit("अहं")).toBe(true);
  });
});

describe("translate", () => {
  it("posts the text and returns the parsed payload", async () => {
    const spy = mockFetch(async () =>
      new Response(JSON.stringify(payload), { status: 200 }),
    );
    const result = await translate("", "अहं तर्तुं शक्नोमि");
    expect(result).toEqual(payload);
    const [url, init] = spy.mock.calls[0]!;
    expect(url).toBe("/api/translate");
    expect(JSON.parse(init!.body as string)).toEqual({ text: "अहं तर्तुं शक्नोमि" });
  });

  it("passes max_len through when given", async () => {
    const spy = mockFetch(async () =>
      new Response(JSON.stringify(payload), { status: 200 }),
    );
    await translate("", "x", undefined, 5);
    const [, init] = spy.mock.calls[0]!;
    expect(JSON.parse(init!.body as string)).toEqual({ text: "x", max_len: 5 });
  });

  it("maps 422 to an empty_input error", async () => {
    mockFetch(async () =>
      new Response(JSON.stringify({ detail: { code: "empty_input" } }), {
        status: 422,
      }),
    );
    await expect(translate("", " ")).rejects.toMatchObject({
      name: "ApiError",
      kind: "empty_input",
    });
  });

  it("maps 503 to a model_loading error", async () => {
    mockFetch(async () =>
      new Response(JSON.stringify({ detail: { code: "model_not_loaded" } }), {
        status: 503,
      }),
    );
    await expect(translate("", "x")).rejects.toMatchObject({
      kind: "model_loading",
    });
  });

  it("maps 400 to a malformed_request error", async () => {
    mockFetch(async () =>
      new Response(JSON.stringify({ code: "malformed_request" }), { status: 400 }),
    );
    await expect(translate("", "x")).rejects.toMatchObject({
      kind: "malformed_request",
    });
  });

  it("maps fetch failures to a network error", async () => {
    mockFetch(async () => {
      throw new TypeError("fetch failed");
    });
    const err = await translate("", "x").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.kind).toBe("network");
  });

  it("re-throws aborts so superseded requests can be ignored", async () => {
    mockFetch(async () => {
      throw new DOMException("aborted", "AbortError");
    });
    await expect(translate("", "x")).rejects.toMatchObject({
      name: "AbortError",
    });
  });
});

describe("health", () => {
  it("returns the parsed status", async () => {
    mockFetch(async () =>
      new Response(JSON.stringify({ status: "ok", model_id: "abc" }), {
        status: 200,
      }),
    );
    expect(await health("")).toEqual({ status: "ok", model_id: "abc" });
  });

  it("maps a down backend to a network error", async () => {
    mockFetch(async () => {
      throw new TypeError("fetch failed");
    });
    await expect(health("")).rejects.toMatchObject({ kind: "network" });
  });
});
