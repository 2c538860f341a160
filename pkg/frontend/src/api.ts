/** Typed client for the translation service; the UI's only backend calls. */

export interface TranslateResponse {
  source_tokens: string[];
  target_tokens: string[];
  translation: string;
  attention: number[][] | null;
  log_prob: number;
  truncated: boolean;
  model_id: string;
}

export type ApiErrorKind =
  | "empty_input"
  | "malformed_request"
  | "model_loading"
  | "network"
  | "http";

export class ApiError extends Error {
  readonly kind: ApiErrorKind;

  constructor(kind: ApiErrorKind, message: string) {
    super(message);
    this.kind = kind;
    this.name = "ApiError";
  }
}

/** Client-side submit gate: whitespace-only input never reaches the API. */
export function canSubmit(text: string): boolean {
  return text.trim().length > 0;
}

function errorFromStatus(status: number, body: unknown): ApiError {
  const code =
    typeof body === "object" && body !== null
      ? (body as { detail?: { code?: string } }).detail?.code ??
        (body as { code?: string }).code
      : undefined;
  if (status === 422 || code === "empty_input") {
    return new ApiError("empty_input", "enter a sentence");
  }
  if (status === 503 || code === "model_not_loaded") {
    return new ApiError("model_loading", "model loading — try again shortly");
  }
  if (status === 400) {
    return new ApiError("malformed_request", "the request was rejected");
  }
  return new ApiError("http", `unexpected server response (${status})`);
}

/** POST /api/translate; throws ApiError for every failure except an abort,
 *  which re-throws the DOMException so callers can ignore superseded
 *  requests. */
export async function translate(
  baseUrl: string,
  text: string,
  signal?: AbortSignal,
  maxLen?: number,
): Promise<TranslateResponse> {
  const payload: { text: string; max_len?: number } = { text };
  if (maxLen !== undefined) payload.max_len = maxLen;

  let response: Response;
  try {
    response = await fetch(`${baseUrl}/api/translate`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
      signal,
    });
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") throw err;
    throw new ApiError("network", "cannot reach the translation service");
  }

  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    body = null;
  }
  if (!response.ok) throw errorFromStatus(response.status, body);
  return body as TranslateResponse;
}

export async function health(
  baseUrl: string,
): Promise<{ status: string; model_id: string }> {
  let response: Response;
  try {
    response = await fetch(`${baseUrl}/api/health`);
  } catch {
    throw new ApiError("network", "cannot reach the translation service");
  }
  if (!response.ok) throw errorFromStatus(response.status, await response.json().catch(() => null));
  return (await response.json()) as { status: string; model_id: string };
}
