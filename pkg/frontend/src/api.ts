/**
 * Typed client for the anamark HTTP service.
 *
 * Every method maps to one endpoint. Non-2xx responses are surfaced as
 * ApiError, carrying the service's machine-readable error code when the
 * body follows the { error: { code, message } } shape.
 */

export interface Detection {
  pattern_id: number;
  corners: [number, number][];
  rotation_index: number;
  confidence: number;
}

export interface PoseInfo {
  rotation: number[];
  translation: number[];
  modelview16: number[];
}

export interface ProcessResponse {
  image_png_b64: string;
  detections: Detection[];
  poses: Record<string, PoseInfo>;
  timings_ms: Record<string, number>;
}

export interface AnaglyphDoc {
  enabled?: boolean;
  separation_m?: number;
  left_mask?: boolean[];
  right_mask?: boolean[];
}

export interface BindingDoc {
  marker_id: number;
  mesh: string;
  texture?: string;
  diffuse?: number[];
  ambient?: number;
  translation_m?: number[];
  scale?: number;
}

export interface SceneDoc {
  intrinsics: string;
  dictionary: string;
  anaglyph?: AnaglyphDoc;
  bindings?: BindingDoc[];
}

export interface DictionaryDoc {
  grid_size: number;
  patterns: { id: number; bits: number[][] }[];
}

export interface HealthResponse {
  status: string;
}

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
    this.code = code;
  }
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

async function raiseForStatus(res: Response): Promise<void> {
  if (res.ok) return;
  let code = "http_error";
  let message = `HTTP ${res.status}`;
  try {
    const body = await res.json();
    if (body && body.error) {
      code = String(body.error.code ?? code);
      message = String(body.error.message ?? message);
    }
  } catch {
    // non-JSON error body: keep the defaults
  }
  throw new ApiError(res.status, code, message);
}

export class ApiClient {
  readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  async health(): Promise<HealthResponse> {
    const res = await this.fetchImpl(`${this.baseUrl}/v1/health`);
    await raiseForStatus(res);
    return (await res.json()) as HealthResponse;
  }

  async getScene(): Promise<SceneDoc> {
    const res = await this.fetchImpl(`${this.baseUrl}/v1/scene`);
    await raiseForStatus(res);
    return (await res.json()) as SceneDoc;
  }

  /** Replaces the active scene; resolves to the document the service accepted. */
  async putScene(doc: SceneDoc): Promise<SceneDoc> {
    const res = await this.fetchImpl(`${this.baseUrl}/v1/scene`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
    });
    await raiseForStatus(res);
    return (await res.json()) as SceneDoc;
  }

  async getDictionary(): Promise<DictionaryDoc> {
    const res = await this.fetchImpl(`${this.baseUrl}/v1/dictionary`);
    await raiseForStatus(res);
    return (await res.json()) as DictionaryDoc;
  }

  markerUrl(patternId: number, cellPx = 24): string {
    return `${this.baseUrl}/v1/markers/${patternId}.png?cell_px=${cellPx}`;
  }

  /** Sends one PNG frame through the pipeline. */
  async processPng(png: Blob | ArrayBuffer): Promise<ProcessResponse> {
    const res = await this.fetchImpl(`${this.baseUrl}/v1/process`, {
      method: "POST",
      headers: { "Content-Type": "image/png" },
      body: png,
    });
    await raiseForStatus(res);
    return (await res.json()) as ProcessResponse;
  }
}
