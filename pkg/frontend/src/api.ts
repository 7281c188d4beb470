/** REST client for the studio service; one instance per session. */

import { decodeTensor, type Tensor } from "./wmt";
import type {
  GenerateParams,
  Geometry,
  ParameterRanges,
  ResultReport,
  TrajectoryFile,
} from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public detail?: unknown,
  ) {
    super(message);
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let code = "http_error";
  let message = response.statusText;
  let detail: unknown;
  try {
    const body = await response.json();
    code = body.code ?? code;
    message = body.message ?? message;
    detail = body.detail;
  } catch {
    /* non-JSON error body */
  }
  throw new ApiError(response.status, code, message, detail);
}

export interface Health {
  status: string;
  model_loaded: boolean;
  ranges: ParameterRanges;
  geometry: Geometry | null;
}

export interface TrackValidation {
  accepted: boolean;
  violations: { track_id: number; frame: number | null; kind: string; message: string }[];
}

export class StudioClient {
  constructor(public baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async health(): Promise<Health> {
    const r = await fetch(this.url("/health"));
    await raiseForStatus(r);
    return r.json();
  }

  async createSession(geometry: Geometry): Promise<string> {
    const r = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(geometry),
    });
    await raiseForStatus(r);
    return (await r.json()).id;
  }

  async uploadFrame(sessionId: string, bytes: ArrayBuffer | Blob): Promise<void> {
    const r = await fetch(this.url(`/sessions/${hEsc(sessionId)}/frame`), {
      method: "POST",
      headers: { "content-type": "application/octet-stream" },
      body: bytes,
    });
    await raiseForStatus(r);
  }

  async putTracks(sessionId: string, file: TrajectoryFile): Promise<TrackValidation> {
    const r = await fetch(this.url(`/sessions/${hEsc(sessionId)}/tracks`), {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(file),
    });
    await raiseForStatus(r);
    return r.json();
  }

  async preview(sessionId: string, seed = 0): Promise<Tensor> {
    const r = await fetch(
      this.url(`/sessions/${hEsc(sessionId)}/preview?seed=${seed}&format=wmt1`),
    );
    await raiseForStatus(r);
    return decodeTensor(await r.arrayBuffer());
  }

  async generate(sessionId: string, params: GenerateParams): Promise<string> {
    const r = await fetch(this.url(`/sessions/${hEsc(sessionId)}/generate`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(params),
    });
    await raiseForStatus(r);
    return (await r.json()).result_id;
  }

  async getResult(
    sessionId: string,
    resultId: string,
  ): Promise<{ report: ResultReport; video: Tensor }> {
    const r = await fetch(this.url(`/sessions/${hEsc(sessionId)}/results/${hEsc(resultId)}`));
    await raiseForStatus(r);
    const body = await r.json();
    const bytes = Uint8Array.from(atob(body.video_wmt1_base64), (c) => c.charCodeAt(0));
    return { report: body.report, video: decodeTensor(bytes.buffer) };
  }
}

function hEsc(part: string): string {
  return encodeURIComponent(part);
}
