// Typed client for the tuning service; fetch is injectable for tests.

import type {
  DatasetMeta,
  JobRequest,
  JobStatus,
  PredictResponse,
  StreamEvent,
} from "./types.js";
import { streamEvents } from "./events.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown
  ) {
    super(typeof detail === "string" ? detail : JSON.stringify(detail));
  }
}

async function fail(response: Response): Promise<never> {
  let detail: unknown = response.statusText;
  try {
    detail = (await response.json()).detail ?? detail;
  } catch {
    // non-JSON error body
  }
  throw new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(
    private baseUrl = "",
    private fetchFn: typeof fetch = fetch
  ) {}

  async uploadDataset(file: Blob, filename: string): Promise<DatasetMeta> {
    const form = new FormData();
    form.append("file", file, filename);
    const response = await this.fetchFn(`${this.baseUrl}/api/datasets`, {
      method: "POST",
      body: form,
    });
    if (!response.ok) await fail(response);
    return (await response.json()) as DatasetMeta;
  }

  async createJob(request: JobRequest): Promise<string> {
    const response = await this.fetchFn(`${this.baseUrl}/api/jobs`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) await fail(response);
    return ((await response.json()) as { job_id: string }).job_id;
  }

  async jobStatus(jobId: string): Promise<JobStatus> {
    const response = await this.fetchFn(`${this.baseUrl}/api/jobs/${jobId}`);
    if (!response.ok) await fail(response);
    return (await response.json()) as JobStatus;
  }

  /** Follow the job's event stream; replays history on each call. */
  async *events(jobId: string): AsyncGenerator<StreamEvent> {
    const response = await this.fetchFn(
      `${this.baseUrl}/api/jobs/${jobId}/events`
    );
    if (!response.ok) await fail(response);
    yield* streamEvents(response);
  }

  modelUrl(jobId: string): string {
    return `${this.baseUrl}/api/models/${jobId}`;
  }

  async downloadModel(jobId: string): Promise<Blob> {
    const response = await this.fetchFn(this.modelUrl(jobId));
    if (!response.ok) await fail(response);
    return await response.blob();
  }

  async predict(
    jobId: string,
    rows: Record<string, unknown>[]
  ): Promise<PredictResponse> {
    const response = await this.fetchFn(
      `${this.baseUrl}/api/models/${jobId}/predict`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ rows }),
      }
    );
    if (!response.ok) await fail(response);
    return (await response.json()) as PredictResponse;
  }
}
