/** Thin typed client over fetch. The fetch function is injected so tests
 * can run entirely from recorded fixtures (no live backend, no network). */

import type {
  AlertConfig,
  AlertEvent,
  AlertRule,
  ApiErrorBody,
  ChannelMeta,
  FeedResponse,
  LatestSalubrity,
  ReportJson,
  ReportRequest,
  SurfaceGrid,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  readonly status: number;
  readonly body: ApiErrorBody;

  constructor(status: number, body: ApiErrorBody) {
    super(`${body.code}: ${body.message}`);
    this.status = status;
    this.body = body;
  }
}

function query(params: Record<string, string | number | undefined>): string {
  const pairs = Object.entries(params).filter(([, v]) => v !== undefined && v !== "");
  if (pairs.length === 0) return "";
  return "?" + pairs.map(([k, v]) => `${k}=${encodeURIComponent(String(v))}`).join("&");
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let body: ApiErrorBody;
      try {
        body = (await response.json()) as ApiErrorBody;
      } catch {
        body = { code: "http_error", message: `HTTP ${response.status}` };
      }
      throw new ApiRequestError(response.status, body);
    }
    return response;
  }

  private async getJson<T>(path: string): Promise<T> {
    return (await this.request(path)).json() as Promise<T>;
  }

  async channels(): Promise<ChannelMeta[]> {
    const body = await this.getJson<{ channels: ChannelMeta[] }>("/channels");
    return body.channels;
  }

  feed(
    channelId: string,
    params: { start?: string; end?: string; agg?: string; limit?: number } = {},
  ): Promise<FeedResponse> {
    return this.getJson(`/channels/${channelId}/feed${query(params)}`);
  }

  latestSalubrity(channelId: string): Promise<LatestSalubrity> {
    return this.getJson(`/channels/${channelId}/salubrity/latest`);
  }

  surface(params: {
    steps?: number;
    t_min?: number;
    t_max?: number;
    h_min?: number;
    h_max?: number;
  } = {}): Promise<SurfaceGrid> {
    return this.getJson(`/salubrity/surface${query(params)}`);
  }

  alertConfig(channelId: string): Promise<AlertConfig> {
    return this.getJson(`/channels/${channelId}/alerts/config`);
  }

  async putAlertConfig(channelId: string, rules: AlertRule[]): Promise<AlertConfig> {
    const response = await this.request(`/channels/${channelId}/alerts/config`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ rules }),
    });
    return response.json() as Promise<AlertConfig>;
  }

  async alertEvents(channelId: string, params: { start?: string; end?: string } = {}): Promise<AlertEvent[]> {
    const body = await this.getJson<{ events: AlertEvent[] }>(
      `/channels/${channelId}/alerts/events${query(params)}`,
    );
    return body.events;
  }

  async reportJson(request: ReportRequest): Promise<ReportJson> {
    const response = await this.request("/reports", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ ...request, format: "JSON" }),
    });
    return response.json() as Promise<ReportJson>;
  }

  async reportCsv(request: ReportRequest): Promise<string> {
    const response = await this.request("/reports", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ ...request, format: "CSV" }),
    });
    return response.text();
  }
}
