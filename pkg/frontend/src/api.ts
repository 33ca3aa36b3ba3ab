/** Typed client for the annotation service; the page holds no file access. */

import type {
  DataFolderEntry,
  DocumentPayload,
  EditOp,
  EditResponse,
  Geometry,
  ServiceError,
  TaxonomyPayload,
  TreePayload,
} from "./types.js";
import { layoutParams, ViewOptions } from "./options.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.base + path, init);
    if (!response.ok) {
      let code = "HTTP_ERROR";
      let message = `${response.status}`;
      try {
        const body = (await response.json()) as ServiceError;
        code = body.error ?? code;
        message = body.message ?? message;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, code, message);
    }
    return (await response.json()) as T;
  }

  listDocuments(): Promise<DataFolderEntry[]> {
    return this.request("/api/documents");
  }

  getDocument(id: string): Promise<DocumentPayload> {
    return this.request(`/api/documents/${encodeURIComponent(id)}`);
  }

  getLayout(id: string, options: ViewOptions,
            rows?: [number, number]): Promise<Geometry> {
    const params = layoutParams(options);
    if (rows) params.set("rows", `${rows[0]}..${rows[1]}`);
    const query = params.toString();
    return this.request(
      `/api/documents/${encodeURIComponent(id)}/layout${query ? "?" + query : ""}`);
  }

  getTree(id: string, select: string): Promise<TreePayload> {
    const params = new URLSearchParams({ select });
    return this.request(
      `/api/documents/${encodeURIComponent(id)}/tree?${params}`);
  }

  getTaxonomy(taxonomyId: string): Promise<TaxonomyPayload> {
    return this.request(`/api/taxonomies/${encodeURIComponent(taxonomyId)}`);
  }

  recolorType(taxonomyId: string, type: string, color: string,
              cascade: boolean): Promise<TaxonomyPayload> {
    return this.request(
      `/api/taxonomies/${encodeURIComponent(taxonomyId)}/recolor`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ type, color, cascade }),
      });
  }

  applyEdit(id: string, op: EditOp): Promise<EditResponse> {
    return this.request(`/api/documents/${encodeURIComponent(id)}/edits`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ op }),
    });
  }

  undo(id: string): Promise<EditResponse> {
    return this.request(`/api/documents/${encodeURIComponent(id)}/undo`, {
      method: "POST",
    });
  }

  diffUrl(id: string): string {
    return `${this.base}/api/documents/${encodeURIComponent(id)}/diff`;
  }

  svgUrl(id: string, options: ViewOptions): string {
    const query = layoutParams(options).toString();
    return `${this.base}/api/documents/${encodeURIComponent(id)}/svg` +
      (query ? "?" + query : "");
  }
}
