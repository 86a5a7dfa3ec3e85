/** Typed client for the database service.
 *
 * The console talks to exactly four endpoints: /groups, /query, /file
 * and /info.  Everything funnels through one injectable fetch function
 * so tests can observe or fake the traffic.
 */

export interface GroupInfo {
  name: string;
  valueKind: string;
  multiValued: boolean;
}

export interface QueryResult {
  columns: string[];
  rows: string[][];
}

export type InstanceInfo = Record<string, string | string[]>;

export interface FileContent {
  bytes: ArrayBuffer;
  filename: string | null;
}

/** Server-side rejection of a query: parser message plus byte position. */
export class QueryRejected extends Error {
  constructor(
    message: string,
    readonly position: number | null,
  ) {
    super(message);
    this.name = "QueryRejected";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

const browserFetch: FetchLike = (url, init) => fetch(url, init);

export class Api {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = browserFetch,
  ) {}

  async groups(): Promise<GroupInfo[]> {
    const response = await this.fetchFn(this.baseUrl + "/groups");
    if (!response.ok) {
      throw new Error(`groups request failed: ${response.status}`);
    }
    return (await response.json()) as GroupInfo[];
  }

  async query(
    query: string,
    resolve: string[],
    signal?: AbortSignal,
  ): Promise<QueryResult> {
    const response = await this.fetchFn(this.baseUrl + "/query", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ query, resolve }),
      signal,
    });
    if (response.status === 400) {
      const body = (await response.json()) as {
        message?: string;
        position?: number | null;
      };
      throw new QueryRejected(body.message ?? "query rejected", body.position ?? null);
    }
    if (!response.ok) {
      throw new Error(`query request failed: ${response.status}`);
    }
    return (await response.json()) as QueryResult;
  }

  async info(hash: string): Promise<InstanceInfo> {
    const response = await this.fetchFn(this.baseUrl + "/info/" + hash);
    if (!response.ok) {
      throw new Error(`no attributes for ${hash} (${response.status})`);
    }
    return (await response.json()) as InstanceInfo;
  }

  fileUrl(hash: string): string {
    return this.baseUrl + "/file/" + hash;
  }

  /** Fetch an instance file whole, with the filename the server offers. */
  async fileContent(hash: string): Promise<FileContent> {
    const response = await this.fetchFn(this.fileUrl(hash));
    if (!response.ok) {
      throw new Error(`file for ${hash} unavailable (${response.status})`);
    }
    const disposition = response.headers.get("content-disposition") ?? "";
    const match = /filename="([^"]+)"/.exec(disposition);
    return {
      bytes: await response.arrayBuffer(),
      filename: match ? match[1] : null,
    };
  }
}

/** Keeps at most one request in flight; starting a new one aborts the old. */
export class SingleFlight {
  private controller: AbortController | null = null;

  async run<T>(task: (signal: AbortSignal) => Promise<T>): Promise<T> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      return await task(controller.signal);
    } finally {
      if (this.controller === controller) {
        this.controller = null;
      }
    }
  }
}

export function isAbort(error: unknown): boolean {
  return error instanceof DOMException && error.name === "AbortError";
}
