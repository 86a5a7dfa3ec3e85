/** Typed client for the database service.
 *
 * The console talks to exactly four endpoints: /groups, /query, /file
 * and /info.  Everything funnels through one injectable fetch function
 * so tests can observe or fake the traffic.
 */
/** Server-side rejection of a query: parser message plus byte position. */
export class QueryRejected extends Error {
    constructor(message, position) {
        super(message);
        this.position = position;
        this.name = "QueryRejected";
    }
}
const browserFetch = (url, init) => fetch(url, init);
export class Api {
    constructor(baseUrl = "", fetchFn = browserFetch) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async groups() {
        const response = await this.fetchFn(this.baseUrl + "/groups");
        if (!response.ok) {
            throw new Error(`groups request failed: ${response.status}`);
        }
        return (await response.json());
    }
    async query(query, resolve, signal) {
        const response = await this.fetchFn(this.baseUrl + "/query", {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ query, resolve }),
            signal,
        });
        if (response.status === 400) {
            const body = (await response.json());
            throw new QueryRejected(body.message ?? "query rejected", body.position ?? null);
        }
        if (!response.ok) {
            throw new Error(`query request failed: ${response.status}`);
        }
        return (await response.json());
    }
    async info(hash) {
        const response = await this.fetchFn(this.baseUrl + "/info/" + hash);
        if (!response.ok) {
            throw new Error(`no attributes for ${hash} (${response.status})`);
        }
        return (await response.json());
    }
    fileUrl(hash) {
        return this.baseUrl + "/file/" + hash;
    }
    /** Fetch an instance file whole, with the filename the server offers. */
    async fileContent(hash) {
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
    constructor() {
        this.controller = null;
    }
    async run(task) {
        this.controller?.abort();
        const controller = new AbortController();
        this.controller = controller;
        try {
            return await task(controller.signal);
        }
        finally {
            if (this.controller === controller) {
                this.controller = null;
            }
        }
    }
}
export function isAbort(error) {
    return error instanceof DOMException && error.name === "AbortError";
}
