export class ApiError extends Error {
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
// Thin typed wrapper over the JSON endpoints. Injectable fetch so tests can
// serve committed fixture bodies instead of a live server.
export class ApiClient {
    constructor(baseUrl = "", fetchFn = (url) => fetch(url)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async get(path) {
        let resp;
        try {
            resp = await this.fetchFn(this.baseUrl + path);
        }
        catch (err) {
            throw new ApiError(0, `API unreachable: ${String(err)}`);
        }
        if (!resp.ok) {
            let detail = `HTTP ${resp.status}`;
            try {
                const body = (await resp.json());
                if (body && body.detail)
                    detail = body.detail;
            }
            catch {
                // non-JSON error body; keep the status text
            }
            throw new ApiError(resp.status, detail);
        }
        return (await resp.json());
    }
    tasks() {
        return this.get("/tasks");
    }
    report(task) {
        return this.get(`/tasks/${task}/report`);
    }
    underserved(task, tau, limit) {
        return this.get(`/tasks/${task}/underserved?tau=${tau}&limit=${limit}`);
    }
    languages(task) {
        return this.get(`/tasks/${task}/languages`);
    }
    diachronic(task, tau) {
        return this.get(`/tasks/${task}/diachronic?tau=${tau}`);
    }
    contributions(task, kind, tau) {
        return this.get(`/tasks/${task}/contributions?kind=${kind}&tau=${tau}`);
    }
    whatif(task, language, utility) {
        return this.get(`/whatif?task=${task}&language=${language}&utility=${utility}`);
    }
}
