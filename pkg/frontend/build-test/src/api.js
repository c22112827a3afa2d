/** Thin fetch client. Every call is a POST of a JSON body to one endpoint. */
export class ApiError extends Error {
    constructor(status, code, message) {
        super(message);
        this.code = code;
        this.status = status;
    }
}
async function post(baseUrl, route, body) {
    const response = await fetch(baseUrl + route, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
    });
    const payload = (await response.json());
    if (!response.ok) {
        const err = payload.error ?? {
            code: "unknown",
            message: `HTTP ${response.status}`,
        };
        throw new ApiError(response.status, err.code, err.message);
    }
    return payload.result;
}
export class Client {
    constructor(baseUrl = "") {
        this.baseUrl = baseUrl;
    }
    bias(params) {
        return post(this.baseUrl, "/api/bias", { params });
    }
    curve(params, parameter, start, stop, points) {
        return post(this.baseUrl, "/api/curve", {
            params,
            parameter,
            start,
            stop,
            points,
        });
    }
    sensitivity(request) {
        return post(this.baseUrl, "/api/sensitivity", request);
    }
}
