/** Explorer state: the single source of truth the DOM renders from.
 *
 * Responses arrive asynchronously and out of order; each request gets a
 * sequence number and anything older than the newest applied response is
 * discarded, so the screen never shows a curve inconsistent with the last
 * completed call.
 */
export function initialState(params) {
    return {
        params,
        sweep: "pi1",
        lastBias: null,
        lastCurve: null,
        lastSensitivity: null,
        pending: 0,
        error: null,
    };
}
/** Monotone sequence numbers with last-applied tracking per channel. */
export class RequestSequencer {
    constructor() {
        this.next = 0;
        this.applied = new Map();
    }
    issue() {
        this.next += 1;
        return this.next;
    }
    /** True (and records it) iff `ticket` is newer than the last applied one. */
    tryApply(channel, ticket) {
        const last = this.applied.get(channel) ?? 0;
        if (ticket <= last) {
            return false;
        }
        this.applied.set(channel, ticket);
        return true;
    }
}
/** Trailing-edge debounce; default delay keeps sliders fluid without flooding. */
export function debounce(fn, delayMs = 150) {
    let timer;
    return (...args) => {
        if (timer !== undefined) {
            clearTimeout(timer);
        }
        timer = setTimeout(() => fn(...args), delayMs);
    };
}
/** Exact payload value as text: the UI displays API numbers verbatim. */
export function displayNumber(value) {
    return String(value);
}
/** CSV of the current curve, undefined points left empty (rendered as gaps). */
export function curveToCsv(curve) {
    const lines = [`${curve.parameter},bias_cm,bias_msm`];
    for (const point of curve.points) {
        const cm = point.bias_cm === null ? "" : String(point.bias_cm);
        const msm = point.bias_msm === null ? "" : String(point.bias_msm);
        lines.push(`${point.value},${cm},${msm}`);
    }
    return lines.join("\n") + "\n";
}
export const SWEEP_RANGES = {
    lambda: { start: 0, stop: 1 },
    pi0: { start: 0, stop: 1 },
    pi1: { start: 0, stop: 1 },
    gamma: { start: -5, stop: 5 },
    p0: { start: 0, stop: 1 },
    p1: { start: 0, stop: 1 },
};
