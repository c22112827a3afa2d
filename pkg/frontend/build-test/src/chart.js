/** SVG rendering as pure string builders (no DOM), so charts are unit-testable.
 *
 * Conventions: the weighted marginal model is the solid line, the
 * conditional model the dashed one. Grid points where the API returned
 * null are gaps; defined points bordering a gap get an open (hollow)
 * marker to show the curve stops because the quantity is undefined there.
 */
export const DEFAULT_GEOMETRY = {
    width: 640,
    height: 360,
    margin: { top: 16, right: 16, bottom: 36, left: 56 },
};
const MSM_COLOR = "#1c4e80";
const CM_COLOR = "#a43d3d";
function linearScale(d0, d1, r0, r1) {
    const span = d1 - d0 || 1;
    return (value) => r0 + ((value - d0) / span) * (r1 - r0);
}
function fmtTick(value) {
    return Number.parseFloat(value.toPrecision(4)).toString();
}
/**
 * Split a point series into runs of consecutive defined points.
 * Exported for tests: the gap logic is the part worth pinning down.
 */
export function definedSegments(points, pick) {
    const segments = [];
    let current = [];
    for (const point of points) {
        if (pick(point) === null) {
            if (current.length > 0) {
                segments.push(current);
                current = [];
            }
        }
        else {
            current.push(point);
        }
    }
    if (current.length > 0) {
        segments.push(current);
    }
    return segments;
}
/** Defined points adjacent to an undefined neighbor (or series edge cut short). */
export function openMarkerPoints(points, pick) {
    const markers = [];
    points.forEach((point, i) => {
        if (pick(point) === null) {
            return;
        }
        const prevUndefined = i > 0 && pick(points[i - 1]) === null;
        const nextUndefined = i < points.length - 1 && pick(points[i + 1]) === null;
        if (prevUndefined || nextUndefined) {
            markers.push(point);
        }
    });
    return markers;
}
function seriesPaths(points, pick, x, y, color, dashed) {
    const dash = dashed ? ' stroke-dasharray="7 5"' : "";
    const paths = definedSegments(points, pick)
        .map((segment) => {
        const d = segment
            .map((p, i) => `${i === 0 ? "M" : "L"}${x(p.value).toFixed(2)} ${y(pick(p)).toFixed(2)}`)
            .join(" ");
        return `<path d="${d}" fill="none" stroke="${color}" stroke-width="2"${dash}/>`;
    })
        .join("");
    const markers = openMarkerPoints(points, pick)
        .map((p) => `<circle cx="${x(p.value).toFixed(2)}" cy="${y(pick(p)).toFixed(2)}" r="4.5" fill="white" stroke="${color}" stroke-width="2"/>`)
        .join("");
    return paths + markers;
}
/** Bias-curve chart: both estimators over one swept parameter. */
export function renderCurveChart(curve, geometry = DEFAULT_GEOMETRY) {
    const { width, height, margin } = geometry;
    const innerW = width - margin.left - margin.right;
    const innerH = height - margin.top - margin.bottom;
    const values = curve.points.map((p) => p.value);
    const biases = curve.points
        .flatMap((p) => [p.bias_cm, p.bias_msm])
        .filter((b) => b !== null);
    if (values.length === 0 || biases.length === 0) {
        return `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"><text x="${width / 2}" y="${height / 2}" text-anchor="middle">no defined points</text></svg>`;
    }
    let lo = Math.min(...biases, 0);
    let hi = Math.max(...biases, 0);
    const pad = (hi - lo || 1) * 0.08;
    lo -= pad;
    hi += pad;
    const x = linearScale(Math.min(...values), Math.max(...values), margin.left, margin.left + innerW);
    const y = linearScale(lo, hi, margin.top + innerH, margin.top);
    const xTicks = 5;
    const ticks = [];
    for (let i = 0; i <= xTicks; i++) {
        const v = Math.min(...values) + ((Math.max(...values) - Math.min(...values)) * i) / xTicks;
        ticks.push(`<line x1="${x(v).toFixed(2)}" y1="${margin.top + innerH}" x2="${x(v).toFixed(2)}" y2="${margin.top + innerH + 5}" stroke="#666"/>` +
            `<text x="${x(v).toFixed(2)}" y="${margin.top + innerH + 20}" text-anchor="middle" class="tick">${fmtTick(v)}</text>`);
    }
    for (let i = 0; i <= 4; i++) {
        const v = lo + ((hi - lo) * i) / 4;
        ticks.push(`<line x1="${margin.left - 5}" y1="${y(v).toFixed(2)}" x2="${margin.left}" y2="${y(v).toFixed(2)}" stroke="#666"/>` +
            `<text x="${margin.left - 9}" y="${(y(v) + 4).toFixed(2)}" text-anchor="end" class="tick">${fmtTick(v)}</text>`);
    }
    const zeroLine = lo < 0 && hi > 0
        ? `<line x1="${margin.left}" y1="${y(0).toFixed(2)}" x2="${margin.left + innerW}" y2="${y(0).toFixed(2)}" stroke="#bbb" stroke-dasharray="2 4"/>`
        : "";
    return (`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">` +
        `<rect x="${margin.left}" y="${margin.top}" width="${innerW}" height="${innerH}" fill="none" stroke="#ccc"/>` +
        zeroLine +
        ticks.join("") +
        seriesPaths(curve.points, (p) => p.bias_msm, x, y, MSM_COLOR, false) +
        seriesPaths(curve.points, (p) => p.bias_cm, x, y, CM_COLOR, true) +
        `<text x="${margin.left + innerW / 2}" y="${height - 4}" text-anchor="middle" class="axis">${curve.parameter}</text>` +
        `<text transform="rotate(-90)" x="${-(margin.top + innerH / 2)}" y="14" text-anchor="middle" class="axis">bias in ATE estimator</text>` +
        `</svg>`);
}
/** Histogram of sampled biases for one estimator. */
export function renderHistogram(summary, geometry = DEFAULT_GEOMETRY, color = MSM_COLOR) {
    const { width, height, margin } = geometry;
    const innerW = width - margin.left - margin.right;
    const innerH = height - margin.top - margin.bottom;
    const { edges, counts } = summary.histogram;
    if (counts.length === 0 || edges.length < 2) {
        return `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}"></svg>`;
    }
    const x = linearScale(edges[0], edges[edges.length - 1], margin.left, margin.left + innerW);
    const peak = Math.max(...counts, 1);
    const y = linearScale(0, peak, margin.top + innerH, margin.top);
    const bars = counts
        .map((count, i) => {
        const x0 = x(edges[i]);
        const x1 = x(edges[i + 1]);
        const top = y(count);
        return `<rect x="${x0.toFixed(2)}" y="${top.toFixed(2)}" width="${Math.max(x1 - x0 - 0.5, 0.5).toFixed(2)}" height="${(margin.top + innerH - top).toFixed(2)}" fill="${color}" fill-opacity="0.75"/>`;
    })
        .join("");
    const ticks = [];
    for (let i = 0; i <= 5; i++) {
        const v = edges[0] + ((edges[edges.length - 1] - edges[0]) * i) / 5;
        ticks.push(`<text x="${x(v).toFixed(2)}" y="${margin.top + innerH + 20}" text-anchor="middle" class="tick">${fmtTick(v)}</text>`);
    }
    const median = `<line x1="${x(summary.median).toFixed(2)}" y1="${margin.top}" x2="${x(summary.median).toFixed(2)}" y2="${margin.top + innerH}" stroke="#222" stroke-dasharray="4 4"/>`;
    return (`<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">` +
        `<rect x="${margin.left}" y="${margin.top}" width="${innerW}" height="${innerH}" fill="none" stroke="#ccc"/>` +
        bars +
        median +
        ticks.join("") +
        `<text x="${margin.left + innerW / 2}" y="${height - 4}" text-anchor="middle" class="axis">sampled bias (${summary.estimator})</text>` +
        `</svg>`);
}
