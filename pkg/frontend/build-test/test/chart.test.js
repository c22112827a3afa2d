import assert from "node:assert/strict";
import { test } from "node:test";
import { definedSegments, openMarkerPoints, renderCurveChart, renderHistogram, } from "../src/chart.js";
const point = (value, msm, cm = msm) => ({
    value,
    bias_msm: msm,
    bias_cm: cm,
});
test("definedSegments splits at undefined points", () => {
    const points = [
        point(0, null),
        point(0.25, 0.1),
        point(0.5, 0.2),
        point(0.75, null),
        point(1, 0.4),
    ];
    const segments = definedSegments(points, (p) => p.bias_msm);
    assert.equal(segments.length, 2);
    assert.deepEqual(segments.map((seg) => seg.map((p) => p.value)), [[0.25, 0.5], [1]]);
});
test("definedSegments with no gaps is a single run", () => {
    const points = [point(0, 1), point(1, 2)];
    assert.equal(definedSegments(points, (p) => p.bias_msm).length, 1);
});
test("openMarkerPoints marks defined neighbors of gaps", () => {
    const points = [
        point(0, null),
        point(0.25, 0.1),
        point(0.5, 0.2),
        point(0.75, null),
        point(1, 0.4),
    ];
    const markers = openMarkerPoints(points, (p) => p.bias_msm).map((p) => p.value);
    assert.deepEqual(markers, [0.25, 0.5, 1]);
});
test("openMarkerPoints empty when curve fully defined", () => {
    const points = [point(0, 0.1), point(0.5, 0.2), point(1, 0.3)];
    assert.deepEqual(openMarkerPoints(points, (p) => p.bias_msm), []);
});
test("curve chart renders gaps as separate paths with hollow markers", () => {
    const curve = {
        parameter: "pi1",
        points: [
            point(0, null),
            point(0.25, -0.2, -0.15),
            point(0.5, 0.0, 0.0),
            point(0.75, 0.2, 0.15),
            point(1, null),
        ],
    };
    const svg = renderCurveChart(curve);
    assert.match(svg, /<svg /);
    assert.ok(!svg.includes("NaN"));
    // solid series plus dashed series
    assert.ok(svg.includes('stroke-dasharray="7 5"'));
    // two open markers per series (both edges touch gaps)
    const hollow = svg.match(/fill="white"/g) ?? [];
    assert.equal(hollow.length, 4);
    assert.match(svg, /pi1<\/text>/);
});
test("curve chart survives an all-undefined series", () => {
    const curve = {
        parameter: "pi1",
        points: [point(0, null), point(1, null)],
    };
    const svg = renderCurveChart(curve);
    assert.match(svg, /no defined points/);
});
test("histogram renders one bar per bin and a median line", () => {
    const summary = {
        estimator: "msm_ipw",
        mean: -0.31,
        median: -0.3,
        iqr: [-0.4, -0.2],
        histogram: { edges: [-0.5, -0.4, -0.3, -0.2, -0.1], counts: [5, 20, 30, 10] },
        n_values: 65,
    };
    const svg = renderHistogram(summary);
    const bars = svg.match(/<rect /g) ?? [];
    assert.equal(bars.length, 1 + 4); // frame + four bins
    assert.match(svg, /stroke-dasharray="4 4"/); // median marker
    assert.ok(!svg.includes("NaN"));
});
