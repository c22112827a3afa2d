/** DOM wiring for the explorer. All math comes from the API; this file only
 * moves values between controls, requests, and renderers. */

import { ApiError, Client } from "./api.js";
import { renderCurveChart, renderHistogram } from "./chart.js";
import { PRESETS } from "./presets.js";
import {
  RequestSequencer,
  SWEEP_RANGES,
  curveToCsv,
  debounce,
  displayNumber,
  initialState,
} from "./state.js";
import type { ModelParams, SensitivityRequest, SweepParameter } from "./types.js";

const client = new Client("");
const sequencer = new RequestSequencer();
const state = initialState(PRESETS["scenario-1"]!.params!);

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const PARAM_IDS: (keyof ModelParams)[] = ["lambda", "pi0", "pi1", "p0", "p1", "gamma"];

function readParams(): ModelParams {
  const params = {} as ModelParams;
  for (const key of PARAM_IDS) {
    params[key] = Number.parseFloat($<HTMLInputElement>(`param-${key}`).value);
  }
  return params;
}

function writeParams(params: ModelParams): void {
  for (const key of PARAM_IDS) {
    const slider = $<HTMLInputElement>(`param-${key}`);
    slider.value = String(params[key]);
    $(`param-${key}-value`).textContent = String(params[key]);
  }
}

function setPending(delta: number): void {
  state.pending += delta;
  $("pending").style.visibility = state.pending > 0 ? "visible" : "hidden";
}

function showError(id: string, message: string | null): void {
  const el = $(id);
  el.textContent = message ?? "";
  el.style.display = message ? "block" : "none";
}

function refreshBias(): void {
  const params = readParams();
  state.params = params;
  const ticket = sequencer.issue();
  setPending(1);
  client
    .bias(params)
    .then((result) => {
      if (!sequencer.tryApply("bias", ticket)) return;
      state.lastBias = result;
      showError("param-error", null);
      $("bias-msm").textContent = displayNumber(result.bias_msm);
      $("bias-cm").textContent = displayNumber(result.bias_cm);
      $("obs-readout").textContent =
        `ell ${displayNumber(result.observables.ell)} | omega ${displayNumber(result.observables.omega)}` +
        ` | pi*0 ${displayNumber(result.observables.pi_star0)} | pi*1 ${displayNumber(result.observables.pi_star1)}`;
    })
    .catch((err) => {
      if (!sequencer.tryApply("bias", ticket)) return;
      $("bias-msm").textContent = "-";
      $("bias-cm").textContent = "-";
      showError("param-error", err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
    })
    .finally(() => setPending(-1));
}

function refreshCurve(): void {
  const params = readParams();
  const sweep = $<HTMLSelectElement>("sweep-param").value as SweepParameter;
  state.sweep = sweep;
  const range = SWEEP_RANGES[sweep];
  const ticket = sequencer.issue();
  setPending(1);
  client
    .curve(params, sweep, range.start, range.stop, 101)
    .then((result) => {
      if (!sequencer.tryApply("curve", ticket)) return;
      state.lastCurve = result;
      showError("curve-error", null);
      $("curve-chart").innerHTML = renderCurveChart(result);
      const undefined_count = result.points.filter((p) => p.bias_msm === null).length;
      $("curve-note").textContent =
        undefined_count > 0
          ? `${undefined_count} grid point(s) undefined (open markers); estimand does not exist there`
          : "";
    })
    .catch((err) => {
      if (!sequencer.tryApply("curve", ticket)) return;
      showError("curve-error", err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
    })
    .finally(() => setPending(-1));
}

const refreshDebounced = debounce(() => {
  refreshBias();
  refreshCurve();
}, 150);

function readSensitivityRequest(): SensitivityRequest {
  const num = (id: string) => Number.parseFloat($<HTMLInputElement>(id).value);
  return {
    observables: {
      ell: num("obs-ell"),
      omega: num("obs-omega"),
      pi_star0: num("obs-pistar0"),
      pi_star1: num("obs-pistar1"),
    },
    sens_range: [num("sens-lo"), num("sens-hi")],
    spec_range: [num("spec-lo"), num("spec-hi")],
    gamma: num("sens-gamma"),
    draws: Number.parseInt($<HTMLInputElement>("sens-draws").value, 10),
    seed: Number.parseInt($<HTMLInputElement>("sens-seed").value, 10),
  };
}

function runSensitivity(): void {
  const request = readSensitivityRequest();
  const ticket = sequencer.issue();
  setPending(1);
  client
    .sensitivity(request)
    .then((result) => {
      if (!sequencer.tryApply("sensitivity", ticket)) return;
      state.lastSensitivity = result;
      showError("sens-error", null);
      $("sens-chart").innerHTML = renderHistogram(result.msm);
      $("sens-summary").innerHTML =
        `<b>weighted model</b>: mean ${displayNumber(result.msm.mean)}, ` +
        `median ${displayNumber(result.msm.median)}, ` +
        `IQR [${displayNumber(result.msm.iqr[0])}, ${displayNumber(result.msm.iqr[1])}]<br>` +
        `<b>conditional model</b>: mean ${displayNumber(result.cm.mean)}, ` +
        `median ${displayNumber(result.cm.median)}, ` +
        `IQR [${displayNumber(result.cm.iqr[0])}, ${displayNumber(result.cm.iqr[1])}]<br>` +
        `${result.n_feasible} feasible draws, ${result.n_infeasible} infeasible`;
    })
    .catch((err) => {
      if (!sequencer.tryApply("sensitivity", ticket)) return;
      showError("sens-error", err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
    })
    .finally(() => setPending(-1));
}

function applyPreset(name: string): void {
  const preset = PRESETS[name];
  if (!preset) return;
  if (preset.params) {
    writeParams(preset.params);
    refreshBias();
    refreshCurve();
  }
  if (preset.sensitivity) {
    const s = preset.sensitivity;
    $<HTMLInputElement>("obs-ell").value = String(s.observables.ell);
    $<HTMLInputElement>("obs-omega").value = String(s.observables.omega);
    $<HTMLInputElement>("obs-pistar0").value = String(s.observables.pi_star0);
    $<HTMLInputElement>("obs-pistar1").value = String(s.observables.pi_star1);
    $<HTMLInputElement>("sens-lo").value = String(s.sens_range[0]);
    $<HTMLInputElement>("sens-hi").value = String(s.sens_range[1]);
    $<HTMLInputElement>("spec-lo").value = String(s.spec_range[0]);
    $<HTMLInputElement>("spec-hi").value = String(s.spec_range[1]);
    $<HTMLInputElement>("sens-gamma").value = String(s.gamma);
    $<HTMLInputElement>("sens-draws").value = String(s.draws);
    $<HTMLInputElement>("sens-seed").value = String(s.seed);
    runSensitivity();
  }
}

function downloadCurveCsv(): void {
  if (!state.lastCurve) return;
  const blob = new Blob([curveToCsv(state.lastCurve)], { type: "text/csv" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = `curve_${state.lastCurve.parameter}.csv`;
  link.click();
  URL.revokeObjectURL(link.href);
}

function init(): void {
  const presetSelect = $<HTMLSelectElement>("preset");
  for (const [name, preset] of Object.entries(PRESETS)) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = preset.label;
    presetSelect.appendChild(option);
  }
  presetSelect.value = "scenario-1";
  presetSelect.addEventListener("change", () => applyPreset(presetSelect.value));

  for (const key of PARAM_IDS) {
    const slider = $<HTMLInputElement>(`param-${key}`);
    slider.addEventListener("input", () => {
      $(`param-${key}-value`).textContent = slider.value;
      refreshDebounced();
    });
  }
  $<HTMLSelectElement>("sweep-param").addEventListener("change", refreshCurve);
  $("sens-run").addEventListener("click", runSensitivity);
  $("curve-csv").addEventListener("click", downloadCurveCsv);

  writeParams(state.params);
  refreshBias();
  refreshCurve();
}

init();
