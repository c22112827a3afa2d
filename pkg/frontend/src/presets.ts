/** Parameter presets: the five catalog scenarios plus the worked example. */

import type { ModelParams, SensitivityRequest } from "./types.js";

export interface Preset {
  readonly label: string;
  readonly params?: ModelParams;
  readonly sensitivity?: SensitivityRequest;
}

const SCENARIO_BASE = { gamma: 2 };

export const PRESETS: Record<string, Preset> = {
  "scenario-0": {
    label: "Scenario 0 (perfect proxy)",
    params: { lambda: 0.5, pi0: 0.5, pi1: 0.75, p0: 0, p1: 1, ...SCENARIO_BASE },
  },
  "scenario-1": {
    label: "Scenario 1 (negative bias)",
    params: { lambda: 0.5, pi0: 0.9, pi1: 0.45, p0: 0.05, p1: 0.9, ...SCENARIO_BASE },
  },
  "scenario-2": {
    label: "Scenario 2 (small positive bias)",
    params: { lambda: 0.8, pi0: 0.5, pi1: 0.75, p0: 0.05, p1: 0.9, ...SCENARIO_BASE },
  },
  "scenario-3": {
    label: "Scenario 3 (large positive bias)",
    params: { lambda: 0.8, pi0: 0.25, pi1: 0.75, p0: 0.05, p1: 0.9, ...SCENARIO_BASE },
  },
  "scenario-4": {
    label: "Scenario 4 (equal biases)",
    params: { lambda: 0.45, pi0: 0.5, pi1: 0.75, p0: 0.05, p1: 0.9, ...SCENARIO_BASE },
  },
  "blood-pressure": {
    label: "Blood-pressure study (sensitivity panel)",
    sensitivity: {
      observables: { ell: 0.77, omega: 0.42, pi_star0: 0.32, pi_star1: 0.44 },
      sens_range: [0.9, 0.98],
      spec_range: [0.9, 0.98],
      gamma: -8.9336,
      draws: 10000,
      seed: 20260808,
    },
  },
};
