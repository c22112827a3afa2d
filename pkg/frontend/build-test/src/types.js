/** Wire types of the bias-analysis API. The UI never recomputes any of these. */
export {};
