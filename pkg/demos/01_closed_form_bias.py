"""How much does a noisy binary confounder bend the treatment effect?

Walks the five built-in scenarios through the closed-form machinery:
the observable summaries an analyst would see, the four P(L=1 | A, L*)
probabilities, and the bias of both estimators.  The exact enumeration
oracle recomputes each bias by brute force as a cross-check.
"""

from confbias import (
    bias_conditional,
    bias_msm,
    enumerate_cells,
    implied_observables,
    phi_table,
)
from confbias.oracle import population_ipw_slope, population_ols
from confbias.simulation import load_scenario_catalog


def main():
    catalog = load_scenario_catalog()

    print("Scenario parameters")
    print(f"{'id':>3} {'lam':>5} {'pi0':>5} {'pi1':>5} {'p0':>5} {'p1':>5} {'gamma':>6}")
    for sid, p in catalog.items():
        print(f"{sid:>3} {p.lam:5.2f} {p.pi0:5.2f} {p.pi1:5.2f} {p.p0:5.2f} {p.p1:5.2f} {p.gamma:6.2f}")

    print("\nWhat the analyst sees (proxy-only summaries)")
    print(f"{'id':>3} {'ell':>7} {'omega':>7} {'pi*0':>7} {'pi*1':>7}")
    for sid, p in catalog.items():
        obs = implied_observables(p)
        print(f"{sid:>3} {obs.ell:7.4f} {obs.omega:7.4f} {obs.pi_star0:7.4f} {obs.pi_star1:7.4f}")

    print("\nResidual confounding within proxy strata: phi(a, l*) = P(L=1 | A=a, L*=l*)")
    for sid, p in catalog.items():
        ph = phi_table(p)
        print(
            f"{sid:>3}  phi(0,0)={ph[0][0]:.3f}  phi(1,0)={ph[1][0]:.3f}  "
            f"phi(0,1)={ph[0][1]:.3f}  phi(1,1)={ph[1][1]:.3f}"
        )

    print("\nBias of the ATE estimator (closed form vs enumeration oracle)")
    print(f"{'id':>3} {'weighted marginal':>18} {'oracle':>9} {'conditional':>12} {'oracle':>9}")
    for sid, p in catalog.items():
        msm = bias_msm(p)
        cm = bias_conditional(p)
        cells = enumerate_cells(p)
        oracle_msm = population_ipw_slope(cells, "lstar") - p.beta
        oracle_cm = population_ols(cells, "lstar").a - p.beta
        print(f"{sid:>3} {msm:18.4f} {oracle_msm:9.4f} {cm:12.4f} {oracle_cm:9.4f}")

    print(
        "\nReading: scenario 1 treats the confounded group less often (pi0 > pi1),"
        "\nso the misclassification hides protective confounding and the ATE is"
        "\nunderestimated by ~0.42 (weighted model) / ~0.34 (outcome regression)."
    )


if __name__ == "__main__":
    main()
