# coding: utf-8

# # Playing the equilibrium
#
# Simulated rounds should reproduce the analytic payoffs, with standard
# errors shrinking like one over the square root of the trial count.

# In[1]:

from spyvspam import GameParams, build_spammer_binomial, solve_ne
from spyvspam.simulate import SimConfig, analytic_values, compare, simulate

params = GameParams(N=7, p=0.8, c_d=10, c_a=1, c_fa=10)
model = build_spammer_binomial(7, 0.1)
r = solve_ne(params, model)


# In[2]:

for trials in (10_000, 100_000, 1_000_000):
    config = SimConfig.from_params(params, model, r.alpha, r.beta, trials=trials, seed=1)
    rep = simulate(config)
    z = compare(rep, analytic_values(config))
    print(trials, round(rep.defender_payoff_raw_mean, 4), round(rep.defender_payoff_raw_stderr, 5),
          {k: round(v, 2) for k, v in z.items()})


# In[3]:

print("p * theta_hat =", params.p * r.theta_hat)
