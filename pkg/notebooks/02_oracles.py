# coding: utf-8

# # Checking the structural solver against brute force
#
# The defendability maximum is also the optimum of a small LP, and for tiny
# games every equilibrium can be found by trying all support pairs.

# In[1]:

import numpy as np

from spyvspam import (
    GameParams,
    build_matrices,
    build_spammer_binomial,
    solve_defendability_lp,
    solve_ne,
    support_enumeration_ne,
    verify_ne,
)

rng = np.random.default_rng(0)


def random_game(max_N):
    N = int(rng.integers(1, max_N + 1))
    c_a = float(rng.uniform(0.5, 2.0))
    params = GameParams(N=N, p=float(rng.uniform(0.1, 0.9)), c_d=float(rng.uniform(0.5, 3 * N)) * c_a,
                        c_a=c_a, c_fa=float(rng.uniform(1, 30)))
    model = build_spammer_binomial(N, float(rng.uniform(0.05, 0.6)))
    return params, model, build_matrices(params, model)


# In[2]:

gaps = []
for _ in range(200):
    params, model, m = random_game(12)
    r = solve_ne(params, model, m)
    gaps.append(abs(solve_defendability_lp(m).objective - r.theta_hat_shifted))
print("worst LP gap over 200 games:", max(gaps))


# In[3]:

params, model, m = random_game(3)
r = solve_ne(params, model, m)
for alpha, beta in support_enumeration_ne(m):
    print(np.round(alpha, 4), np.round(beta, 4))
print("structural:", np.round(r.alpha, 4), np.round(r.beta, 4))


# In[4]:

uniform = verify_ne(m, np.full(params.N + 1, 1 / (params.N + 1)), np.full(params.N + 2, 1 / (params.N + 2)))
uniform.as_dict()
