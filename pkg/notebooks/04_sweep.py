# coding: utf-8

# # How the defender reacts to the spy prior
#
# Sweeping p from a rare to a common spy. The command line does the same
# thing with `spyvspam sweep game.json --vary p=0.1:0.9:9 --out sweep/`.

# In[1]:

import numpy as np

from spyvspam import GameParams, build_spammer_binomial, solve_ne

model = build_spammer_binomial(7, 0.1)


# In[2]:

for p in np.linspace(0.1, 0.9, 9):
    r = solve_ne(GameParams(N=7, p=p, c_d=10, c_a=1, c_fa=10), model)
    print(f"p={p:.1f}  {r.form:10s} s={r.s}  never alarm={r.beta[-1]:.2f}  always alarm={r.beta[0]:.2f}")


# In[3]:

# cheap detection: the uniform defender over the last c_d thresholds
for c_d in range(1, 8):
    r = solve_ne(GameParams(N=7, p=0.8, c_d=c_d, c_a=1, c_fa=10), model)
    print(c_d, r.form, np.round(r.beta, 3))
