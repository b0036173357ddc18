# coding: utf-8

# # Equilibria of the four reference games
#
# Each game below is solved with the structural solver. We print the
# defender's threshold mix, the spy's attack mix, and the equilibrium form.

# In[1]:

import numpy as np

from spyvspam import GameParams, build_spammer_binomial, solve_ne

np.set_printoptions(precision=4, suppress=True, linewidth=100)


# In[2]:

games = {
    "fig1": dict(N=7, theta0=0.1, c_d=15, c_a=1, c_fa=23, p=0.2),
    "fig2": dict(N=7, theta0=0.1, c_d=10, c_a=1, c_fa=10, p=0.8),
    "fig3": dict(N=7, theta0=0.1, c_d=7, c_a=1, c_fa=10, p=0.8),
}


def solve(kw):
    kw = dict(kw)
    model = build_spammer_binomial(kw["N"], kw.pop("theta0"))
    params = GameParams(**kw)
    return params, model, solve_ne(params, model)


# In[3]:

for name, kw in games.items():
    params, model, r = solve(kw)
    print(f"{name}: {r.form} s={r.s}  theta_hat={r.theta_hat:.4f}")
    print("  beta ", r.beta)
    print("  alpha", r.alpha)


# A rare spy (fig1) leaves most weight on never raising an alarm. A likely
# spy (fig2) moves that weight to T=0 instead. When detection is cheap
# relative to N attacks (fig3) the defender spreads evenly over 1..N.

# In[4]:

params, model, r = solve(dict(N=50, theta0=0.4, c_d=142, c_a=1, c_fa=142, p=0.3))
tail = np.arange(r.s + 1, params.N + 1)
ratio = r.alpha[tail] / model.pmf[tail]
print(r.form, r.s, ratio.min(), ratio.max())


# Past the start of its support the spy imitates the spammer: its attack
# distribution is the spammer pmf scaled by (c_fa/c_d)(1-p)/p = 7/3.
