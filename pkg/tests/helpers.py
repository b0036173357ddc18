import numpy as np

from spyvspam import GameParams, build_matrices, build_spammer_binomial

# one line per acceptance criterion, echoed in the pytest summary
ACCEPTANCE_LINES = []

FIG1 = dict(N=7, theta0=0.1, c_d=15.0, c_a=1.0, c_fa=23.0, p=0.2)
FIG2 = dict(N=7, theta0=0.1, c_d=10.0, c_a=1.0, c_fa=10.0, p=0.8)
FIG3 = dict(N=7, theta0=0.1, c_d=7.0, c_a=1.0, c_fa=10.0, p=0.8)
FIG4 = dict(N=50, theta0=0.4, c_d=142.0, c_a=1.0, c_fa=142.0, p=0.3)


def make_game(N, theta0, c_d, c_a, c_fa, p, epsilon=None):
    params = GameParams(N=N, p=p, c_d=c_d, c_a=c_a, c_fa=c_fa, epsilon=epsilon)
    model = build_spammer_binomial(N, theta0)
    return params, model, build_matrices(params, model)


def random_instances(count, max_N, seed):
    """Random games on the grid N in 1..max_N, p in [0.1, 0.9], theta0 in
    [0.05, 0.6], c_d/c_a in [0.5, 3N], c_fa in [1, 30]."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        N = int(rng.integers(1, max_N + 1))
        c_a = float(rng.uniform(0.5, 2.0))
        yield make_game(
            N=N,
            theta0=float(rng.uniform(0.05, 0.6)),
            c_d=float(rng.uniform(0.5, 3 * N)) * c_a,
            c_a=c_a,
            c_fa=float(rng.uniform(1.0, 30.0)),
            p=float(rng.uniform(0.1, 0.9)),
        )


def matches_table_form(beta, form, s, N, beta_m):
    """Exact shape check of a defender vector against its declared family."""
    expected = np.zeros(N + 2)
    expected[s + 1:N + 1] = beta_m
    rest = 1.0 - (N - s) * beta_m
    if form == "TypeI":
        expected[N + 1] = rest
    elif form == "TypeII":
        expected[s] = rest
    elif form == "Coincident":
        if abs(rest) > 1e-12:
            return False
    else:
        return False
    return np.allclose(beta, expected, rtol=0, atol=1e-12)
