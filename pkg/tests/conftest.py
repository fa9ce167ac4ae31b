import os

from hypothesis import HealthCheck, settings, strategies as st

from triramsey.graph import Graph

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def graphs(draw, min_n=0, max_n=8, p=None):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if p is None:
        chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        chosen = [draw(st.floats(0, 1)) < p for _ in pairs]
    return Graph(n, [e for e, keep in zip(pairs, chosen) if keep])
