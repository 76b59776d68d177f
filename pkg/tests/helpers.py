from fractions import Fraction

from hypothesis import strategies as st

from insense import GameConfig


money_st = st.fractions(min_value=0, max_value=200, max_denominator=4)


@st.composite
def configs(draw, max_agents=5, max_rounds=5, max_threshold=60):
    m = draw(st.integers(2, max_agents))
    n = draw(st.integers(1, max_rounds))
    thresholds = draw(st.lists(st.integers(0, max_threshold), min_size=m, max_size=m))
    top = max(max(thresholds), 1) * m * n
    den = draw(st.sampled_from([1, 1, 2, 3]))
    budget = Fraction(draw(st.integers(0, 13 * top * den // 10)), den)
    return GameConfig(budget, n, thresholds)
