import math


def logistic(x: float) -> float:
    """1 / (1 + exp(-x)) without overflow for large |x|."""
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def hill_complement(x: float, half: float, gamma: float) -> float:
    """1 - x^g / (half^g + x^g), evaluated in log space; equals 1 for x <= 0."""
    if x <= 0:
        return 1.0
    return logistic(-gamma * (math.log(x) - math.log(half)))
