"""Small systems with hand-checked outcomes, shared by several test modules."""

from fmplex.core import LinearConstraint, Relation

# FM over x1, x2 gives three rows in x3, the first redundant by construction
REDUNDANT_FM = [((1, 1, 1), 0), ((1, -1, 1), 0), ((-1, 1, 1), 1), ((-1, -1, 1), 1)]

# two lower and two upper bounds on x2
TWO_BY_TWO = [((-1, -1), -4), ((0, -2), -2), ((-2, 1), 1), ((0, 1), 5)]

# TWO_BY_TWO plus x2 >= 0; designating that row gives a local conflict
WITH_NONNEG = TWO_BY_TWO + [((0, -1), 0)]

# unsatisfiable; variant C backjumps out of two sub-trees before the level-0 conflict
BACKJUMP = [((1, -1, -1), 0), ((0, 0, -1), 0), ((0, -1, 1), 0), ((-1, 1, 0), -1), ((1, 0, 0), -1)]

# x1 > 0 and x1 = x2 written as two weak rows; satisfiable
STRICT_TRAP = [
    LinearConstraint((-1, 0), Relation.LT, 0),
    LinearConstraint((-1, 1), Relation.LEQ, 0),
    LinearConstraint((1, -1), Relation.LEQ, 0),
]


def scripted(steps):
    """Heuristic that replays ``(variable, side)`` choices, candidates in row order."""
    it = iter(steps)

    def choose(choices, system):
        j, side = next(it)
        choice = next(c for c in choices if c.variable == j and c.side == side)
        return choice, choice.candidates

    return choose


BACKJUMP_SCRIPT = [(2, "lower"), (1, "lower"), (0, "lower"), (0, "lower")]
