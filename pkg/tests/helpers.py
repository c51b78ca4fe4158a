from sepsys.core import validate_system


def ids(S, *labels):
    return frozenset(S.index[x] for x in labels)


def e2_system():
    """r below both orientations of s."""
    return validate_system(["r", "r*", "s", "s*"], [("r", "r*"), ("s", "s*")], [("r", "s"), ("r", "s*")])
