"""Default search budgets, overridable through the CRTKIT_BUDGET variable."""

import os

# Candidate target tuples a brute-force CR search may examine.
DEFAULT_TUPLE_BUDGET = 10**7
# Congruences the join-closure of principal congruences may collect.
DEFAULT_CONGRUENCE_BUDGET = 100_000
# Down-sets the bounded enumeration in the Tarski decider may visit.
DEFAULT_DOWNSET_BUDGET = 2**16


def budget(default: int) -> int:
    """Return `default`, or the CRTKIT_BUDGET override when set and positive."""
    raw = os.environ.get("CRTKIT_BUDGET")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return value if value > 0 else default
