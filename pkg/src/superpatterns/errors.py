"""Exception types shared across the package.

Domain errors (bad values, mismatched alphabets, malformed automata) are
ValueError subclasses; blowing past an enumeration cap is a distinct
ResourceLimitError so callers (and the CLI exit codes) can tell "you asked
for something nonsensical" apart from "you asked for something too big".
"""


class ResourceLimitError(RuntimeError):
    """An enumeration would exceed its configured cap (k! loops, r^n word
    spaces, full state tables). Raise instead of silently truncating."""


class AlphabetMismatchError(ValueError):
    """A word's declared alphabet does not match what the operation needs."""


class CheapeningError(ValueError):
    """No cost row of the given automaton admits a dominating permutation."""
