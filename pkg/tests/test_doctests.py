import doctest

import superpatterns.bounds
import superpatterns.dfa
import superpatterns.patterns
import superpatterns.walks


def test_module_doctests():
    for mod in (
        superpatterns.patterns,
        superpatterns.dfa,
        superpatterns.walks,
        superpatterns.bounds,
    ):
        result = doctest.testmod(mod)
        assert result.failed == 0, f"{mod.__name__}: {result}"
