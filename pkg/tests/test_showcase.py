import pytest

from cremona.showcase import EXAMPLES, run_example, sigma3_quartic
from cremona.polycore import Ring

PASSING = [name for name in EXAMPLES if name != "ex-rnc"]


@pytest.mark.parametrize("name", PASSING)
def test_example_passes(name):
    rep = run_example(name)
    assert rep.checks
    assert rep.passed, [c.name for c in rep.checks if not c.passed]


def test_rnc_example_at_n4_passes():
    assert run_example("ex-rnc", n=4).passed


def test_rnc_example_at_n6_reports_the_failed_hankel_check():
    rep = run_example("ex-rnc", n=6)
    failed = [c.name for c in rep.checks if not c.passed]
    assert len(failed) == 1 and "Hankel" in failed[0]


def test_unknown_example_lists_registry():
    with pytest.raises(KeyError) as exc:
        run_example("nope")
    assert "ex-seg" in str(exc.value)


def test_sigma3_quartic_has_the_displayed_shape():
    q = sigma3_quartic(Ring())
    assert q.degree() == 4
    # 3 + 3 + 1 + 3 squared and mixed terms, plus x_7^2
    assert len(q) == 11


def test_report_serializes():
    d = run_example("ex-tp").to_dict()
    assert d["passed"] is True and d["example"] == "ex-tp"
