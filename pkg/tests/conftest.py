import pytest

from rulesym import parse_rule

# Rules used throughout the worked examples.
RULES = {
    "zendo_r1": "zendo(A) :- piece(A,B), size(B,C), blue(B), small(C).",
    "zendo_r2": "zendo(A) :- piece(A,C), size(C,B), blue(C), small(B).",
    "zendo_red": "zendo(A) :- piece(A,C), size(C,B), red(C), large(B).",
    "zendo_red_swapped": "zendo(A) :- piece(A,B), size(B,C), red(B), large(C).",
    "ex4": "h(A,B) :- p(A,E), p(B,C), p(C,D).",
    "ex5_r2": "h(A,B) :- p(A,C), p(B,E), p(C,D).",
    "ex5_r3": "h(A,B) :- p(A,C), p(B,D), p(C,E).",
    "r8": "h(A,B) :- p(A,E), p(B,C), p(C,D).",
    "r10": "h(A,B) :- p(A,C), p(B,D), p(C,E).",
    "r11": "h(A,B) :- p(B,D), p(C,E), p(A,C), p(A,D).",
    "r12": "h(A,B) :- p(B,C), p(D,E), p(A,C), p(A,D).",
    "r13": "h(A) :- w(A,B), q(B), m(B,C), s(C), p(C).",
}


@pytest.fixture(scope="session")
def rules():
    return {name: parse_rule(text) for name, text in RULES.items()}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
