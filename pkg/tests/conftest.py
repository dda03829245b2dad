import random
from pathlib import Path

from hypothesis import settings

settings.register_profile("repro", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("repro")

DATA = Path(__file__).parent / "data"
FIELD_CORPUS = sorted((DATA / "fields").glob("*.ini"))

_LEAVES = ["t", "x1", "x2", "x3", "a", "b", "2", "1/3", "0.5", "7"]
_FUNCS = ["sin", "cos", "exp"]
_OPS = ["+", "-", "*", "/", "^"]


def random_expr_text(rng: random.Random, depth: int = 4) -> str:
    """Random well-formed expression text in the field grammar."""
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(_LEAVES)
    pick = rng.random()
    if pick < 0.15:
        return f"-{random_expr_text(rng, depth - 1)}"
    if pick < 0.3:
        return f"{rng.choice(_FUNCS)}({random_expr_text(rng, depth - 1)})"
    if pick < 0.4:
        return f"({random_expr_text(rng, depth - 1)})"
    op = rng.choice(_OPS)
    if op == "^":
        return f"{random_expr_text(rng, depth - 1)}^{rng.choice(['2', '3', '1/2'])}"
    return f"{random_expr_text(rng, depth - 1)} {op} {random_expr_text(rng, depth - 1)}"


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=_criterion_key):
            terminalreporter.write_line(line)


def _criterion_key(line: str):
    label = line.split()[1].rstrip(":")
    return int(label.rstrip("ab")), label
