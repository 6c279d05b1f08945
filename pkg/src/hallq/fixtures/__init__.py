"""Bundled quiver battery used by tests, docs and the CLI."""

from importlib import resources

from ..quiver import Quiver, parse_quiver

FIXTURE_NAMES = (
    "l1", "l2", "l3", "l4", "l5",
    "delta0", "delta1", "delta2", "delta3",
    "v42", "v53", "lambda42",
    "kronecker",
    "d4_in", "d4_out", "d4_two_in", "d4_one_in",
    "zigzag_a4",
    "q4", "q5", "q6", "q7", "q8",
    "union_l_delta", "union_v_lambda",
)


def fixture_text(name: str) -> str:
    return resources.files(__package__).joinpath(f"{name}.quiver").read_text()


def load_fixture(name: str) -> Quiver:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    return parse_quiver(fixture_text(name))
