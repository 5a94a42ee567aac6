"""Shared test utilities."""

from __future__ import annotations

import io
import json
from contextlib import redirect_stderr, redirect_stdout

from efxcheck.cli import main


def run_cli(argv: list[str]) -> tuple[int, str, str]:
    """Run the CLI in-process; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def identical_agents_doc() -> str:
    """Template with every pair rank 1 and no exceptional triples: three
    indifferent agents that only distinguish empty from nonempty."""
    from efxcheck.ordinal import builtin_template, serialize_template

    doc = json.loads(serialize_template(builtin_template()))
    for row in doc["pair_ranks"].values():
        for key in row:
            row[key] = 1
    doc["exceptional"] = []
    return json.dumps(doc)


def mutated_pair_doc(first: str, second: str, rank: int) -> str:
    """Built-in template with one pair-rank cell overridden."""
    from efxcheck.ordinal import builtin_template, serialize_template

    doc = json.loads(serialize_template(builtin_template()))
    row = doc["pair_ranks"].setdefault(first, {})
    row[second] = rank
    return json.dumps(doc)
