"""Shipped knot diagrams and movies.

``knots/NAME.pd`` holds a PD code after ``# key: json`` metadata lines;
``movies/NAME.movie.json`` holds movies in the cobordism JSON format.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from ..diagram import Diagram, from_pd_code, parse_pd_text
from ..errors import InputError

_ROOT = Path(str(resources.files(__package__)))
KNOTS = _ROOT / "knots"
MOVIES = _ROOT / "movies"


class UnknownFixture(InputError):
    code = "unknown_fixture"


def read_pd_file(path) -> tuple:
    """(pd tuples, metadata dict) from a ``.pd`` file."""
    meta, body = {}, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].partition(":")
            try:
                meta[key.strip()] = json.loads(val)
            except json.JSONDecodeError:
                meta[key.strip()] = val.strip()
        elif line.strip():
            body.append(line)
    return parse_pd_text("\n".join(body)), meta


def list_knots():
    return sorted(p.stem for p in KNOTS.glob("*.pd"))


def knot_path(name: str) -> Path:
    p = KNOTS / f"{name}.pd"
    if not p.exists():
        raise UnknownFixture(f"no knot fixture named {name!r}; have {', '.join(list_knots())}")
    return p


def load_knot(name: str) -> Diagram:
    return from_pd_code(read_pd_file(knot_path(name))[0])


def knot_meta(name: str) -> dict:
    return read_pd_file(knot_path(name))[1]


def list_movies():
    return sorted(p.name[: -len(".movie.json")] for p in MOVIES.glob("*.movie.json"))


def movie_path(name: str) -> Path:
    p = MOVIES / f"{name}.movie.json"
    if not p.exists():
        raise UnknownFixture(f"no movie fixture named {name!r}")
    return p
