"""Reading diagrams and movies from user-supplied text and files."""

from __future__ import annotations

import json
from pathlib import Path

from .cobordism import Movie
from .diagram import Diagram, from_braid_closure, from_pd_code, parse_braid_text, parse_pd_text
from .errors import InputError


class BadInputFile(InputError):
    code = "bad_input_file"


def diagram_from_pd(text: str) -> Diagram:
    p = Path(text)
    if p.suffix == ".pd" and p.exists():
        from .fixtures import read_pd_file

        return from_pd_code(read_pd_file(p)[0])
    return from_pd_code(parse_pd_text(text))


def diagram_from_braid(text: str) -> Diagram:
    return from_braid_closure(parse_braid_text(text))


def knot_diagram(name: str) -> Diagram:
    """A fixture name such as ``4_1`` or a path to a ``.pd`` file."""
    p = Path(name)
    if p.suffix == ".pd" and p.exists():
        return diagram_from_pd(name)
    from .fixtures import load_knot

    return load_knot(name)


def read_json(path) -> dict:
    p = Path(path)
    if not p.exists():
        from .fixtures import MOVIES

        alt = MOVIES / f"{path}.movie.json"
        if alt.exists():
            p = alt
        else:
            raise BadInputFile(f"no such file: {path}")
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise BadInputFile(f"{path}: not valid JSON ({exc.msg}, line {exc.lineno})") from None


def read_movie(path) -> Movie:
    obj = read_json(path)
    if not isinstance(obj, dict):
        raise BadInputFile(f"{path}: a movie file holds a JSON object")
    return Movie.from_json(obj)
