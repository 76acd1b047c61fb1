"""Reader and writer for the line-oriented ``.germ`` format.

    # comments run to the end of the line
    name = S1
    n = 2
    source = x, y
    target = Y1, Y2, Y3
    component = x
    component = y^2
    component = y^3 + x^2*y
    unfolding_param = u
    unfolding_component = x
    unfolding_component = y^2
    unfolding_component = y^3 + x^2*y + u*y

``unfolding_param`` may be repeated or hold a comma-separated list; when
present there must be exactly n+1 ``unfolding_component`` lines, written in
the parameters and the source variables.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import GermValidationError
from .germ import MapGerm, Unfolding
from .poly import ParseError, Ring, parse_poly

__all__ = ["GermFileError", "GermFile", "parse_germ_text", "read_germ", "format_germ"]

_KEYS = ("name", "n", "source", "target", "component", "unfolding_param", "unfolding_component")


class GermFileError(GermValidationError):
    """The file does not describe a germ in the expected format."""


@dataclass(frozen=True)
class GermFile:
    germ: MapGerm
    unfolding: Unfolding | None
    path: str | None = None


def _names(value: str, lineno: int) -> tuple[str, ...]:
    out = tuple(v.strip() for v in value.split(",") if v.strip())
    for v in out:
        if not (v[0].isalpha() or v[0] == "_") or not all(ch.isalnum() or ch == "_" for ch in v):
            raise GermFileError(f"line {lineno}: bad variable name {v!r}")
    if len(set(out)) != len(out):
        raise GermFileError(f"line {lineno}: repeated variable name")
    return out


def parse_germ_text(text: str, path: str | None = None) -> GermFile:
    where = path or "<text>"
    fields: dict[str, list[tuple[int, str]]] = {k: [] for k in _KEYS}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise GermFileError(f"{where}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in fields:
            raise GermFileError(f"{where}:{lineno}: unknown key {key!r}")
        fields[key].append((lineno, value))

    def single(key: str, required: bool = True):
        vals = fields[key]
        if len(vals) > 1:
            raise GermFileError(f"{where}:{vals[1][0]}: {key} given twice")
        if not vals:
            if required:
                raise GermFileError(f"{where}: missing '{key} = ...'")
            return None
        return vals[0]

    n_line = single("n")
    try:
        n = int(n_line[1])
    except ValueError:
        raise GermFileError(f"{where}:{n_line[0]}: n must be an integer") from None
    if n < 1:
        raise GermFileError(f"{where}:{n_line[0]}: n must be positive")
    src = _names(single("source")[1], single("source")[0])
    tgt = _names(single("target")[1], single("target")[0])
    if len(src) != n:
        raise GermFileError(f"{where}: source has {len(src)} variables, n = {n}")
    if len(tgt) != n + 1:
        raise GermFileError(f"{where}: target needs {n + 1} variables, got {len(tgt)}")
    comps = fields["component"]
    if len(comps) != n + 1:
        raise GermFileError(f"{where}: expected {n + 1} component lines, got {len(comps)}")
    S, T = Ring(src), Ring(tgt)
    polys = []
    for lineno, value in comps:
        try:
            polys.append(parse_poly(value, S))
        except ParseError as exc:
            raise GermFileError(f"{where}:{lineno}: {exc}") from None
    name_line = single("name", required=False)
    name = name_line[1] if name_line else None
    germ = MapGerm(S, T, tuple(polys), name)

    params: list[str] = []
    for lineno, value in fields["unfolding_param"]:
        params.extend(_names(value, lineno))
    ucomps = fields["unfolding_component"]
    unfolding = None
    if params or ucomps:
        if not params:
            raise GermFileError(f"{where}: unfolding components without unfolding_param")
        if len(ucomps) != n + 1:
            raise GermFileError(f"{where}: expected {n + 1} unfolding_component lines, got {len(ucomps)}")
        ring = Ring(tuple(params) + src)
        upolys = []
        for lineno, value in ucomps:
            try:
                upolys.append(parse_poly(value, ring))
            except ParseError as exc:
                raise GermFileError(f"{where}:{lineno}: {exc}") from None
        unfolding = Unfolding(germ, tuple(params), tuple(upolys), ring)
    return GermFile(germ, unfolding, path)


def read_germ(path: str | Path) -> GermFile:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise GermFileError(f"cannot read {p}: {exc}") from None
    return parse_germ_text(text, str(p))


def format_germ(gf: GermFile) -> str:
    f = gf.germ
    lines = []
    if f.name:
        lines.append(f"name = {f.name}")
    lines.append(f"n = {f.n}")
    lines.append("source = " + ", ".join(f.source.variables))
    lines.append("target = " + ", ".join(f.target.variables))
    lines += [f"component = {c}" for c in f.components]
    if gf.unfolding is not None:
        lines.append("unfolding_param = " + ", ".join(gf.unfolding.params))
        lines += [f"unfolding_component = {c}" for c in gf.unfolding.components]
    return "\n".join(lines) + "\n"
