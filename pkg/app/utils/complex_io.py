"""
Reader and writer for the plain-text complex format.

    # comment
    v <id> <type>
    t <id> <id> <id>
    e <id> <id>

Lines are order-insensitive. Output is sorted so equal complexes
produce identical files.
"""

import json
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, TextIO, Tuple, Union

from app.core.errors import ComplexFormatError
from app.services.sphere_geom import SpherePoint
from app.services.typed_complex import TypedComplex


def parse_complex(text: str) -> TypedComplex:
    vertex_types: Dict[str, int] = {}
    triangles: List[Tuple[str, ...]] = []
    edges: List[Tuple[str, ...]] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag, args = parts[0], parts[1:]
        if tag == "v":
            if len(args) != 2:
                raise ComplexFormatError(f"expected 'v <id> <type>', got {raw.strip()!r}", number)
            vid, vtype = args
            try:
                vertex_types[vid] = int(vtype)
            except ValueError:
                raise ComplexFormatError(f"vertex type {vtype!r} is not an integer", number)
        elif tag == "t":
            if len(args) != 3:
                raise ComplexFormatError(f"expected 't <id> <id> <id>', got {raw.strip()!r}", number)
            triangles.append(tuple(args))
        elif tag == "e":
            if len(args) != 2:
                raise ComplexFormatError(f"expected 'e <id> <id>', got {raw.strip()!r}", number)
            edges.append(tuple(args))
        else:
            raise ComplexFormatError(f"unknown record tag {tag!r}", number)

    return TypedComplex(vertex_types, triangles, edges)


def read_complex(path: Union[str, Path]) -> TypedComplex:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ComplexFormatError(f"cannot read {path}: {str(e)}")
    return parse_complex(text)


def format_complex(
    vertex_types: Mapping[str, int],
    triangles: Iterable[Iterable[str]] = (),
    edges: Iterable[Iterable[str]] = (),
    header: str = None,
) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    for vid in sorted(vertex_types):
        lines.append(f"v {vid} {vertex_types[vid]}")
    for tri in sorted(tuple(sorted(t)) for t in triangles):
        lines.append("t " + " ".join(tri))
    for edge in sorted(tuple(sorted(e)) for e in edges):
        lines.append("e " + " ".join(edge))
    return "\n".join(lines) + "\n"


def dump_complex(complex_: TypedComplex, header: str = None) -> str:
    return format_complex(complex_.vertex_types, complex_.triangles, complex_.raw_edges, header)


def write_text(text: str, path: Optional[Union[str, Path]], stream: TextIO = None) -> None:
    """Write to `path`, or to `stream` when no path is given"""
    if path:
        Path(path).write_text(text, encoding="utf-8")
    elif stream is not None:
        stream.write(text)


def sidecar_path(path: Union[str, Path], suffix: str) -> Path:
    path = Path(path)
    return path.with_name(path.name + suffix)


def format_coordinates(coordinates: Mapping[str, SpherePoint]) -> str:
    payload = {vid: [p.x, p.y, p.z] for vid, p in sorted(coordinates.items())}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def format_words(words: Mapping[str, Mapping]) -> str:
    return json.dumps(dict(sorted(words.items())), indent=2, sort_keys=True) + "\n"
